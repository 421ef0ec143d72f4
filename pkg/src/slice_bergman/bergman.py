"""The slice Bergman space of the unit ball.

Integrals over a slice disk use a tensor-product rule: Gauss-Legendre in the
radius (weight r dr on [0, 1]) times a uniform angular grid.  Each quadrature
route has a closed-form coefficient twin used as its oracle:

* <f, g> = sum pi/(n+1) conj(a_n) b_n
* B[z^n zbar^m c] = (n-m+1)/(n+1) z^(n-m) c for n >= m, else 0
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .quaternion import (
    Frame,
    conj,
    embed,
    frame_coords,
    quat_mul,
    slice_point,
)
from .series import DEFAULT_DEGREE, SliceRegularSeries, evaluate_unchecked

DEFAULT_N_R = 32
DEFAULT_N_THETA = 128


class IntegrationError(ArithmeticError):
    """Non-finite integrand samples."""


class SliceMismatchError(ValueError):
    """Operands live on different slices."""


@dataclass(frozen=True, eq=False)
class DiskQuadrature:
    """Polar product rule on the unit disk.

    Exact on z^n zbar^m whenever n + m <= 2 n_r - 2 and |n - m| < n_theta.
    """

    n_r: int = DEFAULT_N_R
    n_theta: int = DEFAULT_N_THETA
    z: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_r < 1 or self.n_theta < 1:
            raise ValueError("node counts must be positive")
        t, w = np.polynomial.legendre.leggauss(self.n_r)
        r = 0.5 * (t + 1.0)
        wr = 0.5 * w * r
        theta = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        wt = np.full(self.n_theta, 2.0 * np.pi / self.n_theta)
        z = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
        weights = (wr[:, None] * wt[None, :]).ravel()
        z.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "weights", weights)

    def slice_points(self, axis):
        """Nodes as quaternions x + y*axis."""
        return slice_point(self.z.real, self.z.imag, axis)

    def is_exact_for(self, degree):
        """Whether products conj(f) g of two degree-``degree`` series integrate exactly."""
        return 2 * degree <= 2 * self.n_r - 2 and degree < self.n_theta

    def config(self):
        return {"n_r": self.n_r, "n_theta": self.n_theta}


_DEFAULT_QUAD = None


def default_quadrature():
    global _DEFAULT_QUAD
    if _DEFAULT_QUAD is None:
        _DEFAULT_QUAD = DiskQuadrature()
    return _DEFAULT_QUAD


def disk_integrate(g, quad=None):
    """Integral of ``g`` over the unit disk with respect to area.

    ``g`` receives the complex node array and returns quaternion samples of
    shape (M, 4), or real/complex samples of shape (M,) which are read as
    w or w + x e1.
    """
    quad = quad or default_quadrature()
    v = np.asarray(g(quad.z))
    if v.ndim == 1:
        vq = np.zeros((v.shape[0], 4))
        vq[:, 0] = v.real
        if np.iscomplexobj(v):
            vq[:, 1] = v.imag
        v = vq
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise IntegrationError("integrand produced non-finite samples")
    return _kernels.weighted_sum(v, quad.weights)


def _slice_values(f, axis, quad):
    return evaluate_unchecked(f, quad.slice_points(axis))


def bergman_inner(f, g, i, quad=None):
    """<f, g> = integral over D of conj(f(x+iy)) g(x+iy), conjugate-linear in f."""
    quad = quad or default_quadrature()
    vf = _slice_values(f, i, quad)
    vg = _slice_values(g, i, quad)
    prod = quat_mul(conj(vf), vg)
    if not np.all(np.isfinite(prod)):
        raise IntegrationError("integrand produced non-finite samples")
    return _kernels.weighted_sum(prod, quad.weights)


def bergman_norm(f, i, quad=None):
    return math.sqrt(max(float(bergman_inner(f, f, i, quad)[0]), 0.0))


def bergman_inner_closed(f, g):
    """Slice-independent coefficient formula sum pi/(n+1) conj(a_n) b_n."""
    n = min(len(f.coeffs), len(g.coeffs))
    w = np.pi / np.arange(1, n + 1)
    return np.sum(quat_mul(conj(f.coeffs[:n]), g.coeffs[:n]) * w[:, None], axis=0)


def bergman_norm_closed(f):
    w = np.pi / np.arange(1, len(f.coeffs) + 1)
    return math.sqrt(float(np.sum(np.sum(f.coeffs**2, axis=1) * w)))


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


def _quat_powers(q, n):
    out = np.empty((n + 1, 4))
    out[0] = (1.0, 0.0, 0.0, 0.0)
    for k in range(1, n + 1):
        out[k] = quat_mul(q, out[k - 1])
    return out


def kernel_function(q, degree=DEFAULT_DEGREE):
    """K_q as a series: K_q(z) = sum z^n (n+1)/pi conj(q)^n.

    It represents point evaluation: <K_q, f> = f(q) for deg f <= degree.
    """
    q = np.asarray(q, dtype=np.float64)
    c = _quat_powers(conj(q), degree) * (np.arange(1, degree + 2) / np.pi)[:, None]
    return SliceRegularSeries(c, degree)


def kernel_eval(q, z, degree=DEFAULT_DEGREE):
    """Truncated kernel K(q, z) = sum (n+1)/pi q^n conj(z)^n.

    This is conj(K_q(z)), the factor that multiplies f(z) inside the
    projection integral.
    """
    q = np.asarray(q, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    qp = _quat_powers(q, degree)
    zp = _quat_powers(conj(z), degree)
    scale = np.arange(1, degree + 2) / np.pi
    return np.sum(quat_mul(qp, zp) * scale[:, None], axis=0)


def kernel_extend(x, y, k, r, i, degree=DEFAULT_DEGREE):
    """Kernel at x + y k from its values on the slice C(i).

    1/2 (1 - k i) K(x + y i, r) + 1/2 (1 + k i) K(x - y i, r); the second
    term uses x - y i as the representation formula requires.
    """
    k = np.asarray(k, dtype=np.float64)
    ki = quat_mul(k, i)
    one = np.array([1.0, 0.0, 0.0, 0.0])
    plus = kernel_eval(slice_point(x, y, i), r, degree)
    minus = kernel_eval(slice_point(x, -y, i), r, degree)
    return 0.5 * quat_mul(one - ki, plus) + 0.5 * quat_mul(one + ki, minus)


# ---------------------------------------------------------------------------
# functions sampled on one slice
# ---------------------------------------------------------------------------


def _parse_exponent_key(key):
    if isinstance(key, str):
        parts = key.strip().strip("()").split(",")
        if len(parts) != 2:
            raise ValueError(f"bad exponent key {key!r}")
        key = (int(parts[0]), int(parts[1]))
    n, m = (int(key[0]), int(key[1]))
    if n < 0 or m < 0:
        raise ValueError(f"negative exponent in {key!r}")
    return n, m


@dataclass(frozen=True, eq=False)
class SliceSampledFunction:
    """f(z) = sum z^n zbar^m c_{n,m} on the closed disk of the slice C(frame.i).

    ``terms`` maps (n, m) to a quaternion coefficient; string keys such as
    ``"(1,1)"`` are accepted.
    """

    slice_frame: Frame
    terms: dict

    def __post_init__(self):
        clean = {}
        for key, c in dict(self.terms).items():
            nm = _parse_exponent_key(key)
            c = np.asarray(c, dtype=np.float64)
            if c.shape != (4,) or not np.all(np.isfinite(c)):
                raise ValueError(f"coefficient for {nm} must be 4 finite reals")
            clean[nm] = clean.get(nm, 0.0) + c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_series(cls, f, frame):
        return cls(frame, {(n, 0): a for n, a in enumerate(f.coeffs)})

    @classmethod
    def constant(cls, c, frame):
        return cls(frame, {(0, 0): c})

    @property
    def axis(self):
        return self.slice_frame.i

    def max_degree(self):
        return max((n + m for n, m in self.terms), default=0)

    def __call__(self, z):
        """Quaternion values at abstract complex points z (|z| <= 1)."""
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape + (4,))
        for (n, m), c in self.terms.items():
            mono = z**n * np.conj(z) ** m
            out += quat_mul(embed(mono, self.axis), c)
        return out

    def times(self, other):
        """Exact pointwise product self(z) other(z), as another term map.

        Splits each coefficient as c1 + c2 j with c1, c2 in C(i) and uses
        j z = conj(z) j on the slice.
        """
        _require_same_slice(self, other)
        fr = self.slice_frame
        out = {}
        for (n, m), c in self.terms.items():
            d = frame_coords(c, fr)
            c1 = embed(d[0] + 1j * d[1], fr.i)
            c2j = quat_mul(embed(d[2] + 1j * d[3], fr.i), fr.j)
            for (p, s), b in other.terms.items():
                for key, a in (((n + p, m + s), c1), ((n + s, m + p), c2j)):
                    out[key] = out.get(key, np.zeros(4)) + quat_mul(a, b)
        return SliceSampledFunction(fr, out)


def _require_same_slice(a, b, tol=1e-12):
    if np.max(np.abs(a.axis - b.axis)) > tol:
        raise SliceMismatchError("operands are sampled on different slices")


def bergman_project(f, quad=None, degree=DEFAULT_DEGREE):
    """B_i[f] from quadrature: a_p = (p+1)/pi * integral conj(z)^p f(z)."""
    quad = quad or default_quadrature()
    return _project_samples(f(quad.z), f.axis, quad, degree)


def _project_samples(vals, axis, quad, degree):
    if not np.all(np.isfinite(vals)):
        raise IntegrationError("integrand produced non-finite samples")
    zbar = np.conj(quad.z)
    coeffs = np.empty((degree + 1, 4))
    power = np.ones_like(zbar)
    for p in range(degree + 1):
        weighted = quat_mul(embed(power, axis), vals)
        coeffs[p] = (p + 1) / np.pi * _kernels.weighted_sum(weighted, quad.weights)
        power = power * zbar
    return SliceRegularSeries(coeffs, degree)


def bergman_project_closed(f, degree=DEFAULT_DEGREE):
    """Monomial formula B[z^n zbar^m c] = (n-m+1)/(n+1) z^(n-m) c (n >= m)."""
    coeffs = np.zeros((degree + 1, 4))
    for (n, m), c in f.terms.items():
        p = n - m
        if 0 <= p <= degree:
            coeffs[p] += (p + 1) / (n + 1) * c
    return SliceRegularSeries(coeffs, degree)


def toeplitz(side, alpha, f, quad=None, degree=DEFAULT_DEGREE):
    """Left (B[alpha f]) or right (B[f alpha]) Toeplitz operator.

    The pointwise product is formed at the quadrature nodes.
    """
    _require_same_slice(alpha, f)
    quad = quad or default_quadrature()
    if side == "left":
        vals = quat_mul(alpha(quad.z), f(quad.z))
    elif side == "right":
        vals = quat_mul(f(quad.z), alpha(quad.z))
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return _project_samples(vals, f.axis, quad, degree)


def toeplitz_closed(side, alpha, f, degree=DEFAULT_DEGREE):
    """Toeplitz operator through the exact term product and monomial formula."""
    prod = alpha.times(f) if side == "left" else f.times(alpha)
    return bergman_project_closed(prod, degree)
