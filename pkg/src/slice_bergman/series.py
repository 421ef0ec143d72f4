"""Slice regular functions on the unit ball as truncated power series.

A series stores quaternion coefficients a_0..a_n and represents
f(q) = sum q^n a_n (powers on the left).  Restricted to the slice C(i) of a
frame (i, j) it splits as f1 + f2 j with f1, f2 holomorphic; the complex
coefficients of f1 and f2 are stored as plain ``complex128`` arrays, so the
same data can be re-embedded along any frame.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .quaternion import (
    E1,
    Frame,
    as_quat,
    embed,
    frame_coords,
    norm,
    quat_mul,
    slice_decompose,
    slice_point,
)

DEFAULT_DEGREE = 16


class OutOfDomainError(ValueError):
    """Evaluation point outside the open unit ball."""


def _pad(a, length):
    out = np.zeros((length,) + a.shape[1:], dtype=a.dtype)
    out[: a.shape[0]] = a
    return out


@dataclass(frozen=True, eq=False)
class SliceRegularSeries:
    """Truncated series sum q^n a_n with degree cap ``cap``.

    ``truncated`` is set by products that had to drop terms above the cap.
    """

    coeffs: np.ndarray
    cap: int = DEFAULT_DEGREE
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.ndim == 1 and c.size == 0:
            c = np.zeros((1, 4))
        if c.ndim != 2 or c.shape[1] != 4:
            raise ValueError(f"coefficients must have shape (n, 4), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if self.cap < 0:
            raise ValueError("degree cap must be non-negative")
        if c.shape[0] > self.cap + 1:
            raise ValueError(f"{c.shape[0]} coefficients exceed degree cap {self.cap}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, cap=DEFAULT_DEGREE):
        return cls(np.zeros((1, 4)), cap)

    @classmethod
    def constant(cls, a, cap=DEFAULT_DEGREE):
        return cls(np.asarray(a, dtype=np.float64)[None, :], cap)

    @classmethod
    def monomial(cls, n, a=(1.0, 0.0, 0.0, 0.0), cap=DEFAULT_DEGREE):
        c = np.zeros((n + 1, 4))
        c[n] = a
        return cls(c, cap)

    @classmethod
    def random(cls, rng, degree=DEFAULT_DEGREE, cap=None):
        """Coefficients i.i.d. uniform in the closed unit 4-ball."""
        from .quaternion import random_quaternion_ball

        cap = degree if cap is None else cap
        return cls(random_quaternion_ball(rng, degree + 1), cap)

    @property
    def degree(self):
        nz = np.flatnonzero(np.any(self.coeffs != 0.0, axis=1))
        return int(nz[-1]) if nz.size else 0

    def padded(self, length=None):
        return _pad(self.coeffs, self.cap + 1 if length is None else length)

    def __call__(self, q):
        return evaluate(self, q)

    def __add__(self, other):
        cap = max(self.cap, other.cap)
        n = max(len(self.coeffs), len(other.coeffs))
        return SliceRegularSeries(_pad(self.coeffs, n) + _pad(other.coeffs, n), cap)

    def __sub__(self, other):
        cap = max(self.cap, other.cap)
        n = max(len(self.coeffs), len(other.coeffs))
        return SliceRegularSeries(_pad(self.coeffs, n) - _pad(other.coeffs, n), cap)

    def __neg__(self):
        return SliceRegularSeries(-self.coeffs, self.cap)

    def right_mul(self, c):
        """The series f c (constant quaternion on the right)."""
        return SliceRegularSeries(quat_mul(self.coeffs, np.asarray(c, dtype=np.float64)), self.cap)

    def __eq__(self, other):
        if not isinstance(other, SliceRegularSeries):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return bool(np.array_equal(_pad(self.coeffs, n), _pad(other.coeffs, n)))

    __hash__ = None

    def max_coeff_diff(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return float(np.max(np.abs(_pad(self.coeffs, n) - _pad(other.coeffs, n))))

    def allclose(self, other, atol=1e-12):
        return self.max_coeff_diff(other) <= atol

    def __repr__(self):
        return f"SliceRegularSeries(degree={self.degree}, cap={self.cap})"


@dataclass(frozen=True, eq=False)
class SplitPair:
    """f1 + f2 j on the slice of ``frame``; f1, f2 as complex coefficients."""

    f1: np.ndarray
    f2: np.ndarray
    frame: Frame
    cap: int = DEFAULT_DEGREE

    def __post_init__(self):
        n = max(len(np.atleast_1d(self.f1)), len(np.atleast_1d(self.f2)))
        f1 = _pad(np.atleast_1d(np.asarray(self.f1, dtype=np.complex128)), n)
        f2 = _pad(np.atleast_1d(np.asarray(self.f2, dtype=np.complex128)), n)
        if n > self.cap + 1:
            raise ValueError(f"{n} coefficients exceed degree cap {self.cap}")
        f1.setflags(write=False)
        f2.setflags(write=False)
        object.__setattr__(self, "f1", f1)
        object.__setattr__(self, "f2", f2)

    def evaluate(self, z):
        """Slice value f1(z) + f2(z) j at abstract complex points z."""
        z = np.asarray(z, dtype=np.complex128)
        v1 = np.polynomial.polynomial.polyval(z, self.f1)
        v2 = np.polynomial.polynomial.polyval(z, self.f2)
        return embed(v1, self.frame.i) + quat_mul(embed(v2, self.frame.i), self.frame.j)


def _check_ball(q):
    if np.any(norm(q) >= 1.0):
        raise OutOfDomainError("evaluation point lies outside the open unit ball")


def evaluate(f, q):
    """f(q) = sum q^n a_n for q (or a stack of q) in the open unit ball."""
    q = as_quat(q)
    _check_ball(q)
    return _kernels.series_eval(f.coeffs, q)


def evaluate_unchecked(f, q):
    """Same sum without the domain check (used on the closed slice disk)."""
    return _kernels.series_eval(f.coeffs, np.asarray(q, dtype=np.float64))


def cullen_derivative(f):
    c = f.coeffs
    if len(c) == 1:
        return SliceRegularSeries.zero(f.cap)
    n = np.arange(1, len(c), dtype=np.float64)
    return SliceRegularSeries(c[1:] * n[:, None], f.cap)


def star_product(f, g):
    """Coefficient convolution c_n = sum a_k b_{n-k}, truncated at the cap.

    The result's ``truncated`` flag reports dropped nonzero terms.
    """
    cap = max(f.cap, g.cap)
    full = _kernels.quat_convolve(
        f.coeffs[: f.degree + 1], g.coeffs[: g.degree + 1], f.degree + g.degree
    )
    dropped = bool(np.any(full[cap + 1 :] != 0.0))
    return SliceRegularSeries(full[: cap + 1], cap, truncated=dropped)


def split(f, fr):
    """Q_{i,j}: coefficients a_n = alpha_n + beta_n j with alpha, beta in C(i)."""
    d = frame_coords(f.coeffs, fr)
    return SplitPair(d[:, 0] + 1j * d[:, 1], d[:, 2] + 1j * d[:, 3], fr, f.cap)


def extend(sp):
    """P_{i,j}: the slice regular series whose split along ``sp.frame`` is sp."""
    a = embed(sp.f1, sp.frame.i) + quat_mul(embed(sp.f2, sp.frame.i), sp.frame.j)
    return SliceRegularSeries(a.reshape(-1, 4), sp.cap)


def extend_pointwise(g, q, fr):
    """Evaluate P_{i,j}[g](q) straight from the slice function ``g``.

    ``g`` maps abstract complex points to quaternions on C(fr.i); uses
    P[g](x + I y) = 1/2[(1 + I i) g(x - y i) + (1 - I i) g(x + y i)].
    """
    x, y, axis = slice_decompose(q, E1)
    x = np.asarray(x)
    z = x + 1j * np.asarray(y)
    g_minus = np.asarray(g(np.conj(z)), dtype=np.float64)
    g_plus = np.asarray(g(z), dtype=np.float64)
    ii = quat_mul(axis, np.broadcast_to(fr.i, np.shape(axis)))
    one = np.zeros_like(ii)
    one[..., 0] = 1.0
    return 0.5 * (quat_mul(one + ii, g_minus) + quat_mul(one - ii, g_plus))


def representation_formula(g, x, y, axis, i):
    """f(x + axis y) rebuilt from values of f on the slice C(i).

    ``g`` maps quaternions of C(i) to quaternions.  Implements
    1/2[g(x+iy) + g(x-iy)] + 1/2 axis i [g(x-iy) - g(x+iy)].
    """
    plus = np.asarray(g(slice_point(x, y, i)), dtype=np.float64)
    minus = np.asarray(g(slice_point(x, -np.asarray(y), i)), dtype=np.float64)
    ai = quat_mul(axis, np.broadcast_to(i, np.shape(axis)))
    return 0.5 * (plus + minus) + 0.5 * quat_mul(ai, minus - plus)


@dataclass(frozen=True)
class DComponents:
    """The four real components D1..D4 of Q_{i,j}[f] on the slice disk.

    D1 + i D2 = f1 and D3 + i D4 = f2, so each Dk is the real or imaginary
    part of a holomorphic polynomial; ``__call__`` samples all four.
    """

    f1: np.ndarray
    f2: np.ndarray
    frame: Frame

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        v1 = np.polynomial.polynomial.polyval(z, self.f1)
        v2 = np.polynomial.polynomial.polyval(z, self.f2)
        return np.stack((v1.real, v1.imag, v2.real, v2.imag), axis=-1)

    def reassemble(self, z):
        """D1 + D2 i + D3 j + D4 ij at the slice points z."""
        return self(z) @ self.frame.basis()


def d_components(f, fr):
    sp = split(f, fr)
    return DComponents(sp.f1, sp.f2, fr)


def _complex_product(a, b, cap):
    return np.convolve(a, b)[: cap + 1]


def bullet_product(f, g, fr):
    """f . g = P[f1 g1 + f2 g2 j] along ``fr``, taken literally.

    The cross terms of the usual slice product are absent, so this is not
    the star product unless both f2 and g2 vanish.
    """
    sf = split(f, fr)
    sg = split(g, fr)
    cap = max(f.cap, g.cap)
    return extend(
        SplitPair(
            _complex_product(sf.f1, sg.f1, cap),
            _complex_product(sf.f2, sg.f2, cap),
            fr,
            cap,
        )
    )
