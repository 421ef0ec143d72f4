"""Quaternion algebra, unit spheres, frames and the rotation action.

Quaternions are plain float64 numpy arrays whose last axis holds
(w, x, y, z) for q = w + x e1 + y e2 + z e3, with e1 e2 = e3.  All functions
broadcast over leading axes.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

UNIT_TOL = 1e-12
PARALLEL_TOL = 1e-8

ONE = np.array([1.0, 0.0, 0.0, 0.0])
E1 = np.array([0.0, 1.0, 0.0, 0.0])
E2 = np.array([0.0, 0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 0.0, 1.0])
for _c in (ONE, E1, E2, E3):
    _c.setflags(write=False)


class QuaternionDomainError(ValueError):
    """Raised for operations outside their domain (e.g. inverting zero)."""


def quat(w=0.0, x=0.0, y=0.0, z=0.0):
    return np.array([w, x, y, z], dtype=np.float64)


def as_quat(q):
    q = np.asarray(q, dtype=np.float64)
    if q.shape[-1:] != (4,):
        raise ValueError(f"expected trailing axis of length 4, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("quaternion components must be finite")
    return q


def imag(v):
    """Pure imaginary quaternion from a 3-vector."""
    v = np.asarray(v, dtype=np.float64)
    return np.concatenate((np.zeros(v.shape[:-1] + (1,)), v), axis=-1)


def vec(q):
    return np.asarray(q)[..., 1:]


def quat_mul(p, q):
    """Hamilton product p q."""
    return _kernels.qmul(p, q)


def conj(q):
    q = np.asarray(q, dtype=np.float64)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def norm(q):
    return np.linalg.norm(np.asarray(q, dtype=np.float64), axis=-1)


def inv(q):
    q = np.asarray(q, dtype=np.float64)
    n2 = np.sum(q * q, axis=-1)
    if np.any(n2 == 0.0):
        raise QuaternionDomainError("the zero quaternion has no inverse")
    return conj(q) / n2[..., None]


def quat_conj_norm_inv(q):
    """Return ``(conj(q), |q|, q^-1)``; raises for q = 0."""
    q = as_quat(q)
    return conj(q), norm(q), inv(q)


def slice_decompose(q, default_axis=E1):
    """Write q = x + I y with y >= 0 and I a unit imaginary.

    Real points have no preferred axis, so ``default_axis`` is returned there.
    Works row-wise on stacked input.
    """
    q = np.asarray(q, dtype=np.float64)
    x = q[..., 0]
    v = q[..., 1:]
    y = np.linalg.norm(v, axis=-1)
    real = y == 0.0
    axis = np.where(
        real[..., None],
        np.asarray(default_axis, dtype=np.float64),
        imag(v / np.where(real, 1.0, y)[..., None]),
    )
    return x, y, axis


def slice_point(x, y, axis):
    """The quaternion x + axis*y (axis a unit imaginary)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = np.asarray(axis, dtype=np.float64) * y[..., None]
    out = out + x[..., None] * ONE
    return out


def embed(c, axis):
    """Embed complex numbers a + ib into C(axis) as a + b*axis."""
    c = np.asarray(c, dtype=np.complex128)
    return slice_point(c.real, c.imag, axis)


def is_unit_imaginary(q, tol=UNIT_TOL):
    q = np.asarray(q, dtype=np.float64)
    return bool(abs(q[0]) <= tol and abs(norm(q) - 1.0) <= tol)


def rotate(v, q):
    """q -> v q conj(v)."""
    return quat_mul(quat_mul(v, q), conj(v))


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered orthonormal pair (i, j) of unit imaginaries, co-oriented with
    (e1, e2, e3) through (i, j, ij).

    Build through :meth:`from_vectors` to get Gram-Schmidt normalisation;
    the raw constructor only validates.
    """

    i: np.ndarray
    j: np.ndarray

    def __post_init__(self):
        i = as_quat(self.i).copy()
        j = as_quat(self.j).copy()
        i.setflags(write=False)
        j.setflags(write=False)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        if not (is_unit_imaginary(i) and is_unit_imaginary(j)):
            raise ValueError("frame entries must be unit imaginary quaternions")
        if abs(float(np.dot(i[1:], j[1:]))) > UNIT_TOL:
            raise ValueError("frame entries must be orthogonal")
        if np.linalg.det(np.stack((i[1:], j[1:], self.ij[1:]))) <= 0.0:
            raise ValueError("frame is not co-oriented with the standard basis")

    @classmethod
    def from_vectors(cls, i, j):
        """Gram-Schmidt on the vector parts of ``i`` and ``j``."""
        a = np.asarray(i, dtype=np.float64)
        b = np.asarray(j, dtype=np.float64)
        a = a[1:] if a.shape == (4,) else a
        b = b[1:] if b.shape == (4,) else b
        na = np.linalg.norm(a)
        if na == 0.0:
            raise ValueError("first frame vector is zero")
        a = a / na
        nb = np.linalg.norm(b)
        if nb == 0.0 or np.linalg.norm(np.cross(a, b / nb)) < PARALLEL_TOL:
            raise ValueError("frame vectors are parallel")
        b = b - np.dot(a, b) * a
        b = b / np.linalg.norm(b)
        return cls(imag(a), imag(b))

    @classmethod
    def standard(cls):
        return cls(E1, E2)

    @property
    def ij(self):
        return quat_mul(self.i, self.j)

    def basis(self):
        """The real basis (1, i, j, ij) as a (4, 4) array of rows."""
        return np.stack((ONE, self.i, self.j, self.ij))

    def as_vector(self):
        """Point of R^6 (vector parts of i then j)."""
        return np.concatenate((self.i[1:], self.j[1:]))

    def distance(self, other):
        return float(np.linalg.norm(self.as_vector() - other.as_vector()))

    def allclose(self, other, atol=UNIT_TOL):
        return bool(np.allclose(self.as_vector(), other.as_vector(), rtol=0.0, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return bool(np.array_equal(self.i, other.i) and np.array_equal(self.j, other.j))

    __hash__ = None

    def __repr__(self):
        return f"Frame(i={self.i[1:].tolist()}, j={self.j[1:].tolist()})"


def frame_rotate(v, f):
    """R_v(i, j) = (v i conj(v), v j conj(v))."""
    v = as_quat(v)
    i = rotate(v, f.i)
    j = rotate(v, f.j)
    # kill round-off in the real part so the result validates as a Frame
    i[0] = 0.0
    j[0] = 0.0
    i /= norm(i)
    j = j - np.dot(i[1:], j[1:]) * i
    j /= norm(j)
    return Frame(i, j)


def frame_coords(q, f):
    """Real coordinates (d1, d2, d3, d4) of q in the basis (1, i, j, ij).

    Stacked input returns an array with trailing axis 4.
    """
    q = np.asarray(q, dtype=np.float64)
    d1 = q[..., 0]
    d2 = -quat_mul(q, f.i)[..., 0]
    d3 = -quat_mul(q, f.j)[..., 0]
    d4 = quat_mul(quat_mul(q, f.j), f.i)[..., 0]
    return np.stack((d1, d2, d3, d4), axis=-1)


def from_frame_coords(d, f):
    """Inverse of :func:`frame_coords`."""
    d = np.asarray(d, dtype=np.float64)
    return d @ f.basis()


def random_unit_quaternion(rng, size=None):
    shape = (4,) if size is None else (size, 4)
    g = rng.standard_normal(shape)
    return g / norm(g)[..., None]


def random_unit_imaginary(rng):
    g = rng.standard_normal(3)
    return imag(g / np.linalg.norm(g))


def random_frame(rng):
    """Uniform frame: a Haar-random rotation of (e1, e2)."""
    return frame_rotate(random_unit_quaternion(rng), Frame.standard())


def random_quaternion_ball(rng, size, radius=1.0):
    """Uniform samples from the closed 4-ball of the given radius."""
    g = rng.standard_normal((size, 4))
    g /= norm(g)[:, None]
    r = radius * rng.random(size) ** 0.25
    return g * r[:, None]
