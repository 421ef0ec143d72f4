"""The coordinate sphere bundle over the slice Bergman space.

An element of the total space HL(D) is two pairs of conjugate harmonic
functions plus a frame.  Each pair (a, b) is stored through its holomorphic
representative F = a + i b, truncated as a complex coefficient array, so
conjugate harmonicity holds by construction.

The bundle projection sends (F1, F2, (k, l)) to P_{k,l}[F1 + F2 l]; sections
and the trivializations phi_u go the other way by splitting along a
(rotated) frame.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bergman import (
    bergman_norm,
    bergman_norm_closed,
    bergman_project,
    default_quadrature,
    toeplitz,
)
from .quaternion import (
    Frame,
    conj,
    frame_rotate,
    quat_mul,
    random_frame,
    random_quaternion_ball,
    random_unit_quaternion,
    slice_decompose,
)
from .series import (
    DEFAULT_DEGREE,
    SliceRegularSeries,
    SplitPair,
    evaluate_unchecked,
    extend,
    representation_formula,
    split,
    star_product,
)

INEQUALITY_TOL = 1e-9
SQRT2 = math.sqrt(2.0)


class FrameMismatchError(ValueError):
    """Binary HL operation on elements tagged with different frames."""


@dataclass(frozen=True, eq=False)
class HLElement:
    """((a b; c d), (k, l)) with F1 = a + i b and F2 = c + i d."""

    F1: np.ndarray
    F2: np.ndarray
    frame: Frame
    cap: int = DEFAULT_DEGREE

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.F1, dtype=np.complex128))
        b = np.atleast_1d(np.asarray(self.F2, dtype=np.complex128))
        n = max(len(a), len(b))
        if n > self.cap + 1:
            raise ValueError(f"{n} coefficients exceed degree cap {self.cap}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("HL coefficients must be finite")
        F1 = np.zeros(n, dtype=np.complex128)
        F2 = np.zeros(n, dtype=np.complex128)
        F1[: len(a)] = a
        F2[: len(b)] = b
        F1.setflags(write=False)
        F2.setflags(write=False)
        object.__setattr__(self, "F1", F1)
        object.__setattr__(self, "F2", F2)

    @classmethod
    def random(cls, rng, degree=DEFAULT_DEGREE, frame=None):
        d = random_quaternion_ball(rng, degree + 1)
        frame = random_frame(rng) if frame is None else frame
        return cls(d[:, 0] + 1j * d[:, 1], d[:, 2] + 1j * d[:, 3], frame, degree)

    def components(self):
        """Coefficient arrays of the holomorphic representatives (F1, F2)."""
        return self.F1, self.F2

    def with_frame(self, frame):
        return HLElement(self.F1, self.F2, frame, self.cap)

    def component_norms(self, quad=None):
        """L2 norms of (a, b, c, d) over the unit disk."""
        return np.concatenate(
            (_pair_norms(self.F1, quad), _pair_norms(self.F2, quad))
        )


def _pair_norms_closed(F):
    """||Re F|| and ||Im F|| for F = sum c_n z^n on the unit disk.

    Orthogonality of z^n leaves (pi/2)(sum |c_n|^2/(n+1) +- Re c_0^2).
    """
    if len(F) == 0:
        return np.zeros(2)
    s = float(np.sum(np.abs(F) ** 2 / np.arange(1, len(F) + 1)))
    c0 = float((F[0] * F[0]).real)
    re2 = 0.5 * np.pi * (s + c0)
    im2 = 0.5 * np.pi * (s - c0)
    return np.sqrt(np.maximum([re2, im2], 0.0))


def _pair_norms_quadrature(F, quad):
    v = np.polynomial.polynomial.polyval(quad.z, F)
    return np.sqrt(
        np.array([np.dot(quad.weights, v.real**2), np.dot(quad.weights, v.imag**2)])
    )


def _pair_norms(F, quad=None):
    return _pair_norms_closed(F) if quad is None else _pair_norms_quadrature(F, quad)


def _difference(A, B):
    n = max(len(A.F1), len(B.F1))
    d1 = np.zeros(n, dtype=np.complex128)
    d2 = np.zeros(n, dtype=np.complex128)
    d1[: len(A.F1)] += A.F1
    d1[: len(B.F1)] -= B.F1
    d2[: len(A.F2)] += A.F2
    d2[: len(B.F2)] -= B.F2
    return d1, d2


def hl_metric(A, B, quad=None):
    """d(A, B): sum of the four component L2 distances plus the R^6 frame gap.

    Component norms use the closed form unless a quadrature is given.
    """
    d1, d2 = _difference(A, B)
    comp = np.concatenate((_pair_norms(d1, quad), _pair_norms(d2, quad)))
    return float(np.sum(comp)) + A.frame.distance(B.frame)


def rho_metric(f, frame_f, g, frame_g, i, quad=None):
    """||f - g|| in A_i plus the R^6 frame gap."""
    diff = f - g
    n = bergman_norm_closed(diff) if quad is None else bergman_norm(diff, i, quad)
    return n + frame_f.distance(frame_g)


def bundle_projection(A):
    """P_{k,l}[a + b k + c l + d k l] as a series."""
    return extend(SplitPair(A.F1, A.F2, A.frame, A.cap))


def section(f, frame):
    """S_{k,l}[f]: the D1..D4 data of f along ``frame``."""
    sp = split(f, frame)
    return HLElement(sp.f1, sp.f2, frame, f.cap)


def trivialize(u, f, frame):
    """phi_u[f, (k, l)] = S_{u k conj(u), u l conj(u)}[f]."""
    return section(f, frame_rotate(u, frame))


def trivialization_inverse(u, A):
    """phi_u^{-1}: recover (f, (k, l)) from an element of the fiber."""
    return bundle_projection(A), frame_rotate(conj(u), A.frame)


def transition(v, w, f, frame):
    """g_{v,w}(f) acting on a frame: R_{conj(v) w}.  Independent of f."""
    return frame_rotate(quat_mul(conj(v), w), frame)


# ---------------------------------------------------------------------------
# algebra on HL(D)
# ---------------------------------------------------------------------------


def _require_same_frame(A, B, tol=1e-12):
    if not A.frame.allclose(B.frame, tol):
        raise FrameMismatchError("binary HL operations need a shared frame")


def _poly_mul(a, b, cap):
    return np.convolve(a, b)[: cap + 1]


def _padded_sum(a, b):
    out = np.zeros(max(len(a), len(b)), dtype=np.complex128)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


def hl_add(A, B):
    _require_same_frame(A, B)
    return HLElement(
        _padded_sum(A.F1, B.F1), _padded_sum(A.F2, B.F2), A.frame, max(A.cap, B.cap)
    )


def hl_bullet(A, B):
    _require_same_frame(A, B)
    cap = max(A.cap, B.cap)
    return HLElement(_poly_mul(A.F1, B.F1, cap), _poly_mul(A.F2, B.F2, cap), A.frame, cap)


def hl_derive(A):
    def d(F):
        if len(F) <= 1:
            return np.zeros(1, dtype=np.complex128)
        return F[1:] * np.arange(1, len(F))

    return HLElement(d(A.F1), d(A.F2), A.frame, A.cap)


def hl_rotate(v, A):
    """R_v: same data, frame rotated by v."""
    return A.with_frame(frame_rotate(v, A.frame))


def hl_star(A, B):
    _require_same_frame(A, B)
    return section(star_product(bundle_projection(A), bundle_projection(B)), A.frame)


def hl_algebra(op, A, B=None, v=None):
    """Dispatch for add | bullet | derive | rotate | star."""
    if op == "add":
        return hl_add(A, B)
    if op == "bullet":
        return hl_bullet(A, B)
    if op == "derive":
        return hl_derive(A)
    if op == "rotate":
        return hl_rotate(v, A)
    if op == "star":
        return hl_star(A, B)
    raise ValueError(f"unknown HL operation {op!r}")


# ---------------------------------------------------------------------------
# pullback bundles
# ---------------------------------------------------------------------------

PULLBACK_KINDS = ("projection", "toeplitz_left", "toeplitz_right")


def apply_operator(kind, f, alpha=None, quad=None, degree=DEFAULT_DEGREE):
    """B_i f, T_alpha f or T_{r,alpha} f."""
    if kind == "projection":
        return bergman_project(f, quad, degree)
    if kind == "toeplitz_left":
        return toeplitz("left", alpha, f, quad, degree)
    if kind == "toeplitz_right":
        return toeplitz("right", alpha, f, quad, degree)
    raise ValueError(f"unknown pullback kind {kind!r}")


def pullback_membership(kind, f, A, alpha=None, quad=None, tol=1e-10):
    """Whether (f, A) lies in the pullback total space: P(A) = Op(f)."""
    quad = quad or default_quadrature()
    target = apply_operator(kind, f, alpha, quad, A.cap)
    gap = bundle_projection(A) - target
    return bergman_norm(gap, f.axis, quad) <= tol


def pullback_lift(kind, f, frame, alpha=None, quad=None, degree=DEFAULT_DEGREE):
    """The canonical point (f, S_frame[Op f]) over f."""
    target = apply_operator(kind, f, alpha, quad, degree)
    return f, section(target, frame)


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    check: str
    seed: int
    samples: int
    max_violation: float
    tolerance: float
    worst_case_input: dict = field(default_factory=dict)
    slack: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.max_violation <= self.tolerance)

    def to_json(self):
        return {
            "check": self.check,
            "seed": self.seed,
            "samples": self.samples,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "slack": self.slack,
            "worst_case_input": self.worst_case_input,
            "pass": self.passed,
        }


class _Tracker:
    """Running worst case and slack statistics for one check."""

    def __init__(self):
        self.worst = 0.0
        self.worst_input = {}
        self.slacks = []

    def record(self, violation, inputs, slack=None):
        violation = float(violation)
        if violation > self.worst or not self.worst_input:
            self.worst = max(violation, self.worst)
            self.worst_input = inputs
        if slack is not None:
            self.slacks.append(float(slack))

    def report(self, check, seed, samples, tol):
        slack = {}
        if self.slacks:
            s = np.asarray(self.slacks)
            slack = {"min": float(s.min()), "mean": float(s.mean()), "max": float(s.max())}
        return VerificationReport(check, seed, samples, self.worst, tol, self.worst_input, slack)


def _random_pair(rng, degree):
    """Independent elements half the time, otherwise a perturbation."""
    A = HLElement.random(rng, degree)
    if rng.random() < 0.5:
        return A, HLElement.random(rng, degree)
    eps = 10.0 ** rng.uniform(-6.0, 0.0)
    d = random_quaternion_ball(rng, degree + 1, eps)
    u = random_unit_quaternion(rng)
    # small rotation: move a fraction of the way from 1 toward u
    u = np.array([1.0, 0.0, 0.0, 0.0]) + eps * (u - np.array([1.0, 0.0, 0.0, 0.0]))
    u /= np.linalg.norm(u)
    B = HLElement(
        A.F1 + d[:, 0] + 1j * d[:, 1],
        A.F2 + d[:, 2] + 1j * d[:, 3],
        frame_rotate(u, A.frame),
        degree,
    )
    return A, B


def check_projection_continuity(samples, quad=None, seed=0, degree=8, tol=INEQUALITY_TOL):
    """||P(A) - P(B)||_{A_i} <= 8(1 + ||r|| + ||s|| + ||t|| + ||u||) d(A, B).

    (r, s, t, u) are the components of B; i is the first vector of A's frame.
    """
    quad = quad or default_quadrature()
    rng = np.random.default_rng(seed)
    tr = _Tracker()
    for k in range(samples):
        A, B = _random_pair(rng, degree)
        lhs = bergman_norm(bundle_projection(A) - bundle_projection(B), A.frame.i, quad)
        rhs = 8.0 * (1.0 + float(np.sum(B.component_norms()))) * hl_metric(A, B)
        tr.record(max(lhs - rhs, 0.0), {"sample": k, "lhs": lhs, "rhs": rhs}, rhs - lhs)
    return tr.report("projection_continuity", seed, samples, tol)


def check_section_continuity(samples, quad=None, seed=0, degree=8, tol=INEQUALITY_TOL):
    """d(S_{i,j} f, S_{k,l} g) <= 4(1 + (1 + sqrt 2)||g||_{A_i}) rho_i."""
    quad = quad or default_quadrature()
    rng = np.random.default_rng(seed)
    tr = _Tracker()
    for k in range(samples):
        A, B = _random_pair(rng, degree)
        f, g = bundle_projection(A), bundle_projection(B)
        fa, fb = A.frame, B.frame
        i = fa.i
        lhs = hl_metric(section(f, fa), section(g, fb), quad)
        rho = rho_metric(f, fa, g, fb, i, quad)
        rhs = 4.0 * (1.0 + (1.0 + SQRT2) * bergman_norm(g, i, quad)) * rho
        tr.record(max(lhs - rhs, 0.0), {"sample": k, "lhs": lhs, "rhs": rhs}, rhs - lhs)
    return tr.report("section_continuity", seed, samples, tol)


def check_cocycle(samples, seed=0, tol=1e-12):
    """Identity, composition and inverse laws of the transition functions."""
    rng = np.random.default_rng(seed)
    tr = _Tracker()
    f = SliceRegularSeries.zero()
    for k in range(samples):
        v, w, l = random_unit_quaternion(rng, 3)
        fr = random_frame(rng)
        comp = transition(v, w, f, transition(w, l, f, fr)).distance(transition(v, l, f, fr))
        ident = transition(v, v, f, fr).distance(fr)
        inverse = transition(w, v, f, transition(v, w, f, fr)).distance(fr)
        # g_{v,w} read off the trivializations themselves
        _, via_phi = trivialization_inverse(v, trivialize(w, f, fr))
        definition = via_phi.distance(transition(v, w, f, fr))
        worst = max(comp, ident, inverse, definition)
        tr.record(worst, {"sample": k, "composition": comp, "identity": ident,
                          "inverse": inverse, "definition": definition})
    return tr.report("cocycle", seed, samples, tol)


def check_section_law(samples, seed=0, degree=DEFAULT_DEGREE, tol=1e-13):
    """P o S = id on coefficients."""
    rng = np.random.default_rng(seed)
    tr = _Tracker()
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        fr = random_frame(rng)
        tr.record(bundle_projection(section(f, fr)).max_coeff_diff(f), {"sample": k})
    return tr.report("section_law", seed, samples, tol)


def check_fiber_preservation(samples, seed=0, degree=DEFAULT_DEGREE, tol=1e-12):
    """P(phi_u[f, fr]) = f for random u."""
    rng = np.random.default_rng(seed)
    tr = _Tracker()
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        fr = random_frame(rng)
        u = random_unit_quaternion(rng)
        tr.record(bundle_projection(trivialize(u, f, fr)).max_coeff_diff(f), {"sample": k})
    return tr.report("fiber_preservation", seed, samples, tol)


def bundle_isomorphism_check(i, k, samples, quad=None, seed=0, degree=8, tol=1e-10):
    """(identity, identity) between the bundles over A_i and A_k.

    For random A, the projected function rebuilt from its slice-i values and
    from its slice-k values must agree, and ||f||_i / ||f||_k must lie in
    [1/sqrt 2, sqrt 2].
    """
    quad = quad or default_quadrature()
    rng = np.random.default_rng(seed)
    tr = _Tracker()
    i = np.asarray(i, dtype=np.float64)
    k_ax = np.asarray(k, dtype=np.float64)
    for s in range(samples):
        A = HLElement.random(rng, degree)
        f = bundle_projection(A)
        q = random_quaternion_ball(rng, 16, 0.95)
        x, y, axis = slice_decompose(q)
        g = lambda p: evaluate_unchecked(f, p)  # noqa: E731
        via_i = representation_formula(g, x, y, axis, i)
        via_k = representation_formula(g, x, y, axis, k_ax)
        agree = float(np.max(np.abs(via_i - via_k)))
        ni = bergman_norm(f, i, quad)
        nk = bergman_norm(f, k_ax, quad)
        ratio = ni / nk
        excess = max(ratio - SQRT2, 1.0 / SQRT2 - ratio, 0.0)
        tr.record(max(agree, excess), {"sample": s, "evaluation_gap": agree, "norm_ratio": ratio})
    return tr.report("bundle_isomorphism", seed, samples, tol)
