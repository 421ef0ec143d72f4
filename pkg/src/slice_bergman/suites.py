"""Seeded verification suites.

Each suite is a list of checks; each check draws its own generator from
``(seed, check index)`` so adding samples to one check never shifts another.
"""

import math

import numpy as np

from . import _kernels
from .bergman import (
    SliceSampledFunction,
    bergman_inner,
    bergman_inner_closed,
    bergman_norm,
    bergman_project,
    bergman_project_closed,
    default_quadrature,
    kernel_eval,
    kernel_extend,
    kernel_function,
    toeplitz,
    toeplitz_closed,
)
from .bundle import (
    PULLBACK_KINDS,
    SQRT2,
    HLElement,
    _Tracker,
    apply_operator,
    bundle_isomorphism_check,
    bundle_projection,
    check_cocycle,
    check_fiber_preservation,
    check_projection_continuity,
    check_section_continuity,
    check_section_law,
    hl_algebra,
    pullback_lift,
    pullback_membership,
)
from .quaternion import (
    E1,
    E2,
    E3,
    ONE,
    Frame,
    conj,
    frame_rotate,
    inv,
    norm,
    quat_mul,
    random_frame,
    random_quaternion_ball,
    random_unit_imaginary,
    random_unit_quaternion,
    rotate,
    slice_decompose,
    slice_point,
)
from .series import (
    SliceRegularSeries,
    SplitPair,
    bullet_product,
    cullen_derivative,
    evaluate,
    extend,
    extend_pointwise,
    split,
    star_product,
)

SUITES = ("algebra", "splitting", "bergman", "kernel", "toeplitz", "bundle", "inequalities", "pullback")


def _rng(seed, index):
    return np.random.default_rng([seed, index])


# -- algebra ----------------------------------------------------------------


def check_quaternion_algebra(samples, seed=0, tol=1e-12):
    rng = _rng(seed, 1)
    tr = _Tracker()
    table = max(
        float(np.max(np.abs(quat_mul(E1, E2) - E3))),
        float(np.max(np.abs(quat_mul(E2, E1) + E3))),
        float(np.max(np.abs(quat_mul(E2, E3) - E1))),
        float(np.max(np.abs(quat_mul(E3, E1) - E2))),
    )
    tr.record(table, {"case": "multiplication table"})
    p = random_quaternion_ball(rng, samples, 2.0)
    q = random_quaternion_ball(rng, samples, 2.0)
    anti = np.max(np.abs(conj(quat_mul(p, q)) - quat_mul(conj(q), conj(p))))
    tr.record(anti, {"case": "conjugation anti-homomorphism"})
    inverse = np.max(np.abs(quat_mul(q, inv(q)) - ONE))
    tr.record(inverse, {"case": "q q^-1 = 1"})
    v = random_unit_quaternion(rng, samples)
    rq = rotate(v, q)
    rot = max(np.max(np.abs(norm(rq) - norm(q))), np.max(np.abs(rq[:, 0] - q[:, 0])))
    tr.record(rot, {"case": "rotation keeps norm and real part"})
    return tr.report("quaternion_algebra", seed, samples, tol)


def check_series_algebra(samples, seed=0, tol=1e-12):
    """Star associativity, right linearity, Leibniz rule, bullet vs star."""
    rng = _rng(seed, 2)
    tr = _Tracker()
    for k in range(samples):
        f, g, h = (SliceRegularSeries.random(rng, 5) for _ in range(3))
        f, g, h = (SliceRegularSeries(s.coeffs, 16) for s in (f, g, h))
        c = random_quaternion_ball(rng, 1)[0]
        assoc = star_product(star_product(f, g), h).max_coeff_diff(star_product(f, star_product(g, h)))
        lin = star_product(f, g).right_mul(c).max_coeff_diff(star_product(f, g.right_mul(c)))
        leib = cullen_derivative(star_product(f, g)).max_coeff_diff(
            star_product(cullen_derivative(f), g) + star_product(f, cullen_derivative(g))
        )
        fr = random_frame(rng)
        sf, sg = split(f, fr), split(g, fr)
        f1 = extend(SplitPair(sf.f1, np.zeros_like(sf.f2), fr, 16))
        g1 = extend(SplitPair(sg.f1, np.zeros_like(sg.f2), fr, 16))
        bullet = bullet_product(f1, g1, fr).max_coeff_diff(star_product(f1, g1))
        tr.record(max(assoc, lin, leib, bullet), {"sample": k, "associativity": assoc,
                  "right_linearity": lin, "leibniz": leib, "bullet_vs_star": bullet})
    return tr.report("series_algebra", seed, samples, tol)


# -- splitting --------------------------------------------------------------


def check_split_roundtrip(samples, seed=0, degree=16, tol=1e-13):
    """P o Q = id on series and Q o P = id on split pairs."""
    rng = _rng(seed, 3)
    tr = _Tracker()
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        fr = random_frame(rng)
        pq = extend(split(f, fr)).max_coeff_diff(f)
        d = random_quaternion_ball(rng, degree + 1)
        sp = SplitPair(d[:, 0] + 1j * d[:, 1], d[:, 2] + 1j * d[:, 3], fr, degree)
        back = split(extend(sp), fr)
        qp = float(max(np.max(np.abs(back.f1 - sp.f1)), np.max(np.abs(back.f2 - sp.f2))))
        tr.record(max(pq, qp), {"sample": k, "PQ": pq, "QP": qp})
    return tr.report("split_roundtrip", seed, samples, tol)


def _random_points(rng, count, radius=0.95):
    return random_quaternion_ball(rng, count, radius)


def check_representation_formula(samples, seed=0, degree=16, tol=1e-12, batch=1000):
    """f(x + I y) against the slice-i reconstruction, one random f per point."""
    rng = _rng(seed, 4)
    tr = _Tracker()
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        coeffs = np.stack([random_quaternion_ball(rng, degree + 1) for _ in range(m)])
        q = _random_points(rng, m)
        x, y, axis = slice_decompose(q)
        i = np.stack([random_unit_imaginary(rng) for _ in range(m)])
        direct = _kernels.series_eval_batched(coeffs, q)
        plus = _kernels.series_eval_batched(coeffs, slice_point(x, y, i))
        minus = _kernels.series_eval_batched(coeffs, slice_point(x, -y, i))
        rebuilt = 0.5 * (plus + minus) + 0.5 * quat_mul(quat_mul(axis, i), minus - plus)
        err = np.max(np.abs(rebuilt - direct), axis=1)
        w = int(np.argmax(err))
        tr.record(err[w], {"sample": done + w})
        done += m
    return tr.report("representation_formula", seed, samples, tol)


def check_splitting_lemma(samples, seed=0, degree=16, tol=1e-12):
    """f(z) = f1(z) + f2(z) j on the slice, and P applied pointwise."""
    rng = _rng(seed, 5)
    tr = _Tracker()
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        fr = random_frame(rng)
        sp = split(f, fr)
        r = 0.95 * np.sqrt(rng.random(50))
        z = r * np.exp(2j * np.pi * rng.random(50))
        on_slice = float(np.max(np.abs(evaluate(f, slice_point(z.real, z.imag, fr.i)) - sp.evaluate(z))))
        q = _random_points(rng, 50)
        off = float(np.max(np.abs(evaluate(f, q) - extend_pointwise(sp.evaluate, q, fr))))
        tr.record(max(on_slice, off), {"sample": k, "slice": on_slice, "extension": off})
    return tr.report("splitting_lemma", seed, samples, tol)


# -- bergman ----------------------------------------------------------------


def check_norms(samples, quad, seed=0, degree=16, tol=1e-10):
    rng = _rng(seed, 6)
    tr = _Tracker()
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        g = SliceRegularSeries.random(rng, degree)
        i = random_unit_imaginary(rng)
        gap = float(np.max(np.abs(bergman_inner(f, g, i, quad) - bergman_inner_closed(f, g))))
        tr.record(gap, {"sample": k})
    return tr.report("inner_product_quadrature_vs_closed", seed, samples, tol)


def check_monomial_norms(quad, degree=16, tol=1e-12):
    tr = _Tracker()
    for n in range(degree + 1):
        qn = SliceRegularSeries.monomial(n, cap=degree)
        val = bergman_inner(qn, qn, E1, quad)
        err = float(np.max(np.abs(val - np.array([np.pi / (n + 1), 0, 0, 0]))))
        tr.record(err, {"n": n})
    return tr.report("monomial_norms", 0, degree + 1, tol)


def check_norm_equivalence(samples, quad, seed=0, degree=16, tol=1e-10):
    """Slice independence of the norm and ||f||_i <= sqrt 2 ||f||_k."""
    rng = _rng(seed, 7)
    tr = _Tracker()
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        i, kk = random_unit_imaginary(rng), random_unit_imaginary(rng)
        ni, nk = bergman_norm(f, i, quad), bergman_norm(f, kk, quad)
        bound = max(ni - SQRT2 * nk, 0.0)
        tr.record(max(abs(ni - nk), bound), {"sample": k, "norm_i": ni, "norm_k": nk},
                  SQRT2 * nk - ni)
    return tr.report("norm_equivalence", seed, samples, tol)


# -- kernel -----------------------------------------------------------------


def check_reproducing(samples, quad, seed=0, degree=16, tol=1e-10):
    """f(q) = <K_q, f> on random points with |q| <= 0.9."""
    rng = _rng(seed, 8)
    tr = _Tracker()
    q_all = random_quaternion_ball(rng, samples, 0.9)
    for k in range(samples):
        f = SliceRegularSeries.random(rng, degree)
        i = random_unit_imaginary(rng)
        K = kernel_function(q_all[k], degree)
        err = float(np.max(np.abs(bergman_inner(K, f, i, quad) - evaluate(f, q_all[k]))))
        tr.record(err, {"sample": k, "q": [float(v) for v in q_all[k]]})
    return tr.report("reproducing_kernel", seed, samples, tol)


def check_kernel_extension(samples, seed=0, degree=16, tol=1e-11):
    rng = _rng(seed, 9)
    tr = _Tracker()
    scale = np.arange(1, degree + 2) / np.pi
    for k in range(samples):
        q = random_quaternion_ball(rng, 1, 0.9)[0]
        x, y, kax = slice_decompose(q)
        i = random_unit_imaginary(rng)
        z = random_quaternion_ball(rng, 1, 0.9)[0]
        r = slice_point(z[0], np.linalg.norm(z[1:]), i)
        direct = np.zeros(4)
        qp = ONE.copy()
        rp = ONE.copy()
        for n in range(degree + 1):
            direct += scale[n] * quat_mul(qp, rp)
            qp = quat_mul(q, qp)
            rp = quat_mul(conj(r), rp)
        err = float(np.max(np.abs(kernel_extend(x, y, kax, r, i, degree) - direct)))
        tr.record(err, {"sample": k})
    return tr.report("kernel_extension", seed, samples, tol)


def check_kernel_closed_form(samples, seed=0, degree=16, tol=1e-12):
    """On a common slice the kernel is the finite sum of (n+1) w^n / pi."""
    rng = _rng(seed, 10)
    tr = _Tracker()
    for k in range(samples):
        i = random_unit_imaginary(rng)
        a, b = 0.9 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2))
        w = a * np.conj(b)
        N = degree
        closed = (1 - (N + 2) * w ** (N + 1) + (N + 1) * w ** (N + 2)) / (1 - w) ** 2 / np.pi
        got = kernel_eval(slice_point(a.real, a.imag, i), slice_point(b.real, b.imag, i), degree)
        expect = slice_point(closed.real, closed.imag, i)
        tr.record(float(np.max(np.abs(got - expect))), {"sample": k})
    return tr.report("kernel_closed_form", seed, samples, tol)


# -- projection and Toeplitz ------------------------------------------------


def check_projection_monomials(quad, max_exp=8, degree=16, tol=1e-10):
    """B[z^n zbar^m] by quadrature against (n-m+1)/(n+1) z^(n-m)."""
    tr = _Tracker()
    frame = random_frame(np.random.default_rng(0))
    for n in range(max_exp + 1):
        for m in range(max_exp + 1):
            f = SliceSampledFunction(frame, {(n, m): ONE})
            expect = np.zeros((degree + 1, 4))
            if n >= m:
                expect[n - m, 0] = (n - m + 1) / (n + 1)
            got = bergman_project(f, quad, degree)
            err = float(np.max(np.abs(got.coeffs - expect)))
            tr.record(err, {"n": n, "m": m})
    return tr.report("projection_monomials", 0, (max_exp + 1) ** 2, tol)


def _exponent_caps(quad, f_max=6, alpha_max=4):
    """Largest exponents for random sampled functions and symbols.

    On the polar grid only the balanced terms zbar^p z^n zbar^m with
    n = m + p need the radial rule, which is exact for n <= n_r - 1, so the
    z-exponent of any product fed to the projection must stay below n_r.
    """
    room = quad.n_r - 1
    e_f = min(f_max, room // 2 + room % 2)
    return e_f, min(alpha_max, room - e_f)


def _random_sampled(rng, frame, max_exp=6, count=4):
    terms = {}
    for _ in range(count):
        nm = (int(rng.integers(0, max_exp + 1)), int(rng.integers(0, max_exp + 1)))
        terms[nm] = random_quaternion_ball(rng, 1)[0]
    return SliceSampledFunction(frame, terms)


def check_projection_idempotence(samples, quad, seed=0, degree=16, tol=1e-10):
    rng = _rng(seed, 11)
    tr = _Tracker()
    e_f, _ = _exponent_caps(quad)
    for k in range(samples):
        fr = random_frame(rng)
        f = _random_sampled(rng, fr, e_f)
        once = bergman_project(f, quad, degree)
        twice = bergman_project(SliceSampledFunction.from_series(once, fr), quad, degree)
        closed = bergman_project_closed(f, degree)
        err = max(twice.max_coeff_diff(once), once.max_coeff_diff(closed))
        tr.record(err, {"sample": k})
    return tr.report("projection_idempotence", seed, samples, tol)


def check_toeplitz(samples, quad, seed=0, degree=16, tol=1e-10):
    """Unit symbol, the zbar symbol, the e2 asymmetry witness, random symbols."""
    rng = _rng(seed, 12)
    tr = _Tracker()
    std = Frame.standard()
    zbar = SliceSampledFunction(std, {(0, 1): ONE})
    z = SliceSampledFunction(std, {(1, 0): ONE})
    half = SliceRegularSeries.constant([0.5, 0, 0, 0], degree)
    tr.record(toeplitz("left", zbar, z, quad, degree).max_coeff_diff(half), {"case": "T_zbar z"})
    e2 = SliceSampledFunction.constant(E2, std)
    ze1 = SliceSampledFunction(std, {(1, 0): E1})
    left = toeplitz("left", e2, ze1, quad, degree)
    right = toeplitz("right", e2, ze1, quad, degree)
    tr.record(left.max_coeff_diff(SliceRegularSeries.zero(degree)), {"case": "left e2 z e1"})
    tr.record(right.max_coeff_diff(SliceRegularSeries.monomial(1, E3, degree)),
              {"case": "right e2 z e1"})
    e_f, e_a = _exponent_caps(quad)
    for k in range(samples):
        fr = random_frame(rng)
        f = _random_sampled(rng, fr, e_f)
        alpha = _random_sampled(rng, fr, max_exp=e_a, count=3)
        unit = SliceSampledFunction.constant(ONE, fr)
        t1 = toeplitz("left", unit, f, quad, degree).max_coeff_diff(bergman_project(f, quad, degree))
        lq = toeplitz("left", alpha, f, quad, degree).max_coeff_diff(toeplitz_closed("left", alpha, f, degree))
        rq = toeplitz("right", alpha, f, quad, degree).max_coeff_diff(toeplitz_closed("right", alpha, f, degree))
        tr.record(max(t1, lq, rq), {"sample": k, "unit_symbol": t1, "left": lq, "right": rq})
    return tr.report("toeplitz", seed, samples, tol)


# -- bundle -----------------------------------------------------------------


def check_homomorphisms(samples, seed=0, degree=8, points=200, tol=1e-11):
    """The five identities for +, bullet, derivative, rotation and star."""
    rng = _rng(seed, 13)
    tr = _Tracker()
    for k in range(samples):
        fr = random_frame(rng)
        A = HLElement.random(rng, degree, fr)
        B = HLElement.random(rng, degree, fr)
        A = HLElement(A.F1, A.F2, fr, 2 * degree)
        B = HLElement(B.F1, B.F2, fr, 2 * degree)
        v = random_unit_quaternion(rng)
        q = _random_points(rng, points)
        PA, PB = bundle_projection(A), bundle_projection(B)

        def gap(lhs, rhs):
            return float(np.max(np.abs(evaluate(lhs, q) - rhs)))

        add = gap(bundle_projection(hl_algebra("add", A, B)), evaluate(PA, q) + evaluate(PB, q))
        bul = gap(bundle_projection(hl_algebra("bullet", A, B)), evaluate(bullet_product(PA, PB, fr), q))
        der = gap(bundle_projection(hl_algebra("derive", A)), evaluate(cullen_derivative(PA), q))
        star = gap(bundle_projection(hl_algebra("star", A, B)), evaluate(star_product(PA, PB), q))

        rotated = frame_rotate(v, fr)
        sp = split(PA, fr)

        def moved(zc):
            return rotate(v, sp.evaluate(zc))

        rot = gap(bundle_projection(hl_algebra("rotate", A, v=v)), extend_pointwise(moved, q, rotated))
        tr.record(max(add, bul, der, star, rot), {"sample": k, "add": add, "bullet": bul,
                  "derive": der, "star": star, "rotate": rot})
    return tr.report("homomorphisms", seed, samples, tol)


def check_pullbacks(samples, quad, seed=0, degree=16, tol=1e-10):
    """Lifts of all three kinds land in the pullback total space; a foreign
    fiber element is rejected."""
    rng = _rng(seed, 14)
    tr = _Tracker()
    quad = quad or default_quadrature()
    e_f, e_a = _exponent_caps(quad)
    for k in range(samples):
        fr = random_frame(rng)
        f = _random_sampled(rng, fr, e_f)
        alpha = _random_sampled(rng, fr, max_exp=e_a, count=3)
        for kind in PULLBACK_KINDS:
            base, A = pullback_lift(kind, f, fr, alpha, quad, degree)
            target = apply_operator(kind, f, alpha, quad, degree)
            gap = bergman_norm(bundle_projection(A) - target, fr.i, quad)
            accepted = base is f and pullback_membership(kind, f, A, alpha, quad, tol)
            rejected = not pullback_membership(kind, f, HLElement.random(rng, 4, fr), alpha, quad, tol)
            violation = gap if accepted and rejected else math.inf
            tr.record(violation, {"sample": k, "kind": kind, "gap": gap,
                                  "lift_accepted": accepted, "foreign_rejected": rejected})
    return tr.report("pullback_membership", seed, samples, tol)


# -- driver -----------------------------------------------------------------


DEFAULT_SAMPLES = {
    "algebra": 200,
    "splitting": 1000,
    "bergman": 1000,
    "kernel": 100,
    "toeplitz": 50,
    "bundle": 1000,
    "inequalities": 1000,
    "pullback": 20,
}


def run_suite(name, seed=0, samples=None, degree=16, quad=None, tol=None):
    """Run one suite and return its list of reports."""
    quad = quad or default_quadrature()
    n = DEFAULT_SAMPLES[name] if samples is None else samples
    t = {} if tol is None else {"tol": tol}
    if name == "algebra":
        return [check_quaternion_algebra(n, seed, **t), check_series_algebra(n, seed, **t)]
    if name == "splitting":
        return [
            check_split_roundtrip(n, seed, degree, **t),
            check_representation_formula(10 * n, seed, degree, **t),
            check_splitting_lemma(max(n // 10, 1), seed, degree, **t),
        ]
    if name == "bergman":
        return [
            check_norms(n, quad, seed, degree, **t),
            check_monomial_norms(quad, degree, **t),
            check_norm_equivalence(n, quad, seed, degree, **t),
        ]
    if name == "kernel":
        return [
            check_reproducing(n, quad, seed, degree, **t),
            check_kernel_extension(n, seed, degree, **t),
            check_kernel_closed_form(n, seed, degree, **t),
        ]
    if name == "toeplitz":
        return [
            check_projection_monomials(quad, min(8, degree), degree, **t),
            check_projection_idempotence(n, quad, seed, degree, **t),
            check_toeplitz(n, quad, seed, degree, **t),
        ]
    if name == "bundle":
        half = max(degree // 2, 1)
        return [
            check_cocycle(n, seed, **t),
            check_section_law(n, seed, degree, **t),
            check_fiber_preservation(n, seed, degree, **t),
            check_homomorphisms(max(n // 10, 1), seed, half, **t),
            bundle_isomorphism_check(random_unit_imaginary(_rng(seed, 15)),
                                     random_unit_imaginary(_rng(seed, 16)),
                                     max(n // 10, 1), quad, seed, half, **t),
        ]
    if name == "inequalities":
        half = max(degree // 2, 1)
        return [
            check_projection_continuity(n, quad, seed, half, **t),
            check_section_continuity(n, quad, seed, half, **t),
        ]
    if name == "pullback":
        return [check_pullbacks(n, quad, seed, degree, **t)]
    raise ValueError(f"unknown suite {name!r}")
