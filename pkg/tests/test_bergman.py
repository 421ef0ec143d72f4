import math

import numpy as np
import pytest
from conftest import seeds
from hypothesis import given
from hypothesis import strategies as st

from slice_bergman.bergman import (
    DiskQuadrature,
    IntegrationError,
    SliceMismatchError,
    SliceSampledFunction,
    bergman_inner,
    bergman_inner_closed,
    bergman_norm,
    bergman_norm_closed,
    bergman_project,
    bergman_project_closed,
    disk_integrate,
    kernel_eval,
    kernel_extend,
    kernel_function,
    toeplitz,
    toeplitz_closed,
)
from slice_bergman.quaternion import (
    E1,
    E2,
    E3,
    ONE,
    Frame,
    conj,
    embed,
    quat,
    quat_mul,
    random_frame,
    random_quaternion_ball,
    random_unit_imaginary,
    slice_point,
)
from slice_bergman.series import SliceRegularSeries as S
from slice_bergman.series import evaluate, star_product

PI = math.pi


def polar_moment(n, m):
    """Oracle: integral over the unit disk of z^n conj(z)^m."""
    return 2 * PI / (n + m + 2) if n == m else 0.0


def sampled(frame, **terms):
    return SliceSampledFunction(frame, {tuple(int(c) for c in k[1:].split("_")): v for k, v in terms.items()})


class TestQuadrature:
    def test_weights_sum_to_pi(self, quad):
        assert abs(quad.weights.sum() - PI) <= 1e-12

    def test_nodes_inside_disk(self, quad):
        assert np.all(np.abs(quad.z) < 1.0)
        assert quad.z.shape == (32 * 128,)

    @pytest.mark.parametrize("n_r,n_theta", [(4, 9), (8, 20), (32, 128)])
    def test_exact_on_monomials(self, n_r, n_theta):
        quad = DiskQuadrature(n_r, n_theta)
        for n in range(2 * n_r - 1):
            for m in range(2 * n_r - 1 - n):
                if abs(n - m) >= n_theta:
                    continue
                got = disk_integrate(lambda z: z**n * np.conj(z) ** m, quad)
                want = polar_moment(n, m)
                assert abs(got[0] - want) <= 1e-13 * max(1.0, want)
                assert abs(got[1]) <= 1e-13

    def test_fails_outside_exactness_class(self):
        quad = DiskQuadrature(2, 8)
        # n + m = 2 n_r is one beyond the Gauss degree
        err = abs(disk_integrate(lambda z: np.abs(z) ** 4, quad)[0] - PI / 3)
        assert err > 1e-6
        # |n - m| = n_theta aliases onto the constant mode
        assert abs(disk_integrate(lambda z: z**8, quad)[0]) > 1e-3

    def test_is_exact_for(self):
        assert DiskQuadrature().is_exact_for(16)
        assert not DiskQuadrature(8, 128).is_exact_for(16)

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            DiskQuadrature(0, 10)


class TestDiskIntegrate:
    def test_one(self, quad):
        np.testing.assert_allclose(disk_integrate(lambda z: np.ones_like(z.real), quad), [PI, 0, 0, 0], atol=1e-13)

    def test_z(self, quad):
        np.testing.assert_allclose(disk_integrate(lambda z: z, quad), 0.0, atol=1e-15)

    def test_abs_z_squared(self, quad):
        assert disk_integrate(lambda z: np.abs(z) ** 2, quad)[0] == pytest.approx(PI / 2, abs=1e-13)

    def test_quaternion_samples(self, quad):
        got = disk_integrate(lambda z: np.tile(quat(1, 2, 3, 4), (z.size, 1)), quad)
        np.testing.assert_allclose(got, PI * quat(1, 2, 3, 4), atol=1e-12)

    def test_non_finite_signals_failure(self, quad):
        with pytest.raises(IntegrationError):
            disk_integrate(lambda z: np.full(z.shape, np.nan), quad)


class TestInnerProduct:
    def test_one_one(self, quad):
        np.testing.assert_allclose(bergman_inner(S.constant(ONE), S.constant(ONE), E1, quad), [PI, 0, 0, 0], atol=1e-13)
        np.testing.assert_allclose(bergman_inner_closed(S.constant(ONE), S.constant(ONE)), [PI, 0, 0, 0])

    @pytest.mark.parametrize("n", range(17))
    def test_monomial_norms(self, quad, n):
        qn = S.monomial(n)
        np.testing.assert_allclose(bergman_inner(qn, qn, E1, quad), [PI / (n + 1), 0, 0, 0], atol=1e-12)

    @pytest.mark.parametrize("n,m", [(0, 1), (2, 5), (16, 15), (3, 0)])
    def test_monomials_orthogonal(self, quad, n, m):
        np.testing.assert_allclose(bergman_inner(S.monomial(n), S.monomial(m), E2, quad), 0.0, atol=1e-13)

    def test_closed_form_example(self, quad):
        # (pi/2) conj(e1) e2 = (pi/2)(-e1)(e2) = -(pi/2) e3
        f, g = S.monomial(1, E1), S.monomial(1, E2)
        want = PI / 2 * quat_mul(conj(E1), E2)
        np.testing.assert_array_equal(want, -PI / 2 * E3)
        np.testing.assert_allclose(bergman_inner_closed(f, g), want, atol=1e-15)
        np.testing.assert_allclose(bergman_inner(f, g, random_unit_imaginary(np.random.default_rng(3)), quad),
                                   want, atol=1e-12)

    @given(seeds)
    def test_quadrature_matches_closed_form(self, seed):
        rng = np.random.default_rng(seed)
        f, g = S.random(rng, 16), S.random(rng, 16)
        i = random_unit_imaginary(rng)
        np.testing.assert_allclose(bergman_inner(f, g, i), bergman_inner_closed(f, g), atol=1e-10)

    @given(seeds)
    def test_conjugate_linear_in_first_slot(self, seed):
        rng = np.random.default_rng(seed)
        f, g = S.random(rng, 8), S.random(rng, 8)
        c = rng.normal(size=4)
        i = random_unit_imaginary(rng)
        lhs = bergman_inner(f.right_mul(c), g, i)
        rhs = quat_mul(conj(c), bergman_inner(f, g, i))
        np.testing.assert_allclose(lhs, rhs, atol=1e-11)
        np.testing.assert_allclose(bergman_inner(f, g.right_mul(c), i), quat_mul(bergman_inner(f, g, i), c), atol=1e-11)

    @given(seeds)
    def test_norm_real_and_slice_independent(self, seed):
        rng = np.random.default_rng(seed)
        f = S.random(rng, 16)
        i, k = random_unit_imaginary(rng), random_unit_imaginary(rng)
        ff = bergman_inner(f, f, i)
        assert np.max(np.abs(ff[1:])) <= 1e-12
        assert abs(bergman_norm(f, i) - bergman_norm(f, k)) <= 1e-10
        assert abs(bergman_norm(f, i) - bergman_norm_closed(f)) <= 1e-10
        assert bergman_norm(f, i) <= math.sqrt(2) * bergman_norm(f, k) + 1e-10


def common_slice_kernel(w, N):
    """Oracle: sum_{n<=N} (n+1) w^n / pi in closed form (derivative of a geometric sum)."""
    return (1 - (N + 2) * w ** (N + 1) + (N + 1) * w ** (N + 2)) / (1 - w) ** 2 / PI


class TestKernel:
    def test_at_zero(self, rng):
        for z in random_quaternion_ball(rng, 5, 1.0):
            np.testing.assert_allclose(kernel_eval(quat(), z), [1 / PI, 0, 0, 0], atol=1e-15)

    @given(seeds, st.integers(0, 24))
    def test_common_slice_closed_form(self, seed, N):
        rng = np.random.default_rng(seed)
        i = random_unit_imaginary(rng)
        a, b = 0.95 * np.sqrt(rng.random(2)) * np.exp(2j * PI * rng.random(2))
        w = a * np.conj(b)
        got = kernel_eval(embed(a, i), embed(b, i), N)
        np.testing.assert_allclose(got, embed(common_slice_kernel(w, N), i), atol=1e-12)

    def test_partial_sums_approach_full_kernel(self):
        a, b = 0.5 + 0.2j, -0.3 + 0.4j
        w = a * np.conj(b)
        full = 1 / (PI * (1 - w) ** 2)
        got = kernel_eval(embed(a, E1), embed(b, E1), 60)
        np.testing.assert_allclose(got, embed(full, E1), atol=1e-12)

    def test_kernel_function_is_conjugate_of_integrand_factor(self, rng):
        q = random_quaternion_ball(rng, 1, 0.8)[0]
        i = random_unit_imaginary(rng)
        z = embed(0.3 - 0.5j, i)
        np.testing.assert_allclose(evaluate(kernel_function(q), z), conj(kernel_eval(q, z)), atol=1e-13)

    @given(seeds)
    def test_reproducing(self, seed):
        rng = np.random.default_rng(seed)
        f = S.random(rng, 16)
        q = random_quaternion_ball(rng, 1, 0.9)[0]
        i = random_unit_imaginary(rng)
        np.testing.assert_allclose(bergman_inner(kernel_function(q), f, i), evaluate(f, q), atol=1e-10)

    def test_extension_on_slice(self, rng):
        i = random_unit_imaginary(rng)
        r = embed(0.2 + 0.6j, i)
        got = kernel_extend(0.1, 0.4, i, r, i)
        np.testing.assert_allclose(got, kernel_eval(slice_point(0.1, 0.4, i), r), atol=1e-13)

    def test_extension_real_point(self, rng):
        i, k = random_unit_imaginary(rng), random_unit_imaginary(rng)
        r = embed(-0.5 + 0.1j, i)
        np.testing.assert_allclose(kernel_extend(0.3, 0.0, k, r, i), kernel_eval(quat(0.3), r), atol=1e-14)

    @given(seeds)
    def test_extension_matches_series(self, seed):
        rng = np.random.default_rng(seed)
        i, k = random_unit_imaginary(rng), random_unit_imaginary(rng)
        x, y = 0.6 * rng.random(2)
        r = embed(0.9 * rng.random() * np.exp(2j * PI * rng.random()), i)
        want = np.zeros(4)
        qp, rp = ONE.copy(), ONE.copy()
        q = slice_point(x, y, k)
        for n in range(17):
            want += (n + 1) / PI * quat_mul(qp, rp)
            qp, rp = quat_mul(q, qp), quat_mul(conj(r), rp)
        np.testing.assert_allclose(kernel_extend(x, y, k, r, i), want, atol=1e-11)

    def test_literal_same_argument_extension_is_wrong(self):
        # using x + y i in both terms does not reproduce the kernel off the slice
        i, k = E1, E2
        r = embed(0.5j, i)
        x, y = 0.2, 0.5
        one = ONE
        ki = quat_mul(k, i)
        plus = kernel_eval(slice_point(x, y, i), r)
        literal = 0.5 * quat_mul(one - ki, plus) + 0.5 * quat_mul(one + ki, plus)
        assert np.max(np.abs(literal - kernel_extend(x, y, k, r, i))) > 1e-2


class TestSliceSampledFunction:
    def test_string_keys(self, std):
        f = SliceSampledFunction(std, {"(1,1)": ONE, "(0, 2)": E1})
        assert set(f.terms) == {(1, 1), (0, 2)}

    def test_rejects_negative_exponent(self, std):
        with pytest.raises(ValueError):
            SliceSampledFunction(std, {(-1, 0): ONE})

    def test_evaluation(self, rng):
        fr = random_frame(rng)
        f = SliceSampledFunction(fr, {(2, 1): E3})
        z = np.array([0.3 + 0.1j])
        np.testing.assert_allclose(f(z), quat_mul(embed(z**2 * np.conj(z), fr.i), E3))

    @given(seeds)
    def test_exact_product_matches_pointwise(self, seed):
        rng = np.random.default_rng(seed)
        fr = random_frame(rng)
        a = SliceSampledFunction(fr, {(int(n), int(m)): rng.normal(size=4) for n, m in rng.integers(0, 4, (3, 2))})
        b = SliceSampledFunction(fr, {(int(n), int(m)): rng.normal(size=4) for n, m in rng.integers(0, 4, (3, 2))})
        z = np.sqrt(rng.random(20)) * np.exp(2j * PI * rng.random(20))
        np.testing.assert_allclose(a.times(b)(z), quat_mul(a(z), b(z)), atol=1e-12)

    def test_product_needs_same_slice(self):
        a = SliceSampledFunction(Frame(E1, E2), {(0, 0): ONE})
        b = SliceSampledFunction(Frame(E2, E3), {(0, 0): ONE})
        with pytest.raises(SliceMismatchError):
            a.times(b)


class TestProjection:
    def test_holomorphic_polynomial_is_fixed(self, quad, rng):
        fr = random_frame(rng)
        f = S.random(rng, 16)
        got = bergman_project(SliceSampledFunction.from_series(f, fr), quad)
        assert got.max_coeff_diff(f) <= 1e-11

    def test_z_zbar(self, quad, std):
        got = bergman_project(SliceSampledFunction(std, {(1, 1): ONE}), quad)
        assert got.max_coeff_diff(S.constant(0.5 * ONE)) <= 1e-13

    def test_zbar(self, quad, std):
        got = bergman_project(SliceSampledFunction(std, {(0, 1): ONE}), quad)
        assert got.max_coeff_diff(S.zero()) <= 1e-14

    @pytest.mark.parametrize("n", range(9))
    @pytest.mark.parametrize("m", range(9))
    def test_monomial_oracle(self, quad, n, m):
        fr = random_frame(np.random.default_rng(100 * n + m))
        c = quat(0.3, -0.2, 0.5, 0.1)
        got = bergman_project(SliceSampledFunction(fr, {(n, m): c}), quad)
        want = np.zeros((17, 4))
        if n >= m:
            want[n - m] = (n - m + 1) / (n + 1) * c
        assert got.max_coeff_diff(S(want)) <= 1e-10
        assert bergman_project_closed(SliceSampledFunction(fr, {(n, m): c})).max_coeff_diff(S(want)) <= 1e-15

    @given(seeds)
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        fr = random_frame(rng)
        f = SliceSampledFunction(fr, {(int(n), int(m)): rng.normal(size=4) for n, m in rng.integers(0, 7, (4, 2))})
        once = bergman_project(f)
        twice = bergman_project(SliceSampledFunction.from_series(once, fr))
        assert once.max_coeff_diff(twice) <= 1e-10

    @given(seeds)
    def test_right_linear(self, seed):
        rng = np.random.default_rng(seed)
        fr = random_frame(rng)
        c = rng.normal(size=4)
        terms = {(int(n), int(m)): rng.normal(size=4) for n, m in rng.integers(0, 6, (3, 2))}
        f = SliceSampledFunction(fr, terms)
        fc = SliceSampledFunction(fr, {k: quat_mul(v, c) for k, v in terms.items()})
        assert bergman_project(fc).max_coeff_diff(bergman_project(f).right_mul(c)) <= 1e-11


class TestToeplitz:
    def test_unit_symbol_is_projection(self, quad, rng):
        fr = random_frame(rng)
        f = SliceSampledFunction.from_series(S.random(rng, 10), fr)
        one = SliceSampledFunction.constant(ONE, fr)
        for side in ("left", "right"):
            assert toeplitz(side, one, f, quad).max_coeff_diff(bergman_project(f, quad)) <= 1e-11

    def test_zbar_times_z(self, quad, std):
        alpha = SliceSampledFunction(std, {(0, 1): ONE})
        f = SliceSampledFunction(std, {(1, 0): ONE})
        for side in ("left", "right"):
            assert toeplitz(side, alpha, f, quad).max_coeff_diff(S.constant(0.5 * ONE)) <= 1e-10

    def test_left_right_asymmetry(self, quad, std):
        alpha = SliceSampledFunction.constant(E2, std)
        f = SliceSampledFunction(std, {(1, 0): E1})
        assert toeplitz("left", alpha, f, quad).max_coeff_diff(S.zero()) <= 1e-10
        assert toeplitz("right", alpha, f, quad).max_coeff_diff(S.monomial(1, E3)) <= 1e-10
        assert toeplitz_closed("left", alpha, f).max_coeff_diff(S.zero()) <= 1e-15
        assert toeplitz_closed("right", alpha, f).max_coeff_diff(S.monomial(1, E3)) <= 1e-15

    @given(seeds, st.sampled_from(["left", "right"]))
    def test_matches_closed_form(self, seed, side):
        rng = np.random.default_rng(seed)
        fr = random_frame(rng)
        mk = lambda: SliceSampledFunction(fr, {(int(n), int(m)): rng.normal(size=4) for n, m in rng.integers(0, 5, (3, 2))})
        alpha, f = mk(), mk()
        assert toeplitz(side, alpha, f).max_coeff_diff(toeplitz_closed(side, alpha, f)) <= 1e-10

    def test_slice_mismatch(self, quad):
        a = SliceSampledFunction.constant(ONE, Frame(E1, E2))
        b = SliceSampledFunction.constant(ONE, Frame(E2, E3))
        with pytest.raises(SliceMismatchError):
            toeplitz("left", a, b, quad)

    def test_bad_side(self, quad, std):
        a = SliceSampledFunction.constant(ONE, std)
        with pytest.raises(ValueError):
            toeplitz("middle", a, a, quad)


def test_star_product_norm_example(quad):
    # ||q^2||^2 = pi/3 through the product of two identity maps
    sq = star_product(S.monomial(1), S.monomial(1))
    assert bergman_norm(sq, E3, quad) == pytest.approx(math.sqrt(PI / 3), abs=1e-13)
