import numpy as np
import pytest

from hotpotato import (
    ExponentialKernel,
    ModelParams,
    PowerLawKernel,
    TimeGrid,
    build_exponential_basis,
    build_impact_matrices,
    classify_matrix,
    decay_inverse,
    decay_lower_mix_inverse,
    make_equidistant_grid,
    threshold_certificate_matrix,
    w_system_inverse,
)


def exp_params(lam=1.0, rho=1.0, gamma=0.0, n=4, horizon=1.0, theta=0.0):
    return ModelParams(
        kernel=ExponentialKernel(lam=lam, rho=rho, gamma=gamma),
        grid=make_equidistant_grid(n, horizon),
        theta=theta,
    )


def op_norm(m):
    return float(np.abs(m).sum(axis=1).max())


class TestImpactMatrices:
    def test_single_interval_entries(self):
        lam, rho, gamma, theta = 1.3, 0.7, 0.2, 0.05
        mats = build_impact_matrices(exp_params(lam, rho, gamma, n=1, theta=theta))
        a = np.exp(-rho)
        g0, g1 = lam + gamma, lam * a + gamma
        np.testing.assert_allclose(mats.gram, [[g0, g1], [g1, g0]], rtol=1e-15)
        np.testing.assert_allclose(
            mats.causal, [[0.5 * g0, 0.0], [g1, 0.5 * g0]], rtol=1e-15
        )
        np.testing.assert_allclose(
            mats.gram_cost, [[g0 + 2 * theta, g1], [g1, g0 + 2 * theta]], rtol=1e-15
        )

    def test_gram_is_exactly_symmetric(self):
        mats = build_impact_matrices(exp_params(n=37, rho=2.3))
        assert np.array_equal(mats.gram, mats.gram.T)

    def test_causal_halves_reassemble_gram_exactly(self):
        for n in (1, 5, 40):
            mats = build_impact_matrices(exp_params(n=n, gamma=0.3))
            assert np.array_equal(mats.causal + mats.causal.T, mats.gram)

    def test_cost_shift_is_on_the_diagonal_only(self):
        theta = 0.17
        mats = build_impact_matrices(exp_params(n=6, theta=theta))
        diff = mats.gram_cost - mats.gram
        off = diff - np.diag(np.diag(diff))
        assert np.all(off == 0.0)
        np.testing.assert_allclose(np.diag(diff), 2.0 * theta, rtol=1e-14)

    def test_quadratic_form_is_positive(self):
        mats = build_impact_matrices(exp_params(n=20, rho=1.5))
        rng = np.random.default_rng(7)
        for _ in range(100):
            x = rng.standard_normal(mats.n_points)
            assert x @ mats.gram_cost @ x > 0.0

    def test_arrays_are_read_only(self):
        mats = build_impact_matrices(exp_params(n=3))
        with pytest.raises(ValueError):
            mats.gram[0, 0] = 99.0

    def test_power_law_gram(self):
        params = ModelParams(
            kernel=PowerLawKernel(0.5), grid=make_equidistant_grid(2, 2.0)
        )
        mats = build_impact_matrices(params)
        np.testing.assert_allclose(
            mats.gram[0], [1.0, 2.0 ** -0.5, 3.0 ** -0.5], rtol=1e-15
        )


class TestExponentialBasis:
    def test_reconstructs_gram_cost(self):
        for gamma, theta in ((0.0, 0.0), (0.4, 0.1), (1.2, 0.6)):
            params = exp_params(lam=0.8, rho=2.0, gamma=gamma, n=23, theta=theta)
            basis = build_exponential_basis(params)
            mats = build_impact_matrices(params)
            rebuilt = (
                basis.lam * basis.decay
                + basis.gamma * basis.ones
                + 2.0 * basis.theta * np.eye(basis.n + 1)
            )
            np.testing.assert_allclose(rebuilt, mats.gram_cost, rtol=1e-12)

    def test_decay_is_exactly_toeplitz(self):
        basis = build_exponential_basis(exp_params(n=60, rho=3.0))
        for d in range(basis.n + 1):
            band = np.diagonal(basis.decay, offset=d)
            assert np.ptp(band) == 0.0

    def test_scalars(self):
        basis = build_exponential_basis(exp_params(lam=2.0, rho=0.5, n=10, theta=0.25))
        assert basis.a == pytest.approx(np.exp(-0.5), rel=1e-15)
        assert basis.step == pytest.approx(np.exp(-0.05), rel=1e-14)
        assert basis.kappa == pytest.approx(0.5 + 2 * 0.25 / 2.0, rel=1e-15)

    def test_kappa_perm_crosses_one_at_critical_theta(self):
        lam, gamma = 1.0, 0.5
        theta_star = (lam + gamma) / 4.0
        below = build_exponential_basis(
            exp_params(lam, 1.0, gamma, n=2, theta=theta_star - 0.01)
        )
        at = build_exponential_basis(exp_params(lam, 1.0, gamma, n=2, theta=theta_star))
        assert below.kappa_perm < 1.0
        assert at.kappa_perm == pytest.approx(1.0, abs=1e-14)

    def test_triangular_pieces_single_interval(self):
        basis = build_exponential_basis(exp_params(rho=0.9, n=1))
        a = np.exp(-0.9)
        np.testing.assert_allclose(basis.decay_lower, [[1.0, 0.0], [a, 1.0]], rtol=1e-15)
        assert np.array_equal(basis.ones_upper, [[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_power_law_kernel(self):
        params = ModelParams(kernel=PowerLawKernel(0.5), grid=make_equidistant_grid(2, 1.0))
        with pytest.raises(ValueError):
            build_exponential_basis(params)

    def test_rejects_irregular_grid(self):
        params = ModelParams(
            kernel=ExponentialKernel(1.0, 1.0),
            grid=TimeGrid(np.array([0.0, 0.1, 0.5, 2.0])),
        )
        with pytest.raises(ValueError):
            build_exponential_basis(params)


class TestDecayInverse:
    def test_single_interval_closed_form(self):
        basis = build_exponential_basis(exp_params(rho=1.0, n=1))
        a = np.exp(-1.0)
        expected = np.array([[1.0, -a], [-a, 1.0]]) / (1.0 - a * a)
        np.testing.assert_allclose(decay_inverse(basis), expected, rtol=1e-14)

    def test_action_on_ones(self):
        basis = build_exponential_basis(exp_params(rho=2.0, n=8))
        b = basis.step
        expected = np.full(9, (1.0 - b) / (1.0 + b))
        expected[0] = expected[-1] = 1.0 / (1.0 + b)
        np.testing.assert_allclose(decay_inverse(basis) @ np.ones(9), expected, rtol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 10, 50, 200])
    @pytest.mark.parametrize("rho_t", [0.5, 1.0, 2.0])
    def test_residual(self, n, rho_t):
        basis = build_exponential_basis(exp_params(rho=rho_t, n=n, horizon=1.0))
        resid = decay_inverse(basis) @ basis.decay - np.eye(n + 1)
        assert op_norm(resid) < 1e-9


class TestWSystemInverse:
    def test_single_interval_closed_form(self):
        lam, rho = 1.7, 0.6
        basis = build_exponential_basis(exp_params(lam=lam, rho=rho, n=1, theta=0.0))
        a = np.exp(-rho)
        expected = np.array([[2.0, -4.0 * a], [0.0, 2.0]]) / lam
        np.testing.assert_allclose(w_system_inverse(basis), expected, rtol=1e-14)

    def test_is_upper_triangular_with_constant_diagonal(self):
        basis = build_exponential_basis(exp_params(lam=2.0, n=12, theta=0.3))
        inv = w_system_inverse(basis)
        assert np.all(np.tril(inv, -1) == 0.0)
        np.testing.assert_allclose(np.diag(inv), 1.0 / (2.0 * basis.kappa), rtol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 10, 50, 200])
    @pytest.mark.parametrize("theta", [0.0, 0.05, 0.25, 1.0])
    def test_residual_against_w_system(self, n, theta):
        params = exp_params(lam=1.0, rho=1.0, n=n, theta=theta)
        basis = build_exponential_basis(params)
        mats = build_impact_matrices(params)
        system = mats.gram_cost - mats.causal
        resid = system @ w_system_inverse(basis) - np.eye(n + 1)
        assert op_norm(resid) < 1e-9

    def test_matches_lu_solve(self):
        params = exp_params(lam=0.7, rho=2.5, n=40, theta=0.12)
        basis = build_exponential_basis(params)
        mats = build_impact_matrices(params)
        lu = np.linalg.inv(mats.gram_cost - mats.causal)
        np.testing.assert_allclose(w_system_inverse(basis), lu, atol=1e-10)

    def test_rejects_permanent_impact(self):
        basis = build_exponential_basis(exp_params(gamma=0.5, n=3))
        with pytest.raises(ValueError):
            w_system_inverse(basis)


class TestDecayLowerMixInverse:
    def test_alpha_zero_inverts_decay_lower(self):
        basis = build_exponential_basis(exp_params(rho=1.3, n=9))
        inv = decay_lower_mix_inverse(basis, 0.0)
        np.testing.assert_allclose(inv @ basis.decay_lower, np.eye(10), atol=1e-13)

    def test_single_interval_alpha_zero(self):
        basis = build_exponential_basis(exp_params(rho=0.8, n=1))
        a = np.exp(-0.8)
        np.testing.assert_allclose(
            decay_lower_mix_inverse(basis, 0.0), [[1.0, 0.0], [-a, 1.0]], rtol=1e-14
        )

    @pytest.mark.parametrize("n", [1, 2, 10, 50, 200])
    @pytest.mark.parametrize("alpha", [0.0, 1.0, 10.0])
    def test_residual(self, n, alpha):
        basis = build_exponential_basis(exp_params(rho=1.0, n=n))
        mix = basis.decay_lower + alpha * basis.decay
        resid = decay_lower_mix_inverse(basis, alpha) @ mix - np.eye(n + 1)
        assert op_norm(resid) < 1e-9

    @pytest.mark.parametrize("alpha", [-0.5, np.nan])
    def test_rejects_bad_alpha(self, alpha):
        basis = build_exponential_basis(exp_params(n=2))
        with pytest.raises(ValueError):
            decay_lower_mix_inverse(basis, alpha)


class TestThresholdCertificateMatrix:
    @pytest.mark.parametrize("gamma", [0.0, 0.4, 1.1])
    @pytest.mark.parametrize("delta", [0.0, 0.3, 2.0])
    def test_matches_defining_product(self, gamma, delta):
        basis = build_exponential_basis(exp_params(lam=1.2, rho=0.9, gamma=gamma, n=14))
        g = gamma / 1.2
        direct = np.linalg.solve(
            basis.decay, basis.decay_lower - g * basis.ones_upper
        ) + delta * np.linalg.inv(basis.decay)
        cert = threshold_certificate_matrix(basis, delta)
        np.testing.assert_allclose(cert, direct, atol=1e-10 * op_norm(direct))

    def test_delta_shift_is_the_decay_inverse(self):
        basis = build_exponential_basis(exp_params(gamma=0.6, n=7))
        delta = 0.85
        shift = threshold_certificate_matrix(basis, delta) - threshold_certificate_matrix(
            basis, 0.0
        )
        np.testing.assert_allclose(shift, delta * decay_inverse(basis), atol=1e-12)

    def test_structure_without_permanent_impact(self):
        basis = build_exponential_basis(exp_params(gamma=0.0, n=10))
        cert = threshold_certificate_matrix(basis, 0.0)
        cls = classify_matrix(cert)
        assert cls.is_z
        assert cls.is_nonsingular_m
        # only the first superdiagonal is populated when gamma = 0
        assert np.all(np.triu(cert, 2) == 0.0)

    def test_random_draws_are_m_matrices(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            gamma = float(rng.uniform(0.0, 2.0))
            delta = float(rng.uniform(0.0, 3.0))
            n = int(rng.integers(1, 30))
            basis = build_exponential_basis(
                exp_params(lam=1.0, rho=float(rng.uniform(0.3, 4.0)), gamma=gamma, n=n)
            )
            cls = classify_matrix(threshold_certificate_matrix(basis, delta))
            assert cls.is_nonsingular_m and cls.is_inverse_positive

    def test_rejects_negative_delta(self):
        basis = build_exponential_basis(exp_params(n=2))
        with pytest.raises(ValueError):
            threshold_certificate_matrix(basis, -0.1)


class TestClassifyMatrix:
    def test_identity(self):
        cls = classify_matrix(np.eye(4))
        assert cls.is_z and cls.is_nonsingular_m and cls.is_inverse_positive
        assert cls.min_leading_minor == pytest.approx(1.0)

    def test_z_but_not_m(self):
        cls = classify_matrix(np.array([[1.0, -2.0], [-2.0, 1.0]]))
        assert cls.is_z
        assert not cls.is_nonsingular_m
        assert not cls.is_inverse_positive
        assert cls.min_leading_minor == pytest.approx(-3.0)

    def test_inverse_positive_without_z_structure(self):
        positive = np.array([[1.0, 2.0], [3.0, 4.0]])
        m = np.linalg.inv(positive)
        cls = classify_matrix(m)
        assert not cls.is_z
        assert cls.is_inverse_positive
        assert not cls.is_nonsingular_m

    def test_triangular_z_with_positive_diagonal_is_m(self):
        rng = np.random.default_rng(2023)
        for k in range(100):
            n = int(rng.integers(2, 9))
            m = np.triu(-rng.uniform(0.0, 1.0, size=(n, n)), 1)
            m += np.diag(rng.uniform(0.5, 2.0, size=n))
            if k % 2:
                m = m.T
            cls = classify_matrix(m)
            assert cls.is_z
            assert cls.is_nonsingular_m
            assert cls.is_inverse_positive

    def test_m_property_and_inverse_positivity_agree_on_z_matrices(self):
        rng = np.random.default_rng(99)
        for k in range(50):
            n = int(rng.integers(2, 8))
            b = rng.uniform(0.1, 1.0, size=(n, n))
            np.fill_diagonal(b, 0.0)
            dominance = 1.5 if k % 2 else 0.5
            m = np.diag(dominance * b.sum(axis=1)) - b
            cls = classify_matrix(m)
            assert cls.is_z
            assert cls.is_nonsingular_m == cls.is_inverse_positive
            assert cls.is_nonsingular_m == (dominance > 1.0)

    def test_spectral_radius_violation_breaks_both_properties(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            b = rng.uniform(0.1, 1.0, size=(6, 6))
            s = 0.5 * float(np.abs(np.linalg.eigvals(b)).max())
            cls = classify_matrix(s * np.eye(6) - b)
            assert cls.is_z
            assert not cls.is_nonsingular_m
            assert not cls.is_inverse_positive

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            classify_matrix(np.ones((2, 3)))
