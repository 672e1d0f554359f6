"""Acceptance suite: one test per headline capability, one verdict line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines on
passing runs too. Every test prints ``ACCEPTANCE <label>: PASS/FAIL (...)``
before asserting, so a red run still reports every measured number.
"""

import time

import numpy as np
import pytest

from hotpotato import (
    ExponentialKernel,
    ModelParams,
    best_response,
    build_exponential_basis,
    build_impact_matrices,
    classify_matrix,
    decay_inverse,
    decay_lower_mix_inverse,
    detect_oscillation,
    expected_cost,
    fundamental_strategies,
    limit_report,
    make_equidistant_grid,
    monte_carlo_costs,
    path_limit_error,
    solve_equilibrium,
    sweep_n,
    sweep_theta,
    threshold_certificate_matrix,
    verify_threshold,
    w_system_inverse,
)


def record(label: str, ok: bool, detail: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {label}: {verdict} ({detail})")
    assert ok, f"{label}: {detail}"


def exp_params(lam=1.0, rho=1.0, gamma=0.0, n=10, horizon=1.0, theta=0.0):
    return ModelParams(
        kernel=ExponentialKernel(lam=lam, rho=rho, gamma=gamma),
        grid=make_equidistant_grid(n, horizon),
        theta=theta,
    )


def test_cost_curve_against_transaction_costs():
    """Equilibrium cost at N=501 over theta in [0, 0.5]: level, dip, recovery."""
    start = time.monotonic()
    thetas = 0.005 * np.arange(101)
    sweep = sweep_theta(
        ExponentialKernel(1.0, 1.0, 0.0), make_equidistant_grid(501, 1.0), thetas
    )
    elapsed = time.monotonic() - start
    cost = sweep.cost_x
    at_zero = cost[0]
    k_min = int(cost.argmin())
    theta_min, cost_min = thetas[k_min], cost[k_min]
    at_half = cost[-1]
    ok = (
        abs(at_zero - 0.7567) < 1e-3
        and 0.05 <= theta_min <= 0.07
        and abs(cost_min - 0.7397) < 1e-3
        and abs(at_half - 0.7407) < 1e-3
        and elapsed < 60.0
    )
    record(
        "cost-vs-theta curve",
        ok,
        f"cost(0)={at_zero:.4f}, min {cost_min:.4f} at theta={theta_min:.3f}, "
        f"cost(0.5)={at_half:.4f}, {elapsed:.1f}s",
    )


def test_single_interval_closed_forms():
    """v and w at N=1 match their closed forms on 100 random parameter draws."""
    rng = np.random.default_rng(2021)
    worst = 0.0
    for _ in range(100):
        lam = float(rng.uniform(0.2, 3.0))
        rho = float(rng.uniform(0.1, 3.0))
        gamma = float(rng.uniform(0.0, 2.0))
        theta = float(rng.uniform(0.0, 1.0))
        horizon = float(rng.uniform(0.2, 3.0))
        a = np.exp(-rho * horizon)
        v_raw = np.array(
            [lam * (3 - 2 * a) + gamma + 4 * theta, lam * (3 - 4 * a) - gamma + 4 * theta]
        )
        w_raw = np.array(
            [-0.5 * gamma + 2 * theta + (0.5 - a) * lam, 0.5 * (gamma + lam) + 2 * theta]
        )
        mats = build_impact_matrices(
            exp_params(lam, rho, gamma, n=1, horizon=horizon, theta=theta)
        )
        v, w = fundamental_strategies(mats)
        for got, raw in ((v, v_raw), (w, w_raw)):
            want = raw / raw.sum()
            worst = max(worst, float(np.abs(got - want).max() / np.abs(want).max()))
    record("single-interval closed forms", worst < 1e-12, f"max rel err {worst:.2e}")


def test_closed_form_inverse_oracles():
    """Three explicit inverse families hit identity to 1e-9 across the grid."""
    worst = {"w-system": 0.0, "decay": 0.0, "lower-mix": 0.0}
    for n in (1, 2, 10, 50, 200):
        eye = np.eye(n + 1)
        for theta in (0.0, 0.05, 0.25, 1.0):
            params = exp_params(n=n, theta=theta)
            basis = build_exponential_basis(params)
            mats = build_impact_matrices(params)
            resid = (mats.gram_cost - mats.causal) @ w_system_inverse(basis) - eye
            worst["w-system"] = max(worst["w-system"], np.abs(resid).sum(axis=1).max())
        basis = build_exponential_basis(exp_params(n=n))
        resid = decay_inverse(basis) @ basis.decay - eye
        worst["decay"] = max(worst["decay"], np.abs(resid).sum(axis=1).max())
        for alpha in (0.0, 1.0, 10.0):
            mix = basis.decay_lower + alpha * basis.decay
            resid = decay_lower_mix_inverse(basis, alpha) @ mix - eye
            worst["lower-mix"] = max(worst["lower-mix"], np.abs(resid).sum(axis=1).max())
    ok = all(value < 1e-9 for value in worst.values())
    detail = ", ".join(f"{key} {value:.2e}" for key, value in worst.items())
    record("closed-form inverse oracles", ok, detail)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0])
def test_critical_threshold_scan(gamma):
    """Nonnegativity holds exactly from theta* = (lam + gamma) / 4 upward."""
    theta_star = (1.0 + gamma) / 4.0
    clean = verify_threshold(lam=1.0, gamma=gamma, theta=theta_star)
    dirty = verify_threshold(lam=1.0, gamma=gamma, theta=theta_star - 0.01)
    ok = clean.passed and not dirty.passed and dirty.witness is not None
    wit = dirty.witness
    detail = (
        f"gamma={gamma}: clean at {theta_star}, witness "
        f"{wit.vector}[{wit.index}]={wit.value:.2e} at N={wit.n_intervals}, rho={wit.rho}"
        if wit is not None
        else f"gamma={gamma}: no witness found below the threshold"
    )
    record(f"critical threshold (gamma={gamma})", ok, detail)


def test_oscillation_amplitude_without_costs():
    """At N=50 and theta=0 the opposed strategy alternates and both exceed 60%."""
    v, w = fundamental_strategies(build_impact_matrices(exp_params(n=50, theta=0.0)))
    rep = detect_oscillation(w)
    max_v, max_w = float(np.abs(v).max()), float(np.abs(w).max())
    ok = rep.alternating and max_v > 0.6 and max_w > 0.6
    record(
        "hot-potato oscillation",
        ok,
        f"w alternating={rep.alternating}, max|v|={max_v:.3f}, max|w|={max_w:.3f}",
    )


def test_equilibrium_first_order_conditions():
    """Fixed-point and perturbation optimality over 50 random games."""
    rng = np.random.default_rng(77)
    worst_fp = 0.0
    violations = 0
    for _ in range(50):
        params = ModelParams(
            kernel=ExponentialKernel(
                lam=float(rng.uniform(0.2, 2.5)),
                rho=float(rng.uniform(0.2, 3.0)),
                gamma=float(rng.uniform(0.0, 1.5)),
            ),
            grid=make_equidistant_grid(int(rng.integers(1, 40)), float(rng.uniform(0.3, 2.0))),
            theta=float(rng.uniform(0.0, 1.0)),
            x0=float(rng.uniform(-2.0, 2.0)),
            y0=float(rng.uniform(-2.0, 2.0)),
        )
        sol = solve_equilibrium(params)
        mats = build_impact_matrices(params)
        fp_x = np.abs(best_response(sol.eta_star, params.x0, mats) - sol.xi_star).max()
        fp_y = np.abs(best_response(sol.xi_star, params.y0, mats) - sol.eta_star).max()
        worst_fp = max(worst_fp, fp_x, fp_y)
        n = mats.n_points
        for _ in range(200):
            d = rng.standard_normal(n)
            d -= d.mean()
            bar = -1e-10 * (1.0 + abs(sol.cost_x))
            if expected_cost(sol.xi_star + d, sol.eta_star, mats) - sol.cost_x < bar:
                violations += 1
    ok = worst_fp < 1e-9 and violations == 0
    record(
        "equilibrium optimality",
        ok,
        f"max fixed-point err {worst_fp:.2e}, {violations} perturbation violations",
    )


def test_high_frequency_component_limits():
    """Strategy components at N ~ 4096 sit within 5e-3 of their limits."""
    errs = {
        "theta=0 even": limit_report(1.0, 1.0, 1.0, 0.0, n_intervals=4096).max_abs_error,
        "theta=0 odd": limit_report(1.0, 1.0, 1.0, 0.0, n_intervals=4095).max_abs_error,
        "theta=0.5": limit_report(1.0, 1.0, 1.0, 0.5, n_intervals=4096).max_abs_error,
    }
    ok = all(err < 5e-3 for err in errs.values())
    detail = ", ".join(f"{key}: {err:.2e}" for key, err in errs.items())
    record("component limits", ok, detail)


def test_high_frequency_inventory_path():
    """The w inventory path at N=2048 tracks its linear limit profile."""
    ts = [0.1 * k for k in range(1, 10)]
    errs = {
        theta: path_limit_error(1.0, 1.0, 1.0, theta, n_intervals=2048, ts=ts)
        for theta in (0.1, 1.0)
    }
    ok = all(err < 1e-2 for err in errs.values())
    detail = ", ".join(f"theta={theta}: {err:.2e}" for theta, err in errs.items())
    record("inventory-path limit", ok, detail)


def test_monte_carlo_realized_costs():
    """1e5 realized-cost draws agree with the closed forms on 5 random games."""
    rng = np.random.default_rng(404)
    details = []
    ok = True
    for k in range(5):
        params = ModelParams(
            kernel=ExponentialKernel(
                lam=float(rng.uniform(0.3, 2.0)),
                rho=float(rng.uniform(0.3, 2.5)),
                gamma=float(rng.uniform(0.0, 1.0)),
            ),
            grid=make_equidistant_grid(int(rng.integers(2, 25)), 1.0),
            theta=float(rng.uniform(0.0, 0.5)),
            x0=float(rng.uniform(-1.5, 1.5)),
            y0=float(rng.uniform(-1.5, 1.5)),
        )
        sol = solve_equilibrium(params)
        report = monte_carlo_costs(
            sol.xi_star, sol.eta_star, params, s0=10.0, n_samples=100000, seed=1000 + k
        )
        ok = ok and report.within_three_stderr
        details.append(
            f"#{k} dev {abs(report.mean_x - report.closed_form_x):.1e}"
            f"<={3 * report.stderr_x:.1e}"
        )
    record("monte carlo costs", ok, "; ".join(details))


def test_m_matrix_certificates():
    """Certificate matrices are nonsingular M-matrices; triangular-Z law holds."""
    rng = np.random.default_rng(555)
    cert_ok = True
    for _ in range(50):
        basis = build_exponential_basis(
            exp_params(
                lam=1.0,
                rho=float(rng.uniform(0.2, 4.0)),
                gamma=float(rng.uniform(0.0, 2.0)),
                n=int(rng.integers(1, 31)),
            )
        )
        delta = float(rng.uniform(0.0, 3.0))
        cls = classify_matrix(threshold_certificate_matrix(basis, delta))
        cert_ok = cert_ok and cls.is_nonsingular_m and cls.is_inverse_positive
    tri_ok = True
    for k in range(100):
        n = int(rng.integers(2, 12))
        m = np.triu(-rng.uniform(0.0, 1.0, size=(n, n)), 1)
        m += np.diag(rng.uniform(0.3, 2.0, size=n))
        if k % 2:
            m = m.T
        cls = classify_matrix(m)
        tri_ok = tri_ok and cls.is_nonsingular_m and cls.is_inverse_positive
    record(
        "m-matrix certificates",
        cert_ok and tri_ok,
        f"50 certificate draws {'clean' if cert_ok else 'BROKEN'}, "
        f"100 triangular draws {'clean' if tri_ok else 'BROKEN'}",
    )


def test_cost_orderings_against_grid_size():
    """Cost vs N: sawtooth without costs, monotone decrease at theta=0.25."""
    ns = list(range(10, 61))
    kernel = ExponentialKernel(1.0, 1.0, 0.0)
    zero = sweep_n(kernel, ns, horizon=1.0, theta=0.0).cost_x
    quarter = sweep_n(kernel, ns, horizon=1.0, theta=0.25).cost_x
    d0 = np.diff(zero)
    sawtooth = bool(np.all(d0[:-1] * d0[1:] < 0.0))
    monotone = bool(np.all(np.diff(quarter) < 0.0))
    record(
        "cost-vs-N orderings",
        sawtooth and monotone,
        f"theta=0 sawtooth={sawtooth}, theta=0.25 decreasing={monotone}",
    )
