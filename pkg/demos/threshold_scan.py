"""The critical cost level (lam + gamma) / 4, demonstrated three ways.

First: scanning every grid size up to 60 and five decay rates finds no
negative strategy component at theta = (lam + gamma) / 4, while knocking
theta down by just 0.01 always produces one. Second: the boundary is sharp
in the matrix-analytic sense; the certificate matrix behind the proof stays
a nonsingular M-matrix for every nonnegative shift delta. Third: for a fixed
grid the largest theta at which w still alternates sits strictly inside
(0, theta*), and bisection locates it to arbitrary resolution.
"""

import numpy as np

from hotpotato import (
    ExponentialKernel,
    ModelParams,
    build_exponential_basis,
    classify_matrix,
    make_equidistant_grid,
    oscillation_theta_bound,
    threshold_certificate_matrix,
    verify_threshold,
)


def main():
    for gamma in (0.0, 0.5, 1.0):
        theta_star = (1.0 + gamma) / 4.0
        clean = verify_threshold(lam=1.0, gamma=gamma, theta=theta_star)
        dirty = verify_threshold(lam=1.0, gamma=gamma, theta=theta_star - 0.01)
        wit = dirty.witness
        print(f"gamma = {gamma}: theta* = {theta_star}")
        print(f"  at theta*:        scan clean = {clean.passed}")
        print(f"  at theta* - 0.01: witness {wit.vector}[{wit.index}] = "
              f"{wit.value:.3e} (N = {wit.n_intervals}, rho = {wit.rho})")
    print()

    rng = np.random.default_rng(7)
    all_m = True
    for _ in range(20):
        params = ModelParams(
            kernel=ExponentialKernel(1.0, float(rng.uniform(0.3, 4.0)),
                                     float(rng.uniform(0.0, 2.0))),
            grid=make_equidistant_grid(int(rng.integers(1, 30)), 1.0),
        )
        cert = threshold_certificate_matrix(
            build_exponential_basis(params), float(rng.uniform(0.0, 3.0))
        )
        all_m = all_m and classify_matrix(cert).is_nonsingular_m
    print(f"certificate matrices on 20 random draws: all nonsingular M = {all_m}")
    print()

    print("largest theta with a strictly alternating w (lam = rho = 1):")
    for n in (10, 25, 40, 60):
        bound = oscillation_theta_bound(1.0, 1.0, 1.0, n, resolution=1e-5)
        print(f"  N = {n:2d}: {bound:.5f} (theta* = 0.25)")


if __name__ == "__main__":
    main()
