"""What survives infinite trading frequency.

As the grid refines, individual components of the opposed strategy w settle
toward explicit limits. With positive transaction costs all the action
drains to the back of the schedule: front components vanish and the last few
components approach a geometric profile. Without costs the front and back
both stay alive, with limits that depend on whether the interval count is
even or odd. The remaining inventory along the schedule converges to a
straight line whose slope is set by the impact decay rate alone.

Run with --plot to write inventory_path_limit.png (needs matplotlib).
"""

import argparse

from hotpotato import (
    ExponentialKernel,
    ModelParams,
    build_exponential_basis,
    inventory_path,
    inventory_profile_limit,
    limit_report,
    make_equidistant_grid,
    path_limit_error,
    w_unnormalized_vector,
)


def show_report(title, report):
    print(title)
    for key in sorted(report.component_limits, key=lambda k: (k[:4] != "fron", k)):
        pred = report.component_limits[key]
        emp = report.empirical_values[key]
        print(f"  {key:8s} predicted {pred:+.6f}   at N={report.n_intervals} {emp:+.6f}")
    print(f"  worst gap: {report.max_abs_error:.2e}")
    print()


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    show_report(
        "theta = 0, even interval counts:",
        limit_report(1.0, 1.0, 1.0, 0.0, n_intervals=4096),
    )
    show_report(
        "theta = 0, odd interval counts:",
        limit_report(1.0, 1.0, 1.0, 0.0, n_intervals=4095),
    )
    show_report(
        "theta = 0.5 (parity no longer matters):",
        limit_report(1.0, 1.0, 1.0, 0.5, n_intervals=4096),
    )

    err = path_limit_error(1.0, 1.0, 1.0, 0.5, n_intervals=2048)
    print(f"inventory path vs straight-line limit at N = 2048: "
          f"max gap {err:.2e} over t = 0.1..0.9")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        n = 2048
        grid = make_equidistant_grid(n, 1.0)
        params = ModelParams(
            kernel=ExponentialKernel(lam=1.0, rho=1.0), grid=grid, theta=0.5
        )
        u = w_unnormalized_vector(build_exponential_basis(params))
        path = inventory_path(u / u.sum(), grid)
        ts = [k / 100 for k in range(100)]
        limit = [inventory_profile_limit(1.0, 1.0, t) for t in ts]
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.step(path.times, path.positions, where="post", label=f"N = {n}")
        ax.plot(ts, limit, "--", label="high-frequency limit")
        ax.set_xlabel("time")
        ax.set_ylabel("remaining inventory share")
        ax.legend()
        fig.tight_layout()
        fig.savefig("inventory_path_limit.png", dpi=150)
        print("wrote inventory_path_limit.png")


if __name__ == "__main__":
    main()
