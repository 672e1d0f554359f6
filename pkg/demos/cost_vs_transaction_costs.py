"""Why a little friction helps: equilibrium cost against the cost level theta.

Counterintuitively, both agents are better off with moderate transaction
costs than with none. Costs discourage the mutual front-running that makes
the zero-cost equilibrium expensive; push theta far enough and the direct
friction takes over again. On a 501-interval grid the total expected cost
dips from 0.7567 at theta = 0 to a minimum of about 0.7397 near theta = 0.06
before climbing back to 0.7407 at theta = 0.5.

Run with --plot to write cost_vs_theta.png (needs matplotlib).
"""

import argparse

import numpy as np

from hotpotato import ExponentialKernel, make_equidistant_grid, sweep_theta


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", action="store_true")
    parser.add_argument("--n", type=int, default=501, help="trading intervals")
    args = parser.parse_args()

    thetas = 0.005 * np.arange(101)
    sweep = sweep_theta(
        ExponentialKernel(lam=1.0, rho=1.0),
        make_equidistant_grid(args.n, 1.0),
        thetas,
    )

    k = int(sweep.cost_x.argmin())
    print(f"grid: N = {args.n}, theta from 0 to 0.5 in steps of 0.005")
    print(f"cost at theta = 0.000:  {sweep.cost_x[0]:.4f}")
    print(f"minimum cost:           {sweep.cost_x[k]:.4f} at theta = {thetas[k]:.3f}")
    print(f"cost at theta = 0.500:  {sweep.cost_x[-1]:.4f}")
    saved = (sweep.cost_x[0] - sweep.cost_x[k]) / sweep.cost_x[0]
    print(f"the dip saves both agents {100 * saved:.2f}% of the zero-cost bill")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(sweep.values, sweep.cost_x)
        ax.axvline(thetas[k], linestyle=":", color="gray")
        ax.set_xlabel("transaction cost level theta")
        ax.set_ylabel("expected equilibrium cost per agent")
        fig.tight_layout()
        fig.savefig("cost_vs_theta.png", dpi=150)
        print("wrote cost_vs_theta.png")


if __name__ == "__main__":
    main()
