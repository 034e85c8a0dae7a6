"""Total power / runtime as the user count grows, at fixed server fleet.

Sweeps n from 20 to 200 in steps of 10 with m=10 servers of average
capacity 50 on the 100x100 square (c=1, alpha=2), 50 trials per point.
The exact solver is off by default; enable it with --oracle-budget for
small n if ratio columns are wanted.
"""

import argparse

from cmpc import ExperimentConfig, run_experiment, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="user_sweep.csv")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--n-max", type=int, default=200)
    ap.add_argument("--oracle-budget", type=int, default=0)
    args = ap.parse_args()

    config = ExperimentConfig(
        experiment_id="user-sweep",
        sweep_variable="n",
        sweep_values=tuple(range(20, args.n_max + 1, 10)),
        m=10,
        kbar=50.0,
        trials=args.trials,
        seed_base=args.seed,
        oracle_budget=args.oracle_budget,
        timing=True,
    )
    write_csv(run_experiment(config), args.out)
    print(args.out)


if __name__ == "__main__":
    main()
