"""Total power across a server-count x total-capacity grid, n fixed at 100.

Crosses m in 1..8 with total capacity K in {100, 150, 200}; with ample
capacity the total power should stay roughly flat in m, while tight
capacity forces distant assignments as m grows.
"""

import argparse

from cmpc import ExperimentConfig, run_experiment, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="capacity_sweep.csv")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--oracle-budget", type=int, default=0)
    args = ap.parse_args()

    grid = tuple((m, float(total)) for total in (100, 150, 200) for m in range(1, 9))
    config = ExperimentConfig(
        experiment_id="capacity-sweep",
        sweep_variable="m_K",
        sweep_values=grid,
        n=100,
        trials=args.trials,
        seed_base=args.seed,
        oracle_budget=args.oracle_budget,
        timing=True,
    )
    write_csv(run_experiment(config), args.out)
    print(args.out)


if __name__ == "__main__":
    main()
