"""Impact of the attenuation exponent on total power and load balance.

Re-solves the same datasets under alpha in 1.0..2.0 (step 0.25) with m=6
servers, total capacity 150 and n=100 users. Total power should rise
steeply with alpha while the load variance tends to shrink.
"""

import argparse

from cmpc import ExperimentConfig, run_experiment, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="attenuation_sweep.csv")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--oracle-budget", type=int, default=0)
    args = ap.parse_args()

    config = ExperimentConfig(
        experiment_id="attenuation-sweep",
        sweep_variable="alpha",
        sweep_values=(1.0, 1.25, 1.5, 1.75, 2.0),
        m=6,
        n=100,
        kbar=25.0,
        trials=args.trials,
        seed_base=args.seed,
        oracle_budget=args.oracle_budget,
        timing=True,
    )
    write_csv(run_experiment(config), args.out)
    print(args.out)


if __name__ == "__main__":
    main()
