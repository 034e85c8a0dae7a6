"""Total power as server placement concentrates toward the square's center.

For each server-area ratio lambda in {0.25, 0.5, 0.75, 1.0}, sweeps m from
1 to 8 at fixed total capacity K=150 and n=100 users. Small lambda packs
all servers near the center; lambda=1 spreads them over the whole square.
"""

import argparse
from dataclasses import replace

from cmpc import ExperimentConfig, run_experiment, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="area_sweep.csv")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    base = ExperimentConfig(
        experiment_id="area-sweep",
        sweep_variable="m_K",
        sweep_values=tuple((m, 150.0) for m in range(1, 9)),
        n=100,
        trials=args.trials,
        seed_base=args.seed,
        timing=True,
    )
    rows = []
    for offset, lam in enumerate((0.25, 0.5, 0.75, 1.0)):
        config = replace(
            base,
            experiment_id=f"area-sweep-lam{lam}",
            lam=lam,
            seed_base=args.seed + offset * 10_000,
        )
        rows.extend(run_experiment(config))
    write_csv(rows, args.out)
    print(args.out)


if __name__ == "__main__":
    main()
