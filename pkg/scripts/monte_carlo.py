"""Monte Carlo estimates against exact references for a grid of (n, m).

    python scripts/monte_carlo.py --trials 100000 --seed 7
"""

import argparse
from dataclasses import replace

from brgames.ensemble import SampleConfig, reference_values
from brgames.persist import estimate_to_dict

GRID = [(2, 2), (2, 5), (3, 2), (3, 3), (4, 2), (2, 10), (5, 2)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--z", type=float, default=3.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    base = SampleConfig(2, 2, trials=args.trials, seed=args.seed, z=args.z, workers=args.workers)
    for n, m in GRID:
        cfg = replace(base, n=n, m=m)
        res = estimate_to_dict(cfg.run(), reference_values(n, m))
        print(f"n={n} m={m}")
        for row in res["rows"]:
            if "exact" not in row:
                continue
            flag = "ok" if row["within"] else "MISS"
            print(f"  {row['label']:>4}  est={row['estimate']:.5f}  [{row['lo']:.5f}, {row['hi']:.5f}]"
                  f"  exact={row['float']:.5f}  {flag}")


if __name__ == "__main__":
    main()
