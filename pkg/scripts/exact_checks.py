"""Closed forms, Kirchhoff counts and exhaustive censuses side by side.

    python scripts/exact_checks.py
"""

import time

from brgames.closed_form import p1
from brgames.ensemble import enumerate_all_configurations
from brgames.persist import fraction_str
from brgames.spectral import type_a_frequency_via_kirchhoff

CENSUS = [(2, 2), (2, 3), (2, 4), (3, 2)]
KIRCHHOFF_ONLY = [(3, 3), (4, 2), (3, 4), (5, 2), (4, 3)]


def main():
    print(f"{'n':>2} {'m':>2}  {'closed form':>14}  {'kirchhoff':>14}  {'census':>14}  agree")
    for n, m in CENSUS + KIRCHHOFF_ONLY:
        t0 = time.perf_counter()
        closed = p1(n, m)
        kirchhoff = type_a_frequency_via_kirchhoff(n, m)
        census = enumerate_all_configurations(n, m).frequency(True, 1) if (n, m) in CENSUS else None
        agree = closed == kirchhoff and (census is None or census == closed)
        print(f"{n:>2} {m:>2}  {fraction_str(closed):>14}  {fraction_str(kirchhoff):>14}  "
              f"{fraction_str(census) if census is not None else '-':>14}  {agree}  "
              f"({time.perf_counter() - t0:.2f}s)")

    census = enumerate_all_configurations(3, 2)
    print("\n(3,2) convergent counts by PSNE count:", census.convergent_counts(),
          "non-convergent:", census.non_convergent(), "of", census.total)


if __name__ == "__main__":
    main()
