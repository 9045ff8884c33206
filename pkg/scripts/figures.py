"""Write the data behind all three frequency figures to ./figures."""

import sys

from brgames.persist import emit_figure_data

out = sys.argv[1] if len(sys.argv) > 1 else "figures"
for fig in ("fig2", "fig3", "fig4"):
    series = emit_figure_data(fig, out)
    print(f"{fig}: {len(series.rows)} rows -> {out}/{fig}.csv, {out}/{fig}.json")
