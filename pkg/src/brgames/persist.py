"""File formats: game documents, figure series, result records, DOT graphs.

Game document (JSON)::

    {"schema_version": 1, "n": 3, "m": 2,
     "payoffs": [...],            # n * m**n numbers, player-major, profile-rank-minor
     "labels": {"players": [...], "strategies": [[...], ...]}}   # optional

Exact values are written as ``"numerator/denominator"`` strings; float
columns are those fractions rounded to 15 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from . import closed_form
from .ensemble import EnsembleEstimate, ExactCensus
from .game import Game, GameError
from .graph import Classification, FunctionalGraph, node_label, to_dot

SCHEMA_VERSION = 1
FIGURES = ("fig2", "fig3", "fig4")


class SchemaError(GameError):
    pass


@dataclass
class GameDocument:
    game: Game
    labels: Optional[dict] = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        doc = {
            "schema_version": self.schema_version,
            "n": self.game.n,
            "m": self.game.m,
            "payoffs": [float(x) for x in self.game.payoffs.reshape(-1)],
        }
        if self.labels:
            doc["labels"] = self.labels
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "GameDocument":
        if not isinstance(doc, dict):
            raise SchemaError("game document must be a JSON object")
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaError(f"unknown schema version {version!r}")
        try:
            n, m, payoffs = int(doc["n"]), int(doc["m"]), doc["payoffs"]
        except KeyError as exc:
            raise SchemaError(f"missing field {exc.args[0]!r}") from None
        if not isinstance(payoffs, list) or len(payoffs) != n * m**n:
            got = len(payoffs) if isinstance(payoffs, list) else type(payoffs).__name__
            raise SchemaError(f"payoffs must be a list of n*m**n = {n * m**n} numbers, got {got}")
        for x in payoffs:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise SchemaError(f"payoff {x!r} is not a finite number")
        return cls(Game(n, m, payoffs), doc.get("labels"), version)


def _reject_constant(name: str):
    raise SchemaError(f"non-finite number {name} in game document")


def read_game_document(path) -> GameDocument:
    text = Path(path).read_text()
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return GameDocument.from_dict(doc)


def read_game(path) -> Game:
    return read_game_document(path).game


def write_game(game: Game, path, labels: Optional[dict] = None) -> None:
    text = json.dumps(GameDocument(game, labels).to_dict(), indent=2, allow_nan=False)
    Path(path).write_text(text + "\n")


def write_dot(fg: FunctionalGraph, path) -> None:
    Path(path).write_text(to_dot(fg))


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def render_float(x: Fraction) -> float:
    """``x`` rounded to 15 significant digits."""
    with localcontext() as ctx:
        ctx.prec = 15
        return float(Decimal(x.numerator) / Decimal(x.denominator))


def exact_record(x: Fraction) -> dict:
    return {"exact": fraction_str(x), "float": render_float(x)}


# Figure series

@dataclass
class FigureSeries:
    figure: str
    axes: dict
    rows: list[dict] = field(default_factory=list)
    log_scale: bool = False

    @property
    def params(self) -> list[str]:
        return list(self.axes)

    def to_dict(self) -> dict:
        return {"figure": self.figure, "axes": self.axes, "log_scale": self.log_scale, "rows": self.rows}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.params + ["exact", "float"])
        for row in self.rows:
            w.writerow([row[p] for p in self.params] + [row["exact"], repr(row["float"])])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _check_range(name: str, values: Sequence[int], low: int) -> list[int]:
    values = sorted(set(int(v) for v in values))
    if not values or values[0] < low:
        raise ValueError(f"{name} range must be non-empty with values >= {low}")
    return values


def figure_series(figure: str, ns: Iterable[int] = range(2, 6), ms: Optional[Iterable[int]] = None,
                  ks: Iterable[int] = range(1, 11)) -> FigureSeries:
    """Unique-PSNE frequencies (``fig2``) or 2-player k-PSNE frequencies (``fig3``, ``fig4``)."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    if figure == "fig2":
        ns = _check_range("n", ns, 2)
        ms = _check_range("m", ms if ms is not None else range(2, 101), 2)
        series = FigureSeries(figure, {"n": [ns[0], ns[-1]], "m": [ms[0], ms[-1]]})
        for n in ns:
            for m in ms:
                series.rows.append({"n": n, "m": m, **exact_record(closed_form.p1(n, m))})
        return series
    ms = _check_range("m", ms if ms is not None else range(2, 51), 2)
    ks = _check_range("k", ks, 1)
    series = FigureSeries(figure, {"m": [ms[0], ms[-1]], "k": [ks[0], ks[-1]]}, log_scale=figure == "fig4")
    for m in ms:
        for k in ks:
            series.rows.append({"m": m, "k": k, **exact_record(closed_form.p2_k(m, k))})
    return series


def emit_figure_data(figure: str, out_dir, **ranges) -> FigureSeries:
    """Write ``<figure>.csv`` and ``<figure>.json`` under ``out_dir``."""
    series = figure_series(figure, **ranges)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{figure}.csv", "w", newline="") as f:
        f.write(series.to_csv())
    (out / f"{figure}.json").write_text(series.to_json())
    return series


# Result records shared by the CLI's --json output

def classification_to_dict(c: Classification, n: int, m: int) -> dict:
    return {
        "psne": [list(s) for s in c.psne],
        "psne_count": c.psne_count,
        "convergent": c.convergent,
        "type": c.game_type.value,
        "cycles": [
            {"length": cy.length, "nodes": [list(node_label(v, n, m)) for v in cy.nodes]}
            for cy in c.cycles
        ],
    }


def census_to_dict(census: ExactCensus) -> dict:
    return {
        "n": census.n,
        "m": census.m,
        "total": census.total,
        "convergent": census.convergent_counts(),
        "non_convergent": census.non_convergent(),
        "counts": [
            {"convergent": c, "psne_count": k, "count": v} for (c, k), v in census.counts.items()
        ],
    }


def estimate_to_dict(est: EnsembleEstimate, reference: Optional[dict] = None) -> dict[str, Any]:
    rows = []
    for lab in est.labels():
        lo, hi = est.intervals[lab]
        row = {"label": lab, "count": est.successes(lab), "estimate": est.frequency(lab), "lo": lo, "hi": hi}
        if reference and lab in reference:
            row.update(exact_record(reference[lab]))
            row["within"] = Fraction(lo) <= reference[lab] <= Fraction(hi)
        rows.append(row)
    return {
        "n": est.n,
        "m": est.m,
        "trials": est.trials,
        "seed": est.seed,
        "z": est.z,
        "redraws": est.redraws,
        "counts": [{"type": t.value, "psne_count": k, "count": v} for (t, k), v in est.counts.items()],
        "rows": rows,
    }
