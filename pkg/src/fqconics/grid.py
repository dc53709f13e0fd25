"""Experiment grid: construction sizes against the three lower bounds, one CSV row per cell."""

from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .constructions import (
    build_degree2_kakeya,
    build_ellipse_pseudo_kakeya,
    build_parabolic_kakeya,
    degree2_base_upper,
    lower_bounds,
    parabolic_upper,
    verify_conical_kakeya,
    verify_elliptic_coverage,
)
from .field import field_for_order

CONSTRUCTIONS = ("parabolic-kakeya", "degree2-kakeya", "ellipse-family")
COLUMNS = [
    "q",
    "n",
    "construction",
    "size",
    "upper_formula",
    "upper_formula_float",
    "thm1",
    "thm1_float",
    "kakeya_mult",
    "kakeya_mult_float",
    "nikodym_mult",
    "nikodym_mult_float",
    "verified",
    "wall_time",
    "error",
]


class GridSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    q: int
    n: int
    construction: str


def _int_values(key: str, text: str) -> list[int]:
    out: list[int] = []
    for part in text.split("|"):
        part = part.strip()
        try:
            if ".." in part:
                lo, rest = part.split("..", 1)
                hi, _, step = rest.partition(":")
                step_v = int(step) if step else 1
                if step_v < 1:
                    raise GridSpecError(f"{key}: step must be positive")
                out.extend(range(int(lo), int(hi) + 1, step_v))
            elif part:
                out.append(int(part))
        except ValueError as e:
            if isinstance(e, GridSpecError):
                raise
            raise GridSpecError(f"{key}: cannot parse {part!r}") from None
    return out


def parse_grid(spec: str) -> list[Cell]:
    """``q=5..13:2,n=2..3,construction=parabolic-kakeya|ellipse-family``; '|' separates list values.

    Cells are listed in q, n, construction order. An empty spec is an empty grid.
    """
    if not spec.strip():
        return []
    fields: dict[str, str] = {}
    for item in spec.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in ("q", "n", "construction"):
            raise GridSpecError(f"unknown grid key in {item!r}")
        if key in fields:
            raise GridSpecError(f"grid key {key!r} given twice")
        fields[key] = val
    missing = {"q", "n", "construction"} - fields.keys()
    if missing:
        raise GridSpecError(f"grid spec lacks {', '.join(sorted(missing))}")
    qs = _int_values("q", fields["q"])
    ns = _int_values("n", fields["n"])
    cons = [c.strip() for c in fields["construction"].split("|") if c.strip()]
    for c in cons:
        if c not in CONSTRUCTIONS:
            raise GridSpecError(f"construction: unknown {c!r}")
    return [Cell(q, n, c) for q, n, c in itertools.product(qs, ns, cons)]


def build(name: str, F, n: int):
    if name == "parabolic-kakeya":
        return build_parabolic_kakeya(F, n)
    if name == "degree2-kakeya":
        return build_degree2_kakeya(F, n)
    if name == "ellipse-family":
        if n != 2:
            raise ValueError("the ellipse family lives in the plane (n = 2)")
        return build_ellipse_pseudo_kakeya(F)
    raise ValueError(f"unknown construction {name!r}")


def upper_formula(name: str, q: int, n: int) -> Fraction:
    if name == "parabolic-kakeya":
        return parabolic_upper(q, n)
    if name == "degree2-kakeya":
        return degree2_base_upper(q, n)
    return Fraction(q + 1)


def _rat(x: Fraction) -> str:
    return str(x)


def _flt(x: Fraction) -> str:
    return f"{float(x):.6f}"


def run_cell(cell: Cell, timing: bool = False) -> dict:
    row = {c: "" for c in COLUMNS}
    row.update(q=str(cell.q), n=str(cell.n), construction=cell.construction, verified="false")
    start = time.perf_counter()
    try:
        if cell.q % 2 == 0:
            raise ValueError("even q")
        F = field_for_order(cell.q)
        W = build(cell.construction, F, cell.n)
        bounds = lower_bounds(cell.q, cell.n)
        up = upper_formula(cell.construction, cell.q, cell.n)
        if cell.construction == "ellipse-family":
            verdict = verify_elliptic_coverage(W)
        else:
            verdict = verify_conical_kakeya(W)
        row.update(
            size=str(len(W)),
            upper_formula=_rat(up),
            upper_formula_float=_flt(up),
            thm1=_rat(bounds.thm1),
            thm1_float=_flt(bounds.thm1),
            kakeya_mult=_rat(bounds.kakeya_mult),
            kakeya_mult_float=_flt(bounds.kakeya_mult),
            nikodym_mult=_rat(bounds.nikodym_mult),
            nikodym_mult_float=_flt(bounds.nikodym_mult),
            verified="true" if verdict.accepted else "false",
        )
        if not verdict.accepted:
            row["error"] = verdict.summary()
    except Exception as e:  # recorded in-row, the run continues
        row["error"] = str(e) or type(e).__name__
    if timing:
        row["wall_time"] = f"{time.perf_counter() - start:.3f}"
    return row


def _run_cell_timed(cell: Cell) -> dict:
    return run_cell(cell, True)


def run_grid(cells: list[Cell], timing: bool = False, workers: int = 1) -> list[dict]:
    """Rows in grid order regardless of how many workers run the cells."""
    if workers > 1 and len(cells) > 1:
        fn = _run_cell_timed if timing else run_cell
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, cells))
    return [run_cell(c, timing) for c in cells]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
