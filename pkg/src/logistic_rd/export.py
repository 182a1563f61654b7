"""CSV/JSON writers and gnuplot script emission.

Numbers are written with 17 significant digits so that files round-trip
exactly and identical runs give byte-identical output.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

FLOAT_FMT = "%.17g"

PROFILE_HEADER = ("theta", "U", "D")
ITERATES_HEADER = ("theta", "D_numeric", "D0", "D1", "D2")


def write_csv(stream: TextIO, header: Sequence[str], rows) -> None:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(FLOAT_FMT % v for v in row) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        # JSON has no inf/nan literals
        return None if not math.isfinite(v) else float(FLOAT_FMT % v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def table_json(header: Sequence[str], rows) -> dict:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    return {name: rows[:, k] for k, name in enumerate(header)}


def write_table(path: Path, header: Sequence[str], rows, fmt: str = "csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = path.with_suffix(".json")
        path.write_text(dumps(table_json(header, rows)))
    else:
        path = path.with_suffix(".csv")
        with path.open("w", newline="") as fh:
            write_csv(fh, header, rows)
    return path


def gnuplot_script(csv_path: Path, x: str, ys: Iterable[str], header: Sequence[str],
                   title: str = "", group_by: str | None = None, groups=()) -> str:
    """Plain gnuplot commands plotting columns ``ys`` against ``x``.

    With ``group_by`` one curve of the first ``ys`` column is drawn for each
    value in ``groups`` (e.g. one radial profile per sampled time).
    """
    cols = {name: k + 1 for k, name in enumerate(header)}
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{x}'",
    ]
    if title:
        lines.append(f"set title '{title}'")
    name = Path(csv_path).name
    if group_by is None:
        parts = [f"'{name}' using {cols[x]}:{cols[y]} with lines title '{y}'" for y in ys]
        lines.append("plot " + ", \\\n     ".join(parts))
    else:
        y = list(ys)[0]
        values = " ".join(FLOAT_FMT % g for g in groups)
        g = cols[group_by]
        lines.append(
            f'plot for [g in "{values}"] \'{name}\' using {cols[x]}:(${g} == g+0 ? ${cols[y]} : 1/0) '
            f"with lines title '{group_by}='.g"
        )
    return "\n".join(lines) + "\n"


def write_gnuplot(csv_path: Path, x: str, ys: Iterable[str], header: Sequence[str],
                  title: str = "", group_by: str | None = None, groups=()) -> Path:
    csv_path = Path(csv_path)
    out = csv_path.with_suffix(".gp")
    out.write_text(gnuplot_script(csv_path, x, ys, header, title, group_by, groups))
    return out
