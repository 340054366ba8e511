"""CSV emission.  Floats use 17 significant digits so output round-trips exactly."""

from __future__ import annotations

import csv
import io

import numpy as np


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    text = csv_text(header, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def columns_to_rows(*cols):
    return zip(*cols)


def read_column(path, col: str):
    """(t, values) from a CSV with a header; ``t`` is None if there is no t column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or col not in reader.fieldnames:
            raise KeyError(f"column {col!r} not found in {path}; have {reader.fieldnames}")
        has_t = "t" in reader.fieldnames
        ts, vals = [], []
        for row in reader:
            vals.append(float(row[col]))
            if has_t:
                ts.append(float(row["t"]))
    return (np.array(ts) if has_t else None), np.array(vals)
