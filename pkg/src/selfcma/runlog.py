"""Per-generation run traces and their CSV form.

One `GenRecord` per completed generation. Serialization is deliberately
rigid: fixed column order, floats printed with repr-exact precision, LF
newlines, trailing newline. Identical logs therefore produce byte-identical
files on every platform, which the determinism checks rely on.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyInput

CSV_COLUMNS = (
    "gen",
    "evals",
    "best_f",
    "median_f",
    "sigma",
    "c1",
    "cmu",
    "cc",
    "stop_reason",
)
CSV_HEADER = ",".join(CSV_COLUMNS)

_INT_COLUMNS = ("gen", "evals")
_FLOAT_COLUMNS = ("best_f", "median_f", "sigma", "c1", "cmu", "cc")


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips a double (17 significant digits)."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class GenRecord:
    """One generation's logged quantities; column order matches CSV_COLUMNS."""

    gen: int
    evals: int
    best_f: float
    median_f: float
    sigma: float
    c1: float
    cmu: float
    cc: float
    stop_reason: str = ""

    def to_row(self) -> str:
        parts = [str(self.gen), str(self.evals)]
        parts += [
            format_float(getattr(self, name)) for name in _FLOAT_COLUMNS
        ]
        parts.append(self.stop_reason)
        return ",".join(parts)

    @classmethod
    def from_row(cls, row: str) -> "GenRecord":
        parts = row.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ValueError(f"expected {len(CSV_COLUMNS)} fields, got {len(parts)}")
        return cls(
            gen=int(parts[0]),
            evals=int(parts[1]),
            best_f=float(parts[2]),
            median_f=float(parts[3]),
            sigma=float(parts[4]),
            c1=float(parts[5]),
            cmu=float(parts[6]),
            cc=float(parts[7]),
            stop_reason=parts[8],
        )


@dataclass
class RunLog:
    """Ordered per-generation records of one run (or one aggregate of runs)."""

    records: list[GenRecord]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name: str) -> np.ndarray:
        """One column across all records, as a float or int array."""
        if name not in CSV_COLUMNS or name == "stop_reason":
            raise KeyError(f"no numeric column named {name!r}")
        dtype = np.int64 if name in _INT_COLUMNS else float
        return np.array([getattr(r, name) for r in self.records], dtype=dtype)

    def to_csv_text(self) -> str:
        lines = [CSV_HEADER]
        lines += [r.to_row() for r in self.records]
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        """Write atomically: a temp file in the target directory, then rename."""
        path = Path(path)
        fd, tmp_name = tempfile.mkstemp(
            prefix=path.name + ".", suffix=".tmp", dir=path.parent
        )
        try:
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(self.to_csv_text())
            # mkstemp files are 0600; give the result the usual umask-based mode
            umask = os.umask(0)
            os.umask(umask)
            os.chmod(tmp_name, 0o666 & ~umask)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    @classmethod
    def from_csv(cls, path) -> "RunLog":
        text = Path(path).read_text()
        lines = [ln for ln in text.split("\n") if ln != ""]
        if not lines or lines[0] != CSV_HEADER:
            raise ValueError(f"{path}: missing or wrong header")
        return cls(records=[GenRecord.from_row(ln) for ln in lines[1:]])


def lower_median(values):
    """Element at index (k - 1) // 2 of the sorted values (no interpolation)."""
    ordered = sorted(values)
    if not ordered:
        raise EmptyInput("median of zero values")
    return ordered[(len(ordered) - 1) // 2]


def aggregate_medians(logs: list[RunLog]) -> RunLog:
    """Column-wise lower-median across runs, per generation index.

    At each index only the runs still alive (long enough) contribute, so the
    aggregate is as long as the longest input log. The result's stop_reason
    fields are empty; a median of labels has no meaning.
    """
    if not logs:
        raise EmptyInput("no run logs to aggregate")
    longest = max(len(log) for log in logs)
    records = []
    for idx in range(longest):
        alive = [log.records[idx] for log in logs if len(log) > idx]
        records.append(
            GenRecord(
                gen=int(lower_median([r.gen for r in alive])),
                evals=int(lower_median([r.evals for r in alive])),
                best_f=float(lower_median([r.best_f for r in alive])),
                median_f=float(lower_median([r.median_f for r in alive])),
                sigma=float(lower_median([r.sigma for r in alive])),
                c1=float(lower_median([r.c1 for r in alive])),
                cmu=float(lower_median([r.cmu for r in alive])),
                cc=float(lower_median([r.cc for r in alive])),
                stop_reason="",
            )
        )
    return RunLog(records=records)
