"""Sweep records, their CSV/JSON serialization, and power-law decay fits."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Iterable, TextIO

import numpy as np

from ..errors import InsufficientDataError, PreconditionError

CSV_HEADER = ["m", "n", "kind", "t", "s", "sample_mode", "samples", "mean", "std", "reference", "abs_error", "wall_time"]
FIT_FLOOR = 1e-14
KINDS = ("pure", "mixed", "mixed-shift")


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SweepRecord:
    m: int
    n: int
    kind: str
    t: int
    s: int
    mean: float
    std: float
    reference: float
    abs_error: float
    sample_mode: str
    samples: int
    wall_time: float = 0.0

    @classmethod
    def build(cls, m, kind, t, s, mean, std, reference, sample_mode, samples, wall_time=0.0) -> SweepRecord:
        if kind not in KINDS:
            raise PreconditionError(f"unknown record kind {kind!r}")
        return cls(m, 2**m - 1, kind, t, s, float(mean), float(std), float(reference),
                   abs(float(mean) - float(reference)), sample_mode, int(samples), float(wall_time))

    @property
    def sort_key(self):
        return (self.m, self.t, self.s, KINDS.index(self.kind))

    def csv_row(self, include_timing: bool = False) -> list[str]:
        return [
            str(self.m), str(self.n), self.kind, str(self.t), str(self.s), self.sample_mode, str(self.samples),
            fmt_float(self.mean), fmt_float(self.std), fmt_float(self.reference), fmt_float(self.abs_error),
            fmt_float(self.wall_time if include_timing else 0.0),
        ]


def write_csv(records: Iterable[SweepRecord], fh: TextIO, include_timing: bool = False) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.csv_row(include_timing))


def records_to_csv(records: Iterable[SweepRecord], include_timing: bool = False) -> str:
    buf = io.StringIO()
    write_csv(records, buf, include_timing)
    return buf.getvalue()


def read_csv(fh: TextIO) -> list[SweepRecord]:
    out = []
    for row in csv.DictReader(fh):
        out.append(SweepRecord(
            m=int(row["m"]), n=int(row["n"]), kind=row["kind"], t=int(row["t"]), s=int(row["s"]),
            mean=float(row["mean"]), std=float(row["std"]), reference=float(row["reference"]),
            abs_error=float(row["abs_error"]), sample_mode=row["sample_mode"], samples=int(row["samples"]),
            wall_time=float(row["wall_time"]),
        ))
    return out


def records_to_json(records: Iterable[SweepRecord], meta: dict | None = None) -> str:
    payload = {"records": [asdict(r) for r in records]}
    if meta:
        payload["meta"] = meta
    return json.dumps(payload, indent=2, sort_keys=True)


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r_squared: float
    points: int


def fit_decay(records: Iterable[SweepRecord]) -> DecayFit:
    """Least-squares line through ``(log n, log abs_error)``; exact zeros are skipped."""
    pts = [(r.n, r.abs_error) for r in records if r.abs_error > FIT_FLOOR]
    if len(pts) < 3:
        raise InsufficientDataError(f"need at least 3 records with abs_error > {FIT_FLOOR:g}, got {len(pts)}")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(float(slope), float(intercept), r2, len(pts))


def count_inversions(values: list[float]) -> int:
    """Number of adjacent increases in a sequence expected to be non-increasing."""
    return sum(1 for a, b in zip(values, values[1:]) if b > a)
