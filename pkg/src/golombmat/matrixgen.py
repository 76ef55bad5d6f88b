"""Circulant symmetric sign matrices built from a Golomb sequence.

Member ``(a, negated)`` of the ensemble has first row

    row[k] = sign * (-1)^(phi(k + a) + phi(a - k)) / (2 sqrt(n)),

and full entries ``A[i, j] = row[(j - i) mod n]``.  Rows are stored as
signed units (int8) with the ``1/(2 sqrt n)`` scale carried separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import OracleTooLargeError, PreconditionError
from .msequence import GolombSequence

DENSE_CAP = 1024

__all__ = [
    "DENSE_CAP",
    "CirculantSignMatrix",
    "EnsembleSpec",
    "sign_map",
    "unit_rows",
    "build_row",
    "dense_matrix",
    "ensemble_iter",
    "ensemble_sample",
    "sample_members",
]


def sign_map(bits):
    """Entrywise ``u -> (-1)^u`` for 0/1 input; scalars stay scalars."""
    arr = np.asarray(bits)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise PreconditionError("sign_map expects entries in {0, 1}")
    out = (1 - 2 * arr.astype(np.int8)).astype(np.int8)
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class CirculantSignMatrix:
    units: np.ndarray  # int8, +/-1, before negation flag and scale
    a: int
    negated: bool
    source: GolombSequence

    @property
    def n(self) -> int:
        return self.units.size

    @property
    def scale(self) -> float:
        return 1.0 / (2.0 * math.sqrt(self.n))

    @property
    def sign(self) -> int:
        return -1 if self.negated else 1

    @property
    def signed_units(self) -> np.ndarray:
        return self.sign * self.units.astype(np.int8)

    @property
    def row(self) -> np.ndarray:
        return self.signed_units * self.scale


def unit_rows(seq: GolombSequence, shifts) -> np.ndarray:
    """Unscaled, non-negated rows for several shifts at once, shape ``(len(shifts), n)``."""
    n = seq.n
    a = np.asarray(shifts, dtype=np.int64) % n
    # window w starts at ext[w]; row a needs ext[n+a+k] and ext[n+a-k]
    ext = np.concatenate([seq.bits, seq.bits, seq.bits])
    win = np.lib.stride_tricks.sliding_window_view(ext, n)
    fwd = win[n + a]
    bwd = win[a + 1][:, ::-1]
    return (1 - 2 * (fwd ^ bwd).astype(np.int8)).astype(np.int8)


def build_row(seq: GolombSequence, a: int = 0, negated: bool = False) -> CirculantSignMatrix:
    if not 0 <= a < seq.n:
        raise PreconditionError(f"shift a must lie in [0, {seq.n}), got {a}")
    units = unit_rows(seq, [a])[0]
    units.setflags(write=False)
    return CirculantSignMatrix(units, int(a), bool(negated), seq)


def dense_matrix(mat: CirculantSignMatrix, cap: int = DENSE_CAP) -> np.ndarray:
    """Full symmetric matrix; verification path only."""
    n = mat.n
    if n > cap:
        raise OracleTooLargeError(f"dense materialization capped at n = {cap}, got {n}")
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return mat.row[idx]


@dataclass(frozen=True)
class EnsembleSpec:
    """All shifts of one sequence and their negatives, uniform measure (2n members)."""

    sequence: GolombSequence

    @property
    def n(self) -> int:
        return self.sequence.n

    @property
    def size(self) -> int:
        return 2 * self.n


def ensemble_iter(spec: EnsembleSpec) -> Iterator[CirculantSignMatrix]:
    for a in range(spec.n):
        plain = build_row(spec.sequence, a, False)
        yield plain
        yield CirculantSignMatrix(plain.units, a, True, spec.sequence)


def sample_members(n: int, count: int, rng_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded i.i.d. uniform draws of ``(a, negated)`` as two arrays."""
    if count < 1:
        raise PreconditionError("count must be >= 1")
    rng = np.random.default_rng(rng_seed)
    shifts = rng.integers(0, n, size=count)
    negated = rng.integers(0, 2, size=count).astype(bool)
    return shifts, negated


def ensemble_sample(spec: EnsembleSpec, count: int, rng_seed: int) -> Iterator[CirculantSignMatrix]:
    shifts, negated = sample_members(spec.n, count, rng_seed)
    cache: dict[int, CirculantSignMatrix] = {}
    for a, neg in zip(shifts.tolist(), negated.tolist()):
        if a not in cache:
            cache[a] = build_row(spec.sequence, a, False)
        base = cache[a]
        yield base if not neg else CirculantSignMatrix(base.units, a, True, spec.sequence)
