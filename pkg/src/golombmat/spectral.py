"""Pure and mixed spectral moments of circulant sign matrices.

Equal-size circulant matrices share the Fourier eigenbasis, so with
``lam_j = sum_k row[k] cos(2 pi j k / n)``

    tr(A^t B^s) = (1/n) sum_j lam_j(A)^t lam_j(B)^s.

Rows are symmetric and ``n = 2^m - 1`` is odd, so ``lam_j = lam_{n-j}`` and
the ensemble code keeps only ``j = 0..(n-1)/2`` with weights ``1, 2, 2, ...``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import DimensionError, NumericalFailureError, PreconditionError
from .gf2poly import is_reciprocal_pair
from .matrixgen import CirculantSignMatrix, EnsembleSpec, sample_members, unit_rows
from .msequence import GolombSequence

log = logging.getLogger(__name__)

MAX_ORDER = 16
EXHAUSTIVE_PAIR_CAP = 511
IMAG_TOL = 1e-9

__all__ = [
    "MAX_ORDER",
    "EXHAUSTIVE_PAIR_CAP",
    "EigenSpectrum",
    "SemicircleRef",
    "MixedMomentSpec",
    "MomentEstimate",
    "ShiftSpectra",
    "eigenvalues",
    "trace_power",
    "mixed_trace",
    "centered_mixed_trace",
    "catalan",
    "semicircle_moment",
    "ensemble_moment_stats",
    "ensemble_mixed_stats",
]


@dataclass(frozen=True, eq=False)
class EigenSpectrum:
    values: np.ndarray
    n: int


@dataclass(frozen=True)
class SemicircleRef:
    r: int
    exact: Fraction

    @property
    def value(self) -> float:
        return float(self.exact)


@dataclass(frozen=True)
class MixedMomentSpec:
    t: int
    s: int

    def __post_init__(self):
        if self.t < 0 or self.s < 0 or self.t + self.s < 1:
            raise PreconditionError(f"invalid mixed moment powers ({self.t}, {self.s})")
        if self.t + self.s > MAX_ORDER:
            raise PreconditionError(f"moments beyond order {MAX_ORDER} are not supported")


@dataclass(frozen=True)
class MomentEstimate:
    t: int
    s: int
    n: int
    mean: float
    std: float
    samples: int
    sample_mode: str = "exhaustive"
    sub_ensemble: str = "full"
    reciprocal_warning: bool = False


def _ipow(x: np.ndarray, r: int) -> np.ndarray:
    """``x**r`` by repeated squaring (exact same rounding for every caller)."""
    if r == 0:
        return np.ones_like(x)
    result = None
    base = x
    while r:
        if r & 1:
            result = base.copy() if result is None else result * base
        r >>= 1
        if r:
            base = base * base
    return result


def _fft_real(units: np.ndarray, axis: int = -1, half: bool = False) -> np.ndarray:
    x = units.astype(np.float64)
    F = np.fft.rfft(x, axis=axis) if half else np.fft.fft(x, axis=axis)
    n = units.shape[axis]
    resid = float(np.max(np.abs(F.imag))) if F.size else 0.0
    if resid > IMAG_TOL * math.sqrt(n):
        raise NumericalFailureError(
            f"imaginary residue {resid:.3e} exceeds {IMAG_TOL:g}*sqrt(n); row symmetry is broken"
        )
    return F.real


def eigenvalues(mat: CirculantSignMatrix) -> EigenSpectrum:
    values = _fft_real(mat.signed_units) * mat.scale
    return EigenSpectrum(values, mat.n)


def _spectrum(mat) -> np.ndarray:
    return mat.values if isinstance(mat, EigenSpectrum) else eigenvalues(mat).values


def trace_power(mat, r: int) -> float:
    """Normalized trace ``(1/n) Tr(A^r)``."""
    if r < 0:
        raise PreconditionError("power must be nonnegative")
    lam = _spectrum(mat)
    return math.fsum((lam ** r).tolist()) / lam.size


def mixed_trace(matA, matB, spec: MixedMomentSpec | tuple[int, int]) -> float:
    t, s = (spec.t, spec.s) if isinstance(spec, MixedMomentSpec) else spec
    lamA, lamB = _spectrum(matA), _spectrum(matB)
    if lamA.size != lamB.size:
        raise DimensionError(f"size mismatch: {lamA.size} vs {lamB.size}")
    return math.fsum((lamA ** t * lamB ** s).tolist()) / lamA.size


def centered_mixed_trace(matA, matB, spec: MixedMomentSpec | tuple[int, int]) -> float:
    """``tr((A^t - d_t I)(B^s - z_s I))`` with semicircle references for ``d_t`` and ``z_s``."""
    t, s = (spec.t, spec.s) if isinstance(spec, MixedMomentSpec) else spec
    dt = semicircle_moment(t).value
    zs = semicircle_moment(s).value
    return (
        mixed_trace(matA, matB, (t, s))
        - dt * trace_power(matB, s)
        - zs * trace_power(matA, t)
        + dt * zs
    )


def catalan(k: int) -> int:
    """``C_k`` via ``C_{j+1} = C_j * 2(2j+1)/(j+2)``; every step divides exactly."""
    c = 1
    for j in range(k):
        c = c * 2 * (2 * j + 1) // (j + 2)
    return c


def semicircle_moment(r: int) -> SemicircleRef:
    """Moment ``r`` of the semicircle law on ``[-1, 1]``: ``C_{r/2} / 2^r`` or 0."""
    if r < 0:
        raise PreconditionError("moment order must be nonnegative")
    if r % 2:
        return SemicircleRef(r, Fraction(0))
    return SemicircleRef(r, Fraction(catalan(r // 2), 2 ** r))


# -- ensembles --------------------------------------------------------------

class ShiftSpectra:
    """Half spectra of every shift of one sequence, computed once per shift.

    Kept in memory when the full table fits in ``memory_limit`` bytes,
    otherwise recomputed block by block on each pass.
    """

    def __init__(self, seq: GolombSequence, memory_limit: int = 512 * 2**20, block: int | None = None):
        self.seq = seq
        self.n = seq.n
        self.h = (self.n + 1) // 2
        self.weights = np.full(self.h, 2.0)
        self.weights[0] = 1.0
        self.scale = 1.0 / (2.0 * math.sqrt(self.n))
        self.block = block or max(1, min(self.n, (32 * 2**20) // (8 * self.n)))
        self._table: np.ndarray | None = None
        self._resident = self.n * self.h * 8 <= memory_limit
        self._traces: dict[int, np.ndarray] = {}
        self._powers: dict[int, np.ndarray] = {}

    def compute(self, shifts) -> np.ndarray:
        units = unit_rows(self.seq, shifts)
        return _fft_real(units, axis=1, half=True) * self.scale

    def blocks(self) -> Iterator[tuple[int, np.ndarray]]:
        """Yield ``(first_shift, spectra)`` for consecutive blocks covering all shifts."""
        if self._table is not None:
            yield 0, self._table
            return
        parts = []
        for start in range(0, self.n, self.block):
            spec = self.compute(np.arange(start, min(start + self.block, self.n)))
            if self._resident:
                parts.append(spec)
            yield start, spec
        if self._resident:
            self._table = np.concatenate(parts, axis=0)

    def table(self) -> np.ndarray:
        if self._table is None:
            for _ in self.blocks():
                pass
        if self._table is None:
            raise PreconditionError("spectrum table exceeds memory limit")
        return self._table

    def rows(self, shifts) -> np.ndarray:
        shifts = np.asarray(shifts, dtype=np.int64)
        if self._table is not None:
            return self._table[shifts]
        uniq, inverse = np.unique(shifts, return_inverse=True)
        return self.compute(uniq)[inverse] if shifts.size else np.empty((0, self.h))

    def sampled_traces(self, shifts, r: int) -> np.ndarray:
        shifts = np.asarray(shifts, dtype=np.int64)
        out = np.empty(shifts.size)
        for i in range(0, shifts.size, self.block):
            spec = self.rows(shifts[i:i + self.block])
            out[i:i + spec.shape[0]] = np.sum(_ipow(spec, r) * self.weights, axis=1) / self.n
        return out

    def prefetch(self, trace_orders=(), power_orders=()) -> None:
        """Fill the trace and mean-power memos for several orders in one pass."""
        need_t = sorted(set(trace_orders) - self._traces.keys())
        need_p = sorted(set(power_orders) - self._powers.keys())
        if not need_t and not need_p:
            return
        tr = {r: np.empty(self.n) for r in need_t}
        pw = {r: np.zeros(self.h) for r in need_p}
        for start, spec in self.blocks():
            stop = start + spec.shape[0]
            for r in need_t:
                tr[r][start:stop] = np.sum(_ipow(spec, r) * self.weights, axis=1) / self.n
            for r in need_p:
                pw[r] += np.sum(_ipow(spec, r), axis=0)
        self._traces.update(tr)
        self._powers.update({r: v / self.n for r, v in pw.items()})

    def traces(self, r: int) -> np.ndarray:
        """``tr(A(a)^r)`` for every shift ``a``."""
        self.prefetch(trace_orders=[r])
        return self._traces[r]

    def mean_power(self, r: int) -> np.ndarray:
        """Average of ``lam_j^r`` over all shifts, per frequency ``j``."""
        self.prefetch(power_orders=[r])
        return self._powers[r]


def _spectra_for(obj, cache: dict | None = None) -> ShiftSpectra:
    if isinstance(obj, ShiftSpectra):
        return obj
    seq = obj.sequence if isinstance(obj, EnsembleSpec) else obj
    if cache is not None:
        key = id(seq)
        if key not in cache:
            cache[key] = ShiftSpectra(seq)
        return cache[key]
    return ShiftSpectra(seq)


def _std_about(values: np.ndarray, mean: float) -> float:
    return float(np.sqrt(np.mean((values - mean) ** 2))) if values.size else 0.0


def ensemble_moment_stats(
    spec,
    r: int,
    sampling: str = "exhaustive",
    samples: int = 4096,
    rng_seed: int = 1,
) -> MomentEstimate:
    """Mean and population std of ``tr(A^r)`` over the sign-symmetric ensemble.

    ``spec`` is an EnsembleSpec, a GolombSequence or a ShiftSpectra cache.
    """
    if r < 1:
        raise PreconditionError("moment order must be >= 1")
    if r > MAX_ORDER:
        raise PreconditionError(f"moments beyond order {MAX_ORDER} are not supported")
    sp = _spectra_for(spec)
    n = sp.n
    if sampling == "exhaustive":
        X = sp.traces(r)
        if r % 2:
            # each member cancels against its negative
            return MomentEstimate(r, 0, n, 0.0, float(np.sqrt(np.mean(X ** 2))), 2 * n, "exhaustive")
        mean = float(np.mean(X))
        return MomentEstimate(r, 0, n, mean, _std_about(X, mean), 2 * n, "exhaustive")
    if sampling == "sampled":
        shifts, negated = sample_members(n, samples, rng_seed)
        X = sp.sampled_traces(shifts, r)
        if r % 2:
            X = np.where(negated, -X, X)
        mean = float(np.mean(X))
        return MomentEstimate(r, 0, n, mean, _std_about(X, mean), samples, "sampled")
    raise PreconditionError(f"unknown sampling mode {sampling!r}")


def _sign_factor(t: int, s: int) -> int:
    # averaging sigma^t tau^s over independent signs
    return int(t % 2 == 0 and s % 2 == 0)


def ensemble_mixed_stats(
    specA,
    specB,
    mm: MixedMomentSpec | tuple[int, int],
    sampling: str = "exhaustive",
    rng_seed: int = 1,
    samples: int = 4096,
    exhaustive_cap: int = EXHAUSTIVE_PAIR_CAP,
    sub_ensemble: str = "full",
) -> MomentEstimate:
    """Statistics of ``tr(A^t B^s)`` over the product ensemble.

    ``sub_ensemble="shift"`` restricts both factors to the non-negated
    members.  In exhaustive mode the mean is exact for every n (the pair
    average factorizes per frequency); the std is exact up to
    ``exhaustive_cap`` and estimated from ``samples`` seeded pairs above it
    (reported as sample_mode ``"hybrid"``).
    """
    if not isinstance(mm, MixedMomentSpec):
        mm = MixedMomentSpec(*mm)
    t, s = mm.t, mm.s
    if sub_ensemble not in ("full", "shift"):
        raise PreconditionError(f"unknown sub-ensemble {sub_ensemble!r}")
    spA, spB = _spectra_for(specA), _spectra_for(specB)
    if spA.n != spB.n:
        raise DimensionError(f"size mismatch: {spA.n} vs {spB.n}")
    n = spA.n
    warn = is_reciprocal_pair(spA.seq.source_poly, spB.seq.source_poly)
    if warn:
        log.warning("ensembles share a polynomial or its reciprocal (%s, %s)",
                    spA.seq.source_poly, spB.seq.source_poly)
    c = 1 if sub_ensemble == "shift" else _sign_factor(t, s)
    pairs = n * n if sub_ensemble == "shift" else 4 * n * n

    if sampling == "exhaustive" and n <= exhaustive_cap:
        P = _ipow(spA.table(), t) * spA.weights
        Q = _ipow(spB.table(), s)
        X = (P @ Q.T) / n
        if c:
            mean = float(np.mean(X))
            std = _std_about(X, mean)
        else:
            mean = 0.0
            std = float(np.sqrt(np.mean(X ** 2)))
        return MomentEstimate(t, s, n, mean, std, pairs, "exhaustive", sub_ensemble, warn)

    if sampling not in ("exhaustive", "sampled"):
        raise PreconditionError(f"unknown sampling mode {sampling!r}")
    X = _sampled_pair_traces(spA, spB, t, s, samples, rng_seed, sub_ensemble)
    if sampling == "sampled":
        mean = float(np.mean(X))
        return MomentEstimate(t, s, n, mean, _std_about(X, mean), samples, "sampled", sub_ensemble, warn)

    mean = c * float(np.sum(spA.mean_power(t) * spB.mean_power(s) * spA.weights) / n)
    return MomentEstimate(t, s, n, mean, _std_about(X, mean), samples, "hybrid", sub_ensemble, warn)


def _sampled_pair_traces(spA, spB, t, s, count, rng_seed, sub_ensemble) -> np.ndarray:
    if count < 1:
        raise PreconditionError("sample count must be >= 1")
    a, sa = sample_members(spA.n, count, rng_seed)
    b, sb = sample_members(spB.n, count, rng_seed + 1)
    X = np.empty(count)
    step = min(spA.block, spB.block)
    for i in range(0, count, step):
        lam = spA.rows(a[i:i + step])
        mu = spB.rows(b[i:i + step])
        X[i:i + step] = np.sum(_ipow(lam, t) * _ipow(mu, s) * spA.weights, axis=1) / spA.n
    if sub_ensemble == "full":
        sign = np.where(sa & (t % 2 == 1), -1.0, 1.0) * np.where(sb & (s % 2 == 1), -1.0, 1.0)
        X = X * sign
    return X
