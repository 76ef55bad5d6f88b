"""Convergence and independence sweeps over the degree ``m``."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from ..errors import PreconditionError
from ..gf2poly import BinaryPolynomial, enumerate_primitive, is_primitive, is_reciprocal_pair
from ..matrixgen import build_row
from ..msequence import companion_polynomial, generate
from ..spectral import (
    EXHAUSTIVE_PAIR_CAP,
    MAX_ORDER,
    ShiftSpectra,
    eigenvalues,
    ensemble_mixed_stats,
    ensemble_moment_stats,
    semicircle_moment,
)
from .records import SweepRecord

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairInfo:
    m: int
    f: BinaryPolynomial
    g: BinaryPolynomial
    decimation: int

    def as_dict(self) -> dict:
        return {"m": self.m, "f": self.f.hex, "g": self.g.hex, "decimation": self.decimation}


def polynomial_for(m: int, poly_index: int = 0) -> BinaryPolynomial:
    if poly_index < 0:
        raise PreconditionError("poly index must be >= 0")
    return enumerate_primitive(m, poly_index + 1)[poly_index]


def _map(fn, items, workers: int):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def moments_point(m: int, r_list, sampling: str, samples: int, seed: int, poly_index: int = 0) -> list[SweepRecord]:
    start = time.perf_counter()
    seq = generate(polynomial_for(m, poly_index))
    sp = ShiftSpectra(seq)
    if sampling == "exhaustive":
        sp.prefetch(trace_orders=r_list)
    out = []
    for r in r_list:
        est = ensemble_moment_stats(sp, r, sampling, samples, seed)
        out.append(SweepRecord.build(m, "pure", r, 0, est.mean, est.std, semicircle_moment(r).value,
                                     est.sample_mode, est.samples, time.perf_counter() - start))
    log.info("moments m=%d done in %.2fs", m, time.perf_counter() - start)
    return out


def run_moments(m_values, r_list, sampling="exhaustive", samples=4096, seed=1, workers=1, poly_index=0) -> list[SweepRecord]:
    r_list = sorted(set(r_list))
    if any(r < 1 or r > MAX_ORDER for r in r_list):
        raise PreconditionError(f"moment orders must lie in 1..{MAX_ORDER}")
    fn = partial(moments_point, r_list=r_list, sampling=sampling, samples=samples, seed=seed, poly_index=poly_index)
    recs = [r for chunk in _map(fn, list(m_values), workers) for r in chunk]
    return sorted(recs, key=lambda r: r.sort_key)


def companion_pair(m: int, poly_index: int = 0, max_d: int | None = None):
    f = polynomial_for(m, poly_index)
    seq_f = generate(f)
    comp = companion_polynomial(f, seq_f, max_d=max_d)
    if not (is_primitive(f) and is_primitive(comp.poly)) or is_reciprocal_pair(f, comp.poly):
        raise PreconditionError(f"invalid pair for m={m}: {f}, {comp.poly}")
    return PairInfo(m, f, comp.poly, comp.decimation), seq_f, comp.sequence


def independence_point(m: int, ts_list, sampling: str, samples: int, seed: int,
                       exhaustive_cap: int = EXHAUSTIVE_PAIR_CAP, poly_index: int = 0,
                       max_d: int | None = None) -> tuple[PairInfo, list[SweepRecord]]:
    start = time.perf_counter()
    info, seq_f, seq_g = companion_pair(m, poly_index, max_d)
    log.info("m=%d f=%s g=%s d=%d", m, info.f.hex, info.g.hex, info.decimation)
    spA, spB = ShiftSpectra(seq_f), ShiftSpectra(seq_g)
    n = seq_f.n
    if sampling == "exhaustive" and n > exhaustive_cap:
        spA.prefetch(power_orders=[t for t, _ in ts_list])
        spB.prefetch(power_orders=[s for _, s in ts_list])
    out = []
    for t, s in ts_list:
        ref = semicircle_moment(t).value * semicircle_moment(s).value
        for sub, kind in (("full", "mixed"), ("shift", "mixed-shift")):
            est = ensemble_mixed_stats(spA, spB, (t, s), sampling, seed, samples, exhaustive_cap, sub)
            out.append(SweepRecord.build(m, kind, t, s, est.mean, est.std, ref, est.sample_mode, est.samples,
                                         time.perf_counter() - start))
    log.info("independence m=%d done in %.2fs", m, time.perf_counter() - start)
    return info, out


def run_independence(m_values, ts_list, sampling="exhaustive", samples=4096, seed=1, workers=1,
                     exhaustive_cap=EXHAUSTIVE_PAIR_CAP, poly_index=0, max_d=None):
    """Records for every (m, t, s); returns ``(records, pairs)``."""
    ts_list = sorted(set(tuple(ts) for ts in ts_list))
    for t, s in ts_list:
        if t < 1 or s < 1 or t + s > MAX_ORDER:
            raise PreconditionError(f"invalid mixed powers ({t}, {s})")
    fn = partial(independence_point, ts_list=ts_list, sampling=sampling, samples=samples, seed=seed,
                 exhaustive_cap=exhaustive_cap, poly_index=poly_index, max_d=max_d)
    results = _map(fn, list(m_values), workers)
    pairs = [info for info, _ in results]
    recs = sorted((r for _, chunk in results for r in chunk), key=lambda r: r.sort_key)
    return recs, pairs


def spectrum_histogram(m: int, poly_index: int = 0, bins: int = 50, value_range=None):
    """Normalized eigenvalue histogram of ``A_n(0)``: ``(edges, mass)``."""
    if bins < 10:
        raise PreconditionError("at least 10 bins are required")
    seq = generate(polynomial_for(m, poly_index))
    lam = eigenvalues(build_row(seq, 0)).values
    lo, hi = value_range if value_range is not None else (float(lam.min()), float(lam.max()))
    counts, edges = np.histogram(lam, bins=bins, range=(lo, hi))
    return edges, counts / lam.size, lam
