"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py``; verdicts are listed in the
"acceptance criteria" section of the terminal summary.
"""

import math

import numpy as np

from golombmat.gf2poly import (
    DEFAULT_CACHE,
    enumerate_primitive,
    euler_phi,
    is_primitive,
    is_reciprocal_pair,
    iter_primitive,
)
from golombmat.harness import count_inversions, fit_decay, run_independence, run_moments
from golombmat.harness.cli import main
from golombmat.matrixgen import EnsembleSpec, build_row, dense_matrix, ensemble_iter
from golombmat.msequence import (
    autocorrelation,
    companion_polynomial,
    decimate,
    generate,
    least_period,
    lfsr_bits,
)
from golombmat.spectral import (
    ShiftSpectra,
    eigenvalues,
    ensemble_mixed_stats,
    mixed_trace,
    semicircle_moment,
    trace_power,
)

SLOPE_BAND = (-1.5, -0.6)
TOL_IDENTITY = 1e-12
TOL_ORACLE = 1e-9


def in_band(slope):
    return SLOPE_BAND[0] <= slope <= SLOPE_BAND[1]


def test_criterion_01_exact_identities(criterion):
    worst1 = worst2 = 0.0
    members = 0
    for m in range(3, 14):
        seq = generate(enumerate_primitive(m, 1)[0])
        n = seq.n
        target = 1 / (2 * math.sqrt(n))
        sp = ShiftSpectra(seq)
        t1, t2 = sp.traces(1), sp.traces(2)
        # negated members: tr(-A) = -tr(A), tr((-A)^2) = tr(A^2)
        worst1 = max(worst1, float(np.max(np.abs(t1 - target))))
        worst2 = max(worst2, float(np.max(np.abs(t2 - 0.25))))
        members += 2 * n
        if m <= 9:
            for mat in ensemble_iter(EnsembleSpec(seq)):
                worst1 = max(worst1, abs(trace_power(mat, 1) - mat.sign * target))
                worst2 = max(worst2, abs(trace_power(mat, 2) - 0.25))
    ok = worst1 <= TOL_IDENTITY and worst2 <= TOL_IDENTITY
    criterion("1 exact identities tr(A)=sign/(2 sqrt n), tr(A^2)=1/4", ok,
              f"{members} members, max err r=1 {worst1:.2e}, r=2 {worst2:.2e}")


def test_criterion_02_oracle_equivalence(criterion):
    worst_tr = worst_eig = 0.0
    checks = 0
    for m in (3, 4, 5):
        f = enumerate_primitive(m, 1)[0]
        seqA = generate(f)
        seqB = companion_polynomial(f).sequence if m >= 5 else generate(list(iter_primitive(m))[-1])
        n = seqA.n
        for a in range(n):
            A = build_row(seqA, a, negated=bool(a % 2))
            B = build_row(seqB, (7 * a + 3) % n, negated=bool(a % 3 == 0))
            dA, dB = dense_matrix(A), dense_matrix(B)
            worst_eig = max(worst_eig, float(np.max(np.abs(np.sort(eigenvalues(A).values) - np.linalg.eigvalsh(dA)))))
            powA = [np.linalg.matrix_power(dA, k) for k in range(9)]
            powB = [np.linalg.matrix_power(dB, k) for k in range(9)]
            for t in range(9):
                for s in range(9 - t):
                    ref = np.trace(powA[t] @ powB[s]) / n
                    worst_tr = max(worst_tr, abs(mixed_trace(A, B, (t, s)) - ref))
                    checks += 1
    ok = worst_tr <= TOL_ORACLE and worst_eig <= TOL_ORACLE
    criterion("2 spectral traces and eigenvalues match dense oracle", ok,
              f"{checks} traces, max err {worst_tr:.2e}; eig max err {worst_eig:.2e}")


def test_criterion_03_semicircle_moments(criterion):
    even_ok = [semicircle_moment(r).value for r in (2, 4, 6)] == [1 / 4, 1 / 8, 5 / 64]
    odd_ok = all(semicircle_moment(r).exact == 0 and semicircle_moment(r).value == 0.0 for r in range(1, 16, 2))
    criterion("3 semicircle moments 1/4, 1/8, 5/64 and odd zeros", even_ok and odd_ok)


def test_criterion_04_pure_moment_convergence(criterion):
    recs = run_moments(range(7, 14), [1, 3, 4, 5, 7])
    r4 = [r for r in recs if r.t == 4]
    errs = [r.abs_error for r in r4]
    inversions = count_inversions(errs)
    fit = fit_decay(r4)
    odd_zero = all(r.mean == 0.0 for r in recs if r.t % 2)
    ok = inversions <= 1 and in_band(fit.slope) and odd_zero
    criterion("4 E[beta_4] error monotone, slope in [-1.5,-0.6], odd moments zero", ok,
              f"inversions={inversions}, slope={fit.slope:.3f} (r2={fit.r_squared:.4f}), odd zero={odd_zero}")


def test_criterion_05_mixed_moment_decay(criterion):
    ts = [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (1, 4)]
    recs, pairs = run_independence(range(7, 14), ts)
    shift11 = [r for r in recs if r.kind == "mixed-shift" and (r.t, r.s) == (1, 1)]
    fit = fit_decay(shift11)
    odd_zero = all(r.mean == 0.0 for r in recs if r.kind == "mixed" and (r.t + r.s) % 2)
    valid = all(not is_reciprocal_pair(p.f, p.g) for p in pairs)
    ok = in_band(fit.slope) and odd_zero and valid
    criterion("5 shift-only |E tr(AB)| slope in [-1.5,-0.6], full odd means zero", ok,
              f"slope={fit.slope:.3f} (r2={fit.r_squared:.4f}), odd zero={odd_zero}")


def test_criterion_06_variance_decay(criterion):
    stds = {}
    for m in (7, 13):
        f = enumerate_primitive(m, 1)[0]
        seqA, seqB = generate(f), companion_polynomial(f).sequence
        est = ensemble_mixed_stats(EnsembleSpec(seqA), EnsembleSpec(seqB), (1, 1), "sampled", rng_seed=2024, samples=4096)
        assert est.samples == 4096
        stds[m] = est.std
    criterion("6 sampled std of tr(AB) decreases m=7 -> m=13", stds[13] < stds[7],
              f"std(7)={stds[7]:.4e}, std(13)={stds[13]:.4e}")


def test_criterion_07_msequence_battery(criterion):
    failures = []
    total = 0
    for m in range(3, 17):
        n = 2**m - 1
        primes = DEFAULT_CACHE.prime_divisors(n)
        for f in iter_primitive(m):
            total += 1
            seq = generate(f)
            long = lfsr_bits(f, n + m)
            ac = autocorrelation(seq.bits)
            good = (
                np.array_equal(long[n:], long[:m])
                and least_period(seq.bits, primes) == n
                and seq.weight == 2 ** (m - 1)
                and ac[0] == n
                and bool(np.all(ac[1:] == -1))
            )
            if not good:
                failures.append(f.hex)
    criterion("7 m-sequence period, weight, two-level autocorrelation", not failures,
              f"{total} polynomials, failures={failures[:5]}")


def test_criterion_08_census(criterion):
    bad = {}
    for m in range(2, 13):
        found = sum(1 for _ in iter_primitive(m))
        n = 2**m - 1
        expected = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1) // m
        if found != expected or expected != euler_phi(n) // m:
            bad[m] = (found, expected)
    criterion("8 primitive polynomial census equals phi(2^m-1)/m", not bad, f"mismatches={bad}")


def test_criterion_09_companion_validity(criterion):
    bad = []
    for m in range(5, 17):
        f = enumerate_primitive(m, 1)[0]
        g = companion_polynomial(f).poly
        if not is_primitive(g) or is_reciprocal_pair(f, g) or g.degree != m:
            bad.append(m)
    not_rotations = []
    for m in range(3, 11):
        for f in iter_primitive(m):
            seq = generate(f)
            doubled = np.concatenate([seq.bits, seq.bits]).tobytes()
            if doubled.find(decimate(seq, 2).tobytes()) < 0:
                not_rotations.append(f.hex)
    criterion("9 companions primitive and non-reciprocal, 2-decimation is a rotation",
              not bad and not not_rotations, f"bad companions={bad}, not rotations={not_rotations[:5]}")


def test_criterion_10_reproducibility(criterion, tmp_path):
    jobs = {
        "moments": ["moments", "--m-range", "7..10", "--r", "2,3,4,6"],
        "moments-sampled": ["moments", "--m-range", "7..10", "--r", "4", "--sampling", "sampled", "--samples", "512"],
        "independence": ["independence", "--m-range", "7..10", "--ts", "1,1", "2,2"],
        "independence-sampled": ["independence", "--m-range", "7..10", "--ts", "1,1", "--sampling", "sampled",
                                 "--samples", "512"],
        "independence-hybrid": ["independence", "--m-range", "9..10", "--ts", "1,1", "--exhaustive-cap", "100",
                                "--samples", "512"],
    }
    differing = []
    for name, argv in jobs.items():
        outputs = []
        for run, workers in enumerate(["1", "1", "2"]):
            path = tmp_path / f"{name}-{run}.csv"
            assert main(argv + ["--seed", "7", "--workers", workers, "--out", str(path)]) == 0
            outputs.append(path.read_bytes())
        if len(set(outputs)) != 1:
            differing.append(name)
    criterion("10 byte-identical CSVs across runs and worker counts", not differing,
              f"{len(jobs)} invocations x 3 runs, differing={differing}")
