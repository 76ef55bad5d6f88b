"""Golomb sequences (binary m-sequences) from primitive polynomials.

With ``f(x) = x^m + sum_{i<m} f_i x^i`` the sequence obeys
``s[k+m] = sum_{i<m} f_i s[k+i]`` over GF(2).  Generation starts from the
fill ``(0, ..., 0, 1)`` and extends the prefix by doubling: because
``x^N = sum_i r_i x^i (mod f)`` we have ``s[k+N] = sum_i r_i s[k+i]``, so a
prefix of length ``N`` yields the next ``N - m + 1`` bits with ``m`` vector
XORs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import NoCompanionError, NotCoprimeError, NotPrimitiveError, PreconditionError, ZeroSequenceError
from .gf2poly import BinaryPolynomial, _powmod, is_primitive, is_reciprocal_pair, reciprocal

log = logging.getLogger(__name__)

__all__ = [
    "GolombSequence",
    "Companion",
    "lfsr_bits",
    "generate",
    "shift",
    "decimate",
    "minimal_polynomial",
    "companion_polynomial",
    "decimation_candidates",
    "autocorrelation",
    "least_period",
]


@dataclass(frozen=True, eq=False)
class GolombSequence:
    """One period of an m-sequence, ``len(bits) == 2^m - 1``."""

    bits: np.ndarray
    source_poly: BinaryPolynomial
    m: int = field(init=False)

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "m", self.source_poly.degree)
        if bits.size != (1 << self.m) - 1:
            raise PreconditionError(f"sequence length {bits.size} is not 2^{self.m} - 1")

    @property
    def n(self) -> int:
        return self.bits.size

    def __len__(self) -> int:
        return self.bits.size

    def __getitem__(self, i):
        """Periodic access; indices are reduced mod ``n``."""
        return self.bits[np.mod(i, self.n)]

    def __eq__(self, other):
        if not isinstance(other, GolombSequence):
            return NotImplemented
        return self.source_poly == other.source_poly and np.array_equal(self.bits, other.bits)

    __hash__ = None

    @property
    def weight(self) -> int:
        return int(self.bits.sum(dtype=np.int64))

    def to_text(self) -> str:
        """Polynomial header line followed by the raw ASCII bit string."""
        return self.source_poly.format_line() + "\n" + "".join("01"[b] for b in self.bits.tolist())


class Companion(NamedTuple):
    poly: BinaryPolynomial
    sequence: GolombSequence
    decimation: int


def lfsr_bits(f: BinaryPolynomial, length: int, fill=None) -> np.ndarray:
    """First ``length`` terms of the linear recurrence with characteristic polynomial ``f``."""
    m = f.degree
    if m < 1:
        raise PreconditionError("characteristic polynomial needs degree >= 1")
    if fill is None:
        fill = [0] * (m - 1) + [1]
    out = np.zeros(max(length, m), dtype=np.uint8)
    out[:m] = np.asarray(fill, dtype=np.uint8) & 1
    have = m
    while have < length:
        block = min(have - m + 1, length - have)
        r = _powmod(2, have, f.value)
        acc = np.zeros(block, dtype=np.uint8)
        for i in range(m):
            if (r >> i) & 1:
                acc ^= out[i:i + block]
        out[have:have + block] = acc
        have += block
    return out[:length]


def generate(f: BinaryPolynomial) -> GolombSequence:
    if f.degree < 2 or not is_primitive(f):
        raise NotPrimitiveError(f"{f} is not a primitive polynomial of degree >= 2")
    n = (1 << f.degree) - 1
    return GolombSequence(lfsr_bits(f, n), f)


def shift(seq: GolombSequence, a: int) -> GolombSequence:
    """Cyclic left shift: ``result[i] = seq[i + a]``."""
    return GolombSequence(np.roll(seq.bits, -(a % seq.n)), seq.source_poly)


def decimate(seq: GolombSequence, d: int) -> np.ndarray:
    n = seq.n
    if gcd(d, n) != 1:
        raise NotCoprimeError(f"decimation {d} shares a factor with n = {n}")
    return seq.bits[(d * np.arange(n, dtype=np.int64)) % n].copy()


def minimal_polynomial(bits) -> BinaryPolynomial:
    """Characteristic polynomial of the shortest LFSR generating the periodic sequence.

    Berlekamp-Massey over two concatenated periods.
    """
    s = np.asarray(bits, dtype=np.uint8) & 1
    if not s.any():
        raise ZeroSequenceError("all-zero sequence has no minimal polynomial")
    s = np.concatenate([s, s]).tolist()
    C, B = 1, 1
    L, gap = 0, 1
    window = 0  # bit i holds s[k - i]
    wmask = 1
    for k, bit in enumerate(s):
        window = ((window << 1) | bit) & wmask
        if (C & window).bit_count() & 1:
            if 2 * L <= k:
                T = C
                C ^= B << gap
                L = k + 1 - L
                B = T
                gap = 1
                wmask = (1 << (L + 1)) - 1
                window = 0
                for i in range(L):
                    if k - i >= 0:
                        window |= s[k - i] << i
            else:
                C ^= B << gap
                gap += 1
        else:
            gap += 1
    # connection polynomial -> characteristic polynomial by reversal over L+1 bits
    rev = int(format(C, f"0{L + 1}b")[::-1], 2)
    return BinaryPolynomial(rev)


def autocorrelation(bits) -> np.ndarray:
    """Periodic autocorrelation of the +/-1 image, rounded to integers."""
    x = 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)
    F = np.fft.fft(x)
    c = np.fft.ifft(F * np.conj(F)).real
    out = np.rint(c)
    if np.max(np.abs(c - out)) > 1e-6:
        raise ArithmeticError("autocorrelation did not round cleanly to integers")
    return out.astype(np.int64)


def least_period(bits, prime_divisors) -> int:
    """Least period of a sequence known to repeat with period ``len(bits)``."""
    x = np.asarray(bits)
    period = x.size
    changed = True
    while changed:
        changed = False
        for p in prime_divisors:
            if period % p == 0 and np.array_equal(x, np.roll(x, period // p)):
                period //= p
                changed = True
    return period


def _coset(c: int, n: int) -> set[int]:
    out = set()
    x = c % n
    while x not in out:
        out.add(x)
        x = (2 * x) % n
    return out


def decimation_candidates(n: int):
    """Odd ``d`` coprime to ``n`` outside the cyclotomic cosets of 1 and -1."""
    excluded = _coset(1, n) | _coset(n - 1, n)
    for d in range(3, n, 2):
        if d not in excluded and gcd(d, n) == 1:
            yield d


def companion_polynomial(f: BinaryPolynomial, seq: GolombSequence | None = None, max_d: int | None = None) -> Companion:
    """Partner ``g`` for ``f`` that is primitive, different and non-reciprocal.

    ``psi = decimate(generate(f), d)`` for the smallest admissible ``d``.
    """
    seq = seq if seq is not None else generate(f)
    f_hat = reciprocal(f)
    for d in decimation_candidates(seq.n):
        if max_d is not None and d > max_d:
            break
        psi = decimate(seq, d)
        g = minimal_polynomial(psi)
        if g.degree != f.degree or not is_primitive(g) or g == f or g == f_hat:
            log.debug("decimation %d rejected (g = %s)", d, g)
            continue
        assert not is_reciprocal_pair(f, g)
        return Companion(g, GolombSequence(psi, g), d)
    raise NoCompanionError(f"no admissible decimation gives a non-reciprocal partner for {f}")
