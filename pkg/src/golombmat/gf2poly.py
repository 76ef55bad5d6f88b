"""Binary polynomials over GF(2): arithmetic, primitivity, reciprocals, search.

A polynomial is stored as a nonnegative integer whose bit ``i`` is the
coefficient of ``x^i``.  Multiplication is carry-less, reciprocal is bit
reversal over ``0..deg``.  The zero polynomial is the integer 0 and has
degree -1.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Iterator

from .errors import InsufficientPrimitivesError, InvalidModulusError, NotInvertibleAtZeroError, PreconditionError

MAX_DEGREE = 24

__all__ = [
    "MAX_DEGREE",
    "BinaryPolynomial",
    "FactorizationCache",
    "DEFAULT_CACHE",
    "poly_mul_mod",
    "poly_pow_mod",
    "poly_gcd",
    "is_irreducible",
    "is_primitive",
    "reciprocal",
    "is_reciprocal_pair",
    "iter_primitive",
    "enumerate_primitive",
    "euler_phi",
    "primitive_count",
]


@dataclass(frozen=True, order=True)
class BinaryPolynomial:
    """Polynomial over GF(2) backed by its coefficient bit vector."""

    value: int

    def __post_init__(self):
        if self.value < 0:
            raise PreconditionError("polynomial bit vector must be nonnegative")

    @classmethod
    def from_exponents(cls, *exponents: int) -> BinaryPolynomial:
        v = 0
        for e in exponents:
            v ^= 1 << e
        return cls(v)

    @classmethod
    def from_coeffs(cls, coeffs) -> BinaryPolynomial:
        v = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                v |= 1 << i
        return cls(v)

    @classmethod
    def parse(cls, text: str) -> BinaryPolynomial:
        """Accept ``0x..`` hex, a ``deg=.. hex=.. poly=..`` line or a monomial string."""
        text = text.strip()
        m = re.search(r"hex=(0x[0-9a-fA-F]+)", text)
        if m:
            return cls(int(m.group(1), 16))
        if text.lower().startswith("0x"):
            return cls(int(text, 16))
        if text.isdigit():
            return cls(int(text))
        v = 0
        for term in text.replace(" ", "").split("+"):
            if term == "1":
                e = 0
            elif term == "x":
                e = 1
            elif term.startswith("x^"):
                e = int(term[2:])
            else:
                raise PreconditionError(f"cannot parse polynomial term {term!r}")
            v ^= 1 << e
        return cls(v)

    @property
    def degree(self) -> int:
        return self.value.bit_length() - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.degree + 1))

    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def hex(self) -> str:
        return hex(self.value)

    def monomials(self) -> str:
        if self.value == 0:
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            if (self.value >> e) & 1:
                terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return "+".join(terms)

    def format_line(self) -> str:
        """Canonical text form ``deg=m hex=0x.. poly=..``."""
        return f"deg={self.degree} hex={self.hex} poly={self.monomials()}"

    def __str__(self) -> str:
        return self.monomials()

    def __repr__(self) -> str:
        return f"BinaryPolynomial({self.monomials()})"


class FactorizationCache:
    """Memoized trial-division factorizations, safe for concurrent readers."""

    def __init__(self):
        self._factors: dict[int, tuple[int, ...]] = {}
        self._lock = threading.Lock()

    def factor(self, N: int) -> tuple[int, ...]:
        """Sorted prime factors of ``N`` with multiplicity."""
        if N < 1:
            raise PreconditionError("can only factor positive integers")
        hit = self._factors.get(N)
        if hit is not None:
            return hit
        out = []
        rest = N
        p = 2
        while p * p <= rest:
            while rest % p == 0:
                out.append(p)
                rest //= p
            p += 1 if p == 2 else 2
        if rest > 1:
            out.append(rest)
        result = tuple(out)
        with self._lock:
            self._factors.setdefault(N, result)
        return result

    def prime_divisors(self, N: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.factor(N))))

    def __contains__(self, N: int) -> bool:
        return N in self._factors

    def __len__(self) -> int:
        return len(self._factors)


DEFAULT_CACHE = FactorizationCache()


# -- raw integer kernels ----------------------------------------------------

_SPREAD = [0] * 256
for _b in range(256):
    _s = 0
    for _i in range(8):
        if (_b >> _i) & 1:
            _s |= 1 << (2 * _i)
    _SPREAD[_b] = _s
del _b, _s, _i


def _clmul(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def _square(a: int) -> int:
    # squaring over GF(2) interleaves zero bits
    c = 0
    shift = 0
    while a:
        c |= _SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return c


def _mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    da = a.bit_length() - 1
    while da >= df:
        a ^= f << (da - df)
        da = a.bit_length() - 1
    return a


def _mulmod(a: int, b: int, f: int) -> int:
    return _mod(_clmul(a, b), f)


def _powmod(base: int, e: int, f: int) -> int:
    result = 1
    base = _mod(base, f)
    for bit in bin(e)[2:]:
        result = _mod(_square(result), f)
        if bit == "1":
            result = _mod(_clmul(result, base), f)
    return _mod(result, f)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _check_modulus(modulus: BinaryPolynomial) -> None:
    if modulus.degree < 1:
        raise InvalidModulusError(f"modulus must have degree >= 1, got {modulus!r}")


# -- public operations ------------------------------------------------------

def poly_mul_mod(a: BinaryPolynomial, b: BinaryPolynomial, modulus: BinaryPolynomial) -> BinaryPolynomial:
    _check_modulus(modulus)
    return BinaryPolynomial(_mulmod(a.value, b.value, modulus.value))


def poly_pow_mod(base: BinaryPolynomial, e: int, modulus: BinaryPolynomial) -> BinaryPolynomial:
    """``base**e mod modulus`` by square-and-multiply."""
    _check_modulus(modulus)
    if e < 0:
        raise PreconditionError("exponent must be nonnegative")
    return BinaryPolynomial(_powmod(base.value, e, modulus.value))


def poly_gcd(a: BinaryPolynomial, b: BinaryPolynomial) -> BinaryPolynomial:
    return BinaryPolynomial(_gcd(a.value, b.value))


def _is_irreducible_int(f: int, cache: FactorizationCache) -> bool:
    m = f.bit_length() - 1
    # Rabin: x^(2^m) = x mod f, and gcd(x^(2^(m/q)) - x, f) = 1 for primes q | m
    levels = {m // q for q in cache.prime_divisors(m)} if m > 1 else set()
    h = _mod(2, f)
    for k in range(1, m + 1):
        h = _mod(_square(h), f)
        if k in levels and _gcd(h ^ 2, f) != 1:
            return False
    return h == _mod(2, f)


def is_irreducible(f: BinaryPolynomial, cache: FactorizationCache | None = None) -> bool:
    if f.degree < 1:
        raise PreconditionError("irreducibility is defined for degree >= 1")
    return _is_irreducible_int(f.value, cache or DEFAULT_CACHE)


def _is_primitive_int(f: int, cache: FactorizationCache) -> bool:
    m = f.bit_length() - 1
    if not (f & 1):
        return False
    if not _is_irreducible_int(f, cache):
        return False
    n = (1 << m) - 1
    return all(_powmod(2, n // p, f) != 1 for p in cache.prime_divisors(n))


def is_primitive(f: BinaryPolynomial, cache: FactorizationCache | None = None) -> bool:
    """True iff ``f`` is irreducible and ``x`` has order ``2^m - 1`` modulo ``f``."""
    if f.degree < 2:
        raise PreconditionError("primitivity test requires degree >= 2")
    return _is_primitive_int(f.value, cache or DEFAULT_CACHE)


def _reverse_bits(v: int, width: int) -> int:
    return int(format(v, f"0{width}b")[::-1], 2)


def reciprocal(f: BinaryPolynomial) -> BinaryPolynomial:
    """``x^deg(f) * f(1/x)``."""
    if f.is_zero():
        raise NotInvertibleAtZeroError("zero polynomial has no reciprocal")
    if not (f.value & 1):
        raise NotInvertibleAtZeroError(f"{f} has zero constant term; reciprocal would drop degree")
    return BinaryPolynomial(_reverse_bits(f.value, f.degree + 1))


def is_reciprocal_pair(f: BinaryPolynomial, g: BinaryPolynomial) -> bool:
    """True when ``g`` equals ``f`` or its reciprocal, i.e. the pair is disqualified."""
    if f.is_zero() or g.is_zero():
        raise PreconditionError("polynomials must be nonzero")
    if f == g:
        return True
    if f.degree != g.degree:
        return False
    return _reverse_bits(f.value, f.degree + 1) == g.value


def iter_primitive(m: int, cache: FactorizationCache | None = None) -> Iterator[BinaryPolynomial]:
    """Primitive polynomials of degree ``m`` in ascending integer order."""
    if not 2 <= m <= MAX_DEGREE:
        raise PreconditionError(f"degree must be in 2..{MAX_DEGREE}, got {m}")
    cache = cache or DEFAULT_CACHE
    top = 1 << m
    for low in range(1, top, 2):
        f = top | low
        # an even number of terms means x+1 divides f
        if f.bit_count() % 2 == 0:
            continue
        if _is_primitive_int(f, cache):
            yield BinaryPolynomial(f)


def enumerate_primitive(m: int, count: int, cache: FactorizationCache | None = None) -> list[BinaryPolynomial]:
    if count < 1:
        raise PreconditionError("count must be >= 1")
    out = []
    for f in iter_primitive(m, cache):
        out.append(f)
        if len(out) == count:
            return out
    raise InsufficientPrimitivesError(
        f"requested {count} primitive polynomials of degree {m}, only {len(out)} exist"
    )


def euler_phi(N: int, cache: FactorizationCache | None = None) -> int:
    cache = cache or DEFAULT_CACHE
    return reduce(lambda acc, p: acc // p * (p - 1), cache.prime_divisors(N), N)


def primitive_count(m: int, cache: FactorizationCache | None = None) -> int:
    """Number of primitive polynomials of degree ``m``: ``phi(2^m - 1) / m``."""
    return euler_phi((1 << m) - 1, cache) // m
