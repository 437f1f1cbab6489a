"""Finite fields, polynomial factorization over them, and prime splitting in ``K``.

Polynomials over a finite field are lists of field elements, lowest degree
first.  Elements of ``F_p`` are ints in ``[0, p)``; elements of ``F_{p^k}``
are length-``k`` tuples of ints (coefficients modulo the defining factor).
Factorization patterns come from distinct-degree factorization, which is
deterministic; full factors use Cantor-Zassenhaus with a seeded RNG.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import sympy

from .errors import NotSquarefree, RamifiedPrime, SearchExhausted
from .numfield import AlgInt, NumberField

DEFAULT_SCAN_CAP = 10**7


# -- fields ---------------------------------------------------------------------------


class PrimeField:
    """``F_p`` with int elements."""

    def __init__(self, p: int):
        self.p = p
        self.q = p
        self.k = 1
        self.zero = 0
        self.one = 1

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return pow(a, -1, self.p)

    def from_int(self, n: int):
        return n % self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def to_int_coords(self, a) -> tuple[int, ...]:
        return (a,)


class ExtensionField:
    """``F_p[X]/(g)`` for a monic irreducible ``g`` of degree ``k >= 2``."""

    def __init__(self, p: int, modulus: Sequence[int]):
        self.p = p
        self.modulus = tuple(int(c) % p for c in modulus)
        self.k = len(self.modulus) - 1
        self.q = p**self.k
        self.zero = (0,) * self.k
        self.one = (1,) + (0,) * (self.k - 1)
        self._base = PrimeField(p)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        p, k, g = self.p, self.k, self.modulus
        raw = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    raw[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = raw[d] % p
            if c:
                for i in range(k):
                    raw[d - k + i] -= c * g[i]
            raw[d] = 0
        return tuple(x % p for x in raw[:k])

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in finite field")
        # a^(q-2)
        return self.pow(a, self.q - 2)

    def pow(self, a, e: int):
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return out

    def from_int(self, n: int):
        return (n % self.p,) + (0,) * (self.k - 1)

    def elements(self) -> Iterator[tuple]:
        import itertools

        for t in itertools.product(range(self.p), repeat=self.k):
            yield tuple(reversed(t))

    def random(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def to_int_coords(self, a) -> tuple[int, ...]:
        return a


# -- polynomials over a finite field ------------------------------------------------------


def p_strip(F, a: list) -> list:
    while a and a[-1] == F.zero:
        a.pop()
    return a


def p_add(F, a, b) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return p_strip(F, out)


def p_sub(F, a, b) -> list:
    return p_add(F, a, [F.neg(c) for c in b])


def p_mul(F, a, b) -> list:
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != F.zero:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return p_strip(F, out)


def p_divmod(F, a, b) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    q = [F.zero] * max(0, len(rem) - db)
    while len(rem) - 1 >= db and rem:
        c = F.mul(rem[-1], inv)
        shift = len(rem) - 1 - db
        q[shift] = c
        for i, y in enumerate(b):
            rem[i + shift] = F.sub(rem[i + shift], F.mul(c, y))
        rem.pop()
        p_strip(F, rem)
    return p_strip(F, q), rem


def p_mod(F, a, b) -> list:
    return p_divmod(F, a, b)[1]


def p_monic(F, a) -> list:
    if not a or a[-1] == F.one:
        return list(a)
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def p_gcd(F, a, b) -> list:
    a, b = p_strip(F, list(a)), p_strip(F, list(b))
    while b:
        a, b = b, p_mod(F, a, b)
    return p_monic(F, a)


def p_deriv(F, a) -> list:
    return p_strip(F, [F.mul(F.from_int(i), c) for i, c in enumerate(a)][1:])


def p_powmod(F, a, e: int, m) -> list:
    out = [F.one]
    a = p_mod(F, a, m)
    while e:
        if e & 1:
            out = p_mod(F, p_mul(F, out, a), m)
        e >>= 1
        if e:
            a = p_mod(F, p_mul(F, a, a), m)
    return out


def _x(F) -> list:
    return [F.zero, F.one]


def is_squarefree(F, a) -> bool:
    a = p_strip(F, list(a))
    if len(a) <= 2:
        return True
    da = p_deriv(F, a)
    if not da:
        return False
    return len(p_gcd(F, a, da)) == 1


def ddf(F, f) -> list[tuple[list, int]]:
    """Distinct-degree factorization of a monic squarefree ``f``.

    Returns pairs ``(g_d, d)`` with ``g_d`` the product of the degree-``d``
    irreducible factors.
    """
    f = p_monic(F, f)
    out = []
    h = _x(F)
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = p_powmod(F, h, F.q, f)
        g = p_gcd(F, f, p_sub(F, h, _x(F)))
        if len(g) > 1:
            out.append((g, d))
            f = p_divmod(F, f, g)[0]
            h = p_mod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def edf(F, f, d: int, rng: random.Random) -> list[list]:
    """Split a product of degree-``d`` irreducibles (Cantor-Zassenhaus)."""
    f = p_monic(F, f)
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = p_strip(F, [F.random(rng) for _ in range(n)])
        if len(a) <= 1:
            continue
        if F.q % 2:
            b = p_powmod(F, a, (F.q**d - 1) // 2, f)
            b = p_sub(F, b, [F.one])
        else:
            # absolute trace to F_2
            b = list(a)
            t = list(a)
            for _ in range(F.k * d - 1):
                t = p_mod(F, p_mul(F, t, t), f)
                b = p_add(F, b, t)
        g = p_gcd(F, f, b)
        if 1 < len(g) < len(f):
            return edf(F, g, d, rng) + edf(F, p_divmod(F, f, g)[0], d, rng)


def factor_squarefree(F, f, seed: int = 0) -> list[list]:
    """Monic irreducible factors of a squarefree polynomial, sorted."""
    rng = random.Random(seed)
    out = []
    for g, d in ddf(F, f):
        out.extend(edf(F, g, d, rng))
    return sorted(out, key=lambda g: (len(g), g))


def roots_in_field(F, f, seed: int = 0) -> list:
    """Distinct roots in ``F`` of a nonzero polynomial."""
    f = p_monic(F, p_strip(F, list(f)))
    if len(f) <= 1:
        return []
    g = p_gcd(F, f, p_sub(F, p_powmod(F, _x(F), F.q, f), _x(F)))
    if len(g) <= 1:
        return []
    lin = edf(F, g, 1, random.Random(seed))
    return sorted(F.neg(h[0]) for h in lin)


# -- cycle types ---------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CycleType:
    """Multiset of factor degrees, stored sorted ascending."""

    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(int(x) for x in self.parts)))
        if any(x <= 0 for x in self.parts):
            raise ValueError("cycle type parts must be positive")

    @classmethod
    def parse(cls, value) -> "CycleType":
        if isinstance(value, CycleType):
            return value
        if isinstance(value, str):
            body = value.strip().strip("[]{}()").replace(",", " ")
            return cls(tuple(int(x) for x in body.split()))
        return cls(tuple(value))

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def is_identity(self) -> bool:
        return all(x == 1 for x in self.parts)

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.parts)) + "]"

    def __repr__(self) -> str:
        return f"CycleType({str(self)})"

    def subsums(self) -> frozenset[int]:
        sums = {0}
        for x in self.parts:
            sums |= {s + x for s in sums}
        return frozenset(sums)


# -- prime ideals ----------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeIdeal:
    """Prime of ``Z[theta]`` above an unramified ``p``: the pair ``(p, g(theta))``."""

    p: int
    local_factor: tuple[int, ...]
    residue_degree: int
    norm: int

    @property
    def root(self) -> int | None:
        """``theta mod P`` when the residue degree is 1."""
        if self.residue_degree != 1:
            return None
        return -self.local_factor[0] % self.p

    def residue_field(self):
        return _residue_field(self.p, self.local_factor)

    def reduce(self, x: AlgInt):
        """Image of an integral ``x`` in the residue field."""
        p = self.p
        coords = x.coords
        if self.residue_degree == 1:
            a = -self.local_factor[0] % p
            acc = 0
            for c in reversed(coords):
                acc = (acc * a + c) % p
            return acc
        F = self.residue_field()
        vec = p_mod(PrimeField(p), p_strip(PrimeField(p), [c % p for c in coords]), list(self.local_factor))
        vec = vec + [0] * (F.k - len(vec))
        return tuple(vec)

    def reduce_poly(self, coeffs: Sequence[AlgInt]) -> list:
        F = self.residue_field()
        return p_strip(F, [self.reduce(c) for c in coeffs])

    def lift(self, r, field: NumberField) -> AlgInt:
        """An element of ``Z[theta]`` reducing to ``r``."""
        if self.residue_degree == 1:
            return field(int(r))
        coords = list(r) + [0] * (field.degree - len(r))
        return AlgInt(field, coords)

    def label(self) -> str:
        """Compact text form: ``p@root`` for degree 1, ``p:g0,g1,...`` otherwise."""
        if self.residue_degree == 1:
            return f"{self.p}@{self.root}"
        return f"{self.p}:" + ",".join(map(str, self.local_factor))

    def __str__(self) -> str:
        return self.label()


@lru_cache(maxsize=None)
def _residue_field(p: int, local_factor: tuple[int, ...]):
    if len(local_factor) == 2:
        return PrimeField(p)
    return ExtensionField(p, local_factor)


def split_prime(field: NumberField, p: int, seed: int = 0) -> list[PrimeIdeal]:
    """Primes of ``Z[theta]`` above the unramified rational prime ``p``."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if p in field.ramified_primes:
        raise RamifiedPrime(f"{p} divides disc(f) = {field.disc_f}")
    return list(_split_cached(field.def_poly, p, seed))


@lru_cache(maxsize=4096)
def _split_cached(def_poly: tuple[int, ...], p: int, seed: int) -> tuple[PrimeIdeal, ...]:
    F = PrimeField(p)
    f = p_strip(F, [c % p for c in def_poly])
    out = []
    for g in factor_squarefree(F, f, seed):
        k = len(g) - 1
        out.append(PrimeIdeal(p, tuple(g), k, p**k))
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def _pattern_cached(p: int, local_factor: tuple[int, ...], coeffs: tuple) -> CycleType:
    F = _residue_field(p, local_factor)
    f = p_monic(F, list(coeffs))
    if not is_squarefree(F, f):
        raise NotSquarefree("polynomial is not squarefree modulo the prime")
    parts = []
    for g, d in ddf(F, f):
        parts.extend([d] * ((len(g) - 1) // d))
    return CycleType(tuple(parts))


def factor_pattern(Q, ideal: PrimeIdeal, seed: int = 0) -> CycleType:
    """Factor degrees of ``Q`` modulo ``ideal``.

    ``Q`` is a ``UniPoly`` over ``O_K`` or a list already reduced into the
    residue field.  Only distinct-degree factorization is needed for the
    degrees, so the result does not depend on ``seed``.
    """
    F = ideal.residue_field()
    if hasattr(Q, "coeffs"):
        reduced = ideal.reduce_poly(Q.coeffs)
        if len(reduced) != len(Q.coeffs):
            raise NotSquarefree("leading coefficient vanishes modulo the prime")
    else:
        reduced = p_strip(F, list(Q))
    if not reduced:
        raise NotSquarefree("polynomial vanishes modulo the prime")
    if len(reduced) == 1:
        return CycleType(())
    return _pattern_cached(ideal.p, ideal.local_factor, tuple(reduced))


def totally_split_primes(
    field: NumberField, P_min: int, count: int, scan_cap: int = DEFAULT_SCAN_CAP
) -> list[tuple[int, list[PrimeIdeal]]]:
    """First ``count`` primes ``p >= P_min`` splitting completely in ``Z[theta]``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    p = sympy.nextprime(max(P_min, 2) - 1)
    scanned = 0
    while len(out) < count:
        if scanned >= scan_cap:
            raise SearchExhausted(f"scan cap {scan_cap} hit before {count} split primes", reached=p)
        scanned += 1
        if p not in field.ramified_primes and _splits_completely(field.def_poly, p):
            out.append((int(p), split_prime(field, int(p))))
        p = sympy.nextprime(p)
    return out


def _splits_completely(def_poly: Sequence[int], p: int) -> bool:
    F = PrimeField(p)
    f = p_strip(F, [c % p for c in def_poly])
    if len(f) <= 2:
        return True
    xp = p_powmod(F, _x(F), p, f)
    return p_sub(F, xp, _x(F)) == []


def dedekind_is_maximal(def_poly: Sequence[int], p: int) -> bool:
    """Dedekind's criterion: is ``Z[theta]`` maximal at ``p``?"""
    F = PrimeField(p)
    f = [c % p for c in def_poly]
    # product of the distinct irreducible factors of f mod p
    g = [1]
    n = len(def_poly) - 1
    for d in range(1, n + 1):
        xq = p_powmod(F, _x(F), p**d, f)
        gd = p_gcd(F, f, p_sub(F, xq, _x(F)))
        g = p_divmod(F, p_mul(F, g, gd), p_gcd(F, g, gd))[0]
    h = p_divmod(F, f, g)[0]
    # (g h - f) / p over Z with the [0, p) lifts
    gh = [0] * (len(g) + len(h) - 1)
    for i, a in enumerate(g):
        for j, b in enumerate(h):
            gh[i + j] += a * b
    diff = [(a - b) for a, b in zip(gh + [0] * (len(def_poly) - len(gh)), def_poly)]
    Fz = p_strip(F, [(c // p) % p for c in diff])
    return len(p_gcd(F, p_gcd(F, Fz, g), h)) == 1


def is_good_prime(model, ideal: PrimeIdeal) -> bool:
    """Sufficient proxy for good reduction of a regular model at ``ideal``.

    ``p`` must not divide ``|G|`` or ``disc(f)``; ``Delta_P`` must stay nonzero
    with its leading coefficient intact; and the squarefree part of
    ``Delta_P`` must stay squarefree of the same degree, so that distinct
    branch points do not collide modulo the prime.
    """
    p = ideal.p
    if model.group_order % p == 0 or p in model.field.ramified_primes:
        return False
    disc = model.disc
    red = ideal.reduce_poly(disc.coeffs)
    if not red or len(red) != len(disc.coeffs):
        return False
    rad = model.disc_radical
    rred = ideal.reduce_poly(rad.coeffs)
    if len(rred) != len(rad.coeffs):
        return False
    return is_squarefree(ideal.residue_field(), rred)


def primes_up_to(bound: int) -> list[int]:
    return [int(p) for p in sympy.primerange(2, int(bound) + 1)]


def clear_caches() -> None:
    _pattern_cached.cache_clear()
    _split_cached.cache_clear()
