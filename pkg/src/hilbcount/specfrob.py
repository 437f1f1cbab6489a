"""Specializations of regular Galois models: patterns, certification, fingerprints."""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

from . import modp
from .errors import BadPrime, BranchPoint, NotIrreducible, NotSquarefree
from .modp import CycleType, PrimeIdeal
from .numfield import AlgInt, NumberField
from .polyring import BiPoly, UniPoly, alg_roots, disc_y, parse_poly

DEFAULT_PRIME_BOUND = 200
DEFAULT_FINGERPRINT_BOUND = 200


class Certificate(str, enum.Enum):
    CERTIFIED_G = "CertifiedG"
    UNDECIDED = "Undecided"
    NOT_G = "NotG"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ClassRow:
    label: str
    cycle_type: CycleType
    size: int


class RegularModel:
    """Affine model ``P(T, Y)`` of a regular extension with its group data.

    ``class_table`` rows are ``(label, cycle type, class size)`` for the
    action of ``G`` on the ``n`` roots of ``P``.  Irreducibility over ``K(T)``
    is checked on small specializations unless ``attested_irreducible``.
    """

    def __init__(
        self,
        field: NumberField,
        P: BiPoly | str,
        group_order: int,
        model_degree: int,
        class_table: Iterable,
        branch_count: int,
        genus: int,
        attested_irreducible: bool = False,
        name: str = "",
    ):
        self.field = field
        self.P = parse_poly(P, field) if isinstance(P, str) else P
        self.group_order = int(group_order)
        self.model_degree = int(model_degree)
        rows = []
        for row in class_table:
            if isinstance(row, ClassRow):
                rows.append(row)
            else:
                label, ct, size = row
                rows.append(ClassRow(str(label), CycleType.parse(ct), int(size)))
        self.class_table: tuple[ClassRow, ...] = tuple(rows)
        self.branch_count = int(branch_count)
        self.genus = int(genus)
        self.name = name
        self.attested_irreducible = attested_irreducible
        self._validate()
        self.disc, self.delta_P = disc_y(self.P)
        self.disc_radical = self.disc.radical() if self.delta_P > 0 else self.disc
        self._residue_cache: dict = {}
        self._good_cache: dict = {}
        if not attested_irreducible and not self._generic_irreducible():
            raise NotIrreducible("no small specialization certifies irreducibility of P")

    def __reduce__(self):
        return (
            RegularModel,
            (self.field, self.P, self.group_order, self.model_degree, self.class_table,
             self.branch_count, self.genus, True, self.name),
        )

    def __repr__(self) -> str:
        return f"RegularModel({self.P.to_str()}, |G|={self.group_order}, n={self.model_degree})"

    def _validate(self) -> None:
        P, n = self.P, self.model_degree
        if not P.monic_in_x2:
            raise ValueError("model polynomial must be monic in Y")
        if P.n != n:
            raise ValueError(f"deg_Y P = {P.n} but model_degree = {n}")
        if sum(r.size for r in self.class_table) != self.group_order:
            raise ValueError("class sizes do not sum to |G|")
        for r in self.class_table:
            if r.cycle_type.degree != n:
                raise ValueError(f"class {r.label} has cycle type of degree {r.cycle_type.degree} != {n}")
        if not any(r.cycle_type.is_identity() and r.size == 1 for r in self.class_table):
            raise ValueError("class table lacks the identity class")
        if self.group_order < 1:
            raise ValueError("group order must be positive")

    # -- derived group data

    @cached_property
    def cycle_types(self) -> frozenset[CycleType]:
        return frozenset(r.cycle_type for r in self.class_table)

    @cached_property
    def type_weights(self) -> dict[CycleType, int]:
        """Number of group elements with each cycle type."""
        out: dict[CycleType, int] = {}
        for r in self.class_table:
            out[r.cycle_type] = out.get(r.cycle_type, 0) + r.size
        return out

    @property
    def is_galois_model(self) -> bool:
        return self.model_degree == self.group_order

    @cached_property
    def types_separate_classes(self) -> bool:
        return len(self.cycle_types) == len(self.class_table)

    # -- primes

    def ideals_up_to(self, bound: int) -> list[PrimeIdeal]:
        """Primes of ``Z[theta]`` of norm ``<= bound`` above unramified ``p``."""
        out = []
        for p in modp.primes_up_to(bound):
            if p in self.field.ramified_primes:
                continue
            out.extend(I for I in modp.split_prime(self.field, p) if I.norm <= bound)
        return out

    def is_good(self, ideal: PrimeIdeal) -> bool:
        key = ideal
        if key not in self._good_cache:
            self._good_cache[key] = modp.is_good_prime(self, ideal)
        return self._good_cache[key]

    def good_ideals_up_to(self, bound: int) -> list[PrimeIdeal]:
        return [I for I in self.ideals_up_to(bound) if self.is_good(I)]

    def bad_primes(self, bound: int = DEFAULT_PRIME_BOUND) -> list[int]:
        """Rational primes ``<= bound`` with some non-good prime ideal above them."""
        out = []
        for p in modp.primes_up_to(bound):
            if p in self.field.ramified_primes:
                out.append(p)
                continue
            if not all(self.is_good(I) for I in modp.split_prime(self.field, p)):
                out.append(p)
        return out

    # -- residue-level evaluation

    def _reduced(self, ideal: PrimeIdeal):
        entry = self._residue_cache.get(ideal)
        if entry is None:
            F = ideal.residue_field()
            rows = [[ideal.reduce(c) for c in row.coeffs] for row in self.P.rows_in_x2()]
            disc = [ideal.reduce(c) for c in self.disc.coeffs]
            entry = (F, rows, disc, {})
            self._residue_cache[ideal] = entry
        return entry

    def pattern_at_residue(self, ideal: PrimeIdeal, r) -> CycleType | None:
        """Pattern of ``P(t, Y) mod ideal`` for any ``t`` reducing to ``r``.

        Returns None when ``r`` is a branch residue (``Delta_P(r) = 0``).
        """
        F, rows, disc, memo = self._reduced(ideal)
        if r in memo:
            return memo[r]
        if _horner(F, disc, r) == F.zero:
            memo[r] = None
            return None
        coeffs = modp.p_strip(F, [_horner(F, row, r) for row in rows])
        pat = modp.factor_pattern(coeffs, ideal)
        memo[r] = pat
        return pat

    def _generic_irreducible(self) -> bool:
        K = self.field
        if self.model_degree == 1:
            return True
        ideals = self.ideals_up_to(DEFAULT_PRIME_BOUND)
        for k in range(1, 30):
            for t in (K(k), K(-k)):
                if not self.disc(t):
                    continue
                pats = [p for p in (self.pattern_at_residue(I, I.reduce(t)) for I in ideals) if p is not None]
                if degree_sieve(pats, self.model_degree):
                    return True
        return False


def _horner(F, coeffs: Sequence, r):
    acc = F.zero
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, r), c)
    return acc


def degree_sieve(patterns: Iterable[CycleType], n: int) -> bool:
    """True if the observed patterns force irreducibility in degree ``n``.

    Every factor over ``K`` has a degree that is a sub-sum of every pattern,
    so an empty intersection of proper sub-sums rules out proper factors.
    """
    allowed = set(range(1, n))
    for pat in patterns:
        allowed &= pat.subsums()
        if not allowed:
            return True
    return not allowed


@dataclass(frozen=True)
class FieldFingerprint:
    """Sorted ``(prime, pattern)`` pairs over good primes of norm ``<= X``."""

    prime_bound: int
    entries: tuple[tuple[PrimeIdeal, CycleType], ...]

    @cached_property
    def digest(self) -> str:
        text = ";".join(f"{I.label()}={ct}" for I, ct in self.entries)
        return hashlib.sha256(f"{self.prime_bound}|{text}".encode()).hexdigest()[:16]

    def as_dict(self) -> dict[PrimeIdeal, CycleType]:
        return dict(self.entries)

    def agrees_with(self, other: "FieldFingerprint") -> bool:
        """Patterns coincide on every prime where both are defined."""
        mine = self.as_dict()
        return all(mine.get(I, ct) == ct for I, ct in other.entries)

    def first_difference(self, other: "FieldFingerprint") -> PrimeIdeal | None:
        mine = self.as_dict()
        for I, ct in other.entries:
            if I in mine and mine[I] != ct:
                return I
        return None

    def to_json(self) -> dict:
        return {
            "prime_bound": self.prime_bound,
            "hash": self.digest,
            "entries": [[I.label(), list(ct.parts)] for I, ct in self.entries],
        }


class FingerprintIndex:
    """Groups fingerprints that agree wherever both are defined.

    A specialization omits primes dividing ``Delta_P(t0)``, so two values of
    ``t0`` giving the same field can have different digests.  Candidates are
    looked up through contiguous blocks of primes (a block keys a record only
    when the record is defined on all of it) and confirmed by ``agrees_with``.
    """

    def __init__(self, ideals: Sequence[PrimeIdeal], blocks: int = 3):
        ideals = sorted(ideals, key=lambda I: (I.p, I.local_factor))
        size = max(1, math.ceil(len(ideals) / blocks)) if ideals else 1
        self._blocks = [ideals[i:i + size] for i in range(0, len(ideals), size)]
        self._buckets: dict[tuple, list[int]] = {}
        self._unkeyed: list[int] = []
        self.reps: list[FieldFingerprint] = []

    def _keys(self, fp: FieldFingerprint) -> list[tuple]:
        d = fp.as_dict()
        keys = []
        for b, block in enumerate(self._blocks):
            pats = [d.get(I) for I in block]
            if block and all(x is not None for x in pats):
                keys.append((b, tuple(pats)))
        return keys

    def find(self, fp: FieldFingerprint) -> int | None:
        keys = self._keys(fp)
        if keys:
            seen: set[int] = set()
            cands = [i for k in keys for i in self._buckets.get(k, ()) if not (i in seen or seen.add(i))]
            cands += self._unkeyed
        else:
            cands = range(len(self.reps))
        for i in sorted(cands):
            if self.reps[i].agrees_with(fp):
                return i
        return None

    def insert(self, fp: FieldFingerprint) -> tuple[int, bool]:
        """Index of the matching representative, adding ``fp`` when none matches."""
        hit = self.find(fp)
        if hit is not None:
            return hit, False
        i = len(self.reps)
        self.reps.append(fp)
        keys = self._keys(fp)
        for k in keys:
            self._buckets.setdefault(k, []).append(i)
        if not keys:
            self._unkeyed.append(i)
        return i, True


@dataclass
class SpecializationRecord:
    t0: AlgInt
    disc_value: AlgInt
    disc_norm: int
    certificate: Certificate
    patterns: dict = dc_field(default_factory=dict)
    fingerprint: FieldFingerprint | None = None

    def sort_key(self) -> tuple:
        return (self.disc_norm, tuple(self.t0.coords))

    def to_json(self) -> dict:
        return {
            "t0": [int(c) for c in self.t0.coords],
            "disc_value": [int(c) for c in self.disc_value.coords],
            "disc_norm": int(self.disc_norm),
            "certificate": str(self.certificate),
            "fingerprint": self.fingerprint.digest if self.fingerprint else None,
        }


# -- operations ----------------------------------------------------------------------------


def observe_patterns(model: RegularModel, t0: AlgInt, bound: int) -> dict[PrimeIdeal, CycleType]:
    """Patterns at every unramified prime of norm ``<= bound`` where ``Delta_P(t0)`` is a unit."""
    out = {}
    for I in model.ideals_up_to(bound):
        pat = model.pattern_at_residue(I, I.reduce(t0))
        if pat is not None:
            out[I] = pat
    return out


def frobenius_pattern(model: RegularModel, t0, ideal: PrimeIdeal) -> CycleType:
    """Factorization pattern of ``P(t0, Y)`` modulo ``ideal``.

    By Dedekind's theorem this is the cycle type of Frobenius whenever
    ``Delta_P(t0)`` is a unit at the prime, including primes dividing ``|G|``.
    """
    t0 = model.field(t0)
    if ideal.p in model.field.ramified_primes:
        raise BadPrime(f"{ideal.p} is ramified in K")
    pat = model.pattern_at_residue(ideal, ideal.reduce(t0))
    if pat is None:
        raise NotSquarefree(f"Delta_P(t0) vanishes modulo {ideal.label()}")
    return pat


def _certify_from(model: RegularModel, t0: AlgInt, observed: dict) -> Certificate:
    allowed = model.cycle_types
    if any(ct not in allowed for ct in observed.values()):
        return Certificate.NOT_G
    n = model.model_degree
    irreducible = n == 1 or degree_sieve(observed.values(), n)
    if not irreducible and n > 1:
        if alg_roots(model.field, model.P.at_x1(t0)):
            return Certificate.NOT_G
        return Certificate.UNDECIDED
    if not (model.is_galois_model or model.types_separate_classes):
        return Certificate.UNDECIDED
    # the identity lies in every subgroup, so only the other types need witnesses
    if not {ct for ct in allowed if not ct.is_identity()} <= set(observed.values()):
        return Certificate.UNDECIDED
    return Certificate.CERTIFIED_G


def certify_group(model: RegularModel, t0, prime_bound: int = DEFAULT_PRIME_BOUND) -> Certificate:
    """One-sided certificate that ``Gal(P(t0, Y)/K)`` is all of ``G``."""
    t0 = model.field(t0)
    if not model.disc(t0):
        raise BranchPoint(f"Delta_P vanishes at t0 = {t0}")
    return _certify_from(model, t0, observe_patterns(model, t0, prime_bound))


def fingerprint(model: RegularModel, t0, X: int = DEFAULT_FINGERPRINT_BOUND,
                observed: dict | None = None) -> FieldFingerprint:
    t0 = model.field(t0)
    if observed is None:
        observed = observe_patterns(model, t0, X)
    entries = sorted(
        ((I, ct) for I, ct in observed.items() if I.norm <= X and model.is_good(I)),
        key=lambda e: (e[0].p, e[0].local_factor),
    )
    return FieldFingerprint(X, tuple(entries))


def specialize(model: RegularModel, t0, prime_bound: int = DEFAULT_PRIME_BOUND,
               fingerprint_bound: int = DEFAULT_FINGERPRINT_BOUND) -> SpecializationRecord:
    """Discriminant data, certificate and fingerprint of the specialization at ``t0``."""
    K = model.field
    t0 = K(t0)
    dv = model.disc(t0)
    if not dv:
        raise BranchPoint(f"Delta_P vanishes at t0 = {t0}")
    observed = observe_patterns(model, t0, max(prime_bound, fingerprint_bound))
    cert_obs = observed if fingerprint_bound <= prime_bound else {
        I: ct for I, ct in observed.items() if I.norm <= prime_bound
    }
    cert = _certify_from(model, t0, cert_obs)
    fp = fingerprint(model, t0, fingerprint_bound, observed)
    return SpecializationRecord(t0, dv, int(K.abs_norm(dv)), cert, cert_obs, fp)


# -- stock models ------------------------------------------------------------------------------


def c2_model(field: NumberField | None = None) -> RegularModel:
    """``Y^2 - T``: the generic quadratic, ``G = C2``, two branch points, genus 0."""
    K = field or NumberField.rationals()
    return RegularModel(K, "Y^2 - T", 2, 2, [("1", "[1 1]", 1), ("s", "[2]", 1)], 2, 0, name="C2")


def s3_model(field: NumberField | None = None) -> RegularModel:
    """``Y^3 + T*Y + T`` in the degree-3 action of ``S3``; three branch points, genus 0."""
    K = field or NumberField.rationals()
    return RegularModel(
        K, "Y^3 + T*Y + T", 6, 3,
        [("1", "[1 1 1]", 1), ("(12)", "[1 2]", 3), ("(123)", "[3]", 2)], 3, 0, name="S3",
    )
