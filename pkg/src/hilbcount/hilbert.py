"""Specializations with prescribed Frobenius behaviour.

Pipeline: pick the base primes ``p_{-1} < p_0``, turn each local condition
into the set of admissible residues modulo a prime (``tau_cosets``), glue the
residue sets by the Chinese remainder theorem, and emit every ``t0`` of
house at most ``B`` in the resulting cosets.  Extra "Jordan" primes just
above ``p_{-1}`` demand every cycle type, so each emitted ``t0`` is forced to
have the full group; every record is re-verified before it is yielded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import sympy

from . import modp
from .errors import BadPrime, DuplicateRationalPrime, InfeasibleData, ReverificationError
from .modp import CycleType, PrimeIdeal
from .numfield import AlgInt, NumberField
from .specfrob import (
    DEFAULT_FINGERPRINT_BOUND,
    DEFAULT_PRIME_BOUND,
    Certificate,
    RegularModel,
    SpecializationRecord,
    frobenius_pattern,
    specialize,
)

DEFAULT_Q_CAP = 10**6
JORDAN_SCAN_CAP = 10**4


# -- Frobenius data ---------------------------------------------------------------------------


@dataclass
class FrobeniusData:
    """Admissible cycle types per prime ideal."""

    entries: dict[PrimeIdeal, frozenset[CycleType]] = dc_field(default_factory=dict)

    @classmethod
    def from_rows(cls, field: NumberField, rows: Iterable) -> "FrobeniusData":
        """Rows ``(p, types)``; ``p`` is a rational prime or a ``PrimeIdeal``.

        A bare rational prime picks the first degree-1 prime above it (or the
        first prime above it when none has degree 1).
        """
        entries: dict[PrimeIdeal, frozenset[CycleType]] = {}
        for key, types in rows:
            ideal = key if isinstance(key, PrimeIdeal) else default_ideal(field, int(key))
            if isinstance(types, (str, CycleType)) or (types and isinstance(next(iter(types)), int)):
                types = [types]
            cts = frozenset(CycleType.parse(t) for t in types)
            if not cts:
                raise ValueError(f"empty admissible set at {ideal.label()}")
            entries[ideal] = entries.get(ideal, frozenset()) | cts
        return cls(entries)

    @classmethod
    def parse(cls, field: NumberField, text: str) -> "FrobeniusData":
        """Text rows such as ``11, [1 1]; 13, [2]`` (several types: ``11, [1 1] [2]``)."""
        rows = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            head, _, rest = chunk.partition(",")
            types = [t.strip() + "]" for t in rest.split("]") if t.strip()]
            rows.append((int(head), types))
        return cls.from_rows(field, rows)

    def rational_primes(self) -> list[int]:
        return sorted({I.p for I in self.entries})

    def __len__(self) -> int:
        return len(self.entries)

    def to_rows(self) -> list[tuple[str, list[str]]]:
        return [(I.label(), sorted(str(c) for c in cts)) for I, cts in sorted(self.entries.items(), key=lambda e: (e[0].p, e[0].local_factor))]


def default_ideal(field: NumberField, p: int) -> PrimeIdeal:
    ideals = modp.split_prime(field, p)
    deg1 = [I for I in ideals if I.residue_degree == 1]
    return (deg1 or ideals)[0]


def validate_data(model: RegularModel, data: FrobeniusData, min_prime: int = 0) -> None:
    seen: set[int] = set()
    for I, cts in data.entries.items():
        if I.p in seen:
            raise DuplicateRationalPrime(f"two prescriptions above p = {I.p}")
        seen.add(I.p)
        if not model.is_good(I):
            raise BadPrime(f"{I.label()} is not a good prime for the model")
        if I.p <= min_prime:
            raise BadPrime(f"prescribed prime {I.p} must exceed {min_prime}")
        stray = cts - model.cycle_types
        if stray:
            raise ValueError(f"cycle types {sorted(map(str, stray))} are not in the class table")


# -- base primes and cosets -------------------------------------------------------------------


def base_primes(model: RegularModel) -> tuple[int, int]:
    """``p_{-1}``: least prime ``>= r^2 g^2`` and ``>=`` every ramified prime.

    ``p_0``: least prime with at least as many primes strictly between
    ``p_{-1}`` and it as ``G`` has conjugacy classes.
    """
    r, g = model.branch_count, model.genus
    floor = max([2, r * r * g * g] + list(model.field.ramified_primes))
    p_minus1 = int(sympy.nextprime(floor - 1))
    need = len(model.class_table)
    p0 = p_minus1
    between = 0
    while True:
        p0 = int(sympy.nextprime(p0))
        if between >= need:
            return p_minus1, p0
        between += 1


@dataclass
class TauResult:
    """Admissible residues ``tau`` modulo one prime together with the bounds check."""

    ideal: PrimeIdeal
    allowed: frozenset[CycleType]
    residues: list
    nu: int
    lower: float
    upper: float
    branch_residues: int

    @property
    def within_bounds(self) -> bool:
        return self.lower - 1e-9 <= self.nu <= self.upper + 1e-9

    def to_json(self) -> dict:
        return {
            "prime": self.ideal.label(),
            "norm": self.ideal.norm,
            "allowed": sorted(str(c) for c in self.allowed),
            "residues": [r if isinstance(r, int) else list(r) for r in self.residues],
            "nu": self.nu,
            "lower": self.lower,
            "upper": self.upper,
            "within_bounds": self.within_bounds,
        }


def coset_bounds(model: RegularModel, q: int, allowed: Iterable[CycleType]) -> tuple[float, float]:
    """Weil-type bounds for the number of admissible residues modulo a prime of norm ``q``."""
    weight = sum(model.type_weights.get(ct, 0) for ct in allowed)
    frac = weight / model.group_order
    g, r, G = model.genus, model.branch_count, model.group_order
    lower = frac * (q + 1 - 2 * g * math.sqrt(q) - G * (r + 1))
    upper = frac * (q + 1 + 2 * g * math.sqrt(q))
    return lower, upper


def tau_cosets(model: RegularModel, ideal: PrimeIdeal, allowed, q_cap: int = DEFAULT_Q_CAP) -> TauResult:
    """Residues ``t`` modulo ``ideal`` off the branch locus whose pattern is admissible."""
    allowed = frozenset(CycleType.parse(a) for a in (allowed if not isinstance(allowed, (str, CycleType)) else [allowed]))
    if not allowed:
        raise ValueError("allowed set must be nonempty")
    if not model.is_good(ideal):
        raise BadPrime(f"{ideal.label()} is not a good prime for the model")
    if ideal.norm > q_cap:
        raise ValueError(f"residue field of size {ideal.norm} exceeds the enumeration cap {q_cap}")
    F = ideal.residue_field()
    residues = []
    branch = 0
    for r in F.elements():
        pat = model.pattern_at_residue(ideal, r)
        if pat is None:
            branch += 1
        elif pat in allowed:
            residues.append(r)
    lower, upper = coset_bounds(model, ideal.norm, allowed)
    return TauResult(ideal, allowed, sorted(residues), len(residues), lower, upper, branch)


# -- CRT -------------------------------------------------------------------------------------------


@dataclass
class CosetSystem:
    """Residue classes modulo ``I = prod P_i``, one degree-1 prime per rational prime.

    Since each ``P_i`` has residue field ``F_{p_i}``, a class modulo ``I`` is
    fixed by an integer residue modulo ``M = prod p_i`` once the other power
    basis coordinates are multiples of ``M``.
    """

    field: NumberField
    primes: list[PrimeIdeal]
    residue_sets: list[list[int]]

    def __post_init__(self):
        self.modulus_rational = math.prod(I.p for I in self.primes)
        self._sets = [frozenset(rs) for rs in self.residue_sets]
        self._weights = []
        M = self.modulus_rational
        for I in self.primes:
            Mi = M // I.p
            self._weights.append(Mi * pow(Mi, -1, I.p) % M if M > 1 else 0)

    @property
    def count(self) -> int:
        return math.prod(len(s) for s in self.residue_sets)

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, idx: int) -> int:
        """Mixed-radix indexing into the product of residue sets (unsorted order)."""
        if not 0 <= idx < self.count:
            raise IndexError(idx)
        M = self.modulus_rational
        acc = 0
        for w, rs in zip(self._weights, self.residue_sets):
            idx, k = divmod(idx, len(rs))
            acc += w * rs[k]
        return acc % M if M > 1 else 0

    def residues(self) -> list[int]:
        """All residues modulo ``M``, sorted ascending."""
        return sorted(self[i] for i in range(self.count))

    def shard(self, start: int, stop: int) -> list[int]:
        return [self[i] for i in range(start, min(stop, self.count))]

    def contains(self, t: AlgInt) -> bool:
        return all(I.reduce(t) in rs for I, rs in zip(self.primes, self._sets))


def crt_assemble(field: NumberField, parts: Sequence[tuple[PrimeIdeal, Iterable]]) -> CosetSystem:
    seen: set[int] = set()
    primes, sets = [], []
    for ideal, rs in parts:
        if ideal.p in seen:
            raise DuplicateRationalPrime(f"two primes above p = {ideal.p}")
        if ideal.residue_degree != 1:
            raise ValueError(f"{ideal.label()} has residue degree {ideal.residue_degree}; test such primes directly")
        if ideal.p in field.ramified_primes:
            raise BadPrime(f"{ideal.p} is ramified")
        seen.add(ideal.p)
        primes.append(ideal)
        sets.append(sorted({int(r) % ideal.p for r in rs}))
    return CosetSystem(field, primes, sets)


@dataclass
class Representatives:
    """Canonical coset representatives ``(m, M, ..., M)`` with ``m`` in ``[1, M]``."""

    kept: list[AlgInt]
    excluded: list[tuple[AlgInt, float]]

    def __iter__(self) -> Iterator[AlgInt]:
        return iter(self.kept)

    def __len__(self) -> int:
        return len(self.kept)


def canonical_representative(system: CosetSystem, residue: int) -> AlgInt:
    M = system.modulus_rational
    m = residue % M or M
    return AlgInt(system.field, (m,) + (M,) * (system.field.degree - 1))


def representatives(system: CosetSystem, B_cap: float) -> Representatives:
    kept, excluded = [], []
    K = system.field
    for r in system.residues():
        t = canonical_representative(system, r)
        inside, _ = K.house_le(t, B_cap)
        if inside:
            kept.append(t)
        else:
            excluded.append((t, K.house(t)))
    return Representatives(kept, excluded)


def height_law_bound(system: CosetSystem) -> float:
    """``rho * H(basis) * prod p_i``: the height bound for canonical representatives."""
    K = system.field
    return K.degree * K.basis_height * system.modulus_rational


# -- the pipeline --------------------------------------------------------------------------------


@dataclass
class HilbertPlan:
    p_minus1: int
    p0: int
    data: FrobeniusData
    jordan: dict[PrimeIdeal, frozenset[CycleType]]
    full: list[PrimeIdeal]
    taus: list[TauResult]
    system: CosetSystem
    direct: list[TauResult]

    def constraints(self) -> dict[PrimeIdeal, frozenset[CycleType]]:
        out = dict(self.data.entries)
        out.update(self.jordan)
        return out

    def to_json(self) -> dict:
        return {
            "p_minus1": self.p_minus1,
            "p0": self.p0,
            "jordan": [[I.label(), sorted(str(c) for c in cts)] for I, cts in self.jordan.items()],
            "full_type_primes": [I.label() for I in self.full],
            "tau": [t.to_json() for t in self.taus + self.direct],
            "modulus": self.system.modulus_rational,
            "coset_count": self.system.count,
        }


def _good_deg1_ideal(model: RegularModel, p: int) -> PrimeIdeal | None:
    if p in model.field.ramified_primes:
        return None
    for I in modp.split_prime(model.field, p):
        if I.residue_degree == 1 and model.is_good(I):
            return I
    return None


def plan_hilbert(model: RegularModel, data: FrobeniusData | None = None, jordan: bool = True,
                 q_cap: int = DEFAULT_Q_CAP) -> HilbertPlan:
    """Choose Jordan-forcing primes, compute every tau set and CRT-assemble them."""
    data = data or FrobeniusData()
    p_minus1, p0 = base_primes(model)
    validate_data(model, data, min_prime=p_minus1)
    used = set(data.rational_primes())
    jordan_map: dict[PrimeIdeal, frozenset[CycleType]] = {}
    full: list[PrimeIdeal] = []
    if jordan:
        # smallest unused good prime above p_{-1} whose tau set for the type is nonempty
        taken = set(used)
        for ct in sorted(model.cycle_types):
            p = p_minus1
            while True:
                p = int(sympy.nextprime(p))
                if p > JORDAN_SCAN_CAP:
                    raise InfeasibleData(f"no prime up to {JORDAN_SCAN_CAP} realizes cycle type {ct}")
                if p in taken:
                    continue
                I = _good_deg1_ideal(model, p)
                if I is None or not tau_cosets(model, I, [ct], q_cap).residues:
                    continue
                jordan_map[I] = frozenset([ct])
                taken.add(p)
                break
        # the rest of ]p_{-1}, p_0[ takes every type
        for q in sympy.primerange(p_minus1 + 1, p0):
            q = int(q)
            if q in used or any(I.p == q for I in jordan_map):
                continue
            I = _good_deg1_ideal(model, q)
            if I is not None:
                full.append(I)
    constraints = dict(data.entries)
    constraints.update(jordan_map)
    for I in full:
        constraints[I] = model.cycle_types
    taus, direct = [], []
    for I, cts in sorted(constraints.items(), key=lambda e: e[0].p):
        if I.residue_degree == 1 or I.norm <= q_cap:
            tau = tau_cosets(model, I, cts, q_cap)
            if not tau.residues:
                raise InfeasibleData(f"no admissible residue modulo {I.label()} for {sorted(map(str, cts))}")
            (taus if I.residue_degree == 1 else direct).append(tau)
        else:
            direct.append(TauResult(I, frozenset(cts), [], -1, float("nan"), float("nan"), 0))
    system = crt_assemble(model.field, [(t.ideal, t.residues) for t in taus])
    return HilbertPlan(p_minus1, p0, data, jordan_map, full, taus, system, direct)


@dataclass
class HilbertStats:
    candidates: int = 0
    branch_skipped: int = 0
    direct_rejected: int = 0
    emitted: int = 0


class HilbertRun:
    """Iterable of re-verified records with house at most ``B``."""

    def __init__(self, model: RegularModel, B: float, plan: HilbertPlan,
                 prime_bound: int = DEFAULT_PRIME_BOUND, fingerprint_bound: int = DEFAULT_FINGERPRINT_BOUND):
        self.model = model
        self.B = B
        self.plan = plan
        self.prime_bound = max(prime_bound, max((I.norm for I in plan.constraints()), default=0))
        self.fingerprint_bound = fingerprint_bound
        self.stats = HilbertStats()

    def candidates(self) -> Iterator[AlgInt]:
        """Every ``t0`` with house ``<= B`` in the admissible cosets, deterministic order."""
        K = self.model.field
        system = self.plan.system
        direct = self.plan.direct
        if K.degree == 1:
            M = system.modulus_rational
            b = math.floor(self.B)
            ts = []
            for r in system.residues():
                k0 = -((b + r) // M)
                t = r + k0 * M
                while t <= b:
                    if t >= -b:
                        ts.append(t)
                    t += M
            source: Iterable[AlgInt] = (K(t) for t in sorted(ts))
        else:
            source = (t for t in K.enumerate_box(self.B) if system.contains(t))
        for t in source:
            if direct and not all(self._direct_ok(tau, t) for tau in direct):
                self.stats.direct_rejected += 1
                continue
            yield t

    def _direct_ok(self, tau: TauResult, t: AlgInt) -> bool:
        pat = self.model.pattern_at_residue(tau.ideal, tau.ideal.reduce(t))
        return pat is not None and pat in tau.allowed

    def __iter__(self) -> Iterator[SpecializationRecord]:
        model = self.model
        cons = self.plan.constraints()
        for t in self.candidates():
            self.stats.candidates += 1
            if not model.disc(t):
                self.stats.branch_skipped += 1
                continue
            rec = specialize(model, t, self.prime_bound, self.fingerprint_bound)
            verify_record(model, rec, cons)
            self.stats.emitted += 1
            yield rec


def verify_record(model: RegularModel, rec: SpecializationRecord, constraints: dict) -> None:
    """Independent re-check of an emitted record; failure is a bug."""
    if rec.certificate != Certificate.CERTIFIED_G:
        raise ReverificationError(f"t0 = {rec.t0} emitted with certificate {rec.certificate}")
    for I, cts in constraints.items():
        pat = frobenius_pattern(model, rec.t0, I)
        if pat not in cts:
            raise ReverificationError(f"t0 = {rec.t0}: pattern {pat} at {I.label()} not in {sorted(map(str, cts))}")


def hilbert_enumerate(model: RegularModel, B: float, data: FrobeniusData | None = None,
                      prime_bound: int = DEFAULT_PRIME_BOUND,
                      fingerprint_bound: int = DEFAULT_FINGERPRINT_BOUND,
                      q_cap: int = DEFAULT_Q_CAP) -> HilbertRun:
    plan = plan_hilbert(model, data, q_cap=q_cap)
    return HilbertRun(model, B, plan, prime_bound, fingerprint_bound)
