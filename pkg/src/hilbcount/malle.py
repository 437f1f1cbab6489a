"""Counting specialized fields with a discriminant budget, and Grunwald search.

A norm budget ``y`` becomes a height budget ``B = y^(1/(rho delta-))``;
specializations of house at most ``B`` are certified, filtered by
``|N(Delta_P(t0))| <= y`` and deduplicated by fingerprint.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadPrime, DeltaTooSmall, InfeasibleData, ReverificationError, SearchExhausted
from .hilbert import (
    FrobeniusData, base_primes, crt_assemble, hilbert_enumerate, tau_cosets, validate_data,
)
from .numfield import AlgInt
from .specfrob import (
    DEFAULT_FINGERPRINT_BOUND, DEFAULT_PRIME_BOUND, Certificate, FingerprintIndex, RegularModel,
    SpecializationRecord, frobenius_pattern, specialize,
)


def delta_default(model: RegularModel, override: float | None = None) -> float:
    """``3 r |G|^4 log |G|``, or a validated override (must exceed ``delta_P``)."""
    G = model.group_order
    if G < 2:
        raise ValueError("|G| must be at least 2")
    if override is not None:
        if override <= model.delta_P:
            raise DeltaTooSmall(f"delta = {override} must exceed delta_P = {model.delta_P}")
        return float(override)
    return 3 * model.branch_count * G**4 * math.log(G)


def height_budget(y: float, rho: int, delta: float, delta_P: float) -> float:
    """``B = y^(1/(rho delta-))`` with ``delta- = (delta + delta_P)/2``."""
    if y <= 1:
        raise ValueError("y must exceed 1")
    if not delta > delta_P >= 0:
        raise DeltaTooSmall(f"need delta > delta_P >= 0, got {delta}, {delta_P}")
    return y ** (1.0 / (rho * (delta + delta_P) / 2))


# -- census -----------------------------------------------------------------------------------


@dataclass
class CensusTotals:
    enumerated: int = 0
    branch_skipped: int = 0
    certified: int = 0
    norm_filtered: int = 0
    distinct: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CensusReport:
    y: float
    B: float
    delta: float
    delta_P: int
    delta_minus: float
    totals: CensusTotals
    exponent_fit: float | None
    target_exponent: float
    lower_bound: float
    fingerprint_bound: int
    records: dict[str, SpecializationRecord]
    fit_points: list[tuple[float, int]] = dc_field(default_factory=list)

    @property
    def distinct(self) -> int:
        return self.totals.distinct

    @property
    def meets_lower_bound(self) -> bool:
        return self.distinct > self.lower_bound

    def ordered_records(self) -> list[SpecializationRecord]:
        return sorted(self.records.values(), key=lambda r: r.sort_key())

    def summary(self) -> dict:
        return {
            "y": self.y, "B": self.B, "delta": self.delta, "delta_P": self.delta_P,
            "delta_minus": self.delta_minus, "totals": self.totals.as_dict(),
            "distinct": self.distinct, "exponent_fit": self.exponent_fit,
            "target_exponent": self.target_exponent, "lower_bound": self.lower_bound,
            "meets_lower_bound": self.meets_lower_bound, "fingerprint_bound": self.fingerprint_bound,
            "fit_points": [[a, b] for a, b in self.fit_points],
            "note": "counts filter by |N(Delta_P(t0))|, which bounds the field discriminant norm from above",
        }


def _specialize_chunk(args) -> list:
    model, ts, prime_bound, X = args
    out = []
    for t in ts:
        if not model.disc(t):
            out.append(None)
        else:
            out.append(specialize(model, t, prime_bound, X))
    return out


def certified_records(model: RegularModel, B: float, prime_bound: int = DEFAULT_PRIME_BOUND,
                      fingerprint_bound: int = DEFAULT_FINGERPRINT_BOUND, workers: int = 1,
                      y: float | None = None) -> tuple[list[SpecializationRecord], CensusTotals]:
    """Specialize every ``t0`` with house at most ``B``; keep CertifiedG records.

    With ``y`` given, ``t0`` whose discriminant norm exceeds ``y`` are counted
    as norm-filtered before any prime is factored.
    """
    K = model.field
    totals = CensusTotals()
    ts = []
    for t in K.enumerate_box(B):
        totals.enumerated += 1
        dv = model.disc(t)
        if not dv:
            totals.branch_skipped += 1
        elif y is not None and K.abs_norm(dv) > y:
            totals.norm_filtered += 1
        else:
            ts.append(t)
    if workers > 1 and len(ts) > 64:
        size = math.ceil(len(ts) / (4 * workers))
        chunks = [(model, ts[i:i + size], prime_bound, fingerprint_bound) for i in range(0, len(ts), size)]
        with ProcessPoolExecutor(workers) as ex:
            recs = [r for part in ex.map(_specialize_chunk, chunks) for r in part]
    else:
        recs = _specialize_chunk((model, ts, prime_bound, fingerprint_bound))
    kept = [r for r in recs if r is not None and r.certificate == Certificate.CERTIFIED_G]
    totals.certified = len(kept)
    kept.sort(key=lambda r: r.sort_key())
    return kept, totals


def dedup(model: RegularModel, records: Iterable[SpecializationRecord],
          X: int = DEFAULT_FINGERPRINT_BOUND) -> dict[str, SpecializationRecord]:
    """One representative per field: the first record, in ``sort_key`` order, of each
    class of fingerprints agreeing on their common primes.  Keyed by its digest."""
    index = FingerprintIndex(model.good_ideals_up_to(X))
    out: dict[str, SpecializationRecord] = {}
    for r in sorted(records, key=lambda r: r.sort_key()):
        _, new = index.insert(r.fingerprint)
        if new:
            out[r.fingerprint.digest] = r
    return out


def count_fields(model: RegularModel, y: float, delta: float | None = None,
                 data: FrobeniusData | None = None, prime_bound: int = DEFAULT_PRIME_BOUND,
                 fingerprint_bound: int = DEFAULT_FINGERPRINT_BOUND, workers: int = 1) -> CensusReport:
    """Distinct certified specializations with discriminant norm at most ``y``."""
    K = model.field
    rho = K.degree
    delta = delta_default(model, delta)
    dP = model.delta_P
    B = height_budget(y, rho, delta, dP)
    if data is not None and len(data):
        run = hilbert_enumerate(model, B, data, prime_bound, fingerprint_bound)
        recs = []
        totals = CensusTotals()
        for r in run:
            if r.disc_norm <= y:
                recs.append(r)
            else:
                totals.norm_filtered += 1
        totals.enumerated = run.stats.candidates
        totals.branch_skipped = run.stats.branch_skipped
        totals.certified = len(recs) + totals.norm_filtered
    else:
        recs, totals = certified_records(model, B, prime_bound, fingerprint_bound, workers, y)
    for r in recs:
        if r.disc_norm > y:
            raise AssertionError(f"record t0 = {r.t0} exceeds the norm budget")
    distinct = dedup(model, recs, fingerprint_bound)
    totals.distinct = len(distinct)
    target = (1 - 1 / model.group_order) / delta

    # distinct counts on a geometric sub-budget grid, reusing the same records
    fit_points = []
    for frac in (0.5, 0.625, 0.75, 0.875, 1.0):
        ys = y**frac
        Bs = height_budget(ys, rho, delta, dP) if ys > 1 else 0
        sub = [r for r in recs if r.disc_norm <= ys and K.house(r.t0) <= Bs * (1 + 1e-12)]
        n = len(dedup(model, sub, fingerprint_bound))
        if n:
            fit_points.append((ys, n))
    fit = None
    if len(fit_points) >= 2 and len({n for _, n in fit_points}) > 1:
        xs = np.log([a for a, _ in fit_points])
        ns = np.log([b for _, b in fit_points])
        fit = float(np.polyfit(xs, ns, 1)[0])
    return CensusReport(
        y=y, B=B, delta=delta, delta_P=dP, delta_minus=(delta + dP) / 2, totals=totals,
        exponent_fit=fit, target_exponent=target, lower_bound=y**target,
        fingerprint_bound=fingerprint_bound, records=distinct, fit_points=fit_points,
    )


@dataclass
class DistinctRatio:
    distinct: int
    size: int
    B: float
    gamma: float | None
    ratio: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def distinct_ratio(model: RegularModel, B: float, certified_set: Sequence[SpecializationRecord],
                   gamma_step: float = 0.01, gamma_max: float = 50.0) -> DistinctRatio:
    """``N`` distinct fingerprints against ``|H|``, with the least grid ``gamma'`` such that
    ``N B^(rho/|G|) (log B)^gamma' >= |H|`` (``E`` taken to be 0)."""
    X = max((r.fingerprint.prime_bound for r in certified_set), default=DEFAULT_FINGERPRINT_BOUND)
    N = len(dedup(model, certified_set, X))
    H = len(certified_set)
    rho = model.field.degree
    base = N * B ** (rho / model.group_order)
    gamma = None
    if N and base >= H:
        gamma = 0.0
    elif N and B > math.e:
        need = math.log(H / base) / math.log(math.log(B))
        k = math.ceil(need / gamma_step - 1e-9)
        gamma = round(k * gamma_step, 10) if k * gamma_step <= gamma_max else None
    return DistinctRatio(N, H, B, gamma, H / N if N else float("inf"))


# -- Grunwald --------------------------------------------------------------------------------


@dataclass
class GrunwaldResult:
    solutions: list[SpecializationRecord]
    height_reached: int
    below_p0: list[str]
    scanned: int

    def __iter__(self) -> Iterator[SpecializationRecord]:
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)


def exceptional_reason(model: RegularModel, ideal) -> str | None:
    if (6 * model.group_order) % ideal.p == 0:
        return f"{ideal.p} divides 6|G|"
    if not model.is_good(ideal):
        return f"{ideal.label()} is a bad prime"
    return None


def _shells(K, height_cap: int) -> Iterator[tuple[int, list[AlgInt]]]:
    if K.degree == 1:
        yield 0, [K(0)]
        for h in range(1, height_cap + 1):
            yield h, [K(h), K(-h)]
        return
    seen: set = set()
    for h in range(0, height_cap + 1):
        shell = [t for t in K.enumerate_box(h) if t.coords not in seen]
        seen.update(t.coords for t in shell)
        yield h, shell


def grunwald_search(model: RegularModel, data: FrobeniusData, max_solutions: int = 3,
                    height_cap: int = 10**4, prime_bound: int = DEFAULT_PRIME_BOUND,
                    fingerprint_bound: int = DEFAULT_FINGERPRINT_BOUND) -> GrunwaldResult:
    """Certified specializations meeting every prescription, with distinct fingerprints,
    scanned in increasing height shells up to ``height_cap``."""
    if not len(data):
        raise InfeasibleData("no prescriptions given")
    for I in data.entries:
        why = exceptional_reason(model, I)
        if why:
            raise InfeasibleData(f"prescription at {I.label()} rejected: {why}")
    try:
        validate_data(model, data)
    except BadPrime as exc:
        raise InfeasibleData(str(exc)) from exc
    _, p0 = base_primes(model)
    below = [I.label() for I in data.entries if I.p < p0]
    taus = []
    for I, cts in data.entries.items():
        tau = tau_cosets(model, I, cts)
        if not tau.residues:
            raise InfeasibleData(f"no admissible residue modulo {I.label()}")
        taus.append(tau)
    system = crt_assemble(model.field, [(t.ideal, t.residues) for t in taus])
    solutions: list[SpecializationRecord] = []
    index = FingerprintIndex(model.good_ideals_up_to(fingerprint_bound))
    pb = max(prime_bound, max(I.norm for I in data.entries))
    scanned = 0
    for h, shell in _shells(model.field, height_cap):
        for t in shell:
            if not system.contains(t) or not model.disc(t):
                continue
            scanned += 1
            rec = specialize(model, t, pb, fingerprint_bound)
            if rec.certificate != Certificate.CERTIFIED_G or index.find(rec.fingerprint) is not None:
                continue
            for I, cts in data.entries.items():
                if frobenius_pattern(model, t, I) not in cts:
                    raise ReverificationError(f"t0 = {t} violates the prescription at {I.label()}")
            index.insert(rec.fingerprint)
            solutions.append(rec)
            if len(solutions) >= max_solutions:
                return GrunwaldResult(solutions, h, below, scanned)
    raise SearchExhausted(
        f"found {len(solutions)} of {max_solutions} solutions up to height {height_cap}", height_cap
    )
