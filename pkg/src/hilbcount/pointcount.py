"""Integral points of bounded height on plane curves.

Brute-force counters (``count_points``, ``count_specialization_points``) act
as oracles for the determinant-method cover built by ``detmethod_cover``:
auxiliary polynomials, one per residue point modulo a few large totally
split primes, each vanishing on every point of its residue class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import modp
from .errors import ExponentCap, NotSmooth, RankFull
from .modp import PrimeField, PrimeIdeal
from .numfield import AlgInt, NumberField
from .polyring import BiPoly, UniPoly, alg_roots, poly_height, resultant_bivar

DEFAULT_E_CAP = 64
DEFAULT_HENSEL_CAP = 16
SMOOTH_COUNT_LIMIT = 5 * 10**7


# -- brute force ----------------------------------------------------------------------------


@dataclass
class PointCount:
    count: int
    points: list[tuple[AlgInt, AlgInt]]
    boundary_included: list = dc_field(default_factory=list)

    def __int__(self) -> int:
        return self.count


def count_points(field: NumberField, F: BiPoly, B: float) -> PointCount:
    """``N(F, B)``: points of ``F = 0`` in ``O_K^2`` with both houses at most ``B``."""
    if not F.monic_in_x2:
        raise ValueError("count_points expects F monic in X2")
    box = field.enumerate_box(B)
    pts = []
    for x1 in box:
        for y in alg_roots(field, F.at_x1(x1)):
            inside, certain = field.house_le(y, B)
            if inside:
                if not certain:
                    box.boundary_included.append(y)
                pts.append((x1, y))
    pts.sort(key=lambda p: (p[0].coords, p[1].coords))
    return PointCount(len(pts), pts, list(box.boundary_included))


def count_points_naive(field: NumberField, F: BiPoly, B: float) -> PointCount:
    """Double-box oracle: evaluate ``F`` on every pair of the height box."""
    xs = list(field.enumerate_box(B))
    conj = np.array([field.conjugates(x) for x in xs])  # (N, rho)
    keys = list(F.terms)
    coef = np.array([field.conjugates(F.terms[k]) for k in keys])  # (T, rho)
    pts = []
    scale = max(1.0, B) ** F.d * max(1.0, poly_height(F)[0]) * len(keys)
    for a, x1 in enumerate(xs):
        vals = np.zeros((len(xs), field.degree), dtype=complex)
        for k, (i, j) in enumerate(keys):
            vals += coef[k] * conj[a] ** i * conj**j
        near = np.nonzero(np.abs(vals).max(axis=1) <= 1e-9 * scale + 1e-6)[0]
        for b in near:
            if not F(x1, xs[b]):
                pts.append((x1, xs[b]))
    pts.sort(key=lambda p: (p[0].coords, p[1].coords))
    return PointCount(len(pts), pts)


def theorem_c_rhs(d: int, B: float, rho: int, c_fit: float = 1.0) -> float:
    """``c d^8 (log B)^3 B^(rho/d)``."""
    if B < 3:
        raise ValueError("B must be at least 3")
    return c_fit * d**8 * math.log(B) ** 3 * B ** (rho / d)


def liouville_bound(F: BiPoly, t: AlgInt) -> float:
    """``2 (m+1) H(F) H+(t)^m`` bounding the house of roots of ``F(t, Y)``."""
    H, _ = poly_height(F)
    ht = max(1.0, t.field.house(t))
    return 2 * (F.m + 1) * H * ht**F.m


@dataclass
class SpecCount:
    count: int
    hits: list[tuple[AlgInt, list[AlgInt]]]
    roots_checked: int
    liouville_violations: list[tuple[AlgInt, AlgInt, float, float]]


def count_specialization_points(field: NumberField, F: BiPoly, B: float) -> SpecCount:
    """``N_T(F, B)``: ``t`` of house at most ``B`` with ``F(t, Y)`` having a root in ``O_K``."""
    if not F.monic_in_x2:
        raise ValueError("count_specialization_points expects F monic in Y")
    hits = []
    checked = 0
    violations = []
    for t in field.enumerate_box(B):
        roots = alg_roots(field, F.at_x1(t))
        if roots:
            bound = liouville_bound(F, t)
            for y in roots:
                checked += 1
                hy = field.house(y)
                if hy > bound * (1 + 1e-12):
                    violations.append((t, y, hy, bound))
            hits.append((t, sorted(roots, key=lambda r: r.coords)))
    return SpecCount(len(hits), hits, checked, violations)


def cor_c_shift(F: BiPoly, B: float | None = None, cap: int = DEFAULT_E_CAP) -> tuple[BiPoly, int]:
    """``G(T, Y) = F(T, T^E + Y)`` with ``E = [m n L1/L2] + 1``.

    ``H = max(e^e, H(F))``, ``L1 = log H``, ``L2 = log log H``.  ``B`` is
    accepted for interface symmetry; ``E`` does not depend on it.
    """
    m, n = F.m, F.n
    if m < 1 or n < 1:
        raise ValueError("cor_c_shift needs deg_T >= 1 and deg_Y >= 1")
    H = max(math.e**math.e, poly_height(F)[0])
    L1 = math.log(H)
    L2 = math.log(L1)
    E = int(math.floor(m * n * L1 / L2)) + 1
    if E > cap:
        raise ExponentCap(f"shift exponent E = {E} exceeds cap {cap}")
    shift = BiPoly(F.field, {(E, 0): 1, (0, 1): 1}, F.names)
    return F.substitute_x2(shift), E


def fit_slope(Bs: Sequence[float], Ns: Sequence[float]) -> float:
    """Least-squares slope of ``log N`` against ``log B``."""
    x = np.log(np.asarray(Bs, dtype=float))
    y = np.log(np.asarray(Ns, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


# -- p-adic helpers --------------------------------------------------------------------------


def padic_root(def_poly: Sequence[int], a: int, p: int, m: int) -> int:
    """Lift a simple root ``a`` of ``f mod p`` to a root modulo ``p^m``."""
    mod = p**m
    f = list(def_poly)
    df = [i * c for i, c in enumerate(f)][1:]

    def ev(poly, x, md):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % md
        return acc

    x = a % p
    k = 1
    while k < m:
        k = min(2 * k, m)
        md = p**k
        x = (x - ev(f, x, md) * pow(ev(df, x, md), -1, md)) % md
    return x % mod


def _reduce_pm(x: AlgInt, root: int, mod: int) -> int:
    acc = 0
    for c in reversed(x.coords):
        acc = (acc * root + int(c)) % mod
    return acc


# truncated power series over Z/p^m in y, as lists of length ``prec``

def _ser_mul(a, b, prec, mod):
    out = [0] * prec
    for i, x in enumerate(a[:prec]):
        if x:
            for j in range(min(len(b), prec - i)):
                out[i + j] = (out[i + j] + x * b[j]) % mod
    return out


def _ser_inv(a, prec, mod):
    inv0 = pow(a[0], -1, mod)
    out = [0] * prec
    out[0] = inv0
    for k in range(1, prec):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            s += a[j] * out[k - j]
        out[k] = (-s * inv0) % mod
    return out


@dataclass
class Hensel:
    """``x1 = f_m(x2) mod p^m`` for points near ``(t1, t2)``; ``coeffs`` in powers of ``x2 - t2``."""

    p: int
    m: int
    t2: int
    coeffs: list[int]
    theta_root: int

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def __call__(self, x2: int) -> int:
        y = (x2 - self.t2) % self.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * y + c) % self.modulus
        return acc

    def as_poly(self) -> list[int]:
        """Expand to coefficients in powers of ``x2`` (mod ``p^m``)."""
        mod = self.modulus
        out = [0] * len(self.coeffs)
        binom_row = [1]
        for k, c in enumerate(self.coeffs):
            # (x2 - t2)^k
            for i, b in enumerate(binom_row):
                out[i] = (out[i] + c * b * pow(-self.t2, k - i, mod)) % mod
            binom_row = [1] + [binom_row[i] + binom_row[i + 1] for i in range(len(binom_row) - 1)] + [1]
        return out

    def check(self, x1: AlgInt, x2: AlgInt) -> bool:
        mod = self.modulus
        return _reduce_pm(x1, self.theta_root, mod) == self(_reduce_pm(x2, self.theta_root, mod))


def hensel_series(F: BiPoly, ideal: PrimeIdeal, t: tuple[int, int], m: int) -> Hensel:
    """Newton lift of ``X1`` as a function of ``X2`` near the residue point ``t``."""
    if ideal.residue_degree != 1:
        raise ValueError("hensel_series needs a residue-degree-1 prime")
    p = ideal.p
    K = F.field
    mod = p**m
    root = padic_root(K.def_poly, ideal.root, p, m) if K.degree > 1 else (-K.def_poly[0]) % mod
    t1, t2 = t[0] % p, t[1] % p
    terms = {k: _reduce_pm(c, root, mod) for k, c in F.terms.items()}
    dterms = {(i - 1, j): (i * c) % mod for (i, j), c in terms.items() if i}
    if sum(c * pow(t1, i, p) * pow(t2, j, p) for (i, j), c in terms.items()) % p:
        raise NotSmooth(f"({t1}, {t2}) is not on F modulo {p}")
    if not sum(c * pow(t1, i, p) * pow(t2, j, p) for (i, j), c in dterms.items()) % p:
        raise NotSmooth(f"dF/dX1 vanishes at ({t1}, {t2}) modulo {p}")
    prec = m
    x2s = [t2 % mod, 1] + [0] * (prec - 2) if prec > 1 else [t2 % mod]
    # powers of x2 = t2 + y as series
    n = F.n
    x2pow = [[1] + [0] * (prec - 1)]
    for _ in range(n):
        x2pow.append(_ser_mul(x2pow[-1], x2s, prec, mod))

    def evaluate(poly_terms, phi):
        deg1 = max((i for i, _ in poly_terms), default=0)
        phipow = [[1] + [0] * (prec - 1)]
        for _ in range(deg1):
            phipow.append(_ser_mul(phipow[-1], phi, prec, mod))
        acc = [0] * prec
        for (i, j), c in poly_terms.items():
            prod = _ser_mul(phipow[i], x2pow[j], prec, mod)
            for k in range(prec):
                acc[k] = (acc[k] + c * prod[k]) % mod
        return acc

    phi = [t1] + [0] * (prec - 1)
    steps = max(1, math.ceil(math.log2(2 * m))) + 1
    for _ in range(steps):
        val = evaluate(terms, phi)
        der = evaluate(dterms, phi)
        corr = _ser_mul(val, _ser_inv(der, prec, mod), prec, mod)
        phi = [(a - b) % mod for a, b in zip(phi, corr)]
    # y^k is divisible by p^k, so only k < m matters; reduce coefficient k mod p^m anyway
    return Hensel(p, m, t2, phi[:m], root)


# -- determinant method --------------------------------------------------------------------


@dataclass
class ResiduePointRecord:
    prime: str
    residue: tuple[int, int]
    points: int
    rank: int
    aux_poly: str
    hensel_ok: bool

    def to_json(self) -> dict:
        return {
            "prime": self.prime, "residue": list(self.residue), "points": self.points,
            "rank": self.rank, "aux_poly": self.aux_poly, "hensel_ok": self.hensel_ok,
        }


@dataclass
class CoverReport:
    aux_polys: list[BiPoly]
    k: int
    k_formal: int | None
    primes_used: list[str]
    smooth_counts: dict[str, int]
    coverage_ok: bool
    coprimality_ok: bool
    bezout_bound: int
    D: int
    E: int
    E_prime: int
    anchor: tuple[int, int]
    P: int
    P_formula: int
    regime: str
    r: int
    hensel_m: int
    hensel_capped: bool
    max_rank: int
    points: int
    records: list[ResiduePointRecord]
    diagnostics: list[str]

    def summary(self) -> dict:
        return {
            "k": self.k, "k_formal": self.k_formal, "primes": self.primes_used,
            "smooth_counts": self.smooth_counts, "coverage_ok": self.coverage_ok,
            "coprimality_ok": self.coprimality_ok, "bezout_bound": self.bezout_bound,
            "D": self.D, "E": self.E, "E_prime": self.E_prime, "anchor": list(self.anchor),
            "P": self.P, "P_formula": self.P_formula, "regime": self.regime, "r": self.r,
            "hensel_m": self.hensel_m, "hensel_capped": self.hensel_capped,
            "max_rank": self.max_rank, "points": self.points, "diagnostics": self.diagnostics,
        }


def default_D(d: int, B: float) -> int:
    return int(d * math.log(B)) + 1


def anchor_monomial(F: BiPoly) -> tuple[int, int]:
    """Degree-``d`` term of ``F`` with the smallest ``X1`` exponent."""
    d = F.d
    return min((k for k in F.terms if k[0] + k[1] == d), key=lambda k: k[0])


def monomial_set(F: BiPoly, D: int) -> list[tuple[int, int]]:
    """Exponents ``(e1, e2)`` with ``e1 + e2 <= D`` not divisible by the anchor monomial.

    No multiple of ``F`` lies in the span of these monomials (the anchor is
    the leading term of ``F`` for a graded order), so any nonzero kernel
    vector gives a polynomial coprime to the irreducible ``F``.
    """
    m1, m2 = anchor_monomial(F)
    out = [(e1, s - e1) for s in range(D + 1) for e1 in range(s, -1, -1)
           if not (e1 >= m1 and s - e1 >= m2)]
    return out


def p_formula(d: int, D: int, B: float, rho: int) -> int:
    return 1 + int(math.floor((math.e**8 * B ** (1 / d + 6 / D)) ** rho))


def lemma_prime_count(F: BiPoly, B: float, rho: int) -> tuple[float, int]:
    """``h(B) = log2(d^3 H+(F) B^(d-1))`` and ``r = [log2(rho h(B))] + 1``."""
    d = F.d
    _, Hp = poly_height(F)
    h = math.log2(d**3 * Hp * B ** (d - 1))
    return h, int(math.floor(math.log2(rho * h))) + 1


def _rref_kernel(rows: list[list], ncols: int, K: NumberField) -> tuple[int, list]:
    """Rank and one kernel vector (first free column) by Gauss-Jordan over ``K``."""
    a = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][col].inverse() if a[rank][col] != 1 else None
        if inv is not None:
            a[rank] = [x * inv for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    kernels = []
    for fc in free[:8]:
        vec = [K.zero()] * ncols
        vec[fc] = K.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -a[r][fc]
        kernels.append(vec)
    return rank, kernels


def _integral_poly(K: NumberField, monos, vec, names) -> BiPoly:
    den = math.lcm(*(c.denominator() for c in vec))
    ints = [c * den for c in vec]
    g = math.gcd(*(int(x) for c in ints for x in c.coords)) or 1
    terms = {}
    for e, c in zip(monos, ints):
        if c:
            terms[e] = AlgInt(K, (int(x) // g for x in c.coords))
    return BiPoly(K, terms, names)


def _vec_powmod(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = out * b % p
        e >>= 1
        if e:
            b = b * b % p
    return out


def smooth_point_count(F: BiPoly, ideal: PrimeIdeal) -> int:
    """Points of ``F mod P`` in ``F_p^2`` with ``dF/dX1`` nonzero."""
    p = ideal.p
    Fp = PrimeField(p)
    rows = [[ideal.reduce(c) for c in r.coeffs] for r in F.rows_in_x2()]
    F1 = F.diff(0)
    n = F.n
    if n <= 2 and p > 2 and p < 2**31:
        t = np.arange(p, dtype=np.int64)

        def ev(coeffs):
            acc = np.zeros(p, dtype=np.int64)
            for c in reversed(coeffs):
                acc = (acc * t + c) % p
            return acc

        if n == 1:
            total = p
        else:
            a0, a1 = ev(rows[0]), ev(rows[1])
            disc = (a1 * a1 - 4 * a0) % p
            leg = _vec_powmod(disc, (p - 1) // 2, p)
            total = int(np.count_nonzero(disc == 0) + 2 * np.count_nonzero(leg == 1))
        # remove points where dF/dX1 also vanishes
        if not F1:
            return 0
        R = resultant_bivar(F, F1, wrt=1)
        Rp = ideal.reduce_poly(R.coeffs)
        bad = 0
        if Rp:
            cands = modp.roots_in_field(Fp, Rp) if len(Rp) > 1 else []
        else:
            cands = range(p)
        F1rows = [[ideal.reduce(c) for c in r.coeffs] for r in F1.rows_in_x2()]
        for t1 in cands:
            fy = modp.p_strip(Fp, [_horner_int(r, t1, p) for r in rows])
            for y in modp.roots_in_field(Fp, fy):
                if _horner_int([_horner_int(r, t1, p) for r in F1rows], y, p) == 0:
                    bad += 1
        return total - bad
    total = 0
    F1rows = [[ideal.reduce(c) for c in r.coeffs] for r in F1.rows_in_x2()]
    for t1 in range(p):
        fy = modp.p_strip(Fp, [_horner_int(r, t1, p) for r in rows])
        for y in modp.roots_in_field(Fp, fy):
            if _horner_int([_horner_int(r, t1, p) for r in F1rows], y, p):
                total += 1
    return total


def _horner_int(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def detmethod_cover(field: NumberField, F: BiPoly, B: float, D: int | None = None,
                    P_cap: int | None = None, hensel_cap: int = DEFAULT_HENSEL_CAP,
                    points: Sequence[tuple[AlgInt, AlgInt]] | None = None) -> CoverReport:
    """Cover ``R(F, B)`` by ``dF/dX1`` and one auxiliary polynomial per residue point.

    ``F`` is assumed absolutely irreducible (attested by the caller).  The
    kernel vector of each monomial matrix is computed exactly, scaled into
    ``O_K`` and checked to vanish on its residue class and to be coprime to
    ``F``.
    """
    K = field
    d = F.d
    D = default_D(d, B) if D is None else D
    if D < d:
        raise ValueError(f"D = {D} must be at least deg F = {d}")
    if not F.monic_in_x2:
        raise ValueError("detmethod_cover expects F monic in X2")
    rho = K.degree
    diagnostics: list[str] = []
    if points is None:
        points = count_points(K, F, B).points
    F1 = F.diff(0)
    if not F1:
        raise ValueError("dF/dX1 is identically zero")
    aux: list[BiPoly] = [F1]
    S = [(x1, x2) for x1, x2 in points if F1(x1, x2)]

    monos = monomial_set(F, D)
    E = len(monos)
    E_prime = sum(a + b for a, b in monos)
    anchor = anchor_monomial(F)
    Pf = p_formula(d, D, B, rho)
    if P_cap is not None and P_cap < Pf:
        P, regime = P_cap, "P_cap"
    else:
        P, regime = Pf, "formula"
    h, r = lemma_prime_count(F, B, rho)
    m_full = E * (E - 1) // 2
    m = min(m_full, hensel_cap)
    if m < m_full:
        diagnostics.append(f"Hensel precision capped at {m} (E(E-1)/2 = {m_full})")

    # r prime ideals of degree 1 from totally split primes >= P; extend if S is not covered
    ideals: list[PrimeIdeal] = []
    start = P
    while True:
        need = r - len(ideals)
        if need > 0:
            batch = modp.totally_split_primes(K, start, math.ceil(need / rho))
            for p, ids in batch:
                ideals.extend(ids)
            start = batch[-1][0] + 1
            ideals = ideals[: max(r, len(ideals))]
        uncovered = [x for x in S if all(I.reduce(F1(*x)) == 0 for I in ideals[:r])]
        if not uncovered:
            break
        diagnostics.append(f"{len(uncovered)} points uncovered by {r} primes; adding one")
        r += 1
    ideals = ideals[:r]

    records: list[ResiduePointRecord] = []
    smooth: dict[str, int] = {}
    coprime = True
    max_rank = 0
    for I in ideals:
        if I.p <= SMOOTH_COUNT_LIMIT:
            smooth[I.label()] = smooth_point_count(F, I)
            if smooth[I.label()] > 2 * d**3 * I.p:
                raise AssertionError(f"smooth point count exceeds 2 d^3 p at {I.label()}")
        else:
            diagnostics.append(f"smooth points at {I.label()} not enumerated (p too large)")
        classes: dict[tuple[int, int], list] = {}
        for x in S:
            if I.reduce(F1(*x)) != 0:
                classes.setdefault((I.reduce(x[0]), I.reduce(x[1])), []).append(x)
        for tbar in sorted(classes):
            pts = classes[tbar]
            rows = [[x1**a * x2**b for a, b in monos] for x1, x2 in pts]
            rank, kernels = _rref_kernel(rows, E, K)
            max_rank = max(max_rank, rank)
            if rank >= E:
                raise RankFull(f"monomial matrix of full rank {rank} at {I.label()} ({regime} regime)", prime=I.label())
            G = None
            for vec in kernels:
                cand = _integral_poly(K, monos, vec, F.names)
                if resultant_bivar(F, cand, wrt=1):
                    G = cand
                    break
            if G is None:
                coprime = False
                G = _integral_poly(K, monos, kernels[0], F.names)
            for x in pts:
                if G(*x):
                    raise AssertionError("auxiliary polynomial does not vanish on its class")
            hs = hensel_series(F, I, tbar, m)
            h_ok = all(hs.check(*x) for x in pts)
            if not h_ok:
                raise AssertionError(f"Hensel relation fails at {I.label()} {tbar}")
            aux.append(G)
            records.append(ResiduePointRecord(I.label(), tbar, len(pts), rank, G.to_str(), h_ok))

    coprime = coprime and all(resultant_bivar(F, G, wrt=1) for G in aux)
    covered = all(any(not G(*x) for G in aux) for x in points)
    k = len(aux)
    k_formal = 1 + sum(smooth.values()) if len(smooth) == len(ideals) else None
    return CoverReport(
        aux_polys=aux, k=k, k_formal=k_formal, primes_used=[I.label() for I in ideals],
        smooth_counts=smooth, coverage_ok=covered, coprimality_ok=coprime,
        bezout_bound=k * d * D, D=D, E=E, E_prime=E_prime, anchor=anchor, P=P, P_formula=Pf,
        regime=regime, r=r, hensel_m=m, hensel_capped=m < m_full, max_rank=max_rank,
        points=len(points), records=records, diagnostics=diagnostics,
    )
