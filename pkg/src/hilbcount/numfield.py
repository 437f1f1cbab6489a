"""Monogenic number fields ``K = Q(theta)`` and their algebraic integers.

Elements are stored as coordinate vectors over the power basis
``1, theta, ..., theta**(rho-1)``.  Arithmetic is exact (Python ints, or
``Fraction`` coordinates for elements of ``K`` produced by division); the
archimedean side (embeddings, houses) is numeric with an explicit error
bound and precision doubling near comparison thresholds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import mpmath
import numpy as np
import sympy

from . import _prs
from .errors import NotIrreducible, NotMonic, PrecisionExhausted

DEFAULT_PRECISION_CAP = 256


def _as_int(c) -> int:
    if isinstance(c, Fraction):
        if c.denominator != 1:
            raise ValueError(f"non-integral coefficient {c}")
        return int(c.numerator)
    if int(c) != c:
        raise ValueError(f"non-integral coefficient {c}")
    return int(c)


def int_poly_disc(f: Sequence[int]) -> int:
    """Discriminant of a monic integer polynomial (lowest degree first)."""
    n = len(f) - 1
    if n <= 0:
        raise ValueError("discriminant of a constant")
    if n == 1:
        return 1
    res = _prs.resultant(list(f), _prs.derivative(f), _prs.int_exquo, 1, 0)
    return res if (n * (n - 1) // 2) % 2 == 0 else -res


class NumberField:
    """``K = Q[X]/(f)`` for a monic irreducible integer polynomial ``f``.

    ``def_poly`` is the coefficient list of ``f``, lowest degree first, so
    ``NumberField([-2, 0, 1])`` is ``Q(sqrt 2)``.  Counts are always counts
    over ``Z[theta]``; ``z_theta_is_maximal`` flags fields where this order is
    smaller than the full ring of integers.
    """

    def __init__(self, def_poly: Sequence[int], precision_cap: int = DEFAULT_PRECISION_CAP):
        coeffs = [_as_int(c) for c in def_poly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise NotMonic(f"defining polynomial {coeffs} is not monic")
        self.def_poly: tuple[int, ...] = tuple(coeffs)
        self.degree: int = len(coeffs) - 1
        self.precision_cap = precision_cap
        if self.degree > 1:
            x = sympy.Symbol("x")
            _, factors = sympy.Poly(list(reversed(coeffs)), x).factor_list()
            if len(factors) != 1 or factors[0][1] != 1:
                raise NotIrreducible(f"{coeffs} factors over Q")
        self.disc_f: int = int_poly_disc(self.def_poly)
        self.ramified_primes: frozenset[int] = frozenset(
            int(p) for p in sympy.factorint(abs(self.disc_f))
        )
        # theta**k reduced mod f, for k in [rho, 2*rho - 2]
        rho = self.degree
        table = {}
        cur = [0] * rho
        if rho > 1:
            cur[rho - 1] = 1
        for k in range(rho, 2 * rho - 1):
            # multiply cur (= theta**(k-1)) by theta
            top = cur[-1] if rho > 1 else 0
            nxt = [0] + cur[:-1] if rho > 1 else [0]
            nxt = [a - top * c for a, c in zip(nxt, self.def_poly[:-1])]
            if k == rho:
                nxt = [-c for c in self.def_poly[:-1]]
            table[k] = tuple(nxt)
            cur = nxt
        self._reduce_table = table
        self._mp_roots: dict[int, tuple[list, float]] = {}
        self._init_embeddings()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls([0, 1])

    def __repr__(self) -> str:
        return f"NumberField({list(self.def_poly)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and other.def_poly == self.def_poly

    def __hash__(self) -> int:
        return hash(self.def_poly)

    def __reduce__(self):
        return (NumberField, (list(self.def_poly), self.precision_cap))

    def __call__(self, value) -> "AlgInt":
        if isinstance(value, AlgInt):
            return value
        if isinstance(value, (int, Fraction)):
            return AlgInt(self, (value,) + (0,) * (self.degree - 1))
        return AlgInt(self, tuple(value))

    @property
    def theta(self) -> "AlgInt":
        if self.degree == 1:
            return AlgInt(self, (-self.def_poly[0],))
        return AlgInt(self, (0, 1) + (0,) * (self.degree - 2))

    def zero(self) -> "AlgInt":
        return AlgInt(self, (0,) * self.degree)

    def one(self) -> "AlgInt":
        return self(1)

    # -- embeddings --------------------------------------------------------------

    def _roots_at(self, prec: int) -> tuple[list, float]:
        """Roots of ``f`` at ``prec`` bits, sorted, with an error radius."""
        if prec in self._mp_roots:
            return self._mp_roots[prec]
        rho = self.degree
        with mpmath.workprec(prec):
            if rho == 1:
                roots, err = [mpmath.mpc(-self.def_poly[0])], mpmath.mpf(0)
            else:
                roots, err = mpmath.polyroots(
                    list(reversed(self.def_poly)), maxsteps=200, extraprec=2 * prec, error=True
                )
                roots = [mpmath.mpc(z) for z in roots]
            roots.sort(key=lambda z: (float(z.real), float(z.imag)))
            err = float(err) + 2.0 ** (-prec + 8)
        self._mp_roots[prec] = (roots, err)
        return roots, err

    def _init_embeddings(self) -> None:
        prec = 64
        while True:
            roots, err = self._roots_at(prec)
            gaps = [abs(a - b) for a, b in itertools.combinations(roots, 2)]
            if not gaps or float(min(gaps)) > 4 * err:
                break
            if prec >= self.precision_cap:
                raise PrecisionExhausted("embeddings do not separate at the precision cap")
            prec *= 2
        self.working_precision = prec
        self.embeddings = np.array([complex(z) for z in roots], dtype=complex)
        rho = self.degree
        self._powers = np.array([[z**i for i in range(rho)] for z in self.embeddings])
        vinv = np.linalg.inv(self._powers)
        # |coord_i| <= B * sum_j |V^{-1}_{ij}| whenever house <= B
        self._coord_scale = np.abs(vinv).sum(axis=1)

    @cached_property
    def basis_height(self) -> float:
        """House of the power basis: ``max_i house(theta**i)``."""
        return float(max(1.0, np.abs(self._powers).max()))

    @cached_property
    def z_theta_is_maximal(self) -> bool:
        from .modp import dedekind_is_maximal

        for p, e in sympy.factorint(abs(self.disc_f)).items():
            if e >= 2 and not dedekind_is_maximal(self.def_poly, int(p)):
                return False
        return True

    def conjugates(self, x: "AlgInt") -> np.ndarray:
        """Numeric images of ``x`` under the embeddings (float precision)."""
        return self._powers @ np.array([float(c) for c in x.coords])

    # -- heights and norms ----------------------------------------------------------

    def house(self, x: "AlgInt") -> float:
        value, _ = self.house_with_error(x)
        return value

    def house_with_error(self, x: "AlgInt", prec: int | None = None) -> tuple[float, float]:
        """House of ``x`` and an absolute error bound for it."""
        coords = x.coords
        if self.degree == 1:
            return float(abs(coords[0])), 0.0
        big = max(abs(c) for c in coords)
        if prec is None and big < 2**48:
            vals = np.abs(self._powers @ np.array([float(c) for c in coords]))
            size = float((np.abs(self._powers) @ np.abs(np.array([float(c) for c in coords]))).max())
            return float(vals.max()), 1e-12 * (size + 1.0)
        if prec is None:
            prec = max(self.working_precision, int(math.log2(big + 1)) + 64)
        roots, err = self._roots_at(prec)
        best = 0.0
        bound = 0.0
        with mpmath.workprec(prec):
            for z in roots:
                v = sum((mpmath.mpf(c) * z**i for i, c in enumerate(coords)), mpmath.mpc(0))
                av = abs(v)
                r = abs(z)
                e = sum(abs(c) * ((r + err) ** i - r**i) for i, c in enumerate(coords))
                e += sum(abs(c) * r**i for i, c in enumerate(coords)) * mpmath.mpf(2) ** (-prec + 10)
                if av > best:
                    best = av
                bound = max(bound, e)
            return float(best), float(bound)

    def house_le(self, x: "AlgInt", bound: float) -> tuple[bool, bool]:
        """Decide ``house(x) <= bound``.

        Returns ``(answer, certain)``.  Near-ties are re-evaluated with doubled
        precision up to ``precision_cap``; if still undecided the element is
        conservatively reported inside (``answer=True, certain=False``).
        """
        if self.degree == 1:
            return abs(x.coords[0]) <= bound, True
        value, err = self.house_with_error(x)
        prec = self.working_precision
        while True:
            if value + err <= bound:
                return True, True
            if value - err > bound:
                return False, True
            if prec > self.precision_cap:
                return True, False
            value, err = self.house_with_error(x, prec)
            prec *= 2

    def abs_norm(self, x: "AlgInt") -> int | Fraction:
        """``|N_{K/Q}(x)|`` computed exactly as ``|Res(f, x(X))|``."""
        den = x.denominator()
        num = [_as_int(c * den) for c in x.coords]
        num = _prs.strip(num)
        if not num:
            return 0
        res = abs(_prs.resultant(list(self.def_poly), num, _prs.int_exquo, 1, 0))
        if den == 1:
            return res
        return Fraction(res, den**self.degree)

    def coordinate_box(self, bound: float) -> list[int]:
        """Per-coordinate integer bounds containing every ``x`` with house <= bound."""
        if self.degree == 1:
            return [math.floor(bound)]
        return [math.floor(bound * s * (1 + 1e-9) + 1e-9) for s in self._coord_scale]

    def enumerate_box(self, bound: float) -> "BoxEnumeration":
        return BoxEnumeration(self, bound)

    # -- exact linear algebra helpers --------------------------------------------------

    def mul_matrix(self, x: "AlgInt") -> list[list]:
        """Matrix (column j = coords of ``x * theta**j``) of multiplication by ``x``."""
        cols = []
        cur = x
        th = self.theta
        for _ in range(self.degree):
            cols.append(cur.coords)
            cur = cur * th
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]


def _solve_fractions(mat: list[list], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system over Q by Gauss-Jordan elimination."""
    n = len(mat)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


class AlgInt:
    """Element of ``K`` as power-basis coordinates; integral when all coords are ints."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable):
        coords = tuple(coords)
        rho = field.degree
        if len(coords) < rho:
            coords = coords + (0,) * (rho - len(coords))
        elif len(coords) > rho:
            raise ValueError(f"expected {rho} coordinates, got {len(coords)}")
        self.field = field
        self.coords = tuple(
            int(c.numerator) if isinstance(c, Fraction) and c.denominator == 1 else c for c in coords
        )

    def __reduce__(self):
        return (AlgInt, (self.field, self.coords))

    # -- basic protocol

    def __repr__(self) -> str:
        return f"AlgInt({format_coords(self.coords)})"

    def __str__(self) -> str:
        return format_coords(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgInt):
            return self.coords == other.coords and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash(self.coords)

    def _coerce(self, other) -> "AlgInt":
        if isinstance(other, AlgInt):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        raise TypeError(f"cannot combine AlgInt with {type(other).__name__}")

    # -- ring operations

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return AlgInt(self.field, (a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgInt(self.field, (-a for a in self.coords))

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return AlgInt(self.field, (a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgInt(self.field, (a * other for a in self.coords))
        if not isinstance(other, AlgInt):
            return NotImplemented
        rho = self.field.degree
        a, b = self.coords, other.coords
        if rho == 1:
            return AlgInt(self.field, (a[0] * b[0],))
        raw = [0] * (2 * rho - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    raw[i + j] += ai * bj
        out = raw[:rho]
        table = self.field._reduce_table
        for k in range(rho, 2 * rho - 1):
            rk = raw[k]
            if rk:
                for i, t in enumerate(table[k]):
                    out[i] += rk * t
        return AlgInt(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return (self.field.one() / self) ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "AlgInt":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1:
            return AlgInt(self.field, (Fraction(1) / self.coords[0],))
        e0 = [1] + [0] * (self.field.degree - 1)
        return AlgInt(self.field, _solve_fractions(self.field.mul_matrix(self), e0))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgInt(self.field, (Fraction(a) / other for a in self.coords))
        if not isinstance(other, AlgInt):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def exquo(self, other) -> "AlgInt":
        """Exact quotient in ``Z[theta]``; raises ArithmeticError if not integral."""
        if isinstance(other, int):
            out = []
            for a in self.coords:
                q, r = divmod(a, other)
                if r:
                    raise ArithmeticError(f"{self} not divisible by {other}")
                out.append(q)
            return AlgInt(self.field, out)
        q = self / other
        if not q.is_integral():
            raise ArithmeticError(f"{self} not divisible by {other}")
        return q

    # -- queries

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) for c in self.coords)

    def denominator(self) -> int:
        return math.lcm(*(c.denominator if isinstance(c, Fraction) else 1 for c in self.coords))

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def house(self) -> float:
        return self.field.house(self)

    def norm(self):
        return self.field.abs_norm(self)


def format_coords(coords: Sequence) -> str:
    terms = []
    for i, c in enumerate(coords):
        if not c:
            continue
        mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
        if i == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


@dataclass
class BoxEnumeration:
    """All ``x`` in ``Z[theta]`` with ``house(x) <= bound``, each exactly once.

    Iterating yields the elements in lexicographic coordinate order (last
    coordinate outermost).  Elements whose house could not be separated from
    the bound at the precision cap are included and listed in
    ``boundary_included`` once iteration has passed them.
    """

    field: NumberField
    bound: float
    boundary_included: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")

    def __iter__(self) -> Iterator[AlgInt]:
        K = self.field
        B = self.bound
        rho = K.degree
        if rho == 1:
            b = math.floor(B)
            for c in range(-b, b + 1):
                yield AlgInt(K, (c,))
            return
        box = K.coordinate_box(B)
        tol = 1e-9 * max(1.0, B)
        z = K.embeddings
        tails = itertools.product(*(range(-b, b + 1) for b in reversed(box[1:])))
        for tail_rev in tails:
            tail = tail_rev[::-1]
            base = np.zeros(rho, dtype=complex)
            for i, c in enumerate(tail, start=1):
                if c:
                    base += c * z**i
            lo, hi = -box[0] - 1.0, box[0] + 1.0
            empty = False
            for bj in base:
                s2 = B * B - bj.imag**2
                if s2 < -tol * (B + 1):
                    empty = True
                    break
                s = math.sqrt(max(s2, 0.0))
                lo = max(lo, -bj.real - s)
                hi = min(hi, -bj.real + s)
            if empty or lo > hi + 2 * tol:
                continue
            start = math.ceil(lo - 2 * tol)
            stop = math.floor(hi + 2 * tol)
            for c0 in range(start, stop + 1):
                x = AlgInt(K, (c0,) + tuple(tail))
                if lo + 2 * tol <= c0 <= hi - 2 * tol:
                    yield x
                    continue
                inside, certain = K.house_le(x, B)
                if inside:
                    if not certain:
                        self.boundary_included.append(x)
                    yield x

    def to_list(self) -> list[AlgInt]:
        return list(self)


def house(field: NumberField, x: AlgInt) -> float:
    return field.house(x)


def abs_norm(field: NumberField, x: AlgInt):
    return field.abs_norm(x)


def enumerate_box(field: NumberField, bound: float) -> BoxEnumeration:
    return BoxEnumeration(field, bound)


def nf_new(def_poly: Sequence[int], precision_cap: int = DEFAULT_PRECISION_CAP) -> NumberField:
    return NumberField(def_poly, precision_cap)
