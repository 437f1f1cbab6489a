"""Exact univariate and bivariate polynomials with ``AlgInt`` coefficients.

``UniPoly`` doubles as the ring ``O_K[T]`` (or ``K[T]`` once field division
has produced fractional coordinates), which lets the generic subresultant code
in ``_prs`` compute Y-discriminants and bivariate resultants without ever
leaving exact arithmetic.
"""

from __future__ import annotations

import ast
import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np

from . import _prs
from .errors import PrecisionExhausted
from .numfield import AlgInt, NumberField, format_coords


class UniPoly:
    """Univariate polynomial over ``K``, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Iterable):
        self.field = field
        cs = [c if isinstance(c, AlgInt) else field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[AlgInt, ...] = tuple(cs)

    def __reduce__(self):
        return (UniPoly, (self.field, self.coeffs))

    @classmethod
    def from_ints(cls, field: NumberField, ints: Sequence) -> "UniPoly":
        return cls(field, [field(c) for c in ints])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> AlgInt:
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, AlgInt)):
            if not other:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str('T')})"

    def to_str(self, var: str = "T") -> str:
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append(_term_str(c.coords, {var: i}))
        return _join_terms(terms)

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction, AlgInt)):
            return UniPoly(self.field, [other])
        raise TypeError(f"cannot combine UniPoly with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgInt)):
            return UniPoly(self.field, [c * other for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly(self.field, [1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        """Horner evaluation at an ``AlgInt`` (or a ``UniPoly``, giving composition)."""
        if isinstance(x, UniPoly):
            acc = UniPoly(self.field, [])
        else:
            acc = self.field.zero()
            x = self.field(x) if not isinstance(x, AlgInt) else x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Long division over ``K`` (coordinates may become fractions)."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        inv_lc = other.lc.inverse() if other.lc != 1 else None
        rem = list(self.coeffs)
        db = other.degree
        q = [self.field.zero()] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            top = rem[-1]
            coef = top if inv_lc is None else top * inv_lc
            shift = len(rem) - 1 - db
            q[shift] = coef
            for i, b in enumerate(other.coeffs):
                rem[i + shift] = rem[i + shift] - coef * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return UniPoly(self.field, q), UniPoly(self.field, rem)

    def exquo(self, other) -> "UniPoly":
        if isinstance(other, (int, AlgInt)):
            return UniPoly(self.field, [c.exquo(other) if isinstance(other, int) else c / other for c in self.coeffs])
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "UniPoly":
        if not self.coeffs or self.lc == 1:
            return self
        inv = self.lc.inverse()
        return UniPoly(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd over ``K``."""
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a else a

    def primitive_integral(self) -> "UniPoly":
        """Scale by a positive rational so coordinates are coprime integers."""
        if not self.coeffs:
            return self
        den = math.lcm(*(c.denominator() for c in self.coeffs))
        scaled = [c * den for c in self.coeffs]
        g = math.gcd(*(int(x) for c in scaled for x in c.coords))
        return UniPoly(self.field, [AlgInt(self.field, (int(x) // g for x in c.coords)) for c in scaled])

    def radical(self) -> "UniPoly":
        """Squarefree part over ``K``, rescaled to have integral coordinates."""
        if self.degree <= 0:
            return self
        g = self.gcd(self.derivative())
        return self.divmod(g)[0].primitive_integral()


def _term_str(coords: Sequence, powers: Mapping[str, int]) -> str:
    mono = "*".join(
        (v if e == 1 else f"{v}^{e}") for v, e in powers.items() if e
    )
    nz = [c for c in coords if c]
    if not mono:
        return format_coords(coords)
    if len(nz) == 1 and not any(coords[1:]):
        c = coords[0]
        if c == 1:
            return mono
        if c == -1:
            return "-" + mono
        return f"{c}*{mono}"
    return f"({format_coords(coords)})*{mono}"


def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


class BiPoly:
    """Bivariate polynomial ``sum a_ij X1^i X2^j`` (equivalently ``T^i Y^j``)."""

    __slots__ = ("field", "terms", "names")

    def __init__(self, field: NumberField, terms: Mapping, names: tuple[str, str] = ("T", "Y")):
        self.field = field
        clean = {}
        for (i, j), c in terms.items():
            c = c if isinstance(c, AlgInt) else field(c)
            if c:
                clean[(int(i), int(j))] = c
        self.terms: dict[tuple[int, int], AlgInt] = clean
        self.names = names

    def __reduce__(self):
        return (BiPoly, (self.field, self.terms, self.names))

    # -- degrees and flags

    @property
    def m(self) -> int:
        return max((i for i, _ in self.terms), default=0)

    @property
    def n(self) -> int:
        return max((j for _, j in self.terms), default=0)

    @property
    def d(self) -> int:
        return max((i + j for i, j in self.terms), default=0)

    @property
    def monic_in_x2(self) -> bool:
        n = self.n
        top = [(i, j) for (i, j) in self.terms if j == n]
        return top == [(0, n)] and self.terms[(0, n)] == 1

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"BiPoly({self.to_str()})"

    def to_str(self) -> str:
        a, b = self.names
        keys = sorted(self.terms, key=lambda k: (-(k[0] + k[1]), -k[1], -k[0]))
        return _join_terms([_term_str(self.terms[k].coords, {a: k[0], b: k[1]}) for k in keys])

    def renamed(self, names: tuple[str, str]) -> "BiPoly":
        return BiPoly(self.field, self.terms, names)

    # -- arithmetic

    def _coerce(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction, AlgInt)):
            return BiPoly(self.field, {(0, 0): other}, self.names)
        raise TypeError(f"cannot combine BiPoly with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out[k] + c if k in out else c
        return BiPoly(self.field, out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.field, {k: -c for k, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in o.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out[k] + a * b if k in out else a * b
        return BiPoly(self.field, out, self.names)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = BiPoly(self.field, {(0, 0): 1}, self.names)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- evaluation and calculus

    def evaluate(self, x1, x2) -> tuple[AlgInt, int]:
        """Exact value at ``(x1, x2)`` and the number ``l`` of nonzero terms."""
        K = self.field
        x1, x2 = K(x1), K(x2)
        p1 = [K.one()]
        p2 = [K.one()]
        for _ in range(self.m):
            p1.append(p1[-1] * x1)
        for _ in range(self.n):
            p2.append(p2[-1] * x2)
        acc = K.zero()
        for (i, j), c in self.terms.items():
            acc = acc + c * p1[i] * p2[j]
        return acc, len(self.terms)

    def __call__(self, x1, x2) -> AlgInt:
        return self.evaluate(x1, x2)[0]

    def diff(self, axis: int) -> "BiPoly":
        """Partial derivative; ``axis`` 0 is X1/T, 1 is X2/Y."""
        out = {}
        for (i, j), c in self.terms.items():
            e = (i, j)[axis]
            if e:
                out[(i - 1, j) if axis == 0 else (i, j - 1)] = c * e
        return BiPoly(self.field, out, self.names)

    def swap(self) -> "BiPoly":
        return BiPoly(self.field, {(j, i): c for (i, j), c in self.terms.items()}, self.names[::-1])

    def rows_in_x2(self) -> list[UniPoly]:
        """Coefficients of ``X2^j`` as polynomials in ``X1`` (index j)."""
        rows = [[self.field.zero()] * (self.m + 1) for _ in range(self.n + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        return [UniPoly(self.field, r) for r in rows]

    @classmethod
    def from_rows_in_x2(cls, field: NumberField, rows: Sequence[UniPoly], names=("T", "Y")) -> "BiPoly":
        return cls(field, {(i, j): c for j, r in enumerate(rows) for i, c in enumerate(r.coeffs)}, names)

    def at_x1(self, t) -> UniPoly:
        """Specialize ``X1 = t``: the univariate ``F(t, X2)``."""
        return UniPoly(self.field, [r(t) for r in self.rows_in_x2()])

    def at_x2(self, y) -> UniPoly:
        return self.swap().at_x1(y)

    def substitute_x2(self, q: "BiPoly") -> "BiPoly":
        """``F(X1, q(X1, X2))``."""
        out = BiPoly(self.field, {}, self.names)
        qpow = BiPoly(self.field, {(0, 0): 1}, self.names)
        rows = self.rows_in_x2()
        for j, r in enumerate(rows):
            if r:
                out = out + BiPoly(self.field, {(i, 0): c for i, c in enumerate(r.coeffs)}, self.names) * qpow
            if j < len(rows) - 1:
                qpow = qpow * q
        return out


def poly_height(Q) -> tuple[float, float]:
    """Height ``H`` (max house of coefficients) and ``H+ = max(1, H)``."""
    coeffs = list(Q.terms.values()) if isinstance(Q, BiPoly) else list(Q.coeffs)
    if not coeffs:
        raise ValueError("height of the zero polynomial")
    K = coeffs[0].field
    H = max(K.house(c) for c in coeffs)
    return H, max(1.0, H)


def _kt_ring(field: NumberField):
    one = UniPoly(field, [1])
    zero = UniPoly(field, [])
    return (lambda a, b: a.exquo(b)), one, zero


def disc_y(P: BiPoly) -> tuple[UniPoly, int]:
    """Discriminant of ``P`` with respect to ``Y`` (the second variable), and its degree."""
    n = P.n
    if n < 1:
        raise ValueError("disc_y needs deg_Y >= 1")
    if not P.monic_in_x2:
        raise ValueError("disc_y needs P monic in Y")
    rows = P.rows_in_x2()
    if n == 1:
        D = UniPoly(P.field, [1])
        return D, 0
    drows = [r * j for j, r in enumerate(rows)][1:]
    exquo, one, zero = _kt_ring(P.field)
    res = _prs.resultant(rows, drows, exquo, one, zero)
    if (n * (n - 1) // 2) % 2:
        res = -res
    return res, res.degree


def resultant_bivar(F: BiPoly, G: BiPoly, wrt: int = 1) -> UniPoly:
    """Resultant eliminating ``X2`` (``wrt=1``) or ``X1`` (``wrt=0``)."""
    if not F or not G:
        raise ValueError("resultant of a zero polynomial")
    if wrt == 0:
        F, G = F.swap(), G.swap()
    exquo, one, zero = _kt_ring(F.field)
    return _prs.resultant(F.rows_in_x2(), G.rows_in_x2(), exquo, one, zero)


def uni_resultant(a: UniPoly, b: UniPoly) -> AlgInt:
    """Resultant of two univariate polynomials over ``O_K``."""
    K = a.field
    return _prs.resultant(list(a.coeffs), list(b.coeffs), lambda x, y: x / y, K.one(), K.zero())


# -- roots in O_K --------------------------------------------------------------------------


def _float_roots(coeffs: Sequence[complex]) -> np.ndarray:
    cs = np.array(list(reversed(coeffs)), dtype=complex)
    if len(cs) <= 1:
        return np.array([], dtype=complex)
    return np.roots(cs)


def _mp_roots(coeffs: Sequence, prec: int) -> list:
    with mpmath.workprec(prec):
        cs = list(reversed(coeffs))
        if len(cs) == 2:
            return [-mpmath.mpmathify(cs[1]) / mpmath.mpmathify(cs[0])]
        return list(mpmath.polyroots(cs, maxsteps=400, extraprec=prec))


def _int_roots(ints: Sequence[int]) -> set[int]:
    """Integer roots of a monic integer polynomial, exactly verified."""
    while ints and ints[-1] == 0:
        ints = ints[:-1]
    out: set[int] = set()
    k = 0
    while k < len(ints) - 1 and ints[k] == 0:
        k += 1
    if k:
        out.add(0)
        ints = ints[k:]
    if len(ints) <= 1:
        return out
    big = max(abs(c) for c in ints)
    if big < 2**50:
        approx = _float_roots([float(c) for c in ints])
    else:
        prec = 64 + 2 * big.bit_length()
        approx = [complex(z) for z in _mp_roots(ints, prec)]

    def horner(y: int) -> int:
        acc = 0
        for c in reversed(ints):
            acc = acc * y + c
        return acc

    c0 = abs(ints[0])
    for z in approx:
        if abs(z.imag) > 1.0 + 1e-6 * abs(z):
            continue
        base = math.floor(z.real)
        for y in (base - 1, base, base + 1, base + 2):
            if y and c0 % abs(y) == 0 and horner(y) == 0:
                out.add(y)
    return out


def alg_roots(field: NumberField, Q: UniPoly) -> set[AlgInt]:
    """All roots of ``Q`` that lie in ``Z[theta]``, each exactly verified.

    Leading coefficient need not be 1 but roots are only searched in ``O_K``.
    """
    if not Q:
        raise ValueError("alg_roots of the zero polynomial")
    K = field
    if Q.degree <= 0:
        return set()
    if K.degree == 1:
        if Q.is_monic() and Q.is_integral():
            return {K(y) for y in _int_roots([c.coords[0] for c in Q.coeffs])}
    out: set[AlgInt] = set()
    # strip the root 0
    cs = list(Q.coeffs)
    k = 0
    while not cs[k]:
        k += 1
    if k:
        out.add(K.zero())
        Q = UniPoly(K, cs[k:])
        if Q.degree <= 0:
            return out
    prec = 53
    cond = float(np.abs(np.linalg.inv(K._powers)).sum(axis=1).max())
    while True:
        roots_per_emb = _embedded_roots(K, Q, prec)
        scale = max((abs(complex(z)) for rs in roots_per_emb for z in rs), default=1.0)
        err = cond * max(1.0, scale) * 2.0 ** (-prec + 20)
        if err < 0.1:
            break
        if prec >= K.precision_cap:
            raise PrecisionExhausted("root coordinates cannot be rounded at the precision cap")
        prec = min(K.precision_cap, max(128, prec * 2))
    vinv = _vinv(K, prec)
    for combo in itertools.product(*roots_per_emb):
        coords = _apply_vinv(vinv, combo, prec)
        if any(abs(c - round(c)) > 0.25 for c in coords):
            continue
        y = AlgInt(K, [int(round(c)) for c in coords])
        if y not in out and not Q(y):
            out.add(y)
    return out


def _embedded_roots(K: NumberField, Q: UniPoly, prec: int) -> list[list]:
    out = []
    if prec <= 53:
        for j in range(K.degree):
            pw = K._powers[j]
            cs = [complex(np.dot(pw, [float(x) for x in c.coords])) for c in Q.coeffs]
            out.append(list(_float_roots(cs)))
        return out
    roots, _ = K._roots_at(prec)
    with mpmath.workprec(prec):
        for z in roots:
            cs = [sum((mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)) * z**i
                      for i, x in enumerate(c.coords)) for c in Q.coeffs]
            out.append(_mp_roots(cs, prec))
    return out


def _vinv(K: NumberField, prec: int):
    if prec <= 53:
        return np.linalg.inv(K._powers)
    roots, _ = K._roots_at(prec)
    with mpmath.workprec(prec):
        V = mpmath.matrix([[z**i for i in range(K.degree)] for z in roots])
        return V**-1


def _apply_vinv(vinv, combo, prec: int) -> list[float]:
    if prec <= 53:
        return [float(v.real) for v in vinv @ np.array(combo, dtype=complex)]
    with mpmath.workprec(prec):
        vec = mpmath.matrix(list(combo))
        res = vinv * vec
        return [float(mpmath.re(res[i])) for i in range(len(combo))]


# -- text syntax ------------------------------------------------------------------------------


class PolyParseError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        super().__init__(message + (f" (column {column})" if column is not None else ""))
        self.column = column


_AXES = {"T": 0, "X1": 0, "Y": 1, "X2": 1}


def parse_poly(text: str, field: NumberField | None = None) -> BiPoly:
    """Parse ``Y^2 - T``, ``X2^2 - X1^3`` or ``Y^2 - (1+w)*T`` into a BiPoly.

    ``w`` stands for ``theta``.  Whitespace is ignored; ``^`` is the exponent
    and multiplication must be written with ``*``.
    """
    K = field or NumberField.rationals()
    src = text.strip()
    if not src:
        raise PolyParseError("empty polynomial literal", 1)
    if "**" in src:
        raise PolyParseError("use ^ for exponents", src.index("**") + 1)
    try:
        tree = ast.parse(src.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"malformed polynomial literal {text!r}", exc.offset) from None
    names: set[str] = set()

    def build(node) -> BiPoly:
        col = getattr(node, "col_offset", 0) + 1
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return BiPoly(K, {(0, 0): node.value})
        if isinstance(node, ast.Name):
            if node.id == "w":
                return BiPoly(K, {(0, 0): K.theta})
            if node.id in _AXES:
                names.add(node.id)
                ax = _AXES[node.id]
                return BiPoly(K, {(1, 0) if ax == 0 else (0, 1): 1})
            raise PolyParseError(f"unknown symbol {node.id!r}", col)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)) or node.right.value < 0:
                    raise PolyParseError("exponent must be a nonnegative integer", col)
                return build(node.left) ** node.right.value
            left, right = build(node.left), build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise PolyParseError(f"unsupported syntax in {text!r}", col)

    poly = build(tree.body)
    if names & {"T", "Y"} and names & {"X1", "X2"}:
        raise PolyParseError("cannot mix T/Y with X1/X2")
    poly.names = ("X1", "X2") if names & {"X1", "X2"} else ("T", "Y")
    return poly
