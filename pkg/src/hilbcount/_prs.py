"""Subresultant pseudo-remainder sequences over an integral domain.

Polynomials are coefficient lists, lowest degree first, whose entries are
ring elements supporting ``+``, ``-``, ``*``, unary ``-`` and truthiness
(``bool(c)`` is False exactly for zero).  Exact division in the ring is
supplied by the caller, so the same code runs over ``Z``, ``O_K`` and
``O_K[T]``.
"""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

R = TypeVar("R")
Exquo = Callable[[R, R], R]


def strip(a: Sequence[R]) -> list[R]:
    out = list(a)
    while out and not out[-1]:
        out.pop()
    return out


def degree(a: Sequence[R]) -> int:
    return len(a) - 1


def _scale(a: Sequence[R], c: R) -> list[R]:
    return [c * x for x in a]


def prem(a: Sequence[R], b: Sequence[R]) -> list[R]:
    """Pseudo-remainder of ``lc(b)**(deg a - deg b + 1) * a`` modulo ``b``."""
    a, b = strip(a), strip(b)
    if not b:
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    db = degree(b)
    lb = b[-1]
    e = degree(a) - db + 1
    if e <= 0:
        return a
    r = a
    while r and degree(r) >= db:
        lr = r[-1]
        shift = degree(r) - db
        r = _scale(r, lb)
        for i, bi in enumerate(b):
            r[i + shift] = r[i + shift] - lr * bi
        r = strip(r)
        e -= 1
    if e > 0:
        f = lb
        for _ in range(e - 1):
            f = f * lb
        r = _scale(r, f)
    return strip(r)


def _power(x: R, k: int, one: R) -> R:
    out = one
    for _ in range(k):
        out = out * x
    return out


def resultant(a: Sequence[R], b: Sequence[R], exquo: Exquo, one: R, zero: R) -> R:
    """Resultant of two polynomials by the subresultant algorithm.

    Content removal is skipped so that only exact division is required;
    coefficient growth is still controlled by the ``g * h**delta`` divisors.
    """
    a, b = strip(a), strip(b)
    if not a or not b:
        return zero
    da, db = degree(a), degree(b)
    sign = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            sign = -1
    if db == 0:
        return _signed(sign, _power(b[0], da, one))
    g = one
    h = one
    while True:
        delta = degree(a) - degree(b)
        if degree(a) % 2 and degree(b) % 2:
            sign = -sign
        r = prem(a, b)
        a = b
        if not r:
            return zero
        div = g * _power(h, delta, one)
        b = [exquo(c, div) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exquo(_power(g, delta, one), _power(h, delta - 1, one))
        if degree(b) == 0:
            da = degree(a)
            if da == 0:
                return _signed(sign, one)
            if da == 1:
                h = b[0]
            else:
                h = exquo(_power(b[0], da, one), _power(h, da - 1, one))
            return _signed(sign, h)


def _signed(sign: int, x: R) -> R:
    return x if sign > 0 else -x


def derivative(a: Sequence[R]) -> list[R]:
    return strip([i * c for i, c in enumerate(a)][1:])


def int_exquo(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return q
