"""Exact arithmetic in the real cyclotomic field Q(2cos(pi/M)).

Elements are tuples of Fractions: coefficients of a polynomial in
y = 2cos(pi/M), reduced modulo the minimal polynomial of y.  Signs of
nonzero elements come from interval evaluation that is refined until
the interval excludes zero.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import gcd

from mpmath import iv


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pdivmod_int(a, b):
    """Division by a monic integer polynomial."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1]
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    return _trim(q), _trim(a[:len(b) - 1] or [0])


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = _pdivmod_int(p, list(cyclotomic(d)))
            assert r == [0]
    return tuple(p)


def dickson(k: int) -> list:
    """D_k with x^k + x^-k = D_k(x + 1/x); D_0 = 2."""
    a, b = [2], [0, 1]
    if k == 0:
        return a
    for _ in range(k - 1):
        a, b = b, [u - v for u, v in zip(_pmul([0, 1], b) + [0], a + [0] * 3)]
        b = _trim(b)
    return b


@lru_cache(maxsize=None)
def minimal_polynomial(M: int) -> tuple:
    """Monic integer minimal polynomial of 2cos(pi/M)."""
    if M == 1:
        return (2, 1)          # y = -2
    if M == 2:
        return (0, 1)          # y = 0
    phi = list(cyclotomic(2 * M))
    k = (len(phi) - 1) // 2
    out = [phi[k]]
    for j in range(1, k + 1):
        dj = dickson(j)
        out = [x + phi[k + j] * (dj[i] if i < len(dj) else 0)
               for i, x in enumerate(out + [0] * (len(dj) - len(out)))]
    return tuple(_trim(out))


class CosineField:
    """The field Q(y), y = 2cos(pi/M)."""

    def __init__(self, M: int):
        if M < 1:
            raise ValueError("M must be positive")
        self.M = M
        self.poly = minimal_polynomial(M)
        self.degree = len(self.poly) - 1
        self.zero = self.embed(0)
        self.one = self.embed(1)
        self._sign_cache: dict = {}

    def embed(self, r) -> tuple:
        return (Fraction(r),) + (Fraction(0),) * (self.degree - 1)

    def reduce(self, p) -> tuple:
        p = [Fraction(c) for c in p]
        d, mp = self.degree, self.poly
        for k in range(len(p) - 1, d - 1, -1):
            c = p[k]
            if c:
                for i in range(d + 1):
                    p[k - d + i] -= c * mp[i]
        p = p[:d] + [Fraction(0)] * (d - len(p))
        return tuple(p)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        return self.reduce(_pmul(a, b))

    def is_zero(self, a) -> bool:
        return not any(a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[y]: find s with s*a = 1 mod poly
        r0, r1 = [Fraction(c) for c in self.poly], _trim(list(a))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1) and len(r1) > 1:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        return self.reduce([x / c for x in s1])

    def cos_pi_over(self, m: int):
        """cos(pi/m) for m dividing M; m = 0 stands for infinity (value 1)."""
        if m == 0:
            return self.one
        if self.M % m:
            raise ValueError(f"{m} does not divide {self.M}")
        d = dickson(self.M // m)
        return self.reduce([Fraction(c, 2) for c in d])

    def interval(self, a, prec: int):
        old = iv.prec
        iv.prec = prec
        try:
            y = 2 * iv.cos(iv.pi / self.M)
            acc = iv.mpf(0)
            for c in reversed(a):
                acc = acc * y + iv.mpf(c.numerator) / c.denominator
            return acc
        finally:
            iv.prec = old

    def sign(self, a) -> int:
        if self.is_zero(a):
            return 0
        if a in self._sign_cache:
            return self._sign_cache[a]
        prec = 53
        while True:
            x = self.interval(a, prec)
            if x.a > 0:
                s = 1
                break
            if x.b < 0:
                s = -1
                break
            prec *= 2
        self._sign_cache[a] = s
        return s

    def to_float(self, a) -> float:
        """Approximate value, for display only."""
        y = 2 * math.cos(math.pi / self.M)
        return float(sum(c * y ** i for i, c in enumerate(a)))


def _qdivmod(a, b):
    a = [Fraction(c) for c in a]
    b = _trim([Fraction(c) for c in b])
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / b[-1]
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
    return _trim(q), _trim(a[:len(b) - 1] or [Fraction(0)])


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
