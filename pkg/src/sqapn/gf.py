"""Arithmetic in GF(2^m) (polynomial basis) and its quadratic extension.

Field elements are plain Python ints: bit i is the coefficient of X^i.
Addition is XOR everywhere, including in the quadratic extension where an
element alpha + beta*u is packed as ``alpha | beta << m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DegreeMismatch, DivisionByZero, NotADivisor, NotIrreducible, OracleDisagreement

MIN_M = 2
MAX_M = 16
# Largest m for which the full q*q multiplication table is cached.
TABLE_MAX_M = 10
# Largest m for which scalar mul goes through a nested-list table.
SCALAR_TABLE_MAX_M = 8

# Lexicographically least irreducible polynomial of each degree.
DEFAULT_REDUCTION = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
    9: 0b1000000011,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000000001001,
    13: 0b10000000011011,
    14: 0b100000000100001,
    15: 0b1000000000000011,
    16: 0b10000000000101011,
}


def poly_mod(a: int, b: int) -> int:
    """Remainder of a modulo b in GF(2)[X]."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    return all(poly_mod(poly, d) for d in range(2, 1 << (deg // 2 + 1)))


def _mul_raw(x: int, y: int, m: int, reduction: int) -> int:
    top = 1 << m
    r = 0
    while y:
        if y & 1:
            r ^= x
        y >>= 1
        x <<= 1
        if x & top:
            x ^= reduction
    return r


def mul_arrays(x: np.ndarray, y: np.ndarray, m: int, reduction: int) -> np.ndarray:
    """Shift-and-reduce multiplication on integer arrays (broadcasting)."""
    x = np.asarray(x, dtype=np.int64).copy()
    y = np.asarray(y, dtype=np.int64)
    x, y = np.broadcast_arrays(x, y)
    x = x.copy()
    r = np.zeros(x.shape, dtype=np.int64)
    top = 1 << m
    for i in range(m):
        r ^= np.where((y >> i) & 1, x, 0)
        x <<= 1
        x ^= np.where(x & top, reduction, 0)
    return r


@dataclass(frozen=True)
class FieldCtx:
    """GF(2^m) with a fixed irreducible reduction polynomial."""

    m: int
    reduction: int

    def __post_init__(self):
        if self.reduction.bit_length() - 1 != self.m:
            raise DegreeMismatch(f"reduction {self.reduction:#b} does not have degree {self.m}")
        if not is_irreducible(self.reduction):
            raise NotIrreducible(f"{self.reduction:#b} factors over GF(2)")

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def degree(self) -> int:
        return self.m

    def elements(self) -> range:
        return range(self.size)

    def add(self, x: int, y: int) -> int:
        return x ^ y

    def mul(self, x: int, y: int) -> int:
        rows = self._mul_rows
        if rows is not None:
            return rows[x][y]
        return _mul_raw(x, y, self.m, self.reduction)

    def mul_schoolbook(self, x: int, y: int) -> int:
        return _mul_raw(x, y, self.m, self.reduction)

    @cached_property
    def _mul_rows(self) -> list[list[int]] | None:
        if self.m > SCALAR_TABLE_MAX_M:
            return None
        return self.mul_table.tolist()

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        if x == 0:
            return 1 if e == 0 else 0
        e %= self.size - 1
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of 0")
        return self.pow(x, self.size - 2)

    def frobenius(self, x: int, k: int) -> int:
        """x^(2^k) by repeated squaring (k taken mod m)."""
        rows = self._mul_rows
        for _ in range(k % self.m):
            x = rows[x][x] if rows is not None else self.mul(x, x)
        return x

    # cached numpy views used by the vectorised code paths

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.m > TABLE_MAX_M:
            raise ValueError(f"multiplication table not cached for m > {TABLE_MAX_M}")
        q = self.size
        e = np.arange(q, dtype=np.int64)
        return mul_arrays(e[:, None], e[None, :], self.m, self.reduction).astype(np.int32)

    @cached_property
    def inv_table(self) -> np.ndarray:
        t = np.zeros(self.size, dtype=np.int64)
        for x in range(1, self.size):
            t[x] = self.inv(x)
        return t

    def frob_table(self, k: int) -> np.ndarray:
        return _frob_table(self, k % self.m)

    def mul_vec(self, x, y) -> np.ndarray:
        if self.m <= TABLE_MAX_M:
            return self.mul_table[np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)].astype(np.int64)
        return mul_arrays(x, y, self.m, self.reduction)

    def primitive_element(self) -> int:
        order = self.size - 1
        primes = [p for p in range(2, order + 1) if order % p == 0 and all(p % d for d in range(2, math.isqrt(p) + 1))]
        for g in range(2, self.size):
            if all(self.pow(g, order // p) != 1 for p in primes):
                return g
        return 1  # only reachable for q = 2

    def fmt(self, x: int) -> str:
        return format(x, "x")


@lru_cache(maxsize=None)
def _frob_table(ctx: FieldCtx, k: int) -> np.ndarray:
    t = np.arange(ctx.size, dtype=np.int64)
    for _ in range(k):
        t = ctx.mul_vec(t, t) if ctx.m <= TABLE_MAX_M else mul_arrays(t, t, ctx.m, ctx.reduction)
    t.setflags(write=False)
    return t


@lru_cache(maxsize=None)
def field_create(m: int, reduction: int | None = None) -> FieldCtx:
    """Contexts are immutable, so one instance (and its cached tables) is shared per (m, reduction)."""
    if not MIN_M <= m <= MAX_M:
        raise ValueError(f"m must lie in [{MIN_M}, {MAX_M}], got {m}")
    if reduction is None:
        reduction = DEFAULT_REDUCTION[m]
    return FieldCtx(m, reduction)


def fe_arith(ctx: FieldCtx, op: str, x: int, y: int = 0) -> int:
    if op == "add":
        return ctx.add(x, y)
    if op == "mul":
        return ctx.mul(x, y)
    if op == "inv":
        return ctx.inv(x)
    if op == "pow":
        return ctx.pow(x, y)
    raise ValueError(f"unknown op {op!r}")


def frobenius(ctx: FieldCtx, x: int, k: int) -> int:
    return ctx.frobenius(x, k)


def subfield_elements(ctx: FieldCtx, e: int) -> frozenset[int]:
    if e < 1 or ctx.m % e:
        raise NotADivisor(f"{e} does not divide {ctx.m}")
    return frozenset(x for x in ctx.elements() if ctx.frobenius(x, e) == x)


def gcd_power(m: int, n: int, sign: str) -> int:
    """gcd(2^m -/+ 1, 2^n - 1) from the closed form, checked against math.gcd."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    d = math.gcd(m, n)
    if sign == "minus":
        closed = (1 << d) - 1
        direct = math.gcd((1 << m) - 1, (1 << n) - 1)
    elif sign == "plus":
        closed = 1 if (n // d) % 2 else (1 << d) + 1
        direct = math.gcd((1 << m) + 1, (1 << n) - 1)
    else:
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    if closed != direct:
        raise OracleDisagreement(f"gcd_power({m}, {n}, {sign}): closed form {closed} != {direct}")
    return closed


@dataclass(frozen=True)
class ExtCtx:
    """GF(q^2) = GF(q)[u] / (u^2 + u + nu), elements packed as ``alpha | beta << m``."""

    base: FieldCtx
    nu: int

    def __post_init__(self):
        b = self.base
        if any(b.mul(t, t) ^ t ^ self.nu == 0 for t in b.elements()):
            raise NotIrreducible(f"T^2 + T + {self.nu:x} has a root in GF(2^{b.m})")

    @property
    def size(self) -> int:
        return self.base.size ** 2

    @property
    def degree(self) -> int:
        return 2 * self.base.m

    def elements(self) -> range:
        return range(self.size)

    def pair(self, x: int) -> tuple[int, int]:
        m = self.base.m
        return x & ((1 << m) - 1), x >> m

    def from_pair(self, alpha: int, beta: int) -> int:
        return alpha | (beta << self.base.m)

    def embed(self, alpha: int) -> int:
        return alpha

    def in_base(self, x: int) -> bool:
        return x >> self.base.m == 0

    def add(self, x: int, y: int) -> int:
        return x ^ y

    def mul(self, x: int, y: int) -> int:
        b = self.base
        a0, a1 = self.pair(x)
        b0, b1 = self.pair(y)
        hi = b.mul(a1, b1)
        lo = b.mul(a0, b0) ^ b.mul(hi, self.nu)
        mid = b.mul(a0, b1) ^ b.mul(a1, b0) ^ hi
        return self.from_pair(lo, mid)

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            return 1 if e == 0 else 0
        e %= self.size - 1
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of 0")
        return self.pow(x, self.size - 2)

    def frobenius(self, x: int, k: int) -> int:
        for _ in range(k % self.degree):
            x = self.mul(x, x)
        return x

    def frobenius_q(self, x: int) -> int:
        return self.frobenius(x, self.base.m)

    def fmt(self, x: int) -> str:
        a, b = self.pair(x)
        return f"({a:x},{b:x})"


def ext_create(base: FieldCtx) -> ExtCtx:
    """Quadratic extension using the least nu making u^2 + u + nu irreducible."""
    squares_plus = {base.mul(t, t) ^ t for t in base.elements()}
    nu = next(v for v in base.elements() if v not in squares_plus)
    return ExtCtx(base, nu)
