"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the library's arithmetic so they can
check it: polynomials over GF(2) are multiplied and reduced from scratch.
"""

import pytest

from sqapn.gf import field_create


def clmul(a: int, b: int) -> int:
    r = 0
    i = 0
    while b >> i:
        if (b >> i) & 1:
            r ^= a << i
        i += 1
    return r


def clmod(a: int, p: int) -> int:
    dp = p.bit_length() - 1
    for i in range(a.bit_length() - 1, dp - 1, -1):
        if (a >> i) & 1:
            a ^= p << (i - dp)
    return a


def oracle_mul(x: int, y: int, reduction: int) -> int:
    return clmod(clmul(x, y), reduction)


def oracle_pow(x: int, e: int, reduction: int) -> int:
    r = 1
    for _ in range(e):
        r = oracle_mul(r, x, reduction)
    return r


def naive_ddt_max(table) -> int:
    """Quadruple loop: for each (u, v) count x directly."""
    size = len(table)
    best = 0
    for u in range(1, size):
        for v in range(size):
            c = sum(1 for x in range(size) if table[x ^ u] ^ table[x] == v)
            best = max(best, c)
    return best


def naive_walsh(table, v: int) -> list[int]:
    size = len(table)
    return [sum((-1) ** (bin(v & table[x]).count("1") + bin(u & x).count("1")) for x in range(size))
            for u in range(size)]


@pytest.fixture(scope="session")
def f4():
    return field_create(2)


@pytest.fixture(scope="session")
def f8():
    return field_create(3)


@pytest.fixture(scope="session")
def f16():
    return field_create(4)
