"""The trivariate semiquadratic family F = (F1, F2, F3) on GF(q)^3.

    F1 = x^(s+1) + a y^s z + b x^s y + c x^s z
    F2 = a y^(s+1) + z^s x + b z^s y + c x^s y
    F3 = z^(s+1) + x^s y            (s = 2^k, char 2 so every sign is +)

together with its parameter condition

    a X^(s^2+s+1) + b X^(s+1) + c X + 1 = 0   has no root in GF(q),

the prior trivariate APN families it contains, and the Gold baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from .errors import (
    BadTwist,
    NotCoprime,
    OracleDisagreement,
    TooLarge,
    ZeroA,
    ZeroImage,
    ZeroScalar,
)
from .gf import MAX_M, TABLE_MAX_M, ExtCtx, FieldCtx, field_create, gcd_power
from .skewpoly import skew, sp_linear_right_divisor
from .vectfun import ImageReport, LinMap3, Lut, lut_transform

LUT_MAX_N = 30
AUT_EXHAUSTIVE_MAX_M = 4
AUT_SAMPLES = 10_000


class Vec3(NamedTuple):
    x: int
    y: int
    z: int

    def pack(self, m: int) -> int:
        return self.x | (self.y << m) | (self.z << (2 * m))

    @classmethod
    def unpack(cls, w: int, m: int) -> Vec3:
        mask = (1 << m) - 1
        return cls(w & mask, (w >> m) & mask, w >> (2 * m))


@dataclass(frozen=True)
class FamilyParams:
    ctx: FieldCtx
    k: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        m = self.ctx.m
        if not 1 <= self.k < m:
            raise BadTwist(f"need 1 <= k < m, got k={self.k}, m={m}")
        if self.a == 0:
            raise ZeroA("a must be nonzero")
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not 0 <= v < self.ctx.size:
                raise ValueError(f"{name}={v:#x} is not an element of GF(2^{m})")

    @property
    def d(self) -> int:
        return math.gcd(self.k, self.ctx.m)

    @property
    def n(self) -> int:
        return 3 * self.ctx.m

    def describe(self) -> dict:
        return {"m": self.ctx.m, "k": self.k, "a": f"{self.a:x}", "b": f"{self.b:x}", "c": f"{self.c:x}",
                "reduction": bin(self.ctx.reduction), "d": self.d}


def family_create(ctx: FieldCtx, k: int, a: int, b: int, c: int) -> FamilyParams:
    return FamilyParams(ctx, k, a, b, c)


# --------------------------------------------------------------------------
# evaluation


def family_eval(p: FamilyParams, v: Vec3) -> Vec3:
    """Scalar evaluation straight from the defining formulas."""
    f = p.ctx
    mul = f.mul
    x, y, z = v
    xs, ys, zs = (f.frobenius(t, p.k) for t in v)
    f1 = mul(x, xs) ^ mul(p.a, mul(ys, z)) ^ mul(p.b, mul(xs, y)) ^ mul(p.c, mul(xs, z))
    f2 = mul(p.a, mul(y, ys)) ^ mul(zs, x) ^ mul(p.b, mul(zs, y)) ^ mul(p.c, mul(xs, y))
    f3 = mul(z, zs) ^ mul(xs, y)
    return Vec3(f1, f2, f3)


@lru_cache(maxsize=None)
def _tables(ctx: FieldCtx, k: int) -> tuple[np.ndarray, np.ndarray]:
    if ctx.m > TABLE_MAX_M:
        raise TooLarge(f"vectorised evaluation needs m <= {TABLE_MAX_M}")
    mt = np.ascontiguousarray(ctx.mul_table, dtype=np.int64)
    fr = np.ascontiguousarray(ctx.frob_table(k), dtype=np.int64)
    return mt, fr


def family_eval_arrays(p: FamilyParams, x, y, z):
    mt, fr = _tables(p.ctx, p.k)
    return kernels.family_eval_np(mt, fr, p.a, p.b, p.c,
                                  np.asarray(x, np.int64), np.asarray(y, np.int64), np.asarray(z, np.int64))


def build_family_lut(p: FamilyParams) -> Lut:
    """Full table of F on packed words x + y 2^m + z 2^2m."""
    if p.n > LUT_MAX_N:
        raise TooLarge(f"3m = {p.n} exceeds {LUT_MAX_N}")
    mt, fr = _tables(p.ctx, p.k)
    return Lut(p.n, kernels.family_table(mt, fr, p.ctx.m, p.a, p.b, p.c))


family_lut = lru_cache(maxsize=64)(build_family_lut)


def scale_map(ctx: FieldCtx, lam: int) -> np.ndarray:
    """Packed index v -> packed lam * v (blockwise scalar multiplication)."""
    return _scale_map(ctx, lam)


@lru_cache(maxsize=256)
def _scale_map(ctx: FieldCtx, lam: int) -> np.ndarray:
    m = ctx.m
    row = ctx.mul_vec(lam, np.arange(ctx.size, dtype=np.int64))
    idx = np.arange(1 << (3 * m), dtype=np.int64)
    mask = ctx.size - 1
    out = row[idx & mask] | (row[(idx >> m) & mask] << m) | (row[idx >> (2 * m)] << (2 * m))
    out.setflags(write=False)
    return out


# --------------------------------------------------------------------------
# the parameter condition, two independent routes


Field = Union[FieldCtx, ExtCtx]


def condition_value(field: Field, k: int, a: int, b: int, c: int, x: int) -> int:
    """a x^(s^2+s+1) + b x^(s+1) + c x + 1."""
    mul = field.mul
    xs = field.frobenius(x, k)
    xss = field.frobenius(xs, k)
    x_s1 = mul(x, xs)
    return mul(a, mul(x_s1, xss)) ^ mul(b, x_s1) ^ mul(c, x) ^ 1


def roots_direct(field: Field, k: int, a: int, b: int, c: int) -> list[int]:
    return [x for x in field.elements() if condition_value(field, k, a, b, c, x) == 0]


def has_root_skew(field: Field, k: int, a: int, b: int, c: int) -> bool:
    """a t^3 + b t^2 + c t + 1 has a linear right divisor in field[t; sigma]."""
    return sp_linear_right_divisor(skew(field, k, (1, c, b, a))) is not None


def condition_has_root(p: FamilyParams, over: ExtCtx | None = None) -> bool:
    """Root existence by direct search and by linear right divisors; both must agree.

    With ``over`` the same a, b, c and k are used inside the quadratic
    extension ``over`` of ``p.ctx``.
    """
    field: Field = p.ctx
    a, b, c = p.a, p.b, p.c
    if over is not None:
        if over.base != p.ctx:
            raise ValueError("extension is not over the parameter field")
        field = over
        a, b, c = over.embed(a), over.embed(b), over.embed(c)
    direct = bool(roots_direct(field, p.k, a, b, c))
    via_skew = has_root_skew(field, p.k, a, b, c)
    if direct != via_skew:
        raise OracleDisagreement(
            f"root search says {direct}, skew divisor search says {via_skew} for {p.describe()}")
    return direct


class ConditionScanner:
    """Vectorised direct root test for many (a, b, c) at fixed (ctx, k)."""

    def __init__(self, ctx: FieldCtx, k: int):
        mt, fr = _tables(ctx, k)
        x = np.arange(ctx.size, dtype=np.int64)
        xs = fr[x]
        x_s1 = mt[x, xs]
        self.mt = mt
        self.x = x
        self.x_s1 = x_s1
        self.x_cube = mt[x_s1, fr[xs]]

    def has_root(self, a: int, b: int, c: int) -> bool:
        mt = self.mt
        vals = mt[a][self.x_cube] ^ mt[b][self.x_s1] ^ mt[c][self.x] ^ 1
        return bool(np.any(vals == 0))


# --------------------------------------------------------------------------
# projective plane


@lru_cache(maxsize=None)
def projective_points(ctx: FieldCtx) -> np.ndarray:
    """Canonical representatives (1,y,z), (0,1,z), (0,0,1) as rows of an (N, 3) array."""
    q = ctx.size
    e = np.arange(q, dtype=np.int64)
    yy, zz = np.meshgrid(e, e, indexing="ij")
    first = np.stack([np.ones(q * q, np.int64), yy.ravel(), zz.ravel()], axis=1)
    second = np.stack([np.zeros(q, np.int64), np.ones(q, np.int64), e], axis=1)
    third = np.array([[0, 0, 1]], dtype=np.int64)
    pts = np.concatenate([first, second, third])
    pts.setflags(write=False)
    return pts


def canonicalize(ctx: FieldCtx, f1, f2, f3) -> np.ndarray:
    """Scale each row so its first nonzero coordinate is 1; returns packed words."""
    inv = ctx.inv_table
    lead = np.where(f1 != 0, f1, np.where(f2 != 0, f2, f3))
    s = inv[lead]
    g = ctx.mul_vec
    m = ctx.m
    return g(s, f1) | (g(s, f2) << m) | (g(s, f3) << (2 * m))


def projective_bijective(p: FamilyParams) -> bool:
    """Whether F induces a permutation of P^2(GF(q)), by enumeration.

    Raises ZeroImage if some nonzero point maps to 0.
    """
    pts = projective_points(p.ctx)
    f1, f2, f3 = family_eval_arrays(p, pts[:, 0], pts[:, 1], pts[:, 2])
    zero = np.flatnonzero((f1 | f2 | f3) == 0)
    if zero.size:
        raise ZeroImage(Vec3(*map(int, pts[zero[0]])))
    images = canonicalize(p.ctx, f1, f2, f3)
    return np.unique(images).size == pts.shape[0]


# --------------------------------------------------------------------------
# scalar automorphisms  F(s v) = s^(sigma+1) F(v)


def verify_scalar_automorphism(p: FamilyParams, s: int, seed: int = 0) -> bool:
    ctx = p.ctx
    if s == 0:
        raise ZeroScalar("scalar must be nonzero")
    s_out = ctx.mul(s, ctx.frobenius(s, p.k))
    if ctx.m <= AUT_EXHAUSTIVE_MAX_M:
        t = family_lut(p).table
        return bool(np.array_equal(t[scale_map(ctx, s)], scale_map(ctx, s_out)[t]))
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, ctx.size, size=(3, AUT_SAMPLES))
    g = ctx.mul_vec
    lhs = family_eval_arrays(p, g(s, x), g(s, y), g(s, z))
    rhs = family_eval_arrays(p, x, y, z)
    return all(np.array_equal(l, g(s_out, r)) for l, r in zip(lhs, rhs))


def expected_image(p: FamilyParams) -> tuple[str, int]:
    """(kind, r) predicted for a condition-passing member."""
    r = gcd_power(p.k, p.ctx.m, "plus")
    if (p.ctx.m // p.d) % 2:
        if r != 1:
            raise OracleDisagreement(f"m/d odd but gcd(2^k+1, 2^m-1) = {r}")
        return "bijective", 1
    if r != (1 << p.d) + 1:
        raise OracleDisagreement(f"m/d even but gcd(2^k+1, 2^m-1) = {r}")
    return "r_to_1", r


def image_matches(p: FamilyParams, report: ImageReport) -> bool:
    kind, r = expected_image(p)
    return report.kind == kind and report.r == r


# --------------------------------------------------------------------------
# earlier trivariate families and their block-permutation witnesses


@dataclass(frozen=True)
class Witness:
    """literal = out_perm . family . in_perm (as block permutations)."""

    out_perm: tuple[int, int, int]
    in_perm: tuple[int, int, int]

    def apply(self, lut: Lut) -> Lut:
        return lut_transform(LinMap3(self.out_perm), lut, LinMap3(self.in_perm))

    def describe(self) -> dict:
        return {"out_perm": list(self.out_perm), "in_perm": list(self.in_perm)}


SWAP_23 = Witness((0, 2, 1), (0, 2, 1))
ROTATE_SWAP_XY = Witness((1, 2, 0), (1, 0, 2))


def _grid(ctx: FieldCtx):
    m = ctx.m
    idx = np.arange(1 << (3 * m), dtype=np.int64)
    mask = ctx.size - 1
    return idx & mask, (idx >> m) & mask, idx >> (2 * m)


def _pack(ctx: FieldCtx, f1, f2, f3) -> Lut:
    m = ctx.m
    return Lut(3 * m, f1 | (f2 << m) | (f3 << (2 * m)))


def _literal_lut(ctx: FieldCtx, k: int, which: str, a: int = 1) -> Lut:
    if 3 * ctx.m > LUT_MAX_N:
        raise TooLarge(f"3m = {3 * ctx.m} exceeds {LUT_MAX_N}")
    mt, fr = _tables(ctx, k)
    x, y, z = _grid(ctx)
    xs, ys, zs = fr[x], fr[y], fr[z]
    x1, y1, z1 = mt[x, xs], mt[y, ys], mt[z, zs]
    if which == "li1":
        return _pack(ctx, x1 ^ mt[xs, z] ^ mt[y, zs], mt[xs, z] ^ y1, mt[x, ys] ^ mt[ys, z] ^ z1)
    if which == "li2":
        return _pack(ctx, x1 ^ mt[x, ys] ^ mt[y, zs], mt[x, ys] ^ z1, mt[xs, z] ^ mt[ys, z] ^ y1)
    if which == "li2_printed":
        return _pack(ctx, x1 ^ mt[x, ys] ^ mt[y, zs], mt[x, ys] ^ y1, mt[xs, z] ^ mt[ys, z] ^ y1)
    if which == "bs":
        return _pack(ctx, x1 ^ mt[a, mt[x, ys]] ^ mt[y, zs], mt[x, ys] ^ z1, mt[xs, z] ^ y1 ^ mt[a, mt[ys, z]])
    if which == "bs_literal_q":
        # x^q = x on GF(q): every twist collapses to the identity
        g = mt
        return _pack(ctx, g[x, x] ^ g[a, g[x, y]] ^ g[y, z], g[x, y] ^ g[z, z], g[x, z] ^ g[y, y] ^ g[a, g[y, z]])
    raise ValueError(which)


def li_kaleyski_1(ctx: FieldCtx, k: int) -> tuple[Lut, FamilyParams, Witness]:
    """(x^(s+1) + x^s z + y z^s, x^s z + y^(s+1), x y^s + y^s z + z^(s+1))."""
    p = FamilyParams(ctx, k, 1, 1, 0)
    return _literal_lut(ctx, k, "li1"), p, SWAP_23


def li_kaleyski_2(ctx: FieldCtx, k: int, printed: bool = False) -> tuple[Lut, FamilyParams, Witness]:
    """(x^(s+1) + x y^s + y z^s, x y^s + z^(s+1), x^s z + y^s z + y^(s+1)).

    ``printed=True`` gives the variant with y^(s+1) in the second component,
    which is not a block permutation of any family member.
    """
    p = FamilyParams(ctx, k, 1, 0, 1)
    return _literal_lut(ctx, k, "li2_printed" if printed else "li2"), p, ROTATE_SWAP_XY


def bartoli_stanica(ctx: FieldCtx, k: int, a: int, literal_q: bool = False) -> tuple[Lut, FamilyParams, Witness]:
    """(x^(s+1) + a x y^s + y z^s, x y^s + z^(s+1), x^s z + y^(s+1) + a y^s z).

    The parameter lands in the family's c slot with a = 1, b = 0.
    ``literal_q=True`` uses exponent q in place of s, which degenerates.
    """
    p = FamilyParams(ctx, k, 1, 0, a)
    return _literal_lut(ctx, k, "bs_literal_q" if literal_q else "bs", a), p, ROTATE_SWAP_XY


def find_block_witness(literal: Lut, fam: Lut) -> Witness | None:
    """Exhaustive search over the 36 block-permutation pairs."""
    from itertools import permutations

    for out in permutations(range(3)):
        for inp in permutations(range(3)):
            w = Witness(out, inp)
            if w.apply(fam) == literal:
                return w
    return None


# --------------------------------------------------------------------------
# Gold baseline  G(x) = x^(2^i + 1) on GF(2^n)


def _gold_ctx(n: int, i: int) -> FieldCtx:
    if n > MAX_M:
        raise TooLarge(f"Gold functions supported for n <= {MAX_M}")
    if math.gcd(i, n) != 1:
        raise NotCoprime(f"gcd({i}, {n}) != 1")
    return field_create(n)


def _gold_values(ctx: FieldCtx, i: int, x: np.ndarray) -> np.ndarray:
    return ctx.mul_vec(x, ctx.frob_table(i)[x])


def gold_lut(n: int, i: int) -> Lut:
    ctx = _gold_ctx(n, i)
    x = np.arange(ctx.size, dtype=np.int64)
    return Lut(n, _gold_values(ctx, i, x))


def gold_automorphism_check(n: int, i: int, s: int, j: int) -> bool:
    """s^(2^i+1) G(x)^(2^j) == G(s x^(2^j)) for every x."""
    ctx = _gold_ctx(n, i)
    if s == 0:
        raise ZeroScalar("scalar must be nonzero")
    if not 0 <= j < n:
        raise ValueError(f"need 0 <= j < n, got {j}")
    x = np.arange(ctx.size, dtype=np.int64)
    frj = ctx.frob_table(j)
    s_out = ctx.mul(s, ctx.frobenius(s, i))
    lhs = ctx.mul_vec(s_out, frj[_gold_values(ctx, i, x)])
    rhs = _gold_values(ctx, i, ctx.mul_vec(s, frj[x]))
    return bool(np.array_equal(lhs, rhs))
