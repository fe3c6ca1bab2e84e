"""Twisted polynomial ring F[t; sigma] with sigma = x -> x^(2^k).

``coeffs[i]`` multiplies t^i from the left, so a polynomial is
a_0 + a_1 t + ... + a_n t^n and t * a = sigma(a) * t.  "R right-divides P"
always means the remainder of :func:`sp_divmod_right` is zero.

The coefficient field is either a :class:`~sqapn.gf.FieldCtx` or an
:class:`~sqapn.gf.ExtCtx`; both expose ``mul``, ``inv``, ``frobenius``,
``degree`` and ``elements``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import BothZero, CtxMismatch, DivisionByZeroPoly, OracleDisagreement, ZeroInput
from .gf import ExtCtx, FieldCtx

Field = Union[FieldCtx, ExtCtx]


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class SkewPoly:
    field: Field
    k: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def _new(self, coeffs) -> SkewPoly:
        return SkewPoly(self.field, self.k, tuple(coeffs))

    def _check(self, other: SkewPoly) -> None:
        if self.field != other.field or self.k % self.field.degree != other.k % other.field.degree:
            raise CtxMismatch("skew polynomials live in different rings")

    def __add__(self, other: SkewPoly) -> SkewPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return self._new(x ^ y for x, y in zip(a, b))

    __sub__ = __add__

    def __mul__(self, other: SkewPoly) -> SkewPoly:
        return sp_mul(self, other)

    def scale_left(self, c: int) -> SkewPoly:
        mul = self.field.mul
        return self._new(mul(c, a) for a in self.coeffs)

    def monic(self) -> SkewPoly:
        if self.is_zero():
            raise ZeroInput("zero polynomial has no monic form")
        return self.scale_left(self.field.inv(self.lead))

    def shifted(self, coeff: int, j: int) -> SkewPoly:
        """(coeff * t^j) * self."""
        f = self.field
        out = [0] * j + [f.mul(coeff, f.frobenius(a, self.k * j)) for a in self.coeffs]
        return self._new(out)

    def __repr__(self) -> str:
        if self.is_zero():
            return "SkewPoly(0)"
        fmt = self.field.fmt
        terms = [f"{fmt(a)}*t^{i}" for i, a in enumerate(self.coeffs) if a]
        return f"SkewPoly({' + '.join(reversed(terms))}; k={self.k})"


def skew(field: Field, k: int, coeffs: Sequence[int]) -> SkewPoly:
    return SkewPoly(field, k, tuple(coeffs))


def linear(field: Field, k: int, b: int) -> SkewPoly:
    """t - b (char 2, so t + b)."""
    return SkewPoly(field, k, (b, 1))


def lift(p: SkewPoly, ext: ExtCtx) -> SkewPoly:
    """Embed a polynomial over GF(q) into GF(q^2)[t; sigma] with the same k."""
    if p.field != ext.base:
        raise CtxMismatch("extension is not built over this polynomial's field")
    return SkewPoly(ext, p.k, tuple(ext.embed(a) for a in p.coeffs))


def sp_mul(p: SkewPoly, r: SkewPoly) -> SkewPoly:
    p._check(r)
    if p.is_zero() or r.is_zero():
        return p._new(())
    f = p.field
    out = [0] * (p.deg + r.deg + 1)
    for i, a in enumerate(p.coeffs):
        if not a:
            continue
        for j, b in enumerate(r.coeffs):
            if b:
                out[i + j] ^= f.mul(a, f.frobenius(b, p.k * i))
    return p._new(out)


def sp_divmod_right(p: SkewPoly, r: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """Q, S with P = Q*R + S and deg S < deg R."""
    p._check(r)
    if r.is_zero():
        raise DivisionByZeroPoly("right division by zero polynomial")
    f = p.field
    rem = list(p.coeffs)
    quot = [0] * max(p.deg - r.deg + 1, 0)
    for j in range(p.deg - r.deg, -1, -1):
        top = rem[j + r.deg]
        if not top:
            continue
        # (c t^j) R has leading coefficient c * sigma^j(lead R)
        c = f.mul(top, f.inv(f.frobenius(r.lead, p.k * j)))
        quot[j] = c
        for i, b in enumerate(r.coeffs):
            if b:
                rem[i + j] ^= f.mul(c, f.frobenius(b, p.k * j))
    return p._new(quot), p._new(rem[: max(r.deg, 0)])


def sp_divmod_left(p: SkewPoly, r: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """Q, S with P = R*Q + S and deg S < deg R."""
    p._check(r)
    if r.is_zero():
        raise DivisionByZeroPoly("left division by zero polynomial")
    f = p.field
    inv_lead = f.inv(r.lead)
    rem = list(p.coeffs)
    quot = [0] * max(p.deg - r.deg + 1, 0)
    back = -p.k * r.deg  # sigma^{-deg R}
    for j in range(p.deg - r.deg, -1, -1):
        top = rem[j + r.deg]
        if not top:
            continue
        # R (c t^j) has leading coefficient lead R * sigma^{deg R}(c)
        c = f.frobenius(f.mul(inv_lead, top), back % f.degree)
        quot[j] = c
        for i, a in enumerate(r.coeffs):
            if a:
                rem[i + j] ^= f.mul(a, f.frobenius(c, p.k * i))
    return p._new(quot), p._new(rem[: max(r.deg, 0)])


def sp_gcrd(p1: SkewPoly, p2: SkewPoly) -> SkewPoly:
    p1._check(p2)
    if p1.is_zero() and p2.is_zero():
        raise BothZero("gcrd(0, 0) is undefined")
    a, b = p1, p2
    while not b.is_zero():
        a, b = b, sp_divmod_right(a, b)[1]
    return a.monic()


def sp_lclm(p1: SkewPoly, p2: SkewPoly) -> SkewPoly:
    """Least common left multiple via the extended right Euclidean algorithm."""
    p1._check(p2)
    if p1.is_zero() or p2.is_zero():
        raise ZeroInput("lclm needs nonzero inputs")
    one = p1._new((1,))
    zero = p1._new(())
    # invariant: r_i = u_i * p1 + v_i * p2
    r0, r1 = p1, p2
    u0, u1 = one, zero
    while not r1.is_zero():
        q, rem = sp_divmod_right(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, u0 - q * u1
    lclm = sp_mul(u1, p1).monic()
    g = r0
    expected = p1.deg + p2.deg - g.deg
    if lclm.deg != expected:
        raise OracleDisagreement(f"lclm degree {lclm.deg} != {expected}")
    return lclm


def right_divides(r: SkewPoly, p: SkewPoly) -> bool:
    return sp_divmod_right(p, r)[1].is_zero()


def left_divides(r: SkewPoly, p: SkewPoly) -> bool:
    return sp_divmod_left(p, r)[1].is_zero()


def sp_linear_right_divisor(p: SkewPoly) -> int | None:
    """Least b (by bit value) with t - b a right divisor of P."""
    if p.deg < 1:
        raise ValueError("need deg(P) >= 1")
    for b in p.field.elements():
        if right_divides(linear(p.field, p.k, b), p):
            return b
    return None


def sp_linear_left_divisor(p: SkewPoly) -> int | None:
    """Least b (by bit value) with t - b a left divisor of P."""
    if p.deg < 1:
        raise ValueError("need deg(P) >= 1")
    for b in p.field.elements():
        if left_divides(linear(p.field, p.k, b), p):
            return b
    return None
