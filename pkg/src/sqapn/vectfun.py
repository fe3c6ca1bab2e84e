"""Lookup-table analysis: DDT, image multiplicity, Walsh spectra, derivative
kernels, cores and linear-equivalence transforms.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import OracleDisagreement, Singular, TooLarge, WidthMismatch, ZeroDirection

if TYPE_CHECKING:
    from .family import FamilyParams, Vec3


@dataclass(frozen=True, eq=False)
class Lut:
    """An n-bit to n-bit function stored as its full table."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        t = np.ascontiguousarray(self.table, dtype=np.int64)
        if t.ndim != 1 or t.shape[0] != 1 << self.n:
            raise WidthMismatch(f"table length {t.shape[0]} != 2^{self.n}")
        if t.size and (t.min() < 0 or t.max() >= 1 << self.n):
            raise ValueError("table entries must lie in [0, 2^n)")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def from_list(cls, values: Sequence[int]) -> Lut:
        n = len(values).bit_length() - 1
        return cls(n, np.asarray(values, dtype=np.int64))

    def __len__(self) -> int:
        return self.table.shape[0]

    def __getitem__(self, x):
        return self.table[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Lut) and self.n == other.n and np.array_equal(self.table, other.table)

    def is_permutation(self) -> bool:
        return np.array_equal(np.sort(self.table), np.arange(len(self)))


def identity_lut(n: int) -> Lut:
    return Lut(n, np.arange(1 << n, dtype=np.int64))


# --------------------------------------------------------------------------
# sbox text format: 2^n lines, lowercase hex, index ascending


def write_sbox(lut: Lut, path) -> None:
    Path(path).write_text("".join(f"{v:x}\n" for v in lut.table.tolist()))


def read_sbox(path) -> Lut:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    n = len(lines).bit_length() - 1
    if 1 << n != len(lines):
        raise WidthMismatch(f"{path}: {len(lines)} lines is not a power of two")
    return Lut(n, np.array([int(s, 16) for s in lines], dtype=np.int64))


# --------------------------------------------------------------------------
# differential uniformity


@dataclass
class DdtReport:
    n: int
    max_uniformity: int
    spectrum: dict[int, int]
    early_aborted: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_uniformity": self.max_uniformity,
            "spectrum": {str(k): v for k, v in sorted(self.spectrum.items())},
            "early_aborted": self.early_aborted,
        }


def _chunks(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    step, extra = divmod(hi - lo, parts)
    out, start = [], lo
    for i in range(parts):
        end = start + step + (i < extra)
        out.append((start, end))
        start = end
    return out


def differential_uniformity(lut: Lut, abort_above: int | None = None, workers: int = 1) -> DdtReport:
    """Max DDT entry over nonzero input differences.

    Rows are streamed; each worker owns one 2^n counter buffer. With
    ``abort_above`` set, a worker stops at the first row whose maximum
    exceeds it and the report is flagged ``early_aborted``.
    """
    table = lut.table
    size = len(lut)
    limit = -1 if abort_above is None else int(abort_above)
    ranges = _chunks(1, size, workers)
    if len(ranges) == 1:
        parts = [kernels.ddt_rows(table, ranges[0][0], ranges[0][1], limit)]
    else:
        with ThreadPoolExecutor(len(ranges)) as pool:
            parts = list(pool.map(lambda r: kernels.ddt_rows(table, r[0], r[1], limit), ranges))
    best = 0
    hist = np.zeros(size + 1, dtype=np.int64)
    aborted = False
    for b, h, status, row in parts:
        if status == kernels.DDT_ODD:
            raise OracleDisagreement(f"odd DDT entry in row {row}")
        if status == kernels.DDT_ROWSUM:
            raise OracleDisagreement(f"DDT row {row} does not sum to 2^n")
        best = max(best, int(b))
        hist += h
        aborted |= status == kernels.DDT_ABORTED
    spectrum = {int(v): int(c) for v, c in enumerate(hist) if c}
    return DdtReport(lut.n, best, spectrum, aborted)


def ddt_naive(lut: Lut) -> np.ndarray:
    """Full 2^n x 2^n table by direct counting (small n only)."""
    size = len(lut)
    t = lut.table.tolist()
    ddt = np.zeros((size, size), dtype=np.int64)
    for u in range(size):
        for x in range(size):
            ddt[u, t[x ^ u] ^ t[x]] += 1
    return ddt


# --------------------------------------------------------------------------
# image multiplicity


@dataclass
class ImageReport:
    kind: str  # "bijective" | "r_to_1" | "irregular"
    r: int | None
    histogram: dict[int, int]

    @property
    def label(self) -> str:
        if self.kind == "r_to_1":
            return f"{self.r}-to-1"
        return self.kind

    def to_json(self) -> dict:
        return {"kind": self.kind, "r": self.r, "label": self.label,
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())}}


def image_multiplicity(lut: Lut) -> ImageReport:
    """Classify preimage counts of the images of nonzero inputs.

    ``histogram`` maps a preimage count to the number of values having it.
    """
    t = lut.table
    counts = np.bincount(t, minlength=len(lut))
    hit = counts[counts > 0]
    histogram = {int(k): int(v) for k, v in zip(*np.unique(hit, return_counts=True))}
    if t[0] != 0 or counts[0] != 1:
        return ImageReport("irregular", None, histogram)
    nonzero = counts[1:]
    rs = np.unique(nonzero[nonzero > 0])
    if len(rs) != 1:
        return ImageReport("irregular", None, histogram)
    r = int(rs[0])
    if r == 1 and np.all(nonzero == 1):
        return ImageReport("bijective", 1, histogram)
    return ImageReport("r_to_1", r, histogram)


# --------------------------------------------------------------------------
# Walsh spectrum


@dataclass
class WalshReport:
    n: int
    masks: dict[int, dict[int, int]] = field(default_factory=dict)

    def total(self) -> Counter:
        c: Counter = Counter()
        for values in self.masks.values():
            c.update(values)
        return c

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "masks": [
                {"v": format(v, "x"), "values": {str(k): c for k, c in sorted(vals.items())}}
                for v, vals in sorted(self.masks.items())
            ],
        }


WALSH_ALL_MAX_N = 20


def walsh_rows(lut: Lut, masks: Iterable[int]) -> np.ndarray:
    """W(u, v) for each mask v (rows) and every u (columns)."""
    masks = np.asarray(list(masks), dtype=np.int64)
    return kernels.walsh_rows(lut.table, masks)


def walsh_spectrum(lut: Lut, masks: Iterable[int] | None = None, batch: int = 256) -> WalshReport:
    if masks is None:
        if lut.n > WALSH_ALL_MAX_N:
            raise TooLarge(f"all-masks Walsh spectrum limited to n <= {WALSH_ALL_MAX_N}")
        masks = range(1, len(lut))
    masks = sorted({int(v) for v in masks})
    if any(v <= 0 or v >= len(lut) for v in masks):
        raise ValueError("masks must be nonzero n-bit values")
    report = WalshReport(lut.n)
    target = 1 << (2 * lut.n)
    for start in range(0, len(masks), batch):
        chunk = masks[start:start + batch]
        rows = walsh_rows(lut, chunk)
        for v, row in zip(chunk, rows):
            if int(np.dot(row, row)) != target:
                raise OracleDisagreement(f"Parseval fails for mask {v:x}")
            vals, cnt = np.unique(row, return_counts=True)
            report.masks[v] = {int(a): int(b) for a, b in zip(vals, cnt)}
    return report


# --------------------------------------------------------------------------
# linear equivalence transforms


def gf2_rank(rows: Sequence[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


@dataclass(frozen=True, eq=False)
class LinMap3:
    """Block permutation of the three m-bit fields, then an optional bit matrix.

    ``perm[i]`` names the source block of output block i. ``matrix`` is an
    n x n 0/1 array acting on column bit vectors (bit j of the word is entry j).
    """

    perm: tuple[int, int, int] = (0, 1, 2)
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError(f"{self.perm} is not a permutation of 0, 1, 2")
        if self.matrix is not None:
            mat = np.asarray(self.matrix, dtype=np.int64) & 1
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise WidthMismatch("matrix must be square")
            if gf2_rank(_row_masks(mat)) != mat.shape[0]:
                raise Singular("bit matrix is not invertible")
            object.__setattr__(self, "matrix", mat)

    def apply(self, words: np.ndarray, n: int) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        if self.perm != (0, 1, 2):
            if n % 3:
                raise WidthMismatch(f"block permutation needs n divisible by 3, got {n}")
            m = n // 3
            mask = (1 << m) - 1
            blocks = [(words >> (m * i)) & mask for i in range(3)]
            words = blocks[self.perm[0]] | (blocks[self.perm[1]] << m) | (blocks[self.perm[2]] << (2 * m))
        if self.matrix is not None:
            if self.matrix.shape[0] != n:
                raise WidthMismatch(f"matrix is {self.matrix.shape[0]}x{self.matrix.shape[0]}, lut has n={n}")
            out = np.zeros_like(words)
            for i, row in enumerate(_row_masks(self.matrix)):
                out |= (np.bitwise_count(words & row).astype(np.int64) & 1) << i
            words = out
        return words


def _row_masks(mat: np.ndarray) -> list[int]:
    weights = 1 << np.arange(mat.shape[1], dtype=object)
    return [int(sum(int(b) * w for b, w in zip(row, weights))) for row in mat]


def random_invertible_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        mat = rng.integers(0, 2, size=(n, n), dtype=np.int64)
        if gf2_rank(_row_masks(mat)) == n:
            return mat


def lut_transform(l1: LinMap3, lut: Lut, l2: LinMap3) -> Lut:
    """result[x] = L1(lut[L2(x)])."""
    xs = np.arange(len(lut), dtype=np.int64)
    return Lut(lut.n, l1.apply(lut.table[l2.apply(xs, lut.n)], lut.n))


# --------------------------------------------------------------------------
# derivative kernels and core of a family member


def derivative_kernel(p: FamilyParams, y: Vec3) -> frozenset[Vec3]:
    """{x : F(x+y) + F(x) + F(y) = 0}, by enumeration."""
    from .family import Vec3, family_lut

    yp = y.pack(p.ctx.m)
    if yp == 0:
        raise ZeroDirection("direction must be nonzero")
    t = family_lut(p).table
    xs = np.arange(t.shape[0], dtype=np.int64)
    hits = np.flatnonzero((t[xs ^ yp] ^ t ^ t[yp]) == 0)
    return frozenset(Vec3.unpack(int(h), p.ctx.m) for h in hits)


def kernel_sizes(p: FamilyParams, ys: Iterable[int] | None = None) -> np.ndarray:
    """|ker L_y| for packed directions ``ys`` (all nonzero ones by default)."""
    from .family import family_lut

    t = family_lut(p).table
    ys = np.arange(1, t.shape[0], dtype=np.int64) if ys is None else np.asarray(list(ys), dtype=np.int64)
    return kernels.kernel_sizes(t, ys)


CORE_EXHAUSTIVE_MAX_M = 4
CORE_SAMPLE = 64


def compute_core(p: FamilyParams, seed: int = 0) -> int:
    """Largest e | m such that every derivative map is GF(2^e)-linear.

    Directions y are exhaustive for m <= 4, otherwise a seeded sample of
    ``CORE_SAMPLE`` nonzero directions; inputs x are always exhaustive.
    One generator of each candidate subfield is tested.
    """
    from .family import family_lut, scale_map
    from .gf import subfield_elements

    ctx = p.ctx
    t = family_lut(p).table
    size = t.shape[0]
    if ctx.m <= CORE_EXHAUSTIVE_MAX_M:
        ys = np.arange(1, size, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        ys = rng.choice(np.arange(1, size, dtype=np.int64), size=min(CORE_SAMPLE, size - 1), replace=False)
    divisors = [e for e in range(1, ctx.m + 1) if ctx.m % e == 0]
    for e in reversed(divisors):
        # L_y is additive, so commuting with one generator of GF(2^e) over GF(2)
        # gives commutation with every element of GF(2^e)
        proper = set().union(*(subfield_elements(ctx, f) for f in divisors if f < e and e % f == 0))
        lam = min(subfield_elements(ctx, e) - proper, default=None)
        if lam is None or kernels.scalar_commutes(t, scale_map(ctx, lam), ys):
            return e
    raise AssertionError("GF(2)-linearity always holds")  # pragma: no cover


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
