"""Parameter sweeps over (a, b, c) for fixed (m, k)."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import BudgetExceeded, NoneFound, TooLarge, ZeroImage
from .family import ConditionScanner, FamilyParams, build_family_lut, expected_image, projective_bijective
from .gf import FieldCtx
from .vectfun import differential_uniformity, image_multiplicity

LEVELS = ("condition_only", "projective", "full_ddt")
LEVEL_ALIASES = {"cond": "condition_only", "proj": "projective", "full": "full_ddt"}
FULL_DDT_MAX_N = 24


@dataclass(frozen=True)
class SweepSpec:
    ctx: FieldCtx
    k: int
    level: str = "condition_only"
    limit: int | None = None
    budget_s: float | None = None
    workers: int = 1

    def __post_init__(self):
        level = LEVEL_ALIASES.get(self.level, self.level)
        if level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}")
        object.__setattr__(self, "level", level)
        if not 1 <= self.k < self.ctx.m:
            from .errors import BadTwist

            raise BadTwist(f"need 1 <= k < m, got k={self.k}, m={self.ctx.m}")
        if self.limit is not None and self.limit < 0:
            raise ValueError("limit must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def space(self) -> int:
        q = self.ctx.size
        return (q - 1) * q * q

    @property
    def count(self) -> int:
        return self.space if self.limit is None else min(self.limit, self.space)

    def config(self) -> dict:
        # worker count is deliberately absent: it never changes the output
        return {"m": self.ctx.m, "k": self.k, "reduction": bin(self.ctx.reduction), "level": self.level,
                "limit": self.limit, "budget_s": self.budget_s}


@dataclass
class SweepRow:
    a: int
    b: int
    c: int
    condition_pass: bool
    projective: bool | None = None
    zero_image: bool = False
    du: int | None = None
    du_exact: bool = True
    image_class: str | None = None
    violations: list[str] = field(default_factory=list)

    def csv_fields(self) -> list[str]:
        def flag(v):
            return "" if v is None else str(int(v))

        du = "" if self.du is None else (str(self.du) if self.du_exact else f">={self.du}")
        return [f"{self.a:x}", f"{self.b:x}", f"{self.c:x}", flag(self.condition_pass), flag(self.projective),
                du, self.image_class or ""]


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow]
    partial: bool = False

    @property
    def summary(self) -> dict:
        passing = [r for r in self.rows if r.condition_pass]
        target = 1 << _d(self.spec)
        return {
            "total": len(self.rows),
            "condition_pass": len(passing),
            "verified_du_equals_2^d": sum(1 for r in passing if r.du == target and r.du_exact),
            "violations": sum(1 for r in self.rows if r.violations),
            "partial": self.partial,
        }

    def to_json(self) -> dict:
        return {"config": self.spec.config(), "summary": self.summary,
                "violating_rows": [dict(zip(CSV_COLUMNS, r.csv_fields()), reasons=r.violations)
                                   for r in self.rows if r.violations]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()


CSV_COLUMNS = ["a", "b", "c", "condition_pass", "projective", "du", "image_class"]


def _d(spec: SweepSpec) -> int:
    from math import gcd

    return gcd(spec.k, spec.ctx.m)


def triple_at(q: int, index: int) -> tuple[int, int, int]:
    """Canonical order: ascending (a, b, c) with a from 1."""
    ab, c = divmod(index, q)
    a, b = divmod(ab, q)
    return a + 1, b, c


def evaluate_triple(spec: SweepSpec, scanner: ConditionScanner, a: int, b: int, c: int) -> SweepRow:
    row = SweepRow(a, b, c, condition_pass=not scanner.has_root(a, b, c))
    if spec.level == "condition_only":
        return row
    p = FamilyParams(spec.ctx, spec.k, a, b, c)
    try:
        row.projective = projective_bijective(p)
    except ZeroImage:
        row.projective = False
        row.zero_image = True
    if row.projective != row.condition_pass:
        row.violations.append("projective bijectivity disagrees with the root condition")
    if spec.level == "full_ddt":
        lut = build_family_lut(p)
        target = 1 << p.d
        rep = differential_uniformity(lut, abort_above=target)
        row.du = rep.max_uniformity
        row.du_exact = not rep.early_aborted
        img = image_multiplicity(lut)
        row.image_class = img.label
        if row.condition_pass:
            if row.du != target or not row.du_exact:
                row.violations.append(f"differential uniformity {row.du} != {target}")
            kind, r = expected_image(p)
            if img.kind != kind or img.r != r:
                row.violations.append(f"image class {img.label} != expected")
    return row


def _run_slice(spec: SweepSpec, lo: int, hi: int, deadline: float | None) -> tuple[list[SweepRow], bool]:
    scanner = ConditionScanner(spec.ctx, spec.k)
    q = spec.ctx.size
    rows = []
    for idx in range(lo, hi):
        if deadline is not None and time.monotonic() > deadline:
            return rows, True
        rows.append(evaluate_triple(spec, scanner, *triple_at(q, idx)))
    return rows, False


def _slices(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + step + (i < extra)
        out.append((lo, hi))
        lo = hi
    return out


def _check_size(spec: SweepSpec) -> None:
    if spec.level == "full_ddt" and 3 * spec.ctx.m > FULL_DDT_MAX_N and spec.limit is None:
        raise TooLarge(f"full_ddt sweep needs 3m <= {FULL_DDT_MAX_N} or a limit")


def sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every triple in canonical order.

    Work is split into contiguous index slices; results are concatenated in
    slice order, so the output does not depend on ``workers``.
    """
    _check_size(spec)
    deadline = None if spec.budget_s is None else time.monotonic() + spec.budget_s
    slices = _slices(spec.count, spec.workers)
    if spec.count == 0:
        parts = []
    elif len(slices) == 1:
        parts = [_run_slice(spec, *slices[0], deadline)]
    else:
        with ProcessPoolExecutor(len(slices)) as pool:
            futs = [pool.submit(_run_slice, spec, lo, hi, deadline) for lo, hi in slices]
            parts = [f.result() for f in futs]
    rows: list[SweepRow] = []
    partial = False
    for part_rows, cut in parts:
        rows.extend(part_rows)
        if cut:
            partial = True
            break  # later slices would leave a gap in canonical order
    result = SweepResult(spec, rows, partial)
    if partial:
        raise BudgetExceeded(result)
    return result


def find_first(spec: SweepSpec) -> SweepRow:
    """First condition-passing triple in canonical order, verified at ``spec.level``."""
    _check_size(spec)
    deadline = None if spec.budget_s is None else time.monotonic() + spec.budget_s
    scanner = ConditionScanner(spec.ctx, spec.k)
    q = spec.ctx.size
    for idx in range(spec.count):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded(SweepResult(spec, [], True))
        a, b, c = triple_at(q, idx)
        if not scanner.has_root(a, b, c):
            return evaluate_triple(spec, scanner, a, b, c)
    raise NoneFound(spec.count)
