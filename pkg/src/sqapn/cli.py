"""Command-line front end.

Exit codes: 0 consistent, 1 usage error, 2 consistency violation,
3 resource or budget limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import backend_name
from .errors import (
    BadTwist,
    BudgetExceeded,
    DegreeMismatch,
    NoneFound,
    NotCoprime,
    NotIrreducible,
    OracleDisagreement,
    RefusedUnverified,
    TooLarge,
    ZeroA,
    ZeroImage,
)
from .family import (
    FamilyParams,
    bartoli_stanica,
    condition_has_root,
    expected_image,
    family_lut,
    find_block_witness,
    gold_automorphism_check,
    gold_lut,
    li_kaleyski_1,
    li_kaleyski_2,
    projective_bijective,
    roots_direct,
    verify_scalar_automorphism,
)
from .gf import field_create
from .search import CSV_COLUMNS, SweepSpec, find_first, sweep
from .skewpoly import (
    skew,
    sp_divmod_left,
    sp_divmod_right,
    sp_gcrd,
    sp_lclm,
    sp_linear_left_divisor,
    sp_linear_right_divisor,
)
from .vectfun import (
    compute_core,
    differential_uniformity,
    image_multiplicity,
    kernel_sizes,
    read_sbox,
    walsh_spectrum,
    write_sbox,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_RESOURCE = 0, 1, 2, 3
KERNEL_EXHAUSTIVE_MAX_N = 15
KERNEL_SAMPLE = 256


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def hexint(s: str) -> int:
    return int(s, 16)


def binint(s: str) -> int:
    return int(s, 2) if not s.lower().startswith("0x") else int(s, 16)


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _params(args) -> FamilyParams:
    ctx = field_create(args.m, args.poly)
    return FamilyParams(ctx, args.k, args.a, args.b, args.c)


def _family_config(args, cmd: str) -> dict:
    cfg = {"command": cmd, "m": args.m, "k": args.k, "a": f"{args.a:x}", "b": f"{args.b:x}", "c": f"{args.c:x}"}
    cfg["poly"] = None if args.poly is None else bin(args.poly)
    return cfg


# --------------------------------------------------------------------------
# verify


def verify_instance(p: FamilyParams) -> dict:
    """Run every single-instance check and collect the consistency assertions."""
    ctx, d = p.ctx, p.d
    checks: list[dict] = []

    def check(name, ok, detail=None):
        checks.append({"name": name, "ok": bool(ok), **({"detail": detail} if detail is not None else {})})

    try:
        has_root = condition_has_root(p)
        check("root search and skew divisor search agree", True)
    except OracleDisagreement as exc:
        has_root = bool(roots_direct(ctx, p.k, p.a, p.b, p.c))
        check("root search and skew divisor search agree", False, str(exc))
    roots = roots_direct(ctx, p.k, p.a, p.b, p.c)
    passing = not has_root
    report: dict = {"condition": {"has_root": has_root, "roots": [f"{r:x}" for r in roots]}}

    try:
        bij = projective_bijective(p)
        report["projective"] = {"bijective": bij, "zero_image": None}
        check("projective bijectivity iff no root", bij == passing)
    except ZeroImage as exc:
        report["projective"] = {"bijective": False, "zero_image": [f"{t:x}" for t in exc.point]}
        check("nonzero kernel of F only when the condition has roots", has_root)

    lut = family_lut(p)
    target = 1 << d
    ddt = differential_uniformity(lut, abort_above=target)
    img = image_multiplicity(lut)
    report["ddt"] = ddt.to_json()
    report["image"] = img.to_json()
    kind, r = expected_image(p)
    report["expected_if_passing"] = {"du": target, "image": kind, "r": r}

    core = compute_core(p)
    if p.n <= KERNEL_EXHAUSTIVE_MAX_N:
        sizes = kernel_sizes(p)
    else:
        rng = np.random.default_rng(0)
        sizes = kernel_sizes(p, rng.integers(1, 1 << p.n, size=KERNEL_SAMPLE))
    report["core"] = core
    report["kernel_sizes"] = {str(s): int(c) for s, c in sorted(Counter(sizes.tolist()).items())}

    gen = ctx.primitive_element()
    scalars = sorted({1, gen, ctx.inv(gen)})
    aut = {f"{s:x}": verify_scalar_automorphism(p, s) for s in scalars}
    report["scalar_automorphisms"] = aut
    check("F(s v) = s^(sigma+1) F(v)", all(aut.values()))

    if passing:
        check("differential uniformity is 2^d", ddt.max_uniformity == target and not ddt.early_aborted,
              ddt.max_uniformity)
        check("image multiplicity matches m/d parity", img.kind == kind and img.r == r, img.label)
        check("core is GF(2^d)", core == d, core)
        check("every derivative kernel has 2^d elements", bool(np.all(sizes == target)))
    report["checks"] = checks
    report["consistent"] = all(c["ok"] for c in checks)
    return report


def cmd_verify(args) -> int:
    p = _params(args)
    report = {"config": _family_config(args, "verify"), "d": p.d, **verify_instance(p)}
    _emit(report, args.json)
    return EXIT_OK if report["consistent"] else EXIT_VIOLATION


# --------------------------------------------------------------------------
# search


def cmd_search(args) -> int:
    ctx = field_create(args.m, args.poly)
    spec = SweepSpec(ctx, args.k, args.level, args.limit, args.budget, args.workers)
    if args.first:
        try:
            row = find_first(spec)
        except NoneFound as exc:
            _emit({"config": spec.config(), "found": False, "searched": exc.searched}, args.json)
            return EXIT_OK
        out = {"config": spec.config(), "found": True, "row": dict(zip(CSV_COLUMNS, row.csv_fields())),
               "violations": row.violations}
        _emit(out, args.json)
        return EXIT_VIOLATION if row.violations else EXIT_OK
    code = EXIT_OK
    try:
        result = sweep(spec)
    except BudgetExceeded as exc:
        result = exc.result
        code = EXIT_RESOURCE
    if args.csv:
        Path(args.csv).write_text(result.to_csv())
    _emit(result.to_json(), args.json)
    if code == EXIT_OK and result.summary["violations"]:
        code = EXIT_VIOLATION
    return code


# --------------------------------------------------------------------------
# ddt / walsh


def cmd_ddt(args) -> int:
    lut = read_sbox(args.input)
    rep = differential_uniformity(lut, args.abort_above, workers=args.workers)
    _emit(rep.to_json(), args.json)
    return EXIT_OK


def cmd_walsh(args) -> int:
    lut = read_sbox(args.input)
    rep = walsh_spectrum(lut, args.mask or None)
    _emit(rep.to_json(), args.json)
    return EXIT_OK


# --------------------------------------------------------------------------
# skew


def _poly_arg(s: str) -> list[int]:
    return [int(t, 16) for t in s.split(",") if t.strip()]


def cmd_skew(args) -> int:
    ctx = field_create(args.m, args.reduction)
    p = skew(ctx, args.k, _poly_arg(args.poly))

    def show(x):
        return [f"{c:x}" for c in x.coeffs]

    out: dict = {"config": {"command": "skew", "m": args.m, "k": args.k, "op": args.op, "poly": args.poly,
                            "poly2": args.poly2,
                            "reduction": None if args.reduction is None else bin(args.reduction)}}
    if args.op == "lindiv":
        right = sp_linear_right_divisor(p)
        left = sp_linear_left_divisor(p)
        out["right"] = None if right is None else f"{right:x}"
        out["left"] = None if left is None else f"{left:x}"
    else:
        if args.poly2 is None:
            raise UsageError(f"--op {args.op} needs --poly2")
        r = skew(ctx, args.k, _poly_arg(args.poly2))
        if args.op == "mul":
            out["product"] = show(p * r)
        elif args.op in ("divr", "divl"):
            q, s = (sp_divmod_right if args.op == "divr" else sp_divmod_left)(p, r)
            out["quotient"], out["remainder"] = show(q), show(s)
        elif args.op == "gcrd":
            out["gcrd"] = show(sp_gcrd(p, r))
        elif args.op == "lclm":
            out["lclm"] = show(sp_lclm(p, r))
    _emit(out, args.json)
    return EXIT_OK


# --------------------------------------------------------------------------
# compare


def compare_families(ctx, k: int, bs_a: int) -> dict:
    entries = {}
    for name, (lit, p, w) in (
        ("li_kaleyski_1", li_kaleyski_1(ctx, k)),
        ("li_kaleyski_2", li_kaleyski_2(ctx, k)),
        ("bartoli_stanica", bartoli_stanica(ctx, k, bs_a)),
    ):
        fam = family_lut(p)
        entries[name] = {"family_params": {"a": f"{p.a:x}", "b": f"{p.b:x}", "c": f"{p.c:x}"},
                         "witness": w.describe(), "equal": w.apply(fam) == lit}
    lit, p, _ = li_kaleyski_2(ctx, k, printed=True)
    w = find_block_witness(lit, family_lut(p))
    entries["li_kaleyski_2_printed"] = {
        "note": "variant with second component x y^s + y^(s+1)",
        "block_witness": None if w is None else w.describe(),
        "du": differential_uniformity(lit).max_uniformity,
    }
    lit, _, _ = bartoli_stanica(ctx, k, bs_a, literal_q=True)
    entries["bartoli_stanica_literal_q"] = {
        "note": "exponents q instead of sigma; x^q = x on GF(q), so the twist degenerates",
        "degenerate": True,
        "du": differential_uniformity(lit).max_uniformity,
    }
    return entries


def cmd_compare(args) -> int:
    ctx = field_create(args.m, args.poly)
    if not 1 <= args.k < args.m:
        raise BadTwist(f"need 1 <= k < m, got k={args.k}, m={args.m}")
    entries = compare_families(ctx, args.k, args.bs_a)
    ok = all(entries[n]["equal"] for n in ("li_kaleyski_1", "li_kaleyski_2", "bartoli_stanica"))
    report = {"config": {"command": "compare", "m": args.m, "k": args.k, "bs_a": f"{args.bs_a:x}",
                         "poly": None if args.poly is None else bin(args.poly)},
              "families": entries, "all_equal": ok}
    _emit(report, args.json)
    return EXIT_OK if ok else EXIT_VIOLATION


# --------------------------------------------------------------------------
# gold


def cmd_gold(args) -> int:
    lut = gold_lut(args.n, args.i)
    du = differential_uniformity(lut).max_uniformity
    report: dict = {"config": {"command": "gold", "n": args.n, "i": args.i, "check_aut": args.check_aut},
                    "du": du, "apn": du == 2}
    ok = du == 2
    if args.check_aut:
        failures = [(s, j) for s in range(1, 1 << args.n) for j in range(args.n)
                    if not gold_automorphism_check(args.n, args.i, s, j)]
        report["automorphisms"] = {"checked": ((1 << args.n) - 1) * args.n, "failures": len(failures)}
        ok &= not failures
    if args.out:
        write_sbox(lut, args.out)
    _emit(report, args.json)
    return EXIT_OK if ok else EXIT_VIOLATION


# --------------------------------------------------------------------------
# export


def cmd_export(args) -> int:
    p = _params(args)
    report = verify_instance(p)
    verified = report["consistent"] and not report["condition"]["has_root"]
    if not verified and not args.force:
        raise RefusedUnverified("instance is not a verified 2^d-uniform member; use --force to export anyway")
    out = Path(args.out)
    write_sbox(family_lut(p), out)
    sidecar = {"m": p.ctx.m, "k": p.k, "a": f"{p.a:x}", "b": f"{p.b:x}", "c": f"{p.c:x}",
               "reduction": bin(p.ctx.reduction), "du": report["ddt"]["max_uniformity"],
               "du_exact": not report["ddt"]["early_aborted"], "image_class": report["image"]["label"],
               "verified": verified, "tool_version": __version__}
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sqapn", description="Semiquadratic trivariate APN toolkit.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({backend_name()})")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def family_flags(sp):
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--a", type=hexint, required=True)
        sp.add_argument("--b", type=hexint, default=0)
        sp.add_argument("--c", type=hexint, default=0)
        sp.add_argument("--poly", type=binint, default=None, help="reduction polynomial, binary")

    sp = sub.add_parser("verify", help="check one family member end to end")
    family_flags(sp)
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search", help="sweep all (a, b, c) for fixed m, k")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--level", choices=["cond", "proj", "full"], default="cond")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--budget", type=float, help="time budget in seconds")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--poly", type=binint, default=None)
    sp.add_argument("--first", action="store_true", help="stop at the first passing triple")
    sp.add_argument("--csv")
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("ddt", help="differential uniformity of an sbox file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--abort-above", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_ddt)

    sp = sub.add_parser("walsh", help="Walsh spectra of an sbox file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--mask", type=hexint, action="append")
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_walsh)

    sp = sub.add_parser("skew", help="twisted polynomial arithmetic")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--poly", required=True, help="hex coefficients low to high, comma separated")
    sp.add_argument("--poly2")
    sp.add_argument("--op", choices=["mul", "divr", "divl", "gcrd", "lclm", "lindiv"], required=True)
    sp.add_argument("--reduction", type=binint, default=None)
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_skew)

    sp = sub.add_parser("compare", help="reproduce the earlier families as family members")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--bs-a", type=hexint, default=2)
    sp.add_argument("--poly", type=binint, default=None)
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("gold", help="Gold function baseline")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--check-aut", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--json")
    sp.set_defaults(func=cmd_gold)

    sp = sub.add_parser("export", help="write a verified sbox and JSON sidecar")
    family_flags(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TooLarge, BudgetExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, BadTwist, ZeroA, NotIrreducible, DegreeMismatch, NotCoprime, KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleDisagreement, RefusedUnverified) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
