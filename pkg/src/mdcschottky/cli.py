"""Command-line entry point: one subcommand per verification.

Exit codes: 0 when every check passes, 1 when a verification fails (the failing
check is named on stderr), 2 on usage errors.  Results go to stdout, or to the
file given with --output.

The float tolerance defaults to 1e-9.  Override it with --tolerance or the
MDC_TOLERANCE environment variable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILY_NAMES = ("Cyclic", "Dihedral", "A4", "S4", "A5", "Trivial")


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, formats=("json", "text")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", "-o", help="write results here instead of stdout")
    p.add_argument("--tolerance", type=float, help="float equality tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=0, help="reserved; has no mathematical effect")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdcschottky", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("catalog", help="generators, lattice and signature of every rank-one kind")
    _common(p)

    p = sub.add_parser("verify-rank1", help="quotient signatures of the rank-one catalog")
    _common(p, ("json", "csv", "text"))

    for name, text in (
        ("assemble", "assemble the group of an extension recipe"),
        ("certify", "print only the combination certificate"),
    ):
        p = sub.add_parser(name, help=text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--recipe", help="recipe JSON file")
        if name == "certify":
            src.add_argument("--rank", type=int, help="MDC-Schottky group of this rank")
            p.add_argument("--radius", help="disk radius for --rank, a rational such as 1/4")
        p.add_argument("--word-bound", "-L", type=int, default=8)
        _common(p)

    p = sub.add_parser("enumerate-signatures", help="signature tables of the finite extensions")
    p.add_argument("--family", action="append", choices=FAMILY_NAMES, help="repeatable; default all")
    p.add_argument("--r-max", type=int, default=10)
    p.add_argument("--n-max", type=int, default=12, help="largest n for Cyclic and Dihedral")
    _common(p, ("json", "csv", "text"))

    p = sub.add_parser("g2-signatures", help="genus-two signatures with a nontrivial loop stabilizer")
    _common(p, ("json", "csv", "text"))

    p = sub.add_parser("verify-bound", help="maximal symmetry order against 12(g-1)")
    p.add_argument("--g-max", type=int, default=30)
    _common(p, ("json", "csv", "text"))

    p = sub.add_parser("verify-ejemplo1", help="the maximal genus-two example")
    _common(p)

    p = sub.add_parser("render-limit-set", help="sample and rasterize a limit set")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--recipe", help="recipe JSON file")
    src.add_argument("--group", choices=("ejemplo1",), help="a built-in group")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--viewport", default="-0.6,-0.6,0.6,0.6", help="x0,y0,x1,y1")
    p.add_argument("--size", default="512x512", help="WxH")
    p.add_argument("--out", required=True, help="PPM file to write")
    _common(p)
    return parser


# ---------------------------------------------------------------------------
# output helpers


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
    return buf.getvalue()


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in obj)
    return f"{pad}{obj}"


def _emit(args, payload, rows=None) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=False, default=str) + "\n"
    elif args.format == "csv":
        out = _csv(rows if rows is not None else payload)
    else:
        out = _text(payload) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _fail(message: str) -> int:
    print(f"FAILED: {message}", file=sys.stderr)
    return EXIT_FAIL


def _load_recipe(path):
    from .assembly import ExtensionRecipe

    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read recipe: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"recipe is not valid JSON: {exc}") from None
    try:
        return ExtensionRecipe.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        from .errors import RecipeInvariantViolation

        if isinstance(exc, RecipeInvariantViolation):
            raise
        raise UsageError(f"malformed recipe: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(args) -> int:
    from .catalog import check_catalog_relations, verify_rank1

    records = verify_rank1()
    relations = check_catalog_relations()
    if args.format == "json":
        # one JSON record per line
        lines = [json.dumps(r, default=str) for r in records]
        lines.append(json.dumps({"relations": relations}, default=str))
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, {"kinds": records, "relations": relations})
    return EXIT_OK


def cmd_verify_rank1(args) -> int:
    from .catalog import verify_rank1

    rows = verify_rank1()
    flat = [{k: r[k] for k in ("kind", "signature", "expected", "passed", "point_group_order")} for r in rows]
    _emit(args, rows if args.format == "json" else flat, flat)
    bad = [r["kind"] for r in rows if not r["passed"]]
    return _fail(f"signature mismatch for {', '.join(bad)}") if bad else EXIT_OK


def cmd_assemble(args) -> int:
    from .assembly import assemble
    from .errors import CertificateFailure, RecipeInvariantViolation

    try:
        recipe = _load_recipe(args.recipe)
        group = assemble(recipe, word_bound=args.word_bound)
    except RecipeInvariantViolation as exc:
        return _fail(f"recipe invariant violated: {exc}")
    except CertificateFailure as exc:
        return _fail(str(exc))
    payload = group.as_dict() if args.command == "assemble" else group.certificate.as_dict()
    _emit(args, payload)
    bad = group.certificate.first_failure()
    return _fail(f"certificate check {bad.name}") if bad else EXIT_OK


def cmd_certify(args) -> int:
    if args.recipe:
        return cmd_assemble(args)
    from fractions import Fraction

    from .assembly import build_mdc_schottky
    from .errors import CertificateFailure

    if args.rank < 1:
        raise UsageError("--rank must be at least 1")
    try:
        radius = Fraction(args.radius) if args.radius else None
    except ValueError:
        raise UsageError(f"bad radius {args.radius!r}") from None
    try:
        gens, cert = build_mdc_schottky(args.rank, radius=radius)
    except CertificateFailure as exc:
        return _fail(str(exc))
    _emit(args, {"rank": args.rank, "generators": [g.to_text() for g in gens], "certificate": cert.as_dict()})
    bad = cert.first_failure()
    return _fail(f"certificate check {bad.name}") if bad else EXIT_OK


def cmd_enumerate(args) -> int:
    from .signatures import FAMILIES, signature_report

    families = [f for f in FAMILIES if not args.family or f in args.family]
    t0 = time.perf_counter()
    rep = signature_report(families, r_max=args.r_max, n_max=args.n_max)
    rows = [r.as_dict() for r in rep.rows]
    payload = {
        "rows": rows,
        "conservation_ok": rep.conservation_ok,
        "master_formula_ok": rep.master_ok,
        "discrepancies": rep.discrepancies,
        "notes": rep.notes,
        "uncovered_cells": rep.uncovered,
        "exclusion_violations": rep.exclusion_violations,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    _emit(args, payload if args.format != "csv" else rows, rows)
    if args.format == "csv":
        for d in rep.discrepancies:
            print(f"discrepancy: {json.dumps(d)}", file=sys.stderr)
        for n in rep.notes:
            print(f"note: {json.dumps(n)}", file=sys.stderr)
    if not rep.conservation_ok:
        return _fail("Riemann-Hurwitz balance fails for a computed row")
    if not rep.master_ok:
        return _fail("master genus formula disagrees with the signature genus")
    if rep.exclusion_violations:
        return _fail("a triangle signature appeared with g >= 2")
    if rep.discrepancies:
        cells = "; ".join(f"{d['family']} a={d['a']} b={d['b']} c={d['c']}" for d in rep.discrepancies)
        return _fail(f"printed table differs from the computed signature at {cells}")
    return EXIT_OK


def cmd_g2(args) -> int:
    from .signatures import g2_signatures

    rows = [e.as_dict() for e in g2_signatures()]
    _emit(args, rows, rows)
    bad = [r for r in rows if not r["rh_ok"]]
    if bad:
        return _fail("rh_check fails for " + ", ".join(r["signature"] for r in bad))
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    from .classification import golden_max_index, verify_bound

    if args.g_max < 2:
        raise UsageError("--g-max must be at least 2")
    rows = verify_bound(args.g_max)
    golden = golden_max_index()
    out = []
    problems = []
    for r in rows:
        d = r.as_dict()
        if r.g in golden:
            d["golden_match"] = golden[r.g][0] == r.max_order
            if not d["golden_match"]:
                problems.append(f"g={r.g} max_order {r.max_order} against golden {golden[r.g][0]}")
        if r.max_order > r.bound:
            problems.append(f"g={r.g} exceeds 12(g-1)")
        if r.g >= 3 and not r.strict:
            problems.append(f"g={r.g} attains 12(g-1)")
        if r.g == 2 and (r.max_order != r.bound or any(not w.group.startswith("Dihedral") for w in r.witnesses_at_max)):
            problems.append("g=2 equality witness is not dihedral only")
        out.append(d)
    csv_rows = [{k: d[k] for k in ("g", "max_order", "bound", "witness_case", "witness_group")} for d in out]
    _emit(args, out, csv_rows)
    return _fail("; ".join(problems)) if problems else EXIT_OK


def cmd_ejemplo1(args) -> int:
    from .assembly import verify_ejemplo1

    rep = verify_ejemplo1()
    _emit(args, rep)
    if not rep["passed"]:
        bad = next(s["check"] for s in rep["steps"] if not s["passed"])
        return _fail(f"check {bad!r}")
    return EXIT_OK


def _parse_size(text):
    try:
        w, h = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad size {text!r}; expected WxH") from None
    if w < 1 or h < 1:
        raise UsageError("image size must be positive")
    return w, h


def cmd_render(args) -> int:
    from .errors import BadViewport, CertificateFailure, RecipeInvariantViolation
    from .limitset import Viewport, gap_statistic, orbit_cloud, render

    try:
        viewport = Viewport.parse(args.viewport)
    except BadViewport as exc:
        raise UsageError(str(exc)) from None
    width, height = _parse_size(args.size)
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    if args.group == "ejemplo1":
        from .assembly import ejemplo1_generators

        K = ejemplo1_generators()
        gens = [K["A"], K["B"], K["F"] @ K["A"] @ K["F"], K["F"] @ K["B"] @ K["F"]]
    else:
        from .assembly import assemble

        try:
            gens = list(assemble(_load_recipe(args.recipe)).generators.values())
        except (RecipeInvariantViolation, CertificateFailure) as exc:
            return _fail(str(exc))
    cloud = orbit_cloud(gens, args.depth)
    image = render(cloud, viewport, width, height)
    image.save(args.out)
    try:
        gap = gap_statistic(cloud)
    except ValueError:
        gap = None
    _emit(
        args,
        {
            "out": args.out,
            "width": width,
            "height": height,
            "viewport": list(viewport.as_tuple()),
            "cloud": cloud.as_dict(),
            "pixels_set": image.count(),
            "sha256": image.sha256(),
            "gap_statistic": gap,
        },
    )
    return EXIT_OK


COMMANDS = {
    "catalog": cmd_catalog,
    "verify-rank1": cmd_verify_rank1,
    "assemble": cmd_assemble,
    "certify": cmd_certify,
    "enumerate-signatures": cmd_enumerate,
    "g2-signatures": cmd_g2,
    "verify-bound": cmd_verify_bound,
    "verify-ejemplo1": cmd_ejemplo1,
    "render-limit-set": cmd_render,
}


def _set_tolerance(eps: float) -> None:
    # numerics reads MDC_TOLERANCE at import; patch modules that are already loaded
    os.environ["MDC_TOLERANCE"] = repr(eps)
    for name in ("mdcschottky.numerics", "mdcschottky.moebius"):
        mod = sys.modules.get(name)
        if mod is not None:
            mod.DEFAULT_EPS = eps


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.tolerance is not None:
        if not args.tolerance > 0:
            print("error: --tolerance must be positive", file=sys.stderr)
            return EXIT_USAGE
        _set_tolerance(args.tolerance)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
