"""galois-atlas command line.

Exit codes: 0 success, 1 usage or parse error (also failed verification), 2 CM input
rejected, 3 theorem violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .algebra import format_q
from .atlas import AtlasError, fiber_group, fiber_plane_model, load_atlas, validate_atlas
from .diophantine import (HyperellipticModel, PlaneCurve, local_points_plane, local_solvable_hyperelliptic,
                          search_points)
from .elliptic import EllCurveQ, SingularCurveError
from .galois import DEFAULT_P_BOUND, CMInputError, GaloisReport, TheoremViolation, analyze
from .tables import q_expr

EXIT_OK, EXIT_USAGE, EXIT_CM, EXIT_THEOREM = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input parsing


def parse_curve_spec(text: str):
    """``a1,a2,a3,a4,a6`` -> EllCurveQ, ``j=<exact expression>`` -> Fraction."""
    text = text.strip()
    if text.lower().startswith("j="):
        return parse_j(text[2:])
    parts = text.split(",")
    if len(parts) != 5:
        raise UsageError(f"expected 5 comma-separated a-invariants or j=<rational>, got {text!r}")
    col = 1
    ainvs = []
    for part in parts:
        try:
            ainvs.append(q_expr(part))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"column {col}: bad coefficient {part.strip()!r} ({exc})") from exc
        col += len(part) + 1
    try:
        return EllCurveQ.from_ainvs(ainvs)
    except SingularCurveError as exc:
        raise UsageError(f"{text}: {exc}") from exc


def parse_j(text: str):
    try:
        j = q_expr(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad j-invariant {text.strip()!r}: {exc}") from exc
    if not hasattr(j, "numerator"):
        raise UsageError("j must be finite")
    return j


def read_curve_lines(lines: Sequence[str]) -> Tuple[List[Tuple[int, str]], List[str]]:
    """Data lines (number, text) and parse errors; '#' starts a comment."""
    items, errors = [], []
    for n, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            parse_curve_spec(text)
        except UsageError as exc:
            errors.append(f"line {n}: {exc}")
            continue
        items.append((n, text))
    return items, errors


# ---------------------------------------------------------------------------
# batch


def _analyze_line(args) -> dict:
    text, p_bound = args
    try:
        rep = analyze(parse_curve_spec(text), p_bound=p_bound)
        return {"status": "ok", "report": rep.to_dict()}
    except CMInputError as exc:
        return {"status": "cm-rejected", "error": str(exc)}
    except TheoremViolation as exc:
        return {"status": "theorem-violation", "error": str(exc)}
    except (ValueError, ArithmeticError) as exc:
        return {"status": "error", "error": str(exc)}


def run_batch(lines: Sequence[str], out_dir, workers: int = 1, p_bound: int = DEFAULT_P_BOUND) -> dict:
    items, errors = read_curve_lines(lines)
    if errors:
        raise UsageError("batch aborted, unparsable input:\n  " + "\n  ".join(errors))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(text, p_bound) for _, text in items]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_analyze_line, jobs))
    else:
        results = [_analyze_line(j) for j in jobs]
    hist: Counter = Counter()
    failures = []
    width = max(4, len(str(len(items))))
    for k, ((lineno, text), res) in enumerate(zip(items, results), 1):
        doc = {"line": lineno, "input": text, **res}
        (out / f"curve_{k:0{width}d}.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        if res["status"] == "ok":
            hist[res["report"]["smallest_surjective_prime"]] += 1
        else:
            failures.append({"line": lineno, "input": text, "status": res["status"], "error": res["error"]})
    summary = {
        "curves": len(items),
        "analyzed": sum(hist.values()),
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "failures": failures,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    return summary


# ---------------------------------------------------------------------------
# commands


def _emit(doc: dict, args, pretty_text: Optional[str] = None) -> None:
    text = pretty_text if (getattr(args, "pretty", False) and pretty_text is not None) else json.dumps(doc, indent=2)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _report_text(rep: GaloisReport) -> str:
    lines = [f"j-invariant          {format_q(rep.j)}"]
    for v in rep.verdicts:
        wit = ", ".join(f"{lbl} at t={format_q(t)}" for lbl, t in v.witnesses) or "-"
        lines.append(f"ell={v.ell}  {'nonsurjective' if v.nonsurjective else 'surjective':14s} {wit}")
    lines.append(f"mod 7                {rep.mod7}")
    lines.append(f"smallest surjective  {rep.smallest_surjective_prime}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    if (args.curve is None) == (args.j is None):
        raise UsageError("give exactly one of --curve or --j")
    target = parse_curve_spec(args.curve) if args.curve is not None else parse_j(args.j)
    rep = analyze(target, p_bound=args.p_bound)
    _emit(rep.to_dict(), args, _report_text(rep))
    return EXIT_OK


def cmd_batch(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    summary = run_batch(lines, args.out, workers=args.workers, p_bound=args.p_bound)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .verification import CHECKS, run_suite

    only = [n for item in (args.only or []) for n in item.split(",") if n]
    try:
        result = run_suite(only=only or None, p_bound=args.p_bound)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
    else:
        for c in result.checks:
            print(f"{c.line()}  {CHECKS[c.name][0]}")
            if args.verbose or not c.ok:
                for d in c.details:
                    print(f"    {d}")
        print(f"overall: {'PASS' if result.overall else 'FAIL'}")
    return EXIT_OK if result.overall else EXIT_USAGE


def _records(labels: Sequence[str]):
    atlas = load_atlas()
    try:
        return atlas, [atlas.by_label(lbl) for lbl in labels]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc


def cmd_model(args) -> int:
    _, (r1, r2) = _records(args.labels)
    try:
        F = fiber_plane_model(r1, r2)
    except AtlasError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        print(json.dumps({"labels": args.labels, "model": F.to_str()}, indent=2))
    else:
        print(F.to_str())
    return EXIT_OK


def cmd_genus(args) -> int:
    labels = args.spec.split("x")
    atlas, _ = _records(labels)
    G = fiber_group(atlas, labels)
    if args.json:
        inv = G.invariants()
        print(json.dumps({"labels": labels, "level": G.level(), "genus": inv.genus,
                          "index": G.index}, indent=2))
    else:
        print(G.genus())
    return EXIT_OK


def _curve_from_args(args) -> PlaneCurve:
    if args.model:
        try:
            return PlaneCurve.parse(args.model)
        except ValueError as exc:
            raise UsageError(f"bad model: {exc}") from exc
    if args.labels:
        _, (r1, r2) = _records(args.labels)
        return PlaneCurve(fiber_plane_model(r1, r2))
    raise UsageError("give --model or --labels")


def cmd_search(args) -> int:
    C = _curve_from_args(args)
    if args.height < 1:
        raise UsageError("--height must be >= 1")
    res = search_points(C, args.height, workers=args.workers)
    pretty = "\n".join(
        "(" + " : ".join(format_q(c) for c in P) + ")" + ("  singular" if s else "")
        for P, s in zip(res.points, res.singular_flags))
    _emit(res.to_dict(), args, pretty)
    return EXIT_OK


def cmd_localsolve(args) -> int:
    if args.hyperelliptic:
        try:
            H = HyperellipticModel.parse(args.hyperelliptic)
            cert = local_solvable_hyperelliptic(H, args.p, max_depth=args.max_depth)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        doc = {"model": str(H), **cert.to_dict()}
    else:
        C = _curve_from_args(args)
        try:
            res = local_points_plane(C, args.p, args.max_depth)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        doc = {"model": str(C), **res.to_dict()}
    _emit(doc, args, f"{doc['model']} over Q_{args.p}: {doc['result']}")
    return EXIT_OK


def cmd_atlas(args) -> int:
    if args.action == "list":
        atlas = load_atlas(validate=False)
        for r in atlas.records:
            mark = "*" if r.auxiliary else " "
            print(f"{mark}{r.label:10s} {r.display_name:10s} ell={r.ell} index={r.index:3d}  j = {r.jmap.to_str()}")
        return EXIT_OK
    try:
        atlas = load_atlas(validate=False)
    except AtlasError as exc:
        raise UsageError(str(exc)) from exc
    report = validate_atlas(atlas, maximality=not args.quick)
    print(report.text())
    return EXIT_OK if report.ok else EXIT_USAGE


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage, which is reserved here for CM rejection."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="galois-atlas",
                                 description="Surjectivity of l-adic Galois images for elliptic curves over Q.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one curve or j-invariant")
    p.add_argument("--curve", help="a1,a2,a3,a4,a6")
    p.add_argument("--j", help="exact j-invariant, e.g. -25/2 or -2^-3*5^2*241^3")
    p.add_argument("--p-bound", type=int, default=DEFAULT_P_BOUND, help="prime bound for the mod-7 sieve")
    p.add_argument("--pretty", action="store_true", help="plain text instead of JSON")
    p.add_argument("--output", "-o", help="write to file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("batch", help="analyze every curve in a CSV file")
    p.add_argument("input")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--p-bound", type=int, default=DEFAULT_P_BOUND)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("verify-paper", help="replay the published computations")
    p.add_argument("--only", action="append", help="run only these checks (repeatable, comma separated)")
    p.add_argument("--p-bound", type=int, default=DEFAULT_P_BOUND)
    p.add_argument("--json", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("model", help="plane model of a fiber product of two atlas curves")
    p.add_argument("labels", nargs=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("genus", help="genus of an atlas curve or fiber product, e.g. 3.4.0.1x5.6.0.1")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("search", help="rational points of bounded height")
    p.add_argument("--model", help="affine F(x, y) or homogeneous F(x, y, z)")
    p.add_argument("--labels", nargs=2, help="use the fiber product model of two atlas curves")
    p.add_argument("--height", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("localsolve", help="p-adic local solvability")
    p.add_argument("--hyperelliptic", help="coefficients of f in y^2 = f(x), highest degree first")
    p.add_argument("--model", help="plane curve (smooth-point search only)")
    p.add_argument("--labels", nargs=2)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=12, help="disc depth, or precision for plane curves")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_localsolve)

    p = sub.add_parser("atlas", help="inspect or validate the modular curve atlas")
    p.add_argument("action", choices=["validate", "list"])
    p.add_argument("--quick", action="store_true", help="skip the maximality checks")
    p.set_defaults(func=cmd_atlas)
    return ap


_VALUE_OPTIONS = ("--j", "--curve", "--model", "--hyperelliptic")


def _glue_negative_values(argv: List[str]) -> List[str]:
    """Let ``--j -25/2`` through: argparse would read -25/2 as an option."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except CMInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CM
    except TheoremViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except (UsageError, AtlasError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
