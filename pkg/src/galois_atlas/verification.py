"""Replayable checks of the published computations, grouped into named blocks.

Each block returns (ok, details).  ``run_suite`` is shared by the ``verify-paper``
command and the acceptance tests.
"""
from __future__ import annotations

import random
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import INF, eval_ratfunc, format_q
from .atlas import AtlasData, fiber_group, fiber_plane_model, load_atlas, validate_atlas
from .diophantine import (HyperellipticModel, PlaneCurve, local_points_plane, local_solvable_hyperelliptic,
                          normalize_point, same_point, search_points, verify_place_table)
from .elliptic import EllCurveQ, a_p, is_cm, legendre, quadratic_twist, squarefree_part, torsion_points
from .galois import SIEVE_CERTIFIED, CMInputError, analyze, mod2_surjective_exact, nonsurjective_ell_adic
from .tables import (CURVE_50A1, EXAMPLE_MODEL, EXAMPLE_POINTS, FIBER_GENERA, PLACE_TABLES,
                     PLACE_TABLES_BY_KEY, SEXTIC_NO_Q3_POINTS, TORSION_CURVE, TORSION_POINTS, q_expr)

J_50A1 = q_expr("-2^-3*5^2*241^3")


@dataclass
class SuiteContext:
    atlas: AtlasData
    p_bound: int = 10 ** 4
    seed: int = 20240601


@dataclass
class SuiteCheck:
    name: str
    ok: bool
    details: List[str]
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name:18s} ({self.seconds:.2f}s)"


@dataclass
class PaperSuiteResult:
    checks: List[SuiteCheck] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "checks": [{"name": c.name, "pass": c.ok, "details": c.details,
                        "seconds": round(c.seconds, 3)} for c in self.checks],
        }


Outcome = Tuple[bool, List[str]]


class _Collector:
    def __init__(self):
        self.ok = True
        self.lines: List[str] = []

    def check(self, cond: bool, msg: str) -> None:
        self.ok &= bool(cond)
        self.lines.append(("ok   " if cond else "FAIL ") + msg)

    def result(self) -> Outcome:
        return self.ok, self.lines


# ---------------------------------------------------------------------------
# blocks


def check_six_j(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    col.check(len(ctx.atlas.exceptional_j) == 6, "six exceptional j-invariants listed")
    for j in sorted(ctx.atlas.exceptional_j):
        rep = analyze(j, ctx.atlas, p_bound=ctx.p_bound)
        wit = "; ".join(f"{v.ell}: " + ", ".join(f"{lbl}@{format_q(t)}" for lbl, t in v.witnesses)
                        for v in rep.verdicts)
        col.check(rep.nonsurjective_primes == (2, 3, 5), f"j={format_q(j)} nonsurjective at 2,3,5 [{wit}]")
        col.check(all(eval_ratfunc(ctx.atlas.by_label(lbl).jmap, t) == j
                      for v in rep.verdicts for lbl, t in v.witnesses), f"j={format_q(j)} witnesses re-evaluate")
        col.check(rep.mod7 == SIEVE_CERTIFIED, f"j={format_q(j)} mod7 {rep.mod7}")
        col.check(rep.smallest_surjective_prime == 7, f"j={format_q(j)} smallest surjective prime "
                  f"{rep.smallest_surjective_prime}")
    return col.result()


def check_curve_50a1(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    E = EllCurveQ.from_ainvs(CURVE_50A1)
    rep = analyze(E, ctx.atlas, p_bound=ctx.p_bound)
    col.check(rep.j == J_50A1, f"j = {format_q(rep.j)}")
    col.check(rep.nonsurjective_primes == (2, 3, 5), f"nonsurjective primes {rep.nonsurjective_primes}")
    col.check(rep.smallest_surjective_prime == 7, f"smallest surjective prime {rep.smallest_surjective_prime}")
    col.check(rep.mod7 == SIEVE_CERTIFIED, f"mod7 {rep.mod7}")
    return col.result()


def check_example_model(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    a = ctx.atlas
    F = fiber_plane_model(a.by_label("3.4.0.1"), a.by_label("5.5.0.1"))
    col.check(F == PlaneCurve.parse(EXAMPLE_MODEL).poly, f"model {F.to_str()}")
    return col.result()


def check_place_tables(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    a = ctx.atlas
    for table in PLACE_TABLES:
        r1, r2 = (a.by_label(lbl) for lbl in table.labels)
        C = PlaneCurve(fiber_plane_model(r1, r2))
        rep = verify_place_table(C, table.rows, (r1.jmap, r2.jmap), table.title, atlas=a,
                                 check_images=True)
        col.check(rep.ok, f"{table.title}: {len(rep.checks)} row checks, {len(rep.failures)} mismatches")
        for bad in rep.failures:
            col.lines.append("     " + bad.line())
    return col.result()


def _is_cusp(rows_jmap, P) -> bool:
    X, Y, Z = P
    return Z == 0 or eval_ratfunc(rows_jmap, X / Z) is INF


def check_point_search(ctx: SuiteContext, height: int = 1024) -> Outcome:
    col = _Collector()
    a = ctx.atlas
    # X_0(15): the four non-cuspidal points and nothing else off the cusps
    r1, r2 = a.by_label("3.4.0.1"), a.by_label("5.6.0.1")
    res = search_points(PlaneCurve(fiber_plane_model(r1, r2)), height)
    table = PLACE_TABLES_BY_KEY["x015"]
    expected = [row.point for row in table.rows if row.j is not INF]
    noncusp = [P for P in res.points if not _is_cusp(r1.jmap, P)]
    missing = [P for P in expected if not any(same_point(P, Q) for Q in res.points)]
    extra = [P for P in noncusp if not any(same_point(P, Q) for Q in expected)]
    col.check(not missing, f"X_0(15) bound {height}: all {len(expected)} tabulated points found")
    col.check(not extra, f"X_0(15) bound {height}: no extra non-cuspidal points ({_fmt_pts(extra)})")
    # X_0(3) x X_S4(5): exactly the six listed points
    s1, s2 = a.by_label("3.4.0.1"), a.by_label("5.5.0.1")
    res2 = search_points(PlaneCurve(fiber_plane_model(s1, s2)), height)
    want = {tuple(Fraction(c) for c in P) for P in EXAMPLE_POINTS}
    got = {P for P in res2.points}
    col.check({normalize_point(P) for P in want} == got,
              f"X_0(3) x X_S4(5) bound {height}: found {_fmt_pts(sorted(got))}")
    return col.result()


def _fmt_pts(pts) -> str:
    return ", ".join("(" + " : ".join(format_q(c) for c in P) + ")" for P in pts) or "none"


def check_local_solvability(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    sextic = HyperellipticModel.from_coeffs(SEXTIC_NO_Q3_POINTS, highest_first=False)
    cert = local_solvable_hyperelliptic(sextic, 3, max_depth=12)
    col.check(cert.result == "empty", f"{sextic} over Q_3: {cert.result} (depth {cert.depth})")
    easy = HyperellipticModel.from_coeffs([1, 0, 0, 0, 0, 0, 1])
    cert2 = local_solvable_hyperelliptic(easy, 3, max_depth=12)
    col.check(cert2.result == "solvable" and cert2.verify(easy),
              f"{easy} over Q_3: {cert2.result} witness {cert2.witness}")
    # genus-4 curve 9.27.0.1 x X_0(2): its canonical model is not available, so only
    # check consistency on the raw fiber model (no Hensel-liftable point mod 27)
    a = ctx.atlas
    raw = PlaneCurve(fiber_plane_model(a.by_label("9.27.0.1"), a.by_label("2.3.0.1")))
    res = local_points_plane(raw, 3, precision=3)
    col.check(not res.found, f"9.27.0.1 x X_0(2) raw model over Q_3: {res.to_dict()['result']} to depth 3 "
              "(consistency only, not an emptiness proof)")
    return col.result()


def check_genus(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    for r in ctx.atlas.records:
        g = r.group.genus()
        col.check(g == 0, f"{r.label} genus {g}")
    for labels, want in FIBER_GENERA:
        g = fiber_group(ctx.atlas, labels).genus()
        col.check(g == want, f"{' x '.join(labels)} genus {g} (expected {want})")
    return col.result()


def check_atlas(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    report = validate_atlas(ctx.atlas, maximality=True)
    col.check(report.ok, f"atlas records: {len(report.checks) - len(report.failures)}/{len(report.checks)} checks")
    for bad in report.failures:
        col.lines.append("     " + bad.line())
    col.check(not any(is_cm(j) for j in ctx.atlas.exceptional_j), "exceptional j-invariants are non-CM")
    E = EllCurveQ.from_ainvs(TORSION_CURVE)
    tors = torsion_points(E)
    want = [None] + sorted(tuple(Fraction(c) for c in P) for P in TORSION_POINTS)
    col.check(tors == want, f"torsion of {E}: {len(tors)} points")
    return col.result()


def _random_curve(rng: random.Random) -> EllCurveQ:
    while True:
        ainvs = [rng.randint(-1, 1), rng.randint(-2, 2), rng.randint(-1, 1),
                 rng.randint(-60, 60), rng.randint(-200, 200)]
        try:
            E = EllCurveQ.from_ainvs(ainvs)
        except ValueError:
            continue
        if E.j not in (0, 1728) and not is_cm(E.j):
            return E


def _random_squarefree(rng: random.Random) -> int:
    while True:
        d = rng.choice([-1, 1]) * rng.randint(2, 60)
        if squarefree_part(d) == d:
            return d


def check_properties(ctx: SuiteContext) -> Outcome:
    col = _Collector()
    rng = random.Random(ctx.seed)
    a = ctx.atlas

    # twist invariance of the exact verdicts and of the mod-2 test
    agree = 0
    for _ in range(50):
        E, d = _random_curve(rng), _random_squarefree(rng)
        Ed = quadratic_twist(E, d)
        same = all(nonsurjective_ell_adic(E.j, ell, a) == nonsurjective_ell_adic(Ed.j, ell, a)
                   for ell in (2, 3, 5))
        agree += same and mod2_surjective_exact(E) == mod2_surjective_exact(Ed)
    col.check(agree == 50, f"twist invariance: {agree}/50 pairs agree")

    # a_p(E^d) = (d/p) a_p(E)
    bad = 0
    total = 0
    for _ in range(10):
        E, d = _random_curve(rng), _random_squarefree(rng)
        Ed = quadratic_twist(E, d)
        for p in range(5, 101):
            if not _is_prime(p) or d % p == 0 or not E.has_good_reduction(p) or not Ed.has_good_reduction(p):
                continue
            total += 1
            bad += a_p(Ed, p) != legendre(d, p) * a_p(E, p)
    col.check(bad == 0, f"a_p twist law: {total - bad}/{total} (curve, p) cases")

    # witness soundness and completeness on constructed j-invariants
    fails: List[str] = []
    for r in a.maximal_records():
        n = 0
        while n < 20:
            t = Fraction(rng.randint(-60, 60), rng.randint(1, 25))
            j = eval_ratfunc(r.jmap, t)
            if j is INF or j in (0, 1728) or is_cm(j):
                continue
            n += 1
            v = nonsurjective_ell_adic(j, r.ell, a)
            sound = all(eval_ratfunc(a.by_label(lbl).jmap, w) == j for lbl, w in v.witnesses)
            if not (v.nonsurjective and sound):
                fails.append(f"{r.label} t={format_q(t)}")
    col.check(not fails, f"witness soundness: 20 constructed j per record, failures: {fails or 'none'}")

    # batch output is independent of the number of workers
    from .cli import run_batch

    lines = [f"j={format_q(j)}" for j in sorted(a.exceptional_j)] + ["1,0,1,-126,-552", "0,0,1,-1,0",
                                                                      "j=0", "0,1,1,2,4"]
    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for workers in (1, 3):
            out = Path(tmp) / f"w{workers}"
            run_batch(lines, out, workers=workers, p_bound=2000)
            outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        col.check(outs[0] == outs[1], f"batch output identical for 1 and 3 workers ({len(outs[0])} files)")
    return col.result()


def _is_prime(n: int) -> bool:
    from .elliptic import is_prime

    return is_prime(n)


# ---------------------------------------------------------------------------
# registry


CHECKS: Dict[str, Tuple[str, Callable[[SuiteContext], Outcome]]] = {
    "six-j": ("exceptional j-invariants: nonsurjective at 2, 3, 5, smallest surjective prime 7", check_six_j),
    "curve-50a1": ("curve 50.a1 analysis", check_curve_50a1),
    "example-model": ("plane model of X_0(3) x X_S4(5)", check_example_model),
    "place-tables": ("rational places of the five fiber products", check_place_tables),
    "point-search": ("bounded-height point search containment", check_point_search),
    "local-solvability": ("Q_3 local solvability: sextic, x^6 + 1, genus-4 raw model", check_local_solvability),
    "genus": ("genera of atlas curves and fiber products", check_genus),
    "atlas": ("atlas validation, CM status, torsion", check_atlas),
    "properties": ("twist invariance, a_p twist law, witness soundness, batch determinism", check_properties),
}


def run_suite(only: Optional[Sequence[str]] = None, atlas_path: Optional[str] = None,
              p_bound: int = 10 ** 4, atlas: Optional[AtlasData] = None) -> PaperSuiteResult:
    names = list(only) if only else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s) {', '.join(unknown)}; valid: {', '.join(CHECKS)}")
    # unvalidated on purpose: a broken atlas should fail the atlas block, not abort the run
    atlas = atlas or load_atlas(atlas_path, validate=False)
    ctx = SuiteContext(atlas, p_bound)
    result = PaperSuiteResult()
    for name in names:
        _, fn = CHECKS[name]
        t0 = time.perf_counter()
        try:
            ok, details = fn(ctx)
        except (ArithmeticError, ValueError, KeyError, CMInputError, RuntimeError) as exc:
            ok, details = False, [f"FAIL raised {type(exc).__name__}: {exc}"]
        result.checks.append(SuiteCheck(name, ok, details, time.perf_counter() - t0))
    return result
