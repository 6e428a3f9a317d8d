"""Embedded modular-curve atlas: Table-style records with j-maps and group generators."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Dict, FrozenSet, List, Optional, Tuple

from .algebra import INF, BiPoly, RatFunc, bipoly_from_jmap_difference, eval_ratfunc, fiber_profile
from .gl2 import GL2Subgroup, parse_generators
from .tables import PLACE_TABLES_BY_KEY, q_expr

ATLAS_ENV = "GALOIS_ATLAS_PATH"


class AtlasError(ValueError):
    pass


@dataclass(frozen=True)
class ModularCurveRecord:
    label: str
    name: Optional[str]
    ell: int
    level: int
    index: int
    genus: int
    jmap: RatFunc
    group: GL2Subgroup = field(compare=False)
    auxiliary: bool = False

    @property
    def display_name(self) -> str:
        return self.name or self.label


@dataclass(frozen=True)
class AtlasData:
    records: Tuple[ModularCurveRecord, ...]
    exceptional_j: FrozenSet[Fraction]
    cm_j: FrozenSet[Fraction]

    def by_label(self, label: str) -> ModularCurveRecord:
        for r in self.records:
            if r.label == label:
                return r
        valid = ", ".join(r.label for r in self.records)
        raise KeyError(f"unknown label {label!r}; valid labels: {valid}")

    def maximal_records(self, ell: Optional[int] = None) -> List[ModularCurveRecord]:
        return [r for r in self.records if not r.auxiliary and (ell is None or r.ell == ell)]

    @property
    def labels(self) -> List[str]:
        return [r.label for r in self.records]


@dataclass(frozen=True)
class Check:
    label: str
    field: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got

    def line(self) -> str:
        status = "ok" if self.ok else "MISMATCH"
        return f"{self.label:10s} {self.field:22s} expected={self.expected!s:20s} got={self.got!s:20s} {status}"


@dataclass
class ValidationReport:
    checks: List[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"atlas validation: {'PASS' if self.ok else 'FAIL'} "
                     f"({len(self.checks) - len(self.failures)}/{len(self.checks)} checks)")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# loading


def _atlas_text(path: Optional[str]) -> str:
    path = path or os.environ.get(ATLAS_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    return resources.files("galois_atlas").joinpath("data/atlas.txt").read_text(encoding="utf-8")


def parse_atlas(text: str) -> AtlasData:
    records: List[ModularCurveRecord] = []
    exceptional: FrozenSet[Fraction] = frozenset()
    cm: FrozenSet[Fraction] = frozenset()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            key, _, value = line[1:].partition("=")
            values = frozenset(q_expr(v) for v in value.split(","))
            if key.strip() == "exceptional_j":
                exceptional = values
            elif key.strip() == "cm_j":
                cm = values
            else:
                raise AtlasError(f"line {lineno}: unknown directive {key.strip()!r}")
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 8:
            raise AtlasError(f"line {lineno}: expected 8 fields, found {len(parts)}")
        label, name, ell, level, index, genus, jmap, gens = parts
        aux = label.startswith("*")
        label = label.lstrip("*")
        try:
            N, generators = parse_generators(gens)
            record = ModularCurveRecord(
                label=label,
                name=None if name in ("-", "") else name,
                ell=int(ell),
                level=int(level),
                index=int(index),
                genus=int(genus),
                jmap=RatFunc.parse(jmap),
                group=GL2Subgroup(N, generators),
                auxiliary=aux,
            )
        except (ValueError, ZeroDivisionError) as exc:
            raise AtlasError(f"line {lineno} ({label}): {exc}") from exc
        records.append(record)
    return AtlasData(tuple(records), exceptional, cm)


def load_atlas(path: Optional[str] = None, validate: bool = True, full: bool = False) -> AtlasData:
    """Parse the embedded atlas (or ``path`` / $GALOIS_ATLAS_PATH) and validate it.

    ``full`` adds the maximality checks, which dominate the cost.
    """
    text = _atlas_text(path)
    if validate and path is None and ATLAS_ENV not in os.environ:
        return _load_embedded(full)
    atlas = parse_atlas(text)
    if validate:
        _raise_on_failure(validate_atlas(atlas, maximality=full))
    return atlas


@lru_cache(maxsize=2)
def _load_embedded(full: bool) -> AtlasData:
    atlas = parse_atlas(_atlas_text(None))
    _raise_on_failure(validate_atlas(atlas, maximality=full))
    return atlas


def _raise_on_failure(report: ValidationReport) -> None:
    if not report.ok:
        bad = report.failures[0]
        raise AtlasError(f"atlas validation failed for {bad.label}: {bad.field} "
                         f"expected {bad.expected}, got {bad.got}")


# ---------------------------------------------------------------------------
# validation


def validate_record(r: ModularCurveRecord, maximality: bool = True) -> List[Check]:
    H = r.group
    checks: List[Check] = []
    add = lambda fld, exp, got: checks.append(Check(r.label, fld, exp, got))  # noqa: E731

    lvl, idx, gen, _ = (r.label.split(".") + ["", "", "", ""])[:4]
    add("label/level", lvl, str(r.level))
    add("label/index", idx, str(r.index))
    add("label/genus", gen, str(r.genus))
    add("ell", True, r.level > 0 and all(p == r.ell for p in _primes(r.level)))
    add("index", r.index, H.index)
    add("level", r.level, H.level())
    add("det_surjective", True, H.det_surjective())
    add("contains_-I", True, H.contains_minus_I())
    gd = H.genus_data() if H.det_surjective() else None
    add("genus", r.genus, gd.genus if gd else None)
    if gd is not None:
        add("jmap_degree", gd.index_psl2, r.jmap.degree)
        if r.genus == 0:
            add("cusp_widths", gd.cusp_widths, tuple(fiber_profile(r.jmap, INF)))
            add("e3 (over j=0)", gd.e3, fiber_profile(r.jmap, Fraction(0)).count(1))
            add("e2 (over j=1728)", gd.e2, fiber_profile(r.jmap, Fraction(1728)).count(1))
    if maximality and not r.auxiliary:
        add("maximal", True, _is_maximal(H))
    return checks


def _is_maximal(H: GL2Subgroup) -> bool:
    if _primes(H.index) == [H.index]:
        return True  # prime index
    return H.is_maximal_in_ambient()


def _primes(n: int) -> List[int]:
    from .gl2 import prime_factors
    return prime_factors(n)


def validate_atlas(a: AtlasData, maximality: bool = True) -> ValidationReport:
    from .elliptic import CM_J_INVARIANTS

    checks: List[Check] = []
    for r in a.records:
        checks += validate_record(r, maximality=maximality)
    checks.append(Check("atlas", "table records", 12, len(a.maximal_records())))
    checks.append(Check("atlas", "per-prime counts", (6, 3, 3),
                        tuple(len(a.maximal_records(ell)) for ell in (2, 3, 5))))
    checks.append(Check("atlas", "exceptional_j count", 6, len(a.exceptional_j)))
    checks.append(Check("atlas", "cm_j list", frozenset(CM_J_INVARIANTS), a.cm_j))
    checks.append(Check("atlas", "exceptional non-CM", frozenset(), a.exceptional_j & a.cm_j))
    checks += _auxiliary_checks(a)
    return ValidationReport(checks)


def _auxiliary_checks(a: AtlasData) -> List[Check]:
    """The X_sp+(5) j-map is only trusted if it reproduces every row of its place table."""
    out: List[Check] = []
    table = PLACE_TABLES_BY_KEY["xns4-xsp5"]
    for r in a.records:
        if not r.auxiliary:
            continue
        if r.label != table.labels[1]:
            continue
        for row in table.rows:
            X, Y, Z = row.point
            if Z == 0:
                continue
            out.append(Check(r.label, f"place y={Y}", row.j, eval_ratfunc(r.jmap, Y / Z)))
    return out


# ---------------------------------------------------------------------------
# plane models


def fiber_plane_model(r1: ModularCurveRecord, r2: ModularCurveRecord) -> BiPoly:
    """Affine model of X_H1 x X_H2 over the j-line: numerator of j1(x) - j2(y)."""
    if r1.ell == r2.ell or math.gcd(r1.level, r2.level) != 1:
        raise AtlasError(f"fiber product needs distinct primes, got {r1.label} and {r2.label}")
    return bipoly_from_jmap_difference(r1.jmap, r2.jmap)


def fiber_group(a: AtlasData, labels) -> GL2Subgroup:
    from .gl2 import fiber_product

    groups = [a.by_label(lbl).group for lbl in labels]
    G = groups[0]
    for H in groups[1:]:
        G = fiber_product(G, H)
    return G
