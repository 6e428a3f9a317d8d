"""Surjectivity of l-adic Galois representations for l = 2, 3, 5 (exact) and 7 (sieve).

For l in {2, 3, 5} the image of rho_{E, l^oo} is a proper subgroup exactly when j(E)
is the image of a rational point under the j-map of one of the maximal genus-0
curves in the atlas; this is decided by finding rational roots.  For l = 7 Frobenius
traces are matched against the (trace, det) pairs of each maximal subgroup class
of GL2(F_7) with surjective determinant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .algebra import INF, ProjQ, UniPoly, eval_ratfunc, format_q, parse_q, rational_roots, to_q
from .atlas import AtlasData, load_atlas
from .elliptic import EllCurveQ, a_p, is_cm, primes_up_to
from .gl2 import GL2Subgroup, borel, mat_det, nonsplit_cartan, split_cartan_normalizer

SIEVE_CERTIFIED = "surjective-certified-by-sieve"
SIEVE_INCONCLUSIVE = "inconclusive"
DEFAULT_P_BOUND = 10 ** 4
MIN_SIEVE_PRIMES = 25


class CMInputError(ValueError):
    pass


class TheoremViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class EllAdicVerdict:
    ell: int
    nonsurjective: bool
    witnesses: Tuple[Tuple[str, ProjQ], ...] = ()

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "nonsurjective": self.nonsurjective,
            "witnesses": [{"label": lbl, "t": format_q(t)} for lbl, t in self.witnesses],
        }


@dataclass(frozen=True)
class GaloisReport:
    j: Fraction
    cm: bool
    verdicts: Tuple[EllAdicVerdict, ...]
    mod7: str
    smallest_surjective_prime: int

    @property
    def nonsurjective_primes(self) -> Tuple[int, ...]:
        return tuple(v.ell for v in self.verdicts if v.nonsurjective)

    def to_dict(self) -> dict:
        return {
            "j": format_q(self.j),
            "cm": self.cm,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "mod7": self.mod7,
            "smallest_surjective_prime": self.smallest_surjective_prime,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "GaloisReport":
        verdicts = tuple(
            EllAdicVerdict(v["ell"], v["nonsurjective"],
                           tuple((w["label"], parse_q(w["t"])) for w in v["witnesses"]))
            for v in d["verdicts"]
        )
        return cls(Fraction(d["j"]), d["cm"], verdicts, d["mod7"], d["smallest_surjective_prime"])


# ---------------------------------------------------------------------------
# exact l-adic test


def jmap_preimages(jmap, j: Fraction) -> List[ProjQ]:
    """Rational t in P^1 with jmap(t) = j (poles never qualify: j is finite)."""
    out: List[ProjQ] = []
    g = jmap.num - jmap.den * j
    if not g.is_zero():
        for t in sorted(rational_roots(g)):
            if jmap.den(t) != 0:
                out.append(t)
    if eval_ratfunc(jmap, INF) == j:
        out.append(INF)
    return out


def _require_noncm(j: Fraction) -> None:
    if j in (0, 1728) or is_cm(j):
        raise CMInputError(f"CM j-invariant {format_q(j)}: the moduli criterion requires "
                           "non-CM, j not in {0, 1728}")


def nonsurjective_ell_adic(j, ell: int, atlas: Optional[AtlasData] = None) -> EllAdicVerdict:
    j = to_q(j)
    _require_noncm(j)
    if ell not in (2, 3, 5):
        raise ValueError("exact test available for ell in {2, 3, 5} only")
    atlas = atlas or load_atlas()
    witnesses = []
    for rec in atlas.maximal_records(ell):
        for t in jmap_preimages(rec.jmap, j):
            witnesses.append((rec.label, t))
    return EllAdicVerdict(ell, bool(witnesses), tuple(witnesses))


def mod2_surjective_exact(E: EllCurveQ) -> bool:
    """Image of rho_{E,2} is all of GL2(F2) = S3: irreducible 2-division cubic, nonsquare disc."""
    cubic = UniPoly([E.b6, 2 * E.b4, E.b2, 4])
    if rational_roots(cubic):
        return False
    return not is_rational_square(E.disc)


def is_rational_square(q: Fraction) -> bool:
    from math import isqrt

    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


# ---------------------------------------------------------------------------
# Frobenius sieve


@dataclass(frozen=True)
class SieveClass:
    name: str
    order: int
    pairs: frozenset  # (trace, det) pairs mod ell occurring in the group


@dataclass(frozen=True)
class SieveResult:
    status: str
    survivors: Tuple[str, ...]
    primes_used: int
    last_prime: int


def trace_det_pairs(H: GL2Subgroup) -> frozenset:
    N = H.N
    return frozenset(((A[0] + A[3]) % N, mat_det(A, N)) for A in H.elements)


def maximal_classes(ell: int, extra: Iterable[Tuple[str, GL2Subgroup]] = ()) -> List[SieveClass]:
    """Maximal subgroup classes of GL2(F_ell) with surjective determinant used by the sieve.

    For odd ell >= 7 these are the Borel subgroup and the normalizers of the split and
    nonsplit Cartan subgroups; exceptional groups can be supplied through ``extra``.
    Classes with identical (trace, det) fingerprints are merged.
    """
    groups = [("borel", borel(ell)), ("normalizer-split-cartan", split_cartan_normalizer(ell)),
              ("normalizer-nonsplit-cartan", nonsplit_cartan(ell, normalizer=True))]
    groups += list(extra)
    out: List[SieveClass] = []
    seen = set()
    for name, H in groups:
        key = (H.order, trace_det_pairs(H))
        if key in seen:
            continue
        seen.add(key)
        out.append(SieveClass(name, H.order, key[1]))
    return out


_CLASS_CACHE: Dict[int, List[SieveClass]] = {}


def _classes(ell: int) -> List[SieveClass]:
    if ell not in _CLASS_CACHE:
        _CLASS_CACHE[ell] = maximal_classes(ell)
    return _CLASS_CACHE[ell]


def trace_sieve(E: EllCurveQ, ell: int, classes: Sequence[SieveClass], p_bound: int,
                p_min: int = 3) -> SieveResult:
    """Eliminate classes using (a_p mod ell, p mod ell) for good primes p_min <= p <= p_bound."""
    survivors = list(classes)
    used, last = 0, 0
    for p in primes_up_to(p_bound):
        if p < p_min or p in (2, ell) or not E.has_good_reduction(p):
            continue
        pair = (a_p(E, p) % ell, p % ell)
        used, last = used + 1, p
        survivors = [c for c in survivors if pair in c.pairs]
        if not survivors:
            return SieveResult(SIEVE_CERTIFIED, (), used, last)
    names = tuple(c.name for c in sorted(survivors, key=lambda c: (len(c.pairs), c.name)))
    if used < MIN_SIEVE_PRIMES:
        return SieveResult(SIEVE_INCONCLUSIVE, names, used, last)
    return SieveResult(f"nonsurjective-candidate({names[0]})", names, used, last)


def mod7_sieve(E: EllCurveQ, p_bound: int = DEFAULT_P_BOUND) -> str:
    return mod7_sieve_result(E, p_bound).status


def mod7_sieve_result(E: EllCurveQ, p_bound: int = DEFAULT_P_BOUND) -> SieveResult:
    if p_bound < 20:
        raise ValueError("sample too small: p_bound must be at least 20")
    return trace_sieve(E, 7, _classes(7), p_bound)


# ---------------------------------------------------------------------------
# full report


def analyze(curve: Union[EllCurveQ, Fraction, int, str], atlas: Optional[AtlasData] = None,
            p_bound: int = DEFAULT_P_BOUND) -> GaloisReport:
    """Verdicts at 2, 3, 5, the mod-7 sieve and the smallest surjective prime."""
    if isinstance(curve, EllCurveQ):
        E, j = curve, curve.j
    else:
        j = to_q(curve)
        _require_noncm(j)
        E = EllCurveQ.from_j(j)
    _require_noncm(j)
    atlas = atlas or load_atlas()
    verdicts = tuple(nonsurjective_ell_adic(j, ell, atlas) for ell in (2, 3, 5))
    surjective = [v.ell for v in verdicts if not v.nonsurjective]
    mod7 = mod7_sieve(E, p_bound)
    if surjective:
        smallest = min(surjective)
    else:
        if j not in atlas.exceptional_j:
            raise TheoremViolation(
                f"theorem violation: j = {format_q(j)} is nonsurjective at 2, 3 and 5 "
                "but is not one of the six exceptional j-invariants")
        smallest = 7
    return GaloisReport(j, False, verdicts, mod7, smallest)
