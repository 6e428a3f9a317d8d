"""Rational points of bounded height and p-adic local solvability.

``search_points`` enumerates x = a/b by denominator, discards x-values for which the
fiber F(x, y) = 0 has no point in P^1(F_p) for some small prime p (numpy sieve),
then solves for y exactly.  ``local_solvable_hyperelliptic`` decides Q_p-points of
y^2 = f(x) by residue-disc subdivision; ``local_points_plane`` only looks for a
Hensel-liftable smooth point and never claims emptiness.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import INF, BiPoly, ProjQ, RatFunc, UniPoly, eval_ratfunc, format_q, rational_roots, to_q
from .elliptic import is_cm, is_prime, primes_up_to

Point3 = Tuple[Fraction, Fraction, Fraction]

SIEVE_PRIMES = tuple(primes_up_to(100))


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class PlaneCurve:
    """Affine plane curve F(x, y) = 0 (integer coefficients, content 1)."""

    poly: BiPoly

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("zero polynomial does not define a curve")
        object.__setattr__(self, "poly", self.poly.normalized())

    @classmethod
    def parse(cls, text: str) -> "PlaneCurve":
        """Affine text in x, y, or a homogeneous form in x, y, z (dehomogenized at z = 1)."""
        if "z" in text:
            return cls(_parse_homogeneous(text))
        return cls(BiPoly.parse(text))

    @property
    def degree(self) -> int:
        return self.poly.total_degree

    def contains(self, P: Sequence) -> bool:
        X, Y, Z = (to_q(c) for c in P)
        return self.poly.homogeneous_eval(X, Y, Z) == 0

    def is_singular(self, P: Sequence) -> bool:
        return all(g == 0 for g in self.poly.homogeneous_gradient(*P))

    def __str__(self) -> str:
        return self.poly.to_str()


def _parse_homogeneous(text: str) -> BiPoly:
    import sympy
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                            parse_expr, standard_transformations)

    x, y, z = sympy.symbols("x y z")
    tr = standard_transformations + (implicit_multiplication_application, convert_xor)
    try:
        expr = parse_expr(text, local_dict={"x": x, "y": y, "z": z}, transformations=tr)
        poly = sympy.Poly(expr, x, y, z)
    except (SyntaxError, TypeError, sympy.PolynomialError) as exc:
        raise ValueError(f"cannot parse form {text!r}: {exc}") from exc
    if not poly.is_homogeneous:
        raise ValueError(f"form in x, y, z must be homogeneous: {text!r}")
    terms: Dict[Tuple[int, int], Fraction] = {}
    for (i, j, _k), c in poly.terms():
        terms[(i, j)] = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
    bp = BiPoly(terms)
    if bp.total_degree != poly.total_degree():
        raise ValueError("form is divisible by z; the line z = 0 would be lost")
    return bp


@dataclass(frozen=True)
class HyperellipticModel:
    """y^2 = f(x) with integer f of degree 2..6 and nonzero discriminant."""

    f: UniPoly

    def __post_init__(self):
        f = self.f
        if f.is_zero() or not 2 <= f.degree <= 6:
            raise ValueError("need 2 <= deg f <= 6")
        if any(c.denominator != 1 for c in f.coeffs):
            raise ValueError("f must have integer coefficients")
        if f.gcd(f.derivative()).degree > 0:
            raise ValueError("f has a repeated factor (zero discriminant)")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], highest_first: bool = True) -> "HyperellipticModel":
        cs = list(coeffs)
        return cls(UniPoly(reversed(cs) if highest_first else cs))

    @classmethod
    def parse(cls, text: str) -> "HyperellipticModel":
        """Comma-separated integer coefficients, highest degree first."""
        try:
            cs = [int(c) for c in text.replace(" ", "").split(",") if c]
        except ValueError as exc:
            raise ValueError(f"bad coefficient list {text!r}: {exc}") from exc
        return cls.from_coeffs(cs)

    @property
    def int_coeffs(self) -> List[int]:
        return [int(c) for c in self.f.coeffs]

    def plane_curve(self) -> PlaneCurve:
        return PlaneCurve(BiPoly.y() ** 2 - BiPoly.from_uni(self.f, "x"))

    def __str__(self) -> str:
        return f"y^2 = {self.f.to_str('x')}"


# ---------------------------------------------------------------------------
# bounded height search


def normalize_point(P: Sequence) -> Point3:
    """Scale so that the last nonzero coordinate is 1."""
    X, Y, Z = (to_q(c) for c in P)
    for c in (Z, Y, X):
        if c != 0:
            return (X / c, Y / c, Z / c)
    raise ValueError("(0:0:0) is not a projective point")


def same_point(P: Sequence, Q: Sequence) -> bool:
    return normalize_point(P) == normalize_point(Q)


def _height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


@dataclass
class SearchResult:
    model: str
    bound: int
    points: List[Point3]
    singular_flags: List[bool]
    vertical_lines: List[Fraction] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "bound": self.bound,
            "points": [[format_q(c) for c in P] for P in self.points],
            "singular_flags": self.singular_flags,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchResult":
        pts = [tuple(Fraction(c) for c in P) for P in d["points"]]
        return cls(d["model"], d["bound"], pts, list(d["singular_flags"]))


def _fiber_tables(ycoeffs: List[List[int]], primes: Iterable[int]) -> Dict[int, np.ndarray]:
    """ok[p][r]: F(r, y) = 0 has a solution y in P^1(F_p)."""
    tables = {}
    for p in primes:
        r = np.arange(p, dtype=np.int64)
        vals = []
        for cs in ycoeffs:
            acc = np.zeros(p, dtype=np.int64)
            for c in reversed(cs):
                acc = (acc * r + c) % p
            vals.append(acc)
        V = np.stack(vals)  # (deg_y + 1, p): coefficient of y^j at x = r
        ok = np.all(V == 0, axis=0) | (V[-1] == 0)
        ys = np.arange(p, dtype=np.int64)
        acc = np.zeros((p, p), dtype=np.int64)  # [r, y]
        for row in V[::-1]:
            acc = (acc * ys[None, :] + row[:, None]) % p
        ok |= np.any(acc == 0, axis=1)
        tables[p] = ok
    return tables


def _search_affine(F: BiPoly, H: int, denominators: Sequence[int]) -> Tuple[List[Tuple[Fraction, Fraction]], List[Fraction]]:
    ycoeffs_q = F.coeffs_in_y()
    ycoeffs = [[int(c) for c in u.coeffs] for u in ycoeffs_q]
    tables = _fiber_tables(ycoeffs, SIEVE_PRIMES)
    numerators = np.arange(-H, H + 1, dtype=np.int64)
    found: List[Tuple[Fraction, Fraction]] = []
    vertical: List[Fraction] = []
    for b in denominators:
        mask = np.gcd(numerators, b) == 1
        for p, ok in tables.items():
            if b % p == 0:
                continue
            r = (numerators * pow(b, -1, p)) % p
            mask &= ok[r]
        for a in numerators[mask]:
            x = Fraction(int(a), b)
            fy = F.in_y_at(x)
            if fy.is_zero():
                vertical.append(x)
                continue
            for y in rational_roots(fy):
                if _height(y) <= H:
                    found.append((x, y))
    return found, vertical


def _search_chunk(args) -> Tuple[List[Tuple[Fraction, Fraction]], List[Fraction]]:
    terms, H, dens = args
    return _search_affine(BiPoly(terms), H, dens)


def points_at_infinity(C: PlaneCurve) -> List[Point3]:
    top = C.poly.top_form()
    d = C.degree
    out: List[Point3] = []
    if top.get((d, 0), 0) == 0:
        out.append((Fraction(1), Fraction(0), Fraction(0)))
    t = UniPoly(top.get((i, d - i), 0) for i in range(d + 1))
    for x in sorted(rational_roots(t)):
        out.append((x, Fraction(1), Fraction(0)))
    return out


def search_points(C: PlaneCurve, height_bound: int, workers: int = 1) -> SearchResult:
    """Projective rational points with affine part of height <= height_bound, plus all
    rational points on the line at infinity."""
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    H = height_bound
    dens = list(range(1, H + 1))
    if workers > 1:
        chunks = [(C.poly.terms, H, dens[k::workers]) for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_search_chunk, chunks))
    else:
        parts = [_search_affine(C.poly, H, dens)]
    affine = sorted({pt for part in parts for pt in part[0]})
    vertical = sorted({x for part in parts for x in part[1]})
    pts: List[Point3] = [(x, y, Fraction(1)) for x, y in affine]
    pts += points_at_infinity(C)
    pts = sorted(set(normalize_point(P) for P in pts), key=_point_key)
    for P in pts:
        assert C.contains(P), P
    flags = [C.is_singular(P) for P in pts]
    return SearchResult(str(C), H, pts, flags, vertical)


def _point_key(P: Point3):
    return (-P[2], -P[1], P[0], P[1])


# ---------------------------------------------------------------------------
# place tables


@dataclass(frozen=True)
class RowCheck:
    point: Tuple[Fraction, ...]
    field: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got

    def line(self) -> str:
        pt = "(" + " : ".join(format_q(c) for c in self.point) + ")"
        exp = format_q(self.expected) if isinstance(self.expected, Fraction) or self.expected is INF else self.expected
        got = format_q(self.got) if isinstance(self.got, Fraction) or self.got is INF else self.got
        return f"{pt:28s} {self.field:16s} expected={exp!s:24s} got={got!s:24s} {'ok' if self.ok else 'MISMATCH'}"


@dataclass
class PlaceTableReport:
    title: str
    checks: List[RowCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> List[RowCheck]:
        return [c for c in self.checks if not c.ok]

    def text(self) -> str:
        return "\n".join([self.title] + [c.line() for c in self.checks])


def verify_place_table(C: PlaneCurve, rows, jmaps: Tuple[RatFunc, RatFunc], title: str = "",
                       atlas=None, check_images: bool = False) -> PlaceTableReport:
    """Check each row (point, j, cm[, nonsurjective primes]) against the model and j-maps.

    Affine rows need j1(x) = j2(y) = j; rows on the line at infinity are checked as
    cusps (j1 or j2 evaluated at infinity).  With ``check_images`` the nonsurjective
    primes of non-CM rows are recomputed from the atlas.
    """
    j1, j2 = jmaps
    checks: List[RowCheck] = []
    for row in rows:
        P = tuple(to_q(c) for c in row.point)
        X, Y, Z = P
        add = lambda fld, exp, got: checks.append(RowCheck(P, fld, exp, got))  # noqa: E731
        add("on model", True, C.contains(P))
        if Z != 0:
            x, y = X / Z, Y / Z
            v1, v2 = eval_ratfunc(j1, x), eval_ratfunc(j2, y)
            add("j1(x)", row.j, v1)
            add("j2(y)", row.j, v2)
        else:
            if X != 0:
                add("j1(inf)", row.j, eval_ratfunc(j1, INF))
            if Y != 0:
                add("j2(inf)", row.j, eval_ratfunc(j2, INF))
        if row.cm is not None and row.j is not INF:
            add("cm", row.cm, is_cm(row.j))
        if check_images and row.nonsurjective is not None and row.j is not INF:
            from .galois import nonsurjective_ell_adic

            got = tuple(ell for ell in (2, 3, 5) if nonsurjective_ell_adic(row.j, ell, atlas).nonsurjective)
            add("nonsurjective", tuple(row.nonsurjective), got)
    return PlaceTableReport(title, checks)


# ---------------------------------------------------------------------------
# p-adic helpers


def vp(n: int, p: int) -> float:
    """p-adic valuation of an integer (inf for 0)."""
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_q(q: Fraction, p: int) -> float:
    if q == 0:
        return math.inf
    return vp(q.numerator, p) - vp(q.denominator, p)


def _taylor(coeffs: Sequence[int], x0: int) -> List[int]:
    """Coefficients of f(x0 + t) (Horner shift)."""
    c = list(coeffs)
    n = len(c)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            c[k] += x0 * c[k + 1]
    return c


def _eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# hyperelliptic local solvability


@dataclass(frozen=True)
class LocalSolvabilityCertificate:
    p: int
    result: str  # "solvable" | "empty" | "inconclusive"
    depth: int
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        return {"p": self.p, "result": self.result, "witness": self.witness, "depth": self.depth}

    @classmethod
    def from_dict(cls, d: dict) -> "LocalSolvabilityCertificate":
        return cls(d["p"], d["result"], d["depth"], d.get("witness"))

    def verify(self, H: HyperellipticModel) -> bool:
        """Re-check a solvable witness from scratch: v(g(x0) - y0^2) > 2 v(y0), or g(x0) = 0."""
        if self.result != "solvable" or self.witness is None:
            return False
        w = self.witness
        p = self.p
        g = H.int_coeffs if w["branch"] == "x" else _reversed_even(H.int_coeffs)
        x0, y0 = int(w["x0"]), int(w["y0"])
        if w["branch"] == "u" and x0 % p != 0:
            return False
        val = _eval(g, x0)
        if val == 0:
            return True
        if y0 == 0:
            return False
        return vp(val - y0 * y0, p) > 2 * vp(y0, p)


def _reversed_even(coeffs: Sequence[int]) -> List[int]:
    """u^n f(1/u) with n = deg f rounded up to even: the chart at infinity."""
    deg = len(coeffs) - 1
    n = deg + (deg % 2)
    padded = list(coeffs) + [0] * (n - deg)
    return padded[::-1]


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _sqrt_witness(c0: int, p: int, extra: int = 4) -> int:
    from sympy.ntheory.residue_ntheory import sqrt_mod

    v = int(vp(c0, p))
    u = c0 // p ** v
    mod = p ** extra
    s = sqrt_mod(u % mod, mod)
    return p ** (v // 2) * int(s)


def _disc_search(coeffs: List[int], p: int, start_k: int, max_depth: int):
    """BFS over discs x0 + p^k Z_p.  Returns ("solvable", (x0, y0), k) or
    ("empty", None, k) or ("inconclusive", None, k)."""
    frontier = [0]
    k = start_k
    deepest = k
    while frontier:
        deepest = k
        nxt: List[int] = []
        pk = p ** k
        for x0 in frontier:
            tay = _taylor(coeffs, x0)
            c = [t * pk ** i for i, t in enumerate(tay)]
            c0 = c[0]
            if c0 == 0:
                return "solvable", (x0, 0), k
            v0 = vp(c0, p)
            vmin = min((vp(ci, p) for ci in c[1:]), default=math.inf)
            if v0 < vmin:
                if v0 % 2 == 0 and _legendre(c0 // p ** int(v0), p) == 1:
                    return "solvable", (x0, _sqrt_witness(c0, p)), k
                continue  # square class constant and nonsquare on the disc
            nxt.extend(x0 + j * pk for j in range(p))
        if not nxt:
            return "empty", None, deepest
        if k >= max_depth:
            return "inconclusive", None, k
        frontier, k = nxt, k + 1
    return "empty", None, deepest


def local_solvable_hyperelliptic(H: HyperellipticModel, p: int, max_depth: int = 12) -> LocalSolvabilityCertificate:
    """Decide whether y^2 = f(x) has a point over Q_p (p odd), including points at infinity."""
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    cs = H.int_coeffs
    depth = 0
    inconclusive = False
    for branch, coeffs, k0 in (("x", cs, 0), ("u", _reversed_even(cs), 1)):
        status, wit, k = _disc_search(coeffs, p, k0, max_depth)
        depth = max(depth, k)
        if status == "solvable":
            x0, y0 = wit
            return LocalSolvabilityCertificate(p, "solvable", k, {"branch": branch, "x0": x0, "y0": y0})
        inconclusive |= status == "inconclusive"
    return LocalSolvabilityCertificate(p, "inconclusive" if inconclusive else "empty", depth)


# ---------------------------------------------------------------------------
# plane curves: smooth-point search


@dataclass(frozen=True)
class PlaneLocalResult:
    p: int
    precision: int
    found: bool
    witness: Optional[Tuple[int, int, int]] = None

    def to_dict(self) -> dict:
        return {"p": self.p, "result": "smooth-point" if self.found else "none-found",
                "witness": list(self.witness) if self.witness else None, "depth": self.precision}


def _int_form(C: PlaneCurve) -> Tuple[int, List[Tuple[int, int, int, int]]]:
    d = C.degree
    return d, [(i, j, d - i - j, int(c)) for (i, j), c in C.poly.terms.items()]


def _eval_form(terms, P) -> int:
    X, Y, Z = P
    return sum(c * X ** i * Y ** j * Z ** k for i, j, k, c in terms)


def _grad_form(terms, P) -> Tuple[int, int, int]:
    X, Y, Z = P
    gx = sum(c * i * X ** (i - 1) * Y ** j * Z ** k for i, j, k, c in terms if i)
    gy = sum(c * j * X ** i * Y ** (j - 1) * Z ** k for i, j, k, c in terms if j)
    gz = sum(c * k * X ** i * Y ** j * Z ** (k - 1) for i, j, k, c in terms if k)
    return gx, gy, gz


def _hensel_ok(terms, P, p: int) -> bool:
    fv = vp(_eval_form(terms, P), p)
    gv = min(vp(g, p) for g in _grad_form(terms, P))
    return gv < math.inf and fv > 2 * gv


def local_points_plane(C: PlaneCurve, p: int, precision: int = 3) -> PlaneLocalResult:
    """Look for a point of P^2(Z/p^k), k <= precision, satisfying v(F(P)) > 2 min v(dF(P)).

    Such a point lifts to a smooth Q_p-point.  A negative answer is not a proof of
    emptiness.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if not is_prime(p):
        raise ValueError("p must be prime")
    _, terms = _int_form(C)
    # charts: (1, b, c), (a, 1, c) with p | a, (a, b, 1) with p | a, b
    frontier = [(1, b, c) for b in range(p) for c in range(p)]
    frontier += [(0, 1, c) for c in range(p)]
    frontier += [(0, 0, 1)]
    for k in range(1, precision + 1):
        pk = p ** k
        live = []
        for P in frontier:
            if _eval_form(terms, P) % pk != 0:
                continue
            if _hensel_ok(terms, P, p):
                return PlaneLocalResult(p, k, True, P)
            live.append(P)
        if k == precision:
            break
        frontier = []
        for X, Y, Z in live:
            free = [idx for idx, v in enumerate((X, Y, Z)) if not _is_chart_one(idx, (X, Y, Z))]
            for shifts in np.ndindex(*([p] * len(free))):
                Q = [X, Y, Z]
                for idx, s in zip(free, shifts):
                    Q[idx] += int(s) * pk
                frontier.append(tuple(Q))
    return PlaneLocalResult(p, precision, False)


def _is_chart_one(idx: int, P: Tuple[int, int, int]) -> bool:
    """The normalized coordinate (first coordinate equal to 1 in its chart) is never lifted."""
    first_one = next(i for i, v in enumerate(P) if v == 1)
    return idx == first_one
