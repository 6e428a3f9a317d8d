"""Reference data: rational places of the fiber products studied for the main theorem.

Each table pairs two atlas labels (x-coordinate on the first curve, y on the second)
with the rational points of the plane model, their j-invariants and CM status.
j-values are written as exact expressions; ``inf`` marks cusps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .algebra import INF, ProjQ, RatFunc


def q_expr(text: str) -> ProjQ:
    if text.strip() == "inf":
        return INF
    f = RatFunc.parse(text)
    if not f.is_constant():
        raise ValueError(f"not a constant: {text!r}")
    return f.num.coeffs[0] if f.num.coeffs else Fraction(0)


@dataclass(frozen=True)
class PlaceRow:
    point: Tuple[Fraction, Fraction, Fraction]
    j: ProjQ
    cm: Optional[bool]
    nonsurjective: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class PlaceTable:
    key: str
    title: str
    labels: Tuple[str, str]
    rows: Tuple[PlaceRow, ...]


def _row(x, y, z, j, cm=None, nonsurj=None) -> PlaceRow:
    pt = tuple(Fraction(v) for v in (x, y, z))
    return PlaceRow(pt, q_expr(j), cm, nonsurj)  # type: ignore[arg-type]


PLACE_TABLES = (
    PlaceTable("x03-xs45", "X_0(3) x X_S4(5)", ("3.4.0.1", "5.5.0.1"), (
        _row(-81, -13, 1, "-2^4*3^2*13^3", False, (2, 3, 5)),
        _row(-27, 0, 1, "0", True),
        _row(-9, 2, 1, "2^4*3^3", False, (2, 3, 5)),
        _row(1, 0, 0, "inf"),
        _row(0, 1, 0, "inf"),
    )),
    PlaceTable("x015", "X_0(3) x X_0(5) = X_0(15)", ("3.4.0.1", "5.6.0.1"), (
        _row("-729/2", -40, 1, "-2^-3*5^2*241^3", False, (2, 3, 5)),
        _row(-32, "-25/2", 1, "-2^-5*5*29^3", False, (2, 3, 5)),
        _row("-729/32", "-25/8", 1, "2^-15*5*211^3", False, (2, 3, 5)),
        _row(-2, -10, 1, "-2^-1*5^2", False, (2, 3, 5)),
        _row(1, 0, 0, "inf"),
        _row(0, 1, 0, "inf"),
        _row(0, 0, 1, "inf"),
    )),
    PlaceTable("x03-xns5", "X_0(3) x X_ns+(5)", ("3.4.0.1", "5.10.0.1"), (
        _row(-243, 2, 1, "-2^15*3*5^3", True),
        _row(-27, -1, 1, "0", True),
        _row(-27, 0, 1, "0", True),
        _row(-3, -1, 1, "0", True),
        _row(27, 3, 1, "2^4*3^3*5^3", True),
    )),
    PlaceTable("xns4-xsp5", "X_ns+(4) x X_sp+(5)", ("4.4.0.1", "5.15.0.1"), (
        _row("-561/8", "-5/4", 1, "-2^-10*3^3*5^4*11^3*17^3", False, (2, 5)),
        _row(-8, -3, 1, "-2^15", True),
        _row(1, 0, 0, "inf"),
        _row(6, -2, 1, "2^6*3^3", True),
        _row(8, -5, 1, "0", True),
        _row(24, -1, 1, "-2^15*3^3", True),
    )),
    PlaceTable("xns4-x05", "X_ns+(4) x X_0(5)", ("4.4.0.1", "5.6.0.1"), (
        _row(1, 0, 0, "inf"),
        _row("59/8", "-25/4", 1, "2^-10*5*59^3", False, (2, 5)),
        _row("41/2", -20, 1, "-2^-2*5^2*41^3", False, (2, 5)),
    )),
)

PLACE_TABLES_BY_KEY = {t.key: t for t in PLACE_TABLES}

# Plane models printed alongside the tables (numerator of j1(x) - j2(y)).
EXAMPLE_MODEL = "x^4 + 36x^3 + 270x^2 - xy^5 - 5xy^4 - 40xy^3 + 756x + 729"

X015_MODEL = ("x^4y + 36x^3y + 270x^2y - xy^6 - 30xy^5 - 315xy^4 - 1300xy^3 - 1575xy^2"
              " + 6xy - 125x + 729y")

X03_XNS5_MODEL = (
    "x^4y^10 - 25x^4y^8 + 250x^4y^6 - 1250x^4y^4 + 3125x^4y^2 - 3125x^4 + 36x^3y^10 - 900x^3y^8"
    " + 9000x^3y^6 - 45000x^3y^4 + 112500x^3y^2 - 112500x^3 + 270x^2y^10 - 6750x^2y^8"
    " + 67500x^2y^6 - 337500x^2y^4 + 843750x^2y^2 - 843750x^2 - 7244xy^10 + 112000xy^9"
    " - 738900xy^8 + 2560000xy^7 - 4811000xy^6 + 3600000xy^5 + 3055000xy^4"
    " - 8000000xy^3 + 2362500xy^2 - 2362500x + 729y^10 - 18225y^8 + 182250y^6"
    " - 911250y^4 + 2278125y^2 - 2278125"
)

# Rational points of X_0(3) x X_S4(5), its elliptic curve and that curve's points.
EXAMPLE_POINTS = ((-81, -13, 1), (-27, 0, 1), (-9, 2, 1), (-3, 0, 1), (1, 0, 0), (0, 1, 0))
X015_POINTS = (("-729/2", -40, 1), (-32, "-25/2", 1), ("-729/32", "-25/8", 1), (-2, -10, 1),
               (1, 0, 0), (0, 1, 0), (0, 0, 1))
TORSION_CURVE = (0, 1, 1, 2, 4)  # y^2 + y = x^3 + x^2 + 2x + 4
TORSION_POINTS = ((-1, -2), (-1, 1), (2, -5), (2, 4))

# y^2 = f(x), coefficients from the constant term up.
SEXTIC_NO_Q3_POINTS = (-12, -36, 9, 33, -18, -9, 6)

CURVE_50A1 = (1, 0, 1, -126, -552)

# Genera of fiber products (label pairs) as stated for the proof.
FIBER_GENERA = (
    (("3.4.0.1", "5.6.0.1"), 1),
    (("3.4.0.1", "5.5.0.1"), 1),
    (("3.4.0.1", "5.10.0.1"), 2),
    (("9.27.0.1", "2.3.0.1"), 4),
    (("4.4.0.1", "5.15.0.1"), 3),
)
