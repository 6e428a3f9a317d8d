"""Elliptic curves over Q: invariants, twists, Frobenius traces, torsion, CM test."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import UniPoly, format_q, rational_roots, to_q

# The thirteen rational j-invariants of elliptic curves with complex multiplication.
CM_J_INVARIANTS = frozenset(Fraction(j) for j in (
    0, 1728, -3375, 8000, -32768, 54000, 287496, -884736, -12288000, 16581375,
    -884736000, -147197952000, -262537412640768000,
))

# Possible orders of E(Q)_tors.
MAZUR_ORDERS = frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16})

Point = Optional[Tuple[Fraction, Fraction]]  # None is the point at infinity


class SingularCurveError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


def is_cm(j) -> bool:
    return to_q(j) in CM_J_INVARIANTS


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> List[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(n ** 0.5) + 1):
        if sieve[k]:
            sieve[k * k::k] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def squarefree_part(d: int) -> int:
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    sign = -1 if d < 0 else 1
    n = abs(d)
    out = 1
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        if e % 2:
            out *= f
        f += 1
    return sign * out * n


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class EllCurveQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, to_q(getattr(self, name)))
        if self.disc == 0:
            raise SingularCurveError("singular model")

    @classmethod
    def from_ainvs(cls, ainvs: Sequence) -> "EllCurveQ":
        if len(ainvs) != 5:
            raise ValueError("need five a-invariants a1,a2,a3,a4,a6")
        return cls(*(to_q(a) for a in ainvs))

    @classmethod
    def short(cls, A, B) -> "EllCurveQ":
        return cls(0, 0, 0, to_q(A), to_q(B))

    @classmethod
    def from_j(cls, j) -> "EllCurveQ":
        """y^2 + xy = x^3 - 36/(j - 1728) x - 1/(j - 1728), for j not in {0, 1728}."""
        j = to_q(j)
        if j in (0, 1728):
            raise ValueError("j-parameterized model needs j not in {0, 1728}")
        k = j - 1728
        return cls(1, 0, 0, -36 / k, -1 / k)

    @classmethod
    def parse(cls, text: str) -> "EllCurveQ":
        """``a1,a2,a3,a4,a6`` or ``j=<rational>``."""
        text = text.strip()
        if text.lower().startswith("j="):
            return cls.from_j(Fraction(text[2:].strip()))
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ValueError(f"expected 5 comma-separated a-invariants, got {len(parts)}")
        return cls.from_ainvs([Fraction(p) for p in parts])

    @property
    def ainvs(self) -> Tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self) -> str:
        return ",".join(format_q(a) for a in self.ainvs)

    # -- standard invariants
    @property
    def b2(self) -> Fraction:
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2

    @property
    def c4(self) -> Fraction:
        return self.b2 ** 2 - 24 * self.b4

    @property
    def c6(self) -> Fraction:
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return self.c4 ** 3 / self.disc

    # -- models
    def short_model(self) -> Tuple[Fraction, Fraction]:
        """(A, B) with y^2 = x^3 + A x + B isomorphic over Q (x' = 36x + 3b2, y' = 108(2y + a1x + a3))."""
        return -27 * self.c4, -54 * self.c6

    @cached_property
    def _integral_scale(self) -> int:
        A, B = self.short_model()
        need = {}
        for den, power in ((A.denominator, 4), (B.denominator, 6)):
            for p, e in _factor_small(den):
                need[p] = max(need.get(p, 0), -(-e // power))
        u = 1
        for p, e in need.items():
            u *= p ** e
        return u

    def integral_short_model(self) -> Tuple[int, int, int]:
        """(A, B, u): integral short model Y^2 = X^3 + A X + B with X = u^2 x', Y = u^3 y'."""
        A, B = self.short_model()
        u = self._integral_scale
        return int(A * u ** 4), int(B * u ** 6), u

    def to_short(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = P
        A, B, u = self.integral_short_model()
        xs = 36 * x + 3 * self.b2
        ys = 108 * (2 * y + self.a1 * x + self.a3)
        return xs * u ** 2, ys * u ** 3

    def from_short(self, P: Point) -> Point:
        if P is None:
            return None
        X, Y = P
        A, B, u = self.integral_short_model()
        xs, ys = to_q(X) / u ** 2, to_q(Y) / u ** 3
        x = (xs - 3 * self.b2) / 36
        y = (ys / 108 - self.a1 * x - self.a3) / 2
        return x, y

    # -- group law
    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x ** 3 + a2 * x * x + a4 * x + a6

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = P
        return x, -y - self.a1 * x - self.a3

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return x3, y3

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R: Point = None
        while n:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    def order(self, P: Point, limit: int = 16) -> Optional[int]:
        """Order of P if at most ``limit``, else None."""
        Q = P
        for k in range(1, limit + 1):
            if Q is None:
                return k
            Q = self.add(Q, P)
        return None

    # -- reduction
    def has_good_reduction(self, p: int) -> bool:
        if any(a.denominator % p == 0 for a in self.ainvs):
            return False
        return self.disc.numerator % p != 0


def _factor_small(n: int) -> List[Tuple[int, int]]:
    if n > 10 ** 6:
        from sympy import factorint

        return sorted(factorint(n).items())
    out = []
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        if e:
            out.append((f, e))
        f += 1
    if n > 1:
        out.append((n, 1))
    return out


def invariants(E: EllCurveQ) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    c4, c6, disc = E.c4, E.c6, E.disc
    assert 1728 * disc == c4 ** 3 - c6 ** 2
    return c4, c6, disc, E.j


def quadratic_twist(E: EllCurveQ, d: int) -> EllCurveQ:
    """Twist by Q(sqrt d): y^2 = x^3 + A d^2 x + B d^3 from the short model of E."""
    d = squarefree_part(int(d))
    if (E.a1, E.a2, E.a3) == (0, 0, 0):
        A, B = E.a4, E.a6
    else:
        A, B = E.short_model()
    return EllCurveQ.short(A * d * d, B * d ** 3)


# ---------------------------------------------------------------------------
# point counting over F_p


def _reduce(c: Fraction, p: int) -> int:
    return c.numerator * pow(c.denominator, -1, p) % p


def count_points(E: EllCurveQ, p: int) -> int:
    """#E(F_p) for odd p of good reduction, via (2y + a1x + a3)^2 = 4x^3 + b2x^2 + 2b4x + b6."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    if not E.has_good_reduction(p):
        raise BadReductionError(f"bad reduction (or nonintegral model) at p = {p}")
    b2, b4, b6 = (_reduce(c, p) for c in (E.b2, E.b4, E.b6))
    x = np.arange(p, dtype=np.int64)
    f = (4 * x + b2) % p
    f = (f * x + 2 * b4) % p
    f = (f * x + b6) % p
    chi = np.full(p, -1, dtype=np.int64)
    chi[(x * x) % p] = 1
    chi[0] = 0
    return int(p + 1 + chi[f].sum())


def count_points_naive(E: EllCurveQ, p: int) -> int:
    """#E(F_p) by scanning all (x, y) on the given long model."""
    if not E.has_good_reduction(p):
        raise BadReductionError(f"bad reduction (or nonintegral model) at p = {p}")
    a1, a2, a3, a4, a6 = (_reduce(c, p) for c in E.ainvs)
    n = 1
    for x in range(p):
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


def a_p(E: EllCurveQ, p: int) -> int:
    ap = p + 1 - count_points(E, p)
    assert ap * ap <= 4 * p, f"Hasse bound violated at p = {p}"
    return ap


def good_primes(E: EllCurveQ, bound: int, start: int = 3) -> List[int]:
    return [p for p in primes_up_to(bound) if p >= start and p != 2 and E.has_good_reduction(p)]


# ---------------------------------------------------------------------------
# torsion


def torsion_bound(E: EllCurveQ, min_primes: int = 10, p_max: int = 200) -> int:
    """gcd of #E(F_p) over good odd primes p <= p_max (at least ``min_primes`` of them)."""
    ps = good_primes(E, p_max)
    bound = p_max
    while len(ps) < min_primes:
        bound *= 2
        ps = good_primes(E, bound)
    g = 0
    for p in ps:
        g = math.gcd(g, count_points(E, p))
    return g


def _square_divisors(n: int) -> List[int]:
    """All y > 0 with y^2 | n."""
    from sympy import factorint

    ys = [1]
    for p, e in factorint(abs(n)).items():
        ys = [y * p ** k for y in ys for k in range(e // 2 + 1)]
    return sorted(ys)


def torsion_points(E: EllCurveQ) -> List[Point]:
    """All rational torsion points (None = infinity), sorted with infinity first.

    The group order is bounded by reduction mod good primes; candidates come from the
    Lutz-Nagell conditions on an integral short model, and each candidate's order is
    verified by exact addition.
    """
    m = torsion_bound(E)
    if m == 1:
        return [None]
    A, B, _ = E.integral_short_model()
    cubic = UniPoly([B, A, 0, 1])
    D = 4 * A ** 3 + 27 * B ** 2
    found = {None}
    for y in [0] + _square_divisors(D):
        for x in rational_roots(cubic - y * y):
            if x.denominator != 1:
                continue
            for yy in {Fraction(y), Fraction(-y)}:
                P = E.from_short((x, yy))
                k = E.order(P, limit=m)
                if k is not None and m % k == 0:
                    found.add(P)
    pts = sorted((p for p in found if p is not None))
    return [None] + pts
