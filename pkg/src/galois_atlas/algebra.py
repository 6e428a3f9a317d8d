"""Exact rational arithmetic: univariate/bivariate polynomials and rational functions over Q.

Scalars are :class:`fractions.Fraction` throughout.  Nothing in this module touches
floating point.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

Q = Fraction


class _Infinity:
    """The point at infinity of P^1(Q)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ProjQ = Union[Fraction, _Infinity]


def to_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def format_q(x: ProjQ) -> str:
    if x is INF:
        return "inf"
    x = to_q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_q(s: str) -> ProjQ:
    s = s.strip()
    if s.lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {s!r}") from exc


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial over Q, coefficients lowest degree first.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # -- constructors
    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def var(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_q(r), 1])
        return p

    # -- basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    # -- arithmetic
    @staticmethod
    def _coerce(other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([to_q(other)])

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result, base = UniPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other) -> Tuple["UniPoly", "UniPoly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            c = rem[k + dq] / lc
            quo[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return UniPoly(quo), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lc = self.lc
        return UniPoly(c / lc for c in self.coeffs)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def shift(self, k: int) -> "UniPoly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs)

    def valuation_at_zero(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial")

    def reverse(self, n: Optional[int] = None) -> "UniPoly":
        """t^n * p(1/t); n defaults to the degree."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        cs = list(self.coeffs) + [Fraction(0)] * (n - self.degree)
        return UniPoly(reversed(cs))

    # -- integer views
    def integer_primitive(self) -> Tuple[Fraction, List[int]]:
        """Return (scale, ints) with self = scale * sum(ints[i] t^i), gcd(ints)=1, lc > 0."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        den = 1
        for c in self.coeffs:
            den = _lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [v // g for v in ints]

    def to_str(self, var: str = "t") -> str:
        terms = [((i,), c) for i, c in enumerate(self.coeffs) if c]
        return _format_terms(terms[::-1], (var,))


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Reduced quotient num/den of univariate polynomials with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = UniPoly._coerce(num)
        den = UniPoly([1]) if den is None else UniPoly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = num.gcd(den) if not num.is_zero() else den.monic()
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        self.num = UniPoly(c / lc for c in num.coeffs)
        self.den = UniPoly(c / lc for c in den.coeffs)

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "RatFunc":
        return _parse_expr(text, (var,), _RatFuncAlgebra())

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    @property
    def degree(self) -> int:
        """Degree as a map P^1 -> P^1."""
        return max(self.num.degree, self.den.degree)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def _coerce(self, other) -> "RatFunc":
        return other if isinstance(other, RatFunc) else RatFunc(other)

    def __add__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) / self

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return RatFunc(1) / (self ** (-e))
        return RatFunc(self.num ** e, self.den ** e)

    def __call__(self, t: ProjQ) -> ProjQ:
        return eval_ratfunc(self, t)

    def poles(self) -> List[Tuple[UniPoly, int]]:
        """Squarefree pieces of the denominator with multiplicity."""
        return squarefree_decomposition(self.den)

    def to_str(self, var: str = "t") -> str:
        n = self.num.to_str(var)
        if self.den == UniPoly([1]):
            return n
        return f"({n})/({self.den.to_str(var)})"


def eval_ratfunc(f: RatFunc, t: ProjQ) -> ProjQ:
    """Evaluate f on P^1(Q); poles map to INF."""
    if t is INF:
        dn, dd = f.num.degree, f.den.degree
        if dn > dd:
            return INF
        if dn < dd:
            return Fraction(0)
        return f.num.lc / f.den.lc
    t = to_q(t)
    d = f.den(t)
    if d == 0:
        return INF
    return f.num(t) / d


# ---------------------------------------------------------------------------
# bivariate polynomials


class BiPoly:
    """Sparse polynomial in x, y: mapping (i, j) -> coefficient of x^i y^j."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[Tuple[int, int], object]] = None):
        clean: Dict[Tuple[int, int], Fraction] = {}
        for k, c in (terms or {}).items():
            c = to_q(c)
            if c:
                clean[(int(k[0]), int(k[1]))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def from_uni(cls, p: UniPoly, which: str) -> "BiPoly":
        if which == "x":
            return cls({(i, 0): c for i, c in enumerate(p.coeffs)})
        return cls({(0, i): c for i, c in enumerate(p.coeffs)})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] = ("x", "y")) -> "BiPoly":
        return _parse_expr(text, tuple(variables), _BiPolyAlgebra())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"BiPoly({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    @staticmethod
    def _coerce(other) -> "BiPoly":
        return other if isinstance(other, BiPoly) else BiPoly({(0, 0): to_q(other)})

    def __add__(self, other) -> "BiPoly":
        o = self._coerce(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "BiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BiPoly":
        o = self._coerce(other)
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BiPoly":
        result, base = BiPoly({(0, 0): 1}), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, which: str) -> int:
        idx = 0 if which == "x" else 1
        return max((k[idx] for k in self.terms), default=-1)

    def __call__(self, x, y) -> Fraction:
        x, y = to_q(x), to_q(y)
        return sum((c * x ** i * y ** j for (i, j), c in self.terms.items()), Fraction(0))

    def homogeneous_eval(self, X, Y, Z) -> Fraction:
        """Evaluate the homogenization (to total degree) at (X:Y:Z)."""
        d = self.total_degree
        X, Y, Z = to_q(X), to_q(Y), to_q(Z)
        return sum((c * X ** i * Y ** j * Z ** (d - i - j) for (i, j), c in self.terms.items()),
                   Fraction(0))

    def homogeneous_gradient(self, X, Y, Z) -> Tuple[Fraction, Fraction, Fraction]:
        d = self.total_degree
        X, Y, Z = to_q(X), to_q(Y), to_q(Z)
        gx = gy = gz = Fraction(0)
        for (i, j), c in self.terms.items():
            k = d - i - j
            if i:
                gx += c * i * X ** (i - 1) * Y ** j * Z ** k
            if j:
                gy += c * j * X ** i * Y ** (j - 1) * Z ** k
            if k:
                gz += c * k * X ** i * Y ** j * Z ** (k - 1)
        return gx, gy, gz

    def in_y_at(self, x) -> UniPoly:
        """Specialize x, giving a polynomial in y."""
        x = to_q(x)
        cs: Dict[int, Fraction] = {}
        for (i, j), c in self.terms.items():
            cs[j] = cs.get(j, Fraction(0)) + c * x ** i
        n = max(cs, default=-1)
        return UniPoly(cs.get(k, 0) for k in range(n + 1))

    def coeffs_in_y(self) -> List[UniPoly]:
        """Coefficients of y^0, y^1, ... as polynomials in x."""
        dy = self.degree_in("y")
        rows: List[Dict[int, Fraction]] = [dict() for _ in range(dy + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        return [UniPoly(r.get(k, 0) for k in range(max(r, default=-1) + 1)) for r in rows]

    def top_form(self) -> Dict[Tuple[int, int], Fraction]:
        d = self.total_degree
        return {k: c for k, c in self.terms.items() if k[0] + k[1] == d}

    def normalized(self) -> "BiPoly":
        """Integer coefficients with content 1, lex-leading coefficient (x before y) positive."""
        if self.is_zero():
            return self
        den = 1
        for c in self.terms.values():
            den = _lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, int(c * den))
        lead = max(self.terms)
        if self.terms[lead] < 0:
            g = -g
        return BiPoly({k: c * den / g for k, c in self.terms.items()})

    def to_str(self) -> str:
        items = sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)
        return _format_terms(items, ("x", "y"))


def _format_terms(items, variables: Sequence[str]) -> str:
    if not items:
        return "0"
    parts: List[str] = []
    for exps, c in items:
        mono = []
        for v, e in zip(variables, exps):
            if e == 1:
                mono.append(v)
            elif e > 1:
                mono.append(f"{v}^{e}")
        mono_s = "*".join(mono)
        a = abs(c)
        if mono_s:
            body = mono_s if a == 1 else f"{format_q(a)}*{mono_s}"
        else:
            body = format_q(a)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# expression parser (shared by univariate rational functions and bivariate polynomials)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise ValueError(f"unexpected character {text[bad]!r} at column {bad + 1}")
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(("op", op, m.start(3)))
        pos = m.end()
    return out


class _RatFuncAlgebra:
    def const(self, c):
        return RatFunc(UniPoly([c]))

    def var(self, idx):
        return RatFunc(UniPoly.var())

    def div(self, a, b):
        return a / b

    def power(self, a, e):
        return a ** e


class _BiPolyAlgebra:
    def const(self, c):
        return BiPoly.const(c)

    def var(self, idx):
        return BiPoly.x() if idx == 0 else BiPoly.y()

    def div(self, a, b):
        if b.is_zero() or set(b.terms) != {(0, 0)}:
            raise ValueError("polynomial expressions may only divide by nonzero constants")
        return a * (1 / b.terms[(0, 0)])

    def power(self, a, e):
        if e < 0:
            raise ValueError("negative exponent in polynomial expression")
        return a ** e


def _parse_expr(text: str, variables: Tuple[str, ...], alg):
    toks = []
    for tok in _tokenize(text):
        if tok[0] == "name" and tok[1] not in variables and all(ch in variables for ch in tok[1]):
            # juxtaposed single-letter variables such as xy^5
            toks.extend(("name", ch, tok[2] + i) for i, ch in enumerate(tok[1]))
        else:
            toks.append(tok)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of expression")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"unexpected token {tok[1]!r} at column {tok[2] + 1}")
        pos += 1
        return tok

    def expr():
        tok = peek()
        sign = 1
        if tok and tok[0] == "op" and tok[1] in "+-":
            take()
            sign = -1 if tok[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while True:
            tok = peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                take()
                rhs = term()
                acc = acc + rhs if tok[1] == "+" else acc - rhs
            else:
                return acc

    def term():
        acc = factor()
        while True:
            tok = peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                take()
                rhs = factor()
                acc = acc * rhs if tok[1] == "*" else alg.div(acc, rhs)
            elif tok and (tok[0] in ("name", "num") or tok[1] == "("):
                acc = acc * factor()  # implicit multiplication, e.g. 4t^3 or 2(t+1)
            else:
                return acc

    def factor():
        base = atom()
        tok = peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            take()
            neg = False
            t2 = peek()
            if t2 and t2[0] == "op" and t2[1] == "-":
                take()
                neg = True
            if peek() and peek()[1] == "(":
                take()
                e = int(take("num")[1])
                take("op", ")")
            else:
                e = int(take("num")[1])
            return alg.power(base, -e if neg else e)
        return base

    def atom():
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of expression")
        if tok[0] == "num":
            take()
            return alg.const(int(tok[1]))
        if tok[0] == "name":
            take()
            if tok[1] in variables:
                return alg.var(variables.index(tok[1]))
            raise ValueError(f"unknown variable {tok[1]!r} at column {tok[2] + 1}")
        if tok[1] == "(":
            take()
            v = expr()
            take("op", ")")
            return v
        if tok[1] == "-":
            take()
            return -factor()
        raise ValueError(f"unexpected token {tok[1]!r} at column {tok[2] + 1}")

    if not toks:
        raise ValueError("empty expression")
    result = expr()
    if pos != len(toks):
        tok = toks[pos]
        raise ValueError(f"unexpected token {tok[1]!r} at column {tok[2] + 1}")
    return result


def parse_unipoly(text: str, var: str = "t") -> UniPoly:
    f = RatFunc.parse(text, var)
    if f.den != UniPoly([1]):
        raise ValueError(f"not a polynomial: {text!r}")
    return f.num


# ---------------------------------------------------------------------------
# root finding and factorization helpers


def squarefree_decomposition(p: UniPoly) -> List[Tuple[UniPoly, int]]:
    """Yun's algorithm: p = lc * prod(f_i^i) with f_i squarefree, coprime, monic."""
    if p.is_zero():
        raise ValueError("identically zero")
    out: List[Tuple[UniPoly, int]] = []
    if p.degree == 0:
        return out
    f = p.monic()
    d = f.derivative()
    a = f.gcd(d)
    b = f.exact_div(a)
    c = d.exact_div(a)
    i = 1
    while b.degree > 0:
        dd = c - b.derivative()
        g = b.gcd(dd)
        if g.degree > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = dd.exact_div(g)
        i += 1
    return out


def _small_primes() -> Iterator[int]:
    p = 3
    while True:
        if all(p % q for q in range(3, int(p ** 0.5) + 1, 2)):
            yield p
        p += 2


def _poly_mod(ints: Sequence[int], p: int) -> List[int]:
    out = [c % p for c in ints]
    while out and out[-1] == 0:
        out.pop()
    return out


def _divmod_mod(a: List[int], b: List[int], p: int) -> Tuple[List[int], List[int]]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[k + i] = (a[k + i] - c * bc) % p
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _gcd_degree_mod(a: List[int], b: List[int], p: int) -> int:
    while b:
        a, b = b, _divmod_mod(a, b, p)[1]
    return len(a) - 1


def _eval_int(ints: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(ints):
        acc = (acc * x + c) % m
    return acc


def _rational_reconstruct(r: int, m: int, nbound: int, dbound: int) -> Optional[Tuple[int, int]]:
    """Find n/d with n = d*r mod m, |n| <= nbound, 0 < d <= dbound (unique when 2*nbound*dbound < m)."""
    r0, r1 = m, r % m
    t0, t1 = 0, 1
    while r1 > nbound:
        qq = r0 // r1
        r0, r1 = r1, r0 - qq * r1
        t0, t1 = t1, t0 - qq * t1
    if t1 == 0 or abs(t1) > dbound:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    if (r1 - t1 * r) % m:
        return None
    return r1, t1


def _squarefree_prime(p: UniPoly, tries: Optional[int] = 12) -> Optional[int]:
    """A prime q not dividing the leading coefficient with p squarefree mod q."""
    if p.degree <= 1:
        return 2
    _, ints = p.integer_primitive()
    deriv = [i * c for i, c in enumerate(ints)][1:]
    for n, q in enumerate(_small_primes()):
        if tries is not None and n >= tries:
            return None
        if ints[-1] % q == 0:
            continue
        if _gcd_degree_mod(_poly_mod(ints, q), _poly_mod(deriv, q), q) == 0:
            return q
    return None


def rational_roots(p: UniPoly) -> set:
    """All rational roots of p, each once.

    The integer primitive part is made squarefree, the root 0 is stripped, then simple
    roots modulo a prime of good reduction are lifted p-adically and rationally
    reconstructed; every candidate is checked by exact evaluation.
    """
    if p.is_zero():
        raise ValueError("identically zero")
    roots: set = set()
    if p.degree <= 0:
        return roots
    if p.coeffs[0] == 0:
        roots.add(Fraction(0))
        p = UniPoly(p.coeffs[p.valuation_at_zero():])
    if p.degree <= 0:
        return roots
    q = _squarefree_prime(p)
    if q is None:
        # not squarefree modulo small primes: pass to the squarefree part over Q
        p = p.exact_div(p.gcd(p.derivative()))
        q = _squarefree_prime(p, tries=None)
    sqf = p
    if sqf.degree == 1:
        roots.add(-sqf.coeffs[0] / sqf.coeffs[1])
        return roots
    _, ints = sqf.integer_primitive()
    a0, an = abs(ints[0]), abs(ints[-1])
    deriv = [i * c for i, c in enumerate(ints)][1:]
    # roots modulo q, then Newton lifting to q^k > 2 * a0 * an
    bound = 2 * a0 * an
    base_roots = [r for r in range(q) if _eval_int(ints, r, q) == 0]
    m = q
    lifted = base_roots
    while m <= bound:
        m2 = m * m
        nxt = []
        for r in lifted:
            fv = _eval_int(ints, r, m2)
            dv = _eval_int(deriv, r, m2)
            nxt.append((r - fv * pow(dv, -1, m2)) % m2)
        lifted, m = nxt, m2
    for r in lifted:
        rec = _rational_reconstruct(r, m, a0, an)
        if rec is None:
            continue
        cand = Fraction(rec[0], rec[1])
        if sqf(cand) == 0:
            roots.add(cand)
    return roots


def rational_roots_bruteforce(p: UniPoly) -> set:
    """Rational root theorem by divisor enumeration; only usable for modest coefficients."""
    if p.is_zero():
        raise ValueError("identically zero")
    roots: set = set()
    if p.degree <= 0:
        return roots
    if p.coeffs[0] == 0:
        roots.add(Fraction(0))
        p = UniPoly(p.coeffs[p.valuation_at_zero():])
    if p.degree <= 0:
        return roots
    _, ints = p.integer_primitive()

    def divisors(n: int) -> List[int]:
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    for a in divisors(ints[0]):
        for b in divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * a, b)
                if p(r) == 0:
                    roots.add(r)
    return roots


def bipoly_from_jmap_difference(j1: RatFunc, j2: RatFunc) -> BiPoly:
    """Numerator of j1(x) - j2(y) with integer coefficients, content 1, sign normalized."""
    if j1.is_constant() or j2.is_constant():
        raise ValueError("j-maps must be nonconstant")
    n1 = BiPoly.from_uni(j1.num, "x")
    d1 = BiPoly.from_uni(j1.den, "x")
    n2 = BiPoly.from_uni(j2.num, "y")
    d2 = BiPoly.from_uni(j2.den, "y")
    return (n1 * d2 - n2 * d1).normalized()


def fiber_profile(f: RatFunc, value: ProjQ) -> List[int]:
    """Ramification indices (over Q-bar) of the points of P^1 mapping to value under f."""
    if value is INF:
        pieces = squarefree_decomposition(f.den) if f.den.degree > 0 else []
        extra = f.num.degree - f.den.degree
    else:
        g = f.num - f.den * to_q(value)
        pieces = squarefree_decomposition(g) if g.degree > 0 else []
        extra = f.degree - max(g.degree, 0)
    out: List[int] = []
    for piece, mult in pieces:
        out.extend([mult] * piece.degree)
    if extra > 0:
        out.append(extra)
    return sorted(out)
