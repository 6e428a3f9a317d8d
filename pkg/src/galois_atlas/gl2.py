"""Subgroups of GL2(Z/N): closure, level, index, fiber products and the genus of X_H.

Matrices are 4-tuples ``(a, b, c, d)`` standing for [[a, b], [c, d]] with entries
reduced mod N.  Subgroups keep their full element set; every group handled here is
small (the largest ambient ever enumerated is GL2(Z/9) of order 3888).
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

Mat = Tuple[int, int, int, int]

S_MAT: Mat = (0, -1, 1, 0)
T_MAT: Mat = (1, 1, 0, 1)
U_MAT: Mat = (0, -1, 1, -1)


class GroupError(ValueError):
    pass


def mat_mul(A: Mat, B: Mat, N: int) -> Mat:
    a, b, c, d = A
    e, f, g, h = B
    return ((a * e + b * g) % N, (a * f + b * h) % N, (c * e + d * g) % N, (c * f + d * h) % N)


def mat_det(A: Mat, N: int) -> int:
    return (A[0] * A[3] - A[1] * A[2]) % N


def mat_inv(A: Mat, N: int) -> Mat:
    di = pow(mat_det(A, N), -1, N)
    a, b, c, d = A
    return ((d * di) % N, (-b * di) % N, (-c * di) % N, (a * di) % N)


def mat_reduce(A: Mat, M: int) -> Mat:
    return tuple(x % M for x in A)  # type: ignore[return-value]


def identity(N: int) -> Mat:
    return mat_reduce((1, 0, 0, 1), N)


def is_unit(x: int, N: int) -> bool:
    return math.gcd(x, N) == 1


def prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def gl2_order(N: int) -> int:
    """|GL2(Z/N)| = N^4 * prod over p | N of (1 - 1/p)(1 - 1/p^2)."""
    order = N ** 4
    for p in prime_factors(N):
        order = order // (p * p * p) * (p - 1) * (p * p - 1)
    return order


def unit_group_generators(N: int) -> List[int]:
    units = [u for u in range(1, N) if is_unit(u, N)] or [0]
    gens: List[int] = []
    span = {1 % N}
    for u in units:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % N
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    return gens


def gl2_generators(N: int) -> List[Mat]:
    """S, T and diag(u, 1) for generators u of (Z/N)^x."""
    gens = [mat_reduce(S_MAT, N), mat_reduce(T_MAT, N)]
    gens += [mat_reduce((u, 0, 0, 1), N) for u in unit_group_generators(N)]
    return gens


def gl2_elements(N: int) -> List[Mat]:
    """All of GL2(Z/N) in row-major lexicographic order."""
    rng = range(N)
    return [(a, b, c, d) for a in rng for b in rng for c in rng for d in rng
            if is_unit(a * d - b * c, N)]


def _closure_elements(gens: Sequence[Mat], N: int) -> FrozenSet[Mat]:
    I = identity(N)
    seen = {I}
    queue = deque([I])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(x, g, N)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def closure(gens: Iterable[Sequence[int]], N: int) -> "GL2Subgroup":
    """Subgroup of GL2(Z/N) generated by ``gens`` (breadth-first closure)."""
    return GL2Subgroup(N, gens)


def _crt_pair(N1: int, N2: int) -> Tuple[int, int]:
    e1 = N2 * pow(N2, -1, N1) if N1 > 1 else 0
    e2 = N1 * pow(N1, -1, N2) if N2 > 1 else 0
    return e1, e2


@dataclass(frozen=True)
class GenusData:
    genus: int
    index_psl2: int
    e2: int
    e3: int
    cusps: int
    cusp_widths: Tuple[int, ...]


@dataclass(frozen=True)
class GroupInvariants:
    level: int
    index: int
    genus: int
    det_surjective: bool
    contains_minus_I: bool
    cusp_count: int


class GL2Subgroup:
    def __init__(self, N: int, gens: Iterable[Sequence[int]],
                 elements: Optional[Iterable[Mat]] = None):
        if N < 1:
            raise GroupError("modulus must be positive")
        self.N = N
        self.gens: List[Mat] = []
        for g in gens:
            if len(g) != 4:
                raise GroupError(f"matrix must have 4 entries: {g!r}")
            m = mat_reduce(tuple(int(x) for x in g), N)
            if not is_unit(mat_det(m, N), N):
                raise GroupError(f"generator {list(g)} is not invertible mod {N}")
            self.gens.append(m)
        if elements is None:
            self.elements = _closure_elements(self.gens, N)
        else:
            self.elements = frozenset(mat_reduce(e, N) for e in elements)

    # -- basic data
    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return gl2_order(self.N) // self.order

    def __contains__(self, A) -> bool:
        return mat_reduce(tuple(A), self.N) in self.elements

    def __eq__(self, other) -> bool:
        return isinstance(other, GL2Subgroup) and self.N == other.N and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.N, self.elements))

    def __repr__(self) -> str:
        return f"GL2Subgroup(N={self.N}, order={self.order}, index={self.index})"

    # -- predicates
    def det_surjective(self) -> bool:
        units = {u for u in range(self.N) if is_unit(u, self.N)} or {0}
        return {mat_det(A, self.N) for A in self.elements} == units

    def contains_minus_I(self) -> bool:
        return mat_reduce((-1, 0, 0, -1), self.N) in self.elements

    def is_full(self) -> bool:
        return self.order == gl2_order(self.N)

    # -- constructions
    def with_minus_I(self) -> "GL2Subgroup":
        if self.contains_minus_I():
            return self
        m = mat_reduce((-1, 0, 0, -1), self.N)
        return GL2Subgroup(self.N, self.gens + [m],
                           elements=self.elements | {mat_mul(m, x, self.N) for x in self.elements})

    def reduce(self, M: int) -> "GL2Subgroup":
        if self.N % M:
            raise GroupError(f"{M} does not divide {self.N}")
        return GL2Subgroup(M, [mat_reduce(g, M) for g in self.gens],
                           elements={mat_reduce(e, M) for e in self.elements})

    def preimage(self, M: int) -> "GL2Subgroup":
        """Full preimage in GL2(Z/M) for a multiple M of N."""
        if M % self.N:
            raise GroupError(f"{self.N} does not divide {M}")
        k = M // self.N
        N = self.N
        lifts = []
        steps = [N * i for i in range(k)]
        for h in self.elements:
            for da in steps:
                for db in steps:
                    for dc in steps:
                        for dd in steps:
                            A = ((h[0] + da) % M, (h[1] + db) % M, (h[2] + dc) % M, (h[3] + dd) % M)
                            if is_unit(mat_det(A, M), M):
                                lifts.append(A)
        elements = frozenset(lifts)
        return GL2Subgroup(M, greedy_generators(elements, M), elements=elements)

    def conjugate(self, g: Sequence[int]) -> "GL2Subgroup":
        """g H g^-1."""
        g = mat_reduce(tuple(g), self.N)
        gi = mat_inv(g, self.N)
        N = self.N
        return GL2Subgroup(N, [mat_mul(mat_mul(g, x, N), gi, N) for x in self.gens],
                           elements={mat_mul(mat_mul(g, x, N), gi, N) for x in self.elements})

    def is_subgroup_of(self, other: "GL2Subgroup") -> bool:
        return self.N == other.N and self.elements <= other.elements

    # -- invariants
    def level(self) -> int:
        """Smallest M | N such that this group is the full preimage of its reduction mod M."""
        big = gl2_order(self.N)
        for M in divisors(self.N):
            red = {mat_reduce(e, M) for e in self.elements}
            if self.order * gl2_order(M) == len(red) * big:
                return M
        return self.N  # unreachable: M = N always qualifies

    def genus_data(self) -> GenusData:
        """Genus of X_H via the action of S, T, ST on cosets of (+-H) n SL2 in SL2(Z/N)."""
        if not self.det_surjective():
            raise GroupError("genus requires surjective determinant")
        N = self.N
        H = self.with_minus_I()
        sl = [h for h in H.elements if mat_det(h, N) == 1 % N]

        def key(g: Mat) -> Mat:
            return min(mat_mul(h, g, N) for h in sl)

        s, t, u = mat_reduce(S_MAT, N), mat_reduce(T_MAT, N), mat_reduce(U_MAT, N)
        start = key(identity(N))
        index = {start: 0}
        reps = [start]
        act_s: List[int] = []
        act_t: List[int] = []
        act_u: List[int] = []
        i = 0
        while i < len(reps):
            g = reps[i]
            for mat, table in ((s, act_s), (t, act_t), (u, act_u)):
                k = key(mat_mul(g, mat, N))
                if k not in index:
                    index[k] = len(reps)
                    reps.append(k)
                table.append(index[k])
            i += 1
        psi = len(reps)
        e2 = sum(1 for c in range(psi) if act_s[c] == c)
        e3 = sum(1 for c in range(psi) if act_u[c] == c)
        widths = []
        seen = [False] * psi
        for c in range(psi):
            if seen[c]:
                continue
            w, x = 0, c
            while not seen[x]:
                seen[x] = True
                x = act_t[x]
                w += 1
            widths.append(w)
        twelve_g = 12 + psi - 3 * e2 - 4 * e3 - 6 * len(widths)
        if twelve_g % 12 or twelve_g < 0:
            raise ArithmeticError(
                f"genus formula gave non-integral value {twelve_g}/12 (psi={psi}, e2={e2}, e3={e3}, c={len(widths)})")
        return GenusData(twelve_g // 12, psi, e2, e3, len(widths), tuple(sorted(widths)))

    def genus(self) -> int:
        return self.genus_data().genus

    def invariants(self) -> GroupInvariants:
        return GroupInvariants(
            level=self.level(),
            index=self.index,
            genus=self.genus(),
            det_surjective=self.det_surjective(),
            contains_minus_I=self.contains_minus_I(),
            cusp_count=self.genus_data().cusps,
        )

    def is_maximal_in_ambient(self) -> bool:
        """True iff adjoining any g outside H generates all of GL2(Z/N).

        One closure per H-double coset.
        """
        N = self.N
        if self.is_full():
            return False
        full = gl2_order(N)
        covered = set(self.elements)
        elts = list(self.elements)
        for g in gl2_elements(N):
            if g in covered:
                continue
            if GL2Subgroup(N, self.gens + [g]).order != full:
                return False
            for h1 in elts:
                h1g = mat_mul(h1, g, N)
                for h2 in elts:
                    covered.add(mat_mul(h1g, h2, N))
        return True

    # -- text form
    def serialize(self) -> str:
        return format_generators(self.N, self.gens)

    @classmethod
    def parse(cls, text: str) -> "GL2Subgroup":
        N, gens = parse_generators(text)
        return cls(N, gens)


def greedy_generators(elements: Iterable[Mat], N: int) -> List[Mat]:
    """A (not necessarily minimal) generating list, picking elements in sorted order."""
    target = frozenset(elements)
    gens: List[Mat] = []
    span = frozenset({identity(N)})
    # prefer elements of large order so few are needed
    ordered = sorted(target, key=lambda m: (-_element_order(m, N), m))
    for m in ordered:
        if len(span) == len(target):
            break
        if m in span:
            continue
        gens.append(m)
        span = _closure_elements(gens, N)
    return gens


def _element_order(m: Mat, N: int) -> int:
    I = identity(N)
    x, k = m, 1
    while x != I:
        x = mat_mul(x, m, N)
        k += 1
    return k


def fiber_product(H1: GL2Subgroup, H2: GL2Subgroup) -> GL2Subgroup:
    """Matrices mod N1*N2 whose reductions lie in H1 and H2; moduli must be coprime."""
    N1, N2 = H1.N, H2.N
    if math.gcd(N1, N2) != 1:
        raise GroupError(f"fiber product needs coprime moduli, got {N1} and {N2}")
    N = N1 * N2
    e1, e2 = _crt_pair(N1, N2)

    def crt(A: Mat, B: Mat) -> Mat:
        return tuple((a * e1 + b * e2) % N for a, b in zip(A, B))  # type: ignore[return-value]

    I1, I2 = identity(N1), identity(N2)
    gens = [crt(g, I2) for g in H1.gens] + [crt(I1, h) for h in H2.gens]
    elements = {crt(a, b) for a in H1.elements for b in H2.elements}
    return GL2Subgroup(N, gens, elements=elements)


# ---------------------------------------------------------------------------
# standard subgroups


def full_group(N: int) -> GL2Subgroup:
    return GL2Subgroup(N, gl2_generators(N))


def borel(N: int) -> GL2Subgroup:
    """Upper-triangular matrices mod N."""
    gens = [(1, 1, 0, 1)]
    for u in unit_group_generators(N):
        gens += [(u, 0, 0, 1), (1, 0, 0, u)]
    return GL2Subgroup(N, gens)


def nonresidue(p: int) -> int:
    return next(e for e in range(2, p) if pow(e, (p - 1) // 2, p) == p - 1)


def split_cartan_normalizer(p: int) -> GL2Subgroup:
    gens: List[Mat] = [(0, 1, 1, 0)]
    for u in unit_group_generators(p):
        gens += [(u, 0, 0, 1), (1, 0, 0, u)]
    return GL2Subgroup(p, gens)


def nonsplit_cartan(N: int, normalizer: bool = False) -> GL2Subgroup:
    """Units of a quadratic order in which the prime of N is inert, acting on itself.

    Odd prime powers use [[a, b*eps], [b, a]] with eps a nonresidue; powers of 2 use
    multiplication by a + b*w with w^2 + w + 1 = 0 in the basis (1, w).
    """
    ps = prime_factors(N)
    if len(ps) != 1:
        raise GroupError("nonsplit Cartan needs a prime-power modulus")
    p = ps[0]
    rng = range(N)
    if p == 2:
        elems = [(a, -b % N, b, (a - b) % N) for a in rng for b in rng]
        conj = (1, N - 1, 0, N - 1)
    else:
        eps = nonresidue(p)
        elems = [(a, b * eps % N, b, a) for a in rng for b in rng]
        conj = (1, 0, 0, N - 1)
    elems = [e for e in elems if is_unit(mat_det(e, N), N)]
    gens = greedy_generators(elems, N)
    if normalizer:
        gens = gens + [conj]
        return GL2Subgroup(N, gens)
    return GL2Subgroup(N, gens, elements=elems)


def determinant_character_subgroup(N: int, char) -> GL2Subgroup:
    """{g in GL2(Z/N) : sign(g mod 2) = char(det g)} for a +-1 valued character of (Z/N)^x.

    ``sign`` is the sign of the permutation action of GL2(Z/2) = S3 on the three
    nonzero vectors of F2^2.
    """
    def sign(g: Mat) -> int:
        a, b, c, d = (x % 2 for x in g)
        # elements of order 2 in GL2(F2) are the transpositions
        return -1 if _element_order((a, b, c, d), 2) == 2 else 1

    elems = [g for g in gl2_elements(N) if sign(g) == char(mat_det(g, N))]
    return GL2Subgroup(N, greedy_generators(elems, N), elements=elems)


# ---------------------------------------------------------------------------
# text format  N:[[a,b,c,d],...]

_GEN_RE = re.compile(r"^\s*(\d+)\s*:\s*\[(.*)\]\s*$")


def format_generators(N: int, gens: Sequence[Mat]) -> str:
    inner = ",".join("[" + ",".join(str(x) for x in g) + "]" for g in gens)
    return f"{N}:[{inner}]"


def parse_generators(text: str) -> Tuple[int, List[Mat]]:
    m = _GEN_RE.match(text)
    if not m:
        raise ValueError(f"bad generator record: {text!r}")
    N = int(m.group(1))
    body = m.group(2).strip()
    gens: List[Mat] = []
    for item in re.findall(r"\[([^\[\]]*)\]", body):
        vals = [int(v) for v in item.split(",")]
        if len(vals) != 4:
            raise ValueError(f"matrix needs 4 entries: [{item}]")
        gens.append(tuple(v % N for v in vals))  # type: ignore[arg-type]
    return N, gens
