"""Congruences: closure, kernels, ideals, maximal congruences, semifield tools.

A congruence on a finite structure is stored as a block labelling where each
element points at the least element of its block.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .poly import Polynomial, Ring, poly_add, poly_mul, substitute
from .scalars import FINF, Scalar, Semifield, cyclotomic, lexmax
from .structures import (
    FiniteStructure,
    StructureError,
    all_filters,
    from_tables,
    is_filter,
    principal_filter,
)


class CongruenceError(ValueError):
    pass


# -- union-find closure core ----------------------------------------------------

class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def labels(self) -> tuple[int, ...]:
        roots = [self.find(a) for a in range(len(self.parent))]
        least: dict[int, int] = {}
        for a, r in enumerate(roots):
            least.setdefault(r, a)
        return tuple(least[r] for r in roots)


def closure_core(n: int, ops: Sequence[Callable[[int], int | None]], pairs) -> UnionFind:
    """Smallest equivalence containing ``pairs`` and stable under every unary op.

    An op may return None (result outside a bounded carrier); that step is skipped.
    Every merged pair has its images queued, which suffices because the
    generated equivalence is compatible as soon as its generating pairs are.
    """
    uf = UnionFind(n)
    work = sorted(set((min(a, b), max(a, b)) for a, b in pairs if a != b))
    work.reverse()
    while work:
        a, b = work.pop()
        if not uf.union(a, b):
            continue
        for f in ops:
            fa, fb = f(a), f(b)
            if fa is None or fb is None or fa == fb:
                continue
            work.append((fa, fb))
    return uf


def structure_ops(A: FiniteStructure) -> list[Callable[[int], int]]:
    ops: list[Callable[[int], int]] = []
    for c in A.elements:
        row = A.add_table[c]
        ops.append(row.__getitem__)
    ops.append(A.neg_table.__getitem__)
    for lam in A.units:
        t = A.scalar_table[lam]
        if t != tuple(A.elements) and t != A.neg_table:
            ops.append(t.__getitem__)
    if A.mul_table is not None:
        P = A.mul_table
        for c in A.elements:
            ops.append(P[c].__getitem__)
            col = tuple(P[a][c] for a in A.elements)
            if col != P[c]:
                ops.append(col.__getitem__)
    return ops


# -- finite congruences -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Congruence:
    structure: FiniteStructure
    block: tuple[int, ...]
    generators: tuple[tuple[int, int], ...] = ()

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and self.structure is other.structure \
            and self.block == other.block

    def __hash__(self) -> int:
        return hash(self.block)

    def related(self, a, b) -> bool:
        A = self.structure
        return self.block[A.index(a)] == self.block[A.index(b)]

    __contains__ = lambda self, pair: self.related(*pair)  # noqa: E731

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for a, r in enumerate(self.block):
            out.setdefault(r, []).append(a)
        return list(out.values())

    def pairs(self) -> set[tuple[int, int]]:
        out = set()
        for blk in self.blocks():
            out.update(product(blk, blk))
        return out

    @property
    def size(self) -> int:
        return len(set(self.block))

    @property
    def is_full(self) -> bool:
        return self.size == 1

    @property
    def is_proper(self) -> bool:
        return not self.is_full

    @property
    def is_trivial(self) -> bool:
        return self.size == len(self.block)

    def kernel(self) -> frozenset[int]:
        z = self.block[self.structure.zero]
        return frozenset(a for a, r in enumerate(self.block) if r == z)

    def __le__(self, other: "Congruence") -> bool:
        return all(other.block[a] == other.block[r] for a, r in enumerate(self.block))

    def __lt__(self, other: "Congruence") -> bool:
        return self <= other and self != other

    def meet(self, other: "Congruence") -> "Congruence":
        """Pair-set intersection."""
        key = {}
        block = []
        for a in range(len(self.block)):
            k = (self.block[a], other.block[a])
            key.setdefault(k, a)
            block.append(key[k])
        return Congruence(self.structure, tuple(block))

    def join(self, other: "Congruence") -> "Congruence":
        A = self.structure
        pairs = [(a, r) for a, r in enumerate(self.block) if a != r]
        pairs += [(a, r) for a, r in enumerate(other.block) if a != r]
        return cong_closure(A, pairs)

    def describe(self) -> str:
        A = self.structure
        return " | ".join("{" + ", ".join(A.names[a] for a in blk) + "}" for blk in self.blocks())


def diagonal(A: FiniteStructure) -> Congruence:
    return Congruence(A, tuple(A.elements))


def full_congruence(A: FiniteStructure) -> Congruence:
    return Congruence(A, (0,) * A.size)


def from_partition(A: FiniteStructure, label: Sequence) -> Congruence:
    """Congruence from any block labelling (validated)."""
    first: dict = {}
    block = []
    for a, key in enumerate(label):
        first.setdefault(key, a)
        block.append(first[key])
    C = Congruence(A, tuple(block))
    w = compatibility_witness(C)
    if w is not None:
        raise CongruenceError(f"not a congruence: {w}")
    return C


def compatibility_witness(C: Congruence):
    A, blk = C.structure, C.block
    reps = {}
    for a, r in enumerate(blk):
        if a != r:
            reps[a] = r
    for a, r in reps.items():
        if blk[A.neg(a)] != blk[A.neg(r)]:
            return ("neg", A.names[a], A.names[r])
        for lam in A.units:
            if blk[A.act(lam, a)] != blk[A.act(lam, r)]:
                return ("scalar", A.names[a], A.names[r], str(lam))
        for c in A.elements:
            if blk[A.add(a, c)] != blk[A.add(r, c)]:
                return ("add", A.names[a], A.names[r], A.names[c])
            if A.is_algebra:
                if blk[A.mul(a, c)] != blk[A.mul(r, c)] or blk[A.mul(c, a)] != blk[A.mul(c, r)]:
                    return ("mul", A.names[a], A.names[r], A.names[c])
    return None


def is_congruence(C: Congruence) -> bool:
    return compatibility_witness(C) is None


def cong_closure(A: FiniteStructure, pairs: Iterable) -> Congruence:
    """Smallest congruence containing ``pairs`` (union-find plus worklist)."""
    gens = tuple((A.index(a), A.index(b)) for a, b in pairs)
    uf = closure_core(A.size, structure_ops(A), gens)
    return Congruence(A, uf.labels(), gens)


def naive_closure(A: FiniteStructure, pairs: Iterable) -> Congruence:
    """Relational fixpoint: close a boolean relation under every rule until stable."""
    n = A.size
    R = [[a == b for b in range(n)] for a in range(n)]
    for a, b in pairs:
        a, b = A.index(a), A.index(b)
        R[a][b] = R[b][a] = True
    changed = True
    while changed:
        changed = False
        new = []
        for a in range(n):
            for b in range(n):
                if not R[a][b]:
                    continue
                imgs = [(A.neg(a), A.neg(b)), (b, a)]
                imgs += [(A.act(lam, a), A.act(lam, b)) for lam in A.units]
                for c in range(n):
                    imgs.append((A.add(a, c), A.add(b, c)))
                    if A.is_algebra:
                        imgs.append((A.mul(a, c), A.mul(b, c)))
                        imgs.append((A.mul(c, a), A.mul(c, b)))
                    if R[b][c]:
                        imgs.append((a, c))
                new.extend(imgs)
        for x, y in new:
            if not R[x][y]:
                R[x][y] = True
                changed = True
    label = [min(b for b in range(n) if R[a][b]) for a in range(n)]
    return Congruence(A, tuple(label))


def quotient(C: Congruence) -> tuple[FiniteStructure, list[int]]:
    """``A/C`` with elements named by block representatives, and the quotient map."""
    A = C.structure
    reps = sorted(set(C.block))
    pos = {r: i for i, r in enumerate(reps)}
    q = [pos[C.block[a]] for a in A.elements]
    add = [[q[A.add(r, s)] for s in reps] for r in reps]
    neg = [q[A.neg(r)] for r in reps]
    scalar = {lam: [q[A.act(lam, r)] for r in reps] for lam in A.units}
    mul = None
    one = None
    if A.is_algebra:
        mul = [[q[A.mul(r, s)] for s in reps] for r in reps]
        one = q[A.one]
    names = [A.names[r] for r in reps]
    Q = from_tables(A.base, names, q[A.zero], add, neg, scalar=scalar, mul=mul, one=one,
                    label=f"{A.label}/C")
    return Q, q


# -- ideals, filters, kernels --------------------------------------------------------

@dataclass(frozen=True)
class KernelReport:
    ideal: frozenset[int]
    is_trivial: bool
    partial: bool = False


def kernel(C: Congruence) -> KernelReport:
    I = C.kernel()
    if not is_ideal(C.structure, I):
        raise CongruenceError("kernel is not an ideal")
    return KernelReport(I, len(I) == 1)


def is_ideal(A: FiniteStructure, I: Iterable[int], algebra: bool | None = None) -> bool:
    I = frozenset(I)
    if algebra is None:
        algebra = A.is_algebra
    if A.zero not in I:
        return False
    for a in I:
        if any(A.act(lam, a) not in I for lam in A.units):
            return False
        for m in A.elements:
            if A.add(a, m) not in I:
                return False
            if algebra and (A.mul(a, m) not in I or A.mul(m, a) not in I):
                return False
    return True


def enumerate_ideals(A: FiniteStructure, algebra: bool | None = None) -> list[frozenset[int]]:
    """All ideals; an ideal is determined by its nonzero part, searched exhaustively."""
    if A.size > 16:
        raise CongruenceError("ideal enumeration limited to 16 elements")
    out = []
    nz = A.nonzero
    for mask in range(1 << len(nz)):
        I = frozenset([A.zero] + [a for i, a in enumerate(nz) if mask >> i & 1])
        if is_ideal(A, I, algebra):
            out.append(I)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def minimal_congruence(A: FiniteStructure, I: Iterable[int]) -> Congruence:
    """``a ~ b`` iff ``a == b`` or both lie in ``I``."""
    I = frozenset(I)
    return from_partition(A, ["I" if a in I else a for a in A.elements])


def _filters(M: FiniteStructure) -> list[frozenset[int]]:
    if M.size <= 16:
        return all_filters(M)
    return [frozenset()] + [principal_filter(M, a) for a in M.nonzero]


def maximal_filters(M: FiniteStructure, I: Iterable[int] = ()) -> list[frozenset[int]]:
    """Inclusion-maximal filters disjoint from ``I``."""
    I = frozenset(I) | {M.zero}
    cands = [F for F in _filters(M) if F and not (F & I)]
    out = [F for F in cands if not any(F < G for G in cands)]
    return sorted(out, key=lambda F: sorted(F))


def quasimaximal_filters(A: FiniteStructure, I: Iterable[int] = ()) -> list[frozenset[int]]:
    """``{x : a x in F}`` for maximal filters ``F`` (w.r.t. ``I``) and every ``a``."""
    out = set()
    for F in maximal_filters(A, I):
        for a in A.elements:
            out.add(frozenset(x for x in A.elements if A.mul(a, x) in F))
    return sorted(out, key=lambda F: (len(F), sorted(F)))


def is_separable(M: FiniteStructure, filters: list[frozenset[int]] | None = None) -> bool:
    """Distinct elements are separated by some maximal filter."""
    filters = maximal_filters(M) if filters is None else filters
    sig = {}
    for a in M.elements:
        s = frozenset(i for i, F in enumerate(filters) if a in F)
        if s in sig:
            return False
        sig[s] = a
    return True


def is_quasiseparable(A: FiniteStructure) -> bool:
    return is_separable(A, quasimaximal_filters(A))


def _max_congruence(A, I, filters) -> Congruence:
    sig = [frozenset(i for i, F in enumerate(filters) if a in F) for a in A.elements]
    C = from_partition(A, sig)
    if C.kernel() != frozenset(I):
        raise CongruenceError("constructed congruence has the wrong kernel")
    return C


def max_congruence_module(M: FiniteStructure, I: Iterable[int]) -> Congruence:
    """Largest congruence with kernel ``I``: identify elements lying in the same maximal filters."""
    I = frozenset(M.index(a) for a in I)
    if not is_ideal(M, I, algebra=False):
        raise CongruenceError("not an ideal of the module")
    C = _max_congruence(M, I, maximal_filters(M, I))
    Q, _ = quotient(C)
    if not is_separable(Q):
        raise CongruenceError("quotient is not separable")
    return C


def max_congruence_algebra(A: FiniteStructure, I: Iterable[int]) -> Congruence:
    """Largest congruence with kernel ``I``, via quasimaximal filters."""
    I = frozenset(A.index(a) for a in I)
    if not A.is_algebra or not is_ideal(A, I, algebra=True):
        raise CongruenceError("not an ideal of the algebra")
    C = _max_congruence(A, I, quasimaximal_filters(A, I))
    Q, _ = quotient(C)
    if not is_quasiseparable(Q):
        raise CongruenceError("quotient is not quasiseparable")
    return C


def ann_congruence(C: Congruence, a) -> Congruence:
    """``Ann_C(a) = {(b, c) : (ab, ac) in C}``."""
    A = C.structure
    a = A.index(a)
    label = [C.block[A.mul(a, b)] for b in A.elements]
    return from_partition(A, label)


# -- enumeration -----------------------------------------------------------------

def enumerate_congruences(A: FiniteStructure, limit: int = 12) -> list[Congruence]:
    """All congruences as the join-closure of principal ones."""
    if A.size > limit:
        raise CongruenceError(f"carrier {A.size} exceeds the enumeration guard {limit}")
    found = {diagonal(A).block: diagonal(A)}
    principal = []
    for a in A.elements:
        for b in range(a + 1, A.size):
            C = cong_closure(A, [(a, b)])
            if C.block not in found:
                found[C.block] = C
                principal.append(C)
    frontier = list(found.values())
    while frontier:
        new = []
        for C in frontier:
            for P in principal:
                J = C.join(P)
                if J.block not in found:
                    found[J.block] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda C: (-C.size, C.block))


def _set_partitions(n: int):
    def rec(i, label, k):
        if i == n:
            yield tuple(label)
            return
        for j in range(k + 1):
            label.append(j)
            yield from rec(i + 1, label, max(k, j + 1))
            label.pop()

    yield from rec(0, [], 0)


def congruences_by_partitions(A: FiniteStructure) -> list[Congruence]:
    """Oracle: filter every set partition for compatibility."""
    if A.size > 8:
        raise CongruenceError("partition oracle limited to 8 elements")
    out = []
    for label in _set_partitions(A.size):
        C = Congruence(A, tuple(label.index(label[a]) for a in range(A.size)))
        if is_congruence(C):
            out.append(C)
    return sorted(out, key=lambda C: (-C.size, C.block))


# -- semifields --------------------------------------------------------------------

def is_field(A: FiniteStructure) -> bool:
    if not A.is_algebra or A.size < 2:
        return False
    for a in A.nonzero:
        if not any(A.mul(a, b) == A.one for b in A.elements):
            return False
    return all(A.mul(a, b) == A.mul(b, a) for a in A.elements for b in A.elements)


def field_max_relation(add, zero, a, b) -> bool:
    """``(a, b)`` with ``a, b`` nonzero and ``a + b`` nonzero, or ``(0, 0)``."""
    if a == zero and b == zero:
        return True
    return a != zero and b != zero and add(a, b) != zero


def field_max_congruence(F: FiniteStructure) -> Congruence:
    if not is_field(F):
        raise CongruenceError("input is not a field")
    n = F.size
    R = [[field_max_relation(F.add, F.zero, a, b) for b in range(n)] for a in range(n)]
    label = [min(b for b in range(n) if R[a][b]) for a in range(n)]
    C = Congruence(F, tuple(label))
    if any(R[a][b] != C.related(a, b) for a in range(n) for b in range(n)):
        raise CongruenceError("relation is not an equivalence")
    if not is_congruence(C):
        raise CongruenceError("relation is not compatible")
    return C


def _cyclic_powers(F: FiniteStructure, x: int) -> list[int]:
    out, cur = [], F.one
    while True:
        out.append(cur)
        cur = F.mul(cur, x)
        if cur == F.one:
            return out
        if cur in out:
            raise CongruenceError("element is not invertible")


def inverse(F: FiniteStructure, a: int) -> int:
    for b in F.elements:
        if F.mul(a, b) == F.one:
            return b
    raise CongruenceError(f"{F.names[a]} is not invertible")


def unit_class_formula(F: FiniteStructure, x) -> frozenset[int]:
    """Quotients ``N/D`` with ``N, D`` sums of ``lam_i x^i`` whose coefficients sum to 1.

    Exponent sets range over finite subsets of the integers, so on a finite
    field they reduce to subsets of the cyclic group generated by ``x``.
    """
    x = F.index(x)
    if x == F.zero:
        raise CongruenceError("x must be nonzero")
    powers = _cyclic_powers(F, x)
    # (coefficient sum, value) pairs reachable by some finite exponent set
    states: set[tuple[int, int]] = set()
    for p in powers:
        new = set(states)
        for lam in F.nonzero:
            term = (lam, F.mul(lam, p))
            new.add(term)
            for s, v in states:
                new.add((F.add(s, term[0]), F.add(v, term[1])))
        states = new
    sums = {v for s, v in states if s == F.one}
    out = set()
    for N in sums:
        for D in sums:
            if D != F.zero:
                out.add(F.mul(N, inverse(F, D)))
    if F.zero in out:
        # 0 ~ 1 makes the congruence improper: every element joins the class
        return frozenset(F.elements)
    return frozenset(out)


def unit_class_generated(F: FiniteStructure, x) -> frozenset[int]:
    """Class of 1 in the congruence generated by ``(x, 1)``; must match the formula."""
    x = F.index(x)
    if x == F.zero:
        raise CongruenceError("x must be nonzero")
    C = cong_closure(F, [(x, F.one)])
    cls = frozenset(a for a in F.elements if C.related(a, F.one))
    formula = unit_class_formula(F, x)
    if cls != formula:
        raise CongruenceError("closure and formula disagree")
    if F.zero not in cls and not _s_set_closed(F, cls):
        raise CongruenceError("class of 1 is not closed under the S-set rules")
    return cls


def _s_set_closed(F: FiniteStructure, S: frozenset[int]) -> bool:
    for a in S:
        for b in S:
            if F.mul(a, inverse(F, b)) not in S or F.mul(a, b) not in S:
                return False
            for lam in F.nonzero:
                for mu in F.nonzero:
                    if F.add(lam, mu) == F.one:
                        v = F.add(F.mul(lam, a), F.mul(mu, b))
                        if v not in S:
                            return False
    return True


def lexmax_unit_class(x: Scalar, bound: int = 8, coeff_window: int | None = None) -> tuple[frozenset[Scalar], frozenset[Scalar]]:
    """Class of 1 in gen{(x, 1)} inside LexMax, both ways, on ``|exponent| <= bound``.

    Closure runs on the window with multiplication by units applied only when the
    result stays inside; the formula uses exponents in ``[-bound, bound]`` and
    coefficients ``+-t^a`` with ``-coeff_window <= a <= 0``.
    """
    L = x.field
    if not L.lexmax:
        raise CongruenceError("expects a LexMax element")
    if x.is_zero:
        raise CongruenceError("x must be nonzero")
    els = L.elements(bound)
    pos = {a: i for i, a in enumerate(els)}
    units = [u for u in L.base_field.elements()[1:]]
    steps = [L.t(1), L.t(-1)] + [L.unit(u.g, 0) for u in units]

    def shifted(u):
        def f(i):
            return pos.get(L.mul(els[i], u))
        return f

    ops = [shifted(u) for u in steps]
    for c in els:
        ops.append(lambda i, c=c: pos[L.add(els[i], c)])
    uf = closure_core(len(els), ops, [(pos[x], pos[L.one])])
    labels = uf.labels()
    closure = frozenset(a for a in els if labels[pos[a]] == labels[pos[L.one]])

    W = bound if coeff_window is None else coeff_window
    coeffs = [L.t(a, u.g) for u in units for a in range(-W, 1)]
    states: set = set()
    for e in range(-bound, bound + 1):
        xe = L.pow(x, e)
        new = set(states)
        for lam in coeffs:
            term = (lam, lam * xe)
            new.add(term)
            for s, v in states:
                new.add((s + term[0], v + term[1]))
        states = new
    sums = {v for s, v in states if s == L.one}
    formula = set()
    for N in sums:
        for D in sums:
            if not D.is_zero:
                v = N * L.inv(D)
                if v.is_zero or abs(v.e) <= bound:
                    formula.add(v)
    if L.zero in formula:
        formula = set(els)
    return closure, frozenset(formula)


# -- bounded polynomial closure --------------------------------------------------------

class Membership(enum.Enum):
    IN = "IN"
    NOT_IN = "NOT-IN"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Model:
    """A substitution homomorphism into a semifield (or finite algebra)."""

    name: str
    target: object
    images: dict

    def __call__(self, p: Polynomial):
        return substitute(p, self.target, self.images)

    def collapses(self, pairs) -> bool:
        return all(self(p) == self(q) for p, q in pairs)

    def __hash__(self):
        return hash(self.name)


@dataclass(frozen=True)
class MembershipResult:
    status: Membership
    model: Model | None = None

    def __bool__(self) -> bool:
        return self.status is Membership.IN


def default_models(ring: Ring) -> list[Model]:
    """Substitutions into small fields used to refute membership."""
    base = ring.base
    pools: list[tuple[str, Semifield, list[Scalar]]] = []
    pools.append(("Finf", FINF, FINF.elements()))
    L = lexmax()
    pools.append(("LexMax", L, [L.zero] + [L.t(e, g) for g in [(0,), (1,)] for e in (-2, -1, 0, 1, 2)]))
    for k in (2, 3, 4):
        K = cyclotomic(k)
        pools.append((f"Finf^{k}", K, K.elements()))
    out = []
    for name, target, imgs in pools:
        try:
            for u in base.elements()[1:]:
                target.embed(u)
        except Exception:
            continue
        for choice in product(imgs, repeat=ring.nvars):
            images = dict(zip(ring.variables, choice))
            label = f"{name}:" + ",".join(f"{v}->{target.format(c)}" for v, c in images.items())
            out.append(Model(label, target, images))
    return out


@dataclass
class BoundedCongruence:
    ring: Ring
    generators: tuple[tuple[Polynomial, Polynomial], ...]
    degree: int
    carrier: list[Polynomial]
    index: dict
    uf: UnionFind
    models: list[Model] = field(default_factory=list)

    def _idx(self, p: Polynomial) -> int | None:
        return self.index.get(p)

    def contains(self, p: Polynomial, q: Polynomial) -> MembershipResult:
        i, j = self._idx(p), self._idx(q)
        if i is not None and j is not None and self.uf.find(i) == self.uf.find(j):
            return MembershipResult(Membership.IN)
        for m in self.models:
            if m.collapses(self.generators) and m(p) != m(q):
                return MembershipResult(Membership.NOT_IN, m)
        return MembershipResult(Membership.UNKNOWN)

    def labels(self) -> tuple[int, ...]:
        return self.uf.labels()

    def block_of(self, p: Polynomial) -> list[Polynomial]:
        i = self.index[p]
        r = self.uf.find(i)
        return [self.carrier[j] for j in range(len(self.carrier)) if self.uf.find(j) == r]


def cong_closure_bounded(ring: Ring, pairs, degree: int, models: list[Model] | None = None
                         ) -> BoundedCongruence:
    """Sound closure on polynomials of degree <= ``degree``."""
    pairs = tuple(pairs)
    for p, q in pairs:
        if max(p.degree, q.degree) > degree:
            raise CongruenceError(f"generator ({p}, {q}) exceeds degree bound {degree}")
    carrier = ring.bounded_carrier(degree)
    index = {p: i for i, p in enumerate(carrier)}
    ops: list[Callable[[int], int | None]] = []
    for m in ring.monomials(degree):
        for u in ring.base.elements()[1:]:
            mono = ring.monomial(m, u)
            table = [index[poly_add(p, mono)] for p in carrier]
            ops.append(table.__getitem__)
    for u in ring.base.elements()[1:]:
        if u != ring.base.one:
            c = ring.const(u)
            table = [index[poly_mul(c, p)] for p in carrier]
            ops.append(table.__getitem__)
    for v in range(ring.nvars):
        xv = ring.var(v)
        table = [index[poly_mul(p, xv)] if p.degree < degree else None for p in carrier]
        ops.append(table.__getitem__)
    gens = [(index[p], index[q]) for p, q in pairs]
    uf = closure_core(len(carrier), ops, gens)
    return BoundedCongruence(ring, pairs, degree, carrier, index, uf,
                             models if models is not None else default_models(ring))
