"""Explicit finite modules and algebras over a finite semifield.

Elements are integer indices into ``names``; all operations are tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import FINF, Scalar, Semifield


class StructureError(ValueError):
    pass


class AxiomError(StructureError):
    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} fails at {', '.join(map(str, witness))}")


class _Top:
    __slots__ = ()

    def __repr__(self) -> str:
        return "TOP"

    __str__ = __repr__


TOP = _Top()


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    base: Semifield
    names: tuple[str, ...]
    zero: int
    add_table: tuple[tuple[int, ...], ...]
    neg_table: tuple[int, ...]
    scalar_table: Mapping[Scalar, tuple[int, ...]]
    mul_table: tuple[tuple[int, ...], ...] | None = None
    one: int | None = None
    label: str = ""
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update({n: i for i, n in enumerate(self.names)})

    # -- basic access -----------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(len(self.names))

    @property
    def nonzero(self) -> list[int]:
        return [a for a in self.elements if a != self.zero]

    @property
    def is_algebra(self) -> bool:
        return self.mul_table is not None

    @property
    def units(self) -> list[Scalar]:
        return self.base.elements()[1:]

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            return name
        try:
            return self._index[name]
        except KeyError:
            raise StructureError(f"unknown element {name!r}") from None

    def name(self, a) -> str:
        return str(a) if a is TOP else self.names[a]

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is None:
            raise StructureError("not an algebra")
        return self.mul_table[a][b]

    def act(self, lam: Scalar, a: int) -> int:
        if lam.is_zero:
            return self.zero
        return self.scalar_table[lam][a]

    def embed(self, lam: Scalar) -> int:
        if self.one is None:
            raise StructureError("not a unital algebra")
        return self.act(self.base.embed(lam), self.one)

    def sum(self, xs: Iterable[int]) -> int:
        out = None
        for x in xs:
            out = x if out is None else self.add_table[out][x]
        if out is None:
            raise StructureError("empty sum")
        return out

    def leq(self, a: int, b: int) -> bool:
        return self.add_table[a][b] == a

    def pow(self, a: int, n: int) -> int:
        out = a
        for _ in range(n - 1):
            out = self.mul_table[out][a]
        return out

    def __repr__(self) -> str:
        kind = "algebra" if self.is_algebra else "module"
        return f"<{kind} {self.label or '?'} |{self.size}| over {self.base.label}>"


# -- building --------------------------------------------------------------

@dataclass
class RawTables:
    """Partial table description as read from a ``.finalg`` file."""

    elements: list[str]
    zero: str
    kind: str = "module"
    base: Semifield = FINF
    one: str | None = None
    add: dict = field(default_factory=dict)
    neg: dict = field(default_factory=dict)
    scalar: dict = field(default_factory=dict)
    mul: dict = field(default_factory=dict)
    completion: str = "none"
    label: str = ""


def _set(table, a, b, c, what):
    old = table[a][b]
    if old is not None and old != c:
        raise StructureError(f"conflicting {what} entry for ({a}, {b}): {old} vs {c}")
    table[a][b] = c


def build_structure(raw: RawTables) -> FiniteStructure:
    names = list(raw.elements)
    if len(set(names)) != len(names):
        raise StructureError("element names must be unique")
    idx = {n: i for i, n in enumerate(names)}

    def ix(n):
        if n not in idx:
            raise StructureError(f"undeclared element {n!r}")
        return idx[n]

    n = len(names)
    z = ix(raw.zero)
    neg = [None] * n
    neg[z] = z
    for a, b in raw.neg.items():
        a, b = ix(a), ix(b)
        for x, y in ((a, b), (b, a)):
            if neg[x] is not None and neg[x] != y:
                raise StructureError(f"conflicting neg entry for {names[x]}")
            neg[x] = y
    if None in neg:
        raise StructureError(f"neg missing for {names[neg.index(None)]}")

    add = [[None] * n for _ in range(n)]
    for (a, b), c in raw.add.items():
        a, b, c = ix(a), ix(b), ix(c)
        _set(add, a, b, c, "add")
        _set(add, b, a, c, "add")
    for a in range(n):
        _set(add, a, a, a, "add")
        _set(add, a, z, z, "add")
        _set(add, z, a, z, "add")
        _set(add, a, neg[a], z, "add")
        _set(add, neg[a], a, z, "add")
    if raw.completion == "associative":
        _force_associative(add, neg, names)
        for a in range(n):
            for b in range(n):
                if add[a][b] is None:
                    add[a][b] = z
    elif raw.completion == "zero":
        for a in range(n):
            for b in range(n):
                if add[a][b] is None:
                    add[a][b] = z
    elif raw.completion != "none":
        raise StructureError(f"unknown completion {raw.completion!r}")
    for a in range(n):
        for b in range(n):
            if add[a][b] is None:
                raise StructureError(f"add missing for ({names[a]}, {names[b]})")

    one = ix(raw.one) if raw.one is not None else None
    mul = None
    if raw.kind == "algebra":
        if one is None:
            raise StructureError("algebra needs a 'one' element")
        mul = [[None] * n for _ in range(n)]
        for (a, b), c in raw.mul.items():
            _set(mul, ix(a), ix(b), ix(c), "mul")
        for a in range(n):
            for b, c in ((z, z), (one, a), (neg[one], neg[a])):
                _set(mul, a, b, c, "mul")
                _set(mul, b, a, c, "mul")
        changed = True
        while changed:
            changed = False
            for a in range(n):
                for b in range(n):
                    c = mul[a][b]
                    if c is None:
                        continue
                    for x, y, v in ((b, a, c), (neg[a], b, neg[c]), (a, neg[b], neg[c])):
                        if mul[x][y] is None:
                            mul[x][y] = v
                            changed = True
        for a in range(n):
            for b in range(n):
                if mul[a][b] is None:
                    raise StructureError(f"mul missing for ({names[a]}, {names[b]})")
    elif raw.kind != "module":
        raise StructureError(f"unknown kind {raw.kind!r}")

    scalar = _scalar_tables(raw, neg, ix, one, mul)
    M = FiniteStructure(
        base=raw.base,
        names=tuple(names),
        zero=z,
        add_table=tuple(map(tuple, add)),
        neg_table=tuple(neg),
        scalar_table=scalar,
        mul_table=tuple(map(tuple, mul)) if mul else None,
        one=one,
        label=raw.label,
    )
    witness = axiom_witness(M)
    if witness:
        raise AxiomError(witness[0], tuple(M.names[i] for i in witness[1]))
    return M


def _scalar_tables(raw, neg, ix, one, mul):
    base = raw.base
    n = len(neg)
    tables: dict[Scalar, list] = {}
    for (lam, a), b in raw.scalar.items():
        tables.setdefault(lam, [None] * n)[ix(a)] = ix(b)
    tables[base.one] = list(range(n))
    tables[base.minus] = list(neg)
    if mul is not None and base.cyclotomic_k and base.cyclotomic_k > 1:
        zeta = base.zeta(1)
        if zeta in tables and tables[zeta][one] is not None:
            c = tables[zeta][one]
            tables[zeta] = [mul[c][a] for a in range(n)]
    k = base.cyclotomic_k
    if k and k > 1:
        zeta = base.zeta(1)
        if zeta not in tables or None in tables[zeta]:
            raise StructureError("scalar action of z must be given for every element")
        gen = tables[zeta]
        cur = list(range(n))
        for i in range(2 * k):
            tables[base.zeta(i)] = cur
            cur = [gen[x] for x in cur]
    for lam, t in tables.items():
        if None in t:
            raise StructureError(f"scalar action of {lam} incomplete")
    return {lam: tuple(t) for lam, t in tables.items()}


def _force_associative(add, neg, names):
    n = len(add)
    changed = True
    while changed:
        changed = False
        for x in range(n):
            row = add[x]
            for y in range(n):
                s1 = row[y]
                if s1 is None:
                    continue
                for zz in range(n):
                    s2 = add[y][zz]
                    if s2 is None:
                        continue
                    left, right = add[s1][zz], row[s2]
                    if left is None and right is not None:
                        add[s1][zz] = add[zz][s1] = right
                        changed = True
                    elif right is None and left is not None:
                        row[s2] = add[s2][x] = left
                        changed = True
                    elif left is not None and left != right:
                        raise AxiomError("associativity", (names[x], names[y], names[zz]))
        for a in range(n):
            for b in range(n):
                c = add[a][b]
                if c is not None and add[neg[a]][neg[b]] is None:
                    add[neg[a]][neg[b]] = neg[c]
                    changed = True


def from_tables(base, names, zero, add, neg, scalar=None, mul=None, one=None, label="",
                check=True):
    """Wrap complete tables (as index lists) and run the axiom suite unless ``check`` is off."""
    if scalar is None:
        scalar = {base.one: tuple(range(len(names))), base.minus: tuple(neg)}
    M = FiniteStructure(
        base=base,
        names=tuple(names),
        zero=zero,
        add_table=tuple(map(tuple, add)),
        neg_table=tuple(neg),
        scalar_table={k: tuple(v) for k, v in scalar.items()},
        mul_table=tuple(map(tuple, mul)) if mul is not None else None,
        one=one,
        label=label,
    )
    w = axiom_witness(M) if check else None
    if w:
        raise AxiomError(w[0], tuple(M.names[i] for i in w[1]))
    return M


def axiom_witness(M: FiniteStructure) -> tuple[str, tuple[int, ...]] | None:
    """First failing module/algebra axiom with its witness, or None."""
    E = M.elements
    A, N, z = M.add_table, M.neg_table, M.zero
    for a in E:
        if A[a][a] != a:
            return "idempotence", (a,)
        if A[a][N[a]] != z:
            return "a + (-a) = 0", (a,)
        if N[N[a]] != a:
            return "double negation", (a,)
        if A[z][a] != z:
            return "zero absorption", (a,)
    for a in E:
        for b in E:
            if A[a][b] != A[b][a]:
                return "commutativity", (a, b)
            if N[A[a][b]] != A[N[a]][N[b]]:
                return "negation of sums", (a, b)
    for a in E:
        Aa = A[a]
        for b in E:
            ab = Aa[b]
            Aab = A[ab]
            Ab = A[b]
            for c in E:
                if Aab[c] != Aa[Ab[c]]:
                    return "associativity", (a, b, c)
    units = M.units
    for lam in units:
        t = M.scalar_table.get(lam)
        if t is None:
            return f"scalar action of {lam} missing", ()
        for a in E:
            if t[N[a]] != N[t[a]]:
                return "scalar/negation", (a,)
            if M.act(M.base.neg(lam), a) != N[t[a]]:
                return "(-lam) m = -(lam m)", (a,)
            for mu in units:
                if t[M.act(mu, a)] != M.act(lam * mu, a):
                    return "scalar associativity", (a,)
                if M.act(lam + mu, a) != A[t[a]][M.act(mu, a)]:
                    return "(lam + mu) m", (a,)
            for b in E:
                if t[A[a][b]] != A[t[a]][t[b]]:
                    return "scalar distributivity", (a, b)
    if M.mul_table is None:
        return None
    P = M.mul_table
    for a in E:
        if P[a][z] != z or P[z][a] != z:
            return "a * 0 = 0", (a,)
        if M.one is not None and (P[a][M.one] != a or P[M.one][a] != a):
            return "unit law", (a,)
        for b in E:
            if P[N[a]][b] != N[P[a][b]] or P[a][N[b]] != N[P[a][b]]:
                return "sign rule", (a, b)
            for lam in units:
                if M.act(lam, P[a][b]) != P[M.act(lam, a)][b]:
                    return "scalar/product", (a, b)
    for a in E:
        Pa = P[a]
        for b in E:
            Pab = P[Pa[b]]
            for c in E:
                if Pab[c] != Pa[P[b][c]]:
                    return "multiplicative associativity", (a, b, c)
                if Pa[A[b][c]] != A[Pa[b]][Pa[c]]:
                    return "left distributivity", (a, b, c)
                if P[A[a][b]][c] != A[P[a][c]][P[b][c]]:
                    return "right distributivity", (a, b, c)
    return None


def check_axioms(M: FiniteStructure) -> None:
    w = axiom_witness(M)
    if w:
        raise AxiomError(w[0], tuple(M.names[i] for i in w[1]))


def is_commutative(M: FiniteStructure) -> bool:
    P = M.mul_table
    return all(P[a][b] == P[b][a] for a in M.elements for b in M.elements)


# -- order ---------------------------------------------------------------------

@dataclass(frozen=True)
class Order:
    leq: tuple[tuple[bool, ...], ...]
    minimal: tuple[int, ...]
    maximal: tuple[int, ...]

    def is_partial_order(self) -> bool:
        n = len(self.leq)
        L = self.leq
        return (
            all(L[a][a] for a in range(n))
            and all(not (L[a][b] and L[b][a]) or a == b for a in range(n) for b in range(n))
            and all(L[a][c] for a in range(n) for b in range(n) for c in range(n) if L[a][b] and L[b][c])
        )


def natural_order(M: FiniteStructure) -> Order:
    """``a <= b`` iff ``a + b == a``; 0 is the least element."""
    E = M.elements
    leq = tuple(tuple(M.add_table[a][b] == a for b in E) for a in E)
    maximal = tuple(a for a in E if not any(leq[a][b] and a != b for b in E))
    minimal = tuple(a for a in E if a != M.zero and all(b in (a, M.zero) for b in E if leq[b][a]))
    return Order(leq, minimal, maximal)


def module_dimension(M: FiniteStructure) -> int:
    """Number of nonzero elements in a longest strictly decreasing chain."""
    order = natural_order(M)
    height: dict[int, int] = {}

    def h(a: int) -> int:
        if a not in height:
            below = [b for b in M.nonzero if b != a and order.leq[b][a]]
            height[a] = 1 + max((h(b) for b in below), default=0)
        return height[a]

    return max((h(a) for a in M.nonzero), default=0)


def upset(M: FiniteStructure, a: int) -> frozenset[int]:
    return frozenset(b for b in M.elements if M.add_table[a][b] == a)


def irreducibles(M: FiniteStructure) -> list[int]:
    """Nonzero elements that are not the sum of the elements strictly above them.

    They generate ``M`` under addition and are closed under scalar action.
    """
    out = []
    for a in M.nonzero:
        above = [b for b in upset(M, a) if b != a]
        if not above or M.sum(above) != a:
            out.append(a)
    return out


def generated_submodule(M: FiniteStructure, gens: Iterable[int]) -> set[int]:
    seen = set(gens)
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                c = M.add_table[a][b]
                if c not in seen:
                    seen.add(c)
                    new.append(c)
        frontier = new
    return seen


def join(M: FiniteStructure, a: int, b: int, gens: Sequence[int] | None = None):
    """Least upper bound of ``a`` and ``b`` in the order closure (``TOP`` if none)."""
    gens = irreducibles(M) if gens is None else gens
    above = [g for g in gens if M.leq(a, g) and M.leq(b, g)]
    if not above:
        return TOP
    return M.sum(above)


class OrderClosure:
    """``M`` with a synthetic largest element ``TOP`` and partial operations."""

    def __init__(self, M: FiniteStructure):
        self.M = M

    @property
    def elements(self) -> list:
        return list(self.M.elements) + [TOP]

    def add(self, a, b):
        if a is TOP:
            return b
        if b is TOP:
            return a
        return self.M.add(a, b)

    def act(self, lam: Scalar, a):
        if a is TOP:
            if lam.is_zero:
                raise StructureError("0 * TOP is undefined")
            return TOP
        return self.M.act(lam, a)

    def leq(self, a, b) -> bool:
        if b is TOP:
            return True
        if a is TOP:
            return False
        return self.M.leq(a, b)

    def join(self, a, b):
        if a is TOP or b is TOP:
            return TOP
        return join(self.M, a, b)


# -- duality -------------------------------------------------------------------

def duality_pair(M: FiniteStructure, a, b, extended: bool = True):
    """``(a, b) = eps`` when ``b >= eps a``, ``0`` if no such ``eps``."""
    if a is TOP:
        return M.base.zero
    if b is TOP:
        return TOP
    if a == M.zero:
        raise StructureError("first argument of the duality must be nonzero")
    if b == M.zero:
        if not extended:
            raise StructureError("(a, 0) needs the extended pairing")
        return TOP
    hits = [eps for eps in M.units if M.leq(M.act(eps, a), b)]
    if len(hits) > 1:
        raise StructureError(f"duality not unique for ({M.name(a)}, {M.name(b)})")
    return hits[0] if hits else M.base.zero


def is_filter(M: FiniteStructure, F: frozenset[int]) -> bool:
    if M.zero in F:
        return False
    for a in M.elements:
        for b in M.elements:
            if (M.add_table[a][b] in F) != (a in F and b in F):
                return False
    return True


def all_filters(M: FiniteStructure) -> list[frozenset[int]]:
    """Every filter, by search over up-closed sets (no principality assumed)."""
    order = natural_order(M)
    elems = M.nonzero
    out: list[frozenset[int]] = []

    def extend(chosen: set[int], i: int):
        if i == len(elems):
            F = frozenset(chosen)
            if is_filter(M, F):
                out.append(F)
            return
        a = elems[i]
        # skip a
        if not any(order.leq[c][a] for c in chosen):
            extend(chosen, i + 1)
        # take a: everything above a must be allowed
        chosen.add(a)
        extend(chosen, i + 1)
        chosen.discard(a)

    extend(set(), 0)
    return sorted(out, key=lambda F: (len(F), sorted(F)))


def principal_filter(M: FiniteStructure, a: int) -> frozenset[int]:
    return upset(M, a)


@dataclass
class Dual:
    module: FiniteStructure
    filters: list[frozenset[int]]
    of: dict[int, int]  # nonzero a -> index of F_a in the dual

    def closure_bijection(self, a):
        """``a -> F_a``, ``0 -> TOP``, ``TOP -> 0`` (the empty filter)."""
        if a is TOP:
            return self.module.zero
        if a == self.source_zero:
            return TOP
        return self.of[a]

    source_zero: int = 0


def dual_module(M: FiniteStructure) -> Dual:
    """Filters of ``M`` with intersection as addition (``Hom(M, F)``)."""
    filters = [frozenset()]
    of = {}
    for a in M.nonzero:
        F = principal_filter(M, a)
        of[a] = len(filters)
        filters.append(F)
    pos = {F: i for i, F in enumerate(filters)}
    if len(pos) != len(filters):
        raise StructureError("principal filters are not distinct")
    n = len(filters)
    add = [[pos.get(filters[i] & filters[j]) for j in range(n)] for i in range(n)]
    if any(c is None for row in add for c in row):
        raise StructureError("filters not closed under intersection")

    def act_filter(eps, F):
        inv = M.base.inv(eps)
        return pos[frozenset(M.act(inv, a) for a in F)]

    scalar = {eps: tuple(act_filter(eps, F) for F in filters) for eps in M.units}
    names = ["0"] + [f"F[{M.names[a]}]" for a in M.nonzero]
    D = from_tables(M.base, names, 0, add, scalar[M.base.minus], scalar=scalar,
                    label=f"({M.label})*")
    return Dual(D, filters, of, source_zero=M.zero)


def filter_to_hom(M: FiniteStructure, F: frozenset[int]) -> tuple[Scalar, ...]:
    """The homomorphism ``M -> F`` with ``f(a) = eps`` iff ``a in eps F``."""
    out = []
    for a in M.elements:
        hit = M.base.zero
        for eps in M.units:
            if M.act(M.base.inv(eps), a) in F:
                hit = eps
        out.append(hit)
    return tuple(out)


def double_dual_map(M: FiniteStructure) -> list[int]:
    """``a -> {F in M* : a in F}`` as indices into ``(M*)*``."""
    D1 = dual_module(M)
    D2 = dual_module(D1.module)
    pos = {F: i for i, F in enumerate(D2.filters)}
    out = []
    for a in M.elements:
        hat = frozenset(i for i, F in enumerate(D1.filters) if a in F)
        if hat not in pos:
            raise StructureError(f"hat({M.name(a)}) is not a filter of M*")
        out.append(pos[hat])
    return out


# -- homomorphisms -------------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    source: FiniteStructure
    target: FiniteStructure
    images: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.images[a]

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``self o other``."""
        return Homomorphism(other.source, self.target, tuple(self.images[b] for b in other.images))


def hom_witness(M1: FiniteStructure, M2: FiniteStructure, f: Sequence[int], algebra: bool = False):
    if f[M1.zero] != M2.zero:
        return "zero", (M1.zero,)
    for a in M1.elements:
        if f[M1.neg(a)] != M2.neg(f[a]):
            return "negation", (a,)
        for lam in M1.units:
            if f[M1.act(lam, a)] != M2.act(M2.base.embed(lam), f[a]):
                return "scalar", (a,)
        for b in M1.elements:
            if f[M1.add(a, b)] != M2.add(f[a], f[b]):
                return "addition", (a, b)
            if algebra and f[M1.mul(a, b)] != M2.mul(f[a], f[b]):
                return "multiplication", (a, b)
    if algebra and f[M1.one] != M2.one:
        return "unit", (M1.one,)
    return None


def is_hom(M1, M2, f, algebra: bool = False) -> bool:
    return hom_witness(M1, M2, f, algebra) is None


def enumerate_homs(M1: FiniteStructure, M2: FiniteStructure, algebra: bool = False,
                   method: str = "generators") -> Iterator[tuple[int, ...]]:
    """All homomorphisms ``M1 -> M2`` as image tuples, in lexicographic order.

    ``method="naive"`` backtracks over every element (an oracle for small
    carriers); ``"generators"`` assigns the irreducibles and extends.
    """
    if method == "naive":
        yield from _homs_naive(M1, M2, algebra)
        return
    gens = irreducibles(M1)
    reps, seen = [], set()
    for g in gens:
        if g not in seen:
            reps.append(g)
            seen.update(M1.act(lam, g) for lam in M1.units)
    ups = {a: [g for g in gens if M1.leq(a, g)] for a in M1.elements}
    found = []
    for choice in product(M2.elements, repeat=len(reps)):
        img = {}
        ok = True
        for g, c in zip(reps, choice):
            for lam in M1.units:
                ga, ca = M1.act(lam, g), M2.act(M2.base.embed(lam), c)
                if img.setdefault(ga, ca) != ca:
                    ok = False
        if not ok:
            continue
        f = [M2.sum(img[g] for g in ups[a]) if ups[a] else None for a in M1.elements]
        if None in f:
            continue
        if is_hom(M1, M2, f, algebra):
            found.append(tuple(f))
    yield from sorted(set(found))


def _homs_naive(M1, M2, algebra):
    n = M1.size
    f: list[int | None] = [None] * n

    def consistent(a: int) -> bool:
        fa = f[a]
        if a == M1.zero and fa != M2.zero:
            return False
        if algebra and a == M1.one and fa != M2.one:
            return False
        na = M1.neg(a)
        if f[na] is not None and f[na] != M2.neg(fa):
            return False
        for lam in M1.units:
            la = M1.act(lam, a)
            if f[la] is not None and f[la] != M2.act(M2.base.embed(lam), fa):
                return False
        for b in range(a + 1):
            fb = f[b]
            s = M1.add(a, b)
            if f[s] is not None and f[s] != M2.add(fa, fb):
                return False
            if algebra:
                for x, y in ((a, b), (b, a)):
                    p = M1.mul(x, y)
                    if f[p] is not None and f[p] != M2.mul(f[x], f[y]):
                        return False
        for s in range(a + 1):
            # constraints where a is the result of an earlier operation
            pass
        return True

    def rec(a: int):
        if a == n:
            if is_hom(M1, M2, f, algebra):
                yield tuple(f)
            return
        for c in M2.elements:
            f[a] = c
            if consistent(a):
                yield from rec(a + 1)
        f[a] = None

    yield from rec(0)


@dataclass
class HomExtension:
    extends: bool
    hom: Homomorphism | None = None
    gamma: int | None = None
    subset: tuple[int, ...] = ()
    offender: int | None = None

    def describe(self) -> str:
        if self.extends:
            return "extends"
        return f"refused: gamma={self.gamma} S={self.subset} g={self.offender}"


def hom_extend(M1: FiniteStructure, M2: FiniteStructure, gen_map: Mapping[int, int]) -> HomExtension:
    """Decide via the filter condition whether ``gen_map`` extends, and build it.

    For every nonzero ``gamma`` of ``M2`` let ``F = {g : f(g) >= gamma}``; the
    map extends iff no generator outside ``F`` lies above ``sum(F)``.
    """
    gen_map = {M1.index(k): M2.index(v) for k, v in gen_map.items()}
    G1 = sorted(gen_map)
    for g in G1:
        for lam in M1.units:
            lg = M1.act(lam, g)
            if lg not in gen_map:
                raise StructureError(f"generating set not closed under {lam}")
            if gen_map[lg] != M2.act(M2.base.embed(lam), gen_map[g]):
                raise StructureError(f"map not equivariant at {M1.name(g)} under {lam}")
    if generated_submodule(M1, G1) != set(M1.elements):
        raise StructureError("given elements do not generate the source")
    for gamma in M2.nonzero:
        F = [g for g in G1 if M2.leq(gamma, gen_map[g])]
        if not F:
            continue
        s = M1.sum(F)
        for g in G1:
            if g not in F and M1.leq(s, g):
                return HomExtension(False, gamma=gamma, subset=tuple(F), offender=g)
    images = []
    for a in M1.elements:
        above = [gen_map[g] for g in G1 if M1.leq(a, g)]
        images.append(M2.sum(above))
    w = hom_witness(M1, M2, images)
    if w is not None:
        raise StructureError(f"filter condition held but extension fails: {w}")
    for g in G1:
        if images[g] != gen_map[g]:
            raise StructureError("extension does not agree with the generator map")
    return HomExtension(True, hom=Homomorphism(M1, M2, tuple(images)))


def hom_dual(phi: Homomorphism, check_formula: bool = True) -> Homomorphism:
    """Filter pullback ``M2* -> M1*``."""
    M1, M2 = phi.source, phi.target
    D1, D2 = dual_module(M1), dual_module(M2)
    pos1 = {F: i for i, F in enumerate(D1.filters)}
    images = []
    for F in D2.filters:
        pre = frozenset(a for a in M1.elements if phi(a) in F)
        images.append(pos1[pre])
    if check_formula:
        for c in M2.nonzero:
            above = [m for m in M1.elements if M2.leq(c, phi(m))]
            expected = 0 if not above else D1.of.get(M1.sum(above), None)
            if expected is None or images[D2.of[c]] != expected:
                raise StructureError(f"dual formula disagrees at F[{M2.name(c)}]")
    return Homomorphism(D2.module, D1.module, tuple(images))


# -- isomorphism -----------------------------------------------------------------

def _invariant(M: FiniteStructure, a: int):
    up = sum(1 for b in M.elements if M.leq(a, b))
    down = sum(1 for b in M.elements if M.leq(b, a))
    sq = None
    if M.is_algebra:
        sq = (M.mul(a, a) == M.zero, M.mul(a, a) == a, a == M.one)
    return (up, down, a == M.zero, sq)


def find_isomorphism(M: FiniteStructure, N: FiniteStructure, algebra: bool | None = None):
    """An isomorphism ``M -> N`` as an image tuple, or None."""
    if algebra is None:
        algebra = M.is_algebra and N.is_algebra
    if M.size != N.size:
        return None
    invM = [_invariant(M, a) for a in M.elements]
    invN = [_invariant(N, b) for b in N.elements]
    if sorted(map(repr, invM)) != sorted(map(repr, invN)):
        return None
    gens = irreducibles(M)
    reps, seen = [], set()
    for g in gens:
        if g not in seen:
            reps.append(g)
            seen.update(M.act(lam, g) for lam in M.units)
    ups = {a: [g for g in gens if M.leq(a, g)] for a in M.elements}
    img: dict[int, int] = {}

    def candidates(g):
        return [b for b in N.elements if invN[b] == invM[g]]

    def pair_ok(g, c) -> bool:
        for h, d in img.items():
            s = M.add(g, h)
            if invM[s] != invN[N.add(c, d)]:
                return False
            if algebra and invM[M.mul(g, h)] != invN[N.mul(c, d)]:
                return False
        return True

    def rec(i: int):
        if i == len(reps):
            f = [N.sum(img[g] for g in ups[a]) if ups[a] else None for a in M.elements]
            if None in f or len(set(f)) != M.size:
                return None
            if is_hom(M, N, f, algebra):
                return tuple(f)
            return None
        g = reps[i]
        for c in candidates(g):
            orbit = [(M.act(lam, g), N.act(N.base.embed(lam), c)) for lam in M.units]
            if any(x in img and img[x] != y for x, y in orbit):
                continue
            if any(y in img.values() and img.get(x) != y for x, y in orbit):
                continue
            if not all(pair_ok(x, y) for x, y in orbit):
                continue
            added = [x for x, _ in orbit if x not in img]
            for x, y in orbit:
                img[x] = y
            out = rec(i + 1)
            if out is not None:
                return out
            for x in added:
                del img[x]
        return None

    if M.size == 1:
        return (N.zero,)
    return rec(0)


def is_isomorphic(M, N, algebra=None) -> bool:
    return find_isomorphism(M, N, algebra) is not None


# -- examples --------------------------------------------------------------------

def polygon_module(n: int) -> FiniteStructure:
    """Face module of the regular ``2n``-gon: vertices ``v_i``, edges ``e_i``, ``0``."""
    if n < 2:
        raise StructureError("polygon needs n >= 2")
    m = 2 * n
    vs = [f"v{i}" for i in range(m)]
    es = [f"e{i}" for i in range(m)]
    raw = RawTables(elements=["0"] + vs + es, zero="0", completion="associative",
                    label=f"polygon({n})")
    for i in range(m):
        raw.neg[vs[i]] = vs[(i + n) % m]
        raw.neg[es[i]] = es[(i + n) % m]
        raw.add[(vs[i], vs[(i + 1) % m])] = es[i]
    return build_structure(raw)


def semifield_structure(sf: Semifield) -> FiniteStructure:
    """A finite semifield as an F_inf-algebra."""
    els = sf.elements()
    pos = {x: i for i, x in enumerate(els)}
    n = len(els)
    add = [[pos[sf.add(a, b)] for b in els] for a in els]
    mul = [[pos[sf.mul(a, b)] for b in els] for a in els]
    neg = [pos[sf.neg(a)] for a in els]
    return from_tables(FINF, [str(a) for a in els], 0, add, neg, mul=mul,
                       one=pos[sf.one], label=sf.label)


def nil2() -> FiniteStructure:
    """``{0, +-1, +-x}`` with ``x^2 = 0`` and ``1 + x = 0``."""
    raw = RawTables(elements=["0", "1", "-1", "x", "-x"], zero="0", kind="algebra", one="1",
                    completion="associative", label="nil2")
    raw.neg.update({"1": "-1", "x": "-x"})
    raw.mul[("x", "x")] = "0"
    return build_structure(raw)


def lexmax_window_module(bound: int, sign_blind: bool = False) -> FiniteStructure:
    """``{0, +-t^i : |i| <= bound}`` as an F_inf-module (addition closes)."""
    from .scalars import lexmax, sign_blind_lexmax_add

    exps = [1, 2] + [e for e in range(-bound, bound + 1) if e not in (1, 2)]
    exps = [e for e in exps if -bound <= e <= bound]
    els = [None] + [(s, e) for e in exps for s in (1, -1)]
    pos = {x: i for i, x in enumerate(els)}
    L = lexmax()

    def to_s(x):
        return L.zero if x is None else L.t(x[1], (0 if x[0] > 0 else 1,))

    def from_s(a):
        return None if a.is_zero else ((1 if a.g == (0,) else -1), a.e)

    def add(a, b):
        if sign_blind:
            return sign_blind_lexmax_add(a, b)
        return from_s(L.add(to_s(a), to_s(b)))

    names = ["0"] + [("-" if s < 0 else "") + ("1" if e == 0 else f"t^{e}") for s, e in els[1:]]
    neg = [pos[None if x is None else (-x[0], x[1])] for x in els]
    table = [[pos[add(a, b)] for b in els] for a in els]
    label = "lexmax-sign-blind" if sign_blind else f"lexmax[{bound}]"
    return from_tables(FINF, names, 0, table, neg, label=label)
