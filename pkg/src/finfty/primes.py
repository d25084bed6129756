"""Prime, radical and cancellative congruences; Spec posets; the prime
congruences of F_inf[x] with their quotient models; prime decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from .congruence import (
    Congruence,
    CongruenceError,
    Membership,
    Model,
    compatibility_witness,
    cong_closure,
    cong_closure_bounded,
    diagonal,
    enumerate_congruences,
    is_field,
    quotient,
)
from .poly import Polynomial, Ring, poly_add, poly_mul, polynomial_ring, term_iter
from .scalars import FINF, GroupSemifield, Semifield, cyclotomic, lexmax, semifield_make
from .structures import FiniteStructure, StructureError, from_tables

FLAGS = ("is_congruence", "is_proper", "is_prime", "is_radical", "is_cancellative")


# -- the defining conditions ---------------------------------------------------------
# Each takes the algebra, a relation ``rel(a, b)`` and a candidate tuple and returns
# True when the condition holds for that tuple.

def _prime_pair(A, rel, a, b, c, d) -> bool:
    m = A.mul
    L = A.add(m(a, c), m(b, d))
    R = A.add(m(a, d), m(b, c))
    if not rel(L, R):
        return True
    z = A.zero
    return rel(a, b) or rel(c, d) or rel(L, z) or rel(R, z)


def _prime_product(A, rel, a, b, c) -> bool:
    if not rel(A.mul(a, c), A.mul(b, c)):
        return True
    return rel(a, b) or rel(c, A.zero)


def _first_pair(A, rel, a, b, c, d) -> bool:
    m = A.mul
    k = m(m(a, b), m(c, d))
    L = A.add(m(a, c), m(b, d))
    R = A.add(m(a, d), m(b, c))
    if not rel(m(k, L), m(k, R)):
        return True
    z = A.zero
    return rel(a, b) or rel(c, d) or rel(L, z) or rel(R, z)


def _first_product(A, rel, a, b, c) -> bool:
    m = A.mul
    k = m(m(a, b), c)
    ac, bc = m(a, c), m(b, c)
    if not rel(m(k, ac), m(k, bc)):
        return True
    z = A.zero
    return rel(a, b) or rel(ac, z) or rel(bc, z)


def _radical(A, rel, a, b) -> bool:
    m = A.mul
    L = A.add(m(a, a), m(b, b))
    ab = m(a, b)
    R = A.add(ab, m(b, a))
    if not rel(L, R):
        return True
    z = A.zero
    return rel(a, b) or rel(L, z) or rel(ab, z)


def _cancellative(A, rel, a, b, c) -> bool:
    if not rel(A.mul(a, b), A.mul(a, c)):
        return True
    return rel(a, A.zero) or rel(b, c)


CONDITIONS: dict[str, tuple[int, Callable]] = {
    "prime-pair": (4, _prime_pair),
    "prime-product": (3, _prime_product),
    "first-pair": (4, _first_pair),
    "first-product": (3, _first_product),
    "radical": (2, _radical),
    "cancellative": (3, _cancellative),
}


def _first_failure(Q: FiniteStructure, name: str):
    arity, cond = CONDITIONS[name]
    eq = int.__eq__
    for t in iproduct(Q.elements, repeat=arity):
        if not cond(Q, eq, *t):
            return t
    return None


def replay(C: Congruence, name: str, witness: Sequence[int]) -> bool:
    """True when ``witness`` violates condition ``name`` for ``C``."""
    _, cond = CONDITIONS[name]
    return not cond(C.structure, C.related, *witness)


@dataclass
class CongruenceClass:
    is_congruence: bool
    is_proper: bool | None = None
    is_prime: bool | None = None
    is_radical: bool | None = None
    is_cancellative: bool | None = None
    is_prime_first: bool | None = None
    witness: dict[str, tuple] = field(default_factory=dict)

    @property
    def flags(self) -> dict[str, bool | None]:
        return {k: getattr(self, k) for k in FLAGS}

    def named_witness(self, A: FiniteStructure) -> dict[str, dict]:
        out = {}
        for k, (cond, t) in self.witness.items():
            out[k] = {"condition": cond, "elements": [A.name(a) for a in t]}
        return out


def classify_congruence(A: FiniteStructure, C: Congruence) -> CongruenceClass:
    """Exhaustive check of the prime, radical and cancellative conditions.

    Scans run on the quotient; a failure is reported as the least failing tuple
    of block representatives, which replays against ``C`` itself.
    """
    if not A.is_algebra:
        raise StructureError("classification needs an algebra")
    w = compatibility_witness(C)
    if w is not None:
        return CongruenceClass(False, witness={"is_congruence": ("compatibility", tuple(w[1:]))})
    Q, qmap = quotient(C)
    rep = {}
    for a in A.elements:
        rep.setdefault(qmap[a], a)
    out = CongruenceClass(True, is_proper=Q.size > 1)

    def scan(name):
        t = _first_failure(Q, name)
        return None if t is None else (name, tuple(rep[x] for x in t))

    failures = {}
    for flag, names in (("is_prime", ("prime-pair", "prime-product")),
                        ("is_prime_first", ("first-pair", "first-product")),
                        ("is_radical", ("radical",)),
                        ("is_cancellative", ("cancellative",))):
        for name in names:
            f = scan(name)
            if f is not None:
                failures[flag] = f
                break
    out.is_radical = "is_radical" not in failures
    out.is_cancellative = "is_cancellative" not in failures
    out.is_prime = out.is_proper and "is_prime" not in failures
    out.is_prime_first = out.is_proper and "is_prime_first" not in failures
    out.witness = failures
    if not out.is_proper:
        for flag in ("is_prime", "is_prime_first"):
            out.witness.setdefault(flag, ("proper", ()))
    return out


def is_prime(A: FiniteStructure, C: Congruence) -> bool:
    return bool(classify_congruence(A, C).is_prime)


# -- Spec ------------------------------------------------------------------------------

@dataclass
class SpecPoset:
    algebra: FiniteStructure
    primes: list[Congruence]
    order: set[tuple[int, int]]  # strict inclusions (i, j): primes[i] < primes[j]
    hasse: list[tuple[int, int]]
    chain: list[int]

    @property
    def krull_dimension(self) -> int:
        return len(self.chain) - 1 if self.chain else -1

    def is_strict_partial_order(self) -> bool:
        if any((i, i) in self.order for i in range(len(self.primes))):
            return False
        if any((j, i) in self.order for i, j in self.order):
            return False
        return all((i, k) in self.order
                   for i, j in self.order for j2, k in self.order if j == j2)

    def to_dot(self) -> str:
        A = self.algebra
        lines = ["digraph spec {", "  rankdir=BT;"]
        for i, P in enumerate(self.primes):
            label = " ".join("{" + ",".join(A.name(a) for a in b) + "}" for b in P.blocks())
            lines.append(f'  p{i} [label="{label}"];')
        for i, j in self.hasse:
            lines.append(f"  p{i} -> p{j};")
        lines.append("}")
        return "\n".join(lines)


def longest_chain(n: int, less: set[tuple[int, int]]) -> list[int]:
    """Longest chain in a finite strict order; ties broken by least index sequence."""
    best: dict[int, list[int]] = {}

    def up(i):
        if i not in best:
            cands = [[i] + up(j) for j in range(n) if (i, j) in less]
            best[i] = min(cands, key=lambda c: (-len(c), c)) if cands else [i]
        return best[i]

    chains = [up(i) for i in range(n)]
    return min(chains, key=lambda c: (-len(c), c)) if chains else []


def _hasse(n, less):
    return sorted((i, j) for i, j in less
                  if not any((i, k) in less and (k, j) in less for k in range(n)))


def spec_poset(A: FiniteStructure, congruences: list[Congruence] | None = None) -> SpecPoset:
    cs = congruences if congruences is not None else enumerate_congruences(A)
    primes = [C for C in cs if classify_congruence(A, C).is_prime]
    n = len(primes)
    less = {(i, j) for i in range(n) for j in range(n) if i != j and primes[i] < primes[j]}
    return SpecPoset(A, primes, less, _hasse(n, less), longest_chain(n, less))


# -- decomposition, fractions, radical maximality ----------------------------------------

def intersect(A: FiniteStructure, cs: Iterable[Congruence]) -> Congruence:
    """Pair-set intersection; the empty intersection is the full relation."""
    from .congruence import full_congruence

    out = full_congruence(A)
    for C in cs:
        out = out.meet(C)
    return out


@dataclass
class DecompositionReport:
    congruence: Congruence
    cancellative: bool
    primes: list[Congruence]
    intersection: Congruence
    equal: bool
    gap: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        """The decomposition claim holds, or it was not claimed (C not cancellative)."""
        return self.equal or not self.cancellative


def prime_decomposition_check(A: FiniteStructure, C: Congruence,
                              congruences: list[Congruence] | None = None) -> DecompositionReport:
    cs = congruences if congruences is not None else enumerate_congruences(A)
    above = [P for P in cs if C <= P and classify_congruence(A, P).is_prime]
    inter = intersect(A, above)
    gap = sorted(inter.pairs() - C.pairs())
    cls = classify_congruence(A, C)
    return DecompositionReport(C, bool(cls.is_cancellative), above, inter, not gap, gap)


@dataclass
class FractionField:
    field: FiniteStructure
    embedding: list[int]
    fractions: list[tuple[int, int]]  # representative (numerator, denominator) per element


def fraction_classes(elements: Sequence, zero, mul, eq=lambda x, y: x == y):
    """Group pairs ``(a, b)``, ``b != 0``, under ``a d = b c``.

    Returns a list of classes, each a list of pairs; ``elements`` may be any
    finite subset of a commutative cancellative semiring.
    """
    classes: list[list] = []
    for a in elements:
        for b in elements:
            if eq(b, zero):
                continue
            for cl in classes:
                c, d = cl[0]
                if eq(mul(a, d), mul(b, c)):
                    cl.append((a, b))
                    break
            else:
                classes.append([(a, b)])
    return classes


def fraction_field(A: FiniteStructure) -> FractionField:
    """Fractions ``a/b`` modulo ``a d = b c`` (needs cancellative Δ)."""
    cls = classify_congruence(A, diagonal(A))
    if not cls.is_cancellative:
        cond, t = cls.witness["is_cancellative"]
        raise CongruenceError(
            "not cancellative: (" + ", ".join(A.name(a) for a in t) + ")")
    classes = fraction_classes(list(A.elements), A.zero, A.mul)
    index = {}
    for i, cl in enumerate(classes):
        for p in cl:
            index[p] = i
    zero_cls = index[(A.zero, A.one)]
    reps = [next((p for p in cl if p[1] == A.one), cl[0]) for cl in classes]
    # put zero first and keep the embedded copy of A in order
    order = [zero_cls] + [index[(a, A.one)] for a in A.elements if a != A.zero]
    order += [i for i in range(len(classes)) if i not in order]
    pos = {c: k for k, c in enumerate(order)}

    def cl_of(a, b):
        return pos[index[(a, b)]]

    m = A.mul
    add, mul = [], []
    for i in order:
        a, b = reps[i]
        row_a, row_m = [], []
        for j in order:
            c, d = reps[j]
            row_a.append(cl_of(A.add(m(a, d), m(c, b)), m(b, d)))
            row_m.append(cl_of(m(a, c), m(b, d)))
        add.append(row_a)
        mul.append(row_m)
    neg = [cl_of(A.neg(reps[i][0]), reps[i][1]) for i in order]

    def name(i):
        a, b = reps[i]
        return A.name(a) if b == A.one else f"{A.name(a)}/{A.name(b)}"

    names = [name(i) for i in order]
    F = from_tables(A.base, names, 0, add, neg, mul=mul, one=cl_of(A.one, A.one),
                    label=f"Frac({A.label})")
    emb = [cl_of(a, A.one) for a in A.elements]
    return FractionField(F, emb, [reps[i] for i in order])


def max_radical_avoiding(F: FiniteStructure, x, congruences: list[Congruence] | None = None
                         ) -> Congruence:
    """A maximal radical congruence not containing ``(x, 1)``; asserted prime."""
    x = F.index(x)
    if not is_field(F):
        raise StructureError(f"{F.label} is not a field")
    if x == F.one:
        raise StructureError("x must differ from 1")
    cs = congruences if congruences is not None else enumerate_congruences(F)
    cands = [C for C in cs
             if not C.related(x, F.one) and classify_congruence(F, C).is_radical]
    maximal = [C for C in cands if not any(C < D for D in cands)]
    P = maximal[0]
    if not classify_congruence(F, P).is_prime:
        raise CongruenceError("maximal radical congruence avoiding (x,1) is not prime")
    return P


# -- lemma replays on finite algebras ---------------------------------------------------
# Each returns the first counterexample (element tuple) or None.

def trichotomy_failure(C: Congruence):
    A, r = C.structure, C.related
    for a in A.elements:
        for b in A.elements:
            s = A.add(a, b)
            if not (r(s, a) or r(s, b) or r(s, A.zero)):
                return (a, b)
    return None


def zero_divisor_failure(C: Congruence):
    A, r, z = C.structure, C.related, C.structure.zero
    for a in A.elements:
        for b in A.elements:
            if r(A.mul(a, b), z) and not (r(a, z) or r(b, z)):
                return (a, b)
    return None


def root_failure(C: Congruence, n: int):
    A, r = C.structure, C.related
    for a in A.elements:
        for b in A.elements:
            if r(A.pow(a, n), A.pow(b, n)) and not r(a, b) and not r(A.add(a, b), A.zero):
                return (a, b)
    return None


def _pair_product(A, a, b, c, d):
    m = A.mul
    return A.add(m(a, c), m(b, d)), A.add(m(a, d), m(b, c))


def technical_failure(C: Congruence, n: int):
    """(a,b)(c,d) in C with a+b, c+d not in the kernel forces (a^n,b^n)(c,d) in C."""
    A, r, z = C.structure, C.related, C.structure.zero
    for a, b, c, d in iproduct(A.elements, repeat=4):
        if r(A.add(a, b), z) or r(A.add(c, d), z):
            continue
        if not r(*_pair_product(A, a, b, c, d)):
            continue
        if not r(*_pair_product(A, A.pow(a, n), A.pow(b, n), c, d)):
            return (a, b, c, d)
    return None


def annihilation_failure(F: FiniteStructure):
    """In a field, pairs generated by (a,b) are annihilated by (c,d) when (a,b)(c,d) is diagonal."""
    z = F.zero
    gen_cache: dict = {}
    for a, b, c, d in iproduct(F.elements, repeat=4):
        if F.add(a, b) == z or F.add(c, d) == z:
            continue
        L, R = _pair_product(F, a, b, c, d)
        if L != R:
            continue
        if (a, b) not in gen_cache:
            gen_cache[(a, b)] = cong_closure(F, [(a, b)]).pairs()
        for x, y in gen_cache[(a, b)]:
            L2, R2 = _pair_product(F, x, y, c, d)
            if L2 != R2:
                return (a, b, c, d, x, y)
    return None


# -- the prime congruences of F_inf[x] ---------------------------------------------------

MODEL_KINDS = ("FInfinity", "HighestTerm", "LowestTerm", "mirror", "ClosedForm",
               "GroupSemifield", "MonomialsOnly")


@dataclass
class CatalogEntry:
    family: int
    n: int | None
    generators: list[tuple[Polynomial, Polynomial]]
    model: Model
    kind: str
    finite: bool

    @property
    def name(self) -> str:
        return f"{self.family}" if self.n is None else f"{self.family}(n={self.n})"

    def generators_upto(self, B: int) -> list[tuple[Polynomial, Polynomial]]:
        """Generators with the infinite family 14 list cut at degree ``B``."""
        if self.family != 14:
            return self.generators
        return _shared_pairs(self.generators[0][0].ring, B + 1)

    def generator_text(self) -> list[str]:
        return [f"({p}, {q})" for p, q in self.generators]

    def describe(self) -> str:
        return f"family {self.name}: gen " + ", ".join(self.generator_text()) + \
            f"; model {self.kind} [{self.model.name}]"


def _shared_pairs(R: Ring, n: int):
    x, one = R.var("x"), R.one
    out = []
    for k in range(1, n):
        xk = x ** k
        out.append((one + xk, R.zero))
        out.append((one + (-xk), R.zero))
    return out


def _tail_pair(R: Ring, family: int, n: int):
    x, one = R.var("x"), R.one
    xn = x ** n
    return {
        8: (one + xn, xn),
        9: (one + xn, one),
        10: (-one + xn, xn),
        11: (-one + xn, -one),
        12: (xn, one),
        13: (xn, -one),
    }[family]


def _group_zn(n: int) -> Semifield:
    """``{0} + (Z/2 x Z/n)`` with ``-1 = (1, 0)``."""
    return semifield_make(GroupSemifield((2, n), (1, 0)))


def catalog_entry(family: int, n: int | None = None, ring: Ring | None = None) -> CatalogEntry:
    R = ring or polynomial_ring("x")
    x, one = R.var("x"), R.one
    L = lexmax()
    simple = {
        1: ([(one + x, x)], "HighestTerm", L, L.t(1)),
        2: ([(x, one)], "FInfinity", FINF, FINF.one),
        3: ([(x, R.zero)], "FInfinity", FINF, FINF.zero),
        4: ([(one + x, one)], "LowestTerm", L, L.t(-1)),
        5: ([(-one + x, x)], "mirror", L, L.neg(L.t(1))),
        6: ([(x, -one)], "FInfinity", FINF, FINF.minus),
        7: ([(-one + x, -one)], "mirror", L, L.neg(L.t(-1))),
    }
    if family in simple:
        gens, kind, target, img = simple[family]
        label = f"{kind}:x->{target.format(img)}"
        return CatalogEntry(family, None, gens, Model(label, target, {"x": img}), kind,
                            target.is_finite)
    if family == 14:
        G = semifield_make(GroupSemifield((2, 0), (1, 0)))
        g = G.unit((0, 1))
        gens = _shared_pairs(R, 5)  # generators shown up to x^4; the family needs all k
        return CatalogEntry(14, None, gens, Model("MonomialsOnly:x->g", G, {"x": g}),
                            "MonomialsOnly", False)
    if family not in range(8, 14):
        raise ValueError(f"no family {family}")
    if n is None or n < 1:
        raise ValueError(f"family {family} needs n >= 1")
    gens = _shared_pairs(R, n) + [_tail_pair(R, family, n)]
    if family in (12, 13):
        target = _group_zn(n) if family == 12 else cyclotomic(n)
        img = target.unit((0, 1)) if family == 12 else target.zeta(1)
        return CatalogEntry(family, n, gens,
                            Model(f"GroupSemifield:x->{target.format(img)}", target, {"x": img}),
                            "GroupSemifield", True)
    if family in (8, 9):
        target = lexmax(_group_zn(n))
        img = target.unit((0, 1), 1 if family == 8 else -1)
    else:
        target = lexmax(cyclotomic(n))
        img = target.unit((1,), 1 if family == 10 else -1)
    return CatalogEntry(family, n, gens,
                        Model(f"ClosedForm:x->{target.format(img)}", target, {"x": img}),
                        "ClosedForm", False)


def polyprime_catalog(n_max: int) -> list[CatalogEntry]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = [catalog_entry(f) for f in range(1, 8)]
    for f in range(8, 14):
        out.extend(catalog_entry(f, n) for n in range(1, n_max + 1))
    out.append(catalog_entry(14))
    return out


@dataclass
class VerifyReport:
    entry: CatalogEntry
    bound: int
    hom_ok: bool
    generators_ok: bool
    prime_ok: bool
    lemma_ok: bool
    closure_ok: bool
    status: str  # "verified", "bounded-verified" or "refuted"
    witness: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != "refuted"


HOM_PAIR_DEGREE = 3
HOM_SPARSE_TERMS = 3


def _image_set(entry: CatalogEntry, B: int) -> list:
    """``{0} + {+-phi(x)^i}``: every polynomial maps to 0 or a signed power of phi(x)."""
    T = entry.model.target
    phi_x = entry.model.images["x"]
    out, seen = [T.zero], {T.zero}
    p = T.one
    for _ in range(B + 1):
        for v in (p, T.neg(p)):
            if v not in seen:
                seen.add(v)
                out.append(v)
        p = T.mul(p, phi_x)
    return out


def _model_prime_failure(T, S):
    """Both prime conditions for the kernel, read inside the target on the set ``S``."""
    S = list(S)
    ids: dict = {}
    vals: list = []

    def intern(v):
        i = ids.get(v)
        if i is None:
            i = ids[v] = len(vals)
            vals.append(v)
        return i

    s_ids = [intern(v) for v in S]
    mul = [[intern(T.mul(a, b)) for b in S] for a in S]
    add_memo: dict = {}

    def add(i, j):
        k = add_memo.get((i, j))
        if k is None:
            k = add_memo[(i, j)] = intern(T.add(vals[i], vals[j]))
        return k

    z = intern(T.zero)
    n = len(S)
    for a, b, c, d in iproduct(range(n), repeat=4):
        L = add(mul[a][c], mul[b][d])
        R = add(mul[a][d], mul[b][c])
        if L == R and not (a == b or c == d or L == z):
            return ("prime-pair", (S[a], S[b], S[c], S[d]))
    for a, b, c in iproduct(range(n), repeat=3):
        if mul[a][c] == mul[b][c] and not (a == b or s_ids[c] == z):
            return ("prime-product", (S[a], S[b], S[c]))
    return None


def verify_catalog_entry(entry: CatalogEntry, B: int = 8) -> VerifyReport:
    R = entry.generators[0][0].ring
    gdeg = max(max(p.degree, q.degree) for p, q in entry.generators)
    if B < gdeg:
        raise ValueError(f"bound {B} is below generator degree {gdeg}")
    phi, T = entry.model, entry.model.target
    witness: dict = {}
    notes: list[str] = []

    # (i) homomorphism: all pairs at low degree; generating operations up to degree B
    # on polynomials with few terms
    phi_x = phi.images["x"]
    powers = [T.one]
    for _ in range(2 * B + 1):
        powers.append(T.mul(powers[-1], phi_x))
    cache: dict = {}

    def val(p):
        v = cache.get(p)
        if v is None:
            v = T.zero
            for i, (m, c) in enumerate(p.terms):
                t = T.mul(T.embed(c), powers[m[0]])
                v = t if i == 0 else T.add(v, t)
            cache[p] = v
        return v

    hom_ok = True
    small = R.bounded_carrier(min(B, HOM_PAIR_DEGREE))
    for p in small:
        for q in small:
            if val(poly_add(p, q)) != T.add(val(p), val(q)) or \
                    val(poly_mul(p, q)) != T.mul(val(p), val(q)):
                hom_ok = False
                witness.setdefault("hom", (str(p), str(q)))
    sparse = list(term_iter(R, B, HOM_SPARSE_TERMS))
    monos = [R.monomial(mn, u) for mn in R.monomials(B) for u in R.base.elements()[1:]]
    x = R.var("x")
    for p in sparse:
        if phi(p) != val(p):
            hom_ok = False
            witness.setdefault("hom", (str(p), "substitution"))
        for mono in monos:
            if val(poly_add(p, mono)) != T.add(val(p), val(mono)):
                hom_ok = False
                witness.setdefault("hom", (str(p), str(mono)))
        if p.degree < B and val(poly_mul(p, x)) != T.mul(val(p), val(x)):
            hom_ok = False
            witness.setdefault("hom", (str(p), "x"))

    # (ii) generators collapse
    bad = [(str(p), str(q)) for p, q in entry.generators_upto(B) if phi(p) != phi(q)]
    generators_ok = not bad
    if bad:
        witness["generators"] = bad[0]

    # (iii) primality of the kernel on the image set
    S = _image_set(entry, B)
    # products of the low-degree pairs reach degree 2 * HOM_PAIR_DEGREE
    reach = _image_set(entry, max(B, 2 * min(B, HOM_PAIR_DEGREE)))
    if not set(cache.values()) <= set(reach):
        notes.append("carrier image leaves the signed-power set")
        generators_ok = False
    f = _model_prime_failure(T, S)
    prime_ok = f is None
    if f:
        witness["prime"] = (f[0], tuple(T.format(v) for v in f[1]))

    # (iv) lemma replays
    lemma_ok = True
    if entry.family in (9, 12):
        ms = [m for m in range(1, B + 1) if phi(R.one + x ** m) == phi(R.one)]
        expect = [m for m in range(1, B + 1) if m % entry.n == 0]
        if ms != expect:
            lemma_ok = False
            witness["lemma"] = ("1+x^m ~ 1", ms)
    if entry.family == 13:
        K = cyclotomic(entry.n)
        if set(S) != set(K.elements()):
            lemma_ok = False
            witness["lemma"] = ("image", len(S))

    # soundness of the model against bounded closure of the generators
    D = min(B, gdeg + 1)
    bc = cong_closure_bounded(R, entry.generators, D, models=[])
    closure_ok = all(val(p) == val(bc.carrier[bc.uf.find(i)]) for i, p in enumerate(bc.carrier))
    if not closure_ok:
        witness["closure"] = D
    blocks = len(set(bc.labels()))
    model_blocks = len({val(p) for p in bc.carrier})
    notes.append(f"closure at degree {D}: {blocks} classes, model: {model_blocks}")

    ok = hom_ok and generators_ok and prime_ok and lemma_ok and closure_ok
    status = "refuted" if not ok else ("verified" if entry.finite else "bounded-verified")
    return VerifyReport(entry, B, hom_ok, generators_ok, prime_ok, lemma_ok, closure_ok,
                        status, witness, notes)


def quotient_structure(entry: CatalogEntry, B: int = 8) -> FiniteStructure:
    """The image of a finite model as an F_inf-algebra."""
    if not entry.finite:
        raise StructureError(f"family {entry.name} has an infinite quotient")
    T = entry.model.target
    S = _image_set(entry, B)
    pos = {v: i for i, v in enumerate(S)}
    add = [[pos[T.add(a, b)] for b in S] for a in S]
    mul = [[pos[T.mul(a, b)] for b in S] for a in S]
    neg = [pos[T.neg(a)] for a in S]
    return from_tables(FINF, [T.format(v) for v in S], 0, add, neg, mul=mul, one=pos[T.one],
                       label=f"F[x]/P{entry.name}")


def catalog_includes(P: CatalogEntry, Q: CatalogEntry) -> bool:
    """``P <= Q``: every generator of P collapses under Q's quotient model."""
    return Q.model.collapses(P.generators_upto(8))


@dataclass
class KrullReport:
    entries: list[CatalogEntry]
    classes: list[list[int]]  # entries grouped by mutual inclusion
    less: set[tuple[int, int]]  # strict inclusions between classes
    chain: list[int]  # class indices, bottom to top
    separators: list[tuple[str, str, str]]  # (pair, lower model) per chain step

    @property
    def dimension(self) -> int:
        return len(self.chain) - 1

    def chain_entries(self) -> list[CatalogEntry]:
        return [self.entries[self.classes[c][0]] for c in self.chain]


def krull_via_catalog(n_max: int = 4, B: int = 8, verify: bool = True) -> KrullReport:
    entries = polyprime_catalog(n_max)
    if verify:
        for e in entries:
            r = verify_catalog_entry(e, B)
            if not r.ok:
                raise CongruenceError(f"catalog entry {e.name} failed: {r.witness}")
    k = len(entries)
    inc = [[catalog_includes(entries[i], entries[j]) for j in range(k)] for i in range(k)]
    classes: list[list[int]] = []
    where = {}
    for i in range(k):
        for c, cl in enumerate(classes):
            j = cl[0]
            if inc[i][j] and inc[j][i]:
                cl.append(i)
                where[i] = c
                break
        else:
            where[i] = len(classes)
            classes.append([i])
    m = len(classes)
    less = {(a, b) for a in range(m) for b in range(m)
            if a != b and inc[classes[a][0]][classes[b][0]]}
    chain = longest_chain(m, less)
    seps = []
    for a, b in zip(chain, chain[1:]):
        lo, hi = entries[classes[a][0]], entries[classes[b][0]]
        for p, q in hi.generators:
            if lo.model(p) != lo.model(q):
                seps.append((f"({p}, {q})", lo.model.name, hi.name))
                break
    return KrullReport(entries, classes, less, chain, seps)


# -- a chain of three primes in two variables ---------------------------------------------

@dataclass
class ChainStep:
    name: str
    model: Model
    generators: list[tuple[Polynomial, Polynomial]]


@dataclass
class TwoVariableChain:
    degree: int
    steps: list[ChainStep]
    inclusions: list[bool]
    generators_in: list[bool]
    strict: list[tuple[str, str]]
    prime_ok: list[bool]
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "bounded-verified"


def two_variable_chain(D: int = 2) -> TwoVariableChain:
    """``P1 < P2 < P3`` in ``F_inf[x1, x2]``, checked on polynomials of degree <= D.

    P1 is the kernel of the lex-order map into LexMax (x1 far above x2);
    P2 = gen{(x1,0), (1+x2,x2)}; P3 = gen{(x1,0), (x2,0)}.
    """
    R = polynomial_ring("x1,x2")
    x1, x2, one = R.var("x1"), R.var("x2"), R.one
    L = lexmax()
    N = D + 1
    steps = [
        ChainStep("lex", Model(f"LexMax:x1->t^{N},x2->t", L, {"x1": L.t(N), "x2": L.t(1)}), []),
        ChainStep("gen{(x1,0),(1+x2,x2)}", Model("LexMax:x1->0,x2->t", L,
                                                  {"x1": L.zero, "x2": L.t(1)}),
                  [(x1, R.zero), (one + x2, x2)]),
        ChainStep("gen{(x1,0),(x2,0)}", Model("Finf:x1->0,x2->0", FINF,
                                               {"x1": FINF.zero, "x2": FINF.zero}),
                  [(x1, R.zero), (x2, R.zero)]),
    ]
    carrier = R.bounded_carrier(D)
    vals = [[s.model(p) for p in carrier] for s in steps]

    def refines(i, j):
        seen = {}
        for a, b in zip(vals[i], vals[j]):
            if seen.setdefault(a, b) != b:
                return False
        return True

    inclusions = [refines(0, 1), refines(1, 2)]
    generators_in = []
    for s in steps:
        if s.generators:
            generators_in.append(all(s.model(p) == s.model(q) for p, q in s.generators))
    # lower generators are derivable from the upper ones by bounded closure
    bc = cong_closure_bounded(R, steps[2].generators, D)
    generators_in.append(all(bc.contains(p, q).status is Membership.IN
                             for p, q in steps[1].generators))
    strict = []
    for lo, pair in ((steps[0], (x1, R.zero)), (steps[1], (x2, R.zero))):
        if lo.model(pair[0]) != lo.model(pair[1]):
            strict.append((f"({pair[0]}, {pair[1]})", lo.model.name))
    prime_ok = []
    for i, s in enumerate(steps):
        S = sorted(set(vals[i]), key=str)
        prime_ok.append(_model_prime_failure(s.model.target, S) is None)
    ok = all(inclusions) and all(generators_in) and len(strict) == 2 and all(prime_ok)
    return TwoVariableChain(D, steps, inclusions, generators_in, strict, prime_ok,
                            "bounded-verified" if ok else "refuted")
