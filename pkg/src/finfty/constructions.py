"""Coproducts, products, free modules, tensor and symmetric powers, projective
closure and graded components of the ring of functions (finite inputs only)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product as iproduct
from typing import Sequence

from .congruence import cong_closure, quotient
from .scalars import FINF, Scalar, Semifield
from .structures import (
    FiniteStructure,
    StructureError,
    dual_module,
    enumerate_homs,
    from_tables,
    irreducibles,
)


class SizeGuardError(StructureError):
    pass


def _same_base(Ms: Sequence[FiniteStructure]) -> Semifield:
    base = Ms[0].base
    for M in Ms[1:]:
        if M.base != base:
            raise StructureError(f"base mismatch: {base.label} vs {M.base.label}")
    return base


def line(base: Semifield = FINF) -> FiniteStructure:
    """The base semifield as a module over itself."""
    els = base.elements()
    pos = {x: i for i, x in enumerate(els)}
    add = [[pos[a + b] for b in els] for a in els]
    neg = [pos[-a] for a in els]
    scalar = {u: [pos[u * a] for a in els] for u in els[1:]}
    return from_tables(base, [str(a) for a in els], 0, add, neg, scalar=scalar, label=base.label)


def _tables_from_elements(base, elements, zero, add, neg, act, names, mul=None, one=None,
                          label=""):
    pos = {e: i for i, e in enumerate(elements)}
    A = [[pos[add(a, b)] for b in elements] for a in elements]
    N = [pos[neg(a)] for a in elements]
    S = {u: [pos[act(u, a)] for a in elements] for u in base.elements()[1:]}
    P = None
    if mul is not None:
        P = [[pos[mul(a, b)] for b in elements] for a in elements]
        one = pos[one]
    return from_tables(base, names, pos[zero], A, N, scalar=S, mul=P, one=one, label=label)


def coproduct(*Ms: FiniteStructure) -> FiniteStructure:
    """Formal sums with one optional nonzero component per factor; a factor that
    collapses to its zero makes the whole sum zero."""
    if len(Ms) == 1 and isinstance(Ms[0], (list, tuple)):
        Ms = tuple(Ms[0])
    base = _same_base(Ms)
    choices = [[None] + M.nonzero for M in Ms]
    elements = list(iproduct(*choices))
    zero = tuple(None for _ in Ms)

    def add(x, y):
        if x == zero or y == zero:
            return zero
        out = []
        for M, a, b in zip(Ms, x, y):
            if a is None or b is None:
                out.append(b if a is None else a)
                continue
            s = M.add(a, b)
            if s == M.zero:
                return zero
            out.append(s)
        return tuple(out)

    def neg(x):
        return tuple(None if a is None else M.neg(a) for M, a in zip(Ms, x))

    def act(u, x):
        return tuple(None if a is None else M.act(u, a) for M, a in zip(Ms, x))

    def name(x):
        if x == zero:
            return "0"
        return "(" + ",".join("_" if a is None else M.names[a] for M, a in zip(Ms, x)) + ")"

    label = " + ".join(f"({M.label})" for M in Ms)
    return _tables_from_elements(base, elements, zero, add, neg, act,
                                 [name(x) for x in elements], label=label)


def product(*Ms: FiniteStructure, algebra: bool | None = None) -> FiniteStructure:
    """Cartesian product with componentwise operations."""
    if len(Ms) == 1 and isinstance(Ms[0], (list, tuple)):
        Ms = tuple(Ms[0])
    base = _same_base(Ms)
    if algebra is None:
        algebra = all(M.is_algebra for M in Ms)
    elements = list(iproduct(*(M.elements for M in Ms)))
    zero = tuple(M.zero for M in Ms)

    def comp(f):
        return lambda x, y: tuple(f(M, a, b) for M, a, b in zip(Ms, x, y))

    mul = comp(lambda M, a, b: M.mul(a, b)) if algebra else None
    one = tuple(M.one for M in Ms) if algebra else None
    names = ["(" + ",".join(M.names[a] for M, a in zip(Ms, x)) + ")" for x in elements]
    label = " x ".join(f"({M.label})" for M in Ms)
    return _tables_from_elements(
        base, elements, zero, comp(lambda M, a, b: M.add(a, b)),
        lambda x: tuple(M.neg(a) for M, a in zip(Ms, x)),
        lambda u, x: tuple(M.act(u, a) for M, a in zip(Ms, x)),
        names, mul=mul, one=one, label=label)


def free_module(generators: Sequence[str] | int, base: Semifield = FINF) -> FiniteStructure:
    """Iterated coproduct of base lines; elements are signed formal sums."""
    if isinstance(generators, int):
        generators = [f"x{i + 1}" for i in range(generators)]
    generators = list(generators)
    if not generators:
        raise StructureError("free module needs at least one generator")
    if len(generators) == 1:
        L = line(base)
        names = [_signed_name(base, u, generators[0]) if i else "0"
                 for i, u in enumerate(base.elements())]
        return from_tables(base, names, 0, L.add_table, L.neg_table, scalar=L.scalar_table,
                           label=f"free({generators[0]})")
    C = coproduct(*[line(base) for _ in generators])
    units = base.elements()
    names = []
    for nm in C.names:
        if nm == "0":
            names.append("0")
            continue
        parts = nm[1:-1].split(",")
        terms = [_signed_name(base, units[C_index], g)
                 for g, C_index in zip(generators, (_unit_pos(base, p) for p in parts))
                 if C_index is not None]
        s = terms[0]
        for t in terms[1:]:
            s += t if t.startswith("-") else "+" + t
        names.append(s)
    return from_tables(base, names, C.zero, C.add_table, C.neg_table, scalar=C.scalar_table,
                       label=f"free({','.join(generators)})")


def _unit_pos(base, text):
    if text == "_":
        return None
    for i, u in enumerate(base.elements()):
        if str(u) == text:
            return i
    raise StructureError(text)


def _signed_name(base, u: Scalar, g: str) -> str:
    s = str(u)
    sign = ""
    if s.startswith("-"):
        sign, s = "-", s[1:]
    return sign + (g if s == "1" else f"{s}*{g}")


def hom_module(M: FiniteStructure, N: FiniteStructure) -> FiniteStructure:
    """``Hom(M, N)`` with pointwise operations."""
    homs = list(enumerate_homs(M, N))
    pos = {f: i for i, f in enumerate(homs)}
    zero = tuple(N.zero for _ in M.elements)
    add = [[pos[tuple(N.add(a, b) for a, b in zip(f, g))] for g in homs] for f in homs]
    neg = [pos[tuple(N.neg(a) for a in f)] for f in homs]
    scalar = {u: [pos[tuple(N.act(u, a) for a in f)] for f in homs] for u in M.units}
    names = ["0" if f == zero else f"h{i}" for i, f in enumerate(homs)]
    H = from_tables(M.base, names, pos[zero], add, neg, scalar=scalar,
                    label=f"Hom({M.label},{N.label})")
    return H


def count_homs(M: FiniteStructure, N: FiniteStructure) -> int:
    return sum(1 for _ in enumerate_homs(M, N))


# -- tensor products ----------------------------------------------------------------

@dataclass
class TensorProduct:
    module: FiniteStructure
    factors: tuple[FiniteStructure, ...]
    pure: dict  # tuple of factor elements -> element of module
    method: str

    def __call__(self, *ms: int) -> int:
        return self.pure[tuple(ms)]


class _MaskVectors:
    """Vectors in ``F^k`` encoded as one bit mask per unit; the absorbing
    addition becomes a bitwise AND per unit."""

    def __init__(self, base: Semifield):
        self.base = base
        self.units = base.elements()[1:]
        self.upos = {u: i for i, u in enumerate(self.units)}

    def encode(self, values: Sequence[Scalar]):
        masks = [0] * len(self.units)
        for k, v in enumerate(values):
            if not v.is_zero:
                masks[self.upos[v]] |= 1 << k
        return tuple(masks)

    @staticmethod
    def add(x, y):
        return tuple(a & b for a, b in zip(x, y))

    def act(self, u: Scalar, x):
        out = [0] * len(x)
        for i, m in enumerate(x):
            out[self.upos[u * self.units[i]]] = m
        return tuple(out)


def _span(V: _MaskVectors, gens, zero):
    seen = {zero}
    seen.update(gens)
    frontier = list(seen)
    while frontier:
        new = []
        snapshot = list(seen)
        for a in frontier:
            for b in snapshot:
                c = V.add(a, b)
                if c not in seen:
                    seen.add(c)
                    new.append(c)
        frontier = new
    return seen


def multilinear_forms(factors: Sequence[FiniteStructure], limit: int = 200_000):
    """All maps ``M1 x ... x Mn -> F`` that are homomorphisms in each slot.

    Returned as value dicts on tuples of irreducible generators together with
    an evaluator; built recursively as ``Hom(M1, forms(M2..Mn))``.
    """
    base = factors[0].base
    if len(factors) == 1:
        M = factors[0]
        target = line(base)
        forms = list(enumerate_homs(M, target))
        units = base.elements()
        return [(lambda f: (lambda ms: units[f[ms[0]]]))(f) for f in forms]
    inner = multilinear_forms(factors[1:], limit)
    tuples = list(iproduct(*(F.elements for F in factors[1:])))
    vecs = [tuple(form(t) for t in tuples) for form in inner]
    pos = {v: i for i, v in enumerate(vecs)}
    zero = tuple(base.zero for _ in tuples)
    if zero not in pos:
        raise StructureError("zero form missing")
    add = [[pos[tuple(a + b for a, b in zip(v, w))] for w in vecs] for v in vecs]
    neg = [pos[tuple(-a for a in v)] for v in vecs]
    scalar = {u: [pos[tuple(u * a for a in v)] for v in vecs] for u in base.elements()[1:]}
    inner_mod = from_tables(base, [f"f{i}" for i in range(len(vecs))], pos[zero], add, neg,
                            scalar=scalar, label="forms", check=len(vecs) <= 60)
    M = factors[0]
    n_gens = len({frozenset(M.act(u, g) for u in M.units) for g in irreducibles(M)})
    if inner_mod.size ** n_gens > limit:
        raise SizeGuardError(f"multilinear search needs {inner_mod.size}^{n_gens} candidates")
    tindex = {t: i for i, t in enumerate(tuples)}
    out = []
    for h in enumerate_homs(M, inner_mod):
        out.append((lambda h: (lambda ms: vecs[h[ms[0]]][tindex[tuple(ms[1:])]]))(h))
    return out


def _embedded_tensor(factors, forms, symmetric_names=False, label="") -> TensorProduct:
    base = factors[0].base
    V = _MaskVectors(base)
    tuples = list(iproduct(*(F.elements for F in factors)))
    zero = V.encode([base.zero] * len(forms))
    pure = {t: V.encode([f(t) for f in forms]) for t in tuples}
    span = _span(V, set(pure.values()), zero)
    elements = sorted(span, key=lambda v: (v != zero, [bin(m).count("1") for m in v], v))
    names = ["0"]
    rep: dict = {}
    for t, v in pure.items():
        rep.setdefault(v, t)
    k = 0
    for v in elements[1:]:
        if v in rep:
            names.append("*".join(F.names[a] for F, a in zip(factors, rep[v])))
        else:
            k += 1
            names.append(f"s{k}")
    pos = {v: i for i, v in enumerate(elements)}
    add = [[pos[V.add(a, b)] for b in elements] for a in elements]
    scalar = {u: [pos[V.act(u, a)] for a in elements] for u in V.units}
    M = from_tables(base, names, 0, add, scalar[base.minus], scalar=scalar, label=label,
                    check=len(elements) <= 150)
    return TensorProduct(M, tuple(factors), {t: pos[v] for t, v in pure.items()}, "embedding")


def _lines(factors):
    """Pure tensors with nonzero components, grouped into lines.

    Returns the line representatives and a map ``tuple -> (line, unit)`` with
    ``(l1 m1, ..., ln mn) -> (i, l1 * ... * ln)`` for the representative ``(m1..mn)``.
    """
    base = factors[0].base
    units = base.elements()[1:]
    where: dict = {}
    reps = []
    for t in iproduct(*(F.nonzero for F in factors)):
        if t in where:
            continue
        i = len(reps)
        reps.append(t)
        for lams in iproduct(units, repeat=len(factors)):
            s = tuple(F.act(l, a) for F, l, a in zip(factors, lams, t))
            u = base.one
            for l in lams:
                u = u * l
            where.setdefault(s, (i, u))
    return reps, where


def _literal_tensor(factors, label="", symmetric=False) -> TensorProduct:
    """Free module on pure-tensor lines modulo the multilinearity congruence."""
    reps, where = _lines(factors)
    if len(reps) > LITERAL_LINES:
        raise SizeGuardError(f"literal tensor needs {len(reps)} lines > {LITERAL_LINES}")
    Fr = _free_on(factors[0].base, len(reps))

    def coords(t):
        if t not in where:
            return Fr.zero
        i, u = where[t]
        return Fr.line_element(i, u)

    pairs = []
    tuples = list(iproduct(*(F.elements for F in factors)))
    for t in tuples:
        for slot, F in enumerate(factors):
            for b in F.elements:
                s = list(t)
                s[slot] = F.add(t[slot], b)
                u = list(t)
                u[slot] = b
                pairs.append((coords(tuple(s)), Fr.M.add(coords(t), coords(tuple(u)))))
            for lam in F.units:
                s = list(t)
                s[slot] = F.act(lam, t[slot])
                pairs.append((coords(tuple(s)), Fr.M.act(lam, coords(t))))
        if symmetric:
            for p in _adjacent_swaps(len(factors)):
                pairs.append((coords(t), coords(tuple(t[i] for i in p))))
    C = cong_closure(Fr.M, pairs)
    Q, qmap = quotient(C)
    pure = {t: qmap[coords(t)] for t in tuples}
    names: list[str | None] = [None] * Q.size
    names[Q.zero] = "0"
    for t, q in pure.items():
        if names[q] is None:
            names[q] = "*".join(F.names[a] for F, a in zip(factors, t))
    k = 0
    for i, nm in enumerate(names):
        if nm is None:
            k += 1
            names[i] = f"s{k}"
    Q = from_tables(Q.base, names, Q.zero, Q.add_table, Q.neg_table, scalar=Q.scalar_table,
                    label=label, check=False)
    return TensorProduct(Q, tuple(factors), pure, "literal")


@dataclass
class _Free:
    M: FiniteStructure
    n: int
    units: list

    @property
    def zero(self):
        return self.M.zero

    def line_element(self, i: int, u: Scalar) -> int:
        k = len(self.units)
        digits = [0] * self.n
        digits[i] = self.units.index(u) + 1
        idx = 0
        for d in digits:
            idx = idx * (k + 1) + d
        return idx


def _free_on(base: Semifield, n: int) -> _Free:
    units = base.elements()[1:]
    elements = list(iproduct(range(len(units) + 1), repeat=n))
    zero = (0,) * n

    def add(x, y):
        if x == zero or y == zero:
            return zero
        out = []
        for a, b in zip(x, y):
            if a and b:
                s = units[a - 1] + units[b - 1]
                if s.is_zero:
                    return zero
                out.append(a)
            else:
                out.append(a or b)
        return tuple(out)

    def act(u, x):
        return tuple(units.index(u * units[a - 1]) + 1 if a else 0 for a in x)

    names = ["0" if x == zero else "[" + ",".join(map(str, x)) + "]" for x in elements]
    M = _tables_from_elements(base, elements, zero, add, lambda x: act(base.minus, x), act, names,
                              label=f"free[{n}]")
    return _Free(M, n, units)


LITERAL_LINES = 5


def tensor(M1: FiniteStructure, M2: FiniteStructure, method: str = "auto") -> TensorProduct:
    """``M1 (x) M2`` with its bilinear map.

    ``literal`` quotients the free module on pure-tensor lines by the
    bilinearity congruence (at most five lines);
    ``embedding`` realises the same module inside ``F^Bil`` where ``Bil`` is
    the set of bilinear forms.
    """
    factors = (M1, M2)
    _same_base(factors)
    if method == "auto":
        method = "literal" if len(_lines(factors)[0]) <= LITERAL_LINES else "embedding"
    label = f"({M1.label})(x)({M2.label})"
    if method == "literal":
        return _literal_tensor(factors, label)
    if method == "embedding":
        return _embedded_tensor(factors, multilinear_forms(factors), label=label)
    raise ValueError(f"unknown method {method!r}")


def tensor_power(M: FiniteStructure, n: int, symmetric: bool = False,
                 method: str = "embedding") -> TensorProduct:
    if n < 1:
        raise ValueError("power must be positive")
    factors = tuple([M] * n)
    label = f"Sym^{n}({M.label})" if symmetric else f"({M.label})^(x){n}"
    if n == 1:
        ident = {(a,): a for a in M.elements}
        return TensorProduct(M, factors, ident, "identity")
    if method == "literal":
        return _literal_tensor(factors, label, symmetric=symmetric)
    forms = multilinear_forms(factors)
    if symmetric:
        tuples = list(iproduct(*(F.elements for F in factors)))
        forms = [f for f in forms
                 if all(f(t) == f(tuple(t[i] for i in p)) for t in tuples
                        for p in _adjacent_swaps(n))]
    return _embedded_tensor(factors, forms, label=label)


def _adjacent_swaps(n):
    out = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(tuple(p))
    return out


def sym_power(M: FiniteStructure, n: int, method: str = "embedding") -> TensorProduct:
    """``Sym^n M``: the n-fold tensor power modulo permutations of the factors."""
    return tensor_power(M, n, symmetric=True, method=method)


def sym_multiplication(M: FiniteStructure, n1: int, n2: int):
    """Graded product ``Sym^n1 x Sym^n2 -> Sym^(n1+n2)`` on pure tensors."""
    S1, S2, S = sym_power(M, n1), sym_power(M, n2), sym_power(M, n1 + n2)

    def mul(t1: tuple, t2: tuple) -> int:
        return S.pure[tuple(t1) + tuple(t2)]

    return S1, S2, S, mul


# -- projective constructions ---------------------------------------------------------

@dataclass
class ProjectiveSpace:
    points: list[frozenset]
    names: list[str]
    affine: dict  # element of M -> point index


def projectivize(M: FiniteStructure) -> list[frozenset[int]]:
    """Scalar orbits of nonzero elements."""
    seen, out = set(), []
    for a in M.nonzero:
        if a in seen:
            continue
        orbit = frozenset(M.act(u, a) for u in M.units)
        seen |= orbit
        out.append(orbit)
    return out


def projective_closure(M: FiniteStructure) -> ProjectiveSpace:
    """Points of ``P(M x F)``; classes with invertible last coordinate are affine."""
    N = product(M, line(M.base), algebra=False)
    points = projectivize(N)
    affine = {}
    for i, orbit in enumerate(points):
        for x in orbit:
            m, lam = divmod(x, N.size // M.size)
            # product elements are ordered (m, lam) lexicographically
            if lam == 1:
                affine[m] = i
    names = ["[" + N.names[min(o)] + "]" for o in points]
    if len(affine) != M.size:
        raise StructureError("affine part is not in bijection with M")
    return ProjectiveSpace(points, names, affine)


def function_ring_component(M: FiniteStructure, n: int, method: str = "embedding"
                            ) -> FiniteStructure:
    """Homogeneous degree-``n`` functions: ``Sym^n(M*)`` (the base line for n = 0)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return line(M.base)
    D = dual_module(M).module
    return sym_power(D, n, method=method).module


def graded_functions(M: FiniteStructure, n: int) -> FiniteStructure:
    """``Sym^0 + Sym^1(M*) + ... + Sym^n(M*)`` as a coproduct."""
    parts = [function_ring_component(M, k) for k in range(n + 1)]
    return parts[0] if len(parts) == 1 else coproduct(*parts)


def projective_function_component(M: FiniteStructure, n: int) -> FiniteStructure:
    """Degree-``n`` functions on the projective closure: ``Sym^n((M x F)*)``."""
    N = product(M, line(M.base), algebra=False)
    return function_ring_component(N, n)
