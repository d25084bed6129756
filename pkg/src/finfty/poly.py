"""Polynomial rings ``F[x1..xn]`` over a semifield.

The ring is the coproduct of the monomial lines ``m * F``.  Addition merges
supports, but a single monomial whose coefficients cancel turns the *whole*
sum into ``0`` (``0 + p = 0`` in the coproduct).  So ``(1 + x) + (-x) == 0``,
not ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping

from .scalars import FINF, Scalar, Semifield

Monomial = tuple[int, ...]


class RingMismatch(ValueError):
    pass


def _key(m: Monomial):
    # graded lexicographic, x1 before x2
    return (sum(m), tuple(-e for e in m))


@dataclass(frozen=True)
class Ring:
    base: Semifield
    variables: tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    @property
    def one(self) -> "Polynomial":
        return self.const(self.base.one)

    def const(self, lam: Scalar) -> "Polynomial":
        return self.monomial((0,) * self.nvars, lam)

    def monomial(self, exps: Monomial, lam: Scalar | None = None) -> "Polynomial":
        lam = self.base.one if lam is None else self.base.embed(lam)
        if lam.is_zero:
            return self.zero
        return Polynomial(self, ((tuple(exps), lam),))

    def var(self, name: str | int) -> "Polynomial":
        i = self.variables.index(name) if isinstance(name, str) else name
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(tuple(exps))

    def from_terms(self, terms: Mapping[Monomial, Scalar]) -> "Polynomial":
        """Canonical polynomial with the given (already merged) coefficients."""
        items = tuple(sorted(((tuple(m), c) for m, c in terms.items() if not c.is_zero),
                             key=lambda t: _key(t[0])))
        return Polynomial(self, items)

    # algebra interface used by substitution and closure code
    def add(self, p: "Polynomial", q: "Polynomial") -> "Polynomial":
        return poly_add(p, q)

    def mul(self, p: "Polynomial", q: "Polynomial") -> "Polynomial":
        return poly_mul(p, q)

    def embed(self, lam: Scalar) -> "Polynomial":
        return self.const(lam)

    def monomials(self, degree: int) -> list[Monomial]:
        """All monomials of total degree <= ``degree`` in graded-lex order."""
        out = [m for m in product(range(degree + 1), repeat=self.nvars) if sum(m) <= degree]
        return sorted(out, key=_key)

    def bounded_carrier(self, degree: int) -> list["Polynomial"]:
        """Every polynomial of degree <= ``degree`` (finite base only)."""
        units = self.base.elements()[1:]
        mons = self.monomials(degree)
        out = []
        for choice in product(range(len(units) + 1), repeat=len(mons)):
            out.append(self.from_terms({m: units[c - 1] for m, c in zip(mons, choice) if c}))
        return out

    def __str__(self) -> str:
        return f"{self.base.label}[{','.join(self.variables)}]"


@dataclass(frozen=True)
class Polynomial:
    ring: Ring
    terms: tuple[tuple[Monomial, Scalar], ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def coeffs(self) -> dict[Monomial, Scalar]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return poly_add(self, other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return poly_mul(self, other)

    def __neg__(self) -> "Polynomial":
        return poly_scale(self.ring.base.minus, self)

    def __pow__(self, n: int) -> "Polynomial":
        out = self.ring.one
        for _ in range(n):
            out = poly_mul(out, self)
        return out

    def __str__(self) -> str:
        from .textio import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def _same_ring(p: Polynomial, q: Polynomial) -> None:
    if p.ring != q.ring:
        raise RingMismatch(f"{p.ring} vs {q.ring}")


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    _same_ring(p, q)
    if p.is_zero or q.is_zero:
        return p.ring.zero
    merged = dict(p.terms)
    for m, c in q.terms:
        if m in merged:
            s = merged[m] + c
            if s.is_zero:
                return p.ring.zero
            merged[m] = s
        else:
            merged[m] = c
    return p.ring.from_terms(merged)


def poly_sum(ring: Ring, ps: Iterable[Polynomial]) -> Polynomial:
    ps = list(ps)
    if not ps:
        raise ValueError("empty sum")
    out = ps[0]
    for p in ps[1:]:
        out = poly_add(out, p)
    return out


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _same_ring(p, q)
    if p.is_zero or q.is_zero:
        return p.ring.zero
    merged: dict[Monomial, Scalar] = {}
    for m1, c1 in p.terms:
        for m2, c2 in q.terms:
            m = tuple(a + b for a, b in zip(m1, m2))
            c = c1 * c2
            if m in merged:
                c = merged[m] + c
                if c.is_zero:
                    return p.ring.zero
            merged[m] = c
    return p.ring.from_terms(merged)


def poly_scale(lam: Scalar, p: Polynomial) -> Polynomial:
    lam = p.ring.base.embed(lam)
    if lam.is_zero:
        return p.ring.zero
    return Polynomial(p.ring, tuple((m, lam * c) for m, c in p.terms))


def substitute(p: Polynomial, target, images: Mapping[str, object]):
    """Evaluate ``p`` in ``target`` with each variable sent to ``images[var]``.

    ``target`` needs ``add``, ``mul``, ``one``, ``zero`` and ``embed`` (a
    :class:`Semifield`, a :class:`Ring` or an algebra
    :class:`~finfty.structures.FiniteStructure`).
    """
    missing = [v for v in p.ring.variables if v not in images]
    if missing:
        raise KeyError(f"missing image for {', '.join(missing)}")
    if p.is_zero:
        return target.zero
    xs = [images[v] for v in p.ring.variables]
    out = None
    for m, c in p.terms:
        val = target.embed(c)
        for x, e in zip(xs, m):
            for _ in range(e):
                val = target.mul(val, x)
        out = val if out is None else target.add(out, val)
    return out


def term_iter(ring: Ring, max_degree: int, max_terms: int) -> Iterator[Polynomial]:
    """Polynomials with at most ``max_terms`` terms of degree <= ``max_degree``."""
    from itertools import combinations

    units = ring.base.elements()[1:]
    mons = ring.monomials(max_degree)
    yield ring.zero
    for k in range(1, max_terms + 1):
        for ms in combinations(mons, k):
            for cs in product(units, repeat=k):
                yield ring.from_terms(dict(zip(ms, cs)))


def random_poly(ring: Ring, rng, max_degree: int = 6, max_terms: int = 4) -> Polynomial:
    if rng.random() < 0.05:
        return ring.zero
    mons = ring.monomials(max_degree)
    k = rng.randint(1, max_terms)
    units = ring.base.elements()[1:]
    chosen = rng.sample(mons, min(k, len(mons)))
    return ring.from_terms({m: rng.choice(units) for m in chosen})


def polynomial_ring(variables: Iterable[str] | str = "x", base: Semifield = FINF) -> Ring:
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",")]
    return Ring(base, tuple(variables))
