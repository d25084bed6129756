"""Exact arithmetic in idempotent semifields over F-infinity.

Three families are supported:

* group semifields ``G u {0}`` where ``G`` is a finite product of cyclic groups
  (order ``0`` stands for the infinite cyclic group) and ``-1`` is a chosen
  involution; ``F_inf`` and its cyclotomic extensions are special cases;
* ``LexMax(base)``: signed powers ``lam * t^e`` with ``lam`` a unit of a finite
  group semifield and ``e`` an integer.  Two terms with the same base unit add
  to the one with the larger exponent; anything else cancels to zero.

Addition always has ``0`` as an absorbing element (``0 + a = 0``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator


class SemifieldError(ValueError):
    pass


@dataclass(frozen=True)
class FInfinity:
    pass


@dataclass(frozen=True)
class Cyclotomic:
    k: int


@dataclass(frozen=True)
class GroupSemifield:
    orders: tuple[int, ...]
    minus_one: tuple[int, ...]


@dataclass(frozen=True)
class LexMax:
    base: object


@dataclass(frozen=True)
class Scalar:
    """An element of a :class:`Semifield`; ``g is None`` encodes zero."""

    field: "Semifield" = field(repr=False)
    g: tuple[int, ...] | None
    e: int = 0

    @property
    def is_zero(self) -> bool:
        return self.g is None

    def __add__(self, other: "Scalar") -> "Scalar":
        return self.field.add(self, other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return self.field.mul(self, other)

    def __neg__(self) -> "Scalar":
        return self.field.neg(self)

    def __pow__(self, n: int) -> "Scalar":
        return self.field.pow(self, n)

    def __str__(self) -> str:
        return self.field.format(self)


@dataclass(frozen=True)
class Semifield:
    orders: tuple[int, ...]
    minus_one: tuple[int, ...]
    lexmax: bool = False
    name: str = field(default="", compare=False)

    # -- construction helpers -------------------------------------------
    @property
    def is_finite(self) -> bool:
        return not self.lexmax and all(o > 0 for o in self.orders)

    @property
    def cyclotomic_k(self) -> int | None:
        """``k`` when this is F_inf^(k) (F_inf itself gives 1), else None."""
        if not self.lexmax and len(self.orders) == 1 and self.orders[0] > 0:
            if self.orders[0] % 2 == 0 and self.minus_one == (self.orders[0] // 2,):
                return self.orders[0] // 2
        return None

    def _norm(self, g) -> tuple[int, ...]:
        return tuple(x % o if o else x for x, o in zip(g, self.orders))

    def unit(self, g=None, e: int = 0) -> Scalar:
        if g is None:
            g = (0,) * len(self.orders)
        if isinstance(g, int):
            g = (g,)
        if len(g) != len(self.orders):
            raise SemifieldError(f"group element {g} has wrong arity")
        return Scalar(self, self._norm(g), e if self.lexmax else 0)

    @property
    def zero(self) -> Scalar:
        return Scalar(self, None, 0)

    @property
    def one(self) -> Scalar:
        return self.unit()

    @property
    def minus(self) -> Scalar:
        return self.unit(self.minus_one)

    def zeta(self, a: int = 1) -> Scalar:
        """``zeta^a`` for a single-generator group semifield."""
        if len(self.orders) != 1:
            raise SemifieldError("zeta needs a cyclic group")
        return self.unit((a,))

    def t(self, e: int = 1, g=None) -> Scalar:
        """The LexMax element ``g * t^e``."""
        if not self.lexmax:
            raise SemifieldError("t^e only exists in LexMax")
        return self.unit(g, e)

    # -- arithmetic ----------------------------------------------------
    def _check(self, *xs: Scalar) -> None:
        for x in xs:
            if x.field != self:
                raise SemifieldError(f"mixed semifields: {x.field.label} vs {self.label}")

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        self._check(a, b)
        if a.g is None or b.g is None or a.g != b.g:
            return self.zero
        if self.lexmax:
            return a if a.e >= b.e else b
        return a

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        self._check(a, b)
        if a.g is None or b.g is None:
            return self.zero
        return Scalar(self, self._norm(x + y for x, y in zip(a.g, b.g)), a.e + b.e)

    def neg(self, a: Scalar) -> Scalar:
        return self.mul(self.minus, a)

    def inv(self, a: Scalar) -> Scalar:
        self._check(a)
        if a.g is None:
            raise ZeroDivisionError("0 has no inverse")
        return Scalar(self, self._norm(-x for x in a.g), -a.e)

    def pow(self, a: Scalar, n: int) -> Scalar:
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = self.one
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def sum(self, xs) -> Scalar:
        xs = list(xs)
        if not xs:
            raise SemifieldError("empty sum has no value")
        out = xs[0]
        for x in xs[1:]:
            out = self.add(out, x)
        return out

    def leq(self, a: Scalar, b: Scalar) -> bool:
        return self.add(a, b) == a

    def embed(self, lam: Scalar) -> Scalar:
        """Image of a scalar of a (sub)semifield; F_inf embeds everywhere."""
        if lam.field == self:
            return lam
        src = lam.field
        if lam.g is None:
            return self.zero
        if lam.g == src.one.g and lam.e == 0:
            return self.one
        if lam.g == src.minus.g and lam.e == 0:
            return self.minus
        k, ell = src.cyclotomic_k, self.base_field.cyclotomic_k
        if k and ell and ell % k == 0:
            g = self.base_field.zeta(lam.g[0] * (ell // k))
            return self.unit(g.g, 0)
        raise SemifieldError(f"cannot embed {src.label} into {self.label}")

    # -- enumeration / display --------------------------------------------
    @property
    def base_field(self) -> "Semifield":
        if self.lexmax:
            return Semifield(self.orders, self.minus_one)
        return self

    def group_elements(self) -> Iterator[tuple[int, ...]]:
        if any(o == 0 for o in self.orders):
            raise SemifieldError(f"{self.label} has an infinite unit group")
        return product(*(range(o) for o in self.orders))

    def elements(self, bound: int | None = None) -> list[Scalar]:
        """Zero first, then units.  LexMax needs an exponent ``bound``."""
        if self.lexmax:
            if bound is None:
                raise SemifieldError("LexMax is infinite; pass an exponent bound")
            return [self.zero] + [
                Scalar(self, g, e)
                for g in self.base_field.group_elements()
                for e in range(-bound, bound + 1)
            ]
        return [self.zero] + [Scalar(self, g, 0) for g in self.group_elements()]

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        k = self.base_field.cyclotomic_k
        base = "Finf" if k == 1 else (f"Finf^{k}" if k else f"G{self.orders}/{self.minus_one}")
        return f"LexMax({base})" if self.lexmax else base

    def format(self, a: Scalar) -> str:
        if a.g is None:
            return "0"
        k = self.base_field.cyclotomic_k
        if k:
            r = a.g[0]
            sign, r = ("-", r - k) if r >= k else ("", r)
            unit = "1" if r == 0 else ("z" if r == 1 else f"z^{r}")
        else:
            sign, unit = "", "g(" + ",".join(map(str, a.g)) + ")"
        if not self.lexmax or a.e == 0:
            return sign + unit
        power = "t" if a.e == 1 else f"t^{a.e}"
        return sign + (power if unit == "1" else f"{unit}*{power}")

    def __str__(self) -> str:
        return self.label


def semifield_make(spec) -> Semifield:
    """Build a semifield from a spec object (or a ready :class:`Semifield`)."""
    if isinstance(spec, Semifield):
        return spec
    if isinstance(spec, FInfinity):
        return Semifield((2,), (1,))
    if isinstance(spec, Cyclotomic):
        if spec.k < 1:
            raise SemifieldError("cyclotomic degree must be positive")
        return Semifield((2 * spec.k,), (spec.k,))
    if isinstance(spec, GroupSemifield):
        orders = tuple(spec.orders)
        if len(spec.minus_one) != len(orders) or any(o < 0 for o in orders):
            raise SemifieldError("bad cyclic presentation")
        sf = Semifield(orders, tuple(spec.minus_one))
        m = sf.unit(spec.minus_one)
        if m == sf.one:
            raise SemifieldError("minusOne must not be the identity (a + (-a) = 0 would fail)")
        if sf.mul(m, m) != sf.one:
            raise SemifieldError(f"minusOne {spec.minus_one} has order > 2")
        return Semifield(orders, m.g)
    if isinstance(spec, LexMax):
        base = spec.base
        if isinstance(base, LexMax) or (isinstance(base, Semifield) and base.lexmax):
            raise SemifieldError("LexMax over LexMax is not supported")
        b = semifield_make(base)
        if not b.is_finite:
            raise SemifieldError("LexMax base must be finite")
        return Semifield(b.orders, b.minus_one, lexmax=True)
    raise SemifieldError(f"unknown semifield spec {spec!r}")


FINF = semifield_make(FInfinity())


def cyclotomic(k: int) -> Semifield:
    return semifield_make(Cyclotomic(k))


def lexmax(base=None) -> Semifield:
    return semifield_make(LexMax(base if base is not None else FInfinity()))


def sign_blind_lexmax_add(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int] | None:
    """The literal ``x^i + x^j = x^i (i >= j)`` rule read without signs.

    Elements are ``(sign, exponent)``; ``None`` is zero.  Kept only to show the
    rule is not associative.
    """
    if a is None or b is None:
        return None
    if a == b:
        return a
    if a[1] == b[1]:
        return None
    return a if a[1] > b[1] else b


def axiom_violations(sf: Semifield, bound: int = 8) -> list[tuple[str, tuple]]:
    """Exhaustively check the module/algebra axioms on the (bounded) carrier."""
    els = sf.elements(bound) if sf.lexmax else sf.elements()
    bad: list[tuple[str, tuple]] = []
    z = sf.zero
    for a in els:
        if sf.add(a, a) != a:
            bad.append(("idempotence", (a,)))
        if sf.add(a, sf.neg(a)) != z:
            bad.append(("inverse", (a,)))
        if sf.neg(sf.neg(a)) != a:
            bad.append(("double negation", (a,)))
        if sf.add(z, a) != z or sf.mul(a, z) != z:
            bad.append(("zero", (a,)))
        if sf.mul(a, sf.one) != a:
            bad.append(("unit", (a,)))
        for b in els:
            s = sf.add(a, b)
            if s != sf.add(b, a):
                bad.append(("commutativity", (a, b)))
            if sf.neg(s) != sf.add(sf.neg(a), sf.neg(b)):
                bad.append(("negation", (a, b)))
            if sf.mul(sf.neg(a), b) != sf.neg(sf.mul(a, b)):
                bad.append(("sign", (a, b)))
            for c in els:
                if sf.add(s, c) != sf.add(a, sf.add(b, c)):
                    bad.append(("associativity", (a, b, c)))
                bc = sf.add(b, c)
                lhs = sf.mul(a, bc)
                rhs = sf.add(sf.mul(a, b), sf.mul(a, c))
                if lhs != rhs:
                    bad.append(("distributivity", (a, b, c)))
                if sf.mul(sf.mul(a, b), c) != sf.mul(a, sf.mul(b, c)):
                    bad.append(("multiplicative associativity", (a, b, c)))
    return bad
