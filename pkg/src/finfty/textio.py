"""Text formats: polynomial expressions, ``.finalg`` structure files, pair files.

Polynomial grammar::

    poly   := '0' | term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := coeff | var ['^' nat]
    coeff  := '1' | 'z' ['^' nat]
    var    := letter alnum*          (``z`` is reserved)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .poly import Polynomial, Ring, poly_add, polynomial_ring
from .scalars import FINF, Scalar, Semifield, cyclotomic
from .structures import FiniteStructure, RawTables, StructureError, build_structure


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"offset {pos}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


# -- polynomials -----------------------------------------------------------------

def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def format_scalar_coeff(lam: Scalar) -> tuple[str, str]:
    """Sign and unit part of a coefficient, e.g. ``("-", "z^2")``; unit ``""`` for 1."""
    s = lam.field.format(lam)
    sign = ""
    if s.startswith("-"):
        sign, s = "-", s[1:]
    return sign, ("" if s == "1" else s)


def format_monomial(ring: Ring, m) -> str:
    parts = []
    for v, e in zip(ring.variables, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    """Canonical text, terms in ascending graded-lex order: ``1 + x - x^2``."""
    if p.is_zero:
        return "0"
    out = []
    for i, (m, c) in enumerate(p.terms):
        sign, unit = format_scalar_coeff(c)
        mono = format_monomial(p.ring, m)
        body = "*".join(s for s in (unit, mono) if s) or "1"
        if i == 0:
            out.append(sign + body)
        else:
            out.append(f" {'-' if sign else '+'} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*^~]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        i = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _PolyParser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_nat(self) -> int:
        t = self.cur
        if t.kind != "num":
            raise ParseError("expected a natural number", t.pos)
        self.i += 1
        return int(t.text)

    def parse(self) -> Polynomial:
        if self.cur.kind == "num" and self.cur.text == "0" and self.toks[self.i + 1].kind == "end":
            return self.ring.zero
        p = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.take().text
            q = self.term()
            if op == "-":
                q = -q
            p = poly_add(p, q)
        if self.cur.kind != "end":
            raise ParseError(f"unexpected {self.cur.text!r}", self.cur.pos)
        return p

    def term(self) -> Polynomial:
        base = self.ring.base
        coeff = base.one
        if self.cur.kind == "op" and self.cur.text == "-":
            self.take()
            coeff = base.minus
        exps = [0] * self.ring.nvars
        coeff = base.mul(coeff, self.factor(exps))
        while self.cur.kind == "op" and self.cur.text == "*":
            self.take()
            coeff = base.mul(coeff, self.factor(exps))
        return self.ring.monomial(tuple(exps), coeff)

    def factor(self, exps: list[int]) -> Scalar:
        t = self.cur
        base = self.ring.base
        if t.kind == "num":
            if t.text != "1":
                raise ParseError(f"only 1 is a numeric coefficient, got {t.text}", t.pos)
            self.take()
            return base.one
        if t.kind == "name":
            self.take()
            power = 1
            if self.cur.kind == "op" and self.cur.text == "^":
                self.take()
                power = self.expect_nat()
            if t.text == "z":
                k = base.cyclotomic_k
                if not k or k == 1:
                    raise ParseError("'z' needs a cyclotomic base", t.pos)
                return base.zeta(power)
            if t.text not in self.ring.variables:
                raise ParseError(f"unknown variable {t.text!r}", t.pos)
            exps[self.ring.variables.index(t.text)] += power
            return base.one
        raise ParseError("expected a coefficient or variable" if t.kind != "end"
                         else "unexpected end of input", t.pos)


def parse_poly(text: str, ring: Ring | None = None) -> Polynomial:
    if ring is None:
        ring = infer_ring([text])
    return _PolyParser(text, ring).parse()


def variables_in(text: str) -> set[str]:
    return {m for m in re.findall(r"[A-Za-z][A-Za-z0-9]*", text) if m != "z"}


def infer_ring(texts, base: Semifield = FINF) -> Ring:
    names = set()
    for t in texts:
        names |= variables_in(t)
    return polynomial_ring(sorted(names, key=_natural_key) or ["x"], base)


def parse_scalar(text: str, base: Semifield) -> Scalar:
    ring = Ring(base, ())
    p = _PolyParser(text, ring).parse()
    if p.is_zero:
        return base.zero
    if len(p.terms) != 1:
        raise ParseError(f"not a scalar: {text!r}")
    return p.terms[0][1]


# -- pair files -------------------------------------------------------------------

def read_pair_lines(text: str) -> list[tuple[str, str, int]]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("~") != 1:
            raise ParseError("expected 'expr ~ expr'", line=n)
        a, b = (s.strip() for s in line.split("~"))
        if not a or not b:
            raise ParseError("empty side of '~'", line=n)
        out.append((a, b, n))
    return out


def parse_poly_pairs(text: str, ring: Ring | None = None, base: Semifield = FINF):
    rows = read_pair_lines(text)
    if ring is None:
        ring = infer_ring([s for a, b, _ in rows for s in (a, b)], base)
    pairs = []
    for a, b, n in rows:
        try:
            pairs.append((parse_poly(a, ring), parse_poly(b, ring)))
        except ParseError as exc:
            raise ParseError(str(exc), line=n) from None
    return ring, pairs


def parse_element_pairs(text: str, M: FiniteStructure) -> list[tuple[int, int]]:
    pairs = []
    for a, b, n in read_pair_lines(text):
        try:
            pairs.append((M.index(a), M.index(b)))
        except StructureError as exc:
            raise ParseError(str(exc), line=n) from None
    return pairs


# -- .finalg ----------------------------------------------------------------------

_SINGLE = {"kind", "base", "elements", "zero", "one"}


def _parse_base(text: str) -> Semifield:
    if text == "Finf":
        return FINF
    m = re.fullmatch(r"Finf\^(\d+)", text)
    if m and int(m.group(1)) >= 1:
        return cyclotomic(int(m.group(1)))
    raise ParseError(f"unknown base {text!r}")


def parse_structure(text: str, label: str = "") -> FiniteStructure:
    lines = [(n, l.split("#", 1)[0].split()) for n, l in enumerate(text.splitlines(), 1)]
    lines = [(n, w) for n, w in lines if w]
    if not lines or lines[0][1] != ["finalg", "v1"]:
        raise ParseError("missing header 'finalg v1'", line=lines[0][0] if lines else 1)
    seen: dict[str, int] = {}
    header: dict[str, list[str]] = {}
    rows = []
    completion = "none"
    for n, words in lines[1:]:
        key, args = words[0], words[1:]
        if key in _SINGLE:
            if key in seen:
                raise ParseError(f"duplicate '{key}' line", line=n)
            seen[key] = n
            header[key] = args
        elif key in ("neg", "add", "mul", "scalar"):
            rows.append((n, key, args))
        elif key == "complete":
            if args != ["associative"]:
                raise ParseError("expected 'complete associative'", line=n)
            completion = "associative"
        elif key == "default-add":
            if args != ["zero"]:
                raise ParseError("expected 'default-add zero'", line=n)
            if completion == "none":
                completion = "zero"
        else:
            raise ParseError(f"unknown key {key!r}", line=n)
    for key in ("kind", "elements", "zero"):
        if key not in header:
            raise ParseError(f"missing '{key}' line")
    kind = " ".join(header["kind"])
    if kind not in ("module", "algebra"):
        raise ParseError(f"kind must be module or algebra, got {kind!r}", line=seen["kind"])
    base = _parse_base(" ".join(header.get("base", ["Finf"])))
    elements = header["elements"]
    declared = set(elements)

    def check(n, key, names):
        for x in names:
            if x not in declared:
                raise ParseError(f"{key} row names unknown element {x!r}", line=n)

    zero = " ".join(header["zero"])
    check(seen["zero"], "zero", [zero])
    one = None
    if "one" in header:
        one = " ".join(header["one"])
        check(seen["one"], "one", [one])
    raw = RawTables(elements=elements, zero=zero, kind=kind, base=base, one=one,
                    completion=completion, label=label)
    for n, key, args in rows:
        want = 2 if key == "neg" else 3
        if len(args) != want:
            raise ParseError(f"{key} row needs {want} fields", line=n)
        if key == "scalar":
            try:
                lam = parse_scalar(args[0], base)
            except ParseError as exc:
                raise ParseError(f"bad scalar: {exc}", line=n) from None
            check(n, key, args[1:])
            tkey, table, val = (lam, args[1]), raw.scalar, args[2]
        else:
            check(n, key, args)
            table = {"neg": raw.neg, "add": raw.add, "mul": raw.mul}[key]
            tkey = args[0] if key == "neg" else (args[0], args[1])
            val = args[-1]
        if tkey in table:
            raise ParseError(f"duplicate {key} entry", line=n)
        table[tkey] = val
    return build_structure(raw)


def _base_text(base: Semifield) -> str:
    k = base.cyclotomic_k
    if k == 1:
        return "Finf"
    if k:
        return f"Finf^{k}"
    raise ParseError(f"base {base.label} has no .finalg spelling")


def dump_structure(M: FiniteStructure) -> str:
    """Full tables; reading the result back gives the same structure."""
    for nm in M.names:
        if not nm or any(c.isspace() for c in nm) or "#" in nm:
            raise ParseError(f"element name {nm!r} cannot be written")
    out = ["finalg v1", f"kind {'algebra' if M.is_algebra else 'module'}",
           f"base {_base_text(M.base)}", "elements " + " ".join(M.names),
           f"zero {M.names[M.zero]}"]
    if M.one is not None:
        out.append(f"one {M.names[M.one]}")
    for a in M.elements:
        if a < M.neg(a):
            out.append(f"neg {M.names[a]} {M.names[M.neg(a)]}")
    N = M.names
    for a in M.elements:
        for b in M.elements:
            if a < b and M.zero not in (a, b) and b != M.neg(a):
                out.append(f"add {N[a]} {N[b]} {N[M.add(a, b)]}")
    if M.is_algebra:
        for a in M.elements:
            for b in M.elements:
                out.append(f"mul {N[a]} {N[b]} {N[M.mul(a, b)]}")
    k = M.base.cyclotomic_k
    if k and k > 1:
        z = M.base.zeta(1)
        for a in M.elements:
            out.append(f"scalar z {N[a]} {N[M.act(z, a)]}")
    return "\n".join(out) + "\n"


DATA_DIR = Path(__file__).resolve().parent / "data"


def load_bundled(name: str) -> FiniteStructure:
    path = DATA_DIR / name
    return parse_structure(path.read_text(), label=path.stem)


def load_structure(path: str | Path) -> FiniteStructure:
    path = Path(path)
    if not path.exists() and (DATA_DIR / path.name).exists():
        path = DATA_DIR / path.name
    return parse_structure(path.read_text(), label=path.stem)


# -- JSON reports -----------------------------------------------------------------

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "finfty report",
    "type": "object",
    "required": ["command", "flags", "witness", "bound", "verified", "chain"],
    "properties": {
        "command": {"type": "string"},
        "flags": {"type": "object", "additionalProperties": {"type": ["boolean", "null"]}},
        "witness": {},
        "bound": {"type": ["integer", "null"]},
        "verified": {"type": ["string", "boolean", "null"]},
        "chain": {"type": ["array", "null"], "items": {"type": "string"}},
        "result": {},
    },
    "additionalProperties": False,
}


def report(command: str, *, flags=None, witness=None, bound=None, verified=None,
           chain=None, result=None) -> dict:
    return {
        "command": command,
        "flags": flags or {},
        "witness": witness,
        "bound": bound,
        "verified": verified,
        "chain": chain,
        "result": result,
    }
