"""Command-line driver.

Exit codes: 0 success, 1 a checked property was refuted (a witness is
printed), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from pathlib import Path

from . import congruence as cg
from . import constructions as cons
from . import primes as pr
from . import structures as st
from . import textio
from .scalars import FINF, cyclotomic

EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


class Refuted(Exception):
    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


# -- structure arguments --------------------------------------------------------------

def resolve_structure(text: str) -> st.FiniteStructure:
    """A path, a bundled file name, or one of ``Finf``, ``Finf^k``, ``polygon(n)``,
    ``nil2``, ``lexmax(b)``."""
    p = Path(text)
    if p.exists():
        return textio.load_structure(p)
    for cand in (text, text + ".finalg"):
        if (textio.DATA_DIR / cand).exists():
            return textio.load_bundled(cand)
    if text in ("Finf", "finf"):
        return st.semifield_structure(FINF)
    m = re.fullmatch(r"[Ff]inf\^(\d+)", text)
    if m:
        return st.semifield_structure(cyclotomic(int(m.group(1))))
    m = re.fullmatch(r"polygon\((\d+)\)", text)
    if m:
        return st.polygon_module(int(m.group(1)))
    if text == "nil2":
        return st.nil2()
    m = re.fullmatch(r"lexmax\((\d+)\)", text)
    if m:
        return st.lexmax_window_module(int(m.group(1)))
    raise textio.ParseError(f"cannot resolve structure {text!r}")


def _names(M, xs):
    return [M.name(a) for a in xs]


def _summary(M: st.FiniteStructure) -> list[str]:
    kind = "algebra" if M.is_algebra else "module"
    return [f"{kind} {M.label} over {M.base.label}", f"size {M.size}",
            "elements " + " ".join(M.names)]


def _pairs_text(path: str | None) -> str:
    if path is None:
        return ""
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


# -- verbs ------------------------------------------------------------------------------
# Each returns (human lines, report dict).

def cmd_axioms(args):
    M = resolve_structure(args.structure)
    w = st.axiom_witness(M)
    flags = {"axioms": w is None, "commutative": st.is_commutative(M) if M.is_algebra else None}
    if w:
        raise Refuted(f"axiom {w[0]} fails at {', '.join(_names(M, w[1]))}",
                      textio.report("axioms", flags=flags,
                                    witness={"axiom": w[0], "elements": _names(M, w[1])}))
    lines = _summary(M) + ["all axioms hold"]
    return lines, textio.report("axioms", flags=flags, verified=True)


def cmd_order(args):
    M = resolve_structure(args.structure)
    O = st.natural_order(M)
    covers = []
    for a in M.elements:
        for b in M.elements:
            if a != b and O.leq[a][b] and not any(
                    c not in (a, b) and O.leq[a][c] and O.leq[c][b] for c in M.elements):
                covers.append((M.name(a), M.name(b)))
    lines = [f"{a} < {b}" for a, b in covers]
    lines.append("minimal " + " ".join(_names(M, O.minimal)))
    lines.append("maximal " + " ".join(_names(M, O.maximal)))
    return lines, textio.report("order", flags={"partial_order": O.is_partial_order()},
                                result={"covers": covers, "minimal": _names(M, O.minimal),
                                        "maximal": _names(M, O.maximal)})


def cmd_dim(args):
    M = resolve_structure(args.structure)
    d = st.module_dimension(M)
    return [f"dimension {d}"], textio.report("dim", result={"dimension": d})


def cmd_dual(args):
    M = resolve_structure(args.structure)
    D = st.dual_module(M)
    lines = _summary(D.module)
    for i, F in enumerate(D.filters):
        lines.append(f"{D.module.names[i]} = {{{', '.join(_names(M, sorted(F)))}}}")
    same = D.module.size == M.size
    return lines, textio.report("dual", flags={"same_size": same},
                                result={"size": D.module.size, "elements": list(D.module.names)})


def cmd_join(args):
    M = resolve_structure(args.structure)
    a, b = M.index(args.a), M.index(args.b)
    j = st.join(M, a, b)
    return [f"{M.name(a)} v {M.name(b)} = {M.name(j)}"], \
        textio.report("join", result={"join": M.name(j)})


def _structure_out(cmd, M, args, extra=None):
    lines = _summary(M)
    if args.dump:
        lines.append(textio.dump_structure(M).rstrip("\n"))
    result = {"size": M.size, "elements": list(M.names)}
    if extra:
        result.update(extra)
    return lines, textio.report(cmd, result=result)


def cmd_polygon(args):
    return _structure_out("polygon", st.polygon_module(args.n), args)


def cmd_coproduct(args):
    return _structure_out("coproduct", cons.coproduct(*map(resolve_structure, args.structures)),
                          args)


def cmd_product(args):
    Ms = list(map(resolve_structure, args.structures))
    return _structure_out("product", cons.product(*Ms), args)


def cmd_tensor(args):
    Ms = list(map(resolve_structure, args.structures))
    if len(Ms) != 2:
        raise textio.ParseError("tensor takes two structures")
    T = cons.tensor(Ms[0], Ms[1], method=args.method)
    return _structure_out("tensor", T.module, args, {"method": T.method})


def cmd_sym(args):
    M = resolve_structure(args.structure)
    S = cons.sym_power(M, args.n)
    return _structure_out("sym", S.module, args, {"n": args.n})


def cmd_pclosure(args):
    M = resolve_structure(args.structure)
    P = cons.projective_closure(M)
    lines = [f"points {len(P.points)}", "affine " + " ".join(
        f"{M.name(m)}->{P.names[i]}" for m, i in sorted(P.affine.items()))]
    lines.append("at infinity " + " ".join(
        P.names[i] for i in range(len(P.points)) if i not in set(P.affine.values())))
    return lines, textio.report("pclosure", result={"points": P.names})


def cmd_funring(args):
    M = resolve_structure(args.structure)
    S = cons.function_ring_component(M, args.n)
    return _structure_out("funring", S, args, {"n": args.n})


def cmd_congruence(args):
    text = _pairs_text(args.pairs)
    if args.structure:
        M = resolve_structure(args.structure)
        C = cg.cong_closure(M, textio.parse_element_pairs(text, M))
        lines = [f"blocks {len(C.blocks())}", C.describe()]
        return lines, textio.report("congruence", result={"blocks": [
            _names(M, b) for b in C.blocks()]})
    bound = args.bound if args.bound is not None else 4
    ring, pairs = textio.parse_poly_pairs(text)
    bc = cg.cong_closure_bounded(ring, pairs, bound)
    lines = [f"ring F_inf[{','.join(ring.variables)}], degree <= {bound}",
             f"classes {len(set(bc.labels()))} on {len(bc.carrier)} polynomials"]
    queries = []
    for q in args.query or []:
        left, right = textio.read_pair_lines(q)[0][:2]
        queries.append((textio.parse_poly(left, ring), textio.parse_poly(right, ring)))
    if args.sample:
        rng = random.Random(args.seed)
        for _ in range(args.sample):
            queries.append((rng.choice(bc.carrier), rng.choice(bc.carrier)))
    answers = []
    for p, q in queries:
        r = bc.contains(p, q)
        note = f" [{r.model.name}]" if r.model else ""
        lines.append(f"({p}, {q}) {r.status.value}{note}")
        answers.append({"pair": [str(p), str(q)], "status": r.status.value,
                        "model": r.model.name if r.model else None})
    return lines, textio.report("congruence", bound=bound, verified="bounded",
                                result={"classes": len(set(bc.labels())), "queries": answers})


def _congruence_arg(M, args) -> cg.Congruence:
    return cg.cong_closure(M, textio.parse_element_pairs(_pairs_text(args.pairs), M))


def cmd_classify(args):
    M = resolve_structure(args.structure)
    C = _congruence_arg(M, args)
    cls = pr.classify_congruence(M, C)
    lines = [C.describe()]
    for k, v in cls.flags.items():
        lines.append(f"{k} {v}")
    wit = cls.named_witness(M)
    for k, w in wit.items():
        lines.append(f"witness {k}: {w['condition']} ({', '.join(w['elements'])})")
    return lines, textio.report("classify", flags=cls.flags, witness=wit or None)


def cmd_spec(args):
    M = resolve_structure(args.structure)
    sp = pr.spec_poset(M)
    chain = [sp.primes[i].describe() for i in sp.chain]
    return [sp.to_dot()], textio.report(
        "spec", chain=chain, result={"primes": [P.describe() for P in sp.primes],
                                     "dimension": sp.krull_dimension, "dot": sp.to_dot()})


def cmd_krull(args):
    bound = args.bound if args.bound is not None else 8
    k = pr.krull_via_catalog(args.n_max, bound, verify=not args.no_verify)
    chain = [e.describe() for e in k.chain_entries()]
    lines = [f"dimension {k.dimension}"] + [f"  {c}" for c in chain]
    for pair, model, upper in k.separators:
        lines.append(f"strict: {pair} fails in {model}, holds in family {upper}")
    payload = {"dimension": k.dimension, "separators": [list(s) for s in k.separators]}
    if args.two_variable:
        tv = pr.two_variable_chain(args.degree)
        lines.append(f"two variables (degree <= {tv.degree}): {tv.status}")
        for s in tv.steps:
            lines.append(f"  {s.name} [{s.model.name}]")
        payload["two_variable"] = {"status": tv.status, "steps": [s.name for s in tv.steps]}
        if not tv.ok:
            raise Refuted("two-variable chain not verified", textio.report(
                "krull", chain=chain, bound=bound, verified=False, result=payload))
    verified = "bounded-verified" if not args.no_verify else None
    return lines, textio.report("krull", chain=chain, bound=bound, verified=verified,
                                result=payload)


def _verify_lines(r: pr.VerifyReport) -> list[str]:
    lines = [r.entry.describe(), f"  status {r.status} (bound {r.bound})"]
    lines += [f"  {n}" for n in r.notes]
    for k, w in r.witness.items():
        lines.append(f"  witness {k}: {w}")
    return lines


def _verify_payload(r: pr.VerifyReport) -> dict:
    return {"family": r.entry.family, "n": r.entry.n, "status": r.status,
            "generators": r.entry.generator_text(), "model": r.entry.model.name,
            "checks": {"hom": r.hom_ok, "generators": r.generators_ok, "prime": r.prime_ok,
                       "lemma": r.lemma_ok, "closure": r.closure_ok},
            "witness": {k: str(v) for k, v in r.witness.items()}}


def cmd_catalog(args):
    bound = args.bound if args.bound is not None else 8
    if args.family is None:
        entries = pr.polyprime_catalog(args.n or 2)
    elif args.family in range(8, 14):
        entries = [pr.catalog_entry(args.family, args.n or 1)]
    else:
        entries = [pr.catalog_entry(args.family)]
    if not args.verify:
        lines = [e.describe() for e in entries]
        return lines, textio.report("catalog", result={"entries": [
            {"family": e.family, "n": e.n, "generators": e.generator_text(),
             "model": e.model.name} for e in entries]})
    reports = [pr.verify_catalog_entry(e, bound) for e in entries]
    return _verify_out("catalog", reports, bound)


def _verify_out(cmd, reports, bound):
    lines = [l for r in reports for l in _verify_lines(r)]
    bad = [r for r in reports if not r.ok]
    status = "refuted" if bad else (
        "verified" if all(r.status == "verified" for r in reports) else "bounded-verified")
    rep = textio.report(cmd, bound=bound, verified=status,
                        flags={r.entry.name: r.ok for r in reports},
                        witness={r.entry.name: _verify_payload(r)["witness"] for r in bad} or None,
                        result={"entries": [_verify_payload(r) for r in reports]})
    if bad:
        raise Refuted(f"{len(bad)} catalog entries refuted", rep)
    return lines, rep


def cmd_verify_catalog(args):
    bound = args.bound if args.bound is not None else 8
    reports = [pr.verify_catalog_entry(e, bound) for e in pr.polyprime_catalog(args.n_max)]
    return _verify_out("verify-catalog", reports, bound)


def cmd_decompose(args):
    M = resolve_structure(args.structure)
    C = _congruence_arg(M, args)
    r = pr.prime_decomposition_check(M, C)
    lines = [f"congruence {C.describe()}", f"cancellative {r.cancellative}",
             f"primes above {len(r.primes)}"]
    lines += [f"  {P.describe()}" for P in r.primes]
    lines.append(f"intersection {r.intersection.describe()}")
    lines.append(f"equal {r.equal}")
    gap = [[M.name(a), M.name(b)] for a, b in r.gap]
    rep = textio.report("decompose", flags={"cancellative": r.cancellative, "equal": r.equal},
                        witness={"gap": gap} if gap else None,
                        result={"primes": [P.describe() for P in r.primes]})
    if not r.ok:
        raise Refuted("cancellative congruence is not the intersection of primes above it", rep)
    return lines, rep


def cmd_fraction_field(args):
    M = resolve_structure(args.structure)
    cls = pr.classify_congruence(M, cg.diagonal(M))
    if not cls.is_cancellative:
        wit = cls.named_witness(M)["is_cancellative"]
        raise Refuted("diagonal is not cancellative: (" + ", ".join(wit["elements"]) + ")",
                      textio.report("fraction-field", flags={"cancellative": False},
                                    witness=wit))
    ff = pr.fraction_field(M)
    F = ff.field
    lines = _summary(F) + ["embedding " + " ".join(
        f"{M.name(a)}->{F.name(b)}" for a, b in zip(M.elements, ff.embedding))]
    return lines, textio.report("fraction-field", flags={"cancellative": True,
                                                         "field": cg.is_field(F)},
                                result={"size": F.size, "elements": list(F.names)})


def cmd_maxcong(args):
    M = resolve_structure(args.structure)
    ideal = [M.index(x) for x in args.ideal.split()] if args.ideal else [M.zero]
    C = cg.max_congruence_algebra(M, ideal) if M.is_algebra else \
        cg.max_congruence_module(M, ideal)
    return [C.describe()], textio.report("maxcong", result={"blocks": [
        _names(M, b) for b in C.blocks()]})


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a JSON report")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized sampling")
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS,
                        help="degree or exponent bound")
    p = argparse.ArgumentParser(prog="finfty", parents=[common],
                                description="Exact algebra over F_inf = {-1, 0, 1}.")
    sub = p.add_subparsers(dest="command", required=True)

    def verb(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    def one(name, fn, help_):
        s = verb(name, fn, help_)
        s.add_argument("structure")
        return s

    one("axioms", cmd_axioms, "check module/algebra axioms")
    one("order", cmd_order, "natural order: covers, minimal and maximal elements")
    one("dim", cmd_dim, "module dimension")
    one("dual", cmd_dual, "dual module of filters")
    s = one("join", cmd_join, "least upper bound in the order closure")
    s.add_argument("a")
    s.add_argument("b")
    s = verb("polygon", cmd_polygon, "face module of the regular 2n-gon")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dump", action="store_true")
    for name, fn in (("coproduct", cmd_coproduct), ("product", cmd_product)):
        s = verb(name, fn, name)
        s.add_argument("structures", nargs="+")
        s.add_argument("--dump", action="store_true")
    s = verb("tensor", cmd_tensor, "tensor product of two modules")
    s.add_argument("structures", nargs=2)
    s.add_argument("--method", choices=["auto", "literal", "embedding"], default="auto")
    s.add_argument("--dump", action="store_true")
    s = one("sym", cmd_sym, "symmetric power")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dump", action="store_true")
    one("pclosure", cmd_pclosure, "projective closure")
    s = one("funring", cmd_funring, "degree-n component of the function ring")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dump", action="store_true")
    s = verb("congruence", cmd_congruence,
             "congruence generated by pairs (bounded closure for polynomials)")
    s.add_argument("structure", nargs="?")
    s.add_argument("--pairs", required=True)
    s.add_argument("--query", action="append", help="'p ~ q' membership query")
    s.add_argument("--sample", type=int, default=0, help="random membership queries")
    for name, fn, help_ in (("classify", cmd_classify, "prime/radical/cancellative flags"),
                            ("decompose", cmd_decompose, "intersection of primes above C")):
        s = one(name, fn, help_)
        s.add_argument("--pairs")
    one("spec", cmd_spec, "prime spectrum as a DOT Hasse diagram")
    s = verb("krull", cmd_krull, "Krull dimension of F_inf[x] from the catalog")
    s.add_argument("--n-max", type=int, default=4)
    s.add_argument("--no-verify", action="store_true")
    s.add_argument("--two-variable", action="store_true")
    s.add_argument("--degree", type=int, default=2)
    s = verb("catalog", cmd_catalog, "prime congruences of F_inf[x]")
    s.add_argument("--family", type=int, choices=range(1, 15))
    s.add_argument("--n", type=int)
    s.add_argument("--verify", action="store_true")
    s = verb("verify-catalog", cmd_verify_catalog, "verify every catalog family")
    s.add_argument("--n-max", type=int, default=4)
    one("fraction-field", cmd_fraction_field, "field of fractions")
    s = one("maxcong", cmd_maxcong, "largest congruence with a given kernel")
    s.add_argument("--ideal", help="space-separated ideal elements (default: {0})")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    args.bound = getattr(args, "bound", None)
    if args.command == "catalog":
        args.verify = args.verify or args.bound is not None
    try:
        lines, rep = args.fn(args)
        code = EXIT_OK
    except Refuted as exc:
        lines, rep, code = [f"refuted: {exc}"], exc.payload, EXIT_REFUTED
    except st.AxiomError as exc:
        lines = [f"refuted: {exc}"]
        rep = textio.report(args.command, flags={"axioms": False},
                            witness={"axiom": exc.axiom, "elements": list(exc.witness)})
        code = EXIT_REFUTED
    except (textio.ParseError, st.StructureError, cg.CongruenceError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json:
            rep = textio.report(args.command, verified=False, witness={"error": str(exc)})
            print(json.dumps(rep, indent=2, sort_keys=True))
        return EXIT_INPUT
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
