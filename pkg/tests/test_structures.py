import pytest

import oracles
from finfty import structures as st
from finfty.constructions import coproduct, line
from finfty.scalars import FINF, cyclotomic


def test_polygon_shape():
    P = st.polygon_module(2)
    assert P.size == 9
    assert P.name(P.add(P.index("v0"), P.index("v1"))) == "e0"
    assert P.name(P.neg(P.index("v0"))) == "v2"
    assert P.add(P.index("v0"), P.index("v2")) == P.zero
    assert st.module_dimension(P) == 2


def test_polygon_too_small():
    with pytest.raises(st.StructureError):
        st.polygon_module(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polygon_order(n):
    P = st.polygon_module(n)
    O = st.natural_order(P)
    assert O.is_partial_order()
    assert sorted(P.name(a) for a in O.minimal) == sorted(f"e{i}" for i in range(2 * n))
    assert sorted(P.name(a) for a in O.maximal) == sorted(f"v{i}" for i in range(2 * n))
    assert sorted(P.name(a) for a in st.irreducibles(P)) == sorted(f"v{i}" for i in range(2 * n))


def test_nil2_tables():
    N = st.nil2()
    x, one = N.index("x"), N.one
    assert N.mul(x, x) == N.zero
    assert N.add(one, x) == N.zero
    assert st.axiom_witness(N) is None


def test_lexmax_window_and_sign_blind():
    W = st.lexmax_window_module(4)
    assert W.size == 1 + 2 * 9
    assert st.axiom_witness(W) is None
    with pytest.raises(st.AxiomError) as exc:
        st.lexmax_window_module(2, sign_blind=True)
    assert exc.value.axiom == "associativity"


def test_from_tables_rejects_bad_tables():
    # a + a must be a
    with pytest.raises(st.AxiomError):
        st.from_tables(FINF, ["0", "a", "-a"], 0,
                       [[0, 0, 0], [0, 2, 0], [0, 0, 2]], [0, 2, 1])


def test_filters_against_oracle(modules):
    for M in modules.values():
        if M.base != FINF:
            continue
        assert set(st.all_filters(M)) == set(oracles.brute_filters(M))


@pytest.mark.parametrize("name,count", [("line", 3), ("polygon(2)", 9), ("line+line", 9)])
def test_filter_counts(modules, name, count):
    assert len(st.all_filters(modules[name])) == count


def test_dual_and_double_dual(modules):
    for M in modules.values():
        D = st.dual_module(M)
        assert D.module.size == M.size
        assert st.axiom_witness(D.module) is None
        f = st.double_dual_map(M)
        assert oracles.is_isomorphism(M, st.dual_module(D.module).module, f)


def test_filter_to_hom_is_hom():
    P = st.polygon_module(2)
    L = line()
    for F in st.all_filters(P):
        h = st.filter_to_hom(P, F)
        images = [L.index(str(v)) for v in h]
        assert st.is_hom(P, L, images)


def test_duality_pair():
    P = st.polygon_module(2)
    v0, e0 = P.index("v0"), P.index("e0")
    assert st.duality_pair(P, e0, v0) == FINF.one
    assert st.duality_pair(P, e0, P.neg(v0)) == FINF.minus
    assert st.duality_pair(P, v0, e0) == FINF.zero
    assert st.duality_pair(P, v0, P.zero) is st.TOP
    with pytest.raises(st.StructureError):
        st.duality_pair(P, v0, P.zero, extended=False)


def test_join_and_top():
    P = st.polygon_module(2)
    e0, e1 = P.index("e0"), P.index("e1")
    assert P.name(st.join(P, e0, e1)) == "v1"
    assert st.join(P, P.index("v0"), P.index("v1")) is st.TOP
    C = st.OrderClosure(P)
    assert C.leq(P.index("v0"), st.TOP) and not C.leq(st.TOP, P.index("v0"))
    assert C.add(st.TOP, e0) == e0
    with pytest.raises(st.StructureError):
        C.act(FINF.zero, st.TOP)


@pytest.mark.parametrize("src,dst,count", [
    ("line", "polygon(2)", 9), ("polygon(2)", "line", 9), ("line+line", "line", 9),
    ("polygon(2)", "line+line", 81)])
def test_hom_counts(modules, src, dst, count):
    M1, M2 = modules[src], modules[dst]
    fast = list(st.enumerate_homs(M1, M2))
    assert len(fast) == count
    assert sorted(fast) == sorted(oracles.brute_homs(M1, M2))
    assert sorted(fast) == list(st.enumerate_homs(M1, M2, method="naive"))


def test_algebra_homs():
    F1 = st.semifield_structure(FINF)
    F2 = st.semifield_structure(cyclotomic(2))
    homs = list(st.enumerate_homs(F1, F2, algebra=True))
    assert homs == sorted(oracles.brute_homs(F1, F2, algebra=True))
    assert len(homs) == 1
    assert list(st.enumerate_homs(F2, F1, algebra=True)) == []


def test_hom_extend_refusal():
    P = st.polygon_module(2)
    L = line()
    gens = {P.index(f"v{i}"): L.index(s) for i, s in enumerate(["1", "1", "-1", "-1"])}
    r = st.hom_extend(P, L, gens)
    assert r.extends
    gens[P.index("v1")] = L.index("-1")
    gens[P.index("v3")] = L.index("1")
    gens[P.index("v0")] = L.index("1")
    gens[P.index("v2")] = L.index("-1")
    r2 = st.hom_extend(P, L, gens)
    assert r2.extends == any(all(h[g] == v for g, v in gens.items())
                             for h in oracles.brute_homs(P, L))


def test_hom_extend_requires_equivariance():
    P = st.polygon_module(2)
    L = line()
    gens = {P.index(f"v{i}"): L.index("1") for i in range(4)}
    with pytest.raises(st.StructureError):
        st.hom_extend(P, L, gens)


def test_hom_dual_formula():
    P = st.polygon_module(2)
    L = line()
    for h in st.enumerate_homs(L, P):
        phi = st.Homomorphism(L, P, h)
        d = st.hom_dual(phi)
        assert st.is_hom(d.source, d.target, d.images)


def test_find_isomorphism():
    L = line()
    A, B = coproduct(L, L), st.polygon_module(2)
    f = st.find_isomorphism(A, B)
    assert f is not None and oracles.is_isomorphism(A, B, list(f))
    assert not st.is_isomorphic(st.polygon_module(2), st.polygon_module(3))
    F2 = st.semifield_structure(cyclotomic(2))
    assert st.is_isomorphic(F2, st.semifield_structure(cyclotomic(2)), algebra=True)


def test_field_order_is_antichain(fields):
    for F in fields.values():
        O = st.natural_order(F)
        assert set(O.minimal) == set(F.nonzero) == set(O.maximal)
        assert st.module_dimension(F) == 1
