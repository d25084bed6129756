import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from finfty.constructions import coproduct, line, product  # noqa: E402
from finfty.scalars import FINF, GroupSemifield, cyclotomic, semifield_make  # noqa: E402
from finfty.structures import nil2, polygon_module, semifield_structure  # noqa: E402


def field_fixtures():
    out = {f"Finf^{k}": semifield_structure(cyclotomic(k)) for k in range(1, 7)}
    out["Finf"] = out.pop("Finf^1")
    for orders in ((2, 2), (2, 3)):
        sf = semifield_make(GroupSemifield(orders, (1, 0)))
        out[f"G{orders}"] = semifield_structure(sf)
    return out


def algebra_fixtures(max_size=10):
    S = semifield_structure(FINF)
    out = {k: v for k, v in field_fixtures().items() if v.size <= max_size}
    out["FinfxFinf"] = product(S, S)
    out["nil2"] = nil2()
    return out


def module_fixtures(max_size=20):
    L = line()
    out = {
        "line": L,
        "polygon(2)": polygon_module(2),
        "polygon(3)": polygon_module(3),
        "polygon(4)": polygon_module(4),
        "line+line": coproduct(L, L),
        "linexline": product(L, L),
        "line^(2)": line(cyclotomic(2)),
    }
    return {k: v for k, v in out.items() if v.size <= max_size}


@pytest.fixture(scope="session")
def fields():
    return field_fixtures()


@pytest.fixture(scope="session")
def algebras():
    return algebra_fixtures()


@pytest.fixture(scope="session")
def modules():
    return module_fixtures()


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
