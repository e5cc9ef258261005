import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from moufang.constructions import (
    CML81,
    E1,
    E2,
    E3,
    E4,
    ConstructionSpec,
    build,
    coords,
    cyclic,
    elementary_abelian_3,
    index,
    parse_spec,
    product,
)
from moufang.errors import InputError, SizeOverflow
from moufang.loop import is_associative, is_cml, whole, generate
from moufang.structure import loop_center, min_generators, nilpotency_class_loop


@pytest.mark.parametrize(
    "text, spec",
    [
        ("cyclic(9)", cyclic(9)),
        ("Z9", cyclic(9)),
        ("c3", cyclic(3)),
        ("elementary_abelian_3(2)", elementary_abelian_3(2)),
        ("ea3(4)", elementary_abelian_3(4)),
        ("cml81", CML81),
        ("product(cml81, cyclic(3))", product(CML81, cyclic(3))),
        ("product(product(z2,z2),cyclic(5))", product(product(cyclic(2), cyclic(2)), cyclic(5))),
    ],
)
def test_parse_spec(text, spec):
    assert parse_spec(text) == spec
    assert parse_spec(str(spec)) == spec


@pytest.mark.parametrize("text", ["", "foo(3)", "cyclic", "cyclic(x)", "cyclic(3", "product(cml81)", "cml81 extra"])
def test_bad_specs(text):
    with pytest.raises(InputError):
        parse_spec(text)


def test_orders():
    assert product(CML81, cyclic(3)).order == 243
    assert elementary_abelian_3(4).order == 81
    with pytest.raises(SizeOverflow):
        build("product(cml81,cml81)")
    with pytest.raises(InputError):
        build("cyclic(0)")


def test_cyclic_and_elementary_abelian():
    assert build("cyclic(3)").table.tolist() == oracles.cyclic_table(3)
    E = build("elementary_abelian_3(2)")
    assert E.table.tolist() == oracles.product_table(oracles.cyclic_table(3), oracles.cyclic_table(3))
    assert build("elementary_abelian_3(0)").order == 1


@given(st.integers(0, 80))
def test_coords_roundtrip(x):
    assert index(coords(x)) == x
    assert all(c in (0, 1, 2) for c in coords(x))


def test_standard_generators():
    assert [coords(e) for e in (E1, E2, E3, E4)] == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]


def test_cml81_properties(cml81):
    assert cml81.table.tolist() == oracles.cml81_table()
    assert is_cml(cml81).passed and is_associative(cml81).failed
    assert cml81.exponent() == 3
    assert loop_center(cml81).order == 3
    assert nilpotency_class_loop(cml81) == 2
    assert min_generators(cml81)[0] == 3
    assert generate(cml81, [E1, E2, E3]) == whole(cml81)


def test_product_is_certified(big):
    assert big.order == 243
    assert big.cml_report.passed
    assert nilpotency_class_loop(big) == 2


def test_uncertified_build_skips_check():
    L = build("cyclic(4)", certify=False)
    assert "cml_report" not in L.__dict__


def test_spec_str():
    assert str(product(CML81, cyclic(3))) == "product(cml81, cyclic(3))"
    assert ConstructionSpec("cyclic", 5).order == 5
