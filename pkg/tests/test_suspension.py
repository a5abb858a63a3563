from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PROPERTY_CASES, base_witness, irreducible_perms, suspension_pairs
from oracles import is_simple, polygon, shoelace
from rauzy_ends.errors import InfeasibleConstraints, MissingSymbol, NotEmbedded
from rauzy_ends.genperm import parse, reduce
from rauzy_ends.suspension import (
    SuspensionDatum,
    Vec,
    WitnessConstraints,
    area,
    check_suspension,
    combine,
    in_D,
    is_embedded,
    is_irreducible,
    parse_datum,
    signed_area,
    small_symbols,
    witness_suspension,
)

P = parse
Z = SuspensionDatum.from_pairs
EXAMPLE = P("1 2 1 / 2 3 3 4 4")
EXAMPLE_ZETA = Z([2 + 2j, 1 - 1j, 1 - 2j, 1 + 4j])
SQUARE = Z([1 + 1j, 1 - 1j])
TORUS = P("1 2 / 2 1")


def _raw(p, z):
    return polygon(p.top, p.bottom, [(v.re, v.im) for v in z.zeta])


def test_example_datum_is_a_suspension():
    assert check_suspension(EXAMPLE, EXAMPLE_ZETA) == []
    assert is_irreducible(EXAMPLE)


def test_example_datum_fails_after_half_turn_reduction():
    q, f = reduce(P("4 4 3 3 2 / 1 2 1"))
    bad = check_suspension(q, EXAMPLE_ZETA.relabeled({a: a for a in range(1, 5)}))
    assert bad and not is_irreducible(q)


def test_reports_every_violation():
    z = Z([1 - 1j, -1 + 1j])
    got = {(v.condition, v.index) for v in check_suspension(TORUS, z)}
    assert ("1", 1) in got and ("2", 1) in got and ("re>0", 2) in got


def test_missing_symbol():
    with pytest.raises(MissingSymbol):
        check_suspension(EXAMPLE, SQUARE)


def test_torus_square():
    assert check_suspension(TORUS, SQUARE) == []
    assert is_embedded(TORUS, SQUARE)
    assert area(TORUS, SQUARE) == 2
    assert area(TORUS, SQUARE.scaled(F(1, 2))) == F(1, 2)


def test_embedding_agrees_with_segment_oracle_on_examples():
    assert is_embedded(EXAMPLE, EXAMPLE_ZETA) is True
    assert is_simple(_raw(EXAMPLE, EXAMPLE_ZETA))
    tall = Z([1 + 10j, 1 - 0.1j]).scaled(F(1, 3))
    assert check_suspension(TORUS, tall) == []
    assert is_embedded(TORUS, tall) == is_simple(_raw(TORUS, tall))


def test_example_area_matches_shoelace_oracle():
    assert area(EXAMPLE, EXAMPLE_ZETA) == shoelace(_raw(EXAMPLE, EXAMPLE_ZETA)) == 16


def test_non_embedded_area_raises():
    p = P("1 2 3 4 / 4 1 3 2")
    z = Z([1 + 5j, 1 - 4j, 3 + 0j, 8 - 8j])  # the bottom line climbs over the top one
    assert check_suspension(p, z) == []
    assert not is_embedded(p, z) and not is_simple(_raw(p, z))
    with pytest.raises(NotEmbedded):
        area(p, z)
    assert area(p, z, require_embedded=False) == abs(signed_area(p, z))


def test_in_D_examples():
    assert in_D(TORUS, SQUARE, 2) in (1, 2)
    assert in_D(TORUS, SQUARE, F(1, 10)) is None
    p = P("1 2 3 4 3 / 2 4 5 5 1 6 6")
    z = witness_suspension(p)
    tiny = SuspensionDatum(tuple(v if a != 3 else Vec(F(1, 10**9), v.im / 10**6) for a, v in enumerate(z.zeta, 1)))
    # shrinking only the lonely top symbol keeps every regular side long
    if check_suspension(p, tiny) == [] and is_embedded(p, tiny):
        assert 3 not in small_symbols(p, tiny, F(1, 10))
    assert 3 not in small_symbols(p, z, 10**6)


def test_irreducibility_examples():
    assert is_irreducible(TORUS)
    assert not is_irreducible(reduce(P("4 4 3 3 2 / 1 2 1"))[0])
    assert not is_irreducible(P("1 1 / 2 2"))
    assert not is_irreducible(P("1 2 / 1 2"))


def test_witness_constraints():
    z = witness_suspension(TORUS, WitnessConstraints(zero_im_sum=True))
    assert z[1].im + z[2].im == 0 and check_suspension(TORUS, z) == []
    for order in ("<", ">"):
        p = P("1 2 3 4 / 4 3 2 1")
        z = witness_suspension(p, WitnessConstraints(re_order=order))
        assert (z[4].re < z[1].re) == (order == "<")
    z = witness_suspension(TORUS, WitnessConstraints(caps=((1, F(1, 1000)),)))
    assert z[1].re <= F(1, 1000)
    with pytest.raises(InfeasibleConstraints):
        witness_suspension(reduce(P("4 4 3 3 2 / 1 2 1"))[0])
    with pytest.raises(InfeasibleConstraints):
        witness_suspension(P("1 1 / 2 2 3 3"), WitnessConstraints(zero_im_sum=True))


def test_datum_text_round_trip():
    z = parse_datum("(2, 2) (1/1, -1) (1, -2/1) (1, 4)")
    assert z == EXAMPLE_ZETA
    assert str(z) == "(2/1, 2/1) (1/1, -1/1) (1/1, -2/1) (1/1, 4/1)"
    with pytest.raises(ValueError):
        parse_datum("(1, 2) junk")


@settings(max_examples=PROPERTY_CASES)
@given(suspension_pairs())
def test_embedding_and_area_match_oracles(pz):
    p, z = pz
    ring = _raw(p, z)
    assert is_embedded(p, z) == is_simple(ring)
    if is_embedded(p, z):
        assert area(p, z) == shoelace(ring)


@settings(max_examples=PROPERTY_CASES)
@given(irreducible_perms)
def test_witness_passes_checker(p):
    z = base_witness(p)
    assert check_suspension(p, z) == [] and is_embedded(p, z)


@settings(max_examples=PROPERTY_CASES)
@given(irreducible_perms, st.data())
def test_convex_combinations_stay_suspension_data(p, data):
    z1 = data.draw(suspension_pairs(st.just(p)))[1]
    z2 = data.draw(suspension_pairs(st.just(p)))[1]
    t = F(data.draw(st.integers(0, 1000)), 1000)
    assert check_suspension(p, combine(z1, z2, t)) == []


@settings(max_examples=PROPERTY_CASES)
@given(suspension_pairs(), st.fractions(min_value=F(1, 1000), max_value=1000), st.fractions(min_value=F(1, 100), max_value=10))
def test_in_D_scale_covariant(pz, t, eps):
    p, z = pz
    if not is_embedded(p, z):
        return
    assert small_symbols(p, z.scaled(t), eps) == small_symbols(p, z, eps)
    assert area(p, z.scaled(t)) == t * t * area(p, z)
