from dataclasses import replace
from fractions import Fraction as F

import pytest

from rauzy_ends.boundary import (
    Sample,
    choose_shift,
    connectivity_report,
    d_path,
    rauzy_connect,
    s_connect,
    shrink_witness,
    verify_connection,
    verify_path,
)
from rauzy_ends.classes import rauzy_class
from rauzy_ends.dynamics import G, act
from rauzy_ends.errors import InfeasibleConstraints, MoveUndefined, NotRegular, Reducible, VerificationFailure
from rauzy_ends.genperm import Move, parse, reduce
from rauzy_ends.suspension import (
    SuspensionDatum,
    Vec,
    area,
    check_suspension,
    is_embedded,
    small_symbols,
)

P = parse
TORUS = P("1 2 / 2 1")
PILLOW = P("1 1 2 2 / 3 3")
REDUCIBLE = reduce(P("4 4 3 3 2 / 1 2 1"))[0]


def _in_D(p, z, a, eps):
    return check_suspension(p, z) == [] and is_embedded(p, z) and a in small_symbols(p, z, eps)


def test_shrink_witness_torus():
    z = shrink_witness(TORUS, 1, F(1, 10))
    assert _in_D(TORUS, z, 1, F(1, 10))


def test_shrink_witness_errors():
    with pytest.raises(NotRegular):
        shrink_witness(P("1 2 3 4 3 / 2 4 5 5 1 6 6"), 3, F(1, 10))
    with pytest.raises(Reducible):
        shrink_witness(REDUCIBLE, 1, F(1, 10))
    with pytest.raises(ValueError):
        shrink_witness(TORUS, 1, 0)


def test_rauzy_connect_torus():
    w = rauzy_connect(TORUS, Move.R1, F(1, 10))
    assert w.source == w.target == TORUS
    verify_connection(w)


def test_rauzy_connect_example_target():
    w = rauzy_connect(P("1 2 3 4 3 / 2 4 5 5 1"), Move.R0, F(1, 10))
    assert str(w.target) == "1 2 1 3 4 3 / 2 4 5 5"
    assert w.target_zeta[w.target_symbol] == w.source_zeta[w.source_symbol]
    assert area(w.source, w.source_zeta) == area(w.target, w.target_zeta)
    assert _in_D(w.target, w.target_zeta, w.target_symbol, F(1, 10))


def test_rauzy_connect_errors():
    with pytest.raises(NotRegular):
        rauzy_connect(P("1 1 2 / 2 3 3"), Move.R0, F(1, 2))  # moving symbol 3 is alone in the bottom line
    with pytest.raises(MoveUndefined):
        rauzy_connect(P("1 1 2 2 / 3 3"), Move.R0, F(1, 2))
    with pytest.raises(Reducible):
        rauzy_connect(REDUCIBLE, Move.R0, F(1, 2))
    with pytest.raises(ValueError):
        rauzy_connect(TORUS, Move.S, F(1, 2))


def test_s_connect_torus():
    w = s_connect(TORUS, 1)
    z = w.source_zeta
    assert z[1].im + z[2].im == 0
    assert "rotation" in w.note
    verify_connection(w)


def test_s_connect_gate():
    with pytest.raises(InfeasibleConstraints):
        s_connect(P("1 2 1 / 2 3 3 4 4"), F(1, 2))
    with pytest.raises(Reducible):
        s_connect(REDUCIBLE, F(1, 2))


def test_tampered_connection_is_rejected():
    w = rauzy_connect(P("1 2 3 4 / 4 3 2 1"), Move.R0, F(1, 2))
    zeta = list(w.target_zeta.zeta)
    zeta[0] = zeta[0] + Vec(F(1, 1000), 0)
    with pytest.raises(VerificationFailure):
        verify_connection(replace(w, target_zeta=SuspensionDatum(tuple(zeta))))
    with pytest.raises(VerificationFailure):
        verify_connection(replace(w, move=Move.R1))
    with pytest.raises(VerificationFailure):
        verify_connection(replace(w, eps=F(1, 10**6)))


def test_d_path_torus():
    eps = F(1, 2)
    z1 = shrink_witness(TORUS, 1, eps)
    z2 = z1.scaled(2)
    assert z1 != z2 and _in_D(TORUS, z2, 1, eps)
    w = d_path(TORUS, z1, z2, eps, samples=5)
    assert len(w.legs) == 1 and w.legs[0].shift in ((1,), (2,))
    assert w.endpoints == (z1, z2)
    assert len(w.legs[0].samples) == 15
    verify_path(w)


def _only_short(p, a, eps):
    z = shrink_witness(p, a, eps)
    for k in range(-12, 13):
        zz = act(p, z, G(F(2) ** k))
        if small_symbols(p, zz, eps) == [a]:
            return zz
    raise AssertionError("no witness with a single short symbol")


def test_d_path_pillowcase_routes_through_intermediate():
    z1, z2 = _only_short(PILLOW, 1, 1), _only_short(PILLOW, 2, 1)
    assert choose_shift(PILLOW, 1, 2) is None
    w = d_path(PILLOW, z1, z2, 1, samples=5)
    assert len(w.legs) == 2 and w.intermediate is not None
    assert set(small_symbols(PILLOW, w.intermediate, 1)) >= {1, 2}
    verify_path(w)


def test_d_path_preconditions():
    z = shrink_witness(TORUS, 1, F(1, 2))
    with pytest.raises(ValueError):
        d_path(TORUS, z, z, F(1, 2), samples=1)
    far = SuspensionDatum.from_pairs([1 + 1j, 1 - 1j])
    with pytest.raises(ValueError):
        d_path(TORUS, z, far, F(1, 10))


def test_tampered_path_is_rejected():
    eps = F(1, 2)
    z1 = shrink_witness(TORUS, 1, eps)
    w = d_path(TORUS, z1, z1.scaled(2), eps, samples=5)
    leg = w.legs[0]
    bad = replace(leg, samples=leg.samples[:2])
    with pytest.raises(VerificationFailure):
        verify_path(replace(w, legs=(bad,)))
    s0 = leg.samples[0]
    flipped = replace(leg, samples=(Sample(s0.segment, s0.t, s0.symbol, not s0.embedded),) + leg.samples[1:])
    with pytest.raises(VerificationFailure):
        verify_path(replace(w, legs=(flipped,)))


@pytest.mark.parametrize("text", ["1 2 / 2 1", "1 2 3 4 / 4 3 2 1", "1 1 2 2 / 3 3"])
def test_report_small_classes(text):
    c = rauzy_class(P(text), extended=True)
    r = connectivity_report(c, F(1, 2))
    assert r.connected and r.replay_failures == 0
    j = r.as_json()
    assert j["verified_edges"] + j["unverified_edges"] == len({(a, mv) for a, mv, _ in c.edges})
    assert j["eps"] == "1/2"


def test_report_needs_extended_class():
    with pytest.raises(ValueError):
        connectivity_report(rauzy_class(TORUS), F(1, 2))
