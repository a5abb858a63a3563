import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PROPERTY_CASES
from oracles import bottom_move, canon, top_move
from rauzy_ends.errors import MoveUndefined, PermutationError
from rauzy_ends.genperm import (
    GenPerm,
    Move,
    all_reduced,
    apply_move,
    format_perm,
    is_abelian,
    is_reduced,
    parse,
    reduce,
    regular_symbols,
    relabel,
    shrinking_symbol,
)

P = parse


def test_reduction_example():
    q, f = reduce(P("3 4 1 2 1 / 4 2 5 5 3"))
    assert format_perm(q) == "1 2 3 4 3 / 2 4 5 5 1"
    assert f == {3: 1, 4: 2, 1: 3, 2: 4, 5: 5}


@pytest.mark.parametrize(
    "move, expected",
    [
        (Move.R0, "1 2 1 3 4 3 / 2 4 5 5"),
        (Move.R1, "1 2 3 2 4 / 3 4 5 5 1"),
        (Move.S, "1 2 2 3 4 / 5 3 5 4 1"),
    ],
)
def test_move_table(move, expected):
    assert format_perm(apply_move(P("1 2 3 4 3 / 2 4 5 5 1"), move)) == expected


def test_regular_symbols_excludes_lonely_single_line_symbol():
    assert regular_symbols(P("1 2 3 4 3 / 2 4 5 5 1 6 6")) == {1, 2, 4, 5, 6}


def test_reduced_form_of_reducible_example():
    assert format_perm(reduce(P("4 4 3 3 2 / 1 2 1"))[0]) == "1 1 2 2 3 / 4 3 4"


@pytest.mark.parametrize(
    "text",
    ["1 2 / 2", "1 1 2 / 2 3", "1 2 / 2 1 / 3", "a b / b a", " / 1 1", "0 0 / 1 1", "1 3 / 3 1"],
)
def test_malformed(text):
    with pytest.raises(PermutationError):
        P(text)


def test_parse_round_trip():
    for text in ["1 2 / 2 1", "1 1 2 2 / 3 3", "1 2 1 / 2 3 3 4 4"]:
        assert format_perm(P(text)) == text


def test_basic_fields():
    p = P("1 2 3 4 3 / 2 4 5 5 1")
    assert (p.l, p.m, p.d, p.type) == (5, 5, 5, (5, 5))
    assert p.sigma[0] == 10 and p.sigma[9] == 1
    assert p.top_only() == {3} and p.bottom_only() == {5}
    assert not is_abelian(p) and is_abelian(P("1 2 / 2 1"))


def test_undefined_moves():
    with pytest.raises(MoveUndefined):
        apply_move(P("1 1 / 2 2"), Move.R0)  # nothing else lives only in the bottom line
    with pytest.raises(MoveUndefined):
        apply_move(P("1 2 / 1 2"), Move.R1)


def test_shrinking_symbol():
    p = P("1 2 3 4 3 / 2 4 5 5 1")
    assert shrinking_symbol(p, Move.R0) == 1 and shrinking_symbol(p, Move.R1) == 3
    with pytest.raises(ValueError):
        shrinking_symbol(p, Move.S)


def test_all_reduced_counts_and_canonicity():
    # (2d)! / (2^d d!) pairings times 2d - 1 splits
    for d, pairings in ((2, 3), (3, 15), (4, 105)):
        perms = list(all_reduced(d))
        assert len(perms) == pairings * (2 * d - 1) == len(set(perms))
        assert all(is_reduced(p) for p in perms)


def test_moves_agree_with_independent_oracle():
    for d in (2, 3, 4):
        for p in all_reduced(d):
            for move, oracle in ((Move.R0, top_move), (Move.R1, bottom_move)):
                want = oracle(p.top, p.bottom)
                try:
                    got = apply_move(p, move)
                except MoveUndefined:
                    got = None
                assert (None if got is None else (got.top, got.bottom)) == want, (p, move)


@st.composite
def any_perm(draw):
    d = draw(st.integers(1, 7))
    seq = draw(st.permutations([a for a in range(1, d + 1) for _ in (0, 1)]))
    l = draw(st.integers(1, 2 * d - 1)) if d > 1 else 1
    return GenPerm(tuple(seq[:l]), tuple(seq[l:]))


@settings(max_examples=PROPERTY_CASES)
@given(any_perm(), st.randoms(use_true_random=False))
def test_reduce_idempotent_and_relabel_invariant(p, rnd):
    q, f = reduce(p)
    assert reduce(q)[0] == q
    assert relabel(p, f) == q
    assert (q.top, q.bottom) == canon(p.top, p.bottom)
    names = list(range(1, p.d + 1))
    rnd.shuffle(names)
    g = dict(zip(range(1, p.d + 1), names))
    assert reduce(relabel(p, g))[0] == q


@settings(max_examples=PROPERTY_CASES)
@given(any_perm())
def test_s_is_an_involution(p):
    q = reduce(p)[0]
    assert apply_move(apply_move(q, Move.S), Move.S) == q
