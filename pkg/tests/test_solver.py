import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import v_poset
from posetgames.constructions import negate, or_game
from posetgames.oracle import enumerate_posets, grundy_reference, random_poset
from posetgames.poset import (
    add_bottom_chain,
    antichain,
    apply_move,
    disjoint_union,
    empty,
    stack,
    tower,
)
from posetgames.solver import (
    BudgetExceeded,
    IntSet,
    SolveBudget,
    Solver,
    Winner,
    grundy,
    mex,
    nim_sum,
    winner,
    winning_move,
)


def test_mex():
    assert mex(set()) == 0
    assert mex({0, 1, 2}) == 3
    assert mex({1, 2, 5}) == 0


@given(st.integers(0, 2**20))
def test_nim_sum(x):
    assert nim_sum(x, 0) == x
    assert nim_sum(x, x) == 0


def test_nim_sum_bitwise():
    assert nim_sum(1, 2) == 3


class TestGrundy:
    def test_examples(self):
        assert grundy(tower(7)).grundy == 7
        assert grundy(antichain(2)).grundy == 0
        # frozen: grundy_reference(V) == 1 (moves reach {0, 2})
        assert grundy(v_poset()).grundy == 1

    def test_winner(self):
        assert winner(empty()) is Winner.SECOND
        assert winner(tower(1)) is Winner.FIRST
        assert winner(disjoint_union(tower(2), tower(2))) is Winner.SECOND

    def test_winning_move(self):
        assert winning_move(tower(5)) == 0
        assert winning_move(antichain(2)) is None
        # tower(1) is vertex 0, tower(3) is 1 < 2 < 3; taking 2 leaves 1 + 1
        assert winning_move(disjoint_union(tower(1), tower(3))) == 2

    def test_report_fields(self):
        r = grundy(disjoint_union(tower(2), v_poset()).materialize())
        assert r.grundy == 2 ^ 1
        assert r.winning_move is not None
        assert r.decomposition_hits >= 1
        assert r.positions_explored >= 1

    def test_budget(self):
        big = disjoint_union(antichain(6), stack(antichain(6), antichain(6))).materialize()
        with pytest.raises(BudgetExceeded) as exc:
            Solver(big, SolveBudget(10), decompose=False).value()
        assert exc.value.positions_explored > 10

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            SolveBudget(0)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            grundy(tower(1), method="magic")


def test_oracle_equivalence_small():
    for n in range(5):
        for p in enumerate_posets(n):
            assert grundy(p).grundy == grundy_reference(p)


def test_shortcuts_do_not_change_values():
    for p in enumerate_posets(5):
        want = grundy(p).grundy
        assert Solver(p, decompose=False, chain_rule=False, bottom_rule=False).value() == want
        assert Solver(p, bottom_rule=False).value() == want


def test_winning_move_properties():
    for p in enumerate_posets(4):
        r = grundy(p)
        assert r.grundy <= p.n
        if r.winning_move is None:
            assert r.grundy == 0
            assert all(grundy(apply_move(p, v)).grundy != 0 for v in range(p.n))
        else:
            assert grundy(apply_move(p, r.winning_move)).grundy == 0
            assert all(grundy(apply_move(p, v)).grundy != 0 for v in range(r.winning_move))


def test_memo_soundness():
    p = random_poset(9, 3, 0.2)
    s = Solver(p)
    first = s.report()
    assert s.report() == first
    assert grundy(p) == first


# -- interval sets ------------------------------------------------------------

int_sets = st.frozensets(st.integers(0, 80), max_size=30)


@given(int_sets, int_sets)
def test_intset_union(a, b):
    assert set(IntSet.of(a) | IntSet.of(b)) == a | b


@given(int_sets, st.integers(0, 255))
def test_intset_xor(a, c):
    assert set(IntSet.of(a).xor(c)) == {x ^ c for x in a}


@given(int_sets, int_sets)
def test_intset_select_absent(s, ranks):
    absent = [x for x in range(400) if x not in s]
    got = IntSet.of(s).select_absent(IntSet.of(ranks))
    assert set(got) == {absent[m] for m in ranks}
    for m in ranks:
        assert IntSet.of(s).absent_rank(absent[m]) == m


@given(int_sets, st.integers(0, 100))
def test_intset_contains(s, x):
    assert (x in IntSet.of(s)) == (x in s)


# -- structural evaluation agrees with subset search --------------------------


def _composites(depth):
    leaf = st.builds(random_poset, st.integers(0, 4), st.integers(0, 999), st.floats(0, 1))
    if depth == 0:
        return leaf
    sub = _composites(depth - 1)
    return st.one_of(
        leaf,
        st.builds(disjoint_union, sub, sub),
        st.builds(stack, sub, sub),
        st.builds(lambda p, k, s: add_bottom_chain(p, k, s), sub, st.integers(1, 3), st.integers(0, 3)),
        st.builds(lambda p: disjoint_union(p, tower(3)), sub),
    )


@settings(max_examples=200, deadline=None)
@given(_composites(3))
def test_structural_matches_search(p):
    a = grundy(p.materialize(), method="search")
    b = grundy(p, method="structural")
    assert (a.grundy, a.winning_move) == (b.grundy, b.winning_move)


@pytest.mark.parametrize("variant", ["procedure", "prose"])
def test_structural_matches_search_on_negations(variant):
    for p in [empty(), tower(1), antichain(2), v_poset(), random_poset(5, 1, 0.3)]:
        neg, _ = negate(p, variant)
        a = grundy(neg.materialize(), method="search")
        b = grundy(neg, method="structural")
        assert (a.grundy, a.winning_move) == (b.grundy, b.winning_move)
        gate = or_game(neg, antichain(2))
        assert grundy(gate.materialize()).grundy == grundy(gate).grundy


def test_structural_on_leaves():
    p = random_poset(7, 11, 0.35)
    a = grundy(p, method="search")
    b = grundy(p, method="structural")
    assert (a.grundy, a.winning_move) == (b.grundy, b.winning_move)


def test_stack_value_depends_on_upper_value_only():
    # Ordinal sums with equal-valued tops: V on antichain-2 vs tower(1) on it.
    base = antichain(2)
    assert grundy(stack(base, v_poset()).materialize()).grundy == grundy(
        stack(base, tower(1)).materialize()
    ).grundy
