import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import isomorphic, relation, v_poset
from posetgames.oracle import enumerate_posets, random_poset
from posetgames.poset import (
    BottomChain,
    FormatError,
    Original,
    Poset,
    StackSide,
    TowerVertex,
    add_bottom,
    add_bottom_chain,
    antichain,
    apply_move,
    components,
    disjoint_union,
    dumps,
    empty,
    loads,
    stack,
    tower,
    validate,
)
from posetgames.solver import grundy


def small_posets(max_n=6):
    return st.builds(
        random_poset,
        st.integers(0, max_n),
        st.integers(0, 2**32),
        st.floats(0.0, 1.0),
    )


class TestConstructors:
    def test_empty(self):
        p = empty()
        assert p.n == 0
        assert relation(p) == set()
        assert grundy(p).grundy == 0
        assert components(p) == []

    def test_tower(self):
        assert tower(0) == empty()
        assert tower(1).n == 1 and grundy(tower(1)).grundy == 1
        five = tower(5)
        assert relation(five) == {(u, v) for u in range(5) for v in range(u + 1, 5)}
        assert grundy(five).grundy == 5
        assert all(isinstance(lbl, TowerVertex) for lbl in five.provenance)

    def test_add_bottom(self):
        assert add_bottom(empty()).n == 1
        assert grundy(add_bottom(tower(3))).grundy == 4
        assert isomorphic(add_bottom(add_bottom(empty())), tower(2))

    def test_add_bottom_keeps_old_relations(self):
        p = v_poset()
        q = add_bottom(p)
        assert q.n == 4
        assert relation(q) == relation(p) | {(3, v) for v in range(3)}

    def test_add_bottom_chain(self):
        assert isomorphic(add_bottom_chain(empty(), 3, 0), tower(3))
        # frozen: reference solver value of the 4-chain
        assert grundy(add_bottom_chain(tower(2), 2, 0)).grundy == 4
        p = random_poset(5, 7, 0.4)
        assert add_bottom_chain(p, 3, 1).n == p.n + 3

    def test_bottom_chain_order_and_labels(self):
        q = add_bottom_chain(tower(1), 3, 2)
        # each new vertex sits below everything present when it was added
        assert q.less(1, 0) and q.less(2, 1) and q.less(3, 2) and q.less(3, 0)
        assert q.provenance[1:] == (
            BottomChain(2, 0, 1),
            BottomChain(2, 1, 2),
            BottomChain(2, 2, 3),
        )

    def test_disjoint_union(self):
        p = v_poset()
        assert disjoint_union(empty(), p) == p
        assert grundy(disjoint_union(tower(1), tower(1))).grundy == 0
        assert grundy(disjoint_union(disjoint_union(tower(1), tower(2)), tower(3))).grundy == 0
        u = disjoint_union(tower(2), v_poset())
        assert relation(u) == {(0, 1), (4, 2), (4, 3)}
        assert [lbl.order for lbl in u.provenance] == list(range(5))

    def test_stack(self):
        assert isomorphic(stack(tower(1), tower(1)), tower(2))
        p = v_poset()
        assert stack(empty(), p) == p
        assert grundy(stack(antichain(2), tower(1))).winner == "First"
        s = stack(antichain(2), tower(1))
        assert relation(s) == {(0, 2), (1, 2)}
        assert s.provenance[2] == StackSide("upper", TowerVertex(0, 0, 0), 2)


class TestMoves:
    def test_apply_move_examples(self):
        assert apply_move(tower(3), 0) == empty()
        assert apply_move(tower(3), 2) == tower(2)
        assert apply_move(v_poset(), 0) == Poset.from_relations(2, [(1, 0)])

    def test_apply_move_range(self):
        with pytest.raises(IndexError):
            apply_move(tower(2), 2)

    def test_components_examples(self):
        parts = components(antichain(3))
        assert [p.n for p in parts] == [1, 1, 1]
        assert len(components(tower(5))) == 1
        parts = components(disjoint_union(tower(2), tower(3)))
        assert [p.n for p in parts] == [2, 3]

    def test_components_labels_follow_vertices(self):
        u = disjoint_union(antichain(1), tower(2))
        parts = components(u)
        assert parts[1].provenance == (TowerVertex(0, 0, 1), TowerVertex(0, 1, 2))


class TestValidate:
    def test_ok(self):
        assert validate(tower(4)) is None

    def test_antisymmetry(self):
        bad = Poset([0b10, 0b01])
        assert validate(bad).kind == "antisymmetry"

    def test_closure(self):
        bad = Poset([0b010, 0b100, 0b000])
        v = validate(bad)
        assert v.kind == "closure" and v.vertices == (0, 1, 2)

    def test_reflexive(self):
        assert validate(Poset([0b1])).kind == "reflexive"

    def test_provenance_count(self):
        assert validate(Poset([0, 0], [Original(0, 0)])).kind == "provenance"


class TestFormat:
    def test_writer(self):
        text = dumps(tower(3), ["hello"])
        assert text == "p 3\n# hello\nr 0 1\nr 1 2\n"

    def test_writer_emits_hasse_reduction(self):
        p = Poset.from_relations(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
        assert dumps(p) == "p 4\nr 0 1\nr 0 3\nr 1 2\n"

    def test_loader_closes(self):
        p = loads("# c\np 3\nr 0 1\n\nr 1 2\n")
        assert p.less(0, 2)
        assert validate(p) is None

    @pytest.mark.parametrize(
        "text",
        [
            "r 0 1\n",
            "p 2\np 2\n",
            "p 2\nr 0 2\n",
            "p 2\nr 0 1\nr 1 0\n",
            "p 1\nr 0 0\n",
            "p x\n",
            "p 2\nq 0 1\n",
            "",
        ],
    )
    def test_loader_rejects(self, text):
        with pytest.raises(FormatError):
            loads(text)

    def test_empty_file(self):
        assert loads("p 0\n") == empty()


class TestStructuredViews:
    """Composite posets answer queries without materializing."""

    def test_relation_count_and_less(self):
        g = stack(disjoint_union(tower(3), antichain(2)), add_bottom_chain(v_poset(), 2))
        m = g.materialize()
        assert g.relation_count == m.relation_count
        for u in range(g.n):
            for v in range(g.n):
                assert g.less(u, v) == m.less(u, v)
        assert g.hasse_edges() == m.hasse_edges()
        assert g.minimal() == m.minimal() and g.maximal() == m.maximal()

    def test_huge_tower_is_lazy(self):
        t = tower(10**6)
        assert t.relation_count == 10**6 * (10**6 - 1) // 2
        assert t.less(5, 999_999)
        assert grundy(t).grundy == 10**6


@settings(max_examples=150, deadline=None)
@given(small_posets())
def test_round_trip(p):
    again = loads(dumps(p))
    assert again == p
    assert dumps(again) == dumps(p)


@settings(max_examples=150, deadline=None)
@given(small_posets(5), small_posets(5))
def test_stack_relation_count(a, b):
    s = stack(a, b)
    assert s.n == a.n + b.n
    assert len(relation(s.materialize())) == a.relation_count + b.relation_count + a.n * b.n
    assert validate(s.materialize()) is None


@settings(max_examples=150, deadline=None)
@given(small_posets(5), small_posets(5))
def test_composites_match_materialized(a, b):
    for p in (stack(a, b), disjoint_union(a, b), add_bottom_chain(stack(b, a), 2, 1)):
        m = p.materialize()
        assert validate(m) is None
        assert p.hasse_edges() == loads(dumps(m)).hasse_edges()


def test_apply_move_shrinks_and_stays_valid():
    for n in range(5):
        for p in enumerate_posets(n):
            for v in range(p.n):
                child = apply_move(p, v)
                assert child.n < p.n
                assert validate(child) is None


def test_components_partition_and_nim_sum():
    for p in enumerate_posets(5):
        parts = components(p)
        assert sum(q.n for q in parts) == p.n
        total = 0
        for q in parts:
            total ^= grundy(q).grundy
        assert total == grundy(p).grundy
