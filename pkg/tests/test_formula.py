import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetgames.constructions import negate
from posetgames.formula import (
    And,
    Const,
    FormulaSyntaxError,
    Not,
    Or,
    UnboundVariable,
    Var,
    compile_formula,
    compiled_size_report,
    evaluate,
    parse,
    parse_assignment,
    to_text,
)
from posetgames.poset import antichain, tower
from posetgames.solver import grundy, winner


class TestParse:
    def test_examples(self):
        assert parse("1") == Const(True)
        assert parse("!a & (b | 0)") == And(Not(Var("a")), Or(Var("b"), Const(False)))

    def test_precedence_and_associativity(self):
        assert parse("a | b & c") == Or(Var("a"), And(Var("b"), Var("c")))
        assert parse("a & b & c") == And(And(Var("a"), Var("b")), Var("c"))
        assert parse("a|b|c") == Or(Or(Var("a"), Var("b")), Var("c"))
        assert parse("!!x") == Not(Not(Var("x")))
        assert parse("  ( x_1 )  ") == Var("x_1")

    @pytest.mark.parametrize(
        "text, offset",
        [("a &", 3), ("", 0), ("(a", 2), ("a b", 2), ("a $ b", 2), (")", 0), ("a |& b", 3)],
    )
    def test_errors(self, text, offset):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse(text)
        assert exc.value.offset == offset


formulas = st.recursive(
    st.one_of(st.builds(Const, st.booleans()), st.sampled_from("abc").map(Var)),
    lambda sub: st.one_of(
        st.builds(Not, sub), st.builds(And, sub, sub), st.builds(Or, sub, sub)
    ),
    max_leaves=12,
)


@given(formulas)
def test_print_parse_identity(f):
    assert parse(to_text(f)) == f


class TestEvaluate:
    def test_examples(self):
        assert evaluate(Const(True), {}) is True
        assert evaluate(And(Var("a"), Not(Var("a"))), {"a": True}) is False
        assert evaluate(Or(Const(False), Const(False)), {}) is False

    def test_unbound(self):
        with pytest.raises(UnboundVariable):
            evaluate(Var("q"), {})


class TestCompile:
    def test_constants(self):
        one = compile_formula(parse("1"))
        assert one.n == 1 and winner(one) == "First"
        zero = compile_formula(parse("0"))
        assert zero == antichain(2) and winner(zero) == "Second"

    def test_or(self):
        g = compile_formula(parse("1 | 0"))
        assert g.n == 3 and winner(g) == "First"

    def test_not(self):
        g = compile_formula(parse("!1"), variant="procedure")
        assert g.n == 14 and winner(g) == "Second"

    def test_variables_act_as_constants(self):
        assert compile_formula(Var("x"), {"x": True}) == compile_formula(Const(True))
        assert compile_formula(Var("x"), {"x": False}) == compile_formula(Const(False))
        f = parse("(x | !y) & 1")
        g = parse("(1 | !0) & 1")
        assert compile_formula(f, {"x": True, "y": False}) == compile_formula(g)

    def test_unbound(self):
        with pytest.raises(UnboundVariable):
            compile_formula(parse("x | 1"))

    def test_and_matches_evaluator(self):
        for text in ["1 & 1", "1 & 0", "0 & 1", "0 & 0"]:
            f = parse(text)
            assert (winner(compile_formula(f)) == "First") == evaluate(f)

    def test_size_additivity(self):
        for a, b in [("1", "0"), ("!0", "1 | 1"), ("!(1 | 0)", "0")]:
            fa, fb = parse(a), parse(b)
            size = compile_formula(Or(fa, fb)).n
            assert size == compile_formula(fa).n + compile_formula(fb).n
            _, trace = negate(compile_formula(fa))
            assert compile_formula(Not(fa)).n == trace.final_size


class TestSizeReport:
    def test_examples(self):
        assert compiled_size_report(parse("1")) == [("root", "1", 1)]
        rows = compiled_size_report(parse("1 | 0"))
        assert {path: size for path, _, size in rows} == {"left": 1, "right": 2, "root": 3}
        rows = compiled_size_report(parse("!1"), variant="procedure")
        assert {path: size for path, _, size in rows} == {"child": 1, "root": 14}

    def test_nested_paths(self):
        rows = compiled_size_report(parse("1 & !(0 | 1)"))
        paths = [path for path, _, _ in rows]
        assert paths == ["left", "right.child.left", "right.child.right", "right.child", "right", "root"]
        assert rows[-1][2] == compile_formula(parse("1 & !(0 | 1)")).n

    def test_root_matches_compile(self):
        f = parse("(x | !y) & 1")
        asn = {"x": True, "y": True}
        assert compiled_size_report(f, asn)[-1][2] == compile_formula(f, asn).n


def test_parse_assignment():
    assert parse_assignment("x=1, y=0") == {"x": True, "y": False}
    assert parse_assignment("") == {}
    for bad in ["x", "x=2", "1x=0", "x=1,y"]:
        with pytest.raises(ValueError):
            parse_assignment(bad)


@settings(max_examples=40, deadline=None)
@given(st.recursive(
    st.builds(Const, st.booleans()),
    lambda sub: st.one_of(st.builds(And, sub, sub), st.builds(Or, sub, sub)),
    max_leaves=4,
))
def test_negation_free_soundness(f):
    assert (grundy(compile_formula(f)).grundy != 0) == evaluate(f)


def test_true_gadget_is_tower():
    assert compile_formula(Const(True)) == tower(1)
