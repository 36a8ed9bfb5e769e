"""Poset games: Sprague-Grundy solving, winner-flipping negation, OR/AND
gates and compilation of Boolean formulas to games."""

from .constructions import (
    NegationTrace,
    Relation,
    Variant,
    and_game,
    blowup_bound,
    compare_labels,
    negate,
    or_game,
)
from .formula import compile_formula, compiled_size_report, evaluate, parse
from .oracle import enumerate_posets, grundy_reference, random_poset
from .poset import (
    Poset,
    add_bottom,
    add_bottom_chain,
    antichain,
    apply_move,
    components,
    disjoint_union,
    dumps,
    empty,
    load,
    loads,
    save,
    stack,
    tower,
    validate,
)
from .solver import (
    BudgetExceeded,
    SolveBudget,
    SolveReport,
    Winner,
    grundy,
    mex,
    nim_sum,
    winner,
    winning_move,
)

__version__ = "0.1.0"
