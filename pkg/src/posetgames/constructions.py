"""Game negation, OR/AND gates and label-only comparability for negated games.

The negation pairs two nim-value operations: a batch of ``2**i`` bottom
vertices adds ``2**i`` and a side tower of height ``2**i`` nim-adds
``2**i``.  Run over every binary digit of the input size, the pair leaves a
zero value alone and pushes a one into a known digit of any non-zero
value; two copies that differ only in that digit, plus a tower of the
matching power of two, then give a game that is a second-player win
exactly when the input is a first-player win.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .poset import (
    BottomChain,
    FinalTower,
    Original,
    Poset,
    Provenance,
    StackSide,
    TowerVertex,
    add_bottom_chain,
    disjoint_union,
    stack,
    tower,
)

__all__ = [
    "Variant",
    "NegationTrace",
    "Relation",
    "negate",
    "or_game",
    "and_game",
    "compare_labels",
    "blowup_bound",
]


class Variant(str, Enum):
    """Loop extent of the negation.

    ``PROCEDURE`` loops while ``2**i <= g``; ``PROSE`` runs one extra
    iteration, acting on digits up to ``floor(log2 g) + 1``.
    """

    PROCEDURE = "procedure"
    PROSE = "prose"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NegationTrace:
    variant: Variant
    input_size: int
    steps: tuple  # (i, bottoms 2**i, side tower 2**i); the last one builds G''
    g_prime_size: int
    g_double_prime_size: int
    g_triple_prime_size: int
    final_size: int
    final_tower_height: int
    expected_nonzero_value: int
    source: Poset = field(repr=False, compare=False)

    @property
    def prime_steps(self) -> int:
        """Loop iterations shared by both copies (G'' adds one more)."""
        return max(len(self.steps) - 1, 0)

    def comments(self) -> list[str]:
        steps = " ".join(f"{i}:{b}+{t}" for i, b, t in self.steps)
        return [
            f"trace: variant={self.variant} g={self.input_size}",
            f"trace: steps={steps or '-'}",
            f"trace: g_prime={self.g_prime_size} g_double_prime={self.g_double_prime_size}"
            f" g_triple_prime={self.g_triple_prime_size}",
            f"trace: final_tower={self.final_tower_height} final_size={self.final_size}"
            f" expected_nonzero_value={self.expected_nonzero_value}",
        ]


def _prime_shape(g: Poset, last: int) -> Poset:
    cur = g
    for i in range(last + 1):
        cur = add_bottom_chain(cur, 1 << i, i)
        cur = disjoint_union(cur, tower(1 << i))
    return cur


def _negation_labels(g: int, prime_steps: int, final_height: int) -> list[Provenance]:
    labels: list[Provenance] = []
    for copy, steps in ((0, prime_steps), (1, prime_steps + 1)):
        labels += [Original(v, len(labels) + v, copy) for v in range(g)]
        for i in range(steps):
            size = 1 << i
            base = len(labels)
            labels += [BottomChain(i, j, base + j, copy) for j in range(size)]
            base += size
            labels += [TowerVertex(i, h, base + h, copy) for h in range(size)]
    base = len(labels)
    labels += [FinalTower(h, base + h) for h in range(final_height)]
    return labels


def negate(g: Poset, variant: Variant | str = Variant.PROCEDURE) -> tuple[Poset, NegationTrace]:
    """Build a game whose winner is the opposite of ``g``'s.

    Returns the game and a trace of its stage sizes.  Vertex indices follow
    creation order: the G' copy, then the G'' copy, then the final tower.
    """
    variant = Variant(variant)
    size = g.n
    if size == 0:
        out = tower(1)._relabel(lambda: [FinalTower(0, 0)])
        trace = NegationTrace(variant, 0, (), 0, 0, 0, 1, 1, 1, g)
        return out, trace

    top = size.bit_length() - 1
    last = top if variant is Variant.PROCEDURE else top + 1
    # Both copies start from g's own structure so solvers can share work.
    g_prime = _prime_shape(g, last)
    g_double = _prime_shape(g, last)
    extra = last + 1
    g_double = add_bottom_chain(g_double, 1 << extra, extra)
    g_double = disjoint_union(g_double, tower(1 << extra))
    height = 1 << (extra + 1)
    out = disjoint_union(disjoint_union(g_prime, g_double), tower(height))
    out = out._relabel(lambda: _negation_labels(size, last + 1, height))

    steps = tuple((i, 1 << i, 1 << i) for i in range(extra + 1))
    trace = NegationTrace(
        variant=variant,
        input_size=size,
        steps=steps,
        g_prime_size=g_prime.n,
        g_double_prime_size=g_double.n,
        g_triple_prime_size=g_prime.n + g_double.n,
        final_size=out.n,
        final_tower_height=height,
        expected_nonzero_value=height,
        source=g,
    )
    return out, trace


def or_game(a: Poset, b: Poset) -> Poset:
    """First player wins iff they win ``a`` or ``b``: every ``b`` vertex sits above ``a``."""
    return stack(a, b)


def and_game(a: Poset, b: Poset, variant: Variant | str = Variant.PROCEDURE) -> Poset:
    """``not(not a or not b)``."""
    na, _ = negate(a, variant)
    nb, _ = negate(b, variant)
    out, _ = negate(or_game(na, nb), variant)
    return out


class Relation(str, Enum):
    LESS = "Less"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"
    EQUAL = "Equal"


def _flip(rel: Relation) -> Relation:
    if rel is Relation.LESS:
        return Relation.GREATER
    if rel is Relation.GREATER:
        return Relation.LESS
    return rel


def _check_label(label: Provenance, trace: NegationTrace) -> None:
    if isinstance(label, StackSide) or not 0 <= label.order < trace.final_size:
        raise ValueError(f"label {label!r} does not belong to this negation")
    if isinstance(label, FinalTower):
        ok = label.height < trace.final_tower_height
    else:
        steps = trace.prime_steps + label.copy
        if label.copy not in (0, 1):
            ok = False
        elif isinstance(label, Original):
            ok = label.source < trace.input_size
        elif isinstance(label, BottomChain):
            ok = label.step < steps and label.depth < 1 << label.step
        else:
            ok = label.step < steps and label.height < 1 << label.step
    if not ok:
        raise ValueError(f"label {label!r} does not belong to this negation")


def compare_labels(a: Provenance, b: Provenance, trace: NegationTrace) -> Relation:
    """Order between two vertices of a negated game, from their labels alone.

    Only a pair of original vertices consults a relation, and that is the
    relation of the input game.
    """
    _check_label(a, trace)
    _check_label(b, trace)
    if a.order == b.order:
        if a != b:
            raise ValueError("distinct labels with equal creation order")
        return Relation.EQUAL
    if isinstance(a, FinalTower) or isinstance(b, FinalTower):
        if isinstance(a, FinalTower) and isinstance(b, FinalTower):
            return Relation.LESS if a.height < b.height else Relation.GREATER
        return Relation.INCOMPARABLE
    if a.copy != b.copy:
        return Relation.INCOMPARABLE
    if isinstance(b, BottomChain) and not isinstance(a, BottomChain):
        return _flip(compare_labels(b, a, trace))
    if isinstance(a, BottomChain):
        # A bottom vertex is below everything that existed when it was added.
        if b.order < a.order:
            return Relation.LESS
        # Later bottoms are below it; later towers are beside it.
        return Relation.GREATER if isinstance(b, BottomChain) else Relation.INCOMPARABLE
    if isinstance(a, TowerVertex) and isinstance(b, TowerVertex):
        if a.step != b.step:
            return Relation.INCOMPARABLE
        return Relation.LESS if a.height < b.height else Relation.GREATER
    if isinstance(a, Original) and isinstance(b, Original):
        src = trace.source
        if src.less(a.source, b.source):
            return Relation.LESS
        if src.less(b.source, a.source):
            return Relation.GREATER
        return Relation.INCOMPARABLE
    return Relation.INCOMPARABLE


def blowup_bound(trace: NegationTrace) -> Fraction:
    """Size of the negated game over the size of its input."""
    if trace.input_size < 1:
        raise ValueError("blow-up is undefined for the empty game")
    return Fraction(trace.final_size, trace.input_size)
