"""Sprague-Grundy values, winners and winning moves of poset games.

Two exact strategies share one report type:

* ``search`` - memoized mex recursion over down-sets of the root poset,
  keyed by the bit mask of remaining vertices.  Positions split into
  comparability components are solved per component and combined with
  nim-sum; a component that is a chain of height h is worth h; a position
  with a unique minimum is worth one more than the position without it.
* ``structural`` - for posets built by composition.  A disjoint sum is the
  nim-sum of its parts.  A stack (upper part above a lower part) is worth
  the ``v``-th smallest integer absent from the lower part's option values,
  where ``v`` is the upper part's value; the option sets compose the same
  way.  Explicit pieces fall back to ``search``.  This handles compiled
  formulas far too large to enumerate.

``auto`` solves composites structurally and everything else by search.
Call :meth:`Poset.materialize` first to force a search over the closure.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .poset import Poset, _Chain, _Leaf, _Stack, _Sum, _stack_offsets, bits

__all__ = [
    "DEFAULT_MAX_POSITIONS",
    "SolveBudget",
    "SolveReport",
    "BudgetExceeded",
    "Winner",
    "Solver",
    "mex",
    "nim_sum",
    "grundy",
    "winner",
    "winning_move",
]

DEFAULT_MAX_POSITIONS = 5_000_000


def mex(values: Iterable[int]) -> int:
    """Least non-negative integer not in ``values``."""
    seen = set(values)
    k = 0
    while k in seen:
        k += 1
    return k


def nim_sum(a: int, b: int) -> int:
    return a ^ b


@dataclass(frozen=True)
class SolveBudget:
    max_positions: int = DEFAULT_MAX_POSITIONS

    def __post_init__(self):
        if self.max_positions < 1:
            raise ValueError("max_positions must be at least 1")


class BudgetExceeded(RuntimeError):
    def __init__(self, positions_explored: int, max_positions: int):
        super().__init__(
            f"position budget exceeded: {positions_explored} > {max_positions}"
        )
        self.positions_explored = positions_explored
        self.max_positions = max_positions


class Winner(str, Enum):
    FIRST = "First"
    SECOND = "Second"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SolveReport:
    grundy: int
    positions_explored: int
    winning_move: int | None
    decomposition_hits: int
    method: str = "search"

    @property
    def winner(self) -> Winner:
        return Winner.FIRST if self.grundy else Winner.SECOND


# ---------------------------------------------------------------------------
# Subset search
# ---------------------------------------------------------------------------


class Solver:
    """Memoized mex search over the down-sets of one fixed poset.

    The memo persists across calls, so repeated queries on the same instance
    are cheap.  ``decompose``, ``chain_rule`` and ``bottom_rule`` switch off
    the three shortcuts (the plain recursion is always exact).
    """

    def __init__(
        self,
        poset: Poset,
        budget: SolveBudget | None = None,
        *,
        decompose: bool = True,
        chain_rule: bool = True,
        bottom_rule: bool = True,
    ):
        self.poset = poset
        self.budget = budget or SolveBudget()
        self.decompose = decompose
        self.chain_rule = chain_rule
        self.bottom_rule = bottom_rule
        n = poset.n
        self.full = (1 << n) - 1
        self.up = poset.up
        self.down = poset.down
        self.adj = tuple(u | d for u, d in zip(self.up, self.down))
        # Taking v leaves exactly the vertices not >= v.
        self.keep = tuple(self.full & ~(row | 1 << v) for v, row in enumerate(self.up))
        self.memo: dict[int, int] = {0: 0}
        self.decomposition_hits = 0

    @property
    def positions_explored(self) -> int:
        return len(self.memo)

    def _global_min(self, mask: int) -> int | None:
        v = (mask & -mask).bit_length() - 1
        while True:
            below = self.down[v] & mask
            if not below:
                break
            # Highest index tends to be the most recently added bottom.
            v = below.bit_length() - 1
        if (self.up[v] | 1 << v) & mask == mask:
            return v
        return None

    def _is_chain(self, mask: int) -> bool:
        for v in bits(mask):
            if (self.adj[v] | 1 << v) & mask != mask:
                return False
        return True

    def _components(self, mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            comp = frontier = rest & -rest
            while frontier:
                reach = 0
                for v in bits(frontier):
                    reach |= self.adj[v]
                frontier = reach & rest & ~comp
                comp |= frontier
            out.append(comp)
            rest &= ~comp
        return out

    def _frame(self, mask: int):
        low = self._global_min(mask)
        if low is not None:
            if self.chain_rule and self._is_chain(mask):
                return mask.bit_count()
            if self.bottom_rule:
                peeled = 0
                while low is not None:
                    mask ^= 1 << low
                    peeled += 1
                    low = self._global_min(mask) if mask else None
                return peeled + (yield mask)
        elif self.decompose:
            parts = self._components(mask)
            if len(parts) > 1:
                self.decomposition_hits += 1
                total = 0
                for part in parts:
                    total ^= yield part
                return total
        seen = set()
        keep = self.keep
        for v in bits(mask):
            seen.add((yield mask & keep[v]))
        return mex(seen)

    def value(self, mask: int | None = None) -> int:
        """Nim-value of the down-set ``mask`` (default: the whole poset)."""
        if mask is None:
            mask = self.full
        memo = self.memo
        if mask in memo:
            return memo[mask]
        limit = self.budget.max_positions
        stack = [(mask, self._frame(mask))]
        send = None
        while stack:
            top, gen = stack[-1]
            try:
                child = gen.send(send)
            except StopIteration as stop:
                stack.pop()
                memo[top] = send = stop.value
                if len(memo) > limit:
                    raise BudgetExceeded(len(memo), limit) from None
                continue
            if child in memo:
                send = memo[child]
            else:
                stack.append((child, self._frame(child)))
                send = None
        return memo[mask]

    def options(self, mask: int | None = None) -> list[int]:
        """Values of the positions one move away, indexed like the vertices."""
        if mask is None:
            mask = self.full
        return [self.value(mask & self.keep[v]) for v in bits(mask)]

    def move_to(self, target: int, mask: int | None = None) -> int | None:
        """Smallest vertex whose removal leaves a position of value ``target``."""
        if mask is None:
            mask = self.full
        for v in bits(mask):
            if self.value(mask & self.keep[v]) == target:
                return v
        return None

    def report(self) -> SolveReport:
        g = self.value()
        move = self.move_to(0) if g else None
        return SolveReport(g, self.positions_explored, move, self.decomposition_hits)


# ---------------------------------------------------------------------------
# Structural evaluation
# ---------------------------------------------------------------------------


class IntSet:
    """Set of non-negative integers as sorted disjoint half-open intervals."""

    __slots__ = ("spans",)

    def __init__(self, spans=()):
        self.spans = tuple(spans)

    @classmethod
    def range(cls, stop: int) -> "IntSet":
        return cls(((0, stop),) if stop > 0 else ())

    @classmethod
    def of(cls, values: Iterable[int]) -> "IntSet":
        return cls(_merge((v, v + 1) for v in values))

    def __contains__(self, x: int) -> bool:
        i = bisect_right(self.spans, (x, float("inf"))) - 1
        return i >= 0 and self.spans[i][0] <= x < self.spans[i][1]

    def __iter__(self):
        for a, b in self.spans:
            yield from range(a, b)

    def __len__(self) -> int:
        return sum(b - a for a, b in self.spans)

    def __or__(self, other: "IntSet") -> "IntSet":
        return IntSet(_merge(self.spans + other.spans))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntSet) and self.spans == other.spans

    def __repr__(self) -> str:
        return f"IntSet({list(self.spans)})"

    def xor(self, c: int) -> "IntSet":
        """``{x ^ c}``: each aligned dyadic block maps to another aligned block."""
        if c == 0:
            return self
        out = []
        for a, b in self.spans:
            while a < b:
                size = a & -a if a else 1 << (b - a).bit_length()
                while size > b - a:
                    size >>= 1
                start = (a ^ c) & ~(size - 1)
                out.append((start, start + size))
                a += size
        return IntSet(_merge(out))

    def _gaps(self):
        """Complement intervals with their starting rank; last gap is unbounded."""
        gaps, prev, rank = [], 0, 0
        for a, b in self.spans:
            if a > prev:
                gaps.append((prev, a, rank))
                rank += a - prev
            prev = b
        gaps.append((prev, None, rank))
        return gaps

    def select_absent(self, ranks: "IntSet") -> "IntSet":
        """Map each rank ``m`` to the ``m``-th smallest integer not in ``self``."""
        gaps = self._gaps()
        starts = [g[2] for g in gaps]
        out = []
        for a, b in ranks.spans:
            i = bisect_right(starts, a) - 1
            while a < b:
                lo, hi, r0 = gaps[i]
                take_end = b if hi is None else min(b, r0 + (hi - lo))
                out.append((lo + a - r0, lo + take_end - r0))
                a = take_end
                i += 1
        return IntSet(_merge(out))

    def absent_at(self, m: int) -> int:
        return next(iter(self.select_absent(IntSet(((m, m + 1),)))))

    def absent_rank(self, x: int) -> int:
        """Rank of ``x`` among the integers not in ``self`` (``x`` must be absent)."""
        present = 0
        for a, b in self.spans:
            if a >= x:
                break
            present += min(b, x) - a
        return x - present


def _merge(spans) -> list:
    out = []
    for a, b in sorted(spans):
        if a >= b:
            continue
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


class _Structural:
    def __init__(self, budget: SolveBudget):
        self.budget = budget
        self.cache: dict[int, tuple] = {}
        self.keepalive = []
        self.leaf_solvers: dict[int, Solver] = {}
        self.leaf_positions = 0
        self.hits = 0

    def _check(self):
        spent = self.leaf_positions + len(self.cache)
        if spent > self.budget.max_positions:
            raise BudgetExceeded(spent, self.budget.max_positions)

    def eval(self, shape) -> tuple[int, IntSet]:
        """(value, option values) of a shape."""
        key = id(shape)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if isinstance(shape, _Leaf):
            solver = Solver(Poset(shape.up), self.budget)
            res = (solver.value(), IntSet.of(solver.options()))
            self.leaf_solvers[key] = solver
            self.leaf_positions += solver.positions_explored
        elif isinstance(shape, _Chain):
            res = (shape.n, IntSet.range(shape.n))
        elif isinstance(shape, _Sum):
            self.hits += 1
            parts = [self.eval(p) for p in shape.parts]
            total = 0
            for value, _ in parts:
                total ^= value
            opts = IntSet()
            for value, part_opts in parts:
                opts = opts | part_opts.xor(total ^ value)
            res = (total, opts)
        else:
            self.hits += 1
            lo_val, lo_opts = self.eval(shape.lower)
            hi_val, hi_opts = self.eval(shape.upper)
            if shape.upper.n == 0:
                res = (lo_val, lo_opts)
            else:
                value = lo_opts.absent_at(hi_val)
                res = (value, lo_opts | lo_opts.select_absent(hi_opts))
        self.cache[key] = res
        self.keepalive.append(shape)
        self._check()
        return res

    def move_to(self, shape, target: int, off: int = 0) -> int | None:
        """Smallest vertex whose removal leaves value ``target``."""
        value, opts = self.eval(shape)
        if target not in opts:
            return None
        if isinstance(shape, _Leaf):
            return off + self.leaf_solvers[id(shape)].move_to(target)
        if isinstance(shape, _Chain):
            return off + (shape.n - 1 - target if shape.descending else target)
        if isinstance(shape, _Sum):
            for part in shape.parts:
                part_val, part_opts = self.eval(part)
                want = target ^ value ^ part_val
                if want in part_opts:
                    return self.move_to(part, want, off)
                off += part.n
            return None
        lo_off, hi_off = _stack_offsets(shape, off)
        lo_opts = self.eval(shape.lower)[1]
        if target in lo_opts:
            return self.move_to(shape.lower, target, lo_off)
        return self.move_to(shape.upper, lo_opts.absent_rank(target), hi_off)


def structural_report(p: Poset, budget: SolveBudget | None = None) -> SolveReport:
    ev = _Structural(budget or SolveBudget())
    value, _ = ev.eval(p._shape)
    move = ev.move_to(p._shape, 0) if value else None
    return SolveReport(
        value, ev.leaf_positions + len(ev.cache), move, ev.hits, "structural"
    )


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def grundy(
    p: Poset, budget: SolveBudget | None = None, *, method: str = "auto"
) -> SolveReport:
    """Solve ``p``: nim-value, a winning move (smallest index) and counters.

    ``method`` is ``"search"``, ``"structural"`` or ``"auto"``.
    Raises :class:`BudgetExceeded` when the position cap is hit.
    """
    if method == "auto":
        method = "structural" if p.is_composite else "search"
    if method == "structural":
        return structural_report(p, budget)
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    return Solver(p, budget).report()


def winner(p: Poset, budget: SolveBudget | None = None) -> Winner:
    return grundy(p, budget).winner


def winning_move(p: Poset, budget: SolveBudget | None = None) -> int | None:
    return grundy(p, budget).winning_move
