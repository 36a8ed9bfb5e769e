"""Property suites run by ``posetgames check`` and the acceptance tests.

Each suite returns a :class:`SuiteResult`; a suite passes when it found no
counterexample and finished inside its time limit.  Failure messages name
the offending poset in one-line text form.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

from .constructions import (
    Relation,
    Variant,
    and_game,
    blowup_bound,
    compare_labels,
    negate,
    or_game,
)
from .formula import (
    And,
    Const,
    Not,
    Or,
    Var,
    compile_formula,
    evaluate,
    parse,
    to_text,
)
from .oracle import XorShift64, enumerate_posets, grundy_reference, random_poset
from .poset import (
    Poset,
    add_bottom,
    antichain,
    apply_move,
    component_masks,
    components,
    disjoint_union,
    dumps,
    loads,
    stack,
    tower,
    validate,
)
from .solver import BudgetExceeded, SolveBudget, Solver, grundy

MAX_FAILURES = 5


def compact(p: Poset) -> str:
    """One-line poset text, e.g. ``p 3; r 0 1; r 1 2``."""
    return "; ".join(dumps(p).strip().splitlines())


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    limit: float | None = None
    notes: str = ""

    @property
    def timed_out(self) -> bool:
        return self.limit is not None and self.elapsed > self.limit

    @property
    def passed(self) -> bool:
        return not self.failures and not self.timed_out

    def fail(self, message: str) -> None:
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)
        elif len(self.failures) == MAX_FAILURES:
            self.failures.append("... further failures suppressed")

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f"/{self.limit:g}s" if self.limit is not None else ""
        text = f"{status} {self.name}: checked={self.checked} time={self.elapsed:.2f}s{limit}"
        if self.notes:
            text += f" {self.notes}"
        if self.timed_out:
            text += " (over time limit)"
        return text


def _suite(name: str, limit: float | None = None):
    def wrap(fn: Callable[..., None]):
        def run(*args, **kwargs) -> SuiteResult:
            res = SuiteResult(name, limit=limit)
            start = time.perf_counter()
            fn(res, *args, **kwargs)
            res.elapsed = time.perf_counter() - start
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _value(p: Poset, budget: SolveBudget | None) -> int:
    return grundy(p, budget).grundy


def sample_poset(rng: XorShift64, lo: int, hi: int) -> Poset:
    """Random poset with ``lo <= n <= hi`` drawn from ``rng``."""
    n = lo + rng.below(hi - lo + 1)
    return random_poset(n, rng.next(), rng.random())


def universe(max_n: int):
    for n in range(max_n + 1):
        yield from enumerate_posets(n)


# -- acceptance criteria ------------------------------------------------------


@_suite("tower-values", limit=1.0)
def tower_values(res: SuiteResult, max_height: int = 12, budget=None) -> None:
    """grundy(tower(x)) == x, by search without the chain and bottom shortcuts."""
    for x in range(max_height + 1):
        res.checked += 1
        plain = Solver(tower(x).materialize(), budget, chain_rule=False, bottom_rule=False)
        value = plain.value()
        if value != x:
            res.fail(f"tower({x}) has grundy {value}")


EXPECTED_COUNTS = (1, 1, 3, 19, 219, 4231, 130023)


@_suite("bottom-vertex", limit=30.0)
def bottom_vertex(res: SuiteResult, max_n: int = 5, budget=None) -> None:
    """grundy(add_bottom(P)) == grundy(P) + 1 over every labeled poset.

    The bottom-vertex shortcut is switched off for the augmented game so the
    comparison is not circular.
    """
    for n in range(max_n + 1):
        count = 0
        for p in enumerate_posets(n):
            count += 1
            res.checked += 1
            before = _value(p, budget)
            after = Solver(add_bottom(p), budget, bottom_rule=False, chain_rule=False).value()
            if after != before + 1:
                res.fail(f"add_bottom: {before} -> {after} for [{compact(p)}]")
        if count != EXPECTED_COUNTS[n]:
            res.fail(f"enumerated {count} posets on {n} vertices, expected {EXPECTED_COUNTS[n]}")
    res.notes = f"posets={sum(EXPECTED_COUNTS[: max_n + 1])}"


@_suite("sprague-grundy-sum", limit=10.0)
def sum_composition(res: SuiteResult, pairs: int = 1000, seed: int = 0, budget=None) -> None:
    """grundy(A + B) == grundy(A) XOR grundy(B), sides of at most 4 vertices.

    The sum is solved without component decomposition.
    """
    rng = XorShift64(seed ^ 0x5347)
    for _ in range(pairs):
        a = sample_poset(rng, 0, 4)
        b = sample_poset(rng, 0, 4)
        res.checked += 1
        whole = Solver(disjoint_union(a, b).materialize(), budget, decompose=False).value()
        if whole != _value(a, budget) ^ _value(b, budget):
            res.fail(f"sum mismatch for A=[{compact(a)}] B=[{compact(b)}]")


def flip_instances(max_n: int, samples: int, seed: int):
    """Exhaustive posets up to ``min(max_n, 4)`` vertices, then random 5..8."""
    yield from universe(min(max_n, 4))
    rng = XorShift64(seed ^ 0x464C)
    for _ in range(samples):
        yield sample_poset(rng, 5, 8)


@_suite("flip-property", limit=180.0)
def flip_property(
    res: SuiteResult, max_n: int = 4, samples: int = 200, seed: int = 0, budget=None
) -> None:
    """Negation flips the winner, and a zero input maps to the trace's
    expected non-zero value, in both variants."""
    for g in flip_instances(max_n, samples, seed):
        base = _value(g, budget)
        for variant in Variant:
            res.checked += 1
            neg, trace = negate(g, variant)
            # Solve the materialized closure, not the construction recipe.
            value = Solver(neg.materialize(), budget).value()
            if (value == 0) != (base != 0):
                res.fail(f"{variant}: grundy {base} -> {value} for [{compact(g)}]")
            elif base == 0 and value != trace.expected_nonzero_value:
                res.fail(
                    f"{variant}: zero input gave {value}, expected "
                    f"{trace.expected_nonzero_value} for [{compact(g)}]"
                )


SIZE_BOUNDS = {Variant.PROCEDURE: 26, Variant.PROSE: 34}


@_suite("size-ledger")
def size_ledger(res: SuiteResult, max_n: int = 4, samples: int = 200, seed: int = 0) -> None:
    """Traces match the built games and stay within 26g (procedure) / 34g (prose)."""
    worst = dict.fromkeys(Variant, 0)
    for g in flip_instances(max_n, samples, seed):
        for variant in Variant:
            res.checked += 1
            neg, trace = negate(g, variant)
            problem = _trace_problem(neg, trace)
            if problem:
                res.fail(f"{variant}: {problem} for [{compact(g)}]")
            if g.n:
                factor = blowup_bound(trace)
                worst[variant] = max(worst[variant], factor)
                if factor > SIZE_BOUNDS[variant]:
                    res.fail(f"{variant}: blow-up {factor} > {SIZE_BOUNDS[variant]} "
                             f"for [{compact(g)}]")
                if variant is Variant.PROCEDURE:
                    for stage, size, share in _stage_shares(trace):
                        if size > share * g.n:
                            res.fail(f"{variant}: {stage} has {size} > {share}g vertices "
                                     f"for [{compact(g)}]")
    res.notes = " ".join(f"max_blowup[{v}]={float(f):.3f}" for v, f in worst.items())


def _stage_shares(trace) -> list:
    """Per-stage bounds whose sum gives the 26g total."""
    return [
        ("G'", trace.g_prime_size, 5),
        ("G''", trace.g_double_prime_size, 13),
        ("G'''", trace.g_triple_prime_size, 18),
        ("final tower", trace.final_tower_height, 8),
    ]


def _trace_problem(neg: Poset, trace) -> str | None:
    if trace.final_size != neg.n:
        return f"trace final_size {trace.final_size} != {neg.n} vertices"
    if trace.final_size != trace.g_triple_prime_size + trace.final_tower_height:
        return "final_size != G''' + final tower"
    if trace.g_triple_prime_size != trace.g_prime_size + trace.g_double_prime_size:
        return "G''' != G' + G''"
    if trace.expected_nonzero_value != trace.final_tower_height:
        return "expected value differs from final tower height"
    if trace.input_size:
        top = trace.input_size.bit_length() - 1
        extra = 2 if trace.variant is Variant.PROCEDURE else 3
        if trace.final_tower_height != 1 << (top + extra):
            return f"final tower {trace.final_tower_height} != 2^(floor(log2 g)+{extra})"
        if trace.g_double_prime_size != trace.g_prime_size + 2 * trace.steps[-1][1]:
            return "G'' is not G' plus one bottom batch and tower"
    return None


@_suite("oracle-equivalence", limit=60.0)
def oracle_equivalence(res: SuiteResult, max_n: int = 5, budget=None) -> None:
    """Main solver agrees with the unassisted reference on every labeled poset."""
    for p in universe(max_n):
        res.checked += 1
        main = _value(p, budget)
        ref = grundy_reference(p)
        if main != ref:
            res.fail(f"solver {main} != reference {ref} for [{compact(p)}]")


@_suite("gate-truth-tables")
def gate_truth_tables(res: SuiteResult, budget=None) -> None:
    """OR and AND of the true/false gadgets match the Boolean tables."""
    gadgets = {True: tower(1), False: antichain(2)}
    for (x, a), (y, b) in itertools.product(gadgets.items(), repeat=2):
        res.checked += 1
        if (_value(or_game(a, b), budget) != 0) != (x or y):
            res.fail(f"OR({x}, {y}) has the wrong winner")
        for variant in Variant:
            res.checked += 1
            if (_value(and_game(a, b, variant), budget) != 0) != (x and y):
                res.fail(f"AND[{variant}]({x}, {y}) has the wrong winner")


def formula_universe(max_ops: int = 2) -> list:
    """Formulas over 0/1 with at most ``max_ops`` binary operators and at
    most one negation on every root-to-leaf path."""

    def plain(ops: int, neg_ok: bool) -> list:
        if ops == 0:
            return [Const(False), Const(True)]
        out = []
        for op in (And, Or):
            for left_ops in range(ops):
                for left in build(left_ops, neg_ok):
                    for right in build(ops - 1 - left_ops, neg_ok):
                        out.append(op(left, right))
        return out

    def build(ops: int, neg_ok: bool) -> list:
        out = plain(ops, neg_ok)
        if neg_ok:
            out += [Not(f) for f in plain(ops, False)]
        return out

    return [f for ops in range(max_ops + 1) for f in build(ops, True)]


@_suite("formula-soundness", limit=120.0)
def formula_soundness(res: SuiteResult, budget=None) -> None:
    """Compiled game's winner matches the evaluator (Procedure variant)."""
    largest = 0
    for f in formula_universe():
        res.checked += 1
        game = compile_formula(f)
        largest = max(largest, game.n)
        first_wins = grundy(game, budget).grundy != 0
        if first_wins != evaluate(f):
            res.fail(f"winner mismatch for {to_text(f)} ({game.n} vertices)")
    res.notes = f"largest={largest}"


@_suite("relation-oracle")
def relation_oracle(res: SuiteResult, instances: int = 25, seed: int = 0) -> None:
    """compare_labels agrees with the materialized closure on every pair."""
    rng = XorShift64(seed ^ 0x524C)
    for _ in range(instances):
        g = sample_poset(rng, 1, 6)
        for variant in Variant:
            neg, trace = negate(g, variant)
            labels = neg.provenance
            up = neg.up
            for u in range(neg.n):
                for v in range(neg.n):
                    res.checked += 1
                    if u == v:
                        want = Relation.EQUAL
                    elif up[u] >> v & 1:
                        want = Relation.LESS
                    elif up[v] >> u & 1:
                        want = Relation.GREATER
                    else:
                        want = Relation.INCOMPARABLE
                    got = compare_labels(labels[u], labels[v], trace)
                    if got != want:
                        res.fail(f"{variant}: ({u},{v}) labels say {got}, closure {want} "
                                 f"for [{compact(g)}]")


@_suite("determinism")
def determinism(res: SuiteResult, seed: int = 0) -> None:
    """negate/gen/compile give byte-identical files on repeated runs."""
    import contextlib
    import io
    import tempfile
    from pathlib import Path

    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        src = tmp / "in.poset"
        (tmp / "in.poset").write_text(dumps(random_poset(6, seed, 0.3)))
        jobs = {
            "gen": ["gen", "--n", "6", "--seed", str(seed), "--density", "0.3"],
            "negate": ["negate", str(src), "--variant", "procedure"],
            "negate-prose": ["negate", str(src), "--variant", "prose"],
            "compile": ["compile", "(x | !y) & 1", "--assign", "x=0,y=0", "--report"],
        }
        for name, argv in jobs.items():
            outputs = []
            for run in range(2):
                out = tmp / f"{name}.{run}"
                with contextlib.redirect_stdout(io.StringIO()):
                    code = main(argv + ["-o", str(out)])
                if code != 0:
                    res.fail(f"{name} exited {code}")
                    break
                outputs.append(out.read_bytes())
            res.checked += 1
            if len(outputs) == 2 and outputs[0] != outputs[1]:
                res.fail(f"{name} output differs between runs")


# -- module invariants --------------------------------------------------------


@_suite("poset-invariants")
def poset_invariants(res: SuiteResult, max_n: int = 4, samples: int = 200, seed: int = 0,
                     budget=None) -> None:
    """Moves shrink and stay valid; components partition and nim-add;
    stacking counts relations; text round-trips."""
    for p in universe(max_n):
        res.checked += 1
        if validate(p) is not None:
            res.fail(f"enumerated poset invalid: [{compact(p)}]")
        for v in range(p.n):
            child = apply_move(p, v)
            if child.n >= p.n or validate(child) is not None:
                res.fail(f"apply_move({v}) misbehaves on [{compact(p)}]")
        masks = component_masks(p)
        union = 0
        for m in masks:
            if union & m:
                res.fail(f"overlapping components for [{compact(p)}]")
            union |= m
        if union != (1 << p.n) - 1:
            res.fail(f"components do not cover [{compact(p)}]")
        total = 0
        for part in components(p):
            total ^= _value(part, budget)
        if total != _value(p, budget):
            res.fail(f"component nim-sum mismatch for [{compact(p)}]")
        if loads(dumps(p)) != p:
            res.fail(f"round-trip changed [{compact(p)}]")
    rng = XorShift64(seed ^ 0x5354)
    for _ in range(samples):
        a, b = sample_poset(rng, 0, 5), sample_poset(rng, 0, 5)
        s = stack(a, b)
        res.checked += 1
        want = a.relation_count + b.relation_count + a.n * b.n
        if s.n != a.n + b.n or s.materialize().relation_count != want:
            res.fail(f"stack relation count wrong for [{compact(a)}] / [{compact(b)}]")
        if validate(s.materialize()) is not None:
            res.fail(f"stack invalid for [{compact(a)}] / [{compact(b)}]")


@_suite("solver-invariants")
def solver_invariants(res: SuiteResult, max_n: int = 5, budget=None) -> None:
    """Winning moves reach zero; losing positions have none; grundy <= n;
    repeat solves agree; decomposition never changes a value."""
    for p in universe(max_n):
        res.checked += 1
        report = grundy(p, budget)
        if report.grundy > p.n:
            res.fail(f"grundy {report.grundy} > n for [{compact(p)}]")
        if (report.winning_move is None) != (report.grundy == 0):
            res.fail(f"winning_move presence wrong for [{compact(p)}]")
        if report.winning_move is not None:
            if _value(apply_move(p, report.winning_move), budget) != 0:
                res.fail(f"winning move does not reach 0 for [{compact(p)}]")
        else:
            for v in range(p.n):
                if _value(apply_move(p, v), budget) == 0:
                    res.fail(f"losing position has a move to 0 for [{compact(p)}]")
        again = grundy(p, budget)
        if (again.grundy, again.winning_move) != (report.grundy, report.winning_move):
            res.fail(f"repeat solve differs for [{compact(p)}]")
        plain = Solver(p, budget, decompose=False, chain_rule=False, bottom_rule=False)
        if plain.value() != report.grundy:
            res.fail(f"shortcut-free search differs for [{compact(p)}]")


@_suite("oracle-invariants")
def oracle_invariants(res: SuiteResult, max_n: int = 5, samples: int = 1000, seed: int = 0) -> None:
    """Enumerations are valid and duplicate-free; random posets are valid and
    reproducible."""
    for n in range(max_n + 1):
        seen = set()
        for p in enumerate_posets(n):
            res.checked += 1
            if p.up in seen:
                res.fail(f"duplicate enumeration [{compact(p)}]")
            seen.add(p.up)
            if validate(p) is not None:
                res.fail(f"invalid enumeration [{compact(p)}]")
    rng = XorShift64(seed ^ 0x524E)
    for _ in range(samples):
        n, s, d = rng.below(11), rng.next(), rng.random()
        p = random_poset(n, s, d)
        res.checked += 1
        if validate(p) is not None:
            res.fail(f"random_poset({n}, {s}, {d}) invalid")
        if dumps(random_poset(n, s, d)) != dumps(p):
            res.fail(f"random_poset({n}, {s}, {d}) not reproducible")


# Subset search on stacked negations grows with the down-sets of the upper
# part, so the search side of the cross-check runs on a small budget.
CROSS_CHECK_POSITIONS = 2000


@_suite("formula-invariants")
def formula_invariants(res: SuiteResult) -> None:
    """Size additivity, variables compile like constants, printing round-trips,
    and the structural solver agrees with subset search where search fits."""
    compared = 0
    for f in formula_universe():
        res.checked += 1
        if parse(to_text(f)) != f:
            res.fail(f"parse/print mismatch for {to_text(f)}")
        game = compile_formula(f)
        if isinstance(f, Or):
            want = compile_formula(f.left).n + compile_formula(f.right).n
            if game.n != want:
                res.fail(f"OR size {game.n} != {want} for {to_text(f)}")
        if isinstance(f, Not):
            _, trace = negate(compile_formula(f.child))
            if game.n != trace.final_size:
                res.fail(f"NOT size {game.n} != trace {trace.final_size} for {to_text(f)}")
        if game.n <= 2000:
            try:
                a = grundy(game.materialize(), SolveBudget(CROSS_CHECK_POSITIONS), method="search")
            except BudgetExceeded:
                continue
            compared += 1
            b = grundy(game, method="structural")
            if (a.grundy, a.winning_move) != (b.grundy, b.winning_move):
                res.fail(f"search/structural disagree on {to_text(f)}")
    res.notes = f"cross_checked={compared}"
    for value in (False, True):
        res.checked += 1
        as_var = compile_formula(Var("x"), {"x": value})
        as_const = compile_formula(Const(value))
        if dumps(as_var) != dumps(as_const) or as_var.provenance != as_const.provenance:
            res.fail(f"Var x={value} differs from Const({value})")


# -- runner ------------------------------------------------------------------


def acceptance_suites(max_n: int = 5, samples: int = 200, seed: int = 0, budget=None):
    """(criterion number, suite thunk) pairs in criterion order."""
    suites = [
        (1, lambda: tower_values(budget=budget)),
        (2, lambda: bottom_vertex(max_n, budget=budget)),
    ]
    if samples:
        suites.append((3, lambda: sum_composition(5 * samples, seed, budget=budget)))
    suites += [
        (4, lambda: flip_property(max_n, samples, seed, budget=budget)),
        (5, lambda: size_ledger(max_n, samples, seed)),
        (6, lambda: oracle_equivalence(max_n, budget=budget)),
        (7, lambda: gate_truth_tables(budget=budget)),
        (8, lambda: formula_soundness(budget=budget)),
    ]
    if samples:
        suites.append((9, lambda: relation_oracle(max(1, samples // 8), seed)))
    suites.append((10, lambda: determinism(seed)))
    return suites


def invariant_suites(max_n: int = 5, samples: int = 200, seed: int = 0, budget=None):
    return [
        lambda: poset_invariants(min(max_n, 4), samples, seed, budget=budget),
        lambda: solver_invariants(max_n, budget=budget),
        lambda: oracle_invariants(max_n, 5 * samples, seed),
        lambda: formula_invariants(),
    ]


def run_all(max_n: int = 5, samples: int = 200, seed: int = 0, budget=None, emit=print):
    results = []
    for _, thunk in acceptance_suites(max_n, samples, seed, budget):
        results.append(thunk())
        emit(results[-1].line())
        for msg in results[-1].failures:
            emit(f"  {msg}")
    for thunk in invariant_suites(max_n, samples, seed, budget):
        results.append(thunk())
        emit(results[-1].line())
        for msg in results[-1].failures:
            emit(f"  {msg}")
    return results
