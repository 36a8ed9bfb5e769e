"""Independent ground truth: a plain reference solver, an exhaustive labeled
poset enumerator and a reproducible random poset generator.

Nothing here shares code paths with :mod:`posetgames.solver`.
"""

from __future__ import annotations

from typing import Iterator

from .poset import Poset, bits

__all__ = [
    "REFERENCE_MAX_N",
    "ENUMERATE_MAX_N",
    "XorShift64",
    "grundy_reference",
    "enumerate_posets",
    "random_poset",
]

REFERENCE_MAX_N = 20
ENUMERATE_MAX_N = 6

_MASK64 = (1 << 64) - 1


def grundy_reference(p: Poset) -> int:
    """Nim-value by bare mex recursion, memoized by remaining subset.

    No component splitting and no shortcuts; exponential by design.
    """
    if p.n > REFERENCE_MAX_N:
        raise ValueError(f"reference solver is limited to {REFERENCE_MAX_N} vertices")
    n = p.n
    up = p.up
    memo: dict[int, int] = {}

    def solve(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        reached = set()
        for v in range(n):
            if mask >> v & 1:
                reached.add(solve(mask & ~(up[v] | 1 << v)))
        value = 0
        while value in reached:
            value += 1
        memo[mask] = value
        return value

    return solve((1 << n) - 1)


def _down_sets(up: list[int], down: list[int], n: int) -> list[int]:
    """All subsets of ``0..n-1`` closed downward."""
    out = []
    for s in range(1 << n):
        if all(down[v] & ~s == 0 for v in bits(s)):
            out.append(s)
    return out


def enumerate_posets(n: int) -> Iterator[Poset]:
    """Every labeled poset on ``n`` vertices, exactly once, in a fixed order.

    Each poset on ``n`` vertices restricts to a unique poset on the first
    ``n-1``; it is recovered by choosing the new vertex's strict down-set
    ``D`` and up-set ``U`` with every element of ``D`` below every element
    of ``U`` (so the old relation stays closed and unchanged).
    """
    if not 0 <= n <= ENUMERATE_MAX_N:
        raise ValueError(f"n must be in 0..{ENUMERATE_MAX_N}")
    for rows in _enumerate_rows(n):
        yield Poset(rows)


def _enumerate_rows(n: int) -> Iterator[list[int]]:
    if n == 0:
        yield []
        return
    m = n - 1
    for up in _enumerate_rows(m):
        down = [0] * m
        for u in range(m):
            for v in bits(up[u]):
                down[v] |= 1 << u
        lower_sets = _down_sets(up, down, m)
        full = (1 << m) - 1
        for d in lower_sets:
            above_all_d = full
            for v in bits(d):
                above_all_d &= up[v]
            for u_comp in lower_sets:
                u = full & ~u_comp  # up-sets are complements of down-sets
                if u & ~above_all_d or u & d:
                    continue
                rows = [up[v] | (1 << m if d >> v & 1 else 0) for v in range(m)]
                rows.append(u)
                yield rows


class XorShift64:
    """Marsaglia xorshift64 (shifts 13, 7, 17) seeded through splitmix64.

    Deterministic across platforms: ``next()`` returns 64-bit unsigned
    integers, ``random()`` a double from the top 53 bits, ``below(k)`` an
    integer in ``[0, k)`` by rejection.
    """

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        self.state = z or 0x2545F4914F6CDD1D

    def next(self) -> int:
        x = self.state
        x ^= (x << 13) & _MASK64
        x ^= x >> 7
        x ^= (x << 17) & _MASK64
        self.state = x
        return x

    def random(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next()
            if x < limit:
                return x % k


def random_poset(n: int, seed: int, density: float) -> Poset:
    """Random strict order: shuffle the vertices (Fisher-Yates), keep each
    pair ``order[i] < order[j]`` (``i < j``) with probability ``density``,
    then close transitively.  Fully determined by ``(n, seed, density)``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = XorShift64(seed)
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.append((order[i], order[j]))
    return Poset.from_relations(n, pairs)
