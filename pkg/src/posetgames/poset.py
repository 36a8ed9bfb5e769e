"""Finite posets, the moves of a poset game, and the text file format.

A :class:`Poset` on vertices ``0..n-1`` stores its strict order as one
bit-set per vertex (``up[v]`` = vertices strictly above ``v``), always
transitively closed.  Posets produced by the composition operations
(towers, bottom chains, disjoint unions, stacking) also remember how they
were built.  The closure of such a poset is only materialized when it is
asked for, which keeps very large composed games (compiled formulas) cheap
to hold, count, serialize and solve structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable, Iterator, Sequence, Union

__all__ = [
    "Original",
    "BottomChain",
    "TowerVertex",
    "StackSide",
    "FinalTower",
    "Provenance",
    "Poset",
    "Violation",
    "FormatError",
    "TooLargeError",
    "empty",
    "antichain",
    "tower",
    "add_bottom",
    "add_bottom_chain",
    "disjoint_union",
    "stack",
    "apply_move",
    "components",
    "validate",
    "dumps",
    "loads",
    "load",
    "save",
    "bits",
]

# Materializing an n-vertex closure costs about n*n/8 bytes.
MATERIALIZE_LIMIT = 20_000


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# Vertex provenance labels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Original:
    source: int
    order: int
    copy: int = 0


@dataclass(frozen=True)
class BottomChain:
    """Vertex ``depth`` of the bottom batch added at ``step`` (0 = first added)."""

    step: int
    depth: int
    order: int
    copy: int = 0


@dataclass(frozen=True)
class TowerVertex:
    """Vertex at ``height`` (0 = lowest) of the side tower added at ``step``."""

    step: int
    height: int
    order: int
    copy: int = 0


@dataclass(frozen=True)
class StackSide:
    side: str  # "lower" | "upper"
    inner: "Provenance"
    order: int


@dataclass(frozen=True)
class FinalTower:
    height: int
    order: int


Provenance = Union[Original, BottomChain, TowerVertex, StackSide, FinalTower]


def _reorder(label: Provenance, order: int) -> Provenance:
    return label if label.order == order else replace(label, order=order)


def label_text(label: Provenance) -> str:
    """Compact one-line rendering used in file comments."""
    if isinstance(label, Original):
        return f"Original(src={label.source},copy={label.copy})"
    if isinstance(label, BottomChain):
        return f"BottomChain(step={label.step},depth={label.depth},copy={label.copy})"
    if isinstance(label, TowerVertex):
        return f"TowerVertex(step={label.step},height={label.height},copy={label.copy})"
    if isinstance(label, StackSide):
        return f"StackSide({label.side},{label_text(label.inner)})"
    return f"FinalTower(height={label.height})"


# ---------------------------------------------------------------------------
# Composition shapes
# ---------------------------------------------------------------------------
# Vertex indices of a composite are laid out block by block in the order the
# parts are listed (for _Stack, ``upper_first`` says which block comes first).


@dataclass(frozen=True, eq=False)
class _Leaf:
    n: int
    up: tuple


@dataclass(frozen=True, eq=False)
class _Chain:
    n: int
    descending: bool = False  # True: index 0 is the top of the chain


@dataclass(frozen=True, eq=False)
class _Sum:
    n: int
    parts: tuple


@dataclass(frozen=True, eq=False)
class _Stack:
    n: int
    lower: object
    upper: object
    upper_first: bool = False


def _stack_offsets(shape: _Stack, off: int) -> tuple[int, int]:
    """Offsets of the lower and upper blocks."""
    if shape.upper_first:
        return off + shape.upper.n, off
    return off, off + shape.lower.n


def _fill(shape, up: list, off: int) -> None:
    if isinstance(shape, _Leaf):
        for i, row in enumerate(shape.up):
            up[off + i] = row << off
    elif isinstance(shape, _Chain):
        k = shape.n
        full = (1 << k) - 1
        for i in range(k):
            row = ((1 << i) - 1) if shape.descending else full ^ ((1 << (i + 1)) - 1)
            up[off + i] = row << off
    elif isinstance(shape, _Sum):
        for part in shape.parts:
            _fill(part, up, off)
            off += part.n
    else:
        lo, hi = _stack_offsets(shape, off)
        _fill(shape.lower, up, lo)
        _fill(shape.upper, up, hi)
        upper_mask = ((1 << shape.upper.n) - 1) << hi
        for v in range(lo, lo + shape.lower.n):
            up[v] |= upper_mask


def _less(shape, u: int, v: int) -> bool:
    while True:
        if isinstance(shape, _Leaf):
            return bool(shape.up[u] >> v & 1)
        if isinstance(shape, _Chain):
            return u > v if shape.descending else u < v
        if isinstance(shape, _Sum):
            for part in shape.parts:
                if u < part.n and v < part.n:
                    shape = part
                    break
                if u < part.n or v < part.n:
                    return False
                u -= part.n
                v -= part.n
            continue
        lo, hi = _stack_offsets(shape, 0)
        u_low = lo <= u < lo + shape.lower.n
        v_low = lo <= v < lo + shape.lower.n
        if u_low != v_low:
            return u_low
        if u_low:
            shape, u, v = shape.lower, u - lo, v - lo
        else:
            shape, u, v = shape.upper, u - hi, v - hi


def _relation_count(shape) -> int:
    if isinstance(shape, _Leaf):
        return sum(row.bit_count() for row in shape.up)
    if isinstance(shape, _Chain):
        return shape.n * (shape.n - 1) // 2
    if isinstance(shape, _Sum):
        return sum(_relation_count(p) for p in shape.parts)
    return (
        _relation_count(shape.lower)
        + _relation_count(shape.upper)
        + shape.lower.n * shape.upper.n
    )


def _leaf_extremes(up: Sequence[int]) -> tuple[list[int], list[int]]:
    has_below = 0
    for row in up:
        has_below |= row
    minimal = [v for v in range(len(up)) if not has_below >> v & 1]
    maximal = [v for v in range(len(up)) if up[v] == 0]
    return minimal, maximal


def _extremes(shape, off: int) -> tuple[list[int], list[int]]:
    """(minimal, maximal) vertices of a shape, shifted by ``off``."""
    if shape.n == 0:
        return [], []
    if isinstance(shape, _Leaf):
        lo, hi = _leaf_extremes(shape.up)
        return [v + off for v in lo], [v + off for v in hi]
    if isinstance(shape, _Chain):
        bottom, top = (shape.n - 1, 0) if shape.descending else (0, shape.n - 1)
        return [bottom + off], [top + off]
    if isinstance(shape, _Sum):
        lo_all, hi_all = [], []
        for part in shape.parts:
            lo, hi = _extremes(part, off)
            lo_all += lo
            hi_all += hi
            off += part.n
        return lo_all, hi_all
    lo_off, hi_off = _stack_offsets(shape, off)
    if shape.lower.n == 0:
        return _extremes(shape.upper, hi_off)
    if shape.upper.n == 0:
        return _extremes(shape.lower, lo_off)
    return _extremes(shape.lower, lo_off)[0], _extremes(shape.upper, hi_off)[1]


def _leaf_cover(up: Sequence[int]) -> Iterator[tuple[int, int]]:
    for u, row in enumerate(up):
        implied = 0
        for w in bits(row):
            implied |= up[w]
        for v in bits(row & ~implied):
            yield u, v


def _hasse(shape, off: int, out: list) -> None:
    if isinstance(shape, _Leaf):
        out.extend((u + off, v + off) for u, v in _leaf_cover(shape.up))
    elif isinstance(shape, _Chain):
        if shape.descending:
            out.extend((off + i + 1, off + i) for i in range(shape.n - 1))
        else:
            out.extend((off + i, off + i + 1) for i in range(shape.n - 1))
    elif isinstance(shape, _Sum):
        for part in shape.parts:
            _hasse(part, off, out)
            off += part.n
    else:
        lo, hi = _stack_offsets(shape, off)
        _hasse(shape.lower, lo, out)
        _hasse(shape.upper, hi, out)
        if shape.lower.n and shape.upper.n:
            maxima = _extremes(shape.lower, lo)[1]
            minima = _extremes(shape.upper, hi)[0]
            out.extend((u, v) for u in maxima for v in minima)


# ---------------------------------------------------------------------------
# Poset
# ---------------------------------------------------------------------------


class TooLargeError(ValueError):
    """Raised when an explicit closure would exceed :data:`MATERIALIZE_LIMIT`."""


class Poset:
    """An immutable finite strict partial order on ``0..n-1`` with vertex labels.

    ``Poset(up)`` takes closure rows as given, without checking them; use
    :meth:`from_relations` to close an arbitrary relation, and
    :func:`validate` to check a hand-built one.
    """

    def __init__(self, up: Sequence[int], provenance: Sequence[Provenance] | None = None):
        up = tuple(up)
        self.n = len(up)
        self._shape = _Leaf(self.n, up)
        self._up: tuple | None = up
        self._down: tuple | None = None
        if provenance is None:
            self._labels = tuple(Original(i, i) for i in range(self.n))
        else:
            self._labels = tuple(provenance)
        self._label_fn = None

    @classmethod
    def _composite(cls, shape, label_fn: Callable[[], Sequence[Provenance]]) -> "Poset":
        p = cls.__new__(cls)
        p.n = shape.n
        p._shape = shape
        p._up = shape.up if isinstance(shape, _Leaf) else None
        p._down = None
        p._labels = None
        p._label_fn = label_fn
        return p

    @classmethod
    def from_relations(
        cls,
        n: int,
        pairs: Iterable[tuple[int, int]],
        provenance: Sequence[Provenance] | None = None,
    ) -> "Poset":
        """Close ``u < v`` pairs transitively; raise ``ValueError`` on a cycle."""
        succ = [0] * n
        for u, v in pairs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"relation ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"cycle: {u} < {u}")
            succ[u] |= 1 << v
        indeg = [0] * n
        for u in range(n):
            for v in bits(succ[u]):
                indeg[v] += 1
        order = [v for v in range(n) if indeg[v] == 0]
        for u in order:
            for v in bits(succ[u]):
                indeg[v] -= 1
                if indeg[v] == 0:
                    order.append(v)
        if len(order) < n:
            stuck = min(v for v in range(n) if indeg[v] > 0)
            raise ValueError(f"relations contain a cycle through vertex {stuck}")
        up = [0] * n
        for u in reversed(order):
            row = succ[u]
            for v in bits(succ[u]):
                row |= up[v]
            up[u] = row
        return cls(up, provenance)

    # -- relation access ---------------------------------------------------

    @property
    def up(self) -> tuple:
        """Closure rows: bit ``v`` of ``up[u]`` is set iff ``u < v``."""
        if self._up is None:
            if self.n > MATERIALIZE_LIMIT:
                raise TooLargeError(
                    f"refusing to materialize a {self.n}-vertex closure "
                    f"(limit {MATERIALIZE_LIMIT})"
                )
            rows = [0] * self.n
            _fill(self._shape, rows, 0)
            self._up = tuple(rows)
        return self._up

    @property
    def down(self) -> tuple:
        """Transposed closure rows: bit ``v`` of ``down[u]`` is set iff ``v < u``."""
        if self._down is None:
            rows = [0] * self.n
            for u, row in enumerate(self.up):
                for v in bits(row):
                    rows[v] |= 1 << u
            self._down = tuple(rows)
        return self._down

    @property
    def provenance(self) -> tuple:
        if self._labels is None:
            self._labels = tuple(self._label_fn())
            self._label_fn = None
        return self._labels

    @property
    def is_composite(self) -> bool:
        return not isinstance(self._shape, _Leaf)

    def less(self, u: int, v: int) -> bool:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"vertex out of range for n={self.n}")
        if self._up is not None:
            return bool(self._up[u] >> v & 1)
        return _less(self._shape, u, v)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.up):
            for v in bits(row):
                yield u, v

    @property
    def relation_count(self) -> int:
        if self._up is not None:
            return sum(row.bit_count() for row in self._up)
        return _relation_count(self._shape)

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs of the order, sorted lexicographically."""
        out: list = []
        _hasse(self._shape, 0, out)
        out.sort()
        return out

    def minimal(self) -> list[int]:
        return _extremes(self._shape, 0)[0]

    def maximal(self) -> list[int]:
        return _extremes(self._shape, 0)[1]

    def induced(self, vertices: Iterable[int] | int) -> "Poset":
        """Sub-poset on ``vertices`` (a bit mask or an iterable), re-indexed in order."""
        mask = vertices if isinstance(vertices, int) else sum(1 << v for v in set(vertices))
        keep = list(bits(mask))
        index = {v: i for i, v in enumerate(keep)}
        up = self.up
        rows = []
        for v in keep:
            row = 0
            for w in bits(up[v] & mask):
                row |= 1 << index[w]
            rows.append(row)
        labels = self.provenance
        return Poset(rows, [labels[v] for v in keep])

    def materialize(self) -> "Poset":
        """Same order and labels, with the composition structure dropped."""
        return Poset(self.up, self.provenance)

    def _relabel(self, label_fn: Callable[[], Sequence[Provenance]]) -> "Poset":
        return Poset._composite(self._shape, label_fn)

    # -- dunder ------------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.n > MATERIALIZE_LIMIT:
            return self.hasse_edges() == other.hasse_edges()
        return self.up == other.up

    __hash__ = None

    def __repr__(self) -> str:
        if self.n <= 12:
            rel = ", ".join(f"{u}<{v}" for u, v in self.hasse_edges())
            return f"Poset(n={self.n}, hasse=[{rel}])"
        return f"Poset(n={self.n}, relations={self.relation_count})"


# ---------------------------------------------------------------------------
# Constructors and composition
# ---------------------------------------------------------------------------


def empty() -> Poset:
    return Poset(())


def antichain(k: int) -> Poset:
    """``k`` pairwise incomparable vertices."""
    return Poset([0] * k)


def _tower_shape(x: int):
    return _Chain(x) if x else _Leaf(0, ())


def tower(x: int) -> Poset:
    """Chain ``0 < 1 < ... < x-1`` (index 0 is the bottom)."""
    if x < 0:
        raise ValueError("tower height must be non-negative")
    return Poset._composite(
        _tower_shape(x), lambda: [TowerVertex(0, h, h) for h in range(x)]
    )


def add_bottom_chain(p: Poset, k: int, step: int = 0) -> Poset:
    """Add ``k`` vertices one at a time, each below every vertex present.

    The new vertices take indices ``n..n+k-1`` in the order they were added,
    so index ``n+k-1`` ends up as the unique minimum.
    """
    if k < 1:
        raise ValueError("bottom chain length must be positive")
    n = p.n
    shape = _Stack(n + k, _Chain(k, descending=True), p._shape, upper_first=True)

    def labels():
        return list(p.provenance) + [BottomChain(step, j, n + j) for j in range(k)]

    return Poset._composite(shape, labels)


def add_bottom(p: Poset) -> Poset:
    return add_bottom_chain(p, 1)


def _flatten(shape) -> tuple:
    if isinstance(shape, _Sum):
        return shape.parts
    if shape.n == 0:
        return ()
    return (shape,)


def disjoint_union(a: Poset, b: Poset) -> Poset:
    """Side-by-side game: ``b``'s indices follow ``a``'s, no cross relations."""
    parts = _flatten(a._shape) + _flatten(b._shape)
    n = a.n + b.n
    if len(parts) == 1:
        shape = parts[0]
    elif not parts:
        shape = _Leaf(0, ())
    else:
        shape = _Sum(n, parts)

    def labels():
        shift = a.n
        return list(a.provenance) + [
            _reorder(label, label.order + shift) for label in b.provenance
        ]

    return Poset._composite(shape, labels)


def stack(lower: Poset, upper: Poset) -> Poset:
    """Put every vertex of ``upper`` above every vertex of ``lower``."""
    shape = _Stack(lower.n + upper.n, lower._shape, upper._shape)

    def labels():
        out = [StackSide("lower", label, i) for i, label in enumerate(lower.provenance)]
        out += [
            StackSide("upper", label, lower.n + i)
            for i, label in enumerate(upper.provenance)
        ]
        return out

    return Poset._composite(shape, labels)


# ---------------------------------------------------------------------------
# Moves, components, validation
# ---------------------------------------------------------------------------


def apply_move(p: Poset, v: int) -> Poset:
    """Take ``v``: remove it and everything above it."""
    if not 0 <= v < p.n:
        raise IndexError(f"vertex {v} out of range for n={p.n}")
    full = (1 << p.n) - 1
    return p.induced(full & ~(p.up[v] | 1 << v))


def component_masks(p: Poset) -> list[int]:
    up, down = p.up, p.down
    rest = (1 << p.n) - 1
    out = []
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            reach = 0
            for v in bits(frontier):
                reach |= up[v] | down[v]
            frontier = reach & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def components(p: Poset) -> list[Poset]:
    """Connected components of the comparability graph, by least member index."""
    return [p.induced(mask) for mask in component_masks(p)]


@dataclass(frozen=True)
class Violation:
    kind: str  # "reflexive" | "antisymmetry" | "closure" | "provenance" | "range"
    vertices: tuple
    message: str

    def __str__(self) -> str:
        return self.message


def validate(p: Poset) -> Violation | None:
    """Return the first order-axiom violation found, or ``None``."""
    up = p.up
    n = p.n
    if len(p.provenance) != n:
        return Violation("provenance", (), f"{len(p.provenance)} labels for {n} vertices")
    for u in range(n):
        if up[u] >> n:
            return Violation("range", (u,), f"row {u} references a vertex >= {n}")
        if up[u] >> u & 1:
            return Violation("reflexive", (u,), f"{u} < {u}")
    for u in range(n):
        for v in bits(up[u]):
            if up[v] >> u & 1:
                return Violation("antisymmetry", (u, v), f"{u} < {v} and {v} < {u}")
    for u in range(n):
        for v in bits(up[u]):
            missing = up[v] & ~up[u]
            if missing:
                w = (missing & -missing).bit_length() - 1
                return Violation(
                    "closure", (u, v, w), f"{u} < {v} < {w} but {u} < {w} missing"
                )
    return None


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


class FormatError(ValueError):
    """Malformed poset text."""


def dumps(p: Poset, comments: Iterable[str] = ()) -> str:
    """``p n`` first, then ``#`` comments, then sorted Hasse edges as ``r u v``."""
    lines = [f"p {p.n}"]
    lines += [f"# {c}" if c else "#" for c in comments]
    lines += [f"r {u} {v}" for u, v in p.hasse_edges()]
    return "\n".join(lines) + "\n"


def loads(text: str) -> Poset:
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        tag = fields[0]
        try:
            nums = [int(f) for f in fields[1:]]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field in {line!r}") from None
        if tag == "p":
            if n is not None:
                raise FormatError(f"line {lineno}: duplicate 'p' line")
            if len(nums) != 1 or nums[0] < 0:
                raise FormatError(f"line {lineno}: expected 'p <n>' with n >= 0")
            n = nums[0]
        elif tag == "r":
            if n is None:
                raise FormatError(f"line {lineno}: 'r' before 'p' line")
            if len(nums) != 2:
                raise FormatError(f"line {lineno}: expected 'r <u> <v>'")
            u, v = nums
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"line {lineno}: vertex out of range for n={n}")
            pairs.append((u, v))
        else:
            raise FormatError(f"line {lineno}: unknown record {tag!r}")
    if n is None:
        raise FormatError("missing 'p <n>' line")
    try:
        return Poset.from_relations(n, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load(path) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(p: Poset, path, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(p, comments))
