import itertools

from posetgames.poset import Poset


def relation(p: Poset) -> set:
    return set(p.pairs())


def isomorphic(a: Poset, b: Poset) -> bool:
    """Brute force over vertex bijections; only for small posets."""
    if a.n != b.n or a.relation_count != b.relation_count:
        return False
    ra, rb = relation(a), relation(b)
    for perm in itertools.permutations(range(b.n)):
        if {(perm[u], perm[v]) for u, v in ra} == rb:
            return True
    return False


def v_poset() -> Poset:
    """c < a, c < b with a, b incomparable (a=0, b=1, c=2)."""
    return Poset.from_relations(3, [(2, 0), (2, 1)])
