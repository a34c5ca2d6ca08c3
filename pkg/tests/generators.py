"""Random and exhaustive generators of posets, maps, complexes and relations."""
from __future__ import annotations

from itertools import combinations

import numpy as np

from posetfiber.complex import SimplicialComplex
from posetfiber.nerve_dowker import Cover, Relation
from posetfiber.poset import MonotoneMap, Poset, linear_extension


def all_labeled_posets(n: int, prefix: str = "e"):
    """Every partial order on ``n`` labelled points, each exactly once.

    Built by inserting point k into each order on the first k points with a
    chosen down-set D and up-set U such that D < U elementwise.
    """
    names = [f"{prefix}{k}" for k in range(n)]

    def rec(k, rel):
        if k == n:
            yield Poset(names, rel)
            return
        P = Poset(names[:k], rel)
        downs = [set(s) for r in range(k + 1) for s in combinations(names[:k], r)
                 if all(set(P.below(x)) <= set(s) for x in s)]
        ups = [set(s) for r in range(k + 1) for s in combinations(names[:k], r)
               if all(set(P.above(x)) <= set(s) for x in s)]
        new = names[k]
        for D in downs:
            for U in ups:
                if D & U or not all(P.less(d, u) for d in D for u in U):
                    continue
                yield from rec(k + 1, rel + [(d, new) for d in D] + [(new, u) for u in U])

    yield from rec(0, [])


def random_poset(rng: np.random.Generator, n: int, p: float = 0.4, prefix: str = "x") -> Poset:
    perm = rng.permutation(n)
    names = [f"{prefix}{k}" for k in range(n)]
    rel = [(names[perm[i]], names[perm[j]]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Poset(names, rel)


def random_monotone_map(rng: np.random.Generator, X: Poset, Y: Poset, tries: int = 50):
    """Assign values along a linear extension, each an upper bound of the earlier images below it."""
    if len(Y) == 0:
        return None
    for _ in range(tries):
        f = {}
        for x in linear_extension(X):
            lows = [f[z] for z in X.lower_covers(x)]
            cands = [y for y in Y if all(Y.leq(v, y) for v in lows)]
            if not cands:
                break
            f[x] = cands[int(rng.integers(len(cands)))]
        else:
            return MonotoneMap(X, Y, f)
    return None


def random_complex(rng: np.random.Generator, nverts: int, nfacets: int, maxdim: int = 3) -> SimplicialComplex:
    facets = []
    for _ in range(nfacets):
        k = int(rng.integers(1, min(maxdim + 1, nverts) + 1))
        facets.append([int(v) for v in rng.choice(nverts, size=k, replace=False)])
    return SimplicialComplex(facets)


def random_cover(rng: np.random.Generator, K: SimplicialComplex, members: int) -> Cover:
    """Each facet goes to one or two random members; empty members get dropped."""
    facets = K.facets()
    groups: list[list] = [[] for _ in range(members)]
    for f in facets:
        for m in set(int(i) for i in rng.integers(members, size=int(rng.integers(1, 3)))):
            groups[m].append(f)
    return Cover(K, {f"L{k}": SimplicialComplex(g) for k, g in enumerate(groups) if g})


def random_relation(rng: np.random.Generator, nx: int, ny: int, p: float = 0.45) -> Relation:
    xs = [f"x{k}" for k in range(nx)]
    ys = [f"y{k}" for k in range(ny)]
    return Relation(xs, ys, [(x, y) for x in xs for y in ys if rng.random() < p])


def all_relations(nx: int, ny: int):
    xs = [f"x{k}" for k in range(nx)]
    ys = [f"y{k}" for k in range(ny)]
    cells = [(x, y) for x in xs for y in ys]
    for mask in range(1 << len(cells)):
        yield Relation(xs, ys, [c for k, c in enumerate(cells) if mask >> k & 1])
