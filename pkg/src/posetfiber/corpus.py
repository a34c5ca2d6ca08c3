"""Small named spaces and maps used throughout the tests and the shipped corpus."""
from __future__ import annotations

from .complex import SimplicialComplex, build_complex
from .nerve_dowker import Cover, Relation
from .poset import MonotoneMap, Poset

# 9-gon with boundary word a a a^-1 (a = 1-2-3-1) and five interior vertices;
# every edge lies in at least two triangles.
DUNCE_HAT_FACETS = [
    [1, 2, 5], [1, 2, 6], [1, 2, 7], [1, 3, 4], [1, 3, 5], [1, 3, 8], [1, 4, 8], [1, 6, 7],
    [2, 3, 4], [2, 3, 7], [2, 3, 8], [2, 4, 5], [2, 6, 8], [3, 5, 7], [4, 5, 8], [5, 7, 8],
    [6, 7, 8],
]


def dunce_hat() -> SimplicialComplex:
    return build_complex(DUNCE_HAT_FACETS)


def chain(*names: str) -> Poset:
    return Poset(names, list(zip(names, names[1:])))


def antichain(*names: str) -> Poset:
    return Poset(names)


def circle_poset() -> Poset:
    """Four-point model of the circle: a, b < c, d."""
    return Poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def point(name: str = "p") -> Poset:
    return Poset([name])


def circle_to_point() -> MonotoneMap:
    return MonotoneMap(circle_poset(), point(), {x: "p" for x in "abcd"})


def circle_to_interval() -> MonotoneMap:
    return MonotoneMap(circle_poset(), chain("u", "v"), {"a": "u", "b": "u", "c": "v", "d": "v"})


def hollow_triangle() -> SimplicialComplex:
    return build_complex([[1, 2], [1, 3], [2, 3]])


def full_triangle() -> SimplicialComplex:
    return build_complex([[1, 2, 3]])


def four_cycle() -> SimplicialComplex:
    return build_complex([[1, 2], [2, 3], [3, 4], [4, 1]])


def path_cover() -> Cover:
    K = build_complex([["v1", "v2"], ["v2", "v3"]])
    return Cover(K, {"e1": build_complex([["v1", "v2"]]), "e2": build_complex([["v2", "v3"]])})


def triangle_edge_cover() -> Cover:
    K = build_complex([["a", "b"], ["b", "c"], ["a", "c"]])
    return Cover(K, {"ab": build_complex([["a", "b"]]), "bc": build_complex([["b", "c"]]),
                     "ac": build_complex([["a", "c"]])})


def cycle_two_arc_cover() -> Cover:
    K = build_complex([["1", "2"], ["2", "3"], ["3", "4"], ["4", "1"]])
    return Cover(K, {"top": build_complex([["1", "2"], ["2", "3"]]),
                     "bottom": build_complex([["3", "4"], ["4", "1"]])})


def inequality_relation(n: int = 3) -> Relation:
    xs = [str(k) for k in range(1, n + 1)]
    return Relation(xs, xs, [(a, b) for a in xs for b in xs if a != b])
