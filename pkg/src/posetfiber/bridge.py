"""Passing between posets and complexes."""
from __future__ import annotations

from dataclasses import dataclass

from .complex import SimplicialComplex, SimplicialMap, Simplex
from .poset import MonotoneMap, Poset, _bits


def chains(P: Poset) -> list[tuple[str, ...]]:
    """Non-empty chains, each listed bottom to top.

    A chain is grown from its minimum by appending elements strictly above
    the current top, so each chain appears exactly once.
    """
    out = []
    above = P._above
    elements = P.elements

    def grow(chain, top):
        out.append(chain)
        for j in _bits(above[top]):
            grow(chain + (elements[j],), j)

    for i in range(len(P)):
        grow((elements[i],), i)
    return out


def order_complex(P: Poset) -> SimplicialComplex:
    return SimplicialComplex(chains(P), closed=True)


def face_label(s: Simplex) -> str:
    return "{" + ",".join(str(v) for v in s) + "}"


@dataclass(frozen=True, eq=False)
class FacePosetTag:
    poset: Poset
    origin: SimplicialComplex
    simplex_of: dict

    def label(self, s: Simplex) -> str:
        return face_label(s)


def face_poset_tagged(K: SimplicialComplex) -> FacePosetTag:
    simplices = K.sorted_simplices()
    labels = [face_label(s) for s in simplices]
    if len(set(labels)) != len(labels):
        raise ValueError("vertex names collide once converted to strings")
    relations = [(face_label(f), face_label(s)) for s in simplices if len(s) > 1
                 for f in (s[:i] + s[i + 1:] for i in range(len(s)))]
    return FacePosetTag(Poset(labels, relations), K, dict(zip(labels, simplices)))


def face_poset(K: SimplicialComplex) -> Poset:
    """Simplices of K ordered by inclusion, labelled like ``{1,2}``."""
    return face_poset_tagged(K).poset


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    return order_complex(face_poset(K))


def induced_simplicial_map(f: MonotoneMap, source: SimplicialComplex | None = None,
                           target: SimplicialComplex | None = None) -> SimplicialMap:
    """K(f): the vertex map f on the order complexes.

    ``source``/``target`` may be passed when already built; the target may
    also be the order complex of any subposet containing the image.
    """
    if source is None:
        source = order_complex(f.source)
    if target is None:
        target = order_complex(f.target)
    return SimplicialMap(source, target, dict(f.assignment))


def induced_poset_map(phi: SimplicialMap) -> MonotoneMap:
    """X(phi): sigma goes to its image vertex set."""
    src = face_poset(phi.source)
    tgt = face_poset(phi.target)
    return MonotoneMap(src, tgt, {face_label(s): face_label(phi.image(s)) for s in phi.source.simplices})


__all__ = [
    "FacePosetTag", "barycentric_subdivision", "chains", "face_label",
    "face_poset", "face_poset_tagged", "induced_poset_map", "induced_simplicial_map", "order_complex",
]
