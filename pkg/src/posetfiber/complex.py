"""Finite abstract simplicial complexes.

Simplices are tuples of vertices in canonical sorted order (numbers before
strings, each sorted naturally).  A :class:`SimplicialComplex` is a closed
family of such tuples.  Besides the usual star/link/join machinery this module
holds the collapse search and the three-valued contractibility verdict.
"""
from __future__ import annotations

import enum
import itertools
from collections.abc import Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

Vertex = Hashable
Simplex = tuple

DEFAULT_BUDGET = 32
DEFAULT_STEP_CAP = 100_000


class ComplexError(ValueError):
    pass


def vertex_key(v):
    if isinstance(v, str):
        return (1, v)
    return (0, v)


def simplex_key(s: Simplex):
    return (len(s), [vertex_key(v) for v in s])


def simplex(vertices: Iterable[Vertex]) -> Simplex:
    """Canonical form of a vertex set."""
    vs = set(vertices)
    if not vs:
        raise ComplexError("a simplex needs at least one vertex")
    return tuple(sorted(vs, key=vertex_key))


def faces(s: Simplex, proper: bool = False) -> Iterator[Simplex]:
    """All non-empty faces of ``s`` (canonical order is inherited)."""
    top = len(s) - 1 if proper else len(s)
    for k in range(1, top + 1):
        yield from itertools.combinations(s, k)


def boundary_faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces; the i-th entry omits vertex i."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


class SimplicialComplex:
    """Immutable finite simplicial complex.

    ``SimplicialComplex(simplices)`` closes the family downward.  Pass
    ``closed=True`` when the input is already closed (e.g. the chains of a
    poset) to skip that work.
    """

    __slots__ = ("simplices", "vertices", "dimension", "_by_dim", "_facets", "_hash")

    def __init__(self, simplices: Iterable[Iterable[Vertex]] = (), closed: bool = False):
        canon = {simplex(s) for s in simplices}
        if not closed:
            canon = {f for s in canon for f in faces(s)}
        self.simplices: frozenset[Simplex] = frozenset(canon)
        self.vertices: tuple = tuple(sorted((s[0] for s in canon if len(s) == 1), key=vertex_key))
        self.dimension: int = max((len(s) for s in canon), default=0) - 1
        self._by_dim = None
        self._facets = None
        self._hash = None

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.sorted_simplices())

    def __contains__(self, s) -> bool:
        return s in self.simplices

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.simplices)
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialComplex(facets={[list(f) for f in self.facets()]})"

    def contains(self, vertices: Iterable[Vertex]) -> bool:
        """Membership for an arbitrary (unsorted) vertex collection."""
        vs = set(vertices)
        return bool(vs) and simplex(vs) in self.simplices

    def is_empty(self) -> bool:
        return not self.simplices

    def simplices_of_dim(self, d: int) -> list[Simplex]:
        """d-simplices in canonical order; this order fixes chain bases."""
        if self._by_dim is None:
            by_dim: dict[int, list] = {}
            for s in self.simplices:
                by_dim.setdefault(len(s) - 1, []).append(s)
            for lst in by_dim.values():
                lst.sort(key=simplex_key)
            self._by_dim = by_dim
        return self._by_dim.get(d, [])

    def sorted_simplices(self) -> list[Simplex]:
        return [s for d in range(self.dimension + 1) for s in self.simplices_of_dim(d)]

    def f_vector(self) -> list[int]:
        return [len(self.simplices_of_dim(d)) for d in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def facets(self) -> list[Simplex]:
        if self._facets is None:
            covered = set()
            for s in self.simplices:
                for f in boundary_faces(s):
                    covered.add(f)
            self._facets = sorted(self.simplices - covered, key=simplex_key)
        return self._facets

    def is_subcomplex_of(self, other: SimplicialComplex) -> bool:
        return self.simplices <= other.simplices

    def intersection(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.simplices & other.simplices, closed=True)

    def union(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.simplices | other.simplices, closed=True)

    def full_subcomplex(self, vertices: Iterable[Vertex]) -> SimplicialComplex:
        vs = set(vertices)
        return SimplicialComplex((s for s in self.simplices if vs.issuperset(s)), closed=True)

    def components(self) -> list[list]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for s in self.simplices_of_dim(1):
            parent[find(s[0])] = find(s[1])
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def to_json(self) -> dict:
        return {"facets": [list(f) for f in self.facets()]}

    @classmethod
    def from_json(cls, data: Mapping) -> SimplicialComplex:
        return build_complex(data["facets"])


def build_complex(facets: Iterable[Iterable[Vertex]]) -> SimplicialComplex:
    facets = [list(f) for f in facets]
    for k, f in enumerate(facets):
        if not f:
            raise ComplexError(f"facet #{k} is empty")
    return SimplicialComplex(facets)


def full_simplex(vertices: Iterable[Vertex]) -> SimplicialComplex:
    return SimplicialComplex([list(vertices)])


def star_link(K: SimplicialComplex, v: Vertex) -> tuple[SimplicialComplex, SimplicialComplex]:
    if (v,) not in K:
        raise ComplexError(f"unknown vertex {v!r}")
    star = [s for s in K.simplices if v in s or K.contains(s + (v,))]
    link = [s for s in star if v not in s]
    return SimplicialComplex(star, closed=True), SimplicialComplex(link, closed=True)


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    common = set(K.vertices) & set(L.vertices)
    if common:
        raise ComplexError(f"join needs disjoint vertex sets; shared: {sorted(common, key=vertex_key)}")
    mixed = [s + t for s in K.facets() for t in L.facets()]
    return SimplicialComplex(list(K.facets()) + list(L.facets()) + mixed)


def is_cone(K: SimplicialComplex) -> Optional[Vertex]:
    """First vertex (in vertex order) lying in every facet, i.e. whose star is K."""
    if K.is_empty():
        return None
    common = set(K.facets()[0])
    for f in K.facets()[1:]:
        common.intersection_update(f)
        if not common:
            return None
    return min(common, key=vertex_key)


def cone_over(K: SimplicialComplex, apex: Vertex) -> SimplicialComplex:
    return join(SimplicialComplex([[apex]]), K)


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """Vertex map sending every simplex of the source onto a simplex of the target."""

    source: SimplicialComplex
    target: SimplicialComplex
    assignment: Mapping = field(repr=False)

    def __post_init__(self):
        assignment = dict(self.assignment)
        for v in self.source.vertices:
            if v not in assignment:
                raise ComplexError(f"simplicial map undefined on vertex {v!r}")
        # facets suffice: faces of a simplex map into faces of its image
        for s in self.source.facets():
            if not self.target.contains(assignment[v] for v in s):
                raise ComplexError(f"image of {list(s)} is not a simplex of the target")
        object.__setattr__(self, "assignment", assignment)

    def __call__(self, v):
        return self.assignment[v]

    def image(self, s: Simplex) -> Simplex:
        return simplex(self.assignment[v] for v in s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(self.assignment[v] == other.assignment[v] for v in self.source.vertices))

    __hash__ = None


def compose_simplicial(psi: SimplicialMap, phi: SimplicialMap) -> SimplicialMap:
    """``psi after phi``."""
    if phi.target != psi.source:
        raise ComplexError("simplicial maps are not composable")
    return SimplicialMap(phi.source, psi.target, {v: psi(phi(v)) for v in phi.source.vertices})


def contiguous(phi: SimplicialMap, psi: SimplicialMap) -> bool:
    """Whether phi(s) | psi(s) is a target simplex for every source simplex s.

    Checking facets is enough since the family of target simplices is closed.
    """
    if phi.source != psi.source or phi.target != psi.target:
        raise ComplexError("contiguity needs maps with the same source and target")
    return all(
        phi.target.contains({phi(v) for v in s} | {psi(v) for v in s})
        for s in phi.source.facets()
    )


# collapses


@dataclass(frozen=True)
class CollapseStep:
    free_face: Simplex
    coface: Simplex

    def to_json(self) -> dict:
        return {"free_face": list(self.free_face), "coface": list(self.coface)}

    @classmethod
    def from_json(cls, data: Mapping) -> CollapseStep:
        return cls(simplex(data["free_face"]), simplex(data["coface"]))


def replay_collapses(K: SimplicialComplex, steps: Iterable[CollapseStep]) -> SimplicialComplex:
    """Apply elementary collapses one at a time, checking each is legal.

    Raises :class:`ComplexError` on the first illegal step.
    """
    alive = set(K.simplices)
    for k, step in enumerate(steps):
        tau, sigma = step.free_face, step.coface
        if tau not in alive or sigma not in alive:
            raise ComplexError(f"collapse step {k}: simplex no longer present")
        if not (len(tau) < len(sigma) and set(tau) < set(sigma)):
            raise ComplexError(f"collapse step {k}: {list(tau)} is not a proper face of {list(sigma)}")
        st = set(tau)
        cofaces = [s for s in alive if len(s) > len(tau) and st.issubset(s)]
        if cofaces != [sigma]:
            raise ComplexError(f"collapse step {k}: {list(tau)} is not a free face")
        alive.discard(tau)
        alive.discard(sigma)
    return SimplicialComplex(alive, closed=True)


class _CollapseState:
    """Incremental bookkeeping of immediate cofaces for one collapse attempt."""

    def __init__(self, K: SimplicialComplex):
        self.cofaces: dict[Simplex, set] = {s: set() for s in K.simplices}
        for s in K.simplices:
            for f in boundary_faces(s):
                self.cofaces[f].add(s)
        # free faces grouped by dimension of their unique coface
        self.free: dict[int, set] = {}
        for s, cof in self.cofaces.items():
            if len(cof) == 1:
                self._mark(s)

    def _mark(self, tau):
        (sigma,) = self.cofaces[tau]
        self.free.setdefault(len(sigma) - 1, set()).add(tau)

    def _unmark(self, tau, dim):
        bucket = self.free.get(dim)
        if bucket is not None:
            bucket.discard(tau)

    def candidates(self) -> list[Simplex]:
        for d in sorted(self.free, reverse=True):
            if self.free[d]:
                return sorted(self.free[d], key=simplex_key)
        return []

    def collapse(self, tau: Simplex) -> Simplex:
        (sigma,) = self.cofaces[tau]
        self._unmark(tau, len(sigma) - 1)
        touched = set()
        for s in (sigma, tau):
            for f in boundary_faces(s):
                cof = self.cofaces.get(f)
                if cof is None:
                    continue
                if len(cof) == 1:
                    self._unmark(f, len(s) - 1)
                cof.discard(s)
                touched.add(f)
        del self.cofaces[sigma]
        del self.cofaces[tau]
        for f in touched:
            if f in self.cofaces and len(self.cofaces[f]) == 1:
                self._mark(f)
        return sigma

    def size(self) -> int:
        return len(self.cofaces)


def _attempt_rngs(seed: int, attempts: int):
    for child in np.random.SeedSequence(seed).spawn(attempts):
        yield np.random.default_rng(child)


@dataclass
class CollapseStats:
    attempts: int = 0
    smallest_remainder: Optional[int] = None
    initial_free_faces: int = 0

    def to_json(self) -> dict:
        return {"attempts": self.attempts, "smallest_remainder": self.smallest_remainder,
                "initial_free_faces": self.initial_free_faces}


def collapse_search(
    K: SimplicialComplex,
    max_restarts: int = DEFAULT_BUDGET,
    seed: int = 0,
    step_cap: int = DEFAULT_STEP_CAP,
    stats: Optional[CollapseStats] = None,
) -> Optional[list[CollapseStep]]:
    """Randomized greedy search for a collapse of ``K`` onto a single vertex.

    Each attempt repeatedly removes a uniformly random free pair among those
    whose coface has maximal dimension.  Attempt ``k`` draws from the ``k``-th
    child of ``SeedSequence(seed)``, so the first success is reproducible.
    """
    if stats is None:
        stats = CollapseStats()
    if K.is_empty():
        return None
    if len(K) == 1:
        return []
    stats.initial_free_faces = sum(len(b) for b in _CollapseState(K).free.values())
    if stats.initial_free_faces == 0:
        stats.smallest_remainder = len(K)
        return None
    for rng in _attempt_rngs(seed, max_restarts):
        stats.attempts += 1
        state = _CollapseState(K)
        steps = []
        while state.size() > 1 and len(steps) < step_cap:
            cands = state.candidates()
            if not cands:
                break
            tau = cands[int(rng.integers(len(cands)))]
            sigma = state.collapse(tau)
            steps.append(CollapseStep(tau, sigma))
        if state.size() == 1:
            return steps
        if stats.smallest_remainder is None or state.size() < stats.smallest_remainder:
            stats.smallest_remainder = state.size()
    return None


# contractibility verdict


class Contractibility(enum.Enum):
    CERTIFIED_CONTRACTIBLE = "certified_contractible"
    NOT_CONTRACTIBLE = "not_contractible"
    UNKNOWN = "unknown"


@dataclass
class ContractibilityVerdict:
    """Outcome of :func:`contractibility_verdict` with the evidence behind it.

    Exactly one evidence field is set: ``apex`` or ``collapses`` for a
    certificate, ``witness`` (a nonzero reduced homology group) for a
    refutation, ``stats`` when the search gave up.
    """

    status: Contractibility
    apex: Optional[Vertex] = None
    collapses: Optional[list[CollapseStep]] = None
    witness: Optional[object] = None  # homology.HomologyGroup
    stats: Optional[CollapseStats] = None
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.status is Contractibility.CERTIFIED_CONTRACTIBLE

    def to_json(self) -> dict:
        out: dict = {"status": self.status.value}
        if self.apex is not None:
            out["apex"] = self.apex
        if self.collapses is not None:
            out["collapses"] = [c.to_json() for c in self.collapses]
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.stats is not None:
            out["search"] = self.stats.to_json()
        if self.note:
            out["note"] = self.note
        return out


def contractibility_verdict(
    K: SimplicialComplex, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> ContractibilityVerdict:
    """Decide contractibility as far as cheap certificates allow.

    Tests run in a fixed order: empty complex, cone apex, nonzero reduced
    homology, collapse search.  Anything left over is ``UNKNOWN``; such a
    verdict must never be read as either answer.
    """
    from .homology import HomologyGroup, reduced_homology

    if K.is_empty():
        return ContractibilityVerdict(
            Contractibility.NOT_CONTRACTIBLE,
            witness=HomologyGroup(-1, 1, ()),
            note="empty complex: reduced homology in degree -1 is Z by convention",
        )
    apex = is_cone(K)
    if apex is not None:
        return ContractibilityVerdict(Contractibility.CERTIFIED_CONTRACTIBLE, apex=apex)
    for g in reduced_homology(K):
        if not g.is_trivial():
            return ContractibilityVerdict(Contractibility.NOT_CONTRACTIBLE, witness=g)
    stats = CollapseStats()
    steps = collapse_search(K, budget, seed, stats=stats)
    if steps is not None:
        return ContractibilityVerdict(Contractibility.CERTIFIED_CONTRACTIBLE, collapses=steps)
    return ContractibilityVerdict(Contractibility.UNKNOWN, stats=stats,
                                  note="homology vanishes but no collapse to a point was found")


def check_contractibility_evidence(K: SimplicialComplex, verdict: ContractibilityVerdict) -> None:
    """Re-check a certifying verdict against ``K``; raise ComplexError if it does not hold."""
    if not verdict.certified:
        raise ComplexError(f"verdict {verdict.status.value} certifies nothing")
    if verdict.apex is not None:
        if is_cone(K) is None or not all(verdict.apex in f for f in K.facets()):
            raise ComplexError(f"{verdict.apex!r} is not a cone apex")
        return
    if verdict.collapses is None:
        raise ComplexError("certified verdict without evidence")
    rest = replay_collapses(K, verdict.collapses)
    if len(rest) != 1:
        raise ComplexError(f"collapses end with {len(rest)} simplices, not a single vertex")
