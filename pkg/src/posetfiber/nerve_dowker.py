"""Nerves of subcomplex covers and Dowker's relation complexes."""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Optional

from .bridge import face_label, face_poset
from .complex import (
    DEFAULT_BUDGET,
    ContractibilityVerdict,
    SimplicialComplex,
    contractibility_verdict,
    is_cone,
    simplex,
)
from .fiber import (
    CertificationRefused,
    SimpleEquivalenceCertificate,
    Status,
    certify_simple_equivalence,
)
from .homology import HomologyGroup, nontrivial, reduced_homology
from .poset import MonotoneMap, opposite

MAX_MEMBERS = 20


class CoverError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cover:
    """A finite family of named subcomplexes whose union is the ambient complex."""

    ambient: SimplicialComplex
    members: Mapping[str, SimplicialComplex]

    def __post_init__(self):
        members = dict(self.members)
        union = set()
        for name, L in members.items():
            if not L.is_subcomplex_of(self.ambient):
                raise CoverError(f"member {name!r} is not a subcomplex of the ambient complex")
            union |= L.simplices
        missing = self.ambient.simplices - union
        if missing:
            s = min(missing, key=len)
            raise CoverError(f"members do not cover the ambient complex; {list(s)} lies in none")
        object.__setattr__(self, "members", members)

    @property
    def names(self) -> list[str]:
        return list(self.members)

    def intersection(self, names: Iterable[str]) -> SimplicialComplex:
        names = list(names)
        common = set(self.members[names[0]].simplices)
        for n in names[1:]:
            common &= self.members[n].simplices
        return SimplicialComplex(common, closed=True)


def _nonempty_intersections(c: Cover):
    """Yield (index tuple, intersection) for every non-empty intersection.

    Ascends by size and only extends index sets whose intersection is
    non-empty, so supersets of empty intersections are never visited.
    """
    names = c.names
    level = []
    for k, n in enumerate(names):
        K = c.members[n]
        if not K.is_empty():
            level.append(((k,), K.simplices))
    while level:
        nxt = []
        for idx, simp in level:
            yield tuple(names[k] for k in idx), simp
            for k in range(idx[-1] + 1, len(names)):
                common = simp & c.members[names[k]].simplices
                if common:
                    nxt.append((idx + (k,), common))
        level = nxt


def nerve(c: Cover) -> SimplicialComplex:
    """Index sets with non-empty intersection, as a complex on member names."""
    return SimplicialComplex((idx for idx, _ in _nonempty_intersections(c)), closed=True)


@dataclass
class NerveHypothesisReport:
    intersections: list[tuple[tuple[str, ...], ContractibilityVerdict]]

    @property
    def status(self) -> Status:
        st = {v.status.value for _, v in self.intersections}
        if "not_contractible" in st:
            return Status.REFUTED
        if "unknown" in st:
            return Status.INCONCLUSIVE
        return Status.CERTIFIED

    def to_json(self) -> dict:
        return {"status": self.status.value,
                "intersections": [{"members": list(idx), "verdict": v.to_json()} for idx, v in self.intersections]}


def check_nerve_hypotheses(c: Cover, budget: int = DEFAULT_BUDGET, seed: int = 0,
                           max_members: int = MAX_MEMBERS) -> NerveHypothesisReport:
    """Contractibility verdict for every non-empty intersection of members."""
    if len(c.members) > max_members:
        raise CoverError(f"{len(c.members)} members exceed the bound of {max_members}")
    out = []
    for idx, simp in _nonempty_intersections(c):
        K = SimplicialComplex(simp, closed=True)
        out.append((idx, contractibility_verdict(K, budget, seed)))
    return NerveHypothesisReport(out)


def nerve_comparison_map(c: Cover) -> MonotoneMap:
    """sigma goes to the set of members containing it, in the opposite nerve face poset."""
    N = nerve(c)
    src = face_poset(c.ambient)
    tgt = opposite(face_poset(N))
    names = c.names
    assignment = {}
    for s in c.ambient.simplices:
        hits = [n for n in names if s in c.members[n]]
        if not hits:
            raise CoverError(f"{list(s)} belongs to no member")
        assignment[face_label(s)] = face_label(simplex(hits))
    return MonotoneMap(src, tgt, assignment)


@dataclass
class NerveReport:
    cover: Cover
    nerve: SimplicialComplex
    hypotheses: NerveHypothesisReport
    certificate: Optional[SimpleEquivalenceCertificate] = None
    refusal: Optional[str] = None
    ambient_homology: list[HomologyGroup] = field(default_factory=list)
    nerve_homology: list[HomologyGroup] = field(default_factory=list)

    @property
    def homology_agrees(self) -> bool:
        return nontrivial(self.ambient_homology) == nontrivial(self.nerve_homology)

    @property
    def status(self) -> Status:
        if self.hypotheses.status is not Status.CERTIFIED:
            return self.hypotheses.status
        return Status.CERTIFIED if self.certificate is not None else Status.INCONCLUSIVE

    def to_json(self) -> dict:
        from .homology import homology_report

        out = {
            "status": self.status.value,
            "nerve": self.nerve.to_json(),
            "hypotheses": self.hypotheses.to_json(),
            "homology": {"ambient": homology_report(self.ambient_homology),
                         "nerve": homology_report(self.nerve_homology),
                         "agree": self.homology_agrees},
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.refusal:
            out["refusal"] = self.refusal
        return out


def verify_nerve(c: Cover, budget: int = DEFAULT_BUDGET, seed: int = 0, certify: bool = True) -> NerveReport:
    """Hypotheses, the cylinder certificate for the comparison map, and homology of both sides."""
    N = nerve(c)
    hyp = check_nerve_hypotheses(c, budget, seed)
    report = NerveReport(c, N, hyp, ambient_homology=reduced_homology(c.ambient),
                         nerve_homology=reduced_homology(N))
    if certify and hyp.status is Status.CERTIFIED:
        try:
            report.certificate = certify_simple_equivalence(nerve_comparison_map(c), budget, seed)
        except CertificationRefused as e:
            report.refusal = str(e)
    return report


# Dowker


@dataclass(frozen=True)
class Relation:
    left: tuple
    right: tuple
    pairs: frozenset

    def __init__(self, left: Iterable, right: Iterable, pairs: Iterable[tuple]):
        left, right, pairs = tuple(left), tuple(right), frozenset(map(tuple, pairs))
        ls, rs = set(left), set(right)
        for x, y in pairs:
            if x not in ls or y not in rs:
                raise ValueError(f"pair ({x}, {y}) references an unknown element")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "pairs", pairs)

    def transpose(self) -> Relation:
        return Relation(self.right, self.left, {(y, x) for x, y in self.pairs})

    def related_to_right(self, y) -> list:
        return [x for x in self.left if (x, y) in self.pairs]

    def related_to_left(self, x) -> list:
        return [y for y in self.right if (x, y) in self.pairs]


def dowker_complexes(r: Relation) -> tuple[SimplicialComplex, SimplicialComplex]:
    """(K on the left set, L on the right set); unrelated elements are not vertices."""
    K = SimplicialComplex(s for y in r.right if (s := r.related_to_right(y)))
    L = SimplicialComplex(s for x in r.left if (s := r.related_to_left(x)))
    return K, L


@dataclass
class DowkerReport:
    K: SimplicialComplex
    L: SimplicialComplex
    nerve_matches: bool
    nerve_report: Optional[NerveReport]
    K_homology: list[HomologyGroup]
    L_homology: list[HomologyGroup]

    @property
    def homology_agrees(self) -> bool:
        return nontrivial(self.K_homology) == nontrivial(self.L_homology)

    @property
    def status(self) -> Status:
        if not (self.nerve_matches and self.homology_agrees):
            return Status.REFUTED
        if self.nerve_report is None:
            return Status.CERTIFIED
        return self.nerve_report.status

    def to_json(self) -> dict:
        from .homology import homology_report

        return {
            "status": self.status.value,
            "K": self.K.to_json(),
            "L": self.L.to_json(),
            "nerve_matches_K": self.nerve_matches,
            "homology": {"K": homology_report(self.K_homology), "L": homology_report(self.L_homology),
                         "agree": self.homology_agrees},
            "nerve": None if self.nerve_report is None else self.nerve_report.to_json(),
        }


def dowker_cover(r: Relation) -> Cover:
    """Cover of L by the simplices spanned by the elements related to each x."""
    _, L = dowker_complexes(r)
    members = {}
    for x in r.left:
        ys = r.related_to_left(x)
        if ys:
            members[x] = L.full_subcomplex(ys)
    return Cover(L, members)


def dowker_verify(r: Relation, budget: int = DEFAULT_BUDGET, seed: int = 0, certify: bool = True) -> DowkerReport:
    """Check that K and L share homology, going through the nerve of the simplex cover of L."""
    K, L = dowker_complexes(r)
    KH, LH = reduced_homology(K), reduced_homology(L)
    if L.is_empty():
        return DowkerReport(K, L, K.is_empty(), None, KH, LH)
    cover = dowker_cover(r)
    for idx, simp in _nonempty_intersections(cover):
        assert is_cone(SimplicialComplex(simp, closed=True)) is not None, f"intersection {idx} is not a simplex"
    N = nerve(cover)
    report = verify_nerve(cover, budget, seed, certify=certify)
    return DowkerReport(K, L, N == K, report, KH, LH)


__all__ = [
    "Cover", "CoverError", "DowkerReport", "NerveHypothesisReport", "NerveReport", "Relation",
    "check_nerve_hypotheses", "dowker_complexes", "dowker_cover", "dowker_verify", "nerve",
    "nerve_comparison_map", "verify_nerve",
]
