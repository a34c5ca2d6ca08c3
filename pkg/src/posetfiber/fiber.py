"""Fiber hypotheses, proof-shaped certificates and homological conclusions.

The certificate for an order-preserving map ``f: X -> Y`` follows the
mapping-cylinder argument.  Inside ``B(f)``:

* removing the source copies ``x_n, ..., x_1`` (reverse linear extension)
  never changes the homotopy type, since the strict up-set of ``x_r`` is
  ``F_{f(x_r)}`` whose order complex is a cone;
* removing the target copies ``y_1, ..., y_m`` is likewise harmless because
  the strict down-set of ``y_r`` is the fiber ``f^{-1}(U_{y_r})``, certified
  contractible beforehand;
* ``i <= j f`` pointwise, and a ladder of one-cover raises with contiguous
  induced maps links ``K(i)`` to ``K(j) K(f)``.

Each removal is a simple homotopy equivalence, so the certificate witnesses
that ``K(f)`` is one too.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .bridge import induced_simplicial_map, order_complex
from .complex import (
    DEFAULT_BUDGET,
    CollapseStep,
    ContractibilityVerdict,
    SimplicialComplex,
    contiguous,
    contractibility_verdict,
)
from .homology import HomologyGroup, cone_trivial_up_to, reduced_homology
from .poset import (
    MappingCylinder,
    MonotoneMap,
    Poset,
    PosetError,
    compose,
    fiber_below,
    linear_extension,
    mapping_cylinder,
)

SCHEMA_VERSION = 1


class Status(enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


class CertificationRefused(Exception):
    """The fiber hypothesis could not be certified, so no certificate is issued.

    This is not a claim that ``K(f)`` fails to be an equivalence.
    """

    def __init__(self, message: str, offending: list[str], report: FiberReport):
        super().__init__(message)
        self.offending = offending
        self.report = report


@dataclass
class HomologyCheck:
    vanishes: bool
    witness: Optional[HomologyGroup] = None

    def to_json(self) -> dict:
        out: dict = {"vanishes": self.vanishes}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass
class FiberEntry:
    y: str
    fiber: Poset
    complex: SimplicialComplex
    verdict: Optional[ContractibilityVerdict] = None
    homology: Optional[HomologyCheck] = None

    @property
    def status(self) -> Status:
        if self.verdict is not None:
            return {
                "certified_contractible": Status.CERTIFIED,
                "not_contractible": Status.REFUTED,
                "unknown": Status.INCONCLUSIVE,
            }[self.verdict.status.value]
        return Status.CERTIFIED if self.homology.vanishes else Status.REFUTED

    def to_json(self) -> dict:
        out = {"y": self.y, "fiber": list(self.fiber.elements), "status": self.status.value}
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_json()
        if self.homology is not None:
            out["homology"] = self.homology.to_json()
        return out


@dataclass
class FiberReport:
    """Per-target-element fiber checks; ``n`` is set in homology mode."""

    map: MonotoneMap
    entries: list[FiberEntry]
    n: Optional[int] = None

    @property
    def mode(self) -> str:
        return "contractible" if self.n is None else "homology"

    @property
    def status(self) -> Status:
        statuses = {e.status for e in self.entries}
        if Status.REFUTED in statuses:
            return Status.REFUTED
        if Status.INCONCLUSIVE in statuses:
            return Status.INCONCLUSIVE
        return Status.CERTIFIED

    def entry(self, y: str) -> FiberEntry:
        for e in self.entries:
            if e.y == y:
                return e
        raise KeyError(y)

    def to_json(self) -> dict:
        out = {"mode": self.mode, "status": self.status.value, "fibers": [e.to_json() for e in self.entries]}
        if self.n is not None:
            out["n"] = self.n
        return out


def check_fiber_hypothesis(f: MonotoneMap, budget: int = DEFAULT_BUDGET, seed: int = 0) -> FiberReport:
    """Contractibility verdict for ``K(f^{-1}(U_y))``, one per target element."""
    entries = []
    for y in f.target:
        P = fiber_below(f, y)
        K = order_complex(P)
        entries.append(FiberEntry(y, P, K, verdict=contractibility_verdict(K, budget, seed)))
    return FiberReport(f, entries)


def check_homology_fiber_hypothesis(f: MonotoneMap, n: int) -> FiberReport:
    """Whether every fiber has vanishing reduced homology in degrees <= n.

    An empty fiber fails for every ``n``: its reduced homology is Z in
    degree -1.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    entries = []
    for y in f.target:
        P = fiber_below(f, y)
        K = order_complex(P)
        bad = next((g for g in reduced_homology(K) if g.degree <= n and not g.is_trivial()), None)
        entries.append(FiberEntry(y, P, K, homology=HomologyCheck(bad is None, bad)))
    return FiberReport(f, entries, n=n)


def verify_homology_conclusion(f: MonotoneMap, n: int) -> tuple[bool, Optional[HomologyGroup]]:
    """Does K(f) induce isomorphisms on reduced homology in degrees <= n and an epimorphism in n+1?"""
    return cone_trivial_up_to(induced_simplicial_map(f), n)


class Connectivity(enum.Enum):
    CERTIFIED_N_CONNECTED = "certified_n_connected"
    HOMOLOGICALLY_N_CONNECTED = "homologically_n_connected"
    NOT_N_CONNECTED = "not_n_connected"


def connectivity_verdict(K: SimplicialComplex, n: int, budget: int = DEFAULT_BUDGET,
                         seed: int = 0) -> tuple[Connectivity, Optional[HomologyGroup]]:
    """n-connectivity as far as homology and collapses can tell.

    For ``n >= 1`` with vanishing homology but no contractibility proof the
    answer is only homological: the fundamental group is never computed.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    for g in reduced_homology(K):
        if g.degree <= n and not g.is_trivial():
            return Connectivity.NOT_N_CONNECTED, g
    if n == 0 or contractibility_verdict(K, budget, seed).certified:
        return Connectivity.CERTIFIED_N_CONNECTED, None
    return Connectivity.HOMOLOGICALLY_N_CONNECTED, None


# certificates


@dataclass
class RemovalStep:
    """One point removal inside the cylinder.

    ``kind`` is ``"cone"`` on the source side (evidence: ``apex`` of the
    strict up-set) and ``"fiber"`` on the target side (evidence: ``verdict``
    on the strict down-set, vertex names already in cylinder namespace).
    """

    removed: str
    ambient: list[str]
    kind: str
    link_set: list[str]
    apex: Optional[str] = None
    verdict: Optional[ContractibilityVerdict] = None

    def to_json(self) -> dict:
        out = {"removed": self.removed, "ambient": self.ambient, "kind": self.kind, "link_set": self.link_set}
        if self.apex is not None:
            out["apex"] = self.apex
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_json()
        return out


@dataclass
class SimpleEquivalenceCertificate:
    cylinder: MappingCylinder
    source_extension: list[str]
    target_extension: list[str]
    y_ladder: list[RemovalStep]
    x_ladder: list[RemovalStep]
    comparison: list[MonotoneMap]
    fiber_report: FiberReport = field(repr=False)

    @property
    def map(self) -> MonotoneMap:
        return self.cylinder.map

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "map": self.map.to_json(),
            "cylinder": self.cylinder.cylinder.to_json(),
            "linear_extensions": {"source": self.source_extension, "target": self.target_extension},
            "y_ladder": [s.to_json() for s in self.y_ladder],
            "x_ladder": [s.to_json() for s in self.x_ladder],
            "comparison": [{x: h(x) for x in h.source} for h in self.comparison],
            "fiber_reports": self.fiber_report.to_json(),
        }


def _renamed(verdict: ContractibilityVerdict, prefix: str) -> ContractibilityVerdict:
    # A common prefix keeps the sorted order of string vertices.
    def ren(s):
        return tuple(prefix + v for v in s)

    return ContractibilityVerdict(
        verdict.status,
        apex=None if verdict.apex is None else prefix + verdict.apex,
        collapses=None if verdict.collapses is None else [
            CollapseStep(ren(c.free_face), ren(c.coface)) for c in verdict.collapses],
        witness=verdict.witness,
        stats=verdict.stats,
        note=verdict.note,
    )


def comparison_homotopy_steps(f: MonotoneMap, g: MonotoneMap) -> list[MonotoneMap]:
    """Maps f = h_0, ..., h_k = g, each raising one value by one cover.

    At each step the raised element is the maximal element where the current
    map and ``g`` differ (the latest such in element order), and the new value
    is the earliest upper cover of the old one lying below the value of ``g``.
    Consecutive induced simplicial maps are checked to be contiguous.
    """
    if f.source != g.source or f.target != g.target:
        raise PosetError("comparison needs maps with the same source and target")
    X, Y = f.source, f.target
    for x in X:
        if not Y.leq(f(x), g(x)):
            raise PosetError(f"f({x}) = {f(x)} is not <= g({x}) = {g(x)}")
    KX = order_complex(X)
    steps = [f]
    cur = dict(f.assignment)
    while True:
        diff = [x for x in X if cur[x] != g(x)]
        if not diff:
            break
        maximal = [x for x in diff if not any(X.less(x, z) for z in diff)]
        x = maximal[-1]
        cover = next(c for c in Y.upper_covers(cur[x]) if Y.leq(c, g(x)))
        cur[x] = cover
        h = MonotoneMap(X, Y, cur)
        prev = steps[-1]
        # contiguity in K(Y) equals contiguity in the full subcomplex on the images
        Z = order_complex(Y.induced(set(prev.assignment.values()) | set(cur.values())))
        if not contiguous(induced_simplicial_map(prev, KX, Z), induced_simplicial_map(h, KX, Z)):
            raise AssertionError(f"raising {x} to {cover} broke contiguity")
        steps.append(h)
    return steps


def certify_simple_equivalence(f: MonotoneMap, budget: int = DEFAULT_BUDGET, seed: int = 0,
                               report: Optional[FiberReport] = None) -> SimpleEquivalenceCertificate:
    """Build the cylinder certificate that K(f) is a simple homotopy equivalence.

    Raises :class:`CertificationRefused` unless every fiber is certified
    contractible.  A failed ladder identity raises ``AssertionError``: that is
    a bug here, not a property of ``f``.
    """
    if report is None:
        report = check_fiber_hypothesis(f, budget, seed)
    if report.status is not Status.CERTIFIED:
        offending = [e.y for e in report.entries if e.status is not Status.CERTIFIED]
        raise CertificationRefused(
            f"fiber hypothesis {report.status.value}; fibers over {offending} not certified contractible",
            offending, report)

    X, Y = f.source, f.target
    cyl = mapping_cylinder(f)
    B = cyl.cylinder
    src, tgt = cyl.src, cyl.tgt
    xs, ys = linear_extension(X), linear_extension(Y)

    y_ladder = []
    ambient = B.mask(tgt(y) for y in Y) | B.mask(src(x) for x in X)
    for x in reversed(xs):
        up = B.above_mask(src(x)) & ambient
        claimed = B.mask(tgt(y) for y in Y.above(f(x), strict=False))
        assert up == claimed, f"up-set of {x} in the ladder is not F_{f(x)}"
        y_ladder.append(RemovalStep(src(x), B.from_mask(ambient), "cone", B.from_mask(up), apex=tgt(f(x))))
        ambient &= ~B.mask([src(x)])

    x_ladder = []
    ambient = B.mask(B.elements)
    for y in ys:
        down = B.below_mask(tgt(y)) & ambient
        claimed = B.mask(src(x) for x in fiber_below(f, y))
        assert down == claimed, f"down-set of {y} in the ladder is not the fiber"
        verdict = _renamed(report.entry(y).verdict, src(""))
        x_ladder.append(RemovalStep(tgt(y), B.from_mask(ambient), "fiber", B.from_mask(down), verdict=verdict))
        ambient &= ~B.mask([tgt(y)])

    comparison = comparison_homotopy_steps(cyl.source_inclusion, compose(cyl.target_inclusion, f))
    return SimpleEquivalenceCertificate(cyl, xs, ys, y_ladder, x_ladder, comparison, report)
