"""Finite posets, order-preserving maps and the constructions built on them.

A :class:`Poset` stores its cover relation (the Hasse diagram) and answers
comparability queries through reachability bitsets, one Python ``int`` per
element.  Element identifiers are strings; the order in which elements were
given is kept and used as the tie-breaker everywhere a choice is made.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Literal

SOURCE_PREFIX = "src:"
TARGET_PREFIX = "tgt:"


class PosetError(ValueError):
    """Base class for malformed posets and maps."""


class CycleError(PosetError):
    pass


class DuplicateElementError(PosetError):
    pass


class UnknownElementError(PosetError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class NotMonotoneError(PosetError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite partial order on string identifiers.

    ``Poset(elements, relations)`` accepts any set of pairs ``(a, b)`` meaning
    ``a < b``; redundant and implied pairs are fine.  The order is the
    transitive closure of the pairs, and only its transitive reduction is kept
    as :attr:`hasse`.
    """

    __slots__ = ("elements", "_index", "_below", "_above", "hasse", "_hash")

    def __init__(self, elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()):
        elements = tuple(elements)
        index: dict[str, int] = {}
        for e in elements:
            if not isinstance(e, str):
                raise TypeError(f"poset elements must be strings, got {e!r}")
            if e in index:
                raise DuplicateElementError(f"duplicate element {e!r}")
            index[e] = len(index)
        n = len(elements)

        succ: list[set[int]] = [set() for _ in range(n)]
        for a, b in relations:
            for e in (a, b):
                if e not in index:
                    raise UnknownElementError(f"relation mentions unknown element {e!r}")
            if a == b:
                raise CycleError(f"relation {a!r} < {b!r} is reflexive")
            succ[index[a]].add(index[b])

        # Kahn's algorithm; leftovers lie on a cycle.
        indeg = [0] * n
        for i in range(n):
            for j in succ[i]:
                indeg[j] += 1
        queue = [i for i in range(n) if indeg[i] == 0]
        topo = []
        while queue:
            i = queue.pop()
            topo.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
        if len(topo) != n:
            stuck = [elements[i] for i in range(n) if indeg[i] > 0]
            raise CycleError(f"relations contain a cycle through {stuck}")

        above = [0] * n
        for i in reversed(topo):
            mask = 0
            for j in succ[i]:
                mask |= above[j] | (1 << j)
            above[i] = mask
        below = [0] * n
        for i in range(n):
            for j in _bits(above[i]):
                below[j] |= 1 << i

        hasse = []
        for i in range(n):
            for j in _bits(above[i]):
                if above[i] & below[j] == 0:
                    hasse.append((elements[i], elements[j]))

        self.elements = elements
        self._index = index
        self._below = tuple(below)
        self._above = tuple(above)
        self.hasse = tuple(hasse)
        self._hash = None

    # basic protocol

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and set(self.hasse) == set(other.hasse)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.elements, frozenset(self.hasse)))
        return self._hash

    def __repr__(self) -> str:
        rel = ", ".join(f"{a}<{b}" for a, b in self.hasse)
        return f"Poset({list(self.elements)}, [{rel}])"

    # queries

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElementError(f"unknown element {x!r}") from None

    def mask(self, xs: Iterable[str]) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.index(x)
        return m

    def from_mask(self, mask: int) -> list[str]:
        return [self.elements[i] for i in _bits(mask)]

    def less(self, a: str, b: str) -> bool:
        return bool(self._above[self.index(a)] >> self.index(b) & 1)

    def leq(self, a: str, b: str) -> bool:
        return a == b and a in self._index or self.less(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.less(b, a)

    def below_mask(self, x: str, strict: bool = True) -> int:
        i = self.index(x)
        return self._below[i] | (0 if strict else 1 << i)

    def above_mask(self, x: str, strict: bool = True) -> int:
        i = self.index(x)
        return self._above[i] | (0 if strict else 1 << i)

    def below(self, x: str, strict: bool = True) -> list[str]:
        return self.from_mask(self.below_mask(x, strict))

    def above(self, x: str, strict: bool = True) -> list[str]:
        return self.from_mask(self.above_mask(x, strict))

    def upper_covers(self, x: str) -> list[str]:
        """Elements covering ``x``, in element order."""
        i = self.index(x)
        return [self.elements[j] for j in _bits(self._above[i]) if self._above[i] & self._below[j] == 0]

    def lower_covers(self, x: str) -> list[str]:
        i = self.index(x)
        return [self.elements[j] for j in _bits(self._below[i]) if self._below[i] & self._above[j] == 0]

    def minimal(self) -> list[str]:
        return [e for i, e in enumerate(self.elements) if self._below[i] == 0]

    def maximal(self) -> list[str]:
        return [e for i, e in enumerate(self.elements) if self._above[i] == 0]

    def relations(self) -> list[tuple[str, str]]:
        """Every strict pair ``a < b`` of the closure."""
        return [(self.elements[i], self.elements[j]) for i in range(len(self)) for j in _bits(self._above[i])]

    def induced(self, subset: Iterable[str]) -> Poset:
        """Induced subposet; elements keep the ambient order."""
        m = self.mask(subset)
        keep = list(_bits(m))
        rel = [(self.elements[i], self.elements[j]) for i in keep for j in _bits(self._above[i] & m)]
        return Poset([self.elements[i] for i in keep], rel)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "relations": [list(p) for p in self.hasse]}

    @classmethod
    def from_json(cls, data: Mapping) -> Poset:
        return cls(data["elements"], [tuple(p) for p in data["relations"]])


def build_poset(elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()) -> Poset:
    return Poset(elements, relations)


def cone_sets(P: Poset, x: str, direction: Literal["below", "above"], strict: bool = False) -> Poset:
    """The induced subposet U_x, F_x or their strict versions.

    ``below`` gives ``{x' <= x}`` and ``above`` gives ``{x' >= x}``; with
    ``strict=True`` the element itself is dropped.
    """
    if direction == "below":
        m = P.below_mask(x, strict)
    elif direction == "above":
        m = P.above_mask(x, strict)
    else:
        raise ValueError(f"direction must be 'below' or 'above', not {direction!r}")
    return P.induced(P.from_mask(m))


def linear_extension(P: Poset) -> list[str]:
    """Repeatedly take the earliest (in element order) minimal remaining element."""
    remaining = (1 << len(P)) - 1
    order = []
    below = P._below
    while remaining:
        for i in _bits(remaining):
            if below[i] & remaining == 0:
                order.append(P.elements[i])
                remaining ^= 1 << i
                break
    return order


def is_linear_extension(P: Poset, order: list[str]) -> bool:
    if sorted(order) != sorted(P.elements):
        return False
    pos = {x: r for r, x in enumerate(order)}
    return all(pos[a] < pos[b] for a, b in P.relations())


def opposite(P: Poset) -> Poset:
    return Poset(P.elements, [(b, a) for a, b in P.hasse])


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    """Order-preserving map; checked on construction against every Hasse edge."""

    source: Poset
    target: Poset
    assignment: Mapping[str, str] = field(repr=False)

    def __post_init__(self):
        assignment = dict(self.assignment)
        for x in self.source:
            if x not in assignment:
                raise UnknownElementError(f"map is undefined on source element {x!r}")
        for x, y in assignment.items():
            if x not in self.source:
                raise UnknownElementError(f"map assigns unknown source element {x!r}")
            if y not in self.target:
                raise UnknownElementError(f"map sends {x!r} to unknown target element {y!r}")
        for a, b in self.source.hasse:
            if not self.target.leq(assignment[a], assignment[b]):
                raise NotMonotoneError(
                    f"map is not order preserving: {a} < {b} but {assignment[a]} is not <= {assignment[b]}"
                )
        object.__setattr__(self, "assignment", assignment)

    def __call__(self, x: str) -> str:
        return self.assignment[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.assignment == other.assignment)

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted(self.assignment.items()))))

    def image(self) -> list[str]:
        hit = set(self.assignment.values())
        return [y for y in self.target if y in hit]

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "assignment": {x: self.assignment[x] for x in self.source}}

    @classmethod
    def from_json(cls, data: Mapping) -> MonotoneMap:
        return cls(Poset.from_json(data["source"]), Poset.from_json(data["target"]), data["assignment"])


def identity_map(P: Poset) -> MonotoneMap:
    return MonotoneMap(P, P, {x: x for x in P})


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g after f``."""
    if f.target != g.source:
        raise PosetError("maps are not composable")
    return MonotoneMap(f.source, g.target, {x: g(f(x)) for x in f.source})


def fiber_below(f: MonotoneMap, y: str) -> Poset:
    """The subposet f^{-1}(U_y) of the source."""
    m = f.target.below_mask(y, strict=False)
    t = f.target
    return f.source.induced([x for x in f.source if m >> t.index(f(x)) & 1])


@dataclass(frozen=True, eq=False)
class MappingCylinder:
    """The non-Hausdorff mapping cylinder with its two inclusions."""

    map: MonotoneMap
    cylinder: Poset
    source_inclusion: MonotoneMap
    target_inclusion: MonotoneMap

    @staticmethod
    def src(x: str) -> str:
        return SOURCE_PREFIX + x

    @staticmethod
    def tgt(y: str) -> str:
        return TARGET_PREFIX + y


def mapping_cylinder(f: MonotoneMap) -> MappingCylinder:
    """B(f) on ``src:X`` followed by ``tgt:Y``, with x <= y iff f(x) <= y."""
    X, Y = f.source, f.target
    src, tgt = MappingCylinder.src, MappingCylinder.tgt
    elements = [src(x) for x in X] + [tgt(y) for y in Y]
    relations = [(src(a), src(b)) for a, b in X.hasse]
    relations += [(tgt(a), tgt(b)) for a, b in Y.hasse]
    # x < f(x) generates the rest: f(x) <= y gives x < f(x) <= y.
    relations += [(src(x), tgt(f(x))) for x in X]
    B = Poset(elements, relations)
    i = MonotoneMap(X, B, {x: src(x) for x in X})
    j = MonotoneMap(Y, B, {y: tgt(y) for y in Y})
    return MappingCylinder(f, B, i, j)
