"""Replay a serialized cylinder certificate from scratch.

Deliberately independent of :mod:`posetfiber.poset` and
:mod:`posetfiber.fiber`: orders are closed with plain set iteration and chains
are enumerated directly.  Only the elementary-collapse replay is shared.
"""
from __future__ import annotations

from collections.abc import Mapping

from .complex import ComplexError, CollapseStep, SimplicialComplex, replay_collapses


class CertificateError(Exception):
    pass


def _fail(msg):
    raise CertificateError(msg)


def _closure(elements, pairs) -> dict[str, set]:
    """Strict up-sets of the transitive closure; rejects cycles."""
    up = {e: set() for e in elements}
    for a, b in pairs:
        if a not in up or b not in up:
            _fail(f"relation {a} < {b} mentions an unknown element")
        up[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elements:
            extra = set().union(*(up[b] for b in up[a])) - up[a] if up[a] else set()
            if extra:
                up[a] |= extra
                changed = True
    for a in elements:
        if a in up[a]:
            _fail(f"order has a cycle through {a}")
    return up


def _hasse(elements, up) -> set:
    return {(a, b) for a in elements for b in up[a] if not any(b in up[c] for c in up[a])}


def _chains(elements, up, maximal_only=False) -> list[tuple]:
    """All chains, or only the maximal ones (grown along covers from minima)."""
    out = []

    def grow(chain, top):
        nxt = [e for e in elements if e in up[top]]
        if maximal_only:
            nxt = [e for e in nxt if not any(e in up[c] for c in nxt)]
        if not maximal_only or not nxt:
            out.append(chain)
        for e in nxt:
            grow(chain + (e,), e)

    starts = [e for e in elements if not maximal_only or not any(e in up[o] for o in elements)]
    for e in starts:
        grow((e,), e)
    return out


def _is_chain(vals, up) -> bool:
    vals = list(set(vals))
    return all(b in up[a] or a in up[b] for i, a in enumerate(vals) for b in vals[i + 1:])


def verify_certificate(cert: Mapping) -> dict:
    """Check every claim in a certificate; return counts of what was checked.

    Raises :class:`CertificateError` on the first failure.
    """
    m = cert["map"]
    X, Y = list(m["source"]["elements"]), list(m["target"]["elements"])
    upX = _closure(X, m["source"]["relations"])
    upY = _closure(Y, m["target"]["relations"])
    f = dict(m["assignment"])
    if set(f) != set(X) or not set(f.values()) <= set(Y):
        _fail("map is not a total function into the target")
    for a in X:
        for b in upX[a]:
            if f[a] != f[b] and f[b] not in upY[f[a]]:
                _fail(f"map is not order preserving at {a} < {b}")

    def leqY(a, b):
        return a == b or b in upY[a]

    src = {x: "src:" + x for x in X}
    tgt = {y: "tgt:" + y for y in Y}
    B = [src[x] for x in X] + [tgt[y] for y in Y]
    upB = {src[x]: {src[z] for z in upX[x]} | {tgt[y] for y in Y if leqY(f[x], y)} for x in X}
    upB.update({tgt[y]: {tgt[z] for z in upY[y]} for y in Y})
    cyl = cert["cylinder"]
    if list(cyl["elements"]) != B or {tuple(p) for p in cyl["relations"]} != _hasse(B, upB):
        _fail("cylinder does not match the definition x <= y iff f(x) <= y")

    xs = list(cert["linear_extensions"]["source"])
    ys = list(cert["linear_extensions"]["target"])
    for order, els, up in ((xs, X, upX), (ys, Y, upY)):
        pos = {e: k for k, e in enumerate(order)}
        if sorted(order) != sorted(els) or any(pos[a] > pos[b] for a in els for b in up[a]):
            _fail(f"{order} is not a linear extension")

    # source copies leave in reverse extension order; each strict up-set is a cone
    yl = cert["y_ladder"]
    if len(yl) != len(xs):
        _fail("source-side ladder has the wrong length")
    for r in range(len(xs), 0, -1):
        step = yl[len(xs) - r]
        x = xs[r - 1]
        ambient = {tgt[y] for y in Y} | {src[z] for z in xs[:r]}
        if step["removed"] != src[x] or set(step["ambient"]) != ambient:
            _fail(f"source-side step {len(xs) - r} removes the wrong point or has the wrong ambient")
        up = upB[src[x]] & ambient
        if up != {tgt[y] for y in Y if leqY(f[x], y)} or set(step["link_set"]) != up:
            _fail(f"up-set of {src[x]} is not F_{f[x]}")
        apex = step.get("apex")
        if apex not in up or any(e != apex and e not in upB[apex] and apex not in upB[e] for e in up):
            _fail(f"{apex} is not a cone apex over the up-set of {src[x]}")

    # target copies leave in extension order; each strict down-set is a certified fiber
    xl = cert["x_ladder"]
    if len(xl) != len(ys):
        _fail("target-side ladder has the wrong length")
    for r, y in enumerate(ys, start=1):
        step = xl[r - 1]
        ambient = {src[x] for x in X} | {tgt[z] for z in ys[r - 1:]}
        if step["removed"] != tgt[y] or set(step["ambient"]) != ambient:
            _fail(f"target-side step {r - 1} removes the wrong point or has the wrong ambient")
        down = {e for e in ambient if tgt[y] in upB[e]}
        if down != {src[x] for x in X if leqY(f[x], y)} or set(step["link_set"]) != down:
            _fail(f"down-set of {tgt[y]} is not the fiber over {y}")
        verdict = step.get("verdict") or {}
        if verdict.get("status") != "certified_contractible":
            _fail(f"fiber over {y} carries no contractibility certificate")
        els = [e for e in B if e in down]
        if "apex" in verdict:
            a = verdict["apex"]
            if a not in down or any(e != a and e not in upB[a] and a not in upB[e] for e in down):
                _fail(f"{a} is not a cone apex of the fiber over {y}")
        elif "collapses" in verdict:
            K = SimplicialComplex(_chains(els, upB))
            try:
                rest = replay_collapses(K, [CollapseStep.from_json(c) for c in verdict["collapses"]])
            except ComplexError as e:
                _fail(f"collapse replay over {y}: {e}")
            if len(rest) != 1:
                _fail(f"collapses over {y} do not end at a vertex")
        else:
            _fail(f"fiber over {y} has no evidence")

    # comparison ladder from i to j f, one cover raise at a time, contiguous throughout
    comp = [dict(h) for h in cert["comparison"]]
    if not comp or comp[0] != {x: src[x] for x in X} or comp[-1] != {x: tgt[f[x]] for x in X}:
        _fail("comparison ladder does not run from i to j f")
    for h in comp:
        if set(h) != set(X) or not set(h.values()) <= set(upB):
            _fail("comparison map is not a total function into the cylinder")
    facets = _chains(X, upX, maximal_only=True)
    for k, (h, h2) in enumerate(zip(comp, comp[1:])):
        changed = [x for x in X if h[x] != h2[x]]
        if len(changed) != 1:
            _fail(f"comparison step {k} changes {len(changed)} values")
        (x,) = changed
        a, b = h[x], h2[x]
        if b not in upB[a] or any(b in upB[c] for c in upB[a]):
            _fail(f"comparison step {k} does not raise {x} by one cover")
        for a2 in X:
            for b2 in upX[a2]:
                if h2[a2] != h2[b2] and h2[b2] not in upB[h2[a2]]:
                    _fail(f"comparison map {k + 1} is not order preserving")
        for s in facets:
            if not _is_chain([h[v] for v in s] + [h2[v] for v in s], upB):
                _fail(f"comparison step {k} is not contiguous on {list(s)}")

    return {"y_steps": len(yl), "x_steps": len(xl), "comparison_steps": len(comp) - 1}
