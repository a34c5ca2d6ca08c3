import numpy as np
import pytest

from posetfiber.bridge import face_poset
from posetfiber.complex import build_complex, full_simplex
from posetfiber.corpus import (
    antichain,
    chain,
    circle_poset,
    circle_to_interval,
    circle_to_point,
    dunce_hat,
    four_cycle,
    point,
)
from posetfiber.fiber import (
    CertificationRefused,
    Connectivity,
    Status,
    certify_simple_equivalence,
    check_fiber_hypothesis,
    check_homology_fiber_hypothesis,
    comparison_homotopy_steps,
    connectivity_verdict,
    verify_homology_conclusion,
)
from posetfiber.homology import HomologyGroup
from posetfiber.poset import MonotoneMap, Poset, PosetError, identity_map
from posetfiber.verify import verify_certificate

from generators import random_monotone_map, random_poset


def const(X, Y, y):
    return MonotoneMap(X, Y, {x: y for x in X})


class TestFiberHypothesis:
    def test_identity(self):
        rep = check_fiber_hypothesis(identity_map(chain("a", "b", "c")))
        assert rep.status is Status.CERTIFIED
        assert [e.verdict.apex for e in rep.entries] == ["a", "a", "a"]

    def test_circle_to_point(self):
        rep = check_fiber_hypothesis(circle_to_point())
        assert rep.status is Status.REFUTED
        w = rep.entry("p").verdict.witness
        assert (w.degree, w.betti) == (1, 1)

    def test_circle_to_interval(self):
        rep = check_fiber_hypothesis(circle_to_interval())
        assert rep.status is Status.REFUTED
        assert rep.entry("u").verdict.witness == HomologyGroup(0, 1)

    def test_empty_fiber_refutes(self):
        f = const(point("a"), chain("u", "v"), "v")
        rep = check_fiber_hypothesis(f)
        assert rep.status is Status.REFUTED
        assert rep.entry("u").verdict.witness.degree == -1

    def test_covers_each_target_once(self):
        rep = check_fiber_hypothesis(circle_to_interval())
        assert [e.y for e in rep.entries] == ["u", "v"]

    def test_unknown_gives_inconclusive(self):
        X = face_poset(dunce_hat())
        rep = check_fiber_hypothesis(const(X, point(), "p"), budget=2)
        assert rep.status is Status.INCONCLUSIVE


class TestHomologyFiberHypothesis:
    def test_identity_any_n(self):
        for n in range(4):
            assert check_homology_fiber_hypothesis(identity_map(chain("a", "b")), n).status is Status.CERTIFIED

    def test_circle_levels(self):
        f = circle_to_point()
        assert check_homology_fiber_hypothesis(f, 0).status is Status.CERTIFIED
        rep = check_homology_fiber_hypothesis(f, 1)
        assert rep.status is Status.REFUTED
        assert rep.entry("p").homology.witness == HomologyGroup(1, 1)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            check_homology_fiber_hypothesis(circle_to_point(), -1)

    def test_empty_fiber(self):
        rep = check_homology_fiber_hypothesis(const(point("a"), chain("u", "v"), "v"), 3)
        assert rep.status is Status.REFUTED


class TestConclusion:
    def test_identity(self):
        for n in range(4):
            assert verify_homology_conclusion(identity_map(circle_poset()), n) == (True, None)

    def test_circle_to_point(self):
        f = circle_to_point()
        # H~1 = Z -> 0 is onto, so the level-0 conclusion holds; level 1 needs an iso on H~1
        assert verify_homology_conclusion(f, 0) == (True, None)
        assert verify_homology_conclusion(f, 1) == (False, HomologyGroup(2, 1))

    def test_point_into_antichain(self):
        f = MonotoneMap(point("a"), antichain("u", "v"), {"a": "u"})
        assert verify_homology_conclusion(f, 0) == (False, HomologyGroup(0, 1))


class TestConnectivity:
    def test_cone(self):
        for n in range(3):
            assert connectivity_verdict(full_simplex([1, 2, 3]), n) == (Connectivity.CERTIFIED_N_CONNECTED, None)

    def test_four_cycle(self):
        assert connectivity_verdict(four_cycle(), 0)[0] is Connectivity.CERTIFIED_N_CONNECTED
        status, w = connectivity_verdict(four_cycle(), 1)
        assert status is Connectivity.NOT_N_CONNECTED and w.degree == 1

    def test_disconnected(self):
        status, w = connectivity_verdict(build_complex([[1], [2]]), 0)
        assert status is Connectivity.NOT_N_CONNECTED and w.degree == 0

    def test_dunce_hat(self):
        assert connectivity_verdict(dunce_hat(), 1, budget=2)[0] is Connectivity.HOMOLOGICALLY_N_CONNECTED


class TestComparison:
    def test_equal_maps(self):
        f = identity_map(chain("a", "b"))
        assert comparison_homotopy_steps(f, f) == [f]

    def test_point_up_chain(self):
        Y = chain("u", "v", "w")
        steps = comparison_homotopy_steps(const(point(), Y, "u"), const(point(), Y, "w"))
        assert [h("p") for h in steps] == ["u", "v", "w"]

    def test_precondition(self):
        Y = chain("u", "v")
        with pytest.raises(PosetError):
            comparison_homotopy_steps(const(point(), Y, "v"), const(point(), Y, "u"))

    def test_one_cover_per_step(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            X = random_poset(rng, 4, 0.4, "x")
            Y = random_poset(rng, 5, 0.5, "y")
            f = random_monotone_map(rng, X, Y)
            if f is None or not X.elements:
                continue
            g = {x: max(Y.above(f(x), strict=False), key=lambda y: len(Y.below(y))) for x in X}
            try:
                g = MonotoneMap(X, Y, g)
            except ValueError:
                continue
            steps = comparison_homotopy_steps(f, g)
            for h0, h1 in zip(steps, steps[1:]):
                moved = [x for x in X if h0(x) != h1(x)]
                assert len(moved) == 1
                assert h1(moved[0]) in Y.upper_covers(h0(moved[0]))


class TestCertificate:
    def test_identity_on_edge(self):
        cert = certify_simple_equivalence(identity_map(chain("a", "b")))
        assert len(cert.y_ladder) == 2 and len(cert.x_ladder) == 2
        assert len(cert.comparison) == 3
        assert [s.removed for s in cert.y_ladder] == ["src:b", "src:a"]
        assert [s.removed for s in cert.x_ladder] == ["tgt:a", "tgt:b"]
        assert cert.y_ladder[0].apex == "tgt:b"
        assert verify_certificate(cert.to_json()) == {"y_steps": 2, "x_steps": 2, "comparison_steps": 2}

    def test_constant_chain_to_point(self):
        cert = certify_simple_equivalence(const(chain("a", "b", "c"), point(), "p"))
        verify_certificate(cert.to_json())

    def test_refusal_on_refuted(self):
        with pytest.raises(CertificationRefused) as e:
            certify_simple_equivalence(circle_to_point())
        assert e.value.offending == ["p"]
        assert e.value.report.status is Status.REFUTED

    def test_refusal_on_unknown(self):
        X = face_poset(dunce_hat())
        with pytest.raises(CertificationRefused) as e:
            certify_simple_equivalence(const(X, point(), "p"), budget=2)
        assert e.value.offending == ["p"]
        assert e.value.report.status is Status.INCONCLUSIVE

    def test_fiber_collapses_are_renamed(self):
        # zigzag a < c > b < d: its order complex is a path, contractible but not a cone
        X = Poset("abcd", [("a", "c"), ("b", "c"), ("b", "d")])
        cert = certify_simple_equivalence(const(X, point(), "p"))
        (step,) = cert.x_ladder
        assert step.verdict.apex is None and step.verdict.collapses
        assert all(v.startswith("src:") for c in step.verdict.collapses for v in c.coface)
        assert verify_certificate(cert.to_json())["x_steps"] == 1

    def test_json_schema_keys(self):
        data = certify_simple_equivalence(identity_map(point())).to_json()
        assert set(data) == {"schema_version", "map", "cylinder", "linear_extensions", "y_ladder",
                             "x_ladder", "comparison", "fiber_reports"}

    def test_random_certificates_replay(self):
        rng = np.random.default_rng(17)
        done = 0
        while done < 40:
            X = random_poset(rng, int(rng.integers(1, 6)), 0.4, "x")
            Y = random_poset(rng, int(rng.integers(1, 5)), 0.5, "y")
            f = random_monotone_map(rng, X, Y)
            if f is None:
                continue
            try:
                cert = certify_simple_equivalence(f, budget=8)
            except CertificationRefused:
                continue
            verify_certificate(cert.to_json())
            done += 1
