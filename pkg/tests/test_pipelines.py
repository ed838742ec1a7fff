"""End-to-end checks for the piercing pipelines on small instances
where the exact piercing number is known independently."""
from fractions import Fraction as F

import pytest

from pqpierce.constructions import (
    CounterexampleSpec,
    counterexample_family,
    family_A,
    family_B,
)
from pqpierce.errors import EmptySetError, MalformedInputError
from pqpierce.lp import completed_basis_matrix, invert_matrix, lp_budget
from pqpierce.piercing import piercing_number
from pqpierce.pipelines import (
    pierce_unbounded_part,
    pierce_via_free_family,
    pierce_via_projection,
    pierce_via_transversal,
    report_to_json,
    verify_counterexample,
    verify_projection_equivalence,
)
from pqpierce.sets import (
    change_coordinates,
    change_coordinates_family,
    contains_point,
    convex_hull_union,
    family,
    hrep_set,
    vrep_set,
)


def box2(label, x0, x1, y0, y1):
    return vrep_set(label, [(x0, y0), (x1, y0), (x0, y1), (x1, y1)])


def plane_instance_with_outlier():
    # one isolated singleton, four nested half-planes, two overlapping squares
    sets = [vrep_set("lone", [(-10, 0)])]
    for n in range(1, 5):
        sets.append(hrep_set(f"hp{n}", [((-1, 0), -n)]))
    sets.append(box2("sq1", 4, 5, 0, 1))
    sets.append(box2("sq2", F(9, 2), F(11, 2), F(1, 2), F(3, 2)))
    return family(sets)


def space_instance_with_outlier():
    def corners(xs, ys, zs):
        return [(x, y, z) for x in xs for y in ys for z in zs]

    sets = [vrep_set("lone", [(-10, 0, 0)])]
    for n in range(1, 6):
        sets.append(hrep_set(f"hs{n}", [((-1, 0, 0), -n)]))
    sets.append(vrep_set("bx1", corners((4, 5), (0, 1), (0, 1))))
    sets.append(
        vrep_set("bx2", corners((F(9, 2), F(11, 2)), (F(1, 2), F(3, 2)), (0, 1)))
    )
    sets.append(
        vrep_set("bx3", corners((F(9, 2), F(11, 2)), (0, 1), (F(1, 2), F(3, 2))))
    )
    return family(sets)


class TestTransversalPipeline:
    def test_plane_instance(self):
        fam = plane_instance_with_outlier()
        report = pierce_via_transversal(fam, t=1, p=4)
        assert report.name == "s1"
        assert report.all_passed
        assert report.bound_claim == ("1 + 1", 2)
        assert len(report.piercing.points) <= 2
        assert not report.piercing.optimal
        assert sorted(report.piercing.assignment) == list(range(7))
        # the singleton forces two points, so the pipeline is exact here
        exact = piercing_number(fam)
        assert len(exact.points) == 2 == len(report.piercing.points)
        for i, pi in report.piercing.assignment.items():
            assert contains_point(fam.sets[i], report.piercing.points[pi])

    def test_space_instance(self):
        fam = space_instance_with_outlier()
        report = pierce_via_transversal(fam, t=1, p=5)
        assert report.all_passed
        assert len(report.piercing.points) <= 2
        descriptions = [c.description for c in report.hypothesis_checks]
        assert any("transversal" in s for s in descriptions)
        assert any("common point" in s for s in descriptions)

    def test_transversal_row_fails_when_t_too_small(self):
        fam = plane_instance_with_outlier()
        # two separated singletons cannot be covered by a 1-transversal
        # without also breaking the (5,4)-property
        sets = list(fam.sets) + [vrep_set("lone2", [(-20, 0)])]
        fam2 = family(sets)
        report = pierce_via_transversal(fam2, t=1, p=5)
        assert not report.all_passed
        assert report.piercing is None
        assert "failed" in report.conclusion

    def test_preconditions(self):
        fam = plane_instance_with_outlier()
        with pytest.raises(MalformedInputError):
            pierce_via_transversal(fam, t=-1, p=4)
        with pytest.raises(MalformedInputError):
            pierce_via_transversal(fam, t=1, p=3)  # p - t < dim + 1
        with pytest.raises(MalformedInputError):
            pierce_via_transversal(fam, t=1, p=99)

    def test_empty_member_rejected(self):
        bad = hrep_set("void", [((1,), -1), ((-1,), 0)])
        pt = vrep_set("pt", [(0,)])
        seg = vrep_set("seg", [(0,), (1,)])
        with pytest.raises(EmptySetError):
            pierce_via_transversal(family([bad, pt, seg]), t=1, p=3)


class TestFreeFamilyPipeline:
    def build(self):
        sets = [box2("b1", 0, 1, 0, 1), box2("b2", 2, 3, 0, 1)]
        for n in range(1, 5):
            sets.append(hrep_set(f"upper{n}", [((0, -1), n)]))  # y >= -n
        return family(sets)

    def test_four_three_instance(self):
        fam = self.build()
        report = pierce_via_free_family(fam, [0, 1], p=4, q=3)
        assert report.name == "s2"
        assert report.all_passed
        formula, numeric = report.bound_claim
        assert formula == "xi(4,3,2) + 2"
        assert numeric == 15
        used = len(report.piercing.points)
        exact = len(piercing_number(fam).points)
        assert exact == 2
        assert exact <= used <= numeric
        for i, pi in report.piercing.assignment.items():
            assert contains_point(fam.sets[i], report.piercing.points[pi])

    def test_free_check_fails_on_overlapping_selection(self):
        sets = [box2("b1", 0, 1, 0, 1), box2("b2", F(1, 2), 2, 0, 1)]
        for n in range(1, 5):
            sets.append(hrep_set(f"upper{n}", [((0, -1), n)]))
        fam = family(sets)
        report = pierce_via_free_family(fam, [0, 1], p=4, q=3)
        assert not report.all_passed
        assert report.piercing is None
        first = report.hypothesis_checks[0]
        assert first.description == "selection is 1-free"
        assert first.witness == {"intersecting": ["b1", "b2"]}

    def test_preconditions(self):
        fam = self.build()
        with pytest.raises(MalformedInputError):
            pierce_via_free_family(fam, [0], p=4, q=3)  # wrong selection size
        with pytest.raises(MalformedInputError):
            pierce_via_free_family(fam, [0, 1], p=4, q=2)  # q < dim + 1
        with pytest.raises(MalformedInputError):
            pierce_via_free_family(fam, [0, 1], p=99, q=3)


class TestProjectionPipeline:
    def build(self):
        sets = [
            vrep_set("c1", [(0,), (2,)]),
            vrep_set("c2", [(1,), (3,)]),
        ]
        for n in range(1, 4):
            sets.append(hrep_set(f"ray{n}", [((-1,), -n)]))  # x >= n
        return family(sets)

    def test_line_instance(self):
        fam = self.build()
        report = pierce_via_projection(fam, [0, 1], p=5, q=4)
        assert report.name == "main"
        assert report.all_passed
        used = len(report.piercing.points)
        exact = len(piercing_number(fam).points)
        assert used == exact == 2
        formula, numeric = report.bound_claim
        assert formula == "xi(3,1,0) * xi(5,4,1) + 2"
        assert numeric is None  # no catalog value for the inner factor
        labels = [c.description for c in report.hypothesis_checks]
        assert any("truncated members" in s for s in labels)

    def test_unbounded_selection_fails(self):
        fam = self.build()
        report = pierce_via_projection(fam, [0, 2], p=5, q=4)
        assert not report.all_passed
        assert report.hypothesis_checks[0].witness == {"unbounded": ["ray1"]}

    def test_preconditions(self):
        fam = self.build()
        with pytest.raises(MalformedInputError):
            pierce_via_projection(fam, [0], p=5, q=4)
        with pytest.raises(MalformedInputError):
            pierce_via_projection(fam, [0, 1], p=5, q=3)  # q too small


class TestUnboundedPart:
    def slabs(self):
        sets = []
        for i in (1, 2, 3):
            sets.append(
                hrep_set(f"slab{i}", [((-1, 0), -i), ((1, 0), i + F(3, 2))])
            )
        return family(sets)

    def test_shadow_piercing(self):
        fam = self.slabs()
        box = box2("window", 0, 5, 0, 10)
        points, checks, assignment = pierce_unbounded_part(fam, [0, 1, 2], box, q=4)
        assert all(c.passed for c in checks)
        assert len(points) == 2
        assert assignment == {0: 0, 1: 0, 2: 1}
        for i, j in assignment.items():
            assert contains_point(fam.sets[i], points[j])
        assert checks[0].witness == {"direction": [0, 1]}

    def test_no_common_direction(self):
        sets = [
            hrep_set("vert", [((-1, 0), -1), ((1, 0), 2)]),
            hrep_set("horiz", [((0, -1), 0), ((0, 1), 1)]),
        ]
        fam = family(sets)
        box = box2("window", 0, 5, 0, 5)
        points, checks, assignment = pierce_unbounded_part(fam, [0, 1], box, q=3)
        assert points == [] and assignment == {}
        assert not checks[0].passed

    def test_box_must_be_compact(self):
        fam = self.slabs()
        ray = hrep_set("half", [((0, -1), 0)])
        with pytest.raises(MalformedInputError):
            pierce_unbounded_part(fam, [0, 1], ray, q=3)


class TestCounterexampleVerifier:
    def test_small_truncation(self):
        spec = CounterexampleSpec(d=1, n_max=6, n_bounded=3)
        report = verify_counterexample(spec, k_max=1)
        assert report.name == "counterexample"
        assert report.all_passed and report.exhaustive
        assert report.piercing is None
        cases = report.extras["cases"]
        assert cases["1"] + cases["2"] + cases["3"] == 28 + 70
        descriptions = [c.description for c in report.hypothesis_checks]
        assert "(2,2)-property" in descriptions
        assert "(4,3)-property" in descriptions
        assert any(s.startswith("candidate point set 0") for s in descriptions)

    def test_escape_rows_for_supplied_candidates(self):
        spec = CounterexampleSpec(d=1, n_max=6, n_bounded=2)
        cands = [
            [(F(0), F(1, 2))],
            [(F(5), F(0)), (F(0), F(1, 3))],
        ]
        report = verify_counterexample(spec, k_max=0, candidate_point_sets=cands)
        rows = [c for c in report.hypothesis_checks if "candidate" in c.description]
        assert [r.witness["witness"] for r in rows] == [3, 6]
        assert report.all_passed

    def test_cap_exhaustion_marks_report(self):
        spec = CounterexampleSpec(d=1, n_max=6, n_bounded=2)
        report = verify_counterexample(
            spec, k_max=0, candidate_point_sets=[[(F(100), F(0))]], n_cap=50
        )
        assert not report.exhaustive
        assert not report.all_passed
        row = report.hypothesis_checks[-1]
        assert row.witness == {"exhausted_at": 50}

    def test_budget_exhaustion_partial(self):
        spec = CounterexampleSpec(d=1, n_max=6, n_bounded=3)
        with lp_budget(10):
            report = verify_counterexample(spec, k_max=1)
        assert not report.exhaustive
        assert "partial" in report.conclusion

    def test_jobs_agree(self):
        spec = CounterexampleSpec(d=1, n_max=7, n_bounded=3)
        a = report_to_json(verify_counterexample(spec, k_max=1, jobs=1))
        b = report_to_json(verify_counterexample(spec, k_max=1, jobs=3))
        assert a == b

    def test_k_too_large_rejected(self):
        spec = CounterexampleSpec(d=1, n_max=3, n_bounded=1)
        with pytest.raises(MalformedInputError):
            verify_counterexample(spec, k_max=4)


class TestProjectionEquivalence:
    def rotated_truncation(self):
        spec = CounterexampleSpec(d=1, n_max=7, n_bounded=2)
        fam = family_A(spec)
        box = convex_hull_union(family_B(spec), [0, 1])
        back = completed_basis_matrix((F(1), F(0)))
        forward = invert_matrix(back)
        rot_fam = change_coordinates_family(fam, forward, back)
        rot_box = change_coordinates(box, forward, back)
        return rot_fam, rot_box

    def test_agreement_on_rotated_truncation(self):
        rot_fam, rot_box = self.rotated_truncation()
        report = verify_projection_equivalence(rot_fam, rot_box, max_subset=5)
        assert report.name == "corollary52"
        assert report.all_passed
        assert report.extras["subsets_checked"] == 6 + 15 + 20 + 15 + 6
        assert report.piercing is None

    def test_recession_hypothesis_fails_unrotated(self):
        spec = CounterexampleSpec(d=1, n_max=5, n_bounded=2)
        fam = family_A(spec)
        box = convex_hull_union(family_B(spec), [0, 1])
        report = verify_projection_equivalence(fam, box, max_subset=3)
        assert not report.all_passed
        assert report.piercing is None
        assert len(report.hypothesis_checks) == 1

    def test_preconditions(self):
        rot_fam, rot_box = self.rotated_truncation()
        with pytest.raises(MalformedInputError):
            verify_projection_equivalence(rot_fam, rot_box, max_subset=0)
        ray = hrep_set("half", [((0, -1), 0)])
        with pytest.raises(MalformedInputError):
            verify_projection_equivalence(rot_fam, ray, max_subset=2)


class TestReportJson:
    def test_structure_and_determinism(self):
        fam = plane_instance_with_outlier()
        r1 = report_to_json(pierce_via_transversal(fam, t=1, p=4))
        r2 = report_to_json(pierce_via_transversal(fam, t=1, p=4))
        assert r1 == r2
        assert set(r1) == {
            "name",
            "inputs",
            "hypothesis_checks",
            "piercing",
            "bound_claim",
            "conclusion",
            "exhaustive",
            "extras",
        }
        assert r1["bound_claim"] == {"formula": "1 + 1", "numeric": 2}
        for row in r1["hypothesis_checks"]:
            assert isinstance(row["passed"], bool)
        assert all(
            isinstance(c, (str, int)) for pt in r1["piercing"]["points"] for c in pt
        )

    def test_failed_report_carries_no_points(self):
        spec = CounterexampleSpec(d=1, n_max=6, n_bounded=2)
        fam = counterexample_family(spec)
        # the escaping members and the innermost box share no point, so
        # the (6,6)-property fails and no piercing may be emitted
        report = pierce_via_transversal(fam, t=0, p=6)
        assert not report.all_passed
        data = report_to_json(report)
        assert data["piercing"] is None
