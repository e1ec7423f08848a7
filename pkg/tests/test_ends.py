"""End counts, their classifications, and escape-path construction."""

from __future__ import annotations

import random

import pytest

from cosetgeom.cayley import PathInBall, build_ball
from cosetgeom.ends import (
    GROWING,
    INCONCLUSIVE,
    STABLE_COUNT,
    ZERO_ENDS,
    _classify,
    default_schedule,
    ends_report,
    escape_route,
    filtered_ends_report,
    stable_hausdorff_bound,
    verify_escape_route,
)
from cosetgeom.errors import (
    ConfigError,
    EmptyCosetInBallError,
    EscapeBlockedError,
    NoRouteWithinBallError,
    NotStabilizedError,
    ScheduleExceedsBallError,
)
from cosetgeom.groups import (
    baumslag_solitar,
    evaluate_word,
    free_abelian_group,
    free_group,
    parse_word,
)
from cosetgeom.subgroups import vertex_subgroup, word_subgroup

Q = vertex_subgroup()


def element(spec, text):
    return evaluate_word(spec, parse_word(spec, text))


def ball_vertices_within(ball, radius):
    return [vid for vid in range(ball.n_vertices) if ball.dist[vid] <= radius]


class TestGroupEndCounts:
    def test_line_has_two_stable_ends(self):
        ball = build_ball(free_abelian_group(1), 12)
        report = ends_report(ball)
        assert report.counts == (2, 2, 2, 2, 2)
        assert report.classification == STABLE_COUNT
        assert report.count == 2
        assert report.label() == "StableCount(2)"

    def test_plane_has_one_stable_end(self, ball_ab2_r12):
        report = ends_report(ball_ab2_r12)
        assert set(report.counts) == {1}
        assert report.label() == "StableCount(1)"

    def test_free_group_counts_grow_geometrically(self, ball_free2_r8):
        report = ends_report(ball_free2_r8, [(1, 6), (2, 6), (3, 6)])
        assert report.counts == (4, 12, 36)
        assert report.classification == GROWING
        assert report.count is None

    def test_free_group_default_schedule_grows(self, ball_free2_r8):
        report = ends_report(ball_free2_r8)
        assert report.schedule == ((1, 6), (2, 6))
        assert report.counts == (4, 12)
        assert report.classification == GROWING

    def test_ascending_hnn_groups_are_one_ended(self, ball_bs12_r10, ball_bs23_r10):
        for ball in (ball_bs12_r10, ball_bs23_r10):
            report = ends_report(ball)
            assert set(report.counts) == {1}
            assert report.label() == "StableCount(1)"


class TestCosetGraphEndCounts:
    def test_plane_mod_axis_is_a_two_ended_line(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        report = filtered_ends_report(spec, Q, ball_ab2_r12)
        assert report.graph_kind == "patch"
        assert set(report.counts) == {2}
        assert report.label() == "StableCount(2)"

    def test_bs12_patch_counts_double(self, ball_bs12_r10):
        spec = baumslag_solitar(1, 2)
        report = filtered_ends_report(spec, Q, ball_bs12_r10, [(1, 5), (2, 5), (3, 5)])
        assert report.counts == (3, 6, 12)
        assert report.classification == GROWING

    def test_bs12_patch_default_schedule_grows(self, ball_bs12_r10):
        spec = baumslag_solitar(1, 2)
        report = filtered_ends_report(spec, Q, ball_bs12_r10)
        assert report.counts == (6, 12, 24)
        assert report.classification == GROWING

    def test_bs23_patch_counts_grow_fourfold(self, ball_bs23_r10):
        spec = baumslag_solitar(2, 3)
        report = filtered_ends_report(spec, Q, ball_bs23_r10, [(1, 5), (2, 5), (3, 5)])
        assert report.counts == (5, 20, 80)
        assert report.classification == GROWING


class TestSchedulesAndClassification:
    def test_default_schedule_shape(self):
        assert default_schedule(10) == [(2, 8), (3, 8), (4, 8)]
        assert default_schedule(12) == [(2, 10), (3, 10), (4, 10), (5, 10), (6, 10)]
        assert default_schedule(8) == [(1, 6), (2, 6)]

    def test_default_schedule_needs_room(self):
        with pytest.raises(ConfigError):
            default_schedule(6)

    def test_schedule_beyond_horizon_rejected(self, ball_bs12_r10):
        with pytest.raises(ScheduleExceedsBallError):
            ends_report(ball_bs12_r10, [(2, 10)])

    def test_degenerate_annuli_rejected(self, ball_bs12_r10):
        with pytest.raises(ConfigError):
            ends_report(ball_bs12_r10, [(3, 3)])
        with pytest.raises(ConfigError):
            ends_report(ball_bs12_r10, [(0, 5)])
        with pytest.raises(ConfigError):
            ends_report(ball_bs12_r10, [])
        with pytest.raises(ConfigError):
            ends_report(ball_bs12_r10, [(3, 8), (2, 8)])

    def test_single_annulus_is_inconclusive(self, ball_bs12_r10):
        report = ends_report(ball_bs12_r10, [(2, 8)])
        assert report.classification == INCONCLUSIVE

    def test_classifier_edge_cases(self):
        assert _classify((4,)) == (INCONCLUSIVE, None)
        assert _classify((0, 0)) == (ZERO_ENDS, 0)
        assert _classify((1, 1, 1)) == (STABLE_COUNT, 1)
        assert _classify((4, 12, 36)) == (GROWING, None)
        assert _classify((4, 2, 3)) == (INCONCLUSIVE, None)
        assert _classify((4, 4, 5)) == (INCONCLUSIVE, None)

    def test_rejects_non_graph_input(self):
        with pytest.raises(ConfigError):
            ends_report("not a graph")


class TestStableHausdorffBound:
    def test_bounds_for_commensurated_instances(
        self, ball_bs12_r10, ball_bs23_r10, ball_ab2_r12
    ):
        assert stable_hausdorff_bound(baumslag_solitar(1, 2), Q, ball_bs12_r10) == 2
        assert stable_hausdorff_bound(baumslag_solitar(2, 3), Q, ball_bs23_r10) == 2
        assert stable_hausdorff_bound(free_abelian_group(2), Q, ball_ab2_r12) == 1

    def test_free_group_bound_does_not_stabilize(self, ball_free2_r8):
        with pytest.raises(NotStabilizedError):
            stable_hausdorff_bound(free_group(2), Q, ball_free2_r8)


class TestEscapeRoutes:
    def test_hnn_route_around_small_ball(self, ball_bs23_r10):
        spec = baumslag_solitar(2, 3)
        excluded = ball_vertices_within(ball_bs23_r10, 2)
        v = ball_bs23_r10.vertex(element(spec, "x^5"))
        g = element(spec, "t^3")
        path = escape_route(spec, Q, ball_bs23_r10, excluded, v, g, k=2)
        ok, reason = verify_escape_route(
            spec, Q, ball_bs23_r10, excluded, v, g, path
        )
        assert ok, reason

    def test_plane_route_goes_straight_up(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        excluded = ball_vertices_within(ball_ab2_r12, 1)
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        g = element(spec, "x2^5")
        path = escape_route(spec, Q, ball_ab2_r12, excluded, v, g, k=1)
        assert path.word == (2, 2)
        ok, reason = verify_escape_route(spec, Q, ball_ab2_r12, excluded, v, g, path)
        assert ok, reason

    def test_empty_exclusion_accepts_geodesic(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        g = element(spec, "x2^5")
        path = escape_route(spec, Q, ball_ab2_r12, [], v, g, k=1)
        assert len(path.word) == 2
        ok, reason = verify_escape_route(spec, Q, ball_ab2_r12, [], v, g, path)
        assert ok, reason

    def test_start_inside_excluded_set_is_blocked(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        v = ball_ab2_r12.vertex(element(spec, "x1"))
        with pytest.raises(EscapeBlockedError):
            escape_route(spec, Q, ball_ab2_r12, [v], v, element(spec, "x2^3"), k=1)

    def test_bounded_pocket_is_blocked(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        excluded = [
            ball_ab2_r12.vertex(element(spec, "x1^2")),
            ball_ab2_r12.vertex(element(spec, "x1^4")),
        ]
        v = ball_ab2_r12.vertex(element(spec, "x1^3"))
        with pytest.raises(EscapeBlockedError):
            escape_route(spec, Q, ball_ab2_r12, excluded, v, element(spec, "x2^3"), k=1)

    def test_missing_target_coset_reported(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        with pytest.raises(EmptyCosetInBallError):
            escape_route(spec, Q, ball_ab2_r12, [], v, element(spec, "x2^13"), k=1)

    def test_unreachable_target_reports_needed_radius(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        tip_guard = ball_ab2_r12.vertex(element(spec, "x2^11"))
        v = ball_ab2_r12.vertex(element(spec, "x1^3"))
        g = element(spec, "x2^12")
        with pytest.raises(NoRouteWithinBallError) as info:
            escape_route(spec, Q, ball_ab2_r12, [tip_guard], v, g, k=1)
        assert info.value.required_radius > ball_ab2_r12.radius

    def test_pinched_coset_reports_needed_radius(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        excluded = [
            vid
            for vid, a in enumerate(ball_ab2_r12.elements)
            if a[1] in (2, 4)
        ]
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        g = element(spec, "x2^8")
        with pytest.raises(NoRouteWithinBallError) as info:
            escape_route(spec, Q, ball_ab2_r12, excluded, v, g, k=1)
        assert info.value.required_radius > ball_ab2_r12.radius

    def test_word_mode_subgroup_rejected(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        wq = word_subgroup(((1,),))
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        with pytest.raises(ConfigError):
            escape_route(spec, wq, ball_ab2_r12, [], v, element(spec, "x2^5"), k=1)

    def test_route_is_deterministic(self, ball_bs23_r10):
        spec = baumslag_solitar(2, 3)
        excluded = ball_vertices_within(ball_bs23_r10, 2)
        v = ball_bs23_r10.vertex(element(spec, "x^5"))
        g = element(spec, "t^3")
        first = escape_route(spec, Q, ball_bs23_r10, excluded, v, g, k=2)
        second = escape_route(spec, Q, ball_bs23_r10, excluded, v, g, k=2)
        assert first == second


class TestEscapeVerifierIndependence:
    def test_verifier_rejects_wrong_base(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        other = ball_ab2_r12.vertex(element(spec, "x2^2"))
        bad = PathInBall(other, (2, 2))
        ok, reason = verify_escape_route(
            spec, Q, ball_ab2_r12, [], v, element(spec, "x2^5"), bad
        )
        assert not ok and "start" in reason

    def test_verifier_rejects_excursion_into_excluded_set(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        excluded = ball_vertices_within(ball_ab2_r12, 1)
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        g = element(spec, "x2^5")
        bad = PathInBall(v, (-2, -2, -2, 2, 2, 2, 2, 2))
        ok, reason = verify_escape_route(spec, Q, ball_ab2_r12, excluded, v, g, bad)
        assert not ok and "excluded" in reason

    def test_verifier_rejects_wrong_terminal_coset(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        v = ball_ab2_r12.vertex(element(spec, "x2^3"))
        short = PathInBall(v, (2,))
        ok, reason = verify_escape_route(
            spec, Q, ball_ab2_r12, [], v, element(spec, "x2^5"), short
        )
        assert not ok and "terminal" in reason

    def test_verifier_rejects_path_leaving_ball(self, ball_ab2_r12):
        spec = free_abelian_group(2)
        rim = ball_ab2_r12.vertex(element(spec, "x2^12"))
        bad = PathInBall(rim, (2,))
        ok, reason = verify_escape_route(
            spec, Q, ball_ab2_r12, [], rim, element(spec, "x2^13"), bad
        )
        assert not ok and "ball" in reason


class TestRandomEscapeScenarios:
    def run_scenarios(self, spec, ball, k, seed, n_scenarios=20):
        rng = random.Random(seed)
        solved = 0
        for _ in range(n_scenarios):
            c_radius = rng.randint(0, 2)
            excluded = ball_vertices_within(ball, c_radius)
            candidates = [
                vid
                for vid in range(ball.n_vertices)
                if c_radius + k < ball.dist[vid] <= c_radius + k + 3
            ]
            v = rng.choice(candidates)
            g_vid = rng.choice(
                [vid for vid in range(ball.n_vertices) if ball.dist[vid] > c_radius]
            )
            g = ball.elements[g_vid]
            try:
                path = escape_route(spec, Q, ball, excluded, v, g, k=k)
            except (NoRouteWithinBallError, EscapeBlockedError):
                continue
            ok, reason = verify_escape_route(spec, Q, ball, excluded, v, g, path)
            assert ok, reason
            solved += 1
        return solved

    def test_plane_scenarios_verify(self, ball_ab2_r12):
        solved = self.run_scenarios(free_abelian_group(2), ball_ab2_r12, 1, seed=5)
        assert solved >= 15

    def test_hnn_scenarios_verify(self, ball_bs12_r10):
        solved = self.run_scenarios(baumslag_solitar(1, 2), ball_bs12_r10, 2, seed=7)
        assert solved >= 10
