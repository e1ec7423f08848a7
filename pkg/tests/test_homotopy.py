"""Ray systems and homotopy-ladder certificates."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from cosetgeom.cosetgraph import build_coset_patch
from cosetgeom.errors import (
    ConfigError,
    ConstantViolationError,
    InsufficientRadiusError,
)
from cosetgeom.groups import (
    baumslag_solitar,
    evaluate_word,
    free_abelian_group,
    group_for,
    parse_word,
)
from cosetgeom.homotopy import (
    build_ladder,
    build_ray_system,
    rays_meeting,
    verify_ladder,
)
from cosetgeom.lifting import BALL_LIMITED, LiftConstants, STABLE, lift_constants
from cosetgeom.subgroups import coset_key, vertex_subgroup

Q = vertex_subgroup()


def element(spec, text):
    return evaluate_word(spec, parse_word(spec, text))


def ball_neighbor_sets(ball):
    return [sorted({w for _, w in row}) for row in ball.adj]


@pytest.fixture(scope="module")
def constants_bs12(ball_bs12_r10):
    return lift_constants(baumslag_solitar(1, 2), Q, ball_bs12_r10)


@pytest.fixture(scope="module")
def constants_bs23(ball_bs23_r10):
    return lift_constants(baumslag_solitar(2, 3), Q, ball_bs23_r10)


@pytest.fixture(scope="module")
def constants_ab2(ball_ab2_r12):
    return lift_constants(free_abelian_group(2), Q, ball_ab2_r12)


@pytest.fixture(scope="module")
def ladder_bs23(ball_bs23_r10, constants_bs23):
    return build_ladder(
        baumslag_solitar(2, 3), Q, ball_bs23_r10, (1,) * 6, 2, constants_bs23
    )


class TestRaySystems:
    def check_invariants(self, system, neighbor_sets):
        for v, ray in enumerate(system.rays):
            assert ray[0] == v
            for a, b in zip(ray, ray[1:]):
                assert b in neighbor_sets[a]
                assert system.shell[b] == system.shell[a] + 1
            tip = ray[-1]
            if system.shell[tip] < system.horizon:
                outward = [
                    w
                    for w in neighbor_sets[tip]
                    if system.shell[w] == system.shell[tip] + 1
                ]
                assert outward == []

    def test_ball_rays_reach_the_horizon(self, ball_ab2_r12, ball_free2_r8):
        for ball in (ball_ab2_r12, ball_free2_r8):
            system = build_ray_system(ball)
            assert system.graph_kind == "ball"
            assert system.horizon == ball.radius
            self.check_invariants(system, ball_neighbor_sets(ball))
            for ray in system.rays:
                assert system.shell[ray[-1]] == system.horizon

    def test_bs_ball_rays_are_monotone(self, ball_bs12_r10):
        system = build_ray_system(ball_bs12_r10)
        self.check_invariants(system, ball_neighbor_sets(ball_bs12_r10))

    def test_patch_rays(self, ball_bs23_r10):
        patch = build_coset_patch(baumslag_solitar(2, 3), Q, ball_bs23_r10)
        system = build_ray_system(patch)
        assert system.graph_kind == "patch"
        neighbor_sets = [patch.neighbors(c) for c in range(patch.n_cosets)]
        self.check_invariants(system, neighbor_sets)
        star = [c for c in range(patch.n_cosets) if patch.dist[c] <= 1]
        assert len(star) == 6
        meeters = rays_meeting(system, star)
        assert set(meeters) == set(star)

    def test_ab2_star_meeters(self, ball_ab2_r12):
        system = build_ray_system(ball_ab2_r12)
        star = [v for v in range(ball_ab2_r12.n_vertices) if ball_ab2_r12.dist[v] <= 1]
        meeters = rays_meeting(system, star)
        assert len(meeters) == 5
        assert set(meeters) == set(star)

    def test_meeters_are_no_deeper_than_the_obstacle(self, ball_ab2_r12):
        ball = ball_ab2_r12
        system = build_ray_system(ball)
        neighbor_sets = ball_neighbor_sets(ball)
        rng = random.Random(20)
        interior = [v for v in range(ball.n_vertices) if ball.dist[v] <= 8]
        for _ in range(20):
            center = rng.choice(interior)
            obstacle = {center, *neighbor_sets[center]}
            depth = max(ball.dist[v] for v in obstacle)
            for v in rays_meeting(system, obstacle):
                assert ball.dist[v] <= depth

    def test_rebased_shells(self, ball_ab2_r12):
        ball = ball_ab2_r12
        base = ball.vertex(element(free_abelian_group(2), "x2"))
        system = build_ray_system(ball, base=base)
        assert system.base == base
        assert system.shell[base] == 0
        assert system.shell[0] == 1
        self.check_invariants(system, ball_neighbor_sets(ball))

    def test_no_targets_means_no_meeters(self, ball_free2_r8):
        system = build_ray_system(ball_free2_r8)
        assert rays_meeting(system, ()) == ()

    def test_bad_inputs(self, ball_free2_r8):
        with pytest.raises(ConfigError):
            build_ray_system(ball_free2_r8, base=-1)
        with pytest.raises(ConfigError):
            build_ray_system(ball_free2_r8, base=ball_free2_r8.n_vertices)
        with pytest.raises(ConfigError):
            build_ray_system(object())


class TestLadderConstruction:
    def test_ab2_ladders_are_commutator_squares(self, ball_ab2_r12, constants_ab2):
        spec = free_abelian_group(2)
        ladder = build_ladder(spec, Q, ball_ab2_r12, (1, 1, 1), 2, constants_ab2)
        assert ladder.n_loops == 3
        assert ladder.alphas == ((), (), (), ())
        assert ladder.rungs == ((1,), (1,), (1,))
        assert ladder.loop_words() == ((2, 1, -2, -1),) * 3
        assert verify_ladder(spec, ladder).ok

    def test_bs12_rungs_double_the_prefix(self, ball_bs12_r10, constants_bs12):
        spec = baumslag_solitar(1, 2)
        ladder = build_ladder(spec, Q, ball_bs12_r10, (1,) * 4, 2, constants_bs12)
        assert ladder.alphas == ((),) * 5
        assert ladder.rungs == ((1, 1),) * 4
        assert ladder.output_word() == (2,) + (1,) * 8
        group = group_for(spec)
        assert group.evaluate_word(ladder.output_word()) == ladder.rung_ends[-1]
        assert verify_ladder(spec, ladder).ok

    def test_bs23_ladder_values(self, ladder_bs23, constants_bs23):
        spec = baumslag_solitar(2, 3)
        ladder = ladder_bs23
        assert ladder.n_loops == 6
        assert ladder.alphas == ((), (-1,), (), (-1,), (), (-1,), ())
        assert ladder.rungs == ((), (1, 1, 1), (), (1, 1, 1), (), (1, 1, 1))
        lengths = tuple(len(w) for w in ladder.loop_words())
        assert lengths == (4, 7, 4, 7, 4, 7)
        assert max(lengths) <= constants_bs23.l
        group = group_for(spec)
        ident = group.identity()
        for word in ladder.loop_words():
            assert group.evaluate_word(word) == ident
        assert group.evaluate_word(ladder.output_word()) == ladder.rung_ends[-1]

    def test_rung_ends_share_the_target_coset(self, ladder_bs23):
        spec = baumslag_solitar(2, 3)
        for el in ladder_bs23.rung_ends:
            assert coset_key(spec, Q, el) == ladder_bs23.target_key

    def test_report_shape(self, ladder_bs23):
        report = verify_ladder(baumslag_solitar(2, 3), ladder_bs23)
        assert report.ok
        assert report.n_loops == 6
        assert report.failed_loops() == ()

    def test_unstable_constants_rejected(self, ball_bs12_r10, constants_bs12):
        shaky = replace(constants_bs12, confidence=BALL_LIMITED)
        with pytest.raises(ConfigError):
            build_ladder(baumslag_solitar(1, 2), Q, ball_bs12_r10, (1,), 2, shaky)

    def test_crossing_letter_must_leave_q(self, ball_bs12_r10, constants_bs12):
        with pytest.raises(ConfigError):
            build_ladder(baumslag_solitar(1, 2), Q, ball_bs12_r10, (1,), 1, constants_bs12)

    def test_prefix_letters_must_stay_in_q(self, ball_bs12_r10, constants_bs12):
        with pytest.raises(ConfigError):
            build_ladder(baumslag_solitar(1, 2), Q, ball_bs12_r10, (2,), 2, constants_bs12)

    def test_prefix_leaving_the_ball(self, ball_ab2_r12, constants_ab2):
        with pytest.raises(InsufficientRadiusError):
            build_ladder(
                free_abelian_group(2), Q, ball_ab2_r12, (1,) * 13, 2, constants_ab2
            )

    def test_starved_f_is_flagged(self, ball_bs23_r10):
        starved = LiftConstants(
            f_per_letter=((1, 1), (-1, 1), (2, 1), (-2, 2)),
            f=2,
            m=5,
            l=10,
            radii=(9, 10),
            confidence=STABLE,
        )
        with pytest.raises(ConstantViolationError, match="F appears underestimated"):
            build_ladder(baumslag_solitar(2, 3), Q, ball_bs23_r10, (1,), 2, starved)

    def test_starved_m_is_flagged(self, ball_bs12_r10):
        starved = LiftConstants(
            f_per_letter=((1, 1), (-1, 1), (2, 1), (-2, 2)),
            f=2,
            m=1,
            l=6,
            radii=(9, 10),
            confidence=STABLE,
        )
        with pytest.raises(ConstantViolationError, match="M appears underestimated"):
            build_ladder(baumslag_solitar(1, 2), Q, ball_bs12_r10, (1, 1), 2, starved)


class TestLadderVerifier:
    def test_corrupt_rung_endpoint_breaks_two_adjacent_loops(self, ladder_bs23):
        spec = baumslag_solitar(2, 3)
        group = group_for(spec)
        ends = list(ladder_bs23.rung_ends)
        ends[3] = group.evaluate_word((1,), ends[3])
        report = verify_ladder(spec, replace(ladder_bs23, rung_ends=tuple(ends)))
        assert not report.ok
        assert report.failed_loops() == (2, 3)
        assert all(v.kind == "identity" for v in report.violations)

    def test_corrupt_first_endpoint_breaks_one_loop(self, ladder_bs23):
        spec = baumslag_solitar(2, 3)
        group = group_for(spec)
        ends = list(ladder_bs23.rung_ends)
        ends[0] = group.evaluate_word((1,), ends[0])
        report = verify_ladder(spec, replace(ladder_bs23, rung_ends=tuple(ends)))
        assert report.failed_loops() == (0,)

    def test_oversize_rung_is_flagged(self, ball_bs12_r10, constants_bs12):
        spec = baumslag_solitar(1, 2)
        ladder = build_ladder(spec, Q, ball_bs12_r10, (1,) * 4, 2, constants_bs12)
        rungs = list(ladder.rungs)
        rungs[2] = rungs[2] + (1, -1) * 3
        report = verify_ladder(spec, replace(ladder, rungs=tuple(rungs)))
        assert not report.ok
        assert report.failed_loops() == (2,)
        assert {v.kind for v in report.violations} == {"length"}

    def test_corrupt_rung_word_fails_word_and_identity(self, ladder_bs23):
        spec = baumslag_solitar(2, 3)
        rungs = list(ladder_bs23.rungs)
        rungs[1] = rungs[1] + (1,)
        report = verify_ladder(spec, replace(ladder_bs23, rungs=tuple(rungs)))
        assert report.failed_loops() == (1,)
        assert {v.kind for v in report.violations} == {"word", "identity"}

    def test_oversize_alpha_is_flagged(self, ladder_bs23):
        spec = baumslag_solitar(2, 3)
        alphas = list(ladder_bs23.alphas)
        alphas[1] = (-1, 1, -1)
        report = verify_ladder(spec, replace(ladder_bs23, alphas=tuple(alphas)))
        assert not report.ok
        assert set(report.failed_loops()) == {0, 1}
        kinds = {v.kind for v in report.violations}
        assert "length" in kinds

    def test_dropped_rung_is_a_structure_error(self, ladder_bs23):
        spec = baumslag_solitar(2, 3)
        report = verify_ladder(spec, replace(ladder_bs23, rungs=ladder_bs23.rungs[:-1]))
        assert not report.ok
        assert report.violations[0].kind == "structure"
        assert report.violations[0].loop == -1
