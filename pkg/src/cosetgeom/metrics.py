"""Hausdorff distances between cosets and commensuration evidence.

For a subgroup Q and an element g, the Hausdorff distance between Q and gQ
is the smallest K with each coset inside the K-neighborhood of the other.
Q is commensurated exactly when this distance is finite for every g, and
it suffices to test g over the generators and their inverses.  A ball only
ever shows the restriction of the distance to a finite window, so the
functions here report per-radius values with an exactness flag and issue
evidence verdicts, never decisions.

Within-ball BFS can only overestimate a true distance (a geodesic may exit
the ball), and a value K measured at radius r is provably exact as soon as
r + K + margin fits inside the ball radius: any shorter outside path would
have to leave the ball, which its own length forbids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .cayley import Ball, UNREACHED, multi_source_distance
from .errors import ConfigError, EmptyCosetInBallError
from .groups import Element, GroupSpec, group_for, render_word
from .subgroups import (
    SubgroupSpec,
    VERTEX,
    base_coset_key,
    coset_key,
    is_member,
)

COMMENSURATED = "CommensuratedEvidence"
NOT_COMMENSURATED = "NotCommensuratedEvidence"
INCONCLUSIVE = "Inconclusive"

STABILIZATION_WINDOW = 3
SAFETY_MARGIN = 1


@dataclass(frozen=True)
class RadiusValue:
    """Hausdorff data measured at one profile radius."""

    radius: int
    k_forward: int
    k_backward: int
    k: int
    exact: bool


@dataclass(frozen=True)
class HausdorffProfile:
    """Per-radius Hausdorff distance between Q and gQ, with a verdict."""

    g: Element
    g_text: str
    values: Tuple[RadiusValue, ...]
    verdict: str
    window: int
    margin: int

    def k_values(self) -> Tuple[int, ...]:
        return tuple(v.k for v in self.values)

    def final_k(self) -> int:
        return self.values[-1].k


def _profile_verdict(values: Sequence[RadiusValue], window: int) -> str:
    if len(values) < window:
        return INCONCLUSIVE
    tail = values[-window:]
    ks = [v.k for v in tail]
    if len(set(ks)) == 1 and all(v.exact for v in tail):
        return COMMENSURATED
    if all(a < b for a, b in zip(ks, ks[1:])):
        return NOT_COMMENSURATED
    return INCONCLUSIVE


def hausdorff_profile(
    spec: GroupSpec,
    q: SubgroupSpec,
    g: Element,
    radii: Sequence[int],
    ball: Ball,
    window: int = STABILIZATION_WINDOW,
) -> HausdorffProfile:
    """Measure the two one-sided coset distances at each requested radius.

    Forward: how far elements of Q within radius r can sit from gQ.
    Backward: how far elements of gQ within radius r can sit from Q.
    Both are computed from full-ball BFS layers, so each call costs two
    traversals regardless of how many radii are requested.
    """
    if q.mode != VERTEX:
        raise ConfigError("hausdorff_profile needs exact coset keys (vertex mode)")
    if spec != ball.spec:
        raise ConfigError("ball was built for a different group")
    radii = list(radii)
    if not radii or sorted(radii) != radii:
        raise ConfigError("radii must be a nondecreasing nonempty sequence")
    if radii[-1] > ball.radius - SAFETY_MARGIN:
        raise ConfigError(
            f"largest radius {radii[-1]} too close to ball radius {ball.radius}"
        )

    group = group_for(spec)
    key_q = base_coset_key(spec, q)
    key_g = coset_key(spec, q, g)

    q_vertices: List[int] = []
    g_vertices: List[int] = []
    for vid, a in enumerate(ball.elements):
        key = coset_key(spec, q, a)
        if key == key_q:
            q_vertices.append(vid)
        if key == key_g:
            g_vertices.append(vid)
    if not g_vertices or min(ball.dist[v] for v in g_vertices) > ball.radius - 1:
        raise EmptyCosetInBallError(
            "gQ does not meet the trusted part of the ball"
        )

    dist_to_gq = multi_source_distance(ball, g_vertices)
    dist_to_q = multi_source_distance(ball, q_vertices)

    values: List[RadiusValue] = []
    for r in radii:
        fwd_pool = [dist_to_gq[v] for v in q_vertices if ball.dist[v] <= r]
        bwd_pool = [dist_to_q[v] for v in g_vertices if ball.dist[v] <= r]
        if not bwd_pool:
            raise EmptyCosetInBallError(f"gQ does not meet the ball of radius {r}")
        if UNREACHED in fwd_pool or UNREACHED in bwd_pool:
            raise EmptyCosetInBallError("coset disconnected inside the ball")
        k_forward = max(fwd_pool)
        k_backward = max(bwd_pool)
        k = max(k_forward, k_backward)
        exact = r + k + SAFETY_MARGIN <= ball.radius
        values.append(RadiusValue(r, k_forward, k_backward, k, exact))

    return HausdorffProfile(
        g=g,
        g_text=group.render(g),
        values=tuple(values),
        verdict=_profile_verdict(values, window),
        window=window,
        margin=SAFETY_MARGIN,
    )


@dataclass(frozen=True)
class CommensurationReport:
    """Aggregated verdict over a set of test elements."""

    verdict: str
    profiles: Tuple[HausdorffProfile, ...]

    def by_element(self) -> Dict[str, HausdorffProfile]:
        return {p.g_text: p for p in self.profiles}


def commensuration_verdict(
    profiles: Iterable[HausdorffProfile],
) -> CommensurationReport:
    """Combine per-element profiles: all stable is positive evidence, any
    strictly growing profile is negative evidence, anything else is open."""
    profiles = tuple(profiles)
    if not profiles:
        raise ConfigError("need at least one profile")
    if any(p.verdict == NOT_COMMENSURATED for p in profiles):
        verdict = NOT_COMMENSURATED
    elif all(p.verdict == COMMENSURATED for p in profiles):
        verdict = COMMENSURATED
    else:
        verdict = INCONCLUSIVE
    return CommensurationReport(verdict=verdict, profiles=profiles)


def default_test_elements(spec: GroupSpec) -> List[Tuple[str, Element]]:
    """Generators and their inverses, the sufficient commensuration test set."""
    group = group_for(spec)
    out = []
    for letter in spec.letters:
        word = (letter,)
        out.append((render_word(spec, word), group.evaluate_word(word)))
    return out


def default_radii(ball_radius: int, window: int = STABILIZATION_WINDOW) -> List[int]:
    """A reasonable profile schedule: every radius from 2 up to R - 3."""
    top = ball_radius - window
    if top < 2:
        raise ConfigError(f"ball radius {ball_radius} too small for a profile")
    return list(range(2, top + 1))


@dataclass(frozen=True)
class IntersectionEvidence:
    """Witnessed finite-index evidence for Q meeting its g-conjugate.

    Each row is (radius, members, cosets): how many elements of Q within
    the radius land in the conjugate subgroup, and how many distinct right
    cosets of the intersection are witnessed among Q-elements seen so far.
    A bounded coset count alongside growing membership is exactly the
    finite-index picture; a coset count growing with the radius is not.
    """

    g: Element
    g_text: str
    per_radius: Tuple[Tuple[int, int, int], ...]

    def final_coset_count(self) -> int:
        return self.per_radius[-1][2]

    def coset_counts(self) -> Tuple[int, ...]:
        return tuple(row[2] for row in self.per_radius)


def intersection_index_evidence(
    spec: GroupSpec,
    q: SubgroupSpec,
    g: Element,
    ball: Ball,
) -> IntersectionEvidence:
    if q.mode != VERTEX:
        raise ConfigError("intersection evidence needs exact membership (vertex mode)")
    if spec != ball.spec:
        raise ConfigError("ball was built for a different group")
    group = group_for(spec)
    g_inv = group.invert(g)

    def in_conjugate(a: Element) -> bool:
        return bool(is_member(spec, q, group.multiply(group.multiply(g_inv, a), g)))

    q_elements: List[Tuple[int, Element]] = []
    for vid, a in enumerate(ball.elements):
        if is_member(spec, q, a):
            q_elements.append((ball.dist[vid], a))
    q_elements.sort(key=lambda pair: pair[0])

    per_radius: List[Tuple[int, int, int]] = []
    reps: List[Element] = []
    members = 0
    idx = 0
    for r in range(ball.radius + 1):
        while idx < len(q_elements) and q_elements[idx][0] <= r:
            _, w = q_elements[idx]
            idx += 1
            if in_conjugate(w):
                members += 1
            w_inv = group.invert(w)
            for rep in reps:
                if in_conjugate(group.multiply(rep, w_inv)):
                    break
            else:
                reps.append(w)
        per_radius.append((r, members, len(reps)))

    return IntersectionEvidence(
        g=g,
        g_text=group.render(g),
        per_radius=tuple(per_radius),
    )
