"""End counting on balls and coset patches, plus verified escape paths.

The number of ends of a graph is approximated at finite scale by counting
connected components of the annulus r <= dist <= R that touch the outer
sphere dist == R.  Touching the sphere is the finite surrogate for being
unbounded; agreement of the count across the two largest inner radii is
the finite surrogate for stability.  A strictly growing count is evidence
of infinitely many ends, never proof, and reports say so.

The escape construction answers: from a start vertex, avoiding a finite
excluded set C, can we reach a prescribed coset?  It mirrors the shape of
the underlying argument: first travel inside the start vertex's own coset
until clear of the K-neighborhood of C (K the stabilized Hausdorff bound),
then route to the target coset.  Every returned path can be re-checked by
an independent verifier that uses only group arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .cayley import Ball, PathInBall, UNREACHED, multi_source_distance
from .cosetgraph import CosetPatch
from .errors import (
    ConfigError,
    EmptyCosetInBallError,
    EscapeBlockedError,
    NoRouteWithinBallError,
    NotStabilizedError,
    ScheduleExceedsBallError,
)
from .groups import Element, GroupSpec, group_for
from .metrics import (
    COMMENSURATED,
    default_radii,
    default_test_elements,
    hausdorff_profile,
)
from .subgroups import SubgroupSpec, VERTEX, base_coset_key, coset_key

ZERO_ENDS = "ZeroEnds"
STABLE_COUNT = "StableCount"
GROWING = "Growing"
INCONCLUSIVE = "Inconclusive"

Schedule = Sequence[Tuple[int, int]]


@dataclass(frozen=True)
class EndsReport:
    graph_kind: str
    horizon: int
    schedule: Tuple[Tuple[int, int], ...]
    counts: Tuple[int, ...]
    classification: str
    count: Optional[int]

    def label(self) -> str:
        if self.classification == STABLE_COUNT:
            return f"StableCount({self.count})"
        return self.classification


def default_schedule(horizon: int) -> List[Tuple[int, int]]:
    """Annuli with shared outer radius horizon - 2 and inner radii 2 and up."""
    outer = horizon - 2
    inner_top = outer - 4
    inners = list(range(2, inner_top + 1))
    if len(inners) < 2:
        inners = list(range(1, inner_top + 1))
    if len(inners) < 2:
        raise ConfigError(f"horizon {horizon} too small for an ends schedule")
    return [(r, outer) for r in inners]


def _graph_view(graph: Union[Ball, CosetPatch]):
    if isinstance(graph, Ball):
        dist = graph.dist
        adj = graph.adj

        def neighbors(v: int) -> Iterable[int]:
            return (other for _, other in adj[v])

        return "ball", dist, neighbors, graph.radius
    if isinstance(graph, CosetPatch):
        dist = graph.dist
        return "patch", dist, graph.neighbors, max(dist)
    raise ConfigError(f"cannot count ends of {type(graph).__name__}")


def _annulus_component_count(
    dist: Sequence[int], neighbors: Callable[[int], Iterable[int]], r: int, R: int
) -> int:
    member = [r <= d <= R for d in dist]
    ids = [v for v, m in enumerate(member) if m]
    pos = {v: i for i, v in enumerate(ids)}
    parent = list(range(len(ids)))

    def find(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    for v in ids:
        pv = pos[v]
        for w in neighbors(v):
            if member[w]:
                ri, rj = find(pv), find(pos[w])
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    touching = {find(pos[v]) for v in ids if dist[v] == R}
    return len(touching)


def _classify(counts: Sequence[int]) -> Tuple[str, Optional[int]]:
    if len(counts) < 2:
        return INCONCLUSIVE, None
    if counts[-1] == counts[-2]:
        if counts[-1] == 0:
            return ZERO_ENDS, 0
        return STABLE_COUNT, counts[-1]
    if all(a < b for a, b in zip(counts, counts[1:])):
        return GROWING, None
    return INCONCLUSIVE, None


def ends_report(
    graph: Union[Ball, CosetPatch], schedule: Optional[Schedule] = None
) -> EndsReport:
    """Count sphere-touching annulus components over a schedule of (r, R)."""
    kind, dist, neighbors, horizon = _graph_view(graph)
    if schedule is None:
        schedule = default_schedule(horizon)
    schedule = [(int(r), int(R)) for r, R in schedule]
    if not schedule:
        raise ConfigError("empty ends schedule")
    for r, R in schedule:
        if not (1 <= r < R):
            raise ConfigError(f"bad annulus ({r}, {R})")
        if R > horizon - 1:
            raise ScheduleExceedsBallError(
                f"annulus ({r}, {R}) reaches past usable horizon {horizon - 1}"
            )
    rs = [r for r, _ in schedule]
    if sorted(rs) != rs:
        raise ConfigError("schedule must have nondecreasing inner radii")

    counts = tuple(
        _annulus_component_count(dist, neighbors, r, R) for r, R in schedule
    )
    classification, count = _classify(counts)
    return EndsReport(
        graph_kind=kind,
        horizon=horizon,
        schedule=tuple(schedule),
        counts=counts,
        classification=classification,
        count=count,
    )


def filtered_ends_report(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    schedule: Optional[Schedule] = None,
) -> EndsReport:
    """Ends of the coset-graph patch: the filtered-end count evidence."""
    from .cosetgraph import build_coset_patch

    patch = build_coset_patch(spec, q, ball)
    return ends_report(patch, schedule)


def stable_hausdorff_bound(
    spec: GroupSpec, q: SubgroupSpec, ball: Ball
) -> int:
    """The constant K: max stabilized Hausdorff distance over generator cosets.

    Raises NotStabilizedError when any generator profile fails to stabilize,
    since escape construction is only meaningful with commensuration evidence.
    """
    radii = default_radii(ball.radius)
    k = 0
    for name, g in default_test_elements(spec):
        profile = hausdorff_profile(spec, q, g, radii, ball)
        if profile.verdict != COMMENSURATED:
            raise NotStabilizedError("K", profile.k_values())
        k = max(k, profile.final_k())
    return k


def _bfs_route(
    ball: Ball,
    start: int,
    allowed: Callable[[int], bool],
    is_target: Callable[[int], bool],
) -> Optional[Tuple[int, ...]]:
    """Letters of a shortest allowed path from start to a target, or None."""
    if is_target(start):
        return ()
    parent: dict = {start: (-1, 0)}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for letter, w in ball.adj[v]:
                if w in parent or not allowed(w):
                    continue
                parent[w] = (v, letter)
                if is_target(w):
                    letters: List[int] = []
                    u = w
                    while u != start:
                        u, letter_in = parent[u]
                        letters.append(letter_in)
                    return tuple(reversed(letters))
                nxt.append(w)
        frontier = nxt
    return None


def _blocked_region(
    ball: Ball, keys: Sequence[bytes], excluded: FrozenSet[int]
) -> Set[int]:
    """The excluded set plus bounded in-coset pockets it cuts off.

    For each coset meeting the excluded set, the coset's remaining in-ball
    vertices split into components; a component that never reaches the outer
    sphere is a dead end for in-coset travel and is treated as blocked.
    """
    blocked: Set[int] = set(excluded)
    affected = {keys[v] for v in excluded}
    if not affected:
        return blocked
    for key in sorted(affected):
        members = [
            v for v in range(ball.n_vertices)
            if keys[v] == key and v not in excluded
        ]
        unseen = set(members)
        for seed in members:
            if seed not in unseen:
                continue
            component = [seed]
            unseen.discard(seed)
            stack = [seed]
            touches = False
            while stack:
                v = stack.pop()
                if ball.dist[v] == ball.radius:
                    touches = True
                for _, w in ball.adj[v]:
                    if w in unseen and keys[w] == key:
                        unseen.discard(w)
                        component.append(w)
                        stack.append(w)
            if not touches:
                blocked.update(component)
    return blocked


def escape_route(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    c_vertices: Iterable[int],
    v: int,
    g: Element,
    k: Optional[int] = None,
) -> PathInBall:
    """A path from v into the coset of g that avoids the excluded vertices.

    The path travels inside v's own coset until it clears the K-neighborhood
    of the excluded set, then routes freely (still avoiding the set) into the
    target coset.  K may be passed in to reuse a previously computed bound.
    """
    if q.mode != VERTEX:
        raise ConfigError("escape routing needs exact coset keys (vertex mode)")
    if spec != ball.spec:
        raise ConfigError("ball was built for a different group")
    excluded = frozenset(c_vertices)
    n = ball.n_vertices
    for u in excluded:
        if not (0 <= u < n):
            raise ConfigError(f"excluded vertex {u} not in ball")
    if not (0 <= v < n):
        raise ConfigError(f"start vertex {v} not in ball")
    if v in excluded:
        raise EscapeBlockedError("start vertex lies in the excluded set")

    keys = [coset_key(spec, q, a) for a in ball.elements]
    key_g = coset_key(spec, q, g)
    targets = [w for w in range(n) if keys[w] == key_g and w not in excluded]
    if not targets:
        raise EmptyCosetInBallError(
            "target coset has no usable vertex inside the ball"
        )

    if k is None:
        k = stable_hausdorff_bound(spec, q, ball)

    blocked = _blocked_region(ball, keys, excluded)
    if v in blocked:
        raise EscapeBlockedError(
            "start vertex is trapped in a bounded pocket of its coset"
        )

    if excluded:
        dist_c = multi_source_distance(ball, excluded)
    else:
        dist_c = [UNREACHED] * n

    def clear_of_star(u: int) -> bool:
        return dist_c[u] == UNREACHED or dist_c[u] > k

    key_v = keys[v]
    alpha = _bfs_route(
        ball,
        v,
        allowed=lambda u: keys[u] == key_v and u not in blocked,
        is_target=clear_of_star,
    )
    if alpha is None:
        max_c = max((ball.dist[u] for u in excluded), default=0)
        raise NoRouteWithinBallError(
            "no in-coset vertex clears the excluded neighborhood",
            required_radius=max(ball.radius + 1, max_c + k + 1),
        )
    mid = v
    for letter in alpha:
        mid = ball.neighbor(mid, letter)

    target_set = set(targets)
    beta = _bfs_route(
        ball,
        mid,
        allowed=lambda u: u not in excluded,
        is_target=lambda u: u in target_set,
    )
    if beta is None:
        raise NoRouteWithinBallError(
            "target coset unreachable without entering the excluded set",
            required_radius=ball.radius + k + 1,
        )
    return PathInBall(v, alpha + beta)


def verify_escape_route(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    c_vertices: Iterable[int],
    v: int,
    g: Element,
    path: PathInBall,
) -> Tuple[bool, str]:
    """Independent check of an escape path using group arithmetic only."""
    excluded = frozenset(c_vertices)
    if path.base != v:
        return False, "path does not start at the requested vertex"
    group = group_for(spec)
    a = ball.elements[v]
    vid: Optional[int] = v
    if vid in excluded:
        return False, "start vertex lies in the excluded set"
    for i, letter in enumerate(path.word):
        a = group.apply_letter(a, letter)
        vid = ball.vertex(a)
        if vid is None:
            return False, f"step {i} leaves the ball"
        if vid in excluded:
            return False, f"step {i} enters the excluded set"
    if coset_key(spec, q, a) != coset_key(spec, q, g):
        return False, "terminal vertex is not in the target coset"
    return True, ""
