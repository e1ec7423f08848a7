"""Escape-ray systems and finite homotopy-ladder certificates.

A ray system equips every vertex of a ball or coset patch with a finite
outward path whose distance from the base strictly increases.  Rays built
this way leave any fixed finite set behind: only vertices at most as deep
as the set can have rays meeting it, which is the checkable finite form of
properness.

A ladder certifies that a Q-letter path crossed by a letter k can be pushed
to the far side of k through loops of bounded length.  Rung i connects the
landing points of consecutive transfer-and-cross moves by a Q-walk of
length at most M; the elementary loop around rung i has length at most
L = 2F + M + 1 and evaluates to the identity.  The certificate stores every
waypoint element so an independent verifier can recheck each loop with
group arithmetic alone.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .cayley import Ball
from .cosetgraph import CosetPatch
from .errors import (
    ConfigError,
    ConstantViolationError,
    InsufficientRadiusError,
)
from .groups import Element, GroupSpec, group_for, inverse_word
from .lifting import STABLE, LiftConstants
from .subgroups import SubgroupSpec, VERTEX, coset_key, k_letters, q_letters


@dataclass(frozen=True)
class RaySystem:
    graph_kind: str
    base: int
    horizon: int
    shell: Tuple[int, ...]
    rays: Tuple[Tuple[int, ...], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.rays)

    def ray(self, v: int) -> Tuple[int, ...]:
        return self.rays[v]


def _neighbors_fn(graph: Union[Ball, CosetPatch]):
    if isinstance(graph, Ball):
        adj = graph.adj

        def neighbors(v: int) -> List[int]:
            return sorted({w for _, w in adj[v]})

        return "ball", len(adj), neighbors
    if isinstance(graph, CosetPatch):
        return "patch", graph.n_cosets, graph.neighbors
    raise ConfigError(f"cannot build rays over {type(graph).__name__}")


def build_ray_system(graph: Union[Ball, CosetPatch], base: int = 0) -> RaySystem:
    """Outward rays: from each vertex, greedily step to deeper shells."""
    kind, n, neighbors = _neighbors_fn(graph)
    if not (0 <= base < n):
        raise ConfigError(f"base vertex {base} not in graph")
    if base == 0:
        shell = list(graph.dist)
    else:
        shell = [-1] * n
        shell[base] = 0
        frontier = deque([base])
        while frontier:
            v = frontier.popleft()
            for w in neighbors(v):
                if shell[w] == -1:
                    shell[w] = shell[v] + 1
                    frontier.append(w)
    horizon = max(shell)

    rays: List[Tuple[int, ...]] = []
    for v in range(n):
        path = [v]
        u = v
        while shell[u] < horizon:
            outward = [w for w in neighbors(u) if shell[w] == shell[u] + 1]
            if not outward:
                break
            u = min(outward)
            path.append(u)
        rays.append(tuple(path))
    return RaySystem(
        graph_kind=kind,
        base=base,
        horizon=horizon,
        shell=tuple(shell),
        rays=tuple(rays),
    )


def rays_meeting(system: RaySystem, targets: Iterable[int]) -> Tuple[int, ...]:
    """Vertices whose ray intersects the target set."""
    targets = set(targets)
    return tuple(
        v
        for v, path in enumerate(system.rays)
        if any(u in targets for u in path)
    )


@dataclass(frozen=True)
class LadderViolation:
    loop: int
    kind: str
    detail: str


@dataclass(frozen=True)
class LadderReport:
    n_loops: int
    violations: Tuple[LadderViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed_loops(self) -> Tuple[int, ...]:
        return tuple(sorted({v.loop for v in self.violations}))


@dataclass(frozen=True)
class Ladder:
    constants: LiftConstants
    base: int
    prefix: Tuple[int, ...]
    crossing: int
    target_key: bytes
    prefix_elements: Tuple[Element, ...]
    transfer_ends: Tuple[Element, ...]
    rung_ends: Tuple[Element, ...]
    alphas: Tuple[Tuple[int, ...], ...]
    rungs: Tuple[Tuple[int, ...], ...]

    @property
    def n_loops(self) -> int:
        return len(self.prefix)

    def loop_word(self, i: int) -> Tuple[int, ...]:
        return (
            self.alphas[i]
            + (self.crossing,)
            + self.rungs[i]
            + (-self.crossing,)
            + inverse_word(self.alphas[i + 1])
            + (-self.prefix[i],)
        )

    def loop_words(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(self.loop_word(i) for i in range(self.n_loops))

    def output_word(self) -> Tuple[int, ...]:
        out: List[int] = [self.crossing]
        for rung in self.rungs:
            out.extend(rung)
        return tuple(out)


def _coset_walk(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    start: int,
    key: bytes,
    qlets: Sequence[int],
    goal: Optional[int],
    crossing: Optional[int],
    target_key: Optional[bytes],
    max_len: int,
) -> Tuple[Optional[Tuple[Tuple[int, ...], int]], bool]:
    """Shortest Q-walk inside one coset, to a goal vertex or a crossing spot.

    Exactly one of goal (a vertex id) and crossing (a letter whose edge must
    land in target_key, or anywhere when target_key is None) is active.
    Returns ((word, final vertex), saw_rim); final vertex is the walk end
    for goal mode and the landing vertex across the crossing letter for
    crossing mode.  Length is capped: the walk itself never exceeds max_len.
    """
    ordered = sorted(qlets)
    seen = {start}
    layer: List[Tuple[int, Tuple[int, ...]]] = [(start, ())]
    saw_rim = False
    depth = 0
    while True:
        for w, word in layer:
            if not ball.complete(w):
                saw_rim = True
            if goal is not None:
                if w == goal:
                    return (word, w), saw_rim
            else:
                nb = ball.neighbor(w, crossing)
                if nb is None:
                    continue
                if (
                    target_key is None
                    or coset_key(spec, q, ball.elements[nb]) == target_key
                ):
                    return (word, nb), saw_rim
        depth += 1
        if depth > max_len:
            return None, saw_rim
        nxt: List[Tuple[int, Tuple[int, ...]]] = []
        for w, word in layer:
            if not ball.complete(w):
                continue
            for letter in ordered:
                nb = ball.neighbor(w, letter)
                if nb is None or nb in seen:
                    continue
                if coset_key(spec, q, ball.elements[nb]) != key:
                    continue
                seen.add(nb)
                nxt.append((nb, word + (letter,)))
        if not nxt:
            return None, saw_rim
        layer = nxt


def build_ladder(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    prefix: Sequence[int],
    crossing: int,
    constants: LiftConstants,
    base: int = 0,
) -> Ladder:
    """Build and check a homotopy ladder along a Q-letter prefix."""
    if q.mode != VERTEX:
        raise ConfigError("ladders need exact coset keys (vertex mode)")
    if constants.confidence != STABLE:
        raise ConfigError("ladder constants must be certified Stable")
    qlets = q_letters(spec, q)
    if crossing not in k_letters(spec, q):
        raise ConfigError(f"crossing letter {crossing} must lie outside Q")
    prefix = tuple(int(e) for e in prefix)
    for e in prefix:
        if e not in qlets:
            raise ConfigError(f"prefix letter {e} must lie in Q")
    if not (0 <= base < ball.n_vertices):
        raise ConfigError(f"base vertex {base} not in ball")

    vids = [base]
    for i, e in enumerate(prefix):
        nb = ball.neighbor(vids[-1], e)
        if nb is None:
            raise InsufficientRadiusError(
                f"prefix step {i} leaves the ball (radius {ball.radius})"
            )
        vids.append(nb)

    home_key = coset_key(spec, q, ball.elements[base])
    f_bound = constants.f_for(crossing)

    alphas: List[Tuple[int, ...]] = []
    transfer_vids: List[int] = []
    landing_vids: List[int] = []
    target_key: Optional[bytes] = None
    for i, v in enumerate(vids):
        found, saw_rim = _coset_walk(
            spec,
            q,
            ball,
            v,
            home_key,
            qlets,
            goal=None,
            crossing=crossing,
            target_key=target_key,
            max_len=f_bound - 1,
        )
        if found is None:
            if saw_rim:
                raise InsufficientRadiusError(
                    f"transfer search at rung {i} reached the ball boundary"
                )
            raise ConstantViolationError(
                f"no transfer within {f_bound - 1} Q-steps at rung {i}; "
                "F appears underestimated"
            )
        alpha, landing = found
        if target_key is None:
            target_key = coset_key(spec, q, ball.elements[landing])
        alphas.append(alpha)
        landing_vids.append(landing)
        walked = v
        for letter in alpha:
            walked = ball.neighbor(walked, letter)
        transfer_vids.append(walked)

    rungs: List[Tuple[int, ...]] = []
    for i in range(len(prefix)):
        found, saw_rim = _coset_walk(
            spec,
            q,
            ball,
            landing_vids[i],
            target_key,
            qlets,
            goal=landing_vids[i + 1],
            crossing=None,
            target_key=None,
            max_len=constants.m,
        )
        if found is None:
            if saw_rim:
                raise InsufficientRadiusError(
                    f"rung search {i} reached the ball boundary"
                )
            raise ConstantViolationError(
                f"no Q-walk of length <= {constants.m} between rung ends "
                f"{i} and {i + 1}; M appears underestimated"
            )
        rung, _ = found
        rungs.append(rung)

    elements = ball.elements
    ladder = Ladder(
        constants=constants,
        base=base,
        prefix=prefix,
        crossing=crossing,
        target_key=target_key,
        prefix_elements=tuple(elements[v] for v in vids),
        transfer_ends=tuple(elements[v] for v in transfer_vids),
        rung_ends=tuple(elements[v] for v in landing_vids),
        alphas=tuple(alphas),
        rungs=tuple(rungs),
    )
    report = verify_ladder(spec, ladder)
    if not report.ok:
        first = report.violations[0]
        raise ConstantViolationError(
            f"freshly built ladder fails its own check: loop {first.loop}, "
            f"{first.kind}: {first.detail}"
        )
    return ladder


def verify_ladder(spec: GroupSpec, ladder: Ladder) -> LadderReport:
    """Recheck every loop of a ladder using group arithmetic only."""
    group = group_for(spec)
    ident = group.identity()
    violations: List[LadderViolation] = []
    n = ladder.n_loops
    consts = ladder.constants
    f_bound = consts.f_for(ladder.crossing)

    def leg(word: Sequence[int], start: Element) -> Element:
        return group.evaluate_word(word, start)

    shapes_ok = (
        len(ladder.alphas) == n + 1
        and len(ladder.rungs) == n
        and len(ladder.prefix_elements) == n + 1
        and len(ladder.transfer_ends) == n + 1
        and len(ladder.rung_ends) == n + 1
    )
    if not shapes_ok:
        return LadderReport(
            n_loops=n,
            violations=(
                LadderViolation(-1, "structure", "component counts disagree"),
            ),
        )

    for i in range(n):
        word = ladder.loop_word(i)
        if group.evaluate_word(word) != ident:
            violations.append(
                LadderViolation(i, "word", "raw loop word is not a relation")
            )
        if len(word) > consts.l:
            violations.append(
                LadderViolation(
                    i, "length", f"loop length {len(word)} exceeds L={consts.l}"
                )
            )
        if len(ladder.rungs[i]) > consts.m:
            violations.append(
                LadderViolation(
                    i,
                    "length",
                    f"rung length {len(ladder.rungs[i])} exceeds M={consts.m}",
                )
            )
        for j in (i, i + 1):
            if len(ladder.alphas[j]) >= f_bound:
                violations.append(
                    LadderViolation(
                        i,
                        "length",
                        f"transfer walk length {len(ladder.alphas[j])} "
                        f"reaches F={f_bound}",
                    )
                )
                break

        closes = (
            leg(ladder.alphas[i], ladder.prefix_elements[i])
            == ladder.transfer_ends[i]
            and leg((ladder.crossing,), ladder.transfer_ends[i])
            == ladder.rung_ends[i]
            and leg(ladder.rungs[i], ladder.rung_ends[i]) == ladder.rung_ends[i + 1]
            and leg((-ladder.crossing,), ladder.rung_ends[i + 1])
            == ladder.transfer_ends[i + 1]
            and leg(inverse_word(ladder.alphas[i + 1]), ladder.transfer_ends[i + 1])
            == ladder.prefix_elements[i + 1]
            and leg((-ladder.prefix[i],), ladder.prefix_elements[i + 1])
            == ladder.prefix_elements[i]
        )
        if not closes:
            violations.append(
                LadderViolation(
                    i, "identity", "loop does not close through its waypoints"
                )
            )
    return LadderReport(n_loops=n, violations=tuple(violations))
