"""Transfer constants and approximate lifting of coset-graph paths.

For a letter s, the constant F_s bounds how far an element of Q must walk
inside Q (in Q's own word metric) before the s-edge at its position lands
in a prescribed neighboring coset: every such walk has length < F_s.  The
companion constant M bounds the Q-word distance between any two Q-elements
whose ambient distance is at most 2F+1.  Both are suprema over the whole
group; a ball computation reports the maximum over the ball at each of the
two largest radii and certifies the value only when the radii agree.

Lifting turns a path in the coset graph into an actual path in the group:
alternating blocks (alpha_0, e_1, alpha_1, e_2, ...) where each alpha_i is
a Q-letter walk of length < F and each e_i realizes one coset-graph edge.
Projecting the lift back to the coset graph returns the input exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .cayley import Ball
from .cosetgraph import CosetPatch, LambdaPath
from .errors import (
    ConfigError,
    InsufficientRadiusError,
    NotStabilizedError,
    NoTransferVertexError,
)
from .groups import GroupSpec, group_for, render_word
from .subgroups import (
    SubgroupSpec,
    VERTEX,
    base_coset_key,
    coset_key,
    q_letters,
)

STABLE = "Stable"
BALL_LIMITED = "BallLimited"


@dataclass(frozen=True)
class ConstantScan:
    """One constant evaluated at several radii of the same ball."""

    name: str
    radii: Tuple[int, ...]
    values: Tuple[int, ...]

    @property
    def stable(self) -> bool:
        return len(self.values) >= 2 and self.values[-1] == self.values[-2]

    @property
    def final(self) -> int:
        return self.values[-1]


@dataclass(frozen=True)
class LiftConstants:
    f_per_letter: Tuple[Tuple[int, int], ...]
    f: int
    m: int
    l: int
    radii: Tuple[int, ...]
    confidence: str

    def __post_init__(self):
        if self.f < 1 or self.m < 1:
            raise ConfigError("transfer constants must be positive")
        if self.l != 2 * self.f + self.m + 1:
            raise ConfigError("loop bound must equal 2F + M + 1")

    def f_for(self, letter: int) -> int:
        for l, value in self.f_per_letter:
            if l == letter:
                return value
        raise ConfigError(f"no transfer constant for letter {letter}")


@dataclass(frozen=True)
class LiftResult:
    input_path: LambdaPath
    base: int
    blocks: Tuple[Tuple[int, ...], ...]
    letters: Tuple[int, ...]
    end: int

    def __post_init__(self):
        if len(self.blocks) != len(self.letters):
            raise ValueError("one Q-block per crossing letter")

    @property
    def word(self) -> Tuple[int, ...]:
        out: List[int] = []
        for block, letter in zip(self.blocks, self.letters):
            out.extend(block)
            out.append(letter)
        return tuple(out)

    def block_lengths(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


def _require_vertex_mode(q: SubgroupSpec) -> None:
    if q.mode != VERTEX:
        raise ConfigError("transfer constants need exact membership (vertex mode)")


def _default_radii(ball: Ball, radii: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if radii is None:
        radii = (ball.radius - 1, ball.radius)
    radii = tuple(int(r) for r in radii)
    if len(radii) < 2:
        raise ConfigError("stabilization needs at least two radii")
    if list(radii) != sorted(radii):
        raise ConfigError("radii must be nondecreasing")
    if radii[0] < 1 or radii[-1] > ball.radius:
        raise ConfigError("radii must lie inside the ball")
    return radii


def _q_vertex_ids(spec: GroupSpec, q: SubgroupSpec, ball: Ball) -> List[int]:
    base_key = base_coset_key(spec, q)
    return [
        vid
        for vid in range(ball.n_vertices)
        if coset_key(spec, q, ball.elements[vid]) == base_key
    ]


def _q_subgraph_distance(
    ball: Ball,
    qlets: Set[int],
    members: Set[int],
    sources: Sequence[int],
    radius: int,
) -> Dict[int, int]:
    """BFS over Q-letter edges among members, restricted to dist <= radius."""
    dist = {vid: 0 for vid in sources if ball.dist[vid] <= radius}
    frontier = deque(sorted(dist))
    while frontier:
        v = frontier.popleft()
        for letter, w in ball.adj[v]:
            if letter not in qlets or w in dist:
                continue
            if w not in members or ball.dist[w] > radius:
                continue
            dist[w] = dist[v] + 1
            frontier.append(w)
    return dist


def compute_f(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    radii: Optional[Sequence[int]] = None,
) -> Dict[int, ConstantScan]:
    """Per-letter transfer constants, evaluated at each radius."""
    _require_vertex_mode(q)
    radii = _default_radii(ball, radii)
    group = group_for(spec)
    base_key = base_coset_key(spec, q)
    q_ids = _q_vertex_ids(spec, q, ball)
    members = set(q_ids)
    qlets = set(q_letters(spec, q))

    out: Dict[int, ConstantScan] = {}
    for s in spec.letters:
        s_el = group.evaluate_word((s,))
        s_inv = group.evaluate_word((-s,))
        transfer = [
            vid
            for vid in q_ids
            if coset_key(
                spec, q, group.multiply(group.multiply(s_inv, ball.elements[vid]), s_el)
            )
            == base_key
        ]
        values = []
        for r in radii:
            dist = _q_subgraph_distance(ball, qlets, members, transfer, r)
            worst = 0
            for vid in q_ids:
                if ball.dist[vid] > r:
                    continue
                if vid not in dist:
                    worst = None
                    break
                worst = max(worst, dist[vid])
            if worst is None:
                raise NoTransferVertexError(
                    f"letter {render_word(spec, (s,))} has unreachable Q-vertices "
                    f"at radius {r}"
                )
            values.append(1 + worst)
        out[s] = ConstantScan(
            name=f"F[{render_word(spec, (s,))}]",
            radii=radii,
            values=tuple(values),
        )
    return out


def compute_m(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    f: int,
    radii: Optional[Sequence[int]] = None,
) -> ConstantScan:
    """Q-word diameter of ambient-metric balls of radius 2F+1 inside Q."""
    _require_vertex_mode(q)
    radii = _default_radii(ball, radii)
    bound = 2 * f + 1
    if bound > radii[0]:
        raise ConfigError(
            f"pair distance bound {bound} exceeds the smallest radius {radii[0]}"
        )
    q_ids = _q_vertex_ids(spec, q, ball)
    members = set(q_ids)
    qlets = set(q_letters(spec, q))
    identity_vid = 0
    deltas = [vid for vid in q_ids if 0 < ball.dist[vid] <= bound]

    values = []
    for r in radii:
        dist = _q_subgraph_distance(ball, qlets, members, [identity_vid], r)
        worst = 0
        for vid in deltas:
            if vid not in dist:
                raise NoTransferVertexError(
                    f"Q-vertex at ambient distance {ball.dist[vid]} unreachable "
                    f"inside radius {r}"
                )
            worst = max(worst, dist[vid])
        values.append(worst)
    return ConstantScan(name="M", radii=radii, values=tuple(values))


def lift_constants(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    radii: Optional[Sequence[int]] = None,
    strict: bool = True,
) -> LiftConstants:
    """Compute and certify F (per letter), M, and the loop bound L."""
    scans = compute_f(spec, q, ball, radii)
    stable = True
    for s in sorted(scans, key=lambda l: (abs(l), -l)):
        scan = scans[s]
        if not scan.stable:
            if strict:
                raise NotStabilizedError(scan.name, scan.values)
            stable = False
    f = max(scan.final for scan in scans.values())
    m_scan = compute_m(spec, q, ball, f, radii)
    if not m_scan.stable:
        if strict:
            raise NotStabilizedError(m_scan.name, m_scan.values)
        stable = False
    m = m_scan.final
    per_letter = tuple((s, scans[s].final) for s in spec.letters)
    return LiftConstants(
        f_per_letter=per_letter,
        f=f,
        m=m,
        l=2 * f + m + 1,
        radii=_default_radii(ball, radii),
        confidence=STABLE if stable else BALL_LIMITED,
    )


def _transfer_search(
    ball: Ball,
    patch: CosetPatch,
    qlets: Sequence[int],
    start: int,
    step_letter: int,
    bound: int,
    target_coset: Optional[int],
) -> Tuple[Optional[Tuple[Tuple[int, ...], int]], bool]:
    """Shortest Q-walk (lexicographic tie-break) whose step-edge lands right.

    Returns ((alpha, landing vertex), saw_rim).  A landing is a vertex w in
    start's coset with alpha = path(start -> w), |alpha| < bound, such that
    the step_letter edge at w exists and enters target_coset (any coset if
    target_coset is None).  saw_rim reports whether the search touched the
    ball boundary, which distinguishes truncation from genuine absence.
    """
    coset = patch.coset_of[start]
    ordered = sorted(qlets)
    seen = {start}
    layer: List[Tuple[int, Tuple[int, ...]]] = [(start, ())]
    saw_rim = False
    depth = 0
    while True:
        for w, alpha in layer:
            if not ball.complete(w):
                saw_rim = True
            nb = ball.neighbor(w, step_letter)
            if nb is None:
                continue
            if target_coset is None or patch.coset_of[nb] == target_coset:
                return (alpha, nb), saw_rim
        depth += 1
        if depth >= bound:
            return None, saw_rim
        nxt: List[Tuple[int, Tuple[int, ...]]] = []
        for w, alpha in layer:
            if not ball.complete(w):
                continue
            for letter in ordered:
                nb = ball.neighbor(w, letter)
                if nb is None or nb in seen:
                    continue
                if patch.coset_of[nb] != coset:
                    continue
                seen.add(nb)
                nxt.append((nb, alpha + (letter,)))
        if not nxt:
            return None, saw_rim
        layer = nxt


def approximate_lift(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    patch: CosetPatch,
    lpath: LambdaPath,
    base: int,
    constants: Optional[LiftConstants] = None,
) -> LiftResult:
    """Lift a coset-graph path to a group path through the given base vertex."""
    _require_vertex_mode(q)
    if patch.ball is not ball and patch.ball != ball:
        raise ConfigError("patch was built over a different ball")
    if not (0 <= base < ball.n_vertices):
        raise ConfigError(f"base vertex {base} not in ball")
    if patch.coset_of[base] != lpath.start:
        raise ConfigError("base vertex does not project to the path start")
    for cid in lpath.cosets:
        if not (0 <= cid < patch.n_cosets):
            raise ConfigError(f"coset id {cid} not in patch")
    if constants is None:
        constants = lift_constants(spec, q, ball)

    qlets = q_letters(spec, q)
    u = base
    blocks: List[Tuple[int, ...]] = []
    letters: List[int] = []
    for i, s in enumerate(lpath.letters):
        bound = constants.f_for(s)
        found, saw_rim = _transfer_search(
            ball, patch, qlets, u, s, bound, lpath.cosets[i + 1]
        )
        if found is None:
            if saw_rim:
                raise InsufficientRadiusError(
                    f"lift step {i} reached the ball boundary "
                    f"(radius {ball.radius})"
                )
            raise NoTransferVertexError(
                f"no transfer vertex within {bound - 1} Q-steps at lift step {i}"
            )
        alpha, landing = found
        blocks.append(alpha)
        letters.append(s)
        u = landing
    return LiftResult(
        input_path=lpath,
        base=base,
        blocks=tuple(blocks),
        letters=tuple(letters),
        end=u,
    )
