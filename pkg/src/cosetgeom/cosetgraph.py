"""Visible patch of the coset graph induced by a ball.

The coset graph has one vertex per left coset g*Q and, for every edge
(g, g*s) of the group's Cayley graph, an edge between the cosets of g and
g*s.  Right multiplication does not act on left cosets, so a single letter
may connect a coset to several neighbors; the patch records every neighbor
witnessed by an edge of the ball.  Letters that stay inside a coset project
to points and are not stored as edges.

A patch is an under-approximation: edges missing from the ball are missing
here.  Each coset carries a trust flag saying its earliest witness sits at
least ``trust_margin`` below the ball radius; untrusted cosets sit so close
to the boundary that their recorded degree is likely clipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cayley import Ball, PathInBall, UNREACHED
from .errors import ConfigError, InsufficientRadiusError
from .groups import GroupSpec, group_for
from .subgroups import VERTEX, WORDS, SubgroupSpec, coset_key

DEFAULT_TRUST_MARGIN = 1


@dataclass(frozen=True)
class LambdaPath:
    """A walk in the coset graph: visited cosets plus the letter per step.

    Letters are the Cayley-graph letters whose projection produced each
    coset change; steps that stayed inside a coset are contracted away, so
    ``len(letters) == len(cosets) - 1`` and consecutive cosets differ.
    """

    cosets: Tuple[int, ...]
    letters: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.cosets) != len(self.letters) + 1:
            raise ValueError("coset/letter length mismatch")

    @property
    def start(self) -> int:
        return self.cosets[0]

    @property
    def end(self) -> int:
        return self.cosets[-1]

    def __len__(self) -> int:
        return len(self.letters)

    def concat(self, other: "LambdaPath") -> "LambdaPath":
        if other.start != self.end:
            raise ValueError("paths do not compose")
        return LambdaPath(self.cosets + other.cosets[1:], self.letters + other.letters)


@dataclass
class CosetPatch:
    """The part of the coset graph witnessed by one ball."""

    spec: GroupSpec
    subgroup: SubgroupSpec
    radius: int
    trust_margin: int
    ball: Ball
    keys: Tuple[bytes, ...]
    witness: Tuple[int, ...]
    coset_of: Tuple[int, ...]
    dist: Tuple[int, ...]
    trusted: Tuple[bool, ...]
    adj: Tuple[Dict[int, Tuple[int, ...]], ...]
    _id_of_key: Dict[bytes, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._id_of_key:
            self._id_of_key = {key: cid for cid, key in enumerate(self.keys)}

    @property
    def n_cosets(self) -> int:
        return len(self.keys)

    @property
    def base(self) -> int:
        return self.coset_of[0]

    def coset_id(self, key: bytes) -> Optional[int]:
        return self._id_of_key.get(key)

    def neighbors(self, cid: int) -> Tuple[int, ...]:
        seen = set()
        for targets in self.adj[cid].values():
            seen.update(targets)
        return tuple(sorted(seen))

    def degree(self, cid: int) -> int:
        return len(self.neighbors(cid))

    def vertices_in_coset(self, cid: int) -> Tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.coset_of) if c == cid)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _coset_labels_vertex(ball: Ball, subgroup: SubgroupSpec) -> List[bytes]:
    spec = ball.spec
    return [coset_key(spec, subgroup, a) for a in ball.elements]


def _coset_labels_words(ball: Ball, subgroup: SubgroupSpec) -> List[int]:
    """Merge ball vertices connected by generator words of the subgroup.

    Two vertices land in one class when some chain of generator-word
    translations joins them without leaving the ball.  This under-merges
    near the boundary, which is exactly what the trust flags account for.
    """
    from .groups import inverse_word

    uf = _UnionFind(ball.n_vertices)
    gen_words = []
    for w in subgroup.words:
        word = tuple(w)
        gen_words.append(word)
        gen_words.append(inverse_word(word))
    for start in range(ball.n_vertices):
        for word in gen_words:
            v: Optional[int] = start
            for letter in word:
                v = ball.neighbor(v, letter)
                if v is None:
                    break
            else:
                uf.union(start, v)
    return [uf.find(v) for v in range(ball.n_vertices)]


def build_coset_patch(
    spec: GroupSpec,
    q: SubgroupSpec,
    ball: Ball,
    trust_margin: int = DEFAULT_TRUST_MARGIN,
) -> CosetPatch:
    """Project the ball onto its coset graph patch.

    Cosets are numbered in order of their earliest ball vertex, so ids are
    stable for a fixed (group, subgroup, radius).  A coset is trusted when
    that earliest witness lies at distance <= radius - trust_margin.
    """
    if spec != ball.spec:
        raise ConfigError("ball was built for a different group")
    if trust_margin < 1:
        raise ConfigError("trust_margin must be >= 1")

    group = group_for(spec)
    n = ball.n_vertices
    if q.mode == VERTEX:
        labels: Sequence = _coset_labels_vertex(ball, q)
    elif q.mode == WORDS:
        labels = _coset_labels_words(ball, q)
    else:
        raise ConfigError(f"unknown subgroup mode {q.mode!r}")

    coset_of: List[int] = [0] * n
    witness: List[int] = []
    id_by_label: Dict = {}
    for v in range(n):
        label = labels[v]
        cid = id_by_label.get(label)
        if cid is None:
            cid = len(witness)
            id_by_label[label] = cid
            witness.append(v)
        coset_of[v] = cid
    n_cosets = len(witness)

    if q.mode == VERTEX:
        keys = tuple(labels[w] for w in witness)
    else:
        keys = tuple(group.canonical_key(ball.elements[w]) for w in witness)

    edge_sets: List[Dict[int, set]] = [dict() for _ in range(n_cosets)]
    for v in range(n):
        cv = coset_of[v]
        for letter, u in ball.adj[v]:
            cu = coset_of[u]
            if cu == cv:
                continue
            edge_sets[cv].setdefault(letter, set()).add(cu)
    adj = tuple(
        {letter: tuple(sorted(targets)) for letter, targets in sorted(bucket.items())}
        for bucket in edge_sets
    )

    dist = [UNREACHED] * n_cosets
    base = coset_of[0]
    dist[base] = 0
    frontier = [base]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for cid in frontier:
            for targets in adj[cid].values():
                for t in targets:
                    if dist[t] == UNREACHED:
                        dist[t] = d
                        nxt.append(t)
        frontier = nxt

    trusted = tuple(
        ball.dist[w] + trust_margin <= ball.radius for w in witness
    )

    return CosetPatch(
        spec=spec,
        subgroup=q,
        radius=ball.radius,
        trust_margin=trust_margin,
        ball=ball,
        keys=keys,
        witness=tuple(witness),
        coset_of=tuple(coset_of),
        dist=tuple(dist),
        trusted=trusted,
        adj=adj,
    )


def project_path(patch: CosetPatch, path: PathInBall) -> LambdaPath:
    """Project a ball path to the coset graph, contracting in-coset steps."""
    ball = patch.ball
    v = path.base
    if v < 0 or v >= ball.n_vertices:
        raise InsufficientRadiusError(f"base vertex {v} not in ball")
    cosets = [patch.coset_of[v]]
    letters: List[int] = []
    for step, letter in enumerate(path.word):
        nxt = ball.neighbor(v, letter)
        if nxt is None:
            raise InsufficientRadiusError(
                f"path leaves the ball at step {step} (letter {letter})"
            )
        v = nxt
        cid = patch.coset_of[v]
        if cid != cosets[-1]:
            cosets.append(cid)
            letters.append(letter)
    return LambdaPath(tuple(cosets), tuple(letters))


@dataclass(frozen=True)
class DegreeProfile:
    """Degree statistics over trusted cosets only."""

    max_degree: int
    histogram: Tuple[Tuple[int, int], ...]
    per_label: Tuple[Tuple[int, int], ...]
    n_trusted: int
    n_cosets: int

    def histogram_dict(self) -> Dict[int, int]:
        return dict(self.histogram)

    def per_label_dict(self) -> Dict[int, int]:
        return dict(self.per_label)


def degree_profile(patch: CosetPatch) -> DegreeProfile:
    hist: Dict[int, int] = {}
    per_label: Dict[int, int] = {}
    max_degree = 0
    n_trusted = 0
    for cid in range(patch.n_cosets):
        if not patch.trusted[cid]:
            continue
        n_trusted += 1
        deg = patch.degree(cid)
        hist[deg] = hist.get(deg, 0) + 1
        max_degree = max(max_degree, deg)
        for letter, targets in patch.adj[cid].items():
            per_label[letter] = max(per_label.get(letter, 0), len(targets))
    return DegreeProfile(
        max_degree=max_degree,
        histogram=tuple(sorted(hist.items())),
        per_label=tuple(sorted(per_label.items())),
        n_trusted=n_trusted,
        n_cosets=patch.n_cosets,
    )
