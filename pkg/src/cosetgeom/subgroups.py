"""Subgroup descriptions, membership tests, and left-coset keys.

Two modes are supported.  A vertex subgroup is the distinguished base
subgroup of the family (the x-generators; for free and free abelian
groups, <x1>), where membership and coset identity are exact and read
directly off canonical forms.  A word-generated subgroup is given by
arbitrary generator words; membership there is a bounded search that
answers yes or unknown, never no, and anything derived from it is
flagged approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import SubgroupModeError
from .groups import (
    FAMILY_ABELIAN,
    FAMILY_BS,
    FAMILY_FREE,
    FAMILY_HNN,
    IDENTITY_KEY,
    Element,
    GroupSpec,
    Word,
    group_for,
    inverse_word,
)

VERTEX = "vertex"
WORDS = "words"

DEFAULT_MEMBERSHIP_RADIUS = 8

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SubgroupSpec:
    mode: str
    words: Tuple[Word, ...] = ()
    membership_radius: int = DEFAULT_MEMBERSHIP_RADIUS

    def __post_init__(self):
        if self.mode not in (VERTEX, WORDS):
            raise SubgroupModeError(f"unknown subgroup mode {self.mode!r}")
        if self.mode == WORDS and not self.words:
            raise SubgroupModeError("word-generated subgroup needs generator words")

    @property
    def approximate(self) -> bool:
        return self.mode == WORDS

    def describe(self) -> str:
        if self.mode == VERTEX:
            return "vertex"
        body = ",".join("".join(str(l) + ";" for l in w) for w in self.words)
        return f"words[{body}]@{self.membership_radius}"


def vertex_subgroup() -> SubgroupSpec:
    return SubgroupSpec(mode=VERTEX)


def word_subgroup(words, membership_radius: int = DEFAULT_MEMBERSHIP_RADIUS) -> SubgroupSpec:
    return SubgroupSpec(
        mode=WORDS,
        words=tuple(tuple(w) for w in words),
        membership_radius=membership_radius,
    )


@dataclass(frozen=True)
class Membership:
    verdict: str
    radius_used: int

    def __bool__(self) -> bool:
        return self.verdict == YES


def q_letters(spec: GroupSpec, q: SubgroupSpec) -> Tuple[int, ...]:
    """Signed generator letters of the ambient group that lie in Q.

    Empty for word-generated subgroups whose generators are not single
    letters; the sub-generating set there is the given words themselves.
    """
    if q.mode == VERTEX:
        if spec.family in (FAMILY_FREE, FAMILY_ABELIAN, FAMILY_BS):
            return (1, -1)
        return tuple(l for i in range(1, spec.rank + 1) for l in (i, -i))
    letters = []
    for w in q.words:
        if len(w) == 1:
            letters.extend((w[0], -w[0]))
    return tuple(sorted(set(letters), key=lambda l: (abs(l), -l)))


def k_letters(spec: GroupSpec, q: SubgroupSpec) -> Tuple[int, ...]:
    """Signed letters of the ambient generating set outside Q."""
    inside = set(q_letters(spec, q))
    return tuple(l for l in spec.letters if l not in inside)


def generator_elements(spec: GroupSpec, q: SubgroupSpec) -> List[Element]:
    """Subgroup generators and inverses, as group elements."""
    g = group_for(spec)
    if q.mode == VERTEX:
        return [g.evaluate_word((l,)) for l in q_letters(spec, q)]
    out = []
    for w in q.words:
        out.append(g.evaluate_word(w))
        out.append(g.evaluate_word(inverse_word(w)))
    return out


def is_member(spec: GroupSpec, q: SubgroupSpec, a: Element) -> Membership:
    g = group_for(spec)
    if q.mode == VERTEX:
        if spec.family == FAMILY_FREE:
            inside = all(abs(l) == 1 for l in a)
        elif spec.family == FAMILY_ABELIAN:
            inside = not any(a[1:])
        elif spec.family == FAMILY_BS:
            inside = not a[1]
        else:
            inside = a[0] == 0 and a[2] == 0
        return Membership(YES if inside else NO, 0)
    # breadth-first search over products of the generating words
    if a == g.identity():
        return Membership(YES, 0)
    gens = generator_elements(spec, q)
    seen = {g.identity()}
    frontier = [g.identity()]
    for depth in range(1, q.membership_radius + 1):
        next_frontier = []
        for b in frontier:
            for step in gens:
                c = g.multiply(b, step)
                if c in seen:
                    continue
                if c == a:
                    return Membership(YES, depth)
                seen.add(c)
                next_frontier.append(c)
        frontier = next_frontier
    return Membership(UNKNOWN, q.membership_radius)


def coset_key(spec: GroupSpec, q: SubgroupSpec, a: Element) -> bytes:
    """Canonical byte key of the left coset a*Q (vertex mode only).

    Keys agree exactly when the cosets agree; the base coset Q maps to the
    identity key.
    """
    if q.mode != VERTEX:
        raise SubgroupModeError("coset_key requires a vertex subgroup")
    if spec.family == FAMILY_FREE:
        end = len(a)
        while end and abs(a[end - 1]) == 1:
            end -= 1
        stripped = a[:end]
        if not stripped:
            return IDENTITY_KEY
        return ",".join(str(l) for l in stripped).encode()
    if spec.family == FAMILY_ABELIAN:
        rest = a[1:]
        if not any(rest):
            return IDENTITY_KEY
        return ",".join(str(x) for x in rest).encode()
    if spec.family == FAMILY_BS:
        head, sylls = a
        if not sylls:
            return IDENTITY_KEY
        parts = [str(head)]
        for i, (sign, exp) in enumerate(sylls):
            mark = "+" if sign > 0 else "-"
            if i < len(sylls) - 1:
                parts.append(f"{mark}{exp}")
            else:
                parts.append(mark)
        return "|".join(parts).encode()
    # ascending HNN: cancel the q-side base coordinates modulo M^q Z^k
    g = group_for(spec)
    p, v, qq = a
    residue = g.reduce_mod_image(v, qq)
    if p == 0 and qq == 0:
        return IDENTITY_KEY
    vec = ",".join(str(x) for x in residue)
    return f"{p}|{vec}|{qq}".encode()


def base_coset_key(spec: GroupSpec, q: SubgroupSpec) -> bytes:
    return coset_key(spec, q, group_for(spec).identity())
