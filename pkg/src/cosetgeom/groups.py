"""Exact element arithmetic for the four supported group families.

Families
--------
free:k      free group on x1..xk; elements are reduced words
abelian:k   free abelian group on x1..xk; elements are integer vectors
bs:m,n      one-relator group <x, t | t^-1 x^m t = x^n>; elements are
            reduced syllable forms with a fixed coset transversal
hnn:k,M     ascending extension of Z^k by an injective integer matrix M,
            with relation t^-1 x^v t = x^(M v); elements are reduced
            triples (p, v, q) meaning t^p * x^v * t^-q

Elements are immutable nested tuples of arbitrary-precision ints, so byte
equality of canonical keys coincides with equality in the group.  Words are
tuples of signed 1-based generator indices (+i for the generator, -i for
its inverse).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import ConfigError
from .intmat import (
    IntMatrix,
    adjugate,
    column_hnf,
    determinant,
    mat_pow,
    mat_vec,
    reduce_mod_lattice,
    solve_exact,
)

Letter = int
Word = Tuple[int, ...]
Element = tuple

FAMILY_FREE = "free"
FAMILY_ABELIAN = "abelian"
FAMILY_BS = "bs"
FAMILY_HNN = "hnn"

#: Canonical key of the identity in every family.
IDENTITY_KEY = b""


@dataclass(frozen=True)
class GroupSpec:
    """Immutable description of one group instance."""

    family: str
    rank: int = 1
    m: int = 0
    n: int = 0
    matrix: IntMatrix = ()

    def __post_init__(self):
        if self.family in (FAMILY_FREE, FAMILY_ABELIAN):
            if self.rank < 1:
                raise ConfigError("rank must be >= 1")
        elif self.family == FAMILY_BS:
            if self.m == 0 or self.n == 0:
                raise ConfigError("bs requires nonzero m and n")
        elif self.family == FAMILY_HNN:
            if self.rank < 1 or len(self.matrix) != self.rank:
                raise ConfigError("hnn requires a rank x rank matrix")
            if any(len(row) != self.rank for row in self.matrix):
                raise ConfigError("hnn matrix is not square")
            if determinant(self.matrix) == 0:
                raise ConfigError("hnn matrix must have nonzero determinant")
        else:
            raise ConfigError(f"unknown family {self.family!r}")

    @property
    def generators(self) -> Tuple[str, ...]:
        """Generator names in canonical order."""
        if self.family == FAMILY_BS:
            return ("x", "t")
        base = tuple(f"x{i + 1}" for i in range(self.rank))
        if self.family == FAMILY_HNN:
            return base + ("t",)
        return base

    @property
    def stable_letter(self) -> Optional[int]:
        """1-based index of the stable letter t, if the family has one."""
        if self.family == FAMILY_BS:
            return 2
        if self.family == FAMILY_HNN:
            return self.rank + 1
        return None

    @property
    def letters(self) -> Tuple[int, ...]:
        """All signed letters in canonical order: +1, -1, +2, -2, ..."""
        out: List[int] = []
        for i in range(1, len(self.generators) + 1):
            out.extend((i, -i))
        return tuple(out)

    def describe(self) -> str:
        """Canonical text form, parseable by parse_group_spec."""
        if self.family == FAMILY_FREE:
            return f"free:{self.rank}"
        if self.family == FAMILY_ABELIAN:
            return f"abelian:{self.rank}"
        if self.family == FAMILY_BS:
            return f"bs:{self.m},{self.n}"
        rows = ";".join(" ".join(str(x) for x in row) for row in self.matrix)
        return f"hnn:{self.rank},{rows}"


def free_group(rank: int) -> GroupSpec:
    return GroupSpec(family=FAMILY_FREE, rank=rank)


def free_abelian_group(rank: int) -> GroupSpec:
    return GroupSpec(family=FAMILY_ABELIAN, rank=rank)


def baumslag_solitar(m: int, n: int) -> GroupSpec:
    return GroupSpec(family=FAMILY_BS, rank=1, m=m, n=n)


def ascending_hnn(matrix: Iterable[Iterable[int]]) -> GroupSpec:
    rows = tuple(tuple(int(x) for x in row) for row in matrix)
    return GroupSpec(family=FAMILY_HNN, rank=len(rows), matrix=rows)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse group strings like free:2, abelian:3, bs:2,3, hnn:2,2 0;0 2."""
    try:
        family, _, rest = text.strip().partition(":")
        family = family.strip().lower()
        if family == "free":
            return free_group(int(rest))
        if family == "abelian":
            return free_abelian_group(int(rest))
        if family == "bs":
            m_text, n_text = rest.split(",")
            return baumslag_solitar(int(m_text), int(n_text))
        if family == "hnn":
            rank_text, _, rows_text = rest.partition(",")
            rows = [
                [int(x) for x in row.split()] for row in rows_text.split(";")
            ]
            spec = ascending_hnn(rows)
            if spec.rank != int(rank_text):
                raise ConfigError(
                    f"hnn rank {rank_text} does not match matrix size {spec.rank}"
                )
            return spec
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"bad group string {text!r}: {exc}") from None
    raise ConfigError(f"unknown group family in {text!r}")


class Group:
    """Family-specific exact arithmetic behind a shared interface."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def invert(self, a: Element) -> Element:
        raise NotImplementedError

    def apply_letter(self, a: Element, letter: Letter) -> Element:
        """Right-multiply a by one signed generator letter."""
        raise NotImplementedError

    def evaluate_word(self, word: Iterable[Letter], start: Element = None) -> Element:
        """Left-to-right product of letters with incremental renormalization."""
        a = self.identity() if start is None else start
        for letter in word:
            a = self.apply_letter(a, letter)
        return a

    def canonical_key(self, a: Element) -> bytes:
        raise NotImplementedError

    def decode_key(self, key: bytes) -> Element:
        raise NotImplementedError

    def render(self, a: Element) -> str:
        raise NotImplementedError

    def is_canonical(self, a: Element) -> bool:
        raise NotImplementedError


class FreeGroup(Group):
    """Reduced words over x1..xk."""

    def identity(self) -> Element:
        return ()

    def multiply(self, a: Element, b: Element) -> Element:
        out = list(a)
        for letter in b:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def invert(self, a: Element) -> Element:
        return tuple(-letter for letter in reversed(a))

    def apply_letter(self, a: Element, letter: Letter) -> Element:
        if a and a[-1] == -letter:
            return a[:-1]
        return a + (letter,)

    def canonical_key(self, a: Element) -> bytes:
        return ",".join(str(x) for x in a).encode()

    def decode_key(self, key: bytes) -> Element:
        if not key:
            return ()
        return tuple(int(x) for x in key.decode().split(","))

    def render(self, a: Element) -> str:
        return render_word(self.spec, a)

    def is_canonical(self, a: Element) -> bool:
        if any(x == 0 or abs(x) > self.spec.rank for x in a):
            return False
        return all(a[i] != -a[i + 1] for i in range(len(a) - 1))


class FreeAbelianGroup(Group):
    """Integer vectors of length k."""

    def identity(self) -> Element:
        return (0,) * self.spec.rank

    def multiply(self, a: Element, b: Element) -> Element:
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a: Element) -> Element:
        return tuple(-x for x in a)

    def apply_letter(self, a: Element, letter: Letter) -> Element:
        i = abs(letter) - 1
        return a[:i] + (a[i] + (1 if letter > 0 else -1),) + a[i + 1 :]

    def canonical_key(self, a: Element) -> bytes:
        if not any(a):
            return IDENTITY_KEY
        return ",".join(str(x) for x in a).encode()

    def decode_key(self, key: bytes) -> Element:
        if not key:
            return self.identity()
        return tuple(int(x) for x in key.decode().split(","))

    def render(self, a: Element) -> str:
        parts = [
            f"x{i + 1}" + (f"^{v}" if v != 1 else "")
            for i, v in enumerate(a)
            if v != 0
        ]
        return ".".join(parts) if parts else "1"

    def is_canonical(self, a: Element) -> bool:
        return len(a) == self.spec.rank


class BaumslagSolitarGroup(Group):
    """Reduced syllable forms for <x, t | t^-1 x^m t = x^n>.

    An element is a pair (head, syllables) encoding

        x^head * t^s1 x^e1 * t^s2 x^e2 * ... * t^sj x^ej.

    Every exponent that precedes a stable letter is reduced into the coset
    transversal {0..|m|-1} (before t) or {0..|n|-1} (before t^-1), carrying
    the quotient across the stable letter via x^(m c) t = t x^(n c) and
    x^(n c) t^-1 = t^-1 x^(m c).  No pinch t^-1 x^(m c) t or t x^(n c) t^-1
    survives, so two elements are equal in the group iff their forms are
    byte-identical.  The trailing exponent is unconstrained, which is what
    makes right cosets of <x> legible directly from the form.
    """

    def identity(self) -> Element:
        return (0, ())

    def _mul_x(self, head: int, sylls: List[List[int]], c: int) -> int:
        if c == 0:
            return head
        if sylls:
            sylls[-1][1] += c
            return head
        return head + c

    def _mul_t(self, head: int, sylls: List[List[int]], sign: int) -> int:
        m, n = self.spec.m, self.spec.n
        if sylls and sylls[-1][0] == -sign:
            # possible pinch: t^-1 x^e t with m | e, or t x^e t^-1 with n | e
            e = sylls[-1][1]
            div = m if sign > 0 else n
            mul = n if sign > 0 else m
            if e % abs(div) == 0:
                sylls.pop()
                return self._mul_x(head, sylls, mul * (e // div))
        if sign > 0:
            div, mul = m, n
        else:
            div, mul = n, m
        e = sylls[-1][1] if sylls else head
        r = e % abs(div)
        q = (e - r) // div
        if sylls:
            sylls[-1][1] = r
        else:
            head = r
        sylls.append([sign, mul * q])
        return head

    def _fold(self, head: int, raw: Iterable[Tuple[int, int]]) -> Element:
        sylls: List[List[int]] = []
        for sign, exp in raw:
            head = self._mul_t(head, sylls, sign)
            head = self._mul_x(head, sylls, exp)
        return (head, tuple((s, e) for s, e in sylls))

    def multiply(self, a: Element, b: Element) -> Element:
        head_a, sylls_a = a
        head_b, sylls_b = b
        sylls: List[List[int]] = [list(p) for p in sylls_a]
        head = self._mul_x(head_a, sylls, head_b)
        for sign, exp in sylls_b:
            head = self._mul_t(head, sylls, sign)
            head = self._mul_x(head, sylls, exp)
        return (head, tuple((s, e) for s, e in sylls))

    def invert(self, a: Element) -> Element:
        head, sylls = a
        if not sylls:
            return (-head, ())
        exps = [head] + [e for _, e in sylls]
        raw = [
            (-sylls[i][0], -exps[i]) for i in range(len(sylls) - 1, -1, -1)
        ]
        return self._fold(-exps[-1], raw)

    def apply_letter(self, a: Element, letter: Letter) -> Element:
        head, sylls_t = a
        sylls = [list(p) for p in sylls_t]
        if abs(letter) == 1:
            head = self._mul_x(head, sylls, 1 if letter > 0 else -1)
        else:
            head = self._mul_t(head, sylls, 1 if letter > 0 else -1)
        return (head, tuple((s, e) for s, e in sylls))

    def canonical_key(self, a: Element) -> bytes:
        head, sylls = a
        if not sylls and head == 0:
            return IDENTITY_KEY
        parts = [str(head)]
        for sign, exp in sylls:
            parts.append(f"{'+' if sign > 0 else '-'}{exp}")
        return "|".join(parts).encode()

    def decode_key(self, key: bytes) -> Element:
        if not key:
            return (0, ())
        parts = key.decode().split("|")
        head = int(parts[0])
        sylls = tuple(
            (1 if p[0] == "+" else -1, int(p[1:])) for p in parts[1:]
        )
        return (head, sylls)

    def render(self, a: Element) -> str:
        head, sylls = a
        parts: List[str] = []
        if head:
            parts.append(f"x^{head}" if head != 1 else "x")
        for sign, exp in sylls:
            parts.append("t" if sign > 0 else "t^-1")
            if exp:
                parts.append(f"x^{exp}" if exp != 1 else "x")
        return ".".join(parts) if parts else "1"

    def is_canonical(self, a: Element) -> bool:
        head, sylls = a
        m, n = self.spec.m, self.spec.n
        exps = [head] + [e for _, e in sylls]
        for i, (sign, _) in enumerate(sylls):
            bound = abs(m) if sign > 0 else abs(n)
            if not 0 <= exps[i] < bound:
                return False
        for i in range(len(sylls) - 1):
            if sylls[i][0] == -sylls[i + 1][0] and sylls[i][1] == 0:
                return False
        return True


class AscendingHNNGroup(Group):
    """Reduced triples (p, v, q) = t^p x^v t^-q for Z^k *_M.

    The defining relation is t^-1 x^v t = x^(M v).  A triple with p > 0 and
    q > 0 reduces while v lies in the lattice M Z^k, via
    t x^(M w) t^-1 = x^w; reduced triples are unique.
    """

    def __init__(self, spec: GroupSpec):
        super().__init__(spec)
        self.k = spec.rank
        self.M = spec.matrix
        self.det = determinant(self.M)
        self.adj = adjugate(self.M)
        self._hnf_cache: Dict[int, IntMatrix] = {}

    def identity(self) -> Element:
        return (0, (0,) * self.k, 0)

    def _reduce(self, p: int, v: Tuple[int, ...], q: int) -> Element:
        while p > 0 and q > 0:
            w = solve_exact(self.M, v, self.det, self.adj)
            if w is None:
                break
            p -= 1
            q -= 1
            v = w
        return (p, v, q)

    def _mat_pow_vec(self, e: int, v: Tuple[int, ...]) -> Tuple[int, ...]:
        for _ in range(e):
            v = mat_vec(self.M, v)
        return v

    def multiply(self, a: Element, b: Element) -> Element:
        p1, v1, q1 = a
        p2, v2, q2 = b
        if p2 <= q1:
            j = q1 - p2
            v = tuple(x + y for x, y in zip(v1, self._mat_pow_vec(j, v2)))
            return self._reduce(p1, v, j + q2)
        j = p2 - q1
        v = tuple(x + y for x, y in zip(self._mat_pow_vec(j, v1), v2))
        return self._reduce(p1 + j, v, q2)

    def invert(self, a: Element) -> Element:
        p, v, q = a
        return (q, tuple(-x for x in v), p)

    def apply_letter(self, a: Element, letter: Letter) -> Element:
        p, v, q = a
        i = abs(letter) - 1
        if i < self.k:
            step = [0] * self.k
            step[i] = 1 if letter > 0 else -1
            moved = self._mat_pow_vec(q, tuple(step))
            return (p, tuple(x + y for x, y in zip(v, moved)), q)
        if letter > 0:
            if q > 0:
                return self._reduce(p, v, q - 1)
            return (p + 1, mat_vec(self.M, v), 0)
        return self._reduce(p, v, q + 1)

    def lattice_hnf(self, power: int) -> IntMatrix:
        """Column Hermite form of M^power, cached per power."""
        if power not in self._hnf_cache:
            self._hnf_cache[power] = column_hnf(mat_pow(self.M, power))
        return self._hnf_cache[power]

    def reduce_mod_image(self, v: Tuple[int, ...], power: int) -> Tuple[int, ...]:
        """Canonical representative of v modulo M^power Z^k."""
        if power == 0:
            return (0,) * self.k
        return reduce_mod_lattice(self.lattice_hnf(power), v)

    def canonical_key(self, a: Element) -> bytes:
        p, v, q = a
        if p == 0 and q == 0 and not any(v):
            return IDENTITY_KEY
        vec = ",".join(str(x) for x in v)
        return f"{p}|{vec}|{q}".encode()

    def decode_key(self, key: bytes) -> Element:
        if not key:
            return self.identity()
        p_text, vec, q_text = key.decode().split("|")
        return (int(p_text), tuple(int(x) for x in vec.split(",")), int(q_text))

    def render(self, a: Element) -> str:
        p, v, q = a
        parts: List[str] = []
        if p:
            parts.append("t" if p == 1 else f"t^{p}")
        parts.extend(
            f"x{i + 1}" + (f"^{x}" if x != 1 else "")
            for i, x in enumerate(v)
            if x != 0
        )
        if q:
            parts.append(f"t^{-q}")
        return ".".join(parts) if parts else "1"

    def is_canonical(self, a: Element) -> bool:
        p, v, q = a
        if p < 0 or q < 0 or len(v) != self.k:
            return False
        if p > 0 and q > 0:
            return solve_exact(self.M, v, self.det, self.adj) is None
        return True


@lru_cache(maxsize=None)
def group_for(spec: GroupSpec) -> Group:
    """Arithmetic object for a spec (cached; Group instances are stateless)."""
    if spec.family == FAMILY_FREE:
        return FreeGroup(spec)
    if spec.family == FAMILY_ABELIAN:
        return FreeAbelianGroup(spec)
    if spec.family == FAMILY_BS:
        return BaumslagSolitarGroup(spec)
    return AscendingHNNGroup(spec)


def identity(spec: GroupSpec) -> Element:
    return group_for(spec).identity()


def multiply(spec: GroupSpec, a: Element, b: Element) -> Element:
    return group_for(spec).multiply(a, b)


def invert(spec: GroupSpec, a: Element) -> Element:
    return group_for(spec).invert(a)


def evaluate_word(spec: GroupSpec, word: Iterable[Letter], start: Element = None) -> Element:
    return group_for(spec).evaluate_word(word, start)


def canonical_key(spec: GroupSpec, a: Element) -> bytes:
    return group_for(spec).canonical_key(a)


def inverse_word(word: Iterable[Letter]) -> Word:
    return tuple(-letter for letter in reversed(tuple(word)))


def parse_word(spec: GroupSpec, text: str) -> Word:
    """Parse dot-joined power tokens such as x^3.t^-1.x into a letter word."""
    text = text.strip()
    if not text or text == "1":
        return ()
    names = {name: i + 1 for i, name in enumerate(spec.generators)}
    out: List[int] = []
    for token in text.split("."):
        name, _, exp_text = token.partition("^")
        name = name.strip()
        if name not in names:
            raise ConfigError(f"unknown generator {name!r} in {text!r}")
        try:
            exp = int(exp_text) if exp_text else 1
        except ValueError:
            raise ConfigError(f"bad exponent in token {token!r}") from None
        letter = names[name] if exp > 0 else -names[name]
        out.extend([letter] * abs(exp))
    return tuple(out)


def render_word(spec: GroupSpec, word: Word) -> str:
    """Inverse of parse_word, grouping runs of equal letters into powers."""
    if not word:
        return "1"
    names = spec.generators
    parts: List[str] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        exp = run if word[i] > 0 else -run
        name = names[abs(word[i]) - 1]
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return ".".join(parts)
