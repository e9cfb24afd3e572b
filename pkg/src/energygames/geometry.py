"""Subspaces, open half-spaces and perfect half-spaces over the rationals.

A perfect half-space of Q^d is stored as the chain ``(H_d, H_{d-1}, ...)``
of open half-spaces, each one living in the boundary of the previous.
Shorter chains are partially-perfect half-spaces; the empty chain is the
empty set.

Levels ``k`` are 1-based as in the usual notation: ``H_k`` is the
``k``-dimensional member, stored at ``chain[d - k]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InputError
from .rational import nullspace, primitive, rref

DEFAULT_ENUM_BUDGET = 200_000


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^d in canonical form.

    ``rows`` is the reduced row echelon basis with every row scaled to
    coprime integers, so two subspaces are equal iff their rows are.
    """

    d: int
    rows: tuple[tuple[int, ...], ...]
    _perp: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        perp = tuple(primitive(v) for v in nullspace(self.rows, self.d)) if self.rows else ()
        object.__setattr__(self, "_perp", perp)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], d: int) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        if any(len(v) != d for v in vecs):
            raise InputError("vector length does not match dimension")
        red, _ = rref(vecs, d) if vecs else ([], [])
        return cls(d, tuple(primitive(r) for r in red))

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls.span([tuple(int(i == j) for j in range(d)) for i in range(d)], d)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Sequence[int]) -> bool:
        if not self.rows:
            return all(x == 0 for x in v)
        return all(sum(a * b for a, b in zip(c, v)) == 0 for c in self._perp)

    def encode(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.rows)


def span(vectors: Iterable[Sequence[int]], d: int) -> Subspace:
    return Subspace.span(vectors, d)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class OpenHalfSpace:
    """``{v in ambient : normal . v < 0}`` with ``normal`` a primitive vector of ``ambient``."""

    ambient: Subspace
    normal: tuple[int, ...]
    boundary: Subspace

    @property
    def dim(self) -> int:
        return self.ambient.dim

    @property
    def key(self) -> tuple:
        # fixed total order: dimension, boundary basis, normal
        return (self.dim, self.boundary.rows, self.normal)

    def __lt__(self, other: "OpenHalfSpace") -> bool:
        return self.key < other.key

    def contains(self, v: Sequence[int]) -> bool:
        return self.ambient.contains(v) and _dot(self.normal, v) < 0

    def closure_contains(self, v: Sequence[int]) -> bool:
        return self.ambient.contains(v) and _dot(self.normal, v) <= 0

    def strict_part_contains(self, v: Sequence[int]) -> bool:
        """Membership in the opposite open half-space of the same ambient."""
        return self.ambient.contains(v) and _dot(self.normal, v) > 0

    def encode(self) -> str:
        return f"{self.dim}/{self.boundary.encode()}/{','.join(str(x) for x in self.normal)}"


def hs_lt(a: OpenHalfSpace, b: OpenHalfSpace) -> bool:
    return a.key < b.key


def strict_part(h: OpenHalfSpace):
    """Predicate for ``<h> minus closure(h)``."""
    return h.strict_part_contains


@dataclass(frozen=True)
class PerfectHalfSpace:
    """Chain ``H_d, H_{d-1}, ..., H_k``; ``k = 1`` for a perfect half-space."""

    d: int
    chain: tuple[OpenHalfSpace, ...]

    @property
    def k(self) -> int:
        return self.d + 1 - len(self.chain)

    @property
    def is_perfect(self) -> bool:
        return len(self.chain) == self.d

    @property
    def key(self) -> tuple:
        return tuple(h.key for h in self.chain)

    def level(self, k: int) -> OpenHalfSpace:
        return self.chain[self.d - k]

    def contains(self, v: Sequence[int]) -> bool:
        # v lies in the ambient of H_j iff it is orthogonal to all normals above
        for h in self.chain:
            s = _dot(h.normal, v)
            if s < 0:
                return True
            if s > 0:
                return False
        return False

    def encode(self) -> str:
        return " | ".join(h.encode() for h in self.chain) if self.chain else "empty"

    def __lt__(self, other: "PerfectHalfSpace") -> bool:
        return self.key < other.key


def contains(p: PerfectHalfSpace, v: Sequence[int]) -> bool:
    return p.contains(v)


def pphs_prec(a: PerfectHalfSpace, b: PerfectHalfSpace) -> bool:
    """Lexicographic order induced by :func:`hs_lt`, top level first."""
    return a.key < b.key


def lca(colours: Iterable[PerfectHalfSpace]) -> PerfectHalfSpace:
    """Longest common prefix of the chains: the largest partially-perfect
    half-space contained in every colour."""
    colours = list(colours)
    if not colours:
        raise InputError("lca of an empty set of colours")
    d = colours[0].d
    prefix = colours[0].chain
    for c in colours[1:]:
        n = 0
        for a, b in zip(prefix, c.chain):
            if a != b:
                break
            n += 1
        prefix = prefix[:n]
    return PerfectHalfSpace(d, prefix)


def bound_L(k: int, M: int, d: int) -> int:
    """Maximal number of M-generated open half-spaces of a k-dimensional space."""
    if k < 1 or M < 1 or d < 1:
        raise InputError("k, M and d must be positive")
    return 2 * (2 * M + 1) ** (d * (k - 1))


# -- enumeration ----------------------------------------------------------------


@lru_cache(maxsize=None)
def lattice_directions(ambient: Subspace, M: int) -> tuple[tuple[int, ...], ...]:
    """Primitive vectors of norm <= M inside ``ambient``, one per line."""
    out = []
    for v in itertools.product(range(-M, M + 1), repeat=ambient.d):
        if not any(v):
            continue
        if primitive(v) != v:
            continue
        if ambient.contains(v):
            out.append(v)
    return tuple(out)


def is_m_generated(s: Subspace, M: int) -> bool:
    """Whether ``s`` is spanned by its vectors of norm at most ``M``."""
    if s.dim == 0:
        return True
    return Subspace.span(lattice_directions(s, M), s.d) == s


@lru_cache(maxsize=None)
def m_generated_subspaces(ambient: Subspace, M: int, dim: int,
                          budget: int = DEFAULT_ENUM_BUDGET) -> tuple[Subspace, ...]:
    """All subspaces of ``ambient`` of dimension ``dim`` spanned by norm-<=M vectors."""
    d = ambient.d
    if dim == 0:
        return (Subspace(d, ()),)
    dirs = lattice_directions(ambient, M)
    level = {Subspace.span([v], d) for v in dirs}
    work = len(dirs)
    for _ in range(dim - 1):
        nxt = set()
        for u in level:
            for v in dirs:
                if u.contains(v):
                    continue
                nxt.add(Subspace.span(u.rows + (v,), d))
                work += 1
                if work > budget:
                    raise BudgetExceeded(
                        f"enumerating {M}-generated subspaces exceeds budget {budget}"
                    )
        level = nxt
    return tuple(sorted(level, key=lambda s: s.rows))


def _normal_within(ambient: Subspace, boundary: Subspace) -> tuple[int, ...]:
    # n = y A with B n = 0, i.e. (B A^T) y = 0, a one-dimensional solution set
    a = ambient.rows
    if not boundary.rows:
        return primitive(a[0])
    system = [[_dot(b, r) for r in a] for b in boundary.rows]
    (y,) = nullspace(system, len(a))
    n = [sum(yi * r[c] for yi, r in zip(y, a)) for c in range(ambient.d)]
    return primitive(n)


@lru_cache(maxsize=None)
def enumerate_m_open_halfspaces(M: int, ambient: Subspace,
                                budget: int = DEFAULT_ENUM_BUDGET) -> tuple[OpenHalfSpace, ...]:
    """Open half-spaces of ``ambient`` whose boundary is M-generated, sorted by ``<``."""
    if M < 1:
        raise InputError("M must be positive")
    if ambient.dim < 1:
        raise InputError("ambient space must have positive dimension")
    out = []
    for b in m_generated_subspaces(ambient, M, ambient.dim - 1, budget):
        n = _normal_within(ambient, b)
        out.append(OpenHalfSpace(ambient, n, b))
        out.append(OpenHalfSpace(ambient, tuple(-x for x in n), b))
        if len(out) > budget:
            raise BudgetExceeded(f"more than {budget} open half-spaces")
    out.sort(key=lambda h: h.key)
    return tuple(out)


def completions(prefix: Sequence[OpenHalfSpace], M: int, d: int,
                budget: int = DEFAULT_ENUM_BUDGET) -> list[tuple[OpenHalfSpace, ...]]:
    """All M-generated perfect chains extending ``prefix``, in ``≺`` order."""
    prefix = tuple(prefix)
    if len(prefix) == d:
        return [prefix]
    ambient = prefix[-1].boundary if prefix else Subspace.full(d)
    out: list[tuple[OpenHalfSpace, ...]] = []
    for h in enumerate_m_open_halfspaces(M, ambient, budget):
        out.extend(completions(prefix + (h,), M, d, budget))
        if len(out) > budget:
            raise BudgetExceeded(f"more than {budget} perfect half-spaces")
    return out


def minimal_completion(prefix: Sequence[OpenHalfSpace], M: int, d: int) -> PerfectHalfSpace:
    """The ``≺``-minimal perfect half-space starting with ``prefix``."""
    chain = tuple(prefix)
    while len(chain) < d:
        ambient = chain[-1].boundary if chain else Subspace.full(d)
        chain += (enumerate_m_open_halfspaces(M, ambient)[0],)
    return PerfectHalfSpace(d, chain)


@lru_cache(maxsize=None)
def enumerate_perfect_halfspaces(M: int, d: int,
                                 budget: int = DEFAULT_ENUM_BUDGET) -> tuple[PerfectHalfSpace, ...]:
    """All M-generated perfect half-spaces of Q^d sorted by ``≺``."""
    if d < 1:
        raise InputError("dimension must be positive")
    return tuple(PerfectHalfSpace(d, c) for c in completions((), M, d, budget))


def shift_target(current: PerfectHalfSpace, k: int, violating: Iterable[Sequence[int]],
                 M: int) -> PerfectHalfSpace | None:
    """Colour adopted by a k-shift, or ``None`` when a cancellation is needed.

    Picks the ``<``-minimal M-generated open half-space ``H`` of ``<H_k>``
    whose closure holds every violating weight (none of them in the
    strict part of ``H``), then completes it ``≺``-minimally.
    """
    d = current.d
    if not 1 <= k <= len(current.chain):
        raise InputError(f"level {k} not present in the colour")
    violating = [tuple(w) for w in violating]
    ambient = current.level(k).ambient
    for h in enumerate_m_open_halfspaces(M, ambient):
        if not any(h.strict_part_contains(w) for w in violating):
            return minimal_completion(current.chain[: d - k] + (h,), M, d)
    return None


def cancel_target(current: PerfectHalfSpace, k: int, M: int) -> PerfectHalfSpace:
    """``≺``-minimal perfect half-space agreeing with ``current`` above level k."""
    d = current.d
    if not 1 <= k <= d:
        raise InputError(f"level {k} out of range")
    return minimal_completion(current.chain[: d - k], M, d)
