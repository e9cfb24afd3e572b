"""Positive kernel solutions and the closed half-space / zero-combination alternative.

Both LP routes (Fourier-Motzkin elimination and a dense simplex) work on
:class:`fractions.Fraction` so every answer is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import FalsificationError, InputError
from .geometry import OpenHalfSpace, Subspace, enumerate_m_open_halfspaces
from .rational import rank, rref

FM_MAX_VARS = 8


# -- exact LP -------------------------------------------------------------------


def simplex_min(A: Sequence[Sequence], b: Sequence, c: Sequence):
    """Minimise ``c.y`` subject to ``A y = b, y >= 0``.

    Returns ``("optimal", y)``, ``("infeasible", None)`` or
    ``("unbounded", None)``. Bland's rule guarantees termination.
    """
    n = len(c)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red, pivots = rref(aug, n + 1) if aug else ([], [])
    if n in pivots:
        return "infeasible", None
    rows = [r[:n] for r in red]
    rhs = [r[n] for r in red]
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    m = len(rows)
    # tableau columns: n originals, m artificials
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def run(cost: list[Fraction], allowed: int) -> bool:
        while True:
            duals = [cost[basis[i]] for i in range(m)]
            enter = None
            for j in range(allowed):
                if j in basis:
                    continue
                red_cost = cost[j] - sum(duals[i] * tab[i][j] for i in range(m))
                if red_cost < 0:
                    enter = j
                    break
            if enter is None:
                return True
            best = None
            for i in range(m):
                if tab[i][enter] > 0:
                    ratio = tab[i][-1] / tab[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return False
            pivot(best[1], enter)

    def pivot(r: int, col: int):
        pv = tab[r][col]
        tab[r] = [x / pv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [a - f * bb for a, bb in zip(tab[i], tab[r])]
        basis[r] = col

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(phase1, n + m)
    if sum(tab[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return "infeasible", None
    for i in range(m):
        if basis[i] >= n:
            col = next(j for j in range(n) if tab[i][j] != 0)
            pivot(i, col)
    cost = [Fraction(x) for x in c] + [Fraction(0)] * m
    if not run(cost, n):
        return "unbounded", None
    y = [Fraction(0)] * n
    for i in range(m):
        y[basis[i]] = tab[i][-1]
    return "optimal", y


def fourier_motzkin_point(G: Sequence[Sequence], h: Sequence) -> list[Fraction] | None:
    """A rational point of ``{z : G z <= h}`` or ``None`` when empty."""
    n = len(G[0]) if G else 0
    cons = [([Fraction(x) for x in row], Fraction(hi)) for row, hi in zip(G, h)]
    stages = []
    for var in range(n - 1, -1, -1):
        stages.append(cons)
        pos = [c for c in cons if c[0][var] > 0]
        neg = [c for c in cons if c[0][var] < 0]
        nxt = [c for c in cons if c[0][var] == 0]
        seen = set()
        for (pa, ph), (na, nh) in itertools.product(pos, neg):
            fp, fn = pa[var], -na[var]
            row = [fn * x + fp * y for x, y in zip(pa, na)]
            rhs = fn * ph + fp * nh
            if all(x == 0 for x in row):
                if rhs < 0:
                    return None
                continue
            # normalise to drop duplicates
            scale = max(abs(x) for x in row)
            key = (tuple(x / scale for x in row), rhs / scale)
            if key not in seen:
                seen.add(key)
                nxt.append(([x / scale for x in row], rhs / scale))
        cons = nxt
    if any(hi < 0 for _, hi in cons):
        return None
    z = [Fraction(0)] * n
    for var, stage in zip(range(n), reversed(stages)):
        lo, hi = None, None
        for row, rhs in stage:
            a = row[var]
            if a == 0:
                continue
            rest = rhs - sum(row[j] * z[j] for j in range(var))
            bound = rest / a
            if a > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is not None:
            z[var] = lo
        elif hi is not None:
            z[var] = min(hi, Fraction(0))
        if lo is not None and hi is not None and lo > hi:
            return None
    return z


def _kernel_point_fm(cols: Sequence[Sequence[int]]) -> list[Fraction] | None:
    n = len(cols)
    d = len(cols[0])
    A = [[cols[j][i] for j in range(n)] for i in range(d)]
    red, pivots = rref(A, n)
    free = [j for j in range(n) if j not in pivots]
    # pivot variable p equals -sum_f red[p][f] x_f; require every x >= 1
    G, h = [], []
    for f in free:
        G.append([Fraction(-int(g == f)) for g in free])
        h.append(Fraction(-1))
    for row in red:
        G.append([row[f] for f in free])
        h.append(Fraction(-1))
    if not free:
        return None
    z = fourier_motzkin_point(G, h)
    if z is None:
        return None
    x = [Fraction(0)] * n
    for f, val in zip(free, z):
        x[f] = val
    for row, p in zip(red, pivots):
        x[p] = -sum(row[f] * x[f] for f in free)
    return x


def _kernel_point_simplex(cols: Sequence[Sequence[int]]) -> list[Fraction] | None:
    n = len(cols)
    d = len(cols[0])
    A = [[Fraction(cols[j][i]) for j in range(n)] for i in range(d)]
    # x = 1 + y with y >= 0
    b = [-sum(row) for row in A]
    status, y = simplex_min(A, b, [1] * n)
    if status != "optimal":
        return None
    return [1 + v for v in y]


def kernel_point(cols: Sequence[Sequence[int]], method: str = "auto") -> list[Fraction] | None:
    """Rational ``x >= 1`` with ``sum_i x_i cols[i] = 0``, or ``None``."""
    if not cols:
        return None
    if method == "auto":
        method = "fm" if len(cols) <= FM_MAX_VARS else "simplex"
    if method == "fm":
        return _kernel_point_fm(cols)
    if method == "simplex":
        return _kernel_point_simplex(cols)
    raise InputError(f"unknown LP method {method!r}")


def integral(x: Sequence[Fraction]) -> tuple[int, ...]:
    den = lcm(*(v.denominator for v in x))
    ints = [int(v * den) for v in x]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


# -- column systems ----------------------------------------------------------------


def bound_S(M: int, r: int) -> int:
    """Size bound ``(2(M+1))^((r+2)^2)`` on small positive kernel solutions."""
    if M < 1 or r < 0:
        raise InputError("bound_S needs M >= 1 and r >= 0")
    return (2 * (M + 1)) ** ((r + 2) ** 2)


@dataclass(frozen=True)
class ColumnSystem:
    """Distinct integer columns of norm <= M inside an M-generated ``ambient``."""

    columns: tuple[tuple[int, ...], ...]
    M: int
    ambient: Subspace

    @classmethod
    def of(cls, columns: Sequence[Sequence[int]], M: int, ambient: Subspace | None = None,
           d: int | None = None) -> "ColumnSystem":
        cols = tuple(tuple(c) for c in columns)
        if d is None:
            if not cols:
                raise InputError("dimension needed for an empty column system")
            d = len(cols[0])
        if len(set(cols)) != len(cols):
            raise InputError("columns must be mutually distinct")
        if any(abs(x) > M for c in cols for x in c):
            raise InputError(f"column entries exceed M={M}")
        if ambient is None:
            ambient = Subspace.span(cols, d)
        if not all(ambient.contains(c) for c in cols):
            raise InputError("columns must lie in the ambient subspace")
        return cls(cols, M, ambient)

    @property
    def rank(self) -> int:
        return rank(self.columns) if self.columns else 0


def positive_kernel_solution(s: ColumnSystem, method: str = "auto") -> tuple[int, ...] | None:
    """Small positive integer ``x`` with ``A x = 0`` (columns of ``A`` from ``s``).

    Raises :class:`FalsificationError` when a solution exists but none
    within the ``bound_S`` box could be produced.
    """
    x = kernel_point(s.columns, method)
    if x is None:
        return None
    sol = integral(x)
    limit = bound_S(s.M, s.rank)
    if max(sol) <= limit:
        return sol
    for other in ("simplex", "fm"):
        y = kernel_point(s.columns, other)
        if y is not None and max(integral(y)) <= limit:
            return integral(y)
    small = _bounded_search(s.columns, min(limit, 16))
    if small is not None:
        return small
    raise FalsificationError(
        f"positive kernel solution {sol} exceeds the bound {limit} and no smaller one was found"
    )


def _bounded_search(cols, top: int, max_points: int = 10**6):
    n = len(cols)
    if top ** n > max_points:
        return None
    d = len(cols[0])
    for x in itertools.product(range(1, top + 1), repeat=n):
        if all(sum(x[j] * cols[j][i] for j in range(n)) == 0 for i in range(d)):
            return x
    return None


@dataclass(frozen=True)
class PositiveCombination:
    coefficients: tuple[int, ...]


@dataclass(frozen=True)
class ClosedHalfSpace:
    """Closure of an M-generated open half-space."""

    halfspace: OpenHalfSpace

    def contains(self, v: Sequence[int]) -> bool:
        return self.halfspace.closure_contains(v)


def alternatives(s: ColumnSystem) -> PositiveCombination | ClosedHalfSpace:
    """Either a positive combination of the columns equal to zero, or an
    M-generated closed half-space of the ambient holding every column.

    When both hold the combination is returned. The answer is rechecked
    and the two branches are tested for consistency before returning.
    """
    x = positive_kernel_solution(s) if s.columns else None
    halfspaces = enumerate_m_open_halfspaces(s.M, s.ambient) if s.ambient.dim else ()
    if x is not None:
        d = s.ambient.d
        total = [sum(x[j] * s.columns[j][i] for j in range(len(x))) for i in range(d)]
        if any(total) or min(x) < 1:
            raise FalsificationError(f"kernel witness {x} does not recheck")
        for h in halfspaces:
            if all(h.closure_contains(c) for c in s.columns) and any(
                h.contains(c) for c in s.columns
            ):
                raise FalsificationError(
                    f"columns vanish positively yet {h.encode()} holds one strictly"
                )
        return PositiveCombination(x)
    for h in halfspaces:
        if all(h.closure_contains(c) for c in s.columns):
            return ClosedHalfSpace(h)
    raise FalsificationError("neither alternative holds for the column system")
