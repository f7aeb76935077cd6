"""Finite truth chains and their operator algebra.

Degrees are integer indices ``0 .. n-1`` into the canonical chain
``{0, 1/(n-1), ..., 1}``; :meth:`Chain.value` converts an index to its exact
rational value. Nothing in here touches floating point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import ChainError, DomainError

FAMILIES = ("goedel", "lukasiewicz", "zadeh", "custom")

Pair = tuple[int, int]


class Chain:
    """The canonical ``n``-element chain with one operator family.

    ``table`` is only used for the ``custom`` family and gives the t-norm as an
    ``n x n`` matrix of degree indices.
    """

    __slots__ = ("n", "family", "table", "_tnorm", "_tconorm", "_residuum", "_neg", "__dict__")

    def __init__(self, n: int, family: str = "lukasiewicz", table: Sequence[Sequence[int]] | None = None):
        if not isinstance(n, int) or n < 2:
            raise ChainError(f"a chain needs at least 2 degrees, got {n!r}")
        if family not in FAMILIES:
            raise ChainError(f"unknown operator family {family!r}")
        if (table is not None) != (family == "custom"):
            raise ChainError("a t-norm table is required for, and only for, the custom family")
        self.n = n
        self.family = family
        self.table = None if table is None else tuple(tuple(int(v) for v in row) for row in table)
        top = n - 1
        idx = range(n)
        if family == "custom":
            _check_tnorm_table(n, self.table)
            tn = [list(row) for row in self.table]
        elif family == "lukasiewicz":
            tn = [[max(x + y - top, 0) for y in idx] for x in idx]
        else:
            tn = [[min(x, y) for y in idx] for x in idx]
        self._tnorm = tn
        self._tconorm = [[top - tn[top - x][top - y] for y in idx] for x in idx]
        if family == "zadeh":
            self._residuum = [[max(top - x, y) for y in idx] for x in idx]
            self._neg = [top - x for x in idx]
        else:
            # residuum x => z is the largest y with x (x) y <= z
            self._residuum = [[max(y for y in idx if tn[x][y] <= z) for z in idx] for x in idx]
            self._neg = [self._residuum[x][0] for x in idx]

    # -- identity -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.n, self.family, self.table) == (other.n, other.family, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.family, self.table))

    def __repr__(self) -> str:
        return f"Chain({self.n}, {self.family!r})"

    # -- degrees --------------------------------------------------------
    @property
    def top(self) -> int:
        return self.n - 1

    @property
    def residuated(self) -> bool:
        """False for the Zadeh family, whose implication is not a residuum."""
        return self.family != "zadeh"

    @property
    def degrees(self) -> range:
        return range(self.n)

    @property
    def positive(self) -> range:
        return range(1, self.n)

    def value(self, d: int) -> Fraction:
        self._check(d)
        return Fraction(d, self.n - 1)

    def degree(self, x: Fraction | int | str) -> int:
        """Index of the rational ``x``; raises if ``x`` is not on the chain."""
        v = Fraction(x)
        k = v * (self.n - 1)
        if k.denominator != 1 or not 0 <= k <= self.n - 1:
            raise DomainError(f"degree {format_fraction(v)} not on chain of {self.n}")
        return int(k)

    def _check(self, *ds: int) -> None:
        for d in ds:
            if not (isinstance(d, int) and 0 <= d < self.n):
                raise DomainError(f"{d!r} is not a degree index of a chain of {self.n}")

    # -- operators ------------------------------------------------------
    def tnorm(self, x: int, y: int) -> int:
        return self._tnorm[x][y]

    def tconorm(self, x: int, y: int) -> int:
        return self._tconorm[x][y]

    def residuum(self, x: int, y: int) -> int:
        return self._residuum[x][y]

    def neg(self, x: int) -> int:
        return self._neg[x]

    def succ(self, d: int) -> int:
        self._check(d)
        if d >= self.top:
            raise DomainError("succ(1) is undefined")
        return d + 1

    def pred(self, d: int) -> int:
        self._check(d)
        if d <= 0:
            raise DomainError("pred(0) is undefined")
        return d - 1

    def tnorm_all(self, ds: Iterable[int]) -> int:
        acc = self.top
        for d in ds:
            acc = self._tnorm[acc][d]
        return acc

    # -- inverse / frontier sets ----------------------------------------
    def neg_inv_max(self, d: int) -> int:
        """Largest ``d'`` with ``neg(d') >= d``; defined for ``d > 0``."""
        self._check(d)
        if d == 0:
            raise DomainError("neg_inv_max is only defined for positive degrees")
        return max(e for e in self.degrees if self._neg[e] >= d)

    def neg_leq_threshold(self, d: int) -> int:
        """Least ``x`` with ``neg(x) <= d``; defined for ``d < 1``."""
        self._check(d)
        if d == self.top:
            raise DomainError("neg_leq_threshold(1) is vacuous")
        return min(x for x in self.degrees if self._neg[x] <= d)

    def tnorm_frontier(self, d: int, xs: Sequence[int] | None = None, ys: Sequence[int] | None = None) -> tuple[Pair, ...]:
        """Pareto-minimal pairs ``(a, b)`` with ``a (x) b >= d``.

        ``xs``/``ys`` restrict the candidate values of each side (e.g. ``(0, top)``
        for a crisp operand).
        """
        return self._frontier("tnorm", d, _vals(self, xs), _vals(self, ys))

    def tconorm_frontier(self, d: int, xs: Sequence[int] | None = None, ys: Sequence[int] | None = None) -> tuple[Pair, ...]:
        return self._frontier("tconorm", d, _vals(self, xs), _vals(self, ys))

    def impl_frontier(self, d: int, xs: Sequence[int] | None = None, ys: Sequence[int] | None = None) -> tuple[Pair, ...]:
        """Pairs with ``a => b < d``, minimal in ``a`` and maximal in ``b``."""
        return self._frontier("impl", d, _vals(self, xs), _vals(self, ys))

    @lru_cache(maxsize=None)
    def _frontier(self, op: str, d: int, xs: tuple[int, ...], ys: tuple[int, ...]) -> tuple[Pair, ...]:
        self._check(d)
        if d == 0:
            raise DomainError("frontier sets are only defined for positive degrees")
        if op == "impl":
            sat = [(a, b) for a in xs for b in ys if self._residuum[a][b] < d]
            # flip the second coordinate so that "better" is smaller on both axes
            keep = pareto_minimal([(a, -b) for a, b in sat])
            return tuple(sorted((a, -nb) for a, nb in keep))
        table = self._tnorm if op == "tnorm" else self._tconorm
        sat = [(a, b) for a in xs for b in ys if table[a][b] >= d]
        return tuple(sorted(pareto_minimal(sat)))

    @cached_property
    def is_two_valued(self) -> bool:
        return self.n == 2


def _vals(chain: Chain, xs: Sequence[int] | None) -> tuple[int, ...]:
    return tuple(chain.degrees) if xs is None else tuple(sorted(set(xs)))


def pareto_minimal(points: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Component-wise minimal elements of a finite set of integer tuples.

    Points are visited by ascending coordinate sum; anything strictly below a
    point has a strictly smaller sum, so a point is minimal iff no already kept
    point is component-wise ``<=`` it.
    """
    kept: list[tuple[int, ...]] = []
    for p in sorted(set(map(tuple, points)), key=lambda t: (sum(t), t)):
        if not any(all(k <= v for k, v in zip(q, p)) for q in kept):
            kept.append(p)
    return kept


def mk_chain(n: int, family: str = "lukasiewicz", table: Sequence[Sequence[int]] | None = None) -> Chain:
    return Chain(n, family, table)


def _check_tnorm_table(n: int, table) -> None:
    if table is None or len(table) != n or any(len(row) != n for row in table):
        raise ChainError(f"custom t-norm table must be {n}x{n}")
    top = n - 1
    idx = range(n)
    for x in idx:
        for y in idx:
            if not 0 <= table[x][y] <= top:
                raise ChainError(f"table entry ({x},{y}) = {table[x][y]} is not a degree index")
    for x in idx:
        if table[x][top] != x:
            raise ChainError(f"identity law fails: {x} (x) 1 = {table[x][top]} (witness x={x})")
    for x, y in itertools.product(idx, idx):
        if table[x][y] != table[y][x]:
            raise ChainError(f"commutativity fails (witness x={x}, y={y})")
    for x, y in itertools.product(idx, idx):
        for z in idx:
            if y <= z and table[x][y] > table[x][z]:
                raise ChainError(f"monotonicity fails (witness x={x}, y={y}, z={z})")
    for x, y, z in itertools.product(idx, idx, idx):
        if table[table[x][y]][z] != table[x][table[y][z]]:
            raise ChainError(f"associativity fails (witness x={x}, y={y}, z={z})")


def format_fraction(v: Fraction) -> str:
    """Short exact rendering: decimals when they terminate, ``p/q`` otherwise."""
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    den = v.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return f"{v.numerator}/{v.denominator}"
    digits = 0
    scaled = v
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"
