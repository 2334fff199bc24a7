"""Two-parameter permutahedral families, their breakpoints and zones.

A family is fixed by ``n`` and ``R = {r, s}``.  Facets are indexed by the
subsets ``T`` of ``{0, ..., n-1}`` with ``|T|`` in ``R``; a polytope of the
family lives in the hyperplane ``sum(v) = 0`` of ``Q^n`` and is cut out by
``sum(v[i] for i in T) >= -y[T]``.  The offsets ``y`` run along a segment
parametrized by ``u`` in ``[0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .rational import to_fraction

KILL = None  # capacity marker of the endpoint sites 0 and 1

STANDARD = "standard"
REVERSED = "reversed"
ORIENTATIONS = (STANDARD, REVERSED)


class DomainError(ValueError):
    """An input violates a mathematical precondition."""


@dataclass(frozen=True)
class FamilySpec:
    n: int
    r: int
    s: int

    def __post_init__(self):
        for name in ("n", "r", "s"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.n < 3:
            raise DomainError(f"n must be >= 3, got {self.n}")
        if not 1 <= self.r < self.s <= self.n - 1:
            raise DomainError(
                f"need 1 <= r < s <= n-1, got r={self.r}, s={self.s}, n={self.n}")

    @property
    def m(self) -> int:
        """Dimension of the polytopes and number of walk particles."""
        return self.n - 1

    @property
    def is_hypersimplex(self) -> bool:
        return self.r == 1 and self.s == self.n - 1

    @property
    def facets(self) -> tuple[tuple[int, ...], ...]:
        """Facet index set H: all r-subsets, then all s-subsets."""
        idx = range(self.n)
        return tuple(combinations(idx, self.r)) + tuple(combinations(idx, self.s))

    @property
    def num_facets(self) -> int:
        return comb(self.n, self.r) + comb(self.n, self.s)

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "s": self.s}

    @classmethod
    def from_json(cls, data: dict) -> "FamilySpec":
        return cls(int(data["n"]), int(data["r"]), int(data["s"]))

    def __str__(self):
        return f"n={self.n}, R={{{self.r},{self.s}}}"


@dataclass(frozen=True)
class Breakpoint:
    t: int
    position: Fraction
    capacity: int | None

    @property
    def is_kill(self) -> bool:
        return self.capacity is KILL


@dataclass(frozen=True)
class BreakpointTable:
    family: FamilySpec
    entries: tuple[Breakpoint, ...]

    @property
    def positions(self) -> tuple[Fraction, ...]:
        return tuple(b.position for b in self.entries)

    @property
    def capacities(self) -> tuple[int | None, ...]:
        return tuple(b.capacity for b in self.entries)

    def index_of(self, position: Fraction) -> int | None:
        for k, b in enumerate(self.entries):
            if b.position == position:
                return k
        return None

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def breakpoint_position(family: FamilySpec, t: int) -> Fraction:
    n, r, s = family.n, family.r, family.s
    b = comb(n - 1, s)
    a = comb(n - 1, r - 1)
    return Fraction(t * b, t * b + (n - t) * a)


def breakpoints(family: FamilySpec) -> BreakpointTable:
    """Absorption sites ``p_t`` for ``t`` in ``{0} + [r, s] + {n}``."""
    n, r, s = family.n, family.r, family.s
    entries = [Breakpoint(0, Fraction(0), KILL)]
    for t in range(r, s + 1):
        if t == r:
            cap = r
        elif t == s:
            cap = n - s
        else:
            cap = 1
        entries.append(Breakpoint(t, breakpoint_position(family, t), cap))
    entries.append(Breakpoint(n, Fraction(1), KILL))
    return BreakpointTable(family, tuple(entries))


def target_multiset(family: FamilySpec) -> tuple[Fraction, ...]:
    """Sorted configuration whose mixed volume is the normalizer V."""
    out: list[Fraction] = []
    for b in breakpoints(family):
        if not b.is_kill:
            out.extend([b.position] * b.capacity)
    return tuple(out)


def embed_config(family: FamilySpec, u, orientation: str = STANDARD) -> dict:
    """Offset vector ``y = j(u)`` as a map from facet subset to rational.

    In the standard orientation ``j(0)`` is the vertex of the index simplex
    carried by the r-subsets, so the r-offsets scale with ``1 - u`` and the
    s-offsets with ``u``; this is the orientation in which the breakpoints
    are exactly where ``F(j(u))`` changes combinatorial type.  The
    ``reversed`` orientation is its mirror, ``j_reversed(u) = j(1 - u)``.
    """
    u = to_fraction(u)
    if not 0 <= u <= 1:
        raise DomainError(f"u must lie in [0, 1], got {u}")
    if orientation not in ORIENTATIONS:
        raise DomainError(f"unknown orientation {orientation!r}")
    if orientation == REVERSED:
        u = 1 - u
    size = family.num_facets
    y_r = (1 - u) * Fraction(size, comb(family.n, family.r))
    y_s = u * Fraction(size, comb(family.n, family.s))
    return {T: (y_r if len(T) == family.r else y_s) for T in family.facets}


def make_config(family: FamilySpec, values: Sequence) -> tuple[Fraction, ...]:
    """Validate a configuration and return its canonical (sorted) form."""
    cfg = tuple(sorted(to_fraction(v) for v in values))
    if len(cfg) != family.m:
        raise DomainError(
            f"configuration needs exactly m = n-1 = {family.m} entries, got {len(cfg)}")
    for u in cfg:
        if not 0 <= u <= 1:
            raise DomainError(f"configuration entries must lie in [0, 1], got {u}")
    return cfg


def is_zone(family: FamilySpec, intervals: Sequence[tuple]) -> bool:
    """Check the four zone conditions on a product of parameter intervals."""
    table = breakpoints(family)
    positions = set(table.positions)
    ivs = [(to_fraction(lo), to_fraction(hi)) for lo, hi in intervals]
    if len(ivs) != family.m:
        return False
    for lo, hi in ivs:
        if lo > hi or lo not in positions or hi not in positions:
            return False
    for b in table:
        if b.is_kill:
            continue
        straddled = any(lo < b.position < hi for lo, hi in ivs)
        if not straddled:
            continue
        pinned = sum(1 for lo, hi in ivs if lo == hi == b.position)
        # capacity is exactly the number of pins that makes p_t transparent
        if pinned < b.capacity:
            return False
    return True
