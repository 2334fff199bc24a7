"""Mixed-volume ratios from an absorbing walk of particles on [0, 1].

Each configuration entry is a particle.  Breakpoints absorb particles up to
their capacity and become transparent once full; the endpoints 0 and 1
kill any particle that reaches them.  A free particle moves as a symmetric
walk inside the interval bounded by the nearest non-full sites, so it exits
at the upper end with probability ``(y - lo) / (hi - lo)``.  The ratio of a
mixed volume to the normalizer is the probability that every particle ends
up absorbed at a breakpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial, prod
from typing import Sequence

from .core import DomainError, FamilySpec, breakpoints, make_config, target_multiset
from .geometry import MixedVolumeResult, normalizer_V
from .rational import format_fraction

LITERAL = "literal"
MIRRORED = "mirrored"
READINGS = (LITERAL, MIRRORED)


@dataclass(frozen=True)
class WalkOutcome:
    success_probability: Fraction
    branch_count: int

    @property
    def ratio(self) -> Fraction:
        return self.success_probability


def walk_probability(family: FamilySpec, cfg: Sequence,
                     order: Sequence[int] | None = None,
                     memoize: bool = True) -> WalkOutcome:
    """Probability that all particles are absorbed at finite-capacity sites.

    ``order`` is a permutation of ``range(m)`` indexing the sorted
    configuration; it fixes the order in which free particles walk.
    """
    u = make_config(family, cfg)
    m = family.m
    if order is None:
        order = tuple(range(m))
    else:
        order = tuple(order)
        if sorted(order) != list(range(m)):
            raise DomainError(f"order must be a permutation of range({m}), got {order}")

    table = breakpoints(family)
    positions = table.positions
    caps = table.capacities
    if any(x == 0 or x == 1 for x in u):
        return WalkOutcome(Fraction(0), 0)

    # particles sitting on a site with room are pinned before anything moves
    counts = [0] * len(positions)
    pinned = set()
    for i in range(m):
        k = table.index_of(u[i])
        if k is not None and caps[k] is not None and counts[k] < caps[k]:
            counts[k] += 1
            pinned.add(i)
    movers = [u[i] for i in order if i not in pinned]

    memo: dict = {}
    calls = 0

    def run(step: int, state: tuple) -> Fraction:
        nonlocal calls
        if step == len(movers):
            return Fraction(1)
        key = (step, state)
        if memoize and key in memo:
            return memo[key]
        calls += 1
        y = movers[step]
        lo = max(k for k, p in enumerate(positions)
                 if p < y and (caps[k] is None or state[k] < caps[k]))
        hi = min(k for k, p in enumerate(positions)
                 if p > y and (caps[k] is None or state[k] < caps[k]))
        p_lo, p_hi = positions[lo], positions[hi]
        up = (y - p_lo) / (p_hi - p_lo)
        total = Fraction(0)
        for k, weight in ((hi, up), (lo, 1 - up)):
            if weight == 0 or caps[k] is None:
                continue
            nxt = list(state)
            nxt[k] += 1
            total += weight * run(step + 1, tuple(nxt))
        if memoize:
            memo[key] = total
        return total

    prob = run(0, tuple(counts))
    return WalkOutcome(prob, calls)


def walk_mixed_volume(family: FamilySpec, cfg: Sequence) -> MixedVolumeResult:
    ratio = walk_probability(family, cfg).success_probability
    norm = normalizer_V(family)
    return MixedVolumeResult(ratio * norm, norm, ratio, "walk")


def product_formula(family: FamilySpec, cfg: Sequence,
                    reading: str = MIRRORED) -> Fraction | None:
    """Closed form for configurations bunched below or above the targets.

    Returns None when the sorted configuration is neither entrywise below
    nor entrywise above the sorted target multiset.  The ascending case is
    tried first.
    """
    u = make_config(family, cfg)
    q = target_multiset(family)
    if all(a <= b for a, b in zip(u, q)):
        return prod((a / b for a, b in zip(u, q)), start=Fraction(1))
    return descending_formula(family, u, reading)


def descending_formula(family: FamilySpec, cfg: Sequence,
                       reading: str = MIRRORED) -> Fraction | None:
    """Closed form for configurations entrywise above the sorted targets.

    ``literal`` divides ``prod(1 - u_t)`` by the product of the
    targets; ``mirrored`` divides by the product of their distances to 1.
    The two agree for hypersimplex families.
    """
    if reading not in READINGS:
        raise DomainError(f"unknown reading {reading!r}; choose from {READINGS}")
    u = make_config(family, cfg)
    q = target_multiset(family)
    if not all(a >= b for a, b in zip(u, q)):
        return None
    num = prod((1 - a for a in u), start=Fraction(1))
    if reading == LITERAL:
        return num / prod(q, start=Fraction(1))
    return num / prod((1 - b for b in q), start=Fraction(1))


def _require_hypersimplex(family: FamilySpec):
    if not family.is_hypersimplex:
        raise DomainError(
            f"requires R = {{1, n-1}} (hypersimplex family), got {family}")


def shift_sum(family: FamilySpec, cfg: Sequence) -> Fraction:
    """Sum of walk ratios over the n cyclic shifts by multiples of 1/n."""
    _require_hypersimplex(family)
    u = make_config(family, cfg)
    n = family.n
    total = Fraction(0)
    for k in range(n):
        shifted = [(x + Fraction(k, n)) % 1 for x in u]
        total += walk_probability(family, shifted).success_probability
    return total


@dataclass(frozen=True)
class GuessReport:
    config: tuple
    lhs: int | None  # None when (n-1)! * ratio is not an integer
    rhs: int
    modulus: int
    holds: bool | None

    def to_json(self) -> dict:
        return {"config": [format_fraction(x) for x in self.config],
                "lhs": "NON_INTEGER" if self.lhs is None else self.lhs,
                "rhs": self.rhs, "modulus": self.modulus, "holds": self.holds}


def guess_check(family: FamilySpec, cfg: Sequence) -> GuessReport:
    """Compare ``(n-1)! * ratio`` with ``+-prod(n * u_i)`` modulo n."""
    _require_hypersimplex(family)
    u = make_config(family, cfg)
    n = family.n
    grid = [x * n for x in u]
    if any(g.denominator != 1 for g in grid):
        raise DomainError(f"every n*u_i must be an integer, got {[str(g) for g in grid]}")
    rhs = prod(int(g) for g in grid)
    scaled = factorial(n - 1) * walk_probability(family, u).success_probability
    if scaled.denominator != 1:
        return GuessReport(u, None, rhs, n, None)
    lhs = int(scaled)
    holds = (lhs - rhs) % n == 0 or (lhs + rhs) % n == 0
    return GuessReport(u, lhs, rhs, n, holds)


def grid_configs(family: FamilySpec, include_degenerate: bool = False):
    """Sorted configurations with every entry in ``{0, 1/n, ..., 1}``."""
    n = family.n
    steps = range(0, n + 1) if include_degenerate else range(1, n)
    for combo in combinations_with_replacement(steps, family.m):
        yield tuple(Fraction(k, n) for k in combo)


def guess_scan(n: int, bound: int | None = None,
               include_degenerate: bool = False) -> list[GuessReport]:
    family = FamilySpec(n, 1, n - 1)
    out = []
    for i, cfg in enumerate(grid_configs(family, include_degenerate)):
        if bound is not None and i >= bound:
            break
        out.append(guess_check(family, cfg))
    return out
