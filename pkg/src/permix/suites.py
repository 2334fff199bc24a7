"""Verification suites: each case pairs an expected value with what we compute."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction as F
from itertools import combinations_with_replacement

from .core import FamilySpec, breakpoints, is_zone, target_multiset
from .geometry import (enumerate_vertices, family_polytope, mixed_volume,
                       superaffine_check, superaffine_gap)
from .rational import format_fraction
from .walk import (MIRRORED, LITERAL, READINGS, descending_formula,
                   grid_configs, shift_sum, walk_probability)

SEED = 1729

HYPER4 = FamilySpec(4, 1, 3)
R12 = FamilySpec(4, 1, 2)

# (configuration in quarters, ratio in sixths); the normalization row repeats
HYPER4_TABLE = (
    ((1, 1, 1), 1), ((1, 1, 2), 2), ((1, 1, 3), 3), ((1, 2, 2), 4), ((1, 2, 3), 6),
    ((3, 3, 3), 1), ((2, 3, 3), 2), ((1, 3, 3), 3), ((2, 2, 3), 4), ((1, 2, 3), 6),
    ((2, 2, 2), 4),
)

# starting configurations of the five shift-sum lines
SHIFT_LINES = ((1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 2), (1, 2, 3))


@dataclass(frozen=True)
class CaseResult:
    suite: str
    name: str
    expected: str
    actual: str
    passed: bool
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        text = f"[{tag}] {self.suite}: {self.name}  expected={self.expected}  actual={self.actual}"
        return text + (f"  ({self.note})" if self.note else "")

    def to_json(self) -> dict:
        return {"suite": self.suite, "case": self.name, "expected": self.expected,
                "actual": self.actual, "passed": self.passed, "note": self.note}


def _fmt(x) -> str:
    if isinstance(x, F):
        return format_fraction(x)
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(_fmt(v) for v in x) + ")"
    return str(x)


def _case(suite, name, expected, actual, note="") -> CaseResult:
    return CaseResult(suite, name, _fmt(expected), _fmt(actual), expected == actual, note)


def quarters(ks):
    return tuple(F(k, 4) for k in ks)


def random_config(rng: random.Random, family: FamilySpec, max_den: int = 12) -> tuple:
    out = []
    for _ in range(family.m):
        q = rng.randint(2, max_den)
        out.append(F(rng.randint(1, q - 1), q))
    return tuple(sorted(out))


# -- suites ------------------------------------------------------------------

def suite_hypersimplex():
    for ks, sixths in HYPER4_TABLE:
        cfg = quarters(ks)
        expected = F(sixths, 6)
        walk = walk_probability(HYPER4, cfg).success_probability
        oracle = mixed_volume(HYPER4, cfg).ratio
        yield _case("hypersimplex", f"walk {_fmt(cfg)}", expected, walk)
        yield _case("hypersimplex", f"oracle {_fmt(cfg)}", expected, oracle)


def suite_r12():
    table = breakpoints(R12)
    finite = [(b.position, b.capacity) for b in table if not b.is_kill]
    yield _case("r12", "breakpoints (position, capacity)",
                [(F(1, 2), 1), (F(3, 4), 2)], finite)
    yield _case("r12", "target multiset", (F(1, 2), F(3, 4), F(3, 4)),
                target_multiset(R12))
    counts = {p: len(enumerate_vertices(family_polytope(R12, p)).vertices)
              for p in (F(1, 2), F(3, 4))}
    note = "vertex count under the standard orientation"
    yield _case("r12", "F(j(1/2)) is a cube", 8, counts[F(1, 2)], note)
    yield _case("r12", "F(j(3/4)) is a simplex", 4, counts[F(3, 4)], note)
    for ks, expected in (((2, 3, 3), F(1)), ((1, 3, 3), F(1, 2)), ((3, 3, 3), F(1, 2))):
        cfg = quarters(ks)
        yield _case("r12", f"walk {_fmt(cfg)}", expected,
                    walk_probability(R12, cfg).success_probability)
        yield _case("r12", f"oracle {_fmt(cfg)}", expected, mixed_volume(R12, cfg).ratio)


def suite_shiftsum(random_n4: int = 20, random_n5: int = 10):
    for ks in SHIFT_LINES:
        cfg = quarters(ks)
        yield _case("shiftsum", f"n=4 {_fmt(cfg)}", F(1), shift_sum(HYPER4, cfg))
        # each term of the line against the oracle
        for k in range(4):
            shifted = tuple(sorted((x + F(k, 4)) % 1 for x in cfg))
            yield _case("shiftsum", f"term {_fmt(shifted)} walk vs oracle",
                        mixed_volume(HYPER4, shifted).ratio,
                        walk_probability(HYPER4, shifted).success_probability)
    rng = random.Random(SEED)
    for n, count in ((4, random_n4), (5, random_n5)):
        family = FamilySpec(n, 1, n - 1)
        for _ in range(count):
            cfg = random_config(rng, family)
            yield _case("shiftsum", f"n={n} {_fmt(cfg)}", F(1), shift_sum(family, cfg))


ZONE_FIXTURES = (
    (HYPER4, ((F(0), F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 2), F(3, 4))), True),
    (HYPER4, ((F(1, 4), F(3, 4)), (F(1, 2), F(1, 2)), (F(1, 2), F(3, 4))), True),
    (HYPER4, ((F(1, 4), F(3, 4)), (F(1, 4), F(1, 2)), (F(1, 2), F(3, 4))), False),
    # endpoints must be breakpoints
    (HYPER4, ((F(1, 8), F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 2), F(3, 4))), False),
    # straddling p_r = 1/2 needs r = 1 pin there; straddling p_s = 3/4 needs 2
    (R12, ((F(0), F(3, 4)), (F(1, 2), F(1, 2)), (F(3, 4), F(3, 4))), True),
    (R12, ((F(1, 2), F(1)), (F(1, 2), F(1, 2)), (F(3, 4), F(3, 4))), False),
    (R12, ((F(1, 2), F(1)), (F(3, 4), F(3, 4)), (F(3, 4), F(3, 4))), True),
)


def all_zones(family: FamilySpec):
    """Every zone of the family, as sorted tuples of intervals."""
    positions = breakpoints(family).positions
    intervals = [(a, b) for a in positions for b in positions if a <= b]
    for combo in combinations_with_replacement(intervals, family.m):
        if is_zone(family, combo):
            yield combo


def multilinearity_zones(family: FamilySpec = HYPER4, count: int = 10):
    """Zones where some interval strictly contains a breakpoint, evenly sampled."""
    positions = breakpoints(family).positions
    interesting = [z for z in all_zones(family)
                   if any(lo < p < hi for lo, hi in z for p in positions)]
    step = max(1, len(interesting) // count)
    return interesting[::step][:count]


def multilinearity_cases(family: FamilySpec = HYPER4, count: int = 10):
    for zone in multilinearity_zones(family, count):
        base = [(lo + hi) / 2 for lo, hi in zone]
        for i, (lo, hi) in enumerate(zone):
            if lo == hi:
                continue
            values = []
            for x in (lo, (lo + hi) / 2, hi):
                cfg = list(base)
                cfg[i] = x
                values.append(mixed_volume(family, cfg).value)
            yield _case("zones", f"affine in coordinate {i} on {_fmt(zone)}",
                        (values[0] + values[2]) / 2, values[1])


def suite_zones():
    for family, zone, expected in ZONE_FIXTURES:
        yield _case("zones", f"is_zone {family} {_fmt(zone)}", expected, is_zone(family, zone))
    yield from multilinearity_cases()


def descending_cases(family: FamilySpec = R12, denominators=(4, 8)):
    """Descending closed forms against walk and oracle on grid configurations."""
    seen = set()
    for den in denominators:
        grid = [F(k, den) for k in range(1, den)]
        for cfg in combinations_with_replacement(grid, family.m):
            if cfg in seen or descending_formula(family, cfg, MIRRORED) is None:
                continue
            seen.add(cfg)
            walk = walk_probability(family, cfg).success_probability
            oracle = mixed_volume(family, cfg).ratio
            yield cfg, walk, oracle, {r: descending_formula(family, cfg, r) for r in READINGS}


def descending_verdict(family: FamilySpec = R12, denominators=(4, 8)):
    rows = list(descending_cases(family, denominators))
    matching = [r for r in READINGS
                if all(f[r] == walk == oracle for _, walk, oracle, f in rows)]
    return rows, matching


def suite_descending():
    rows, matching = descending_verdict()
    for cfg, walk, oracle, forms in rows:
        yield _case("descending", f"walk vs oracle {_fmt(cfg)}", oracle, walk)
        for r in READINGS:
            ok = forms[r] == walk
            yield CaseResult("descending", f"{r} {_fmt(cfg)}", _fmt(walk), _fmt(forms[r]), True,
                             "matches" if ok else "differs (informational)")
    yield _case("descending", "exactly one reading matches everywhere", [MIRRORED], matching,
                f"verdict: {matching[0] if len(matching) == 1 else matching}")
    # for hypersimplices the two readings coincide
    for cfg in grid_configs(HYPER4):
        a = descending_formula(HYPER4, cfg, LITERAL)
        if a is not None:
            yield _case("descending", f"n=4 R={{1,3}} readings agree {_fmt(cfg)}",
                        a, descending_formula(HYPER4, cfg, MIRRORED))


SUPERAFFINE_FAMILIES = (FamilySpec(3, 1, 2), HYPER4, R12)


def random_unit(rng: random.Random, max_den: int = 12) -> F:
    q = rng.randint(1, max_den)
    return F(rng.randint(0, q), q)


def suite_superaffine(per_family: int = 20):
    rng = random.Random(SEED)
    for family in SUPERAFFINE_FAMILIES:
        for _ in range(per_family):
            u, u2, a = random_unit(rng), random_unit(rng), random_unit(rng)
            yield _case("superaffine", f"{family} u={_fmt(u)} u'={_fmt(u2)} a={_fmt(a)}",
                        True, superaffine_check(family, u, u2, a))
    combo, target = superaffine_gap(HYPER4, F(1, 4), F(3, 4), F(1, 2))
    yield _case("superaffine", "strict: vol(F(1/4)/2 + F(3/4)/2) < vol(F(1/2))",
                True, combo < target, f"{_fmt(combo)} vs {_fmt(target)}")


def cross_method_cases(families=(FamilySpec(3, 1, 2), HYPER4, R12, FamilySpec(4, 2, 3))):
    for family in families:
        for cfg in grid_configs(family, include_degenerate=True):
            yield _case("cross-method", f"{family} {_fmt(cfg)}",
                        mixed_volume(family, cfg).ratio,
                        walk_probability(family, cfg).success_probability)


def suite_all():
    for name in ("hypersimplex", "r12", "shiftsum", "zones", "descending", "superaffine"):
        yield from SUITES[name]()
    yield from cross_method_cases()


SUITES = {
    "hypersimplex": suite_hypersimplex,
    "r12": suite_r12,
    "shiftsum": suite_shiftsum,
    "zones": suite_zones,
    "descending": suite_descending,
    "superaffine": suite_superaffine,
    "all": suite_all,
}


def run_suite(name: str) -> list[CaseResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return list(SUITES[name]())
