"""Exact brute-force oracle for the mixed volumes of a family.

Everything here works in the coordinates ``(v_1, ..., v_{n-1})`` of the
hyperplane ``sum(v) = 0`` (the last coordinate is eliminated), with
Fractions throughout.  Volumes are Lebesgue measure in those coordinates.

The fully mixed coefficient is extracted by inclusion-exclusion over the
Minkowski sums of all nonempty sub-collections of the summands.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, lcm
from typing import Sequence

from . import _linalg as la
from .core import (STANDARD, DomainError, FamilySpec, embed_config, make_config,
                   target_multiset)
from .rational import to_fraction


# largest n the brute-force oracle accepts
MAX_N = 7


class UnboundedPolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class HPolytope:
    """``{v : normal . v >= offset}`` for every (normal, offset) constraint."""

    dim: int
    constraints: tuple
    vertex_hint: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def is_empty(self) -> bool:
        return not enumerate_vertices(self).vertices

    def contains(self, point) -> bool:
        return all(la.dot(g, point) >= b for g, b in self.constraints)


@dataclass(frozen=True)
class VPolytope:
    vertices: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class MixedVolumeResult:
    value: Fraction
    normalizer: Fraction
    ratio: Fraction
    method: str = "oracle"


def make_hpolytope(dim: int, constraints) -> HPolytope:
    """Build an H-polytope with primitive integer normals and no duplicates.

    Of two constraints with the same normal only the tighter one is kept.
    """
    best: dict = {}
    for normal, offset in constraints:
        normal = [to_fraction(x) for x in normal]
        offset = to_fraction(offset)
        prim = la.primitive(normal)
        if not any(prim):
            if offset > 0:
                raise DomainError("constraint 0 >= positive offset is infeasible")
            continue
        # primitive() may have flipped the sign; undo for an inequality
        k = next(i for i, x in enumerate(normal) if x != 0)
        scale = Fraction(prim[k]) / normal[k]
        if scale < 0:
            prim = tuple(-x for x in prim)
            scale = -scale
        off = offset * scale
        if prim not in best or off > best[prim]:
            best[prim] = off
    return HPolytope(dim, tuple(sorted(best.items())))


def build_hrep(family: FamilySpec, y: dict) -> HPolytope:
    """H-representation of ``F(y)`` in coordinates ``v_1 .. v_{n-1}``."""
    n = family.n
    d = n - 1
    rows = []
    for T in family.facets:
        if T not in y:
            raise DomainError(f"offset vector is missing facet {T}")
        rows.append((_facet_normal(T, n), -to_fraction(y[T])))
    return make_hpolytope(d, rows)


def _facet_normal(T, n):
    d = n - 1
    if n - 1 in T:
        # sum over T of v = -(sum over the complement of T among the kept coords)
        return tuple(0 if i in T else -1 for i in range(d))
    return tuple(1 if i in T else 0 for i in range(d))


def _is_bounded(p: HPolytope) -> bool:
    d = p.dim
    normals = [g for g, _ in p.constraints]
    if la.rank(normals) < d:
        return False
    # a pointed cone {g.x >= 0} is nonzero iff one of its extreme rays is
    for rows in combinations(normals, d - 1):
        ray = la.nullvector(list(rows), d)
        if ray is None:
            continue
        for cand in (ray, tuple(-x for x in ray)):
            if all(la.dot(g, cand) >= 0 for g in normals):
                return False
    return True


def enumerate_vertices(p: HPolytope) -> VPolytope:
    """Exact vertex set by solving every d-subset of constraints."""
    if p.vertex_hint is not None:
        return VPolytope(tuple(p.vertex_hint))
    return _enumerate_vertices(p)


@lru_cache(maxsize=4096)
def _enumerate_vertices(p: HPolytope) -> VPolytope:
    d = p.dim
    if not _is_bounded(p):
        raise UnboundedPolytopeError("polytope is unbounded (or has a lineality space)")
    found = set()
    cons = p.constraints
    for rows in combinations(cons, d):
        sol = la.solve([g for g, _ in rows], [b for _, b in rows])
        if sol is None or sol in found:
            continue
        if all(la.dot(g, sol) >= b for g, b in cons):
            found.add(sol)
    return VPolytope(tuple(sorted(found)))


def _edge_directions(vertices, constraints) -> frozenset:
    tight = [frozenset(i for i, (g, b) in enumerate(constraints) if la.dot(g, v) == b)
             for v in vertices]
    d = len(vertices[0])
    dirs = set()
    for a, b in combinations(range(len(vertices)), 2):
        common = tight[a] & tight[b]
        if len(common) < d - 1:
            continue
        if la.rank([constraints[i][0] for i in common]) == d - 1:
            dirs.add(la.primitive([x - y for x, y in zip(vertices[b], vertices[a])]))
    return frozenset(dirs)


@dataclass(frozen=True)
class _Body:
    vertices: tuple
    directions: frozenset

    def scaled_int(self, factor: int) -> "_Body":
        # factor clears every denominator, so coordinates become Python ints
        return _Body(tuple(tuple(int(factor * x) for x in v) for v in self.vertices),
                     self.directions)

    def scaled(self, factor: Fraction) -> "_Body":
        if factor == 0:
            return _Body((tuple(Fraction(0) for _ in self.vertices[0]),), frozenset())
        return _Body(tuple(tuple(factor * x for x in v) for v in self.vertices),
                     self.directions)


@lru_cache(maxsize=4096)
def _body_of(p) -> _Body:
    if isinstance(p, HPolytope):
        verts = enumerate_vertices(p).vertices
        if not verts:
            raise DomainError("empty polytope cannot be a Minkowski summand")
        if len(verts) == 1:
            return _Body(verts, frozenset())
        return _Body(verts, _edge_directions(verts, p.constraints))
    verts = tuple(sorted(set(p.vertices)))
    # without facets, every difference of two vertices is a candidate edge
    dirs = frozenset(la.primitive([x - y for x, y in zip(b, a)])
                     for a, b in combinations(verts, 2))
    return _Body(verts, dirs)


@lru_cache(maxsize=256)
def _candidate_normals(directions: frozenset, d: int) -> tuple:
    """Normals of hyperplanes spanned by d-1 of the given edge directions.

    Every facet of a Minkowski sum is spanned by edges of the summands, so
    these (with both signs) contain all facet normals of any sum.
    """
    dirs = sorted(directions)
    normals = set()
    for rows in combinations(dirs, d - 1):
        g = la.nullvector(list(rows), d)
        if g is not None:
            normals.add(g)
    out = sorted(normals)
    return tuple(out) + tuple(tuple(-x for x in g) for g in out)


class _SumState:
    """Vertices of a partial Minkowski sum with tight normal sets per vertex."""

    __slots__ = ("vertices", "tight", "offsets")

    def __init__(self, vertices, tight, offsets):
        self.vertices = vertices
        self.tight = tight
        self.offsets = offsets


def _support(vertices, normals):
    return [min(la.dot(g, v) for v in vertices) for g in normals]


def _start_state(body: _Body, normals) -> _SumState:
    offsets = _support(body.vertices, normals)
    tight = [frozenset(i for i, g in enumerate(normals) if la.dot(g, v) == offsets[i])
             for v in body.vertices]
    return _SumState(list(body.vertices), tight, offsets)


def _add_body(state: _SumState, body: _Body, normals, rank_cache: dict) -> _SumState:
    other = _start_state(body, normals)
    d = len(normals[0])
    verts, tight = [], []
    for p, tp in zip(state.vertices, state.tight):
        for q, tq in zip(other.vertices, other.tight):
            common = tp & tq
            if len(common) < d:
                continue
            rk = rank_cache.get(common)
            if rk is None:
                rk = la.rank([normals[i] for i in common])
                rank_cache[common] = rk
            if rk == d:
                verts.append(tuple(a + b for a, b in zip(p, q)))
                tight.append(common)
    offsets = [a + b for a, b in zip(state.offsets, other.offsets)]
    return _SumState(verts, tight, offsets)


def _order_bodies(bodies: Sequence[_Body], d: int):
    full = [b for b in bodies if len(b.vertices) > 1]
    points = [b for b in bodies if len(b.vertices) == 1]
    for b in full:
        if la.affine_rank(b.vertices) != d:
            raise NotImplementedError(
                "Minkowski summands must be full-dimensional or single points")
    return full + points


def _sum_bodies(bodies: Sequence[_Body], d: int) -> HPolytope:
    bodies = _order_bodies(bodies, d)
    directions = frozenset().union(*(b.directions for b in bodies))
    if all(len(b.vertices) == 1 for b in bodies):
        point = tuple(sum(col) for col in zip(*(b.vertices[0] for b in bodies)))
        cons = [(tuple(1 if i == k else 0 for i in range(d)), point[k]) for k in range(d)]
        cons += [(tuple(-1 if i == k else 0 for i in range(d)), -point[k]) for k in range(d)]
        return HPolytope(d, tuple(cons), vertex_hint=(point,))
    normals = _candidate_normals(directions, d)
    state = _start_state(bodies[0], normals)
    rank_cache: dict = {}
    for b in bodies[1:]:
        state = _add_body(state, b, normals, rank_cache)
    return HPolytope(d, tuple(zip(normals, state.offsets)),
                     vertex_hint=tuple(sorted(state.vertices)))


def minkowski_sum(summands: Sequence) -> HPolytope:
    """Minkowski sum of H- or V-polytopes, returned as an H-polytope.

    The result carries its (exact) vertex set as ``vertex_hint``.
    """
    if not summands:
        raise DomainError("Minkowski sum of an empty list")
    dims = {s.dim for s in summands}
    if len(dims) != 1:
        raise DomainError(f"summands live in different dimensions: {sorted(dims)}")
    return _sum_bodies([_body_of(s) for s in summands], dims.pop())


# -- volume -------------------------------------------------------------------

class _FaceLattice:
    """Faces of a full-dimensional polytope as sets of vertex indices."""

    def __init__(self, vertices, constraints):
        self.vertices = vertices
        tights = set()
        for g, b in constraints:
            T = frozenset(i for i, v in enumerate(vertices) if la.dot(g, v) == b)
            if T:
                tights.add(T)
        self.tights = sorted(tights, key=sorted)
        self._dims: dict = {}
        self._facets: dict = {}

    def dim(self, S) -> int:
        r = self._dims.get(S)
        if r is None:
            r = la.affine_rank([self.vertices[i] for i in S])
            self._dims[S] = r
        return r

    def facets(self, S, k):
        """The (k-1)-faces of the k-face ``S``."""
        out = self._facets.get(S)
        if out is None:
            found = set()
            for T in self.tights:
                G = S & T
                if len(G) >= k and G != S and G not in found and self.dim(G) == k - 1:
                    found.add(G)
            out = sorted(found, key=sorted)
            self._facets[S] = out
        return out


def _boundary_volume(lat: _FaceLattice, d: int) -> Fraction:
    """Recursive boundary decomposition (Lasserre).

    For a face ``S`` projected onto the coordinates ``K`` (injective on its
    affine hull), ``k vol_K(S) = sum over facets G of beta/|a_j| vol_{K-j}(G)``
    where ``a.x <= beta`` is the facet inequality in those coordinates and
    ``a_j != 0``.  Dropping coordinate ``j`` rescales the facet volume by
    ``|a| / |a_j|``, which keeps every quantity rational.
    """
    verts = lat.vertices
    memo: dict = {}
    normal_memo: dict = {}

    def vol(S, K):
        key = (S, K)
        if key in memo:
            return memo[key]
        k = len(K)
        if k == 1:
            xs = [verts[i][K[0]] for i in S]
            result = Fraction(max(xs) - min(xs))
        else:
            total = Fraction(0)
            for G in lat.facets(S, k):
                nkey = (G, K)
                a = normal_memo.get(nkey)
                g_idx = sorted(G)
                base = [verts[g_idx[0]][c] for c in K]
                if a is None:
                    diffs = [[verts[i][c] - x for c, x in zip(K, base)] for i in g_idx[1:]]
                    a = la.nullvector(diffs, k)
                    normal_memo[nkey] = a
                beta = la.dot(a, base)
                outside = next(i for i in sorted(S) if i not in G)
                if la.dot(a, [verts[outside][c] for c in K]) > beta:
                    a = tuple(-x for x in a)
                    beta = -beta
                if beta == 0:
                    continue
                j = max(range(k), key=lambda i: abs(a[i]))
                total += Fraction(beta, 1) / abs(a[j]) * vol(G, K[:j] + K[j + 1:])
            result = total / k
        memo[key] = result
        return result

    return vol(frozenset(range(len(verts))), tuple(range(d)))


def _cone_volume(lat: _FaceLattice, d: int) -> Fraction:
    """Pulling triangulation, summed face by face.

    Each face is coned from its smallest vertex over the facets missing it.
    A k-face's volume is measured in its own pivot coordinates (those of
    the reduced row echelon basis of its direction space), so the cone
    over a facet ``G`` has volume ``|det M| vol(G) / k`` with ``M`` the
    facet basis plus the apex offset, written in the parent's pivots.
    """
    verts = lat.vertices
    basis_memo: dict = {}
    memo: dict = {}

    def basis(S):
        out = basis_memo.get(S)
        if out is None:
            idx = sorted(S)
            base = verts[idx[0]]
            rows, pivots = la._echelon([[a - b for a, b in zip(verts[i], base)]
                                        for i in idx[1:]])
            out = (tuple(pivots), rows[:len(pivots)])
            basis_memo[S] = out
        return out

    def vol(S, k):
        if k == 0:
            return Fraction(1)
        if S in memo:
            return memo[S]
        piv_s, _ = basis(S)
        apex = min(S)
        total = Fraction(0)
        for G in lat.facets(S, k):
            if apex in G:
                continue
            _, rows_g = basis(G)
            g0 = verts[min(G)]
            e = [a - b for a, b in zip(verts[apex], g0)]
            M = [[row[c] for c in piv_s] for row in rows_g] + [[e[c] for c in piv_s]]
            total += abs(la.det(M)) * vol(G, k - 1)
        memo[S] = total / k
        return memo[S]

    return vol(frozenset(range(len(verts))), d)


VOLUME_METHODS = ("cone", "boundary")


def _volume_of(vertices, constraints, d, method) -> Fraction:
    if len(vertices) <= d or la.affine_rank(vertices) < d:
        return Fraction(0)
    lat = _FaceLattice(list(vertices), constraints)
    if method == "cone":
        return _cone_volume(lat, d)
    if method == "boundary":
        return _boundary_volume(lat, d)
    raise ValueError(f"unknown volume method {method!r}; choose from {VOLUME_METHODS}")


def volume(p: HPolytope, method: str = "cone") -> Fraction:
    """Exact d-volume of an H-polytope (0 if empty or lower-dimensional)."""
    verts = enumerate_vertices(p).vertices
    if not verts:
        return Fraction(0)
    return _volume_of(verts, p.constraints, p.dim, method)


# -- family polytopes and mixed volumes ---------------------------------------

@lru_cache(maxsize=4096)
def family_polytope(family: FamilySpec, u, orientation: str = STANDARD) -> HPolytope:
    """``F(j(u))`` as an H-polytope."""
    if family.n > MAX_N:
        raise DomainError(f"the oracle supports n <= {MAX_N}, got n={family.n}")
    return build_hrep(family, embed_config(family, u, orientation))


def _family_body(family, u, orientation) -> _Body:
    return _body_of(family_polytope(family, u, orientation))


def mixed_volume_of(bodies: Sequence, d: int | None = None) -> Fraction:
    """Fully mixed volume of ``d`` polytopes in ``Q^d`` by inclusion-exclusion.

    ``V = (1/d!) * sum over nonempty S of (-1)^(d-|S|) vol(sum_{i in S} P_i)``.
    """
    bodies = [b if isinstance(b, _Body) else _body_of(b) for b in bodies]
    m = len(bodies)
    if d is None:
        d = len(bodies[0].vertices[0])
    if m != d:
        raise DomainError(f"need exactly {d} summands in dimension {d}, got {m}")
    # scale to integer vertices so the hot loops run on ints
    den = 1
    for b in bodies:
        for v in b.vertices:
            for x in v:
                den = lcm(den, Fraction(x).denominator)
    bodies = [b.scaled_int(den) for b in bodies]
    total = Fraction(0)
    for size in range(1, m + 1):
        sign = 1 if (m - size) % 2 == 0 else -1
        for subset in combinations(range(m), size):
            chosen = [bodies[i] for i in subset]
            dirs = frozenset().union(*(b.directions for b in chosen))
            if la.rank(sorted(dirs)) < d:
                continue
            total += sign * volume(_sum_bodies(chosen, d))
    return total / (factorial(m) * den ** d)


@lru_cache(maxsize=65536)
def _mixed_value(family: FamilySpec, cfg: tuple, orientation: str) -> Fraction:
    bodies = [_family_body(family, u, orientation) for u in cfg]
    return mixed_volume_of(bodies, family.m)


_normalizer_lock = threading.Lock()
_normalizers: dict = {}


def normalizer_V(family: FamilySpec, orientation: str = STANDARD) -> Fraction:
    """Mixed volume at the target configuration (coordinate convention)."""
    key = (family, orientation)
    value = _normalizers.get(key)
    if value is None:
        with _normalizer_lock:
            value = _normalizers.get(key)
            if value is None:
                value = _mixed_value(family, target_multiset(family), orientation)
                _normalizers[key] = value
    return value


def mixed_volume(family: FamilySpec, cfg: Sequence,
                 orientation: str = STANDARD) -> MixedVolumeResult:
    cfg = make_config(family, cfg)
    value = _mixed_value(family, cfg, orientation)
    norm = normalizer_V(family, orientation)
    return MixedVolumeResult(value, norm, value / norm, "oracle")


def superaffine_check(family: FamilySpec, u, u2, alpha,
                      orientation: str = STANDARD) -> bool:
    """Is ``a F(j(u)) + (1-a) F(j(u2))`` inside ``F(j(a u + (1-a) u2))``?"""
    u, u2, alpha = to_fraction(u), to_fraction(u2), to_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    A = enumerate_vertices(family_polytope(family, u, orientation)).vertices
    B = enumerate_vertices(family_polytope(family, u2, orientation)).vertices
    target = family_polytope(family, alpha * u + (1 - alpha) * u2, orientation)
    # every vertex of the sum is a sum of vertices, so checking all pairs suffices
    return all(target.contains(tuple(alpha * a + (1 - alpha) * b for a, b in zip(p, q)))
               for p in A for q in B)


def superaffine_gap(family: FamilySpec, u, u2, alpha,
                    orientation: str = STANDARD) -> tuple[Fraction, Fraction]:
    """Volumes of the convex combination and of the polytope at the mixed index."""
    u, u2, alpha = to_fraction(u), to_fraction(u2), to_fraction(alpha)
    d = family.m
    a = _family_body(family, u, orientation).scaled(alpha)
    b = _family_body(family, u2, orientation).scaled(1 - alpha)
    combo = volume(_sum_bodies([a, b], d)) if (len(a.vertices) > 1 or len(b.vertices) > 1) \
        else Fraction(0)
    mixed = volume(family_polytope(family, alpha * u + (1 - alpha) * u2, orientation))
    return combo, mixed


def scaled_sum_volume(polytopes: Sequence, weights: Sequence) -> Fraction:
    """``vol(sum_i w_i P_i)`` for nonnegative rational weights."""
    bodies = [_body_of(p).scaled(to_fraction(w)) for p, w in zip(polytopes, weights)]
    d = polytopes[0].dim
    if all(len(b.vertices) == 1 for b in bodies):
        return Fraction(0)
    return volume(_sum_bodies(bodies, d))


def metric_gram_determinants(family: FamilySpec) -> dict:
    """Gram determinants of two natural metrics on X relative to coordinates.

    A d-volume measured in coordinates is multiplied by the square root of
    the Gram determinant to get the volume in that metric.
    """
    d = family.m
    hyper = [[Fraction(int(i == k)) for k in range(d)] for i in range(d)]
    hyper.append([Fraction(-1)] * d)
    facet_rows = [_facet_normal(T, family.n) for T in family.facets]

    def gram(rows):
        return la.det([[sum(r[i] * r[j] for r in rows) for j in range(d)] for i in range(d)])

    return {"hyperplane": gram(hyper), "facet_embedding": gram(facet_rows)}
