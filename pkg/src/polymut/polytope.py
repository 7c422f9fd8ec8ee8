"""Rational convex polytopes with exact vertex and half-space descriptions.

A :class:`RationalPolytope` in ``R^dim`` stores

* ``vertices``: lexicographically sorted tuples of :class:`~fractions.Fraction`;
* ``facets``: irredundant pairs ``(normal, rhs)`` meaning ``<normal, x> <= rhs``
  with a primitive integer normal;
* ``equations``: pairs ``(normal, rhs)`` meaning ``<normal, x> = rhs`` that cut
  out the affine hull (empty for full-dimensional polytopes).

For lower-dimensional polytopes each facet normal is reduced modulo the
equations (zero on the equations' pivot coordinates), so both descriptions
are canonical and two polytopes are equal iff their vertex tuples are.

Conversions between the two descriptions use an exact incremental double
description method over Python integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels
from .exact import (
    as_fraction_vector,
    det,
    dot,
    format_rational,
    integer_inverse,
    integer_kernel,
    inverse,
    is_integral,
    is_unimodular,
    mat_mul,
    nullspace,
    parse_rational,
    primitive_integer_direction,
    rank,
    rref,
    to_int_vector,
    vadd,
    vec_mat,
    vsub,
)

Halfspace = tuple  # (tuple[int, ...], Fraction)


class PolytopeError(ValueError):
    pass


class EmptyPolytope(PolytopeError):
    """The inequality system has no solution."""


class UnboundedPolyhedron(PolytopeError):
    """The inequality system defines an unbounded polyhedron."""


class NotInterior(PolytopeError):
    """A point required to be interior is not."""


class NonLatticePolytope(PolytopeError):
    pass


class SearchInconclusive(RuntimeError):
    def __init__(self, budget: int, tried: int):
        super().__init__(f"equivalence search exhausted its frame budget ({tried} >= {budget})")
        self.budget = budget
        self.tried = tried


# --- double description -------------------------------------------------------


def _int_row(row: Sequence) -> list[int]:
    fr = [Fraction(x) for x in row]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in fr]


def _primitive(v: list[int]) -> tuple:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def extreme_rays(rows: Sequence[Sequence[int]], n: int) -> list[tuple]:
    """Extreme rays of the pointed cone ``{x in Q^n : row . x >= 0 for all rows}``.

    ``rows`` must have rank ``n``.  Rays are returned as primitive integer
    vectors.  Incremental double description with the combinatorial
    adjacency test.
    """
    rows = [list(r) for r in rows if any(r)]
    basis: list[int] = []
    chosen: list[list[int]] = []
    for i, r in enumerate(rows):
        if rank(chosen + [r]) > len(chosen):
            chosen.append(r)
            basis.append(i)
            if len(basis) == n:
                break
    if len(basis) < n:
        raise PolytopeError("cone is not pointed (constraint matrix rank deficient)")
    binv = inverse(chosen)
    rays: list[tuple] = []
    masks: list[int] = []
    for j in range(n):
        col = [binv[i][j] for i in range(n)]
        rays.append(_primitive(_int_row(col)))
        masks.append(sum(1 << basis[i] for i in range(n) if i != j))
    done = set(basis)
    for idx, a in enumerate(rows):
        if idx in done:
            continue
        done.add(idx)
        bit = 1 << idx
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            for i in zer:
                masks[i] |= bit
            continue
        new_rays: list[tuple] = []
        new_masks: list[int] = []
        need = n - 2
        for p in pos:
            mp = masks[p]
            for q in neg:
                common = mp & masks[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for r, mr in enumerate(masks):
                    if r != p and r != q and common & mr == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                ray = [vp * y - vq * x for x, y in zip(rays[p], rays[q])]
                new_rays.append(_primitive(ray))
                new_masks.append(common | bit)
        keep = pos + zer
        rays = [rays[i] for i in keep] + new_rays
        masks = [masks[i] | (bit if i in set(zer) else 0) for i in keep] + new_masks
    return rays


# --- helpers -----------------------------------------------------------------


def _equation_system(direction_rows: list, m: int) -> list[tuple]:
    """Canonical primitive integer normals of the orthogonal complement."""
    comp = nullspace(direction_rows, m) if direction_rows else [tuple(1 if i == j else 0 for i in range(m)) for j in range(m)]
    if not comp:
        return []
    red, _ = rref(comp)
    return [primitive_integer_direction(r) for r in red]


def _reduce_normal(normal: Sequence, rhs: Fraction, eqs: Sequence[Halfspace]) -> Halfspace:
    """Reduce ``normal . x <= rhs`` modulo the equations and make it primitive."""
    a = [Fraction(x) for x in normal]
    b = Fraction(rhs)
    if eqs:
        red, piv = rref([list(n) + [c] for n, c in eqs])
        for row, p in zip(red, piv):
            f = a[p]
            if f:
                a = [x - f * y for x, y in zip(a, row[:-1])]
                b -= f * row[-1]
    if not any(a):
        raise PolytopeError("degenerate halfspace after reduction")
    direction = primitive_integer_direction(a)
    nz = next(i for i, x in enumerate(direction) if x)
    scale = Fraction(direction[nz]) / a[nz]
    return direction, b * scale


def _sort_key_hs(h: Halfspace):
    return (h[0], h[1])


@dataclass(frozen=True, eq=False)
class RationalPolytope:
    dim: int
    vertices: tuple
    facets: tuple
    equations: tuple

    # -- derived data --

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def intrinsic_dim(self) -> int:
        if self.is_empty:
            return -1
        return self.dim - len(self.equations)

    @property
    def halfspaces(self) -> tuple:
        """Facets plus each equation as a pair of opposite halfspaces, sorted."""
        hs = list(self.facets)
        for n, c in self.equations:
            hs.append((n, c))
            hs.append((tuple(-x for x in n), -c))
        return tuple(sorted(hs, key=_sort_key_hs))

    @property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    @cached_property
    def _incidence(self) -> tuple:
        """Per facet, the frozenset of indices of vertices on it."""
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if dot(a, v) == b) for a, b in self.facets
        )

    @cached_property
    def _vertex_facets(self) -> tuple:
        """Per vertex, a bitmask of the facets through it."""
        masks = [0] * len(self.vertices)
        for f, inc in enumerate(self._incidence):
            for i in inc:
                masks[i] |= 1 << f
        return tuple(masks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        verts = ", ".join("(" + ", ".join(format_rational(x) for x in v) + ")" for v in self.vertices[:6])
        more = ", ..." if len(self.vertices) > 6 else ""
        return f"RationalPolytope(dim={self.dim}, vertices=[{verts}{more}])"

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        """Membership; with ``strict`` the point must lie in the relative interior."""
        if self.is_empty:
            return False
        x = as_fraction_vector(x)
        for n, c in self.equations:
            if dot(n, x) != c:
                return False
        for a, b in self.facets:
            v = dot(a, x)
            if v > b or (strict and v == b):
                return False
        return True

    def edges(self) -> list[tuple[int, int]]:
        """Vertex index pairs spanning edges."""
        d = self.intrinsic_dim
        if d < 1:
            return []
        if d == 1:
            return [(0, 1)]
        masks = self._vertex_facets
        out = []
        for i, j in combinations(range(len(self.vertices)), 2):
            common = masks[i] & masks[j]
            if bin(common).count("1") < d - 1:
                continue
            if any(k != i and k != j and masks[k] & common == common for k in range(len(masks))):
                continue
            out.append((i, j))
        return out


def _empty(dim: int) -> RationalPolytope:
    return RationalPolytope(dim, (), (), ())


def empty_polytope(dim: int) -> RationalPolytope:
    return _empty(dim)


def _build(dim: int, vertices: Iterable, facets: Iterable, equations: Iterable) -> RationalPolytope:
    eqs = sorted(((tuple(n), Fraction(c)) for n, c in equations), key=_sort_key_hs)
    fac = sorted({_reduce_normal(a, b, eqs) for a, b in facets}, key=_sort_key_hs)
    verts = tuple(sorted(set(as_fraction_vector(v) for v in vertices)))
    return RationalPolytope(dim, verts, tuple(fac), tuple(eqs))


# --- constructors ----------------------------------------------------------------


def hull(points: Iterable[Sequence]) -> RationalPolytope:
    """Convex hull with minimal vertex list and irredundant half-space description."""
    pts = sorted(set(as_fraction_vector(p) for p in points))
    if not pts:
        raise PolytopeError("hull of an empty point set")
    m = len(pts[0])
    if any(len(p) != m for p in pts):
        raise PolytopeError("points of mixed dimension")
    p0 = pts[0]
    diffs = [vsub(p, p0) for p in pts[1:]]
    red, piv = rref(diffs) if diffs else ([], [])
    d = len(piv)
    eq_normals = _equation_system([list(r) for r in red], m)
    eqs = [(n, dot(n, p0)) for n in eq_normals]
    if d == 0:
        return _build(m, [p0], [], eqs)
    proj = [tuple(p[c] for c in piv) for p in pts]
    rows = [_int_row([1] + [-y for y in q]) for q in proj]
    facets_proj = []
    for ray in extreme_rays(rows, d + 1):
        b, a = ray[0], ray[1:]
        if not any(a):
            continue
        facets_proj.append((a, Fraction(b)))
    verts = []
    for q, p in zip(proj, pts):
        tight = [a for a, b in facets_proj if dot(a, q) == b]
        if rank(tight) == d:
            verts.append(p)
    facets = []
    for a, b in facets_proj:
        normal = [0] * m
        for j, c in enumerate(piv):
            normal[c] = a[j]
        facets.append((normal, b))
    return _build(m, verts, facets, eqs)


def from_halfspaces(hs: Iterable[tuple], dim: int | None = None) -> RationalPolytope:
    """Vertex enumeration of ``{x : <a, x> <= b for (a, b) in hs}``.

    Raises :class:`EmptyPolytope` or :class:`UnboundedPolyhedron`.
    """
    hs = [(as_fraction_vector(a), Fraction(b)) for a, b in hs]
    if dim is None:
        if not hs:
            raise PolytopeError("cannot infer dimension from an empty system")
        dim = len(hs[0][0])
    m = dim
    if m == 0:
        if all(b >= 0 for _, b in hs):
            return _build(0, [()], [], [])
        raise EmptyPolytope("infeasible system")
    rows = [_int_row([b] + [-x for x in a]) for a, b in hs]
    rows.append([1] + [0] * m)
    n = m + 1
    if rank(rows) < n:
        lineality = nullspace(rows, n)
        extra = []
        for l in lineality:
            li = _int_row(l)
            extra.append(li)
            extra.append([-x for x in li])
        rays = extreme_rays(rows + extra, n)
        if any(r[0] > 0 for r in rays):
            raise UnboundedPolyhedron("system has a lineality direction")
        raise EmptyPolytope("infeasible system")
    rays = extreme_rays(rows, n)
    verts = [tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0]
    if not verts:
        raise EmptyPolytope("infeasible system")
    if any(r[0] == 0 for r in rays):
        raise UnboundedPolyhedron("system has a recession direction")
    return hull(verts)


def box(lo: Sequence, hi: Sequence) -> RationalPolytope:
    from itertools import product

    return hull(product(*[(a, b) for a, b in zip(lo, hi)]))


# --- basic operations --------------------------------------------------------------


def translate(P: RationalPolytope, t: Sequence) -> RationalPolytope:
    t = as_fraction_vector(t)
    if P.is_empty:
        return P
    return _build(
        P.dim,
        [vadd(v, t) for v in P.vertices],
        [(a, b + dot(a, t)) for a, b in P.facets],
        [(n, c + dot(n, t)) for n, c in P.equations],
    )


def dilate(P: RationalPolytope, k) -> RationalPolytope:
    k = Fraction(k)
    if k <= 0:
        raise PolytopeError("dilation factor must be positive")
    if P.is_empty:
        return P
    return _build(
        P.dim,
        [tuple(k * x for x in v) for v in P.vertices],
        [(a, k * b) for a, b in P.facets],
        [(n, k * c) for n, c in P.equations],
    )


def apply_affine(P: RationalPolytope, m: Sequence[Sequence], t: Sequence | None = None) -> RationalPolytope:
    """Image ``{x . m + t : x in P}`` under an invertible affine map."""
    n = P.dim
    if len(m) != n or any(len(r) != n for r in m):
        raise PolytopeError("matrix shape does not match the polytope")
    t = as_fraction_vector(t) if t is not None else tuple(Fraction(0) for _ in range(n))
    if det(m) == 0:
        raise PolytopeError("singular matrix")
    if P.is_empty:
        return P
    minv = inverse(m)

    def image_of(a, b):
        # <a, x> with x = (y - t) m^-1  ->  <m^-1 a, y> - <m^-1 a, t>
        na = tuple(sum(minv[i][j] * a[j] for j in range(n)) for i in range(n))
        return na, b + dot(na, t)

    return _build(
        n,
        [vadd(vec_mat(v, m), t) for v in P.vertices],
        [image_of(a, b) for a, b in P.facets],
        [_eq_image(*image_of(nn, c)) for nn, c in P.equations],
    )


def _eq_image(normal, rhs):
    direction = primitive_integer_direction(normal)
    nz = next(i for i, x in enumerate(direction) if x)
    scale = Fraction(direction[nz]) / normal[nz]
    return direction, rhs * scale


def minkowski_sum(P: RationalPolytope, Q: RationalPolytope) -> RationalPolytope:
    if P.dim != Q.dim:
        raise PolytopeError("ambient dimensions differ")
    if P.is_empty or Q.is_empty:
        return _empty(P.dim)
    return hull(vadd(u, v) for u in P.vertices for v in Q.vertices)


def intersect(P: RationalPolytope, extra: Iterable[tuple]) -> RationalPolytope:
    """``P`` cut by extra halfspaces; possibly empty."""
    if P.is_empty:
        return P
    try:
        return from_halfspaces(list(P.halfspaces) + list(extra), P.dim)
    except EmptyPolytope:
        return _empty(P.dim)


def slice_polytope(P: RationalPolytope, w: Sequence, h) -> RationalPolytope:
    """``P`` intersected with the hyperplane ``<w, x> = h``; possibly empty."""
    w = as_fraction_vector(w)
    h = Fraction(h)
    return intersect(P, [(w, h), (tuple(-x for x in w), -h)])


def polar(P: RationalPolytope) -> RationalPolytope:
    """``{v : <u, v> >= -1 for all u in P}``; the origin must be interior."""
    if P.is_empty or P.intrinsic_dim != P.dim or any(b <= 0 for _, b in P.facets):
        raise NotInterior("origin is not an interior point")
    verts = [tuple(Fraction(-x) / b for x in a) for a, b in P.facets]
    facets = []
    for u in P.vertices:
        n = primitive_integer_direction([-x for x in u])
        nz = next(i for i, x in enumerate(n) if x)
        scale = Fraction(n[nz]) / (-u[nz])
        facets.append((n, scale))
    return _build(P.dim, verts, facets, [])


def dual_at(P: RationalPolytope, a: Sequence) -> RationalPolytope:
    """Polar dual of ``P - a``; ``a`` must be an interior point."""
    a = as_fraction_vector(a)
    if not P.contains(a, strict=True) or P.intrinsic_dim != P.dim:
        raise NotInterior(f"{tuple(format_rational(x) for x in a)} is not an interior point")
    return polar(translate(P, [-x for x in a]))


# --- lattice points ---------------------------------------------------------------


def _integer_system(P: RationalPolytope, strict: bool) -> tuple[list, list, list, list]:
    A, b = [], []
    for a, c in P.facets:
        A.append(list(a))
        if strict:
            b.append(math.ceil(c) - 1)
        else:
            b.append(math.floor(c))
    for n, c in P.equations:
        if c.denominator != 1:
            return A, None, [], []
        A.append(list(n))
        b.append(int(c))
        A.append([-x for x in n])
        b.append(-int(c))
    lo = [math.ceil(min(v[j] for v in P.vertices)) for j in range(P.dim)]
    hi = [math.floor(max(v[j] for v in P.vertices)) for j in range(P.dim)]
    return A, b, lo, hi


def lattice_points(P: RationalPolytope) -> list[tuple]:
    if P.is_empty:
        return []
    A, b, lo, hi = _integer_system(P, strict=False)
    if b is None or any(l > h for l, h in zip(lo, hi)):
        return []
    return kernels.enumerate_points(A, b, lo, hi)


def interior_lattice_points(P: RationalPolytope) -> list[tuple]:
    """Lattice points in the relative interior, found with strict integer inequalities."""
    if P.is_empty:
        return []
    A, b, lo, hi = _integer_system(P, strict=True)
    if b is None or any(l > h for l, h in zip(lo, hi)):
        return []
    return kernels.enumerate_points(A, b, lo, hi)


def count_lattice_points(P: RationalPolytope) -> int:
    if P.is_empty:
        return 0
    A, b, lo, hi = _integer_system(P, strict=False)
    if b is None or any(l > h for l, h in zip(lo, hi)):
        return 0
    return kernels.count_points(A, b, lo, hi)


def ehrhart_counts(P: RationalPolytope, k_max: int = 3) -> list[int]:
    """``|kP ∩ Z^m|`` for ``k = 1..k_max`` by direct enumeration."""
    if k_max < 1:
        raise ValueError("k_max must be positive")
    return [count_lattice_points(dilate(P, k)) for k in range(1, k_max + 1)]


# --- volume --------------------------------------------------------------------


def _affine_coordinates(P: RationalPolytope) -> list[int]:
    """Coordinate indices on which projection from the affine hull is injective."""
    p0 = P.vertices[0]
    _, piv = rref([vsub(v, p0) for v in P.vertices[1:]]) if len(P.vertices) > 1 else ([], [])
    return piv


def triangulation(P: RationalPolytope) -> list[tuple[int, ...]]:
    """Pulling triangulation as tuples of vertex indices (no new vertices)."""
    if P.is_empty:
        return []
    verts = P.vertices
    incidence = P._incidence
    dim_cache: dict = {}

    def affdim(S: frozenset) -> int:
        if S not in dim_cache:
            idx = sorted(S)
            base = verts[idx[0]]
            dim_cache[S] = rank([vsub(verts[i], base) for i in idx[1:]]) if len(idx) > 1 else 0
        return dim_cache[S]

    memo: dict = {}

    def tri(S: frozenset, k: int) -> list[tuple[int, ...]]:
        if (S, k) in memo:
            return memo[S, k]
        if k == 0:
            out = [(min(S),)]
        else:
            apex = min(S)
            subfaces = {S & H for H in incidence if S & H and S & H != S}
            out = []
            for G in sorted(subfaces, key=sorted):
                if apex in G or affdim(G) != k - 1:
                    continue
                out.extend(s + (apex,) for s in tri(G, k - 1))
        memo[S, k] = out
        return out

    return tri(frozenset(range(len(verts))), P.intrinsic_dim)


def _simplex_volume(points: Sequence[Sequence]) -> Fraction:
    base = points[0]
    d = len(points) - 1
    if d == 0:
        return Fraction(1)
    mat = [vsub(p, base) for p in points[1:]]
    return Fraction(abs(det(mat)), math.factorial(d))


def projected_volume(P: RationalPolytope, coords: Sequence[int]) -> Fraction:
    """Volume of the image of ``P`` under projection onto ``coords``.

    ``len(coords)`` must equal the intrinsic dimension for a nonzero result.
    """
    if P.is_empty:
        return Fraction(0)
    if P.intrinsic_dim != len(coords):
        return Fraction(0)
    total = Fraction(0)
    for simplex in triangulation(P):
        pts = [tuple(P.vertices[i][c] for c in coords) for i in simplex]
        total += _simplex_volume(pts)
    return total


def volume(P: RationalPolytope) -> Fraction:
    """Euclidean volume in the ambient space (zero unless full-dimensional)."""
    if P.is_empty or P.intrinsic_dim < P.dim:
        return Fraction(0)
    return projected_volume(P, list(range(P.dim)))


def relative_volume(P: RationalPolytope) -> Fraction:
    """Volume inside the affine hull, normalised by the lattice of the hull's direction.

    A single point has relative volume 1.  Requires integral equations only when
    the polytope is lower-dimensional.
    """
    if P.is_empty:
        return Fraction(0)
    if P.intrinsic_dim == P.dim:
        return volume(P)
    basis, completion = integer_kernel([list(n) for n, _ in P.equations], P.dim)
    cinv = inverse(completion)
    d = P.intrinsic_dim
    base = P.vertices[0]
    coords = [tuple(vec_mat(vsub(v, base), cinv)[:d]) for v in P.vertices]
    return volume(hull(coords))


# --- equivalence ---------------------------------------------------------------


def _lattice_length(v: Sequence) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return g


class _Combinatorics:
    """Vertex graph and fingerprints of a full-dimensional lattice polytope."""

    def __init__(self, P: RationalPolytope):
        self.P = P
        self.verts = [to_int_vector(v) for v in P.vertices]
        self.masks = P._vertex_facets
        n = len(self.verts)
        self.nbrs: list[list[int]] = [[] for _ in range(n)]
        for i, j in P.edges():
            self.nbrs[i].append(j)
            self.nbrs[j].append(i)
        self.edge_len = {}
        for i in range(n):
            for j in self.nbrs[i]:
                self.edge_len[i, j] = _lattice_length(vsub(self.verts[j], self.verts[i]))
        self.fp = [
            (
                len(self.nbrs[i]),
                bin(self.masks[i]).count("1"),
                tuple(sorted(self.edge_len[i, j] for j in self.nbrs[i])),
            )
            for i in range(n)
        ]
        self._two_face: dict = {}

    def two_face(self, v: int, a: int, b: int) -> bool:
        key = (v, min(a, b), max(a, b))
        if key not in self._two_face:
            common = self.masks[v] & self.masks[a] & self.masks[b]
            normals = [self.P.facets[f][0] for f in range(len(self.P.facets)) if common >> f & 1]
            self._two_face[key] = rank(normals) == self.P.dim - 2 if normals else self.P.dim == 2
        return self._two_face[key]


def _full_dim_equivalence(P: RationalPolytope, Q: RationalPolytope, frame_budget: int):
    d = P.dim
    cp, cq = _Combinatorics(P), _Combinatorics(Q)
    if sorted(cp.fp) != sorted(cq.fp):
        return None
    qset = set(cq.verts)

    def candidates(fp):
        return [j for j in range(len(cq.verts)) if cq.fp[j] == fp]

    # anchor: the vertex whose fingerprint class is rarest, then of least degree
    v0 = min(range(len(cp.verts)), key=lambda i: (len(candidates(cp.fp[i])), cp.fp[i][0], i))
    base = cp.verts[v0]
    frame: list[int] = []
    for j in sorted(cp.nbrs[v0], key=lambda j: (len(candidates(cp.fp[j])), j)):
        trial = frame + [j]
        if rank([vsub(cp.verts[k], base) for k in trial]) == len(trial):
            frame = trial
        if len(frame) == d:
            break
    if len(frame) < d:
        raise PolytopeError("could not find an edge frame (polytope not full-dimensional?)")
    src = [vsub(cp.verts[k], base) for k in frame]
    src_inv = inverse(src)
    tried = 0

    def finish(w0: int, images: list[int]):
        dst = [vsub(cq.verts[k], cq.verts[w0]) for k in images]
        m = mat_mul(src_inv, dst)
        if not all(is_integral(r) for r in m):
            return None
        m = tuple(to_int_vector(r) for r in m)
        if not is_unimodular(m):
            return None
        t = vsub(cq.verts[w0], vec_mat(base, m))
        if {vadd(vec_mat(v, m), t) for v in cp.verts} != qset:
            return None
        return m, tuple(int(x) for x in t)

    for w0 in candidates(cp.fp[v0]):
        images: list[int] = []

        def extend(pos: int):
            nonlocal tried
            if pos == d:
                tried += 1
                if tried > frame_budget:
                    raise SearchInconclusive(frame_budget, tried)
                return finish(w0, images)
            src_j = frame[pos]
            for cand in cq.nbrs[w0]:
                if cand in images or cq.fp[cand] != cp.fp[src_j]:
                    continue
                if cq.edge_len[w0, cand] != cp.edge_len[v0, src_j]:
                    continue
                if any(
                    cq.two_face(w0, images[k], cand) != cp.two_face(v0, frame[k], src_j) for k in range(pos)
                ):
                    continue
                images.append(cand)
                found = extend(pos + 1)
                images.pop()
                if found is not None:
                    return found
            return None

        found = extend(0)
        if found is not None:
            return found
    return None


def _lattice_chart(P: RationalPolytope):
    """Base vertex, unimodular completion and full-dimensional lattice coordinates."""
    basis, completion = integer_kernel([list(n) for n, _ in P.equations], P.dim)
    cinv = integer_inverse(completion)
    d = P.intrinsic_dim
    base = to_int_vector(P.vertices[0])
    coords = [tuple(vec_mat(vsub(to_int_vector(v), base), cinv)[:d]) for v in P.vertices]
    return base, completion, hull(coords)


def affine_unimodular_equivalent(P: RationalPolytope, Q: RationalPolytope, frame_budget: int = 200_000):
    """Search for ``(m, t)`` with ``m`` unimodular, ``t`` integral and ``P . m + t = Q``.

    Returns the certificate, or ``None`` when no such map exists.  The search
    anchors a vertex of ``P`` together with an independent frame of its edges
    and tries every image frame with matching fingerprints, so a ``None`` is
    definitive.  Raises :class:`SearchInconclusive` when more than
    ``frame_budget`` complete frames would be needed.
    """
    if not (P.is_lattice and Q.is_lattice):
        raise NonLatticePolytope("equivalence search needs lattice polytopes")
    if P.dim != Q.dim or P.intrinsic_dim != Q.intrinsic_dim:
        return None
    if len(P.vertices) != len(Q.vertices) or len(P.facets) != len(Q.facets):
        return None
    if P.is_empty:
        return None
    if count_lattice_points(P) != count_lattice_points(Q):
        return None
    n, d = P.dim, P.intrinsic_dim
    if d == n:
        cert = _full_dim_equivalence(P, Q, frame_budget) if d > 0 else (tuple(), tuple())
    else:
        bp, up, hp = _lattice_chart(P)
        bq, uq, hq = _lattice_chart(Q)
        if d == 0:
            inner = (tuple(), tuple())
        else:
            inner = _full_dim_equivalence(hp, hq, frame_budget)
        if inner is None:
            return None
        md, td = inner
        block = [[0] * n for _ in range(n)]
        for i in range(d):
            for j in range(d):
                block[i][j] = md[i][j]
        for i in range(d, n):
            block[i][i] = 1
        m = mat_mul(mat_mul(integer_inverse(up), block), uq)
        shift = vadd(bq, vec_mat(list(td) + [0] * (n - d), uq))
        t = vsub(shift, vec_mat(bp, m))
        cert = (tuple(tuple(int(x) for x in r) for r in m), tuple(int(x) for x in t))
    if cert is None:
        return None
    m, t = cert
    if n and apply_affine(P, m, t) != Q:
        raise PolytopeError("internal error: certificate failed verification")
    return cert


# --- JSON ---------------------------------------------------------------------


def to_json_obj(P: RationalPolytope) -> dict:
    return {
        "dim": P.dim,
        "vertices": [[format_rational(x) for x in v] for v in P.vertices],
        "halfspaces": [
            {"normal": [int(x) for x in a], "rhs": format_rational(b)} for a, b in P.halfspaces
        ],
    }


def from_json_obj(obj: dict) -> RationalPolytope:
    """Parse the polytope schema; vertices win, halfspaces are cross-checked."""
    dim = int(obj["dim"])
    verts = [tuple(parse_rational(x) for x in v) for v in obj.get("vertices") or []]
    hs = [
        (tuple(int(parse_rational(x)) for x in h["normal"]), parse_rational(h["rhs"]))
        for h in obj.get("halfspaces") or []
    ]
    if verts:
        P = hull(verts)
        if P.dim != dim:
            raise PolytopeError("vertex dimension does not match 'dim'")
        for a, b in hs:
            if any(dot(a, v) > b for v in P.vertices):
                raise PolytopeError("halfspaces and vertices describe different sets")
        return P
    if hs:
        return from_halfspaces(hs, dim)
    return _empty(dim)


def dumps(P: RationalPolytope) -> str:
    return json.dumps(to_json_obj(P))


def loads(text: str) -> RationalPolytope:
    return from_json_obj(json.loads(text))
