"""Exchange matrices, their mutations and the tropical mutation of points and polytopes.

A :class:`Seed` stores only the exchange matrix ``epsilon`` (rows indexed by
the unfrozen labels, columns by all labels).  Cluster variables are not
represented.
"""

from __future__ import annotations

import json
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exact import as_fraction_vector, format_rational, primitive_part, rank, solve, vec_mat
from .mutation import MutationDatum, TraceStep, phi_polytope
from .polytope import (
    RationalPolytope,
    apply_affine,
    dual_at,
    ehrhart_counts,
    hull,
    interior_lattice_points,
    to_json_obj,
)


class FrozenDirection(ValueError):
    pass


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _pos(x):
    return x if x > 0 else 0


@dataclass(frozen=True)
class Seed:
    J: tuple
    J_uf: tuple
    epsilon: tuple

    def __post_init__(self):
        J = tuple(self.J)
        J_uf = tuple(self.J_uf)
        eps = tuple(tuple(int(x) for x in row) for row in self.epsilon)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "J_uf", J_uf)
        object.__setattr__(self, "epsilon", eps)
        if len(set(J)) != len(J) or not set(J_uf) <= set(J) or len(set(J_uf)) != len(J_uf):
            raise ValueError("J_uf must be a subset of J without repetitions")
        if len(eps) != len(J_uf) or any(len(r) != len(J) for r in eps):
            raise ValueError("epsilon must have shape |J_uf| x |J|")
        if skew_symmetrizer(self) is None:
            raise ValueError("unfrozen block of epsilon is not skew-symmetrizable")

    @property
    def J_fr(self) -> tuple:
        uf = set(self.J_uf)
        return tuple(j for j in self.J if j not in uf)

    def col(self, label) -> int:
        return self.J.index(label)

    def row_index(self, label) -> int:
        if label not in self.J_uf:
            raise FrozenDirection(f"{label!r} is not an unfrozen label")
        return self.J_uf.index(label)

    def entry(self, i, j) -> int:
        return self.epsilon[self.row_index(i)][self.col(j)]

    def row(self, k) -> tuple:
        return self.epsilon[self.row_index(k)]


def skew_symmetrizer(s: Seed) -> tuple | None:
    """Positive integers ``d`` with ``d_i eps_ij = -d_j eps_ji`` on the unfrozen block, or None."""
    n = len(s.J_uf)
    cols = [s.J.index(j) for j in s.J_uf]
    block = [[s.epsilon[i][cols[j]] for j in range(n)] for i in range(n)]
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                a, b = block[i][j], block[j][i]
                if (a == 0) != (b == 0):
                    return None
                if a == 0:
                    continue
                if i == j:
                    return None
                dj = -d[i] * a / b
                if dj <= 0:
                    return None
                if d[j] is None:
                    d[j] = dj
                    queue.append(j)
                elif d[j] != dj:
                    return None
    den = 1
    for x in d:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return tuple(int(x * den) for x in d)


def mutate_matrix(s: Seed, k) -> Seed:
    """Matrix mutation in direction ``k``."""
    kr = s.row_index(k)
    kc = s.col(k)
    eps = s.epsilon
    new = []
    for i, row in enumerate(eps):
        ik = row[kc]
        out = []
        for j, x in enumerate(row):
            if i == kr or j == kc:
                out.append(-x)
            else:
                out.append(x + _sgn(ik) * _pos(ik * eps[kr][j]))
        new.append(tuple(out))
    return Seed(s.J, s.J_uf, tuple(new))


def dominance_leq(s: Seed, a: Sequence[int], b: Sequence[int], box: int | None = None) -> bool:
    """Whether ``a = b + u epsilon`` for some nonnegative integer vector ``u``.

    With a full-rank exchange matrix ``u`` is unique and found by solving.
    Otherwise every ``u`` in ``[0, box]^|J_uf|`` is tried (``box`` defaults to
    the largest absolute coordinate of ``a - b``).
    """
    diff = [Fraction(x) - Fraction(y) for x, y in zip(a, b)]
    if len(diff) != len(s.J):
        raise ValueError("vector length does not match J")
    if not s.J_uf:
        return not any(diff)
    eps_t = [list(col) for col in zip(*s.epsilon)]
    if rank(s.epsilon) == len(s.J_uf):
        u = solve(eps_t, diff)
        return u is not None and all(x.denominator == 1 and x >= 0 for x in u)
    bound = box if box is not None else int(max(abs(x) for x in diff))
    for u in product(range(bound + 1), repeat=len(s.J_uf)):
        if list(vec_mat(u, s.epsilon)) == diff:
            return True
    return False


def tropical_mutate_point(s: Seed, k, g: Sequence) -> tuple:
    """Tropicalized cluster mutation of ``g`` in direction ``k``."""
    row = s.row(k)
    kc = s.col(k)
    g = as_fraction_vector(g)
    gk = g[kc]
    return tuple(
        -x if j == kc else x + _pos(-row[j]) * gk + row[j] * _pos(gk) for j, x in enumerate(g)
    )


def decompose_tropical(s: Seed, k) -> MutationDatum:
    """Shear datum ``(w, F)`` and unimodular ``f`` with ``f(phi(g))`` the tropical mutation of ``g``."""
    row = s.row(k)
    kc = s.col(k)
    if not any(row):
        raise ValueError(f"row {k!r} of epsilon is zero")
    w, c = primitive_part(row)
    n = len(s.J)
    F = hull([tuple(0 for _ in range(n)), tuple(-c if j == kc else 0 for j in range(n))])
    u = [2 if j == kc else min(x, 0) for j, x in enumerate(row)]
    f = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    f[kc] = [(1 if j == kc else 0) - u[j] for j in range(n)]
    return MutationDatum(w, F, tuple(map(tuple, f)))


# --- polytope payloads ------------------------------------------------------------


@dataclass(frozen=True)
class SeedNode:
    seed: Seed
    payload: RationalPolytope
    path: tuple = ()
    trace: tuple = ()

    def __post_init__(self):
        if self.payload.dim != len(self.seed.J):
            raise ValueError("payload dimension must equal |J|")


def tropical_mutate_polytope(node: SeedNode, k) -> SeedNode:
    """Mutate seed and payload in direction ``k``; the payload goes through the shear then ``f``."""
    datum = decompose_tropical(node.seed, k)
    image = apply_affine(phi_polytope(datum, node.payload), datum.f)
    step = TraceStep(datum, "M", None, f"tropical mutation at {k}")
    return SeedNode(mutate_matrix(node.seed, k), image, node.path + (k,), node.trace + (step,))


@dataclass
class NodeReport:
    path: tuple
    seed: Seed
    payload: RationalPolytope
    multiplicity: int = 1
    interior_points: list = field(default_factory=list)
    dual_is_lattice: bool | None = None
    dual_ehrhart: list | None = None
    paths: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "path": list(self.path),
            "paths": [list(p) for p in self.paths],
            "multiplicity": self.multiplicity,
            "seed": seed_to_json_obj(self.seed),
            "payload": to_json_obj(self.payload),
            "interior_points": [list(p) for p in self.interior_points],
            "dual_is_lattice": self.dual_is_lattice,
            "dual_ehrhart": self.dual_ehrhart,
        }


def node_invariants(payload: RationalPolytope, k_max: int = 2) -> tuple[list, bool | None, list | None]:
    """Interior lattice points, and for a unique one the lattice-ness and Ehrhart counts of the dual."""
    interior = interior_lattice_points(payload)
    if len(interior) != 1:
        return interior, None, None
    dual = dual_at(payload, interior[0])
    return interior, dual.is_lattice, ehrhart_counts(dual, k_max)


def _invariants_job(args):
    payload, k_max = args
    return node_invariants(payload, k_max)


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("POLYMUT_THREADS", "1")))
    except ValueError:
        return 1


def _node_key(node: SeedNode):
    return (node.seed.epsilon, node.payload.vertices)


def explore(root: SeedNode, depth: int = 3, k_max: int = 2, invariants: bool = True) -> list[NodeReport]:
    """Breadth-first walk of the exchange tree to ``depth``, never undoing the last step.

    Nodes with equal exchange matrix and payload are merged; the first path
    found (in ascending-direction BFS order) is kept and the multiplicity
    counts how many tree vertices reached it.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    reports: dict = {}
    order: list = []
    frontier = [root]
    level = 0
    while True:
        for node in frontier:
            key = _node_key(node)
            if key in reports:
                reports[key].multiplicity += 1
                reports[key].paths.append(node.path)
            else:
                reports[key] = NodeReport(node.path, node.seed, node.payload, paths=[node.path])
                order.append(key)
        if level == depth:
            break
        nxt = []
        for node in frontier:
            for k in node.seed.J_uf:
                if node.path and node.path[-1] == k:
                    continue
                nxt.append(tropical_mutate_polytope(node, k))
        frontier = nxt
        level += 1
    out = [reports[key] for key in order]
    if invariants:
        jobs = [(r.payload, k_max) for r in out]
        threads = _thread_cap()
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_invariants_job, jobs))
        else:
            results = [_invariants_job(j) for j in jobs]
        for r, (interior, lattice, counts) in zip(out, results):
            r.interior_points = interior
            r.dual_is_lattice = lattice
            r.dual_ehrhart = counts
    return out


# --- JSON --------------------------------------------------------------------


def seed_to_json_obj(s: Seed) -> dict:
    return {"J": list(s.J), "J_uf": list(s.J_uf), "epsilon": [list(r) for r in s.epsilon]}


def seed_from_json_obj(obj: dict) -> Seed:
    return Seed(tuple(obj["J"]), tuple(obj["J_uf"]), tuple(tuple(int(x) for x in r) for r in obj["epsilon"]))


def dumps(s: Seed) -> str:
    return json.dumps(seed_to_json_obj(s))


def loads(text: str) -> Seed:
    return seed_from_json_obj(json.loads(text))


def format_point(p: Sequence) -> list[str]:
    return [format_rational(x) for x in p]
