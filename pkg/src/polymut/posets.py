"""Marked posets, their polytopes, transfer maps, and the transfer map as a chain of shears.

Coordinates of ``R^(unmarked)`` follow the order in which unmarked elements
appear in :attr:`MarkedPoset.elements`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import as_fraction_vector, rank as matrix_rank
from .mutation import MutationDatum, MutationTrace, TraceStep, apply_step
from .polytope import RationalPolytope, from_halfspaces, hull, translate


class PosetError(ValueError):
    pass


class NotPure(PosetError):
    pass


class AssumptionViolated(PosetError):
    """The marking or the chosen point breaks the rank-constancy hypothesis."""


class MarkedPoset:
    """Finite poset given by cover pairs ``(lower, upper)``, with an integer marking.

    Covers are reduced to the Hasse diagram on construction.
    """

    def __init__(self, elements: Sequence, covers: Iterable[tuple], marked: Mapping):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("repeated element labels")
        index = {p: i for i, p in enumerate(self.elements)}
        self.marked = {p: int(v) for p, v in marked.items()}
        for p in self.marked:
            if p not in index:
                raise PosetError(f"marked label {p!r} is not an element")
        pairs = set()
        for lo, hi in covers:
            if lo not in index or hi not in index:
                raise PosetError(f"cover ({lo!r}, {hi!r}) uses an unknown element")
            if lo == hi:
                raise PosetError("a cover relation must join distinct elements")
            pairs.add((lo, hi))
        self._up = {p: set() for p in self.elements}
        for lo, hi in pairs:
            self._up[lo].add(hi)
        self._topo = self._toposort()
        self._above = self._closure()
        # transitive reduction
        reduced = set()
        for lo, hi in pairs:
            if not any(hi in self._above[mid] for mid in self._up[lo] if mid != hi):
                reduced.add((lo, hi))
        self.covers = tuple(sorted(reduced, key=lambda c: (index[c[0]], index[c[1]])))
        self._upper = {p: [] for p in self.elements}
        self._lower = {p: [] for p in self.elements}
        for lo, hi in self.covers:
            self._upper[lo].append(hi)
            self._lower[hi].append(lo)
        for p in self.elements:
            self._upper[p].sort(key=index.__getitem__)
            self._lower[p].sort(key=index.__getitem__)
        for p in self.elements:
            if (not self._lower[p] or not self._upper[p]) and p not in self.marked:
                raise PosetError(f"extremal element {p!r} must be marked")
        for a, va in self.marked.items():
            for b in self._above[a]:
                if b in self.marked and self.marked[b] < va:
                    raise PosetError(f"marking decreases from {a!r} to {b!r}")

    def _toposort(self) -> list:
        indeg = {p: 0 for p in self.elements}
        for p in self.elements:
            for q in self._up[p]:
                indeg[q] += 1
        ready = [p for p in self.elements if indeg[p] == 0]
        order = []
        while ready:
            p = ready.pop(0)
            order.append(p)
            for q in sorted(self._up[p], key=self.elements.index):
                indeg[q] -= 1
                if indeg[q] == 0:
                    ready.append(q)
        if len(order) != len(self.elements):
            raise PosetError("cover relations contain a cycle")
        return order

    def _closure(self) -> dict:
        above = {p: set() for p in self.elements}
        for p in reversed(self._topo):
            for q in self._up[p]:
                above[p].add(q)
                above[p] |= above[q]
        return above

    # -- queries --

    @property
    def unmarked(self) -> tuple:
        return tuple(p for p in self.elements if p not in self.marked)

    @property
    def dim(self) -> int:
        return len(self.unmarked)

    def coord(self, p) -> int:
        return self.unmarked.index(p)

    def less(self, p, q) -> bool:
        return q in self._above[p]

    def lower_covers(self, p) -> list:
        return list(self._lower[p])

    def upper_covers(self, p) -> list:
        return list(self._upper[p])

    def with_marking(self, marked: Mapping) -> "MarkedPoset":
        return MarkedPoset(self.elements, self.covers, marked)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MarkedPoset):
            return NotImplemented
        return (self.elements, self.covers, self.marked) == (other.elements, other.covers, other.marked)

    def __repr__(self) -> str:
        return f"MarkedPoset({len(self.elements)} elements, {len(self.marked)} marked)"


# --- purity and ranks ------------------------------------------------------------


def _chain_lengths(mp: MarkedPoset) -> tuple[dict, dict]:
    longest, shortest = {}, {}
    for p in mp._topo:
        low = mp._lower[p]
        if not low:
            longest[p] = shortest[p] = 0
        else:
            longest[p] = 1 + max(longest[q] for q in low)
            shortest[p] = 1 + min(shortest[q] for q in low)
    return longest, shortest


def is_pure(mp: MarkedPoset) -> bool:
    """Whether all maximal chains have the same length."""
    longest, shortest = _chain_lengths(mp)
    if any(longest[p] != shortest[p] for p in mp.elements):
        return False
    tops = {longest[p] for p in mp.elements if not mp._upper[p]}
    return len(tops) <= 1


def rank(mp: MarkedPoset) -> dict:
    """Length of the chains from a minimal element up to each element (pure posets only)."""
    if not is_pure(mp):
        raise NotPure("rank is defined only for pure posets")
    return _chain_lengths(mp)[0]


# --- polytopes ---------------------------------------------------------------------


def _term(mp: MarkedPoset, p, coef: int, vec: list, const: list) -> None:
    if p in mp.marked:
        const[0] -= coef * mp.marked[p]
    else:
        vec[mp.coord(p)] += coef


def chain_order_inequalities(mp: MarkedPoset, pi_prime: Iterable = ()) -> list[tuple]:
    """Half-spaces of the intermediate polytope for ``pi_prime``.

    ``x_p >= 0`` on ``pi_prime``, and for every saturated chain
    ``a < p_1 < ... < p_k < b`` with all ``p_i`` in ``pi_prime`` and ``a, b``
    outside it (``k >= 0``): ``sum x_{p_i} <= y_b - y_a``.  Non-saturated
    chains are implied by these.
    """
    pi = set(pi_prime)
    if not pi <= set(mp.unmarked):
        raise PosetError("pi_prime must consist of unmarked elements")
    n = mp.dim
    out = set()
    for p in pi:
        vec = [0] * n
        vec[mp.coord(p)] = -1
        out.add((tuple(vec), Fraction(0)))

    def walk(a, current, chain):
        for q in mp._upper[current]:
            if q in pi:
                walk(a, q, chain + [q])
                continue
            if a in mp.marked and q in mp.marked and not chain:
                continue
            vec = [0] * n
            const = [0]
            for p in chain:
                vec[mp.coord(p)] += 1
            # sum x_p + y_a - y_b <= 0
            _term(mp, a, 1, vec, const)
            _term(mp, q, -1, vec, const)
            if any(vec):
                out.add((tuple(vec), Fraction(const[0])))
            elif const[0] < 0:
                raise PosetError("inconsistent marking")

    for a in mp.elements:
        if a not in pi:
            walk(a, a, [])
    return sorted(out)


def chain_order_polytope(mp: MarkedPoset, pi_prime: Iterable = ()) -> RationalPolytope:
    hs = chain_order_inequalities(mp, pi_prime)
    if mp.dim == 0:
        return hull([()])
    return from_halfspaces(hs, mp.dim)


def order_polytope(mp: MarkedPoset) -> RationalPolytope:
    return chain_order_polytope(mp, ())


def chain_polytope(mp: MarkedPoset) -> RationalPolytope:
    return chain_order_polytope(mp, mp.unmarked)


def transfer(mp: MarkedPoset, pi_prime: Iterable, x: Sequence) -> tuple:
    """Piecewise-affine transfer map restricted to ``pi_prime``."""
    pi = set(pi_prime)
    x = as_fraction_vector(x)
    if len(x) != mp.dim:
        raise PosetError("point dimension does not match the poset")
    out = list(x)
    for p in mp.unmarked:
        if p not in pi:
            continue
        xp = x[mp.coord(p)]
        vals = [xp - (mp.marked[q] if q in mp.marked else x[mp.coord(q)]) for q in mp._lower[p]]
        out[mp.coord(p)] = min(vals)
    return tuple(out)


def full_transfer(mp: MarkedPoset, x: Sequence) -> tuple:
    return transfer(mp, mp.unmarked, x)


# --- admissible points -----------------------------------------------------------


def is_admissible(mp: MarkedPoset, u: Sequence) -> bool:
    """Lattice point of the order polytope that is constant on ranks and matches markers."""
    r = rank(mp)
    u = as_fraction_vector(u)
    if any(x.denominator != 1 for x in u):
        return False
    values: dict = {}
    for p in mp.elements:
        v = mp.marked[p] if p in mp.marked else u[mp.coord(p)]
        if values.setdefault(r[p], v) != v:
            return False
    return order_polytope(mp).contains(u)


def admissible_u(mp: MarkedPoset) -> tuple:
    """A deterministic admissible point.

    Marker ranks fix their values; between consecutive marker ranks ``r0 < r1``
    the value at rank ``r`` is ``v0 + floor((r - r0)(v1 - v0) / (r1 - r0))``.
    For the marking by ranks this is the point ``(r(p))_p``.
    """
    r = rank(mp)
    fixed: dict = {}
    for a, v in mp.marked.items():
        if fixed.setdefault(r[a], v) != v:
            raise AssumptionViolated(f"markers of rank {r[a]} carry different values")
    ranks = sorted(fixed)
    value = dict(fixed)
    for r0, r1 in zip(ranks, ranks[1:]):
        v0, v1 = fixed[r0], fixed[r1]
        for k in range(r0 + 1, r1):
            value[k] = v0 + ((k - r0) * (v1 - v0)) // (r1 - r0)
    try:
        u = tuple(value[r[p]] for p in mp.unmarked)
    except KeyError as exc:
        raise AssumptionViolated("an unmarked rank lies outside the marked ranks") from exc
    if not is_admissible(mp, u):
        raise AssumptionViolated(f"rank-constant point {u} is not in the order polytope")
    return u


# --- factorization ---------------------------------------------------------------


def shear_datum(mp: MarkedPoset, q) -> MutationDatum:
    """``w = -e_q`` and ``F = conv(-e_p for unmarked lower covers, plus 0 if a marked one)``."""
    n = mp.dim
    cq = mp.coord(q)
    w = tuple(-1 if i == cq else 0 for i in range(n))
    pts = []
    for p in mp._lower[q]:
        if p in mp.marked:
            pts.append(tuple(0 for _ in range(n)))
        else:
            cp = mp.coord(p)
            pts.append(tuple(-1 if i == cp else 0 for i in range(n)))
    return MutationDatum(w, hull(pts))


def top_down_order(mp: MarkedPoset) -> list:
    """Unmarked elements by rank descending (element order breaks ties)."""
    r = rank(mp)
    return sorted(mp.unmarked, key=lambda p: (-r[p], mp.elements.index(p)))


@dataclass
class TransferFactorization:
    poset: MarkedPoset
    u: tuple
    order: list
    data: list
    offsets: list = field(default_factory=list)

    @property
    def image_of_u(self) -> tuple:
        return self.offsets[-1] if self.offsets else self.u

    def trace(self) -> MutationTrace:
        """Translate by ``-u`` then shear at each element in order."""
        t = MutationTrace()
        t.append(TraceStep(None, "M", tuple(-x for x in self.u), "translate by -u"))
        for q, d in zip(self.order, self.data):
            t.append(TraceStep(d, "M", None, f"shear at {q}"))
        return t


def transfer_factorization(mp: MarkedPoset, u: Sequence | None = None) -> TransferFactorization:
    """Shears whose composite turns ``O - u`` into ``C - transfer(u)``."""
    if not is_pure(mp):
        raise NotPure("factorization needs a pure poset")
    if u is None:
        u = admissible_u(mp)
    u = tuple(int(x) for x in u)
    if not is_admissible(mp, u):
        raise AssumptionViolated(f"{u} is not an admissible point")
    order = top_down_order(mp)
    data = [shear_datum(mp, q) for q in order]
    offsets = [transfer(mp, order[: i + 1], u) for i in range(len(order))]
    return TransferFactorization(mp, u, order, data, offsets)


@dataclass
class StepCheck:
    index: int
    element: object
    matches: bool
    lattice: bool
    polytope: RationalPolytope


def run_factorization(fact: TransferFactorization) -> tuple[RationalPolytope, list[StepCheck]]:
    """Apply the steps to ``O - u`` and compare each image with the shifted intermediate polytope."""
    mp = fact.poset
    Q = translate(order_polytope(mp), [-x for x in fact.u])
    checks = []
    steps = fact.trace().steps[1:]
    for i, step in enumerate(steps):
        Q = apply_step(Q, step)
        expected = translate(chain_order_polytope(mp, fact.order[: i + 1]), [-x for x in fact.offsets[i]])
        checks.append(StepCheck(i + 1, fact.order[i], Q == expected, Q.is_lattice, Q))
    return Q, checks


# --- counter-example -------------------------------------------------------------


def counterexample_poset(lam: Sequence[int] = (0, 1, 2, 3)) -> MarkedPoset:
    """Pure poset on ``x, y, z`` with four markers where the rank hypothesis fails when ``l2 != l3``."""
    l1, l2, l3, l4 = lam
    covers = [
        ("l1", "z"),
        ("l1", "l2"),
        ("l1", "l3"),
        ("l2", "x"),
        ("z", "x"),
        ("z", "y"),
        ("l3", "y"),
        ("x", "l4"),
        ("y", "l4"),
    ]
    return MarkedPoset(("x", "y", "z", "l1", "l2", "l3", "l4"), covers, {"l1": l1, "l2": l2, "l3": l3, "l4": l4})


def counterexample_branches(lam: Sequence[int]) -> list:
    """The three affine pieces of the transfer map (valid when ``l2 < l3``), with their regions."""
    l1, l2, l3, _ = lam
    return [
        (lambda z: z >= l3, lambda x, y, z: (x - z, y - z, z - l1)),
        (lambda z: l2 <= z <= l3, lambda x, y, z: (x - z, y - l3, z - l1)),
        (lambda z: z <= l2, lambda x, y, z: (x - l2, y - l3, z - l1)),
    ]


def _affine_parts(fn) -> tuple[list, list]:
    """Matrix (acting on column vectors) and constant of an affine map on R^3."""
    c = [Fraction(v) for v in fn(0, 0, 0)]
    cols = []
    for j in range(3):
        e = [0, 0, 0]
        e[j] = 1
        cols.append([Fraction(v) - cc for v, cc in zip(fn(*e), c)])
    return [[cols[j][i] for j in range(3)] for i in range(3)], c


@dataclass
class CounterexampleReport:
    marking: tuple
    branch_mismatches: list
    samples: int
    coefficient_rank: int
    augmented_rank: int

    @property
    def inconsistent(self) -> bool:
        return self.augmented_rank > self.coefficient_rank

    @property
    def passed(self) -> bool:
        return not self.branch_mismatches and self.inconsistent


def counterexample_witness(lam: Sequence[int] = (0, 1, 2, 3), samples: int = 100, seed: int = 0) -> CounterexampleReport:
    """Check the three branches against the transfer map and certify that no translation linearizes them.

    Translating the source by ``t`` and the target by ``s`` makes branch ``i``
    linear iff ``A_i t - s = -c_i``.  The three systems together are shown
    inconsistent by comparing ranks of the coefficient and augmented matrices.
    """
    import random

    lam = tuple(int(v) for v in lam)
    if not (lam[0] <= lam[1] < lam[2] <= lam[3]):
        raise ValueError("the witness needs l1 <= l2 < l3 <= l4")
    mp = counterexample_poset(lam)
    branches = counterexample_branches(lam)
    rng = random.Random(seed)
    mismatches = []
    span = lam[3] - lam[0] + 2
    for _ in range(samples):
        pt = tuple(Fraction(rng.randint(-8 * span, 8 * span), rng.randint(1, 8)) for _ in range(3))
        got = transfer(mp, mp.unmarked, pt)
        for region, fn in branches:
            if region(pt[2]) and tuple(fn(*pt)) != got:
                mismatches.append((pt, got, tuple(fn(*pt))))
    rows, aug = [], []
    for _, fn in branches:
        a, c = _affine_parts(fn)
        for i in range(3):
            row = a[i] + [Fraction(-1 if j == i else 0) for j in range(3)]
            rows.append(row)
            aug.append(row + [-c[i]])
    return CounterexampleReport(lam, mismatches, samples, matrix_rank(rows), matrix_rank(aug))


# --- JSON --------------------------------------------------------------------


def poset_to_json_obj(mp: MarkedPoset) -> dict:
    return {
        "elements": list(mp.elements),
        "covers": [list(c) for c in mp.covers],
        "marked": {str(k): v for k, v in sorted(mp.marked.items(), key=lambda kv: mp.elements.index(kv[0]))},
    }


def poset_from_json_obj(obj: dict) -> MarkedPoset:
    # JSON object keys are strings even when element labels are not
    by_name = {str(e): e for e in obj["elements"]}
    marked = {by_name.get(str(k), k): v for k, v in obj["marked"].items()}
    return MarkedPoset(obj["elements"], [tuple(c) for c in obj["covers"]], marked)


def dumps(mp: MarkedPoset) -> str:
    return json.dumps(poset_to_json_obj(mp))


def loads(text: str) -> MarkedPoset:
    return poset_from_json_obj(json.loads(text))
