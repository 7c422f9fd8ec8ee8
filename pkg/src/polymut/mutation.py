"""Combinatorial mutations on both sides of the duality.

On the vertex side (``N``) a mutation rebuilds a lattice polytope level by
level along a primitive covector ``w``; on the dual side (``M``) it is the
piecewise-linear shear ``u -> u - u_min w`` with ``u_min = min <u, F>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    as_fraction_vector,
    dot,
    format_rational,
    integer_inverse,
    is_unimodular,
    parse_rational,
    vec_mat,
    vector_gcd,
)
from .polytope import (
    PolytopeError,
    RationalPolytope,
    apply_affine,
    dilate,
    from_json_obj,
    hull,
    intersect,
    lattice_points,
    minkowski_sum,
    polar,
    projected_volume,
    slice_polytope,
    to_json_obj,
    translate,
    _affine_coordinates,
)


class NotWellDefined(PolytopeError):
    """No admissible ``G_h`` exists at some negative level."""

    def __init__(self, level: int, vertex: tuple):
        super().__init__(f"vertex {tuple(format_rational(x) for x in vertex)} at level {level} is not covered")
        self.level = level
        self.vertex = vertex


class NonConvexImage(PolytopeError):
    """The piecewise-linear image is not convex."""

    def __init__(self, defect: Fraction, reason: str = ""):
        msg = reason or f"cell images miss volume {format_rational(defect)} of their hull"
        super().__init__(msg)
        self.defect = defect
        self.reason = reason


@dataclass(frozen=True)
class MutationDatum:
    """Primitive covector ``w``, factor ``F`` in ``w``-perp, optional unimodular ``f``."""

    w: tuple
    F: RationalPolytope
    f: tuple | None = None

    def __post_init__(self):
        w = tuple(int(x) for x in self.w)
        object.__setattr__(self, "w", w)
        if vector_gcd(w) != 1:
            raise ValueError(f"w = {w} is not primitive")
        if self.F.dim != len(w):
            raise ValueError("factor dimension does not match w")
        if not self.F.is_lattice or self.F.is_empty:
            raise ValueError("factor must be a nonempty lattice polytope")
        if any(dot(w, v) != 0 for v in self.F.vertices):
            raise ValueError("factor does not lie in the orthogonal complement of w")
        if self.f is not None:
            f = tuple(tuple(int(x) for x in row) for row in self.f)
            if not is_unimodular(f):
                raise ValueError("companion matrix is not unimodular")
            object.__setattr__(self, "f", f)

    @property
    def dim(self) -> int:
        return len(self.w)

    @property
    def trivial_factor(self) -> bool:
        return self.F.vertices == (tuple(Fraction(0) for _ in self.w),)

    def negated(self) -> "MutationDatum":
        return MutationDatum(tuple(-x for x in self.w), self.F, None)


def identity_datum(dim: int, f: Sequence[Sequence[int]] | None = None) -> MutationDatum:
    """Datum whose shear is the identity; carries only the linear map ``f``."""
    w = tuple(1 if i == 0 else 0 for i in range(dim))
    return MutationDatum(w, hull([tuple(0 for _ in range(dim))]), None if f is None else tuple(map(tuple, f)))


# --- M side ------------------------------------------------------------------


def phi_point(d: MutationDatum, u: Sequence) -> tuple:
    u = as_fraction_vector(u)
    u_min = min(dot(u, v) for v in d.F.vertices)
    return tuple(x - u_min * y for x, y in zip(u, d.w))


def phi_inverse_point(d: MutationDatum, u: Sequence) -> tuple:
    return phi_point(d.negated(), u)


def _shear_matrix(w: Sequence[int], v: Sequence) -> list[list]:
    """Matrix of ``u -> u - <u, v> w`` acting on row vectors."""
    n = len(w)
    return [[(1 if i == j else 0) - v[i] * w[j] for j in range(n)] for i in range(n)]


def phi_cells(d: MutationDatum, Q: RationalPolytope) -> list[tuple[tuple, RationalPolytope]]:
    """Pieces of ``Q`` on which ``u_min`` is attained at a fixed vertex of ``F``.

    Only pieces of full relative dimension are returned; they cover ``Q``.
    When ``Q`` sits inside a tie hyperplane several vertices give the same
    piece, and the shear agrees there, so only the first is kept.
    """
    verts = d.F.vertices
    out = []
    for v in verts:
        cuts = [(tuple(a - b for a, b in zip(v, other)), 0) for other in verts if other != v]
        cell = intersect(Q, cuts) if cuts else Q
        if not cell.is_empty and cell.intrinsic_dim == Q.intrinsic_dim:
            if all(cell != seen for _, seen in out):
                out.append((v, cell))
    return out


def phi_polytope(d: MutationDatum, Q: RationalPolytope) -> RationalPolytope:
    """Image of ``Q`` under the shear, certified convex by exact volume bookkeeping.

    Raises :class:`NonConvexImage` when the image is not convex.
    """
    if Q.dim != d.dim:
        raise PolytopeError("dimension mismatch between polytope and datum")
    if Q.is_empty or d.trivial_factor:
        return Q
    images = [apply_affine(cell, _shear_matrix(d.w, v)) for v, cell in phi_cells(d, Q)]
    if len(images) == 1:
        return images[0]
    result = hull([x for img in images for x in img.vertices])
    if result.intrinsic_dim != Q.intrinsic_dim:
        raise NonConvexImage(Fraction(0), "image is bent out of an affine subspace of the right dimension")
    coords = _affine_coordinates(result)
    total = sum((projected_volume(img, coords) for img in images), Fraction(0))
    whole = projected_volume(result, coords)
    if total != whole:
        raise NonConvexImage(whole - total)
    return result


def phi_is_convex(d: MutationDatum, Q: RationalPolytope) -> bool:
    try:
        phi_polytope(d, Q)
    except NonConvexImage:
        return False
    return True


# --- N side --------------------------------------------------------------------


def _levels(P: RationalPolytope, w: Sequence[int]) -> range:
    vals = [dot(w, v) for v in P.vertices]
    return range(math.ceil(min(vals)), math.floor(max(vals)) + 1)


def maximal_witness(P: RationalPolytope, d: MutationDatum, h: int) -> RationalPolytope | None:
    """Largest lattice polytope ``G`` in level ``h`` with ``G + |h|F`` inside the slice."""
    piece = slice_polytope(P, d.w, h)
    if piece.is_empty:
        return None
    scale = abs(h)
    cuts = [(a, b - scale * dot(a, f)) for a, b in piece.halfspaces for f in d.F.vertices]
    eroded = intersect(piece, cuts)
    if eroded.is_empty:
        return None
    pts = lattice_points(eroded)
    return hull(pts) if pts else None


def mutate_N(P: RationalPolytope, d: MutationDatum) -> RationalPolytope:
    """Combinatorial mutation of a lattice polytope, using the maximal witnesses.

    Any admissible witness is contained in the maximal one, so failure of the
    maximal choice proves that the mutation is not well defined.
    """
    if not P.is_lattice:
        raise PolytopeError("mutation on the vertex side needs a lattice polytope")
    if P.dim != d.dim:
        raise PolytopeError("dimension mismatch between polytope and datum")
    if d.trivial_factor or P.is_empty:
        return P
    points: list[tuple] = []
    for h in _levels(P, d.w):
        level_vertices = [v for v in P.vertices if dot(d.w, v) == h]
        if h < 0:
            G = maximal_witness(P, d, h)
            if G is None:
                if level_vertices:
                    raise NotWellDefined(h, level_vertices[0])
                continue
            covered = minkowski_sum(G, dilate(d.F, -h))
            for v in level_vertices:
                if not covered.contains(v):
                    raise NotWellDefined(h, v)
            points.extend(G.vertices)
        else:
            piece = slice_polytope(P, d.w, h)
            if piece.is_empty:
                continue
            grown = piece if h == 0 else minkowski_sum(piece, dilate(d.F, h))
            points.extend(grown.vertices)
    return hull(points)


def duality_check(P: RationalPolytope, d: MutationDatum) -> bool:
    """Whether shearing the polar of ``P`` gives the polar of the mutation of ``P``."""
    return phi_polytope(d, polar(P)) == polar(mutate_N(P, d))


# --- traces --------------------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    """One step: mutation (or identity), then the datum's ``f``, then ``+ translate``.

    ``side`` is ``"M"`` (shear), ``"N"`` (vertex-side mutation) or ``"dual"``
    (replace ``Q`` by the polar of ``Q - translate``; no datum).
    """

    datum: MutationDatum | None
    side: str = "M"
    translate: tuple | None = None
    note: str = ""

    def __post_init__(self):
        if self.side not in ("M", "N", "dual"):
            raise ValueError(f"unknown side {self.side!r}")
        if self.side == "dual" and self.datum is not None:
            raise ValueError("duality steps carry no datum")
        if self.translate is not None:
            object.__setattr__(self, "translate", as_fraction_vector(self.translate))


@dataclass
class MutationTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def append(self, step: TraceStep) -> None:
        self.steps.append(step)


class TraceError(PolytopeError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"step {index} failed: {type(cause).__name__}: {cause}")
        self.index = index
        self.cause = cause


def apply_step(Q: RationalPolytope, step: TraceStep) -> RationalPolytope:
    if step.side == "dual":
        if step.translate is not None:
            Q = translate(Q, [-x for x in step.translate])
        return polar(Q)
    if step.datum is not None:
        Q = phi_polytope(step.datum, Q) if step.side == "M" else mutate_N(Q, step.datum)
        if step.datum.f is not None:
            Q = apply_affine(Q, step.datum.f)
    if step.translate is not None:
        Q = translate(Q, step.translate)
    return Q


def apply_trace(Q: RationalPolytope, trace: MutationTrace | Sequence[TraceStep]) -> RationalPolytope:
    """Apply the steps left to right, failing fast with the step index."""
    steps = trace.steps if isinstance(trace, MutationTrace) else trace
    for i, step in enumerate(steps):
        try:
            Q = apply_step(Q, step)
        except PolytopeError as exc:
            raise TraceError(i, exc) from exc
    return Q


def apply_trace_to_point(u: Sequence, trace: MutationTrace | Sequence[TraceStep]) -> tuple:
    """Image of a point under the M-side steps of a trace."""
    steps = trace.steps if isinstance(trace, MutationTrace) else trace
    u = as_fraction_vector(u)
    for step in steps:
        if step.side != "M":
            raise ValueError("point images are defined for M-side steps only")
        if step.datum is not None:
            u = phi_point(step.datum, u)
            if step.datum.f is not None:
                u = vec_mat(u, step.datum.f)
        if step.translate is not None:
            u = tuple(a + b for a, b in zip(u, step.translate))
    return u


def invert_trace(trace: MutationTrace | Sequence[TraceStep]) -> MutationTrace:
    """Inverse of a trace of M- or N-side steps."""
    steps = trace.steps if isinstance(trace, MutationTrace) else trace
    out = MutationTrace()
    for step in reversed(steps):
        if step.side == "dual":
            raise ValueError("duality steps are not inverted automatically")
        n = step.datum.dim if step.datum is not None else len(step.translate or ())
        t = step.translate
        f = step.datum.f if step.datum is not None else None
        if f is not None:
            finv = integer_inverse(f)
            shift = None if t is None else tuple(-x for x in vec_mat(t, finv))
            out.append(TraceStep(identity_datum(n, finv), step.side, shift, f"undo linear part of: {step.note}"))
        elif t is not None:
            out.append(TraceStep(None, step.side, tuple(-x for x in t), f"undo translation of: {step.note}"))
        if step.datum is not None and not step.datum.trivial_factor:
            out.append(TraceStep(step.datum.negated(), step.side, None, f"undo: {step.note}"))
    return out


# --- JSON --------------------------------------------------------------------


def datum_to_json_obj(d: MutationDatum) -> dict:
    return {
        "w": list(d.w),
        "F": to_json_obj(d.F),
        "f": None if d.f is None else [list(r) for r in d.f],
    }


def datum_from_json_obj(obj: dict) -> MutationDatum:
    f = obj.get("f")
    return MutationDatum(
        tuple(int(x) for x in obj["w"]),
        from_json_obj(obj["F"]),
        None if f is None else tuple(tuple(int(x) for x in r) for r in f),
    )


def trace_to_json_obj(trace: MutationTrace | Sequence[TraceStep]) -> list:
    steps = trace.steps if isinstance(trace, MutationTrace) else trace
    return [
        {
            "side": s.side,
            "datum": None if s.datum is None else datum_to_json_obj(s.datum),
            "translate": None if s.translate is None else [format_rational(x) for x in s.translate],
            "note": s.note,
        }
        for s in steps
    ]


def trace_from_json_obj(obj: list) -> MutationTrace:
    out = MutationTrace()
    for s in obj:
        datum = s.get("datum")
        tr = s.get("translate")
        out.append(
            TraceStep(
                None if datum is None else datum_from_json_obj(datum),
                s.get("side", "M"),
                None if tr is None else tuple(parse_rational(x) for x in tr),
                s.get("note", ""),
            )
        )
    return out


__all__ = [
    "MutationDatum",
    "MutationTrace",
    "NonConvexImage",
    "NotWellDefined",
    "TraceError",
    "TraceStep",
    "apply_step",
    "apply_trace",
    "apply_trace_to_point",
    "datum_from_json_obj",
    "datum_to_json_obj",
    "duality_check",
    "identity_datum",
    "invert_trace",
    "maximal_witness",
    "mutate_N",
    "phi_cells",
    "phi_inverse_point",
    "phi_is_convex",
    "phi_point",
    "phi_polytope",
    "trace_from_json_obj",
    "trace_to_json_obj",
]
