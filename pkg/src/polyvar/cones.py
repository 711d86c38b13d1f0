"""Normal cones of polyhedral unions, classically and relative to a convex set.

The three flavors are tied together by two exact facts about polyhedral data:

* at a point of a finite union of closed convex polyhedra, proximal and
  Fréchet normals coincide and equal the intersection, over the pieces
  containing the point, of the polars of the pieces' tangent cones;
* the limiting cone relative to a convex set C is the finite union of the
  Fréchet-relative cones over the sign cells adherent to the base point,
  because those cones are constant on every cell.

The relative ("with respect to C") versions intersect with the radial cone
of C, and use the empty-marker convention when the base point leaves the
reference domain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactgeom import ConeH, ConeUnion, ConvexPoly, PolySet
from .linalg import Vec, dot, sub
from .stratify import local_cells

KIND_PROXIMAL = "proximal"
KIND_FRECHET = "frechet"
KIND_LIMITING = "limiting"


@dataclass(frozen=True)
class ConeRequest:
    """The (Omega, C, point) triple plus the requested cone kind."""

    omega: PolySet
    wrt: ConvexPoly
    point: Vec
    kind: str


def radial_cone(c: ConvexPoly, x: Vec) -> ConeH:
    """Directions d with x + p d in c for some p > 0 (exact for polyhedra)."""
    if not c.contains(x):
        raise ValueError("point outside the set")
    ineqs = [a for a, b in c.ineqs if dot(a, x) == b]
    eqs = [e for e, _ in c.eqs]
    return ConeH.from_ineqs(c.dim, ineqs, eqs)


def _piece_normal_cone(piece: ConvexPoly, x: Vec) -> ConeH:
    # polar of the piece's tangent cone: active inequality normals plus the
    # equality normals as lineality
    rays = [a for a, b in piece.ineqs if dot(a, x) == b]
    lins = [e for e, _ in piece.eqs]
    return ConeH.from_generators(piece.dim, rays, lins)


def frechet_normal(omega: PolySet, x: Vec) -> ConeH:
    """Classical Fréchet normal cone of a union of closed convex polyhedra."""
    active = omega.active_pieces(x)
    if not active:
        raise ValueError("point outside the set")
    cone = ConeH.whole_space(omega.dim)
    for i in active:
        cone = cone.intersect(_piece_normal_cone(omega.pieces[i], x))
    return cone


def frechet_normal_wrt(omega: PolySet, wrt: ConvexPoly, point: Vec) -> ConeH:
    """Fréchet normal cone of omega at the point, relative to the set wrt."""
    request_domain = omega.intersect_poly(wrt)
    if not request_domain.contains(point):
        return ConeH.empty_marker(omega.dim)
    return frechet_normal(request_domain, point).intersect(radial_cone(wrt, point))


def proximal_normal_wrt(
    omega: PolySet, wrt: ConvexPoly, point: Vec, validate: bool = False
) -> ConeH:
    """Proximal normal cone relative to wrt (Euclidean ambient norm).

    For unions of closed convex polyhedra this set coincides with the
    Fréchet-relative cone; `validate` additionally spot-checks the defining
    quadratic inequality on an exact rational sample.
    """
    cone = frechet_normal_wrt(omega, wrt, point)
    if validate and not cone.empty:
        assert _proximal_inequality_holds(omega, wrt, point, cone)
    return cone


def _proximal_inequality_holds(
    omega: PolySet, wrt: ConvexPoly, point: Vec, cone: ConeH
) -> bool:
    # sample Omega cap C on a rational grid around the point and check
    # <x*, x - p> <= (1/2p)|x - p|^2 for a small admissible p
    from fractions import Fraction
    from itertools import product

    dim = omega.dim
    step = Fraction(1, 4)
    offsets = [Fraction(k) * step for k in range(-4, 5)]
    sample = []
    for delta in product(offsets, repeat=dim):
        x = tuple(p + d for p, d in zip(point, delta))
        if omega.contains(x) and wrt.contains(x):
            sample.append(x)
    for xstar in cone.rays + cone.lineality:
        ratio_max = None
        for x in sample:
            d = sub(x, point)
            sq = dot(d, d)
            if sq == 0:
                continue
            r = dot(xstar, d) / sq
            ratio_max = r if ratio_max is None else max(ratio_max, r)
        # radial admissibility: x + p x* in wrt for small p
        p = Fraction(1, 2)
        while p > Fraction(1, 1024) and not wrt.contains(
            tuple(a + p * b for a, b in zip(point, xstar))
        ):
            p /= 2
        if not wrt.contains(tuple(a + p * b for a, b in zip(point, xstar))):
            return False
        if ratio_max is not None and ratio_max > 0:
            needed = 1 / (2 * ratio_max)
            if p > needed:
                p = needed  # shrinking p keeps radial membership (wrt convex)
        if ratio_max is not None and ratio_max > Fraction(1, 2 * p):
            return False
    return True


def limiting_normal_wrt(omega: PolySet, wrt: ConvexPoly, point: Vec) -> ConeUnion:
    """Limiting normal cone relative to wrt: the outer limit over adherent cells."""
    request_domain = omega.intersect_poly(wrt)
    if not request_domain.contains(point):
        return ConeUnion.empty(omega.dim)
    cells = local_cells([omega, wrt], point)
    inter_pieces = request_domain
    parts = []
    for cell in cells:
        x = cell.witness
        part = frechet_normal(inter_pieces, x).intersect(radial_cone(wrt, x))
        parts.append(part)
    return ConeUnion.make(omega.dim, parts)


def limiting_normal(omega: PolySet, point: Vec) -> ConeUnion:
    """Classical limiting normal cone (wrt = the whole space)."""
    return limiting_normal_wrt(omega, ConvexPoly.whole_space(omega.dim), point)


def normal_cone(request: ConeRequest) -> ConeH | ConeUnion:
    """Dispatch on the requested kind; empty marker outside Omega cap C."""
    if request.kind == KIND_FRECHET:
        return frechet_normal_wrt(request.omega, request.wrt, request.point)
    if request.kind == KIND_PROXIMAL:
        return proximal_normal_wrt(request.omega, request.wrt, request.point)
    if request.kind == KIND_LIMITING:
        return limiting_normal_wrt(request.omega, request.wrt, request.point)
    raise ValueError(f"unknown cone kind: {request.kind}")
