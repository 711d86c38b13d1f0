"""The two qualification conditions gating intersection/sum/chain rules.

For polyhedral data both checks are exact.

The limiting qualification condition relative to {C1, C2} reduces to a cone
intersection: the achievable limits of relative Fréchet normals along
sequences in Omega_i cap C_i are exactly the relative limiting cones, and a
vanishing-sum pair of sequences converges to some (v, -v); so the condition
holds iff N_{C1}(x, Omega1) cap [-N_{C2}(x, Omega2)] = {0}.

Normal-densedness quantifies over limits of classical normals plus a radial
direction taken along Omega cap bd C.  Over each adherent sign cell the
radial cone of C is constant, hence the achievable radial limits form the
finite union L of those cones, and the premise pairs are exactly
{(v1, v2) in N(x,Omega1 cap C1) x N(x,Omega2 cap C2) : v1 + v2 in L}.  The
conclusion asks for a re-representation of the sum inside the relative
limiting cones, plus a nonzero re-representation when the pair is nonzero
with zero sum; both are Minkowski/intersection computations on cone unions.
"""

from __future__ import annotations

from .cones import limiting_normal, limiting_normal_wrt
from .exactgeom import ConeUnion, ConvexPoly, PolySet
from .linalg import Vec, dot, zero
from .stratify import local_cells
from .verdicts import TriVerdict


def _require_membership(sets: list[tuple[str, PolySet | ConvexPoly]], x: Vec):
    for name, s in sets:
        if not s.contains(x):
            raise ValueError(f"base point outside {name}")


def lqc_wrt_check(
    omega1: PolySet,
    omega2: PolySet,
    c1: ConvexPoly,
    c2: ConvexPoly,
    x: Vec,
) -> TriVerdict:
    """Limiting qualification condition relative to {c1, c2} at x."""
    _require_membership(
        [("omega1", omega1), ("omega2", omega2), ("c1", c1), ("c2", c2)], x
    )
    n1 = limiting_normal_wrt(omega1, c1, x)
    n2 = limiting_normal_wrt(omega2, c2, x)
    overlap = n1.intersect(n2.negate())
    if overlap.is_zero_cone():
        return TriVerdict.holds()
    v = overlap.nonzero_vector()
    return TriVerdict.fails({"vector": v})


def boundary_radial_limit(
    omega1: PolySet, omega2: PolySet, c: ConvexPoly, x: Vec
) -> ConeUnion:
    """Outer limit of radial cones of c along Omega1 cap Omega2 cap bd c at x.

    Empty union when no sequence of that kind approaches x (in particular
    when x is interior to c), which makes the normal-densedness premise
    vacuous.
    """
    from .cones import radial_cone

    lower_dimensional = bool(c.eqs)
    cells = local_cells([omega1, omega2, c], x)
    parts = []
    for cell in cells:
        w = cell.witness
        on_boundary = lower_dimensional or any(
            dot(a, w) == b for a, b in c.ineqs
        )
        if on_boundary:
            parts.append(radial_cone(c, w))
    return ConeUnion.make(c.dim, parts)


def normal_densed_check(
    omega1: PolySet,
    omega2: PolySet,
    c1: ConvexPoly,
    c2: ConvexPoly,
    x: Vec,
) -> TriVerdict:
    """Are {omega1, omega2} normal-densed in {c1, c2} at x (exact test)."""
    _require_membership(
        [("omega1", omega1), ("omega2", omega2), ("c1", c1), ("c2", c2)], x
    )
    c = c1.intersect(c2)
    limit_radial = boundary_radial_limit(omega1, omega2, c, x)
    if limit_radial.is_empty():
        return TriVerdict.holds({"reason": "no boundary approach"})

    n_cl_1 = limiting_normal(omega1.intersect_poly(c1), x)
    n_cl_2 = limiting_normal(omega2.intersect_poly(c2), x)
    n_wrt_1 = limiting_normal_wrt(omega1, c1, x)
    n_wrt_2 = limiting_normal_wrt(omega2, c2, x)

    achievable = n_cl_1.minkowski(n_cl_2).intersect(limit_radial)
    representable = n_wrt_1.minkowski(n_wrt_2)
    ok, witness = achievable.subset_of(representable)
    if not ok:
        return TriVerdict.fails({"sum": witness})

    # zero sums of nonzero pairs need a nonzero re-representation
    opposite_cl = n_cl_1.intersect(n_cl_2.negate())
    if not opposite_cl.is_zero_cone():
        opposite_wrt = n_wrt_1.intersect(n_wrt_2.negate())
        if opposite_wrt.is_zero_cone():
            return TriVerdict.fails(
                {"sum": zero(len(x)), "pair": opposite_cl.nonzero_vector()}
            )
    return TriVerdict.holds()
