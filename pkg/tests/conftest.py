"""Shared fixtures: the worked three-dimensional example and seeded generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from polyvar.exactgeom import ConeH, ConeUnion, ConvexPoly, PolySet
from polyvar.linalg import Vec, vec


@dataclass(frozen=True)
class Example1:
    """The running 3-d instance: a halfspace tilted against an orthant.

    omega1 = {(x,y,z): z >= x}, omega2 = R^2_+ x R, c_full = R^3,
    c = R_+ x R^2.  All the hand-computed cone tables in the tests below
    refer to these sets at points near the origin.
    """

    omega1: PolySet
    omega2: PolySet
    c: ConvexPoly
    c_full: ConvexPoly
    origin: Vec


def make_example1() -> Example1:
    omega1 = PolySet.from_poly(ConvexPoly.make(3, [(vec(1, 0, -1), Fraction(0))]))
    omega2 = PolySet.from_poly(
        ConvexPoly.make(3, [(vec(-1, 0, 0), Fraction(0)), (vec(0, -1, 0), Fraction(0))])
    )
    c = ConvexPoly.make(3, [(vec(-1, 0, 0), Fraction(0))])
    return Example1(omega1, omega2, c, ConvexPoly.whole_space(3), vec(0, 0, 0))


def cone3(ineqs=(), eqs=()) -> ConeH:
    return ConeH.from_ineqs(3, ineqs, eqs)


def rng_vec(rng: random.Random, dim: int, lo: int = -3, hi: int = 3) -> Vec:
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(dim))


def random_cone(rng: random.Random, dim: int, max_rows: int = 3) -> ConeH:
    rows = []
    for _ in range(rng.randint(0, max_rows)):
        v = rng_vec(rng, dim)
        if any(x != 0 for x in v):
            rows.append(v)
    return ConeH.from_ineqs(dim, rows)


def random_cone_union(
    rng: random.Random, dim: int, max_parts: int = 3
) -> ConeUnion:
    return ConeUnion.make(
        dim, [random_cone(rng, dim) for _ in range(rng.randint(1, max_parts))]
    )


def random_poly_through(
    rng: random.Random, dim: int, point: Vec, max_rows: int = 3
) -> ConvexPoly:
    """A nonempty polyhedron containing `point`, rows touching it or slack."""
    ineqs = []
    for _ in range(rng.randint(0, max_rows)):
        a = rng_vec(rng, dim)
        if all(x == 0 for x in a):
            continue
        margin = Fraction(rng.choice([0, 0, 1, 2]))
        b = sum(x * y for x, y in zip(a, point)) + margin
        ineqs.append((a, b))
    return ConvexPoly.make(dim, ineqs)


def random_polyset_through(
    rng: random.Random, dim: int, point: Vec, max_pieces: int = 3
) -> PolySet:
    pieces = [
        random_poly_through(rng, dim, point)
        for _ in range(rng.randint(1, max_pieces))
    ]
    return PolySet.make(dim, pieces)


def random_multimap_through(
    rng: random.Random,
    n: int,
    m: int,
    x: Vec,
    y: Vec,
    max_pieces: int = 2,
    max_rows: int = 3,
) -> "PolyMultimap":
    """A multimap whose graph contains (x, y)."""
    from polyvar.multimaps import PolyMultimap

    graph = random_polyset_through(rng, n + m, x + y, max_pieces)
    return PolyMultimap(n, m, graph)


def random_linear_map(rng: random.Random, n: int, m: int) -> "PolyMultimap":
    from polyvar.multimaps import PolyMultimap

    matrix = tuple(rng_vec(rng, n, -2, 2) for _ in range(m))
    return PolyMultimap.linear(matrix, n, m)


def random_plfunc(rng: random.Random, dim: int, max_terms: int = 3) -> "PLFunc":
    """A piecewise-linear function finite at the origin with f(0) = 0."""
    from polyvar.plfunc import PLFunc

    terms = [
        (rng_vec(rng, dim, -2, 2), Fraction(0))
        for _ in range(rng.randint(1, max_terms))
    ]
    return PLFunc.max_affine(dim, terms)
