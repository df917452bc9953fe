"""Rational polyhedral cones: double description and Hilbert bases.

A cone is given either by generators or by inequalities ``c . x >= 0``.
All arithmetic is on integer vectors that are kept primitive.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .intlat import (
    Sublattice,
    Vector,
    det,
    dot,
    integer_inverse,
    kernel_basis,
    matvec,
    primitive,
    rational_inverse,
    smith_normal_form,
    vecmat,
)


def double_description(constraints: Sequence[Sequence[int]], dim: int) -> tuple[list[Vector], list[Vector]]:
    """Lineality basis and extreme rays of ``{x : c . x >= 0 for every c}``.

    Constraints are added one at a time to the description of ``R^dim``.
    Rays are primitive integer vectors; adjacency uses the combinatorial
    test on zero sets, which is exact for a minimal ray set.
    """
    lin: list[Vector] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[Vector] = []
    seen: list[Vector] = []

    def zero_set(r: Vector) -> frozenset[int]:
        return frozenset(k for k, c in enumerate(seen) if dot(c, r) == 0)

    for c in constraints:
        c = tuple(c)
        seen.append(c)
        pivot = next((i for i, l in enumerate(lin) if dot(c, l) != 0), None)
        if pivot is not None:
            l0 = lin.pop(pivot)
            s = dot(c, l0)
            if s < 0:
                l0, s = tuple(-x for x in l0), -s
            lin = [primitive(tuple(s * a - dot(c, l) * b for a, b in zip(l, l0))) for l in lin]
            rays = [primitive(tuple(s * a - dot(c, r) * b for a, b in zip(r, l0))) for r in rays]
            rays.append(primitive(l0))
            continue
        pos = [r for r in rays if dot(c, r) > 0]
        neg = [r for r in rays if dot(c, r) < 0]
        new = [r for r in rays if dot(c, r) >= 0]
        if neg:
            zs = {r: zero_set(r) for r in rays}
            for p in pos:
                for n in neg:
                    common = zs[p] & zs[n]
                    if any(common <= zs[r] for r in rays if r != p and r != n):
                        continue
                    cp, cn = dot(c, p), dot(c, n)
                    w = primitive(tuple(cp * a - cn * b for a, b in zip(n, p)))
                    if any(w) and w not in new:
                        new.append(w)
        rays = new
    return lin, rays


def facets_of(generators: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """Primitive inner facet normals of the cone spanned by ``generators``.

    The cone must be full dimensional.  An empty list means the cone is the
    whole space.
    """
    lin, rays = double_description(generators, dim)
    if lin:
        raise ValueError("generators do not span a full dimensional cone")
    return sorted(rays)


def in_cone(inequalities: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    return all(dot(c, x) >= 0 for c in inequalities)


def _parallelepiped_points(rows: Sequence[Vector]) -> list[Vector]:
    """Lattice points of the half-open parallelepiped spanned by independent ``rows``."""
    n = len(rows)
    inv = rational_inverse(rows)
    out = []
    for c in Sublattice.span(rows, n).cosets():
        lam = [sum(Fraction(c[i]) * inv[i][j] for i in range(n)) for j in range(n)]
        frac = [x - (x.numerator // x.denominator) for x in lam]
        p = [sum(frac[j] * rows[j][k] for j in range(n)) for k in range(n)]
        out.append(tuple(int(x) for x in p))
    return out


def _pointed_hilbert_basis(inequalities: Sequence[Vector], dim: int) -> list[Vector]:
    if dim == 0:
        return []
    lin, rays = double_description(inequalities, dim)
    assert not lin, "cone expected to be pointed"
    candidates = set(rays)
    for sub in combinations(rays, dim):
        if det(sub) != 0:
            candidates.update(_parallelepiped_points(sub))
    candidates.discard((0,) * dim)
    irreducible = []
    for x in candidates:
        if not any(y != x and in_cone(inequalities, tuple(a - b for a, b in zip(x, y)))
                   for y in candidates):
            irreducible.append(x)
    return sorted(irreducible)


def hilbert_basis(inequalities: Sequence[Sequence[int]], dim: int) -> tuple[list[Vector], list[Vector]]:
    """Minimal generators of ``{x in Z^dim : c . x >= 0}``.

    Returns ``(lineality, pointed)``: a lattice basis of the unit group
    (to be used with both signs) and the Hilbert basis of the pointed part,
    lifted back to ``Z^dim``.
    """
    ineqs = [tuple(c) for c in inequalities if any(c)]
    if not ineqs:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)], []
    lin = kernel_basis(ineqs, dim)
    k = len(lin)
    if k == 0:
        return [], _pointed_hilbert_basis(ineqs, dim)
    # complete the saturated lineality lattice to a unimodular basis w
    _, _, v = smith_normal_form(lin)
    w = integer_inverse(v)
    reduced = [tuple(matvec(w, c))[k:] for c in ineqs]
    pointed = _pointed_hilbert_basis(reduced, dim - k)
    lifted = [vecmat(h, w[k:]) for h in pointed]
    return [tuple(r) for r in w[:k]], sorted(lifted)


def extreme_rays(generators: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """Primitive extreme rays of a pointed full dimensional cone given by generators."""
    normals = facets_of(generators, dim)
    _, rays = double_description(normals, dim)
    return sorted(rays)
