"""Finitely generated cancellative abelian monoids embedded in ``Z^r``.

A presented monoid is replaced by its image in the (torsion-free) group of
fractions, so everything downstream works with lattice points: membership,
units, faces of the cone, divisor valuations and normality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import cone
from .errors import NontrivialUnits, NotInMonoid, NotMaximalOrder, TorsionQuotient
from .intlat import (
    Sublattice,
    Vector,
    det,
    dot,
    integer_inverse,
    kernel_basis,
    rank as matrix_rank,
    smith_normal_form,
    transpose,
    vecmat,
    vsub,
)

# beyond this many candidate subsets the coordinate normalisation is skipped
_MAX_BASIS_SEARCH = 50_000


@dataclass(frozen=True)
class Presentation:
    """Generators and binomial relations ``left = right`` given as exponent vectors."""

    names: tuple[str, ...]
    relations: tuple[tuple[Vector, Vector], ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        n = len(self.names)
        for left, right in self.relations:
            if len(left) != n or len(right) != n:
                raise ValueError("relation length does not match generator count")
            if min(left + right, default=0) < 0:
                raise ValueError("relation exponents must be non-negative")
            if not any(left) and not any(right):
                raise ValueError("relation with both sides empty")

    @classmethod
    def free(cls, names: Sequence[str]) -> "Presentation":
        return cls(tuple(names))

    def relation_vectors(self) -> list[Vector]:
        return [vsub(left, right) for left, right in self.relations]


@dataclass(frozen=True)
class FacePrime:
    """Prime ideal of ``A`` as the complement of a face of its cone.

    ``facets`` are the valuation indices vanishing on the face and
    ``generators`` the generator indices lying in the prime.
    """

    facets: frozenset[int]
    generators: frozenset[int]
    height: int

    def label(self, names: Sequence[str]) -> str:
        return "(" + ", ".join(names[i] for i in sorted(self.generators)) + ")"

    def sort_key(self):
        return (self.height, tuple(sorted(self.generators)), tuple(sorted(self.facets)))


@dataclass(frozen=True)
class Divisor:
    exponents: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class AffineMonoid:
    """A finitely generated submonoid of ``Z^r`` whose generators span ``Z^r``.

    ``valuations`` are the primitive inner facet normals of the generated
    cone, ordered so that valuation ``i`` belongs to ``minimal_primes(a)[i]``.
    """

    presentation: Presentation
    images: tuple[Vector, ...]
    valuations: tuple[Vector, ...]
    known_normal: Optional[bool] = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.images[0]) if self.images else 0

    @property
    def names(self) -> tuple[str, ...]:
        return self.presentation.names

    @property
    def n_generators(self) -> int:
        return len(self.images)

    def divisor(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(s, x) for s in self.valuations)

    def in_cone(self, x: Sequence[int]) -> bool:
        return all(dot(s, x) >= 0 for s in self.valuations)

    def point(self, exponents: Sequence[int]) -> Vector:
        """Image of an exponent vector over the generators (negative entries allowed)."""
        return vecmat(tuple(exponents), self.images)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None,
                    known_normal: Optional[bool] = None) -> "AffineMonoid":
        """Monoid generated by lattice points that already generate ``Z^r`` as a group."""
        points = tuple(tuple(int(x) for x in p) for p in points)
        r = len(points[0])
        lat = Sublattice.span(points, r)
        if not lat.is_full_rank or lat.index() != 1:
            raise ValueError("points must generate the whole lattice Z^r")
        if names is None:
            names = tuple(f"g{i + 1}" for i in range(len(points)))
        kernel = kernel_basis(transpose(points), len(points))
        rels = tuple((tuple(max(x, 0) for x in v), tuple(max(-x, 0) for x in v)) for v in kernel)
        return _assemble(Presentation(tuple(names), rels), points, known_normal)

    # internal caches; the instance itself never changes
    @cached_property
    def _unit_lattice(self) -> Sublattice:
        return Sublattice.span(units(self), self.rank)

    @cached_property
    def _nonunit_images(self) -> tuple[Vector, ...]:
        out = []
        for g in self.images:
            if any(dot(s, g) for s in self.valuations) and g not in out:
                out.append(g)
        return tuple(out)

    @cached_property
    def _memo(self) -> dict:
        return {}

    def _member(self, x: Vector) -> bool:
        """Exact membership by descent along the grading ``sum of valuations``.

        Every non-unit generator has positive grade, and a grade-zero point of
        the cone lies in the unit group iff it lies in the unit lattice.
        """
        memo = self._memo
        if x in memo:
            return memo[x]
        stack = [x]
        while stack:
            y = stack[-1]
            if y in memo:
                stack.pop()
                continue
            if not self.in_cone(y):
                memo[y] = False
                stack.pop()
                continue
            if sum(self.divisor(y)) == 0:
                memo[y] = y in self._unit_lattice
                stack.pop()
                continue
            pending = False
            result = False
            for g in self._nonunit_images:
                z = vsub(y, g)
                if z not in memo:
                    if self.in_cone(z):
                        stack.append(z)
                        pending = True
                    else:
                        memo[z] = False
                elif memo[z]:
                    result = True
                    break
            if result:
                memo[y] = True
                stack.pop()
            elif not pending:
                memo[y] = False
                stack.pop()
        return memo[x]


def _normalise_coordinates(images: list[Vector]) -> list[Vector]:
    """Change coordinates so that the first generator subset forming a basis becomes ``e_1..e_r``."""
    if not images:
        return images
    r = len(images[0])
    n = len(images)
    count = 1
    for k in range(r):
        count = count * (n - k) // (k + 1)
    if count > _MAX_BASIS_SEARCH:
        return images
    for subset in combinations(range(n), r):
        b = [images[i] for i in subset]
        if abs(det(b)) == 1:
            inv = integer_inverse(b)
            return [vecmat(g, inv) for g in images]
    return images


def _assemble(p: Presentation, images: Sequence[Vector], known_normal=None, normals=None) -> AffineMonoid:
    images = tuple(tuple(g) for g in images)
    r = len(images[0]) if images else 0
    if normals is None:
        normals = cone.facets_of(images, r) if r else []

    def key(s):
        return (tuple(j for j, g in enumerate(images) if dot(s, g) > 0), s)

    normals = sorted(normals, key=key)
    return AffineMonoid(p, images, tuple(normals), known_normal)


def build_monoid(p: Presentation) -> AffineMonoid:
    """Embed the cancellative image of a presented monoid in ``Z^r``.

    Raises ``TorsionQuotient`` when the group of fractions has torsion.
    """
    n = len(p.names)
    rels = [v for v in p.relation_vectors() if any(v)]
    if not rels:
        # free: the orthant, whose facets are the coordinate functionals
        images = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return _assemble(p, images, normals=images)
    d, _, v = smith_normal_form(rels)
    diag = [d[i][i] for i in range(min(len(rels), n))]
    torsion = [x for x in diag if x > 1]
    if torsion:
        raise TorsionQuotient(f"group of fractions has torsion with invariant factors {torsion}")
    s = sum(1 for x in diag if x)
    images = [tuple(row[s:]) for row in v]
    return _assemble(p, _normalise_coordinates(images))


def units(a: AffineMonoid) -> list[Vector]:
    """Generators of the unit group ``A ∩ -A`` (empty when units are trivial)."""
    out = []
    for g in a.images:
        if any(g) and not any(dot(s, g) for s in a.valuations) and g not in out:
            out.append(g)
    return out


def contains(a: AffineMonoid, v: Sequence[int]) -> bool:
    v = tuple(v)
    if len(v) != a.rank:
        raise ValueError("point has wrong dimension")
    if not a.in_cone(v):
        return False
    if a.known_normal or a.__dict__.get("_normal_verdict"):
        return True
    return a._member(v)


def indecomposables(a: AffineMonoid) -> list[int]:
    """Indices of generators that are not a sum of two non-units (first index per distinct image)."""
    if units(a):
        raise NontrivialUnits("indecomposables require a trivial unit group")
    out = []
    seen = set()
    for j, g in enumerate(a.images):
        if not any(g) or g in seen:
            continue
        seen.add(g)
        decomposable = any(
            any(h) and h != g and contains(a, vsub(g, h)) for h in a.images
        )
        if not decomposable:
            out.append(j)
    return out


def is_maximal_order(a: AffineMonoid) -> bool:
    """Normality test: every Hilbert basis element of ``cone ∩ Z^r`` lies in ``A``."""
    if a.known_normal is not None:
        return a.known_normal
    cached = a.__dict__.get("_normal_verdict")
    if cached is not None:
        return cached
    lin, hb = cone.hilbert_basis(a.valuations, a.rank)
    pts = list(hb) + list(lin) + [tuple(-x for x in l) for l in lin]
    verdict = all(a._member(tuple(p)) for p in pts)
    a.__dict__["_normal_verdict"] = verdict
    return verdict


def minimal_primes(a: AffineMonoid) -> list[FacePrime]:
    out = []
    for i, s in enumerate(a.valuations):
        gens = frozenset(j for j, g in enumerate(a.images) if dot(s, g) > 0)
        out.append(FacePrime(frozenset([i]), gens, 1))
    return out


def _face_generators(a: AffineMonoid, facets: Iterable[int]) -> frozenset[int]:
    facets = list(facets)
    return frozenset(j for j, g in enumerate(a.images)
                     if all(dot(a.valuations[i], g) == 0 for i in facets))


def _closure(a: AffineMonoid, facets: Iterable[int]) -> frozenset[int]:
    gens = _face_generators(a, facets)
    return frozenset(i for i, s in enumerate(a.valuations)
                     if all(dot(s, a.images[j]) == 0 for j in gens))


def prime_spectrum(a: AffineMonoid, height: Optional[int] = None) -> list[FacePrime]:
    """All non-empty prime ideals of ``A`` as face complements, optionally of one height."""
    r = a.rank
    faces = {frozenset(): _face_generators(a, ())}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for f in frontier:
            for i in range(len(a.valuations)):
                if i in f:
                    continue
                g = _closure(a, f | {i})
                if g not in faces:
                    faces[g] = _face_generators(a, g)
                    nxt.append(g)
        frontier = nxt
    primes = []
    for facets, face_gens in faces.items():
        if not facets:
            continue
        dim = matrix_rank([a.images[j] for j in face_gens]) if face_gens else 0
        members = frozenset(range(a.n_generators)) - face_gens
        support = [sum(x) for x in zip(*(a.valuations[i] for i in facets))]
        assert all((dot(support, g) > 0) == (j in members) for j, g in enumerate(a.images))
        primes.append(FacePrime(facets, members, r - dim))
    primes.sort(key=FacePrime.sort_key)
    _check_heights(primes)
    if height is not None:
        primes = [p for p in primes if p.height == height]
    return primes


def _check_heights(primes: list[FacePrime]) -> None:
    """Longest saturated chain below each prime must match ``r - dim(face)``."""
    longest: dict[frozenset, int] = {}
    for p in sorted(primes, key=lambda q: len(q.generators)):
        below = [longest[q.generators] for q in primes
                 if q.generators < p.generators and q.generators in longest]
        longest[p.generators] = 1 + max(below, default=0)
        if longest[p.generators] != p.height:
            raise AssertionError(f"height mismatch for prime {sorted(p.generators)}")


def in_prime(a: AffineMonoid, p: FacePrime, x: Sequence[int]) -> bool:
    """Membership of a point of ``A`` in the prime ``p``."""
    return any(dot(a.valuations[i], x) > 0 for i in p.facets)


def divisorial_factorization(a: AffineMonoid, x: Sequence[int]) -> Divisor:
    """Exponents of ``A x`` over the minimal primes, i.e. the facet valuations of ``x``."""
    if not contains(a, x):
        raise NotInMonoid(f"{tuple(x)} is not in the monoid")
    if not is_maximal_order(a):
        raise NotMaximalOrder("divisor theory needs a normal monoid")
    return Divisor(a.divisor(x))


def localize(a: AffineMonoid, qs: Iterable) -> AffineMonoid:
    """``{x in Z^r : v_Q(x) >= 0 for Q in qs}``, generated by its Hilbert basis.

    ``qs`` holds minimal primes or facet indices.  Coordinates are those of ``a``.
    """
    idx = sorted({next(iter(q.facets)) if isinstance(q, FacePrime) else int(q) for q in qs})
    if not idx:
        raise ValueError("localization needs at least one minimal prime")
    ineqs = [a.valuations[i] for i in idx]
    lin, hb = cone.hilbert_basis(ineqs, a.rank)
    points = list(hb) + list(lin) + [tuple(-x for x in l) for l in lin]
    names = [f"h{i + 1}" for i in range(len(hb))] + \
            [f"l{i + 1}" for i in range(len(lin))] + [f"l{i + 1}^-1" for i in range(len(lin))]
    return AffineMonoid.from_points(points, names, known_normal=True)


def elements_up_to_degree(a: AffineMonoid, degree: int) -> dict[Vector, int]:
    """Points of ``A`` reachable as sums of at most ``degree`` generators, with minimal word length."""
    out = {(0,) * a.rank: 0}
    frontier = [(0,) * a.rank]
    for d in range(1, degree + 1):
        nxt = []
        for x in frontier:
            for g in a.images:
                y = tuple(p + q for p, q in zip(x, g))
                if y not in out:
                    out[y] = d
                    nxt.append(y)
        frontier = nxt
    return out
