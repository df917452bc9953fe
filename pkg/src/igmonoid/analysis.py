"""Decision procedures on an IG monoid: torsion, primes, maximal orders.

Primes of ``A`` are acted on by ``G`` through the facet permutation
``sigma_i -> sigma_i M_g^{-1}``; everything that involves ideals is done
combinatorially on facet data, so the checks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence, Union

from .errors import PreconditionUnmet, TorsionPresent
from .igcore import GenAction, IGElement, IGMonoid, build_ig, inverse, multiply, orbit_generators, power
from .intlat import (
    Vector,
    dot,
    identity,
    integer_inverse,
    matmul,
    matvec,
    solve_affine_fixed_point,
    solve_integer_system,
    transpose,
    vadd,
    vecmat,
)
from .monoid import (
    FacePrime,
    contains,
    elements_up_to_degree,
    is_maximal_order,
    localize,
    prime_spectrum,
    units,
)

_MAX_RESIDUE_CANDIDATES = 100_000


# ---------------------------------------------------------------- group data


def norm_matrix(action: GenAction, g: int) -> tuple:
    """``T_g = I + M_g + ... + M_g^{d-1}`` with ``d`` the order of ``g``."""
    r = action.rank
    total = identity(r)
    cur = identity(r)
    for _ in range(action.element_order(g) - 1):
        cur = matmul(cur, action.matrices[g])
        total = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(total, cur))
    return total


def facet_permutation(s: IGMonoid, g: int) -> tuple[int, ...]:
    """``p[i] = j`` when ``g`` maps the minimal prime ``Q_i`` onto ``Q_j``."""
    inv = integer_inverse(s.action.matrices[g])
    vals = s.base.valuations
    index = {v: j for j, v in enumerate(vals)}
    return tuple(index[vecmat(v, inv)] for v in vals)


def _act_on_prime(s: IGMonoid, g: int, q: FacePrime, lookup: dict) -> FacePrime:
    p = facet_permutation(s, g)
    return lookup[frozenset(p[i] for i in q.facets)]


def is_periodic(s: IGMonoid, x: IGElement) -> bool:
    if x.group == 0:
        return not any(x.translation)
    return not any(matvec(norm_matrix(s.action, x.group), x.translation))


# ------------------------------------------------------------------ torsion


@dataclass(frozen=True)
class TorsionWitness:
    element: IGElement
    order: int


@dataclass(frozen=True)
class TorsionResult:
    torsion_free: bool
    witness: Optional[TorsionWitness] = None


def _tiebreak(x: Vector) -> Vector:
    # prefer the greatest vector when read from the last coordinate
    return tuple(-v for v in reversed(x))


def _small_coset_solution(s: IGMonoid, alpha: Vector, t: tuple, radius: int) -> Optional[Vector]:
    """Shortest ``x`` in ``alpha + N`` with ``T x = 0`` in a box."""
    r = s.rank
    best = found = None
    for x in product(range(-radius, radius + 1), repeat=r):
        if s.cocycle.kernel.reduce(x) != alpha or any(matvec(t, x)):
            continue
        key = (sum(abs(v) for v in x), _tiebreak(x))
        if best is None or key < best:
            best = key
            found = x
    return None if best is None else found


def is_torsion_free(s: IGMonoid) -> TorsionResult:
    """Exact decision: ``(a, g)`` is periodic iff ``T_g a = 0``.

    Every coset of ``N`` with a non-trivial value is tested by solving
    ``T_g (alpha + N^T c) = 0`` over the integers.  The reported witness is
    the shortest one found, tie-broken by order and then by the
    translation that is greatest read from its last coordinate.
    """
    nb = s.cocycle.kernel.basis
    found = []
    for alpha, g in s.cocycle.items():
        if g == 0:
            continue
        t = norm_matrix(s.action, g)
        tn = transpose([matvec(t, b) for b in nb])
        c = solve_integer_system(tn, tuple(-x for x in matvec(t, alpha)))
        if c is None:
            continue
        a = vadd(alpha, vecmat(c, nb))
        small = _small_coset_solution(s, alpha, t, 2)
        if small is not None:
            a = small
        found.append((sum(abs(v) for v in a), s.action.element_order(g), _tiebreak(a), a))
    if not found:
        return TorsionResult(True)
    _, order, _, a = min(found)
    x = s.element(a)
    assert power(s, x, order) == s.identity
    assert all(power(s, x, j) != s.identity for j in range(1, order))
    return TorsionResult(False, TorsionWitness(x, order))


def _require_divisor_theory(s: IGMonoid) -> None:
    if units(s.base):
        raise PreconditionUnmet("base monoid has non-trivial units")
    if not is_maximal_order(s.base):
        raise PreconditionUnmet("base monoid is not a maximal order")


def permutation_matrix(p: Sequence[int]) -> tuple:
    """Matrix with ``e_i -> e_{p[i]}``."""
    n = len(p)
    return tuple(tuple(int(p[j] == i) for j in range(n)) for i in range(n))


def divisorial_torsion_crosscheck(s: IGMonoid) -> bool:
    """Torsion-freeness through fixed divisorial ideals, working in divisor space.

    ``(a, g)`` is periodic iff ``div(a) + g(gamma) = gamma`` has an integer
    solution ``gamma``; per coset this is one affine fixed-point problem.
    """
    _require_divisor_theory(s)
    d = s.base.valuations
    l = len(d)
    nb = s.cocycle.kernel.basis
    k = len(nb)
    dn = [tuple(dot(row, b) for b in nb) for row in d]  # l x k
    for alpha, g in s.cocycle.items():
        if g == 0:
            continue
        pg = permutation_matrix(facet_permutation(s, g))
        top = [tuple(pg[i]) + tuple(dn[i]) for i in range(l)]
        bottom = [tuple(0 for _ in range(l)) + tuple(int(i == j) for j in range(k)) for i in range(k)]
        t = tuple(dot(row, alpha) for row in d) + (0,) * k
        if solve_affine_fixed_point(top + bottom, t) is not None:
            return False
    return True


# ------------------------------------------------------------------- primes


def ideal_condition(s: IGMonoid, qs: Sequence[FacePrime]) -> bool:
    """``(b, phi(b)) (∩ qs) ⊆ ∩ qs`` for every orbit generator ``b``.

    For primes of equal height, ``b + g(∩ qs) ⊆ ∩ qs`` holds iff every
    ``Q`` in ``qs`` either contains ``b`` or lies in ``g(qs)``.  The elements
    satisfying the inclusion form a submonoid, so generators suffice.
    """
    qs = list(qs)
    if not qs:
        raise ValueError("need at least one prime")
    if len({q.height for q in qs}) != 1:
        raise ValueError("primes must have equal height")
    lookup = {q.facets: q for q in prime_spectrum(s.base, qs[0].height)}
    wanted = {q.facets for q in qs}
    vals = s.base.valuations
    for b in orbit_generators(s):
        g = s.phi(b)
        moved = {_act_on_prime(s, g, q, lookup).facets for q in qs}
        for q in qs:
            if q.facets in moved:
                continue
            if not any(dot(vals[i], b) > 0 for i in q.facets):
                return False
    return bool(wanted)


def prime_orbits(s: IGMonoid, height: int) -> list[list[FacePrime]]:
    primes = prime_spectrum(s.base, height)
    lookup = {q.facets: q for q in primes}
    seen = set()
    out = []
    for q in primes:
        if q.facets in seen:
            continue
        orbit = []
        for g in range(s.action.order):
            image = _act_on_prime(s, g, q, lookup)
            if image.facets not in seen:
                seen.add(image.facets)
                orbit.append(image)
        out.append(sorted(orbit, key=FacePrime.sort_key))
    return out


@dataclass(frozen=True)
class PrimeOfS:
    primes: tuple[FacePrime, ...]
    height: int
    orbit: int

    def labels(self, names: Sequence[str]) -> list[str]:
        return [q.label(names) for q in self.primes]


def primes_of_s(s: IGMonoid, height: int, require_torsion_free: bool = True) -> list[PrimeOfS]:
    """Height-``height`` primes of ``S`` as inclusion-minimal sets of ``A``-primes.

    Within each ``G``-orbit the minimal sets satisfying ``ideal_condition``
    are found by increasing size, and must partition the orbit.
    """
    if require_torsion_free and not is_torsion_free(s).torsion_free:
        raise TorsionPresent("group of fractions has periodic elements")
    out = []
    for k, orbit in enumerate(prime_orbits(s, height)):
        chosen: list[tuple[FacePrime, ...]] = []
        for size in range(1, len(orbit) + 1):
            for sub in combinations(orbit, size):
                if any(set(c) <= set(sub) for c in chosen):
                    continue
                if ideal_condition(s, sub):
                    chosen.append(sub)
        covered = [q.facets for c in chosen for q in c]
        assert len(covered) == len(set(covered)) == len(orbit), "minimal sets do not partition the orbit"
        out.extend(PrimeOfS(c, height, k) for c in chosen)
    return out


# ------------------------------------------------------------ maximal order


@dataclass(frozen=True)
class OrbitReport:
    orbit: tuple[FacePrime, ...]
    partition: tuple[tuple[FacePrime, ...], ...]
    invariant: bool


@dataclass(frozen=True)
class MaximalOrderVerdict:
    """``verdict`` is ``None`` when no conclusion can be drawn.

    ``basis`` names the criterion used: ``orbit-criterion`` (torsion-free,
    both directions), ``sufficient-only`` (torsion present, every orbit
    invariant) or ``undecided-torsion``.
    """

    verdict: Optional[bool]
    basis: str
    torsion_free: bool
    orbits: tuple[OrbitReport, ...]


def is_maximal_order_s(s: IGMonoid) -> MaximalOrderVerdict:
    _require_divisor_theory(s)
    torsion_free = is_torsion_free(s).torsion_free
    primes = primes_of_s(s, 1, require_torsion_free=False)
    reports = []
    for k, orbit in enumerate(prime_orbits(s, 1)):
        parts = tuple(p.primes for p in primes if p.orbit == k)
        reports.append(OrbitReport(tuple(orbit), parts, len(parts) == 1))
    all_invariant = all(r.invariant for r in reports)
    if torsion_free:
        return MaximalOrderVerdict(all_invariant, "orbit-criterion", True, tuple(reports))
    if all_invariant:
        return MaximalOrderVerdict(True, "sufficient-only", False, tuple(reports))
    return MaximalOrderVerdict(None, "undecided-torsion", False, tuple(reports))


@dataclass(frozen=True)
class Localization:
    monoid: IGMonoid
    minimal_primes: tuple[PrimeOfS, ...]
    unique: bool


def localize_s(s: IGMonoid, p: PrimeOfS) -> Localization:
    """``S`` localized at ``p``: base ``A_{Q_1} ∩ ... ∩ A_{Q_n}``, same group and cocycle."""
    if p.height != 1:
        raise PreconditionUnmet("localization is defined for minimal primes")
    _require_divisor_theory(s)
    facets = sorted(next(iter(q.facets)) for q in p.primes)
    for g in range(s.action.order):
        perm = facet_permutation(s, g)
        if sorted(perm[i] for i in facets) != facets:
            raise PreconditionUnmet("prime set is not invariant under the group")
    base = localize(s.base, facets)
    action = GenAction(s.rank, s.action.matrices, None, s.action.table)
    local = build_ig(base, action, s.cocycle)
    minimal = primes_of_s(local, 1, require_torsion_free=False)
    return Localization(local, tuple(minimal), len(minimal) == 1)


# ---------------------------------------------------------- bounded searches


@dataclass(frozen=True)
class NonMaximalWitness:
    element: IGElement
    ideal: tuple[IGElement, ...]
    bound: int


def _minimal_by_value(s: IGMonoid) -> Optional[dict[int, list[Vector]]]:
    """Divisibility-minimal elements of ``{c in A : phi(c) = h}`` for every ``h``."""
    lat = s.cocycle.kernel
    imgs = s.base.images
    orders = []
    for v in imgs:
        k, w = 1, v
        while lat.reduce(w) != (0,) * s.rank:
            w = vadd(w, v)
            k += 1
        orders.append(k)
    total = 1
    for k in orders:
        total *= k
    if total > _MAX_RESIDUE_CANDIDATES:
        return None
    cands: dict[int, set[Vector]] = {}
    for ns in product(*(range(k) for k in orders)):
        c = vecmat(ns, imgs)
        cands.setdefault(s.phi(c), set()).add(c)
    out = {}
    for h, cs in cands.items():
        mins = [c for c in cs if not any(d != c and contains(s.base, tuple(x - y for x, y in zip(c, d)))
                                         for d in cs)]
        out[h] = sorted(mins)
    return out


def ideal_translations(s: IGMonoid, gens: Sequence[Vector], minimal=None) -> Optional[list[Vector]]:
    """Generators of the ``A``-ideal of translations of the two-sided ideal ``S x S``."""
    minimal = _minimal_by_value(s) if minimal is None else minimal
    if minimal is None:
        return None
    out = set()
    for x in gens:
        for h, ms in minimal.items():
            hx = s.action.apply(h, x)
            for m in ms:
                out.add(vadd(m, hx))
    return sorted(out)


def _in_ideal(s: IGMonoid, y: Vector, ideal: Sequence[Vector]) -> bool:
    return any(contains(s.base, tuple(a - b for a, b in zip(y, t))) for t in ideal)


def non_maximal_witness(s: IGMonoid, bound: int) -> Optional[NonMaximalWitness]:
    """Bounded search for ``g`` outside ``S`` and an ideal ``I`` with ``g I ⊆ I``.

    Candidates have divisor exponents in ``[-bound, bound]``; ideals are
    generated by one or two elements of degree at most ``bound``.  ``None``
    means nothing was found within the bound.
    """
    base = s.base
    if units(base) or not base.valuations:
        return None
    normal = is_maximal_order(base)
    minimal = _minimal_by_value(s)
    if minimal is None:
        return None
    d = base.valuations
    cands = []
    for v in product(range(-bound, bound + 1), repeat=len(d)):
        a = solve_integer_system(d, v)
        if a is None or contains(base, a):
            continue
        cands.append((sum(abs(x) for x in v), v, a))
    cands.sort()
    elems = sorted(elements_up_to_degree(base, bound).items(), key=lambda kv: (kv[1], kv[0]))
    elems = [e for e, deg in elems if deg > 0]
    ideals = [(e,) for e in elems] + list(combinations(elems, 2))
    translated = [(gens, ideal_translations(s, gens, minimal)) for gens in ideals]
    if normal:
        # in divisor space y lies in t + A iff div(y) >= div(t) componentwise
        perms = [facet_permutation(s, g) for g in range(s.action.order)]
        divs = [(gens, [base.divisor(t) for t in ts]) for gens, ts in translated]
        for _, v, a in cands:
            p = perms[s.phi(a)]
            for gens, dts in divs:
                if all(_dominates_some(_shift(v, p, dt), dts) for dt in dts):
                    return NonMaximalWitness(s.element(a), tuple(s.element(x) for x in gens), bound)
        return None
    for _, _, a in cands:
        g = s.phi(a)
        for gens, ts in translated:
            if all(_in_ideal(s, vadd(a, s.action.apply(g, t)), ts) for t in ts):
                return NonMaximalWitness(s.element(a), tuple(s.element(x) for x in gens), bound)
    return None


def _shift(v: Vector, p: Sequence[int], dt: Vector) -> list[int]:
    """Divisor of ``a + g(t)`` from ``div(a)``, the facet permutation of ``g`` and ``div(t)``."""
    out = list(v)
    for i, x in enumerate(dt):
        out[p[i]] += x
    return out


def _dominates_some(y: Sequence[int], dts) -> bool:
    return any(all(a >= b for a, b in zip(y, dt)) for dt in dts)


@dataclass(frozen=True)
class FiniteNormalSubgroup:
    elements: tuple[IGElement, ...]


@dataclass(frozen=True)
class NoneFoundUpToBound:
    bound: int
    seeds: int = 0
    refuted: int = 0


def finite_normal_subgroup_search(s: IGMonoid, bound: int) -> Union[FiniteNormalSubgroup, NoneFoundUpToBound]:
    """Look for a non-trivial finite normal subgroup of ``SS^-1`` seeded by small periodic elements.

    A seed is refuted as soon as its closure under conjugation and products
    contains a non-periodic element; a seed whose closure does not settle
    within ``bound`` rounds is left open.
    """
    seeds = []
    for a in product(range(-bound, bound + 1), repeat=s.rank):
        x = s.element(a)
        if any(a) and is_periodic(s, x):
            seeds.append(x)
    seeds.sort(key=lambda x: (sum(abs(v) for v in x.translation), x.translation))
    conj = []
    for i in range(s.base.n_generators):
        y = s.generator(i)
        conj += [y, inverse(s, y)]
    refuted = 0
    for x in seeds:
        group = {s.identity, x}
        ok = True
        settled = False
        for _ in range(bound):
            new = set()
            for h in group:
                for y in conj:
                    new.add(multiply(s, multiply(s, y, h), inverse(s, y)))
                for k in group:
                    new.add(multiply(s, h, k))
            new -= group
            if any(not is_periodic(s, z) for z in new):
                ok = False
                break
            if not new:
                settled = True
                break
            group |= new
        if not ok:
            refuted += 1
            continue
        if settled:
            elems = tuple(sorted(group, key=lambda z: (z.group, z.translation)))
            return FiniteNormalSubgroup(elems)
    return NoneFoundUpToBound(bound, len(seeds), refuted)
