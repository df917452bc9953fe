"""Monoids of I-type given by quadratic relations, and the I-type cover of an IG monoid.

Indices are 0-based throughout; ``x_i x_j = x_k x_l`` is stored as
``((i, j), (k, l))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .errors import DuplicateWord, NotBijective, NotIGType, NotPermutation, PeriodInferenceFailed, PreconditionUnmet
from .igcore import (
    CosetCocycle,
    IGMonoid,
    Perm,
    build_action,
    build_ig,
    compose,
    invert_perm,
)
from .intlat import Sublattice, Vector, kernel_basis, matvec, transpose, vadd
from .monoid import Presentation, build_monoid

Pair = tuple[int, int]


@dataclass(frozen=True)
class IRelations:
    n: int
    relations: tuple[tuple[Pair, Pair], ...]

    def __post_init__(self):
        expected = self.n * (self.n - 1) // 2
        if len(self.relations) != expected:
            raise ValueError(f"expected {expected} relations for {self.n} generators, got {len(self.relations)}")
        seen = set()
        for rel in self.relations:
            for w in rel:
                if not all(0 <= i < self.n for i in w):
                    raise ValueError(f"generator index out of range in {rel}")
                if w in seen:
                    raise DuplicateWord(f"word x{w[0] + 1}x{w[1] + 1} appears more than once")
                seen.add(w)


@dataclass(frozen=True)
class RMap:
    """``r`` on ``X x X`` stored row-major: ``table[i * n + j] = r(i, j)``."""

    n: int
    table: tuple[Pair, ...]

    def __call__(self, i: int, j: int) -> Pair:
        return self.table[i * self.n + j]


def build_rmap(rel: IRelations) -> RMap:
    n = rel.n
    table = {(i, j): (i, j) for i in range(n) for j in range(n)}
    for left, right in rel.relations:
        table[left] = right
        table[right] = left
    values = [table[(i, j)] for i in range(n) for j in range(n)]
    if len(set(values)) != n * n:
        raise NotBijective("r is not a bijection of X x X")
    return RMap(n, tuple(values))


@dataclass(frozen=True)
class YBEResult:
    ok: bool
    violation: Optional[tuple[int, int, int]] = None


def check_ybe(r: RMap) -> YBEResult:
    """Braid relation ``r1 r2 r1 = r2 r1 r2`` on all triples, first violation reported."""

    def r1(t):
        a, b = r(t[0], t[1])
        return (a, b, t[2])

    def r2(t):
        b, c = r(t[1], t[2])
        return (t[0], b, c)

    n = r.n
    for x in range(n):
        for y in range(n):
            for z in range(n):
                t = (x, y, z)
                if r1(r2(r1(t))) != r2(r1(r2(t))):
                    return YBEResult(False, t)
    return YBEResult(True)


def f_map(r: RMap, x: int) -> Perm:
    return tuple(r(x, y)[0] for y in range(r.n))


def g_map(r: RMap, x: int) -> Perm:
    return tuple(r(y, x)[1] for y in range(r.n))


def check_nondegeneracy(r: RMap) -> tuple[bool, bool]:
    """``(left, right)``: left means every ``g_x`` is bijective, right every ``f_x``."""
    n = r.n
    left = all(len(set(g_map(r, x))) == n for x in range(n))
    right = all(len(set(f_map(r, x))) == n for x in range(n))
    return left, right


def _perm_group_order(gens: Sequence[Perm]) -> int:
    if not gens:
        return 1
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


@dataclass(frozen=True)
class DerivedPermutations:
    sigmas: tuple[Perm, ...]
    group_order: int


def derive_permutations(rel: IRelations) -> DerivedPermutations:
    """``sigma_i(j) = k`` whenever ``r(x_i, x_j) = (x_k, x_l)``."""
    r = build_rmap(rel)
    sigmas = tuple(f_map(r, i) for i in range(rel.n))
    for i, s in enumerate(sigmas):
        if len(set(s)) != rel.n:
            raise NotPermutation(f"sigma_{i + 1} is not a permutation: {s}")
    return DerivedPermutations(sigmas, _perm_group_order(sigmas))


@dataclass(frozen=True)
class ITypeMonoid:
    relations: IRelations
    sigmas: tuple[Perm, ...]
    ig: IGMonoid


def _monomials(n: int, degree: int) -> list[Vector]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            v = [0] * n
            for i in combo:
                v[i] += 1
            out.append(tuple(v))
    return out


def _free_base(n: int):
    return build_monoid(Presentation.free([f"u{i + 1}" for i in range(n)]))


def itype_to_ig(rel: IRelations, degree: int = 6) -> ITypeMonoid:
    """The map ``psi`` on ``FaM_n`` from the relations, certified as a cocycle.

    ``psi(a + u_j) = psi(a) sigma_{psi(a)^-1(j)}``; the period lattice is
    inferred from monomials of degree at most ``degree`` and then verified
    exhaustively on the finite quotient.
    """
    r = build_rmap(rel)
    if not check_ybe(r).ok:
        raise PreconditionUnmet("relations do not satisfy the braid relation")
    if not check_nondegeneracy(r)[0]:
        raise PreconditionUnmet("r is not left non-degenerate")
    n = rel.n
    sigmas = derive_permutations(rel).sigmas
    ident = tuple(range(n))
    psi: dict[Vector, Perm] = {(0,) * n: ident}
    for a in _monomials(n, degree)[1:]:
        value = None
        for j in range(n):
            if a[j] == 0:
                continue
            prev = psi[tuple(x - (k == j) for k, x in enumerate(a))]
            cand = compose(prev, sigmas[invert_perm(prev)[j]])
            if value is None:
                value = cand
            elif value != cand:
                raise NotIGType(f"psi is not well defined at {a}")
        psi[a] = value
    lattice = Sublattice.span([a for a, p in psi.items() if p == ident and any(a)], n)
    if not lattice.is_full_rank:
        raise PeriodInferenceFailed(f"period lattice not found up to degree {degree}")
    base = _free_base(n)
    action = build_action(base, sigmas)
    table: dict[Vector, int] = {}
    for a, p in psi.items():
        key = lattice.reduce(a)
        g = action.index_of_perm(p)
        if table.setdefault(key, g) != g:
            raise PeriodInferenceFailed(f"sampled values disagree on the coset of {key}")
    if len(table) != lattice.index():
        raise PeriodInferenceFailed(f"not every coset sampled up to degree {degree}")
    ig = build_ig(base, action, CosetCocycle.from_table(lattice, table))
    return ITypeMonoid(rel, sigmas, ig)


def quadratic_relations(s: IGMonoid) -> Optional[IRelations]:
    """Degree-two relations of an IG monoid over a free abelian base, when it has I-type shape."""
    n = s.base.n_generators
    perms = s.action.perms
    by_translation: dict[Vector, list[Pair]] = {}
    for i in range(n):
        sigma = perms[s.phi(s.base.images[i])]
        for j in range(n):
            key = vadd(s.base.images[i], s.base.images[sigma[j]])
            by_translation.setdefault(key, []).append((i, j))
    rels = []
    for key, words in sorted(by_translation.items()):
        if len(words) == 2:
            rels.append(tuple(sorted(words)))
        elif len(words) != 1:
            return None
    try:
        return IRelations(n, tuple(sorted(rels)))
    except (ValueError, DuplicateWord):
        return None


@dataclass(frozen=True)
class CoverReport:
    degree: int
    morphism: bool
    onto: bool
    injective_mod_kernel: bool
    kernel_invariant: bool
    relations_ybe: bool
    relations_nondegenerate: bool

    @property
    def ok(self) -> bool:
        return all((self.morphism, self.onto, self.injective_mod_kernel, self.kernel_invariant,
                    self.relations_ybe, self.relations_nondegenerate))


@dataclass(frozen=True)
class Cover:
    cover: ITypeMonoid
    kernel: Sublattice
    covering_map: tuple[Vector, ...]
    report: CoverReport

    @property
    def m(self) -> int:
        return len(self.covering_map)


def ig_cover(s: IGMonoid, degree: int = 3) -> Cover:
    """I-type monoid ``T`` on ``m = n |G|`` generators with ``S ≅ T_B / B``.

    Generator ``v_{g,i}`` has index ``g * n + i`` and maps to ``g(u_i)``;
    ``psi(x)`` sends ``v_{g,i}`` to ``v_{phi(f(x)) g, i}``.
    """
    n, k, r = s.base.n_generators, s.action.order, s.rank
    m = n * k
    images = tuple(s.action.apply(g, s.base.images[i]) for g in range(k) for i in range(n))
    f = transpose(images)  # r x m, columns are the images

    def fmap(x):
        return matvec(f, x)

    def shift(h: int) -> Perm:
        return tuple(s.action.mul(h, g) * n + i for g in range(k) for i in range(n))

    base = _free_base(m)
    action = build_action(base, [shift(h) for h in range(1, k)] or [tuple(range(m))])
    to_cover = {h: action.index_of_perm(shift(h)) for h in range(k)}

    nb = s.cocycle.kernel.basis
    big = [tuple(f[i]) + tuple(-b[i] for b in nb) for i in range(r)]
    pre = [v[:m] for v in kernel_basis(big, m + len(nb))]
    lattice = Sublattice.span(pre, m)
    table = {c: to_cover[s.phi(fmap(c))] for c in lattice.cosets()}
    t = build_ig(base, action, CosetCocycle.from_table(lattice, table))
    sigmas = tuple(t.action.perms[t.phi(base.images[i])] for i in range(m))
    rels = quadratic_relations(t)
    kernel = Sublattice.span(kernel_basis(f, m), m)

    # bounded verification on monomials
    monos = _monomials(m, degree)
    morphism = True
    for x in monos:
        for y in monos:
            if sum(x) + sum(y) > degree:
                continue
            gx = t.phi(x)
            prod = vadd(x, t.action.apply(gx, y))
            fx, fy = fmap(x), fmap(y)
            expect = vadd(fx, s.action.apply(s.phi(fx), fy))
            if fmap(prod) != expect or to_cover[s.phi(expect)] != t.phi(prod):
                morphism = False
    reach = {fmap(x) for x in monos}
    onto = all(v in reach for v in _s_monomials(s, degree))
    # monomials with equal image must differ by an element of B; distinct images cannot
    fibres: dict[Vector, Vector] = {}
    injective = True
    for x in monos:
        first = fibres.setdefault(fmap(x), x)
        if tuple(a - b for a, b in zip(x, first)) not in kernel:
            injective = False
    invariant = all(matvec(mat, b) in kernel for mat in t.action.matrices for b in kernel.basis)
    if rels is not None:
        rm = build_rmap(rels)
        ybe = check_ybe(rm).ok
        nondeg = all(check_nondegeneracy(rm))
    else:
        ybe = nondeg = False
    report = CoverReport(degree, morphism, onto, injective, invariant, ybe, nondeg)
    cover = ITypeMonoid(rels, sigmas, t) if rels is not None else ITypeMonoid(None, sigmas, t)
    return Cover(cover, kernel, images, report)


def _s_monomials(s: IGMonoid, degree: int) -> set[Vector]:
    out = {(0,) * s.rank}
    frontier = set(out)
    for _ in range(degree):
        frontier = {vadd(x, g) for x in frontier for g in s.base.images}
        out |= frontier
    return out
