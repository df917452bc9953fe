"""Finite group actions, cocycles on a finite quotient, and the monoid ``S = {(a, phi(a))}``.

Conventions: matrices act on column vectors, ``(a, g)(b, h) = (a + M_g b, gh)``,
and a generator permutation ``p`` means ``g(u_i) = u_{p[i]}``.  Group
elements are referred to by their index in ``GenAction.matrices``; index 0
is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Mapping, Optional, Sequence

from .errors import InvalidCocycle, NontrivialUnits, NotFaithful, NotIGType, RelationNotPreserved
from .intlat import (
    Matrix,
    Sublattice,
    Vector,
    det,
    identity,
    kernel_basis,
    matmul,
    matvec,
    rational_inverse,
    solve_integer_system,
    transpose,
    vadd,
    vsub,
)
from .monoid import AffineMonoid, indecomposables, units

Perm = tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q`` as functions on indices."""
    return tuple(p[i] for i in q)


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_cycles(p: Perm) -> list[tuple[int, ...]]:
    """Non-trivial cycles of ``p``, each starting at its smallest entry."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class GenAction:
    """A finite group of lattice automorphisms, closed under products.

    ``perms[k]`` is the permutation of the monoid generators induced by
    element ``k`` (``None`` for actions given only by matrices).
    """

    rank: int
    matrices: tuple[Matrix, ...]
    perms: Optional[tuple[Perm, ...]]
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.matrices)

    @cached_property
    def _index(self) -> dict:
        return {m: i for i, m in enumerate(self.matrices)}

    def index_of_matrix(self, m: Sequence[Sequence[int]]) -> int:
        return self._index[tuple(tuple(r) for r in m)]

    def index_of_perm(self, p: Perm) -> int:
        if self.perms is None:
            raise ValueError("action has no generator permutations")
        return self.perms.index(tuple(p))

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    def inverse(self, i: int) -> int:
        return self.inverses[i]

    def apply(self, i: int, v: Sequence[int]) -> Vector:
        return matvec(self.matrices[i], v)

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.table[j][i]
            k += 1
        return k

    def power(self, i: int, k: int) -> int:
        if k < 0:
            i, k = self.inverse(i), -k
        out = 0
        for _ in range(k):
            out = self.table[out][i]
        return out

    def subgroup(self, gens: Sequence[int]) -> list[int]:
        """Indices of the subgroup generated by ``gens`` in discovery order."""
        out = [0]
        seen = {0}
        i = 0
        while i < len(out):
            for g in gens:
                h = self.table[out[i]][g]
                if h not in seen:
                    seen.add(h)
                    out.append(h)
            i += 1
        return out

    def restrict(self, elements: Sequence[int]) -> tuple["GenAction", dict[int, int]]:
        """The action of a subgroup, with the old-to-new index map."""
        pos = {e: k for k, e in enumerate(elements)}
        mats = tuple(self.matrices[e] for e in elements)
        perms = None if self.perms is None else tuple(self.perms[e] for e in elements)
        table = tuple(tuple(pos[self.table[e][f]] for f in elements) for e in elements)
        return GenAction(self.rank, mats, perms, table), pos

    @classmethod
    def trivial(cls, rank: int, n_generators: Optional[int] = None) -> "GenAction":
        perms = None if n_generators is None else (tuple(range(n_generators)),)
        return cls(rank, (identity(rank),), perms, ((0,),))

    @classmethod
    def from_matrices(cls, rank: int, generators: Sequence[Sequence[Sequence[int]]]) -> "GenAction":
        """Closure of a finite set of unimodular matrices."""
        gens = [tuple(tuple(r) for r in m) for m in generators]
        mats = [identity(rank)]
        idx = {mats[0]: 0}
        i = 0
        while i < len(mats):
            for g in gens:
                m = matmul(mats[i], g)
                if m not in idx:
                    idx[m] = len(mats)
                    mats.append(m)
                    if len(mats) > 10_000:
                        raise ValueError("matrix group is not finite at desk scale")
            i += 1
        table = tuple(tuple(idx[matmul(a, b)] for b in mats) for a in mats)
        return cls(rank, tuple(mats), None, table)


def _perm_matrix(a: AffineMonoid, p: Perm) -> Matrix:
    """Integer matrix sending generator image ``i`` to image ``p[i]``."""
    n, r = a.n_generators, a.rank
    if sorted(p) != list(range(n)):
        raise RelationNotPreserved(f"{p} is not a permutation of {n} generators")
    imgs = a.images
    basis = next(s for s in combinations(range(n), r) if det([imgs[i] for i in s]) != 0)
    x = transpose([imgs[i] for i in basis])
    y = transpose([imgs[p[i]] for i in basis])
    inv = rational_inverse(x)
    # integer arithmetic over a common denominator; rows of y are sparse
    den = lcm(*(v.denominator for row in inv for v in row))
    scaled = [[int(v * den) for v in row] for row in inv]
    m = []
    for i in range(r):
        row = [0] * r
        for k in range(r):
            c = y[i][k]
            if c:
                sk = scaled[k]
                for j in range(r):
                    row[j] += c * sk[j]
        if any(v % den for v in row):
            raise RelationNotPreserved(f"permutation {p} does not induce an integral map")
        m.append(tuple(v // den for v in row))
    m = tuple(m)
    for i in range(n):
        if matvec(m, imgs[i]) != imgs[p[i]]:
            raise RelationNotPreserved(f"permutation {p} does not preserve the relations")
    return m


def build_action(a: AffineMonoid, perms: Sequence[Sequence[int]]) -> GenAction:
    """Group generated by generator permutations, acting on ``Z^r``.

    Raises ``RelationNotPreserved`` if a permutation is not an automorphism of
    ``A`` and ``NotFaithful`` if distinct permutations induce the same matrix.
    """
    r, n = a.rank, a.n_generators
    gens = [(tuple(p), _perm_matrix(a, tuple(p))) for p in perms]
    ident = (tuple(range(n)), identity(r))
    elems = [ident]
    by_perm = {ident[0]: 0}
    by_mat = {ident[1]: 0}
    i = 0
    while i < len(elems):
        p0, m0 = elems[i]
        for p1, m1 in gens:
            p, m = compose(p0, p1), matmul(m0, m1)
            if p in by_perm:
                continue
            if m in by_mat:
                raise NotFaithful(f"permutations {elems[by_mat[m]][0]} and {p} induce the same matrix")
            by_perm[p] = by_mat[m] = len(elems)
            elems.append((p, m))
        i += 1
    table = tuple(tuple(by_perm[compose(p, q)] for q, _ in elems) for p, _ in elems)
    return GenAction(r, tuple(m for _, m in elems), tuple(p for p, _ in elems), table)


@dataclass(frozen=True)
class CosetCocycle:
    """``phi`` as a table on ``Z^r / N``; ``values`` follows ``kernel.cosets()``."""

    kernel: Sublattice
    values: tuple[int, ...]

    @cached_property
    def _lookup(self) -> dict[Vector, int]:
        return dict(zip(self.kernel.cosets(), self.values))

    def value(self, a: Sequence[int]) -> int:
        return self._lookup[self.kernel.reduce(a)]

    def items(self):
        return list(zip(self.kernel.cosets(), self.values))

    @classmethod
    def from_table(cls, kernel: Sublattice, table: Mapping[Sequence[int], int]) -> "CosetCocycle":
        """Kernel plus an arbitrary representative per coset."""
        if not kernel.is_full_rank:
            raise InvalidCocycle("cocycle kernel must have finite index")
        found: dict[Vector, int] = {}
        for rep, g in table.items():
            key = kernel.reduce(rep)
            if key in found and found[key] != g:
                raise InvalidCocycle(f"coset of {tuple(rep)} given two values")
            found[key] = g
        missing = [c for c in kernel.cosets() if c not in found]
        if missing:
            raise InvalidCocycle(f"no value for the coset of {missing[0]}")
        return cls(kernel, tuple(found[c] for c in kernel.cosets()))

    @classmethod
    def from_grading(cls, a: AffineMonoid, form: Sequence[int], modulus: int,
                     residues: Mapping[int, int]) -> "CosetCocycle":
        """``phi(a) = residues[w(a) mod modulus]`` for a linear form ``w`` given on generators."""
        if modulus < 1:
            raise InvalidCocycle("modulus must be positive")
        n, r = a.n_generators, a.rank
        if len(form) != n:
            raise InvalidCocycle("grading needs one weight per generator")
        # w in Z^r with w . img_j = form_j (mod modulus)
        rows = [tuple(a.images[j]) + tuple(modulus * (k == j) for k in range(n)) for j in range(n)]
        sol = solve_integer_system(rows, tuple(form))
        if sol is None:
            raise InvalidCocycle("grading is not compatible with the relations")
        w = sol[:r]
        kern = kernel_basis([tuple(w) + (modulus,)], r + 1)
        lattice = Sublattice.span([k[:r] for k in kern], r)
        table = {}
        for c in lattice.cosets():
            res = sum(x * y for x, y in zip(w, c)) % modulus
            if res not in residues:
                raise InvalidCocycle(f"no group element given for residue {res}")
            table[c] = residues[res]
        return cls.from_table(lattice, table)

    @classmethod
    def from_generator_values(cls, a: AffineMonoid, action: GenAction,
                              values: Sequence[int]) -> "CosetCocycle":
        """Cocycle of the group generated by ``(u_i, g_i)`` in ``Z^r ⋊ G``.

        Raises ``NotIGType`` when the first projection of that group is not a
        bijection onto ``Z^r``.
        """
        r = a.rank
        gens = list(zip(a.images, values))
        # transversal of the translation subgroup, one element per reachable group element
        trans: dict[int, Vector] = {0: (0,) * r}
        order = [0]
        i = 0
        while i < len(order):
            g = order[i]
            for b, h in gens:
                k = action.mul(g, h)
                if k not in trans:
                    trans[k] = vadd(trans[g], action.apply(g, b))
                    order.append(k)
            i += 1
        schreier = []
        for g in order:
            for b, h in gens:
                k = action.mul(g, h)
                # t_g x t_k^{-1} = (t_g + M_g b - t_k, 1)
                v = vsub(vadd(trans[g], action.apply(g, b)), trans[k])
                if any(v):
                    schreier.append(v)
        lattice = Sublattice.span(schreier, r)
        if not lattice.is_full_rank:
            raise NotIGType("translation subgroup has infinite index")
        if lattice.index() != len(order):
            raise NotIGType(f"projection is not bijective: index {lattice.index()} "
                            f"but {len(order)} group values")
        table = {}
        for g in order:
            key = lattice.reduce(trans[g])
            if key in table:
                raise NotIGType("two group values share a coset")
            table[key] = g
        return cls.from_table(lattice, table)


@dataclass(frozen=True)
class CocycleReport:
    violations: tuple[tuple[Vector, Vector], ...]
    kernel_invariant: bool
    identity_ok: bool
    complete: bool

    @property
    def ok(self) -> bool:
        return not self.violations and self.kernel_invariant and self.identity_ok and self.complete


def verify_cocycle(c: CosetCocycle, g: GenAction) -> CocycleReport:
    """Exhaustive check of ``phi(a) phi(b) = phi(a + M_phi(a) b)`` on the quotient.

    Invariance of ``N`` is required only under the subgroup generated by the
    values, which is the group that ``build_ig`` keeps.
    """
    cosets = c.kernel.cosets()
    complete = len(c.values) == len(cosets) and all(0 <= v < g.order for v in c.values)
    acting = g.subgroup(sorted(set(c.values))) if complete else range(g.order)
    invariant = all(c.kernel.image(g.matrices[k]) == c.kernel for k in acting)
    identity_ok = complete and c.value((0,) * g.rank) == 0
    bad = []
    if complete and invariant:
        for alpha, ga in zip(cosets, c.values):
            for beta, gb in zip(cosets, c.values):
                if g.mul(ga, gb) != c.value(vadd(alpha, g.apply(ga, beta))):
                    bad.append((alpha, beta))
    return CocycleReport(tuple(bad), invariant, identity_ok, complete)


@dataclass(frozen=True)
class IGElement:
    translation: Vector
    group: int


@dataclass(frozen=True, eq=False)
class IGMonoid:
    """``S = {(a, phi(a)) : a in A}`` inside ``A ⋊ G``.

    ``G`` is the set of cocycle values and ``cocycle.kernel`` is the exact
    kernel of ``phi`` on the group of fractions.
    """

    base: AffineMonoid
    action: GenAction
    cocycle: CosetCocycle
    notes: tuple[str, ...] = field(default=())

    @property
    def rank(self) -> int:
        return self.base.rank

    def phi(self, a: Sequence[int]) -> int:
        return self.cocycle.value(a)

    def element(self, a: Sequence[int]) -> IGElement:
        a = tuple(a)
        return IGElement(a, self.phi(a))

    def generator(self, i: int) -> IGElement:
        return self.element(self.base.images[i])

    @cached_property
    def identity(self) -> IGElement:
        return IGElement((0,) * self.rank, 0)


def build_ig(a: AffineMonoid, g: GenAction, c: CosetCocycle) -> IGMonoid:
    """Validate the data and normalise ``G`` and ``N``.

    ``G`` is shrunk to the cocycle values and ``N`` is enlarged to the exact
    kernel, both recorded in ``notes``.
    """
    if g.rank != a.rank or c.kernel.ambient_rank != a.rank:
        raise InvalidCocycle("rank mismatch between monoid, action and cocycle")
    report = verify_cocycle(c, g)
    if not report.ok:
        raise InvalidCocycle("cocycle check failed", report)
    notes = []
    used = sorted(set(c.values))
    sub = g.subgroup(used)
    if len(sub) < g.order:
        declared = g.order
        g, pos = g.restrict(sub)
        c = CosetCocycle(c.kernel, tuple(pos[v] for v in c.values))
        notes.append(f"group reduced from order {declared} to the {len(sub)} cocycle values")
    ident = [alpha for alpha, v in c.items() if v == 0]
    kernel = Sublattice.span(list(c.kernel.basis) + ident, a.rank)
    if kernel != c.kernel:
        c = CosetCocycle.from_table(kernel, dict(c.items()))
        notes.append(f"cocycle kernel enlarged to the exact kernel of index {kernel.index()}")
    return IGMonoid(a, g, c, tuple(notes))


def multiply(s: IGMonoid, x: IGElement, y: IGElement) -> IGElement:
    a = vadd(x.translation, s.action.apply(x.group, y.translation))
    g = s.action.mul(x.group, y.group)
    assert s.phi(a) == g, "product left the graph of the cocycle"
    return IGElement(a, g)


def inverse(s: IGMonoid, x: IGElement) -> IGElement:
    gi = s.action.inverse(x.group)
    a = tuple(-v for v in s.action.apply(gi, x.translation))
    return IGElement(a, gi)


def power(s: IGMonoid, x: IGElement, k: int) -> IGElement:
    if k < 0:
        x, k = inverse(s, x), -k
    out = s.identity
    for _ in range(k):
        out = multiply(s, out, x)
    return out


def kernel_index(s: IGMonoid) -> int:
    k = s.cocycle.kernel.index()
    assert s.action.order % k == 0
    return k


def g_norm(s: IGMonoid, b: Sequence[int]) -> Vector:
    """Sum of ``g(b)`` over the group: an invariant, hence central, element."""
    out = (0,) * s.rank
    for m in s.action.matrices:
        out = vadd(out, matvec(m, b))
    return out


def orbit_generators(s: IGMonoid) -> list[Vector]:
    """Closure of the generator images under the group, generators first."""
    out = []
    for v in s.base.images:
        if v not in out:
            out.append(v)
    i = 0
    while i < len(out):
        for m in s.action.matrices:
            w = matvec(m, out[i])
            if w not in out:
                out.append(w)
        i += 1
    members = set(out)
    assert all(matvec(m, v) in members for m in s.action.matrices for v in out)
    return out


@dataclass(frozen=True)
class NotITypeCertificate:
    rank: int
    indecomposables: int


def not_i_type_certificate(s: IGMonoid) -> Optional[NotITypeCertificate]:
    """Certificate when the lattice rank is smaller than the number of indecomposables."""
    if units(s.base):
        raise NontrivialUnits("certificate needs trivial units")
    k = len(indecomposables(s.base))
    return NotITypeCertificate(s.rank, k) if s.rank < k else None
