from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igmonoid.errors import DuplicateWord, PeriodInferenceFailed, PreconditionUnmet
from igmonoid.igcore import CosetCocycle, GenAction, build_ig, multiply
from igmonoid.intlat import Sublattice
from igmonoid.itype import (
    IRelations,
    RMap,
    build_rmap,
    check_nondegeneracy,
    check_ybe,
    derive_permutations,
    ig_cover,
    itype_to_ig,
    quadratic_relations,
)
from igmonoid.monoid import Presentation, build_monoid

from conftest import corpus_model

# x1x2 = x3x3, x2x1 = x4x4, x1x3 = x2x4, x1x4 = x4x2, x2x3 = x3x1, x3x2 = x4x1
FOUR = IRelations(4, (
    ((0, 1), (2, 2)), ((1, 0), (3, 3)), ((0, 2), (1, 3)),
    ((0, 3), (3, 1)), ((1, 2), (2, 0)), ((2, 1), (3, 0)),
))


def cycles(n, *cyc):
    """Permutation of ``range(n)`` from 1-based cycles."""
    p = list(range(n))
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a - 1] = b - 1
    return tuple(p)


def commuting(n):
    return IRelations(n, tuple(((i, j), (j, i)) for i in range(n) for j in range(i + 1, n)))


def braid_oracle(table, n):
    def r(i, j):
        return table[i * n + j]

    for x, y, z in product(range(n), repeat=3):
        def r1(t):
            a, b = r(t[0], t[1])
            return (a, b, t[2])

        def r2(t):
            b, c = r(t[1], t[2])
            return (t[0], b, c)

        if r1(r2(r1((x, y, z)))) != r2(r1(r2((x, y, z)))):
            return False
    return True


# ------------------------------------------------------------------ r-maps


def test_empty_relation_set_gives_identity():
    r = build_rmap(IRelations(1, ()))
    assert r(0, 0) == (0, 0)
    assert check_ybe(r).ok


def test_rmap_values():
    r = build_rmap(FOUR)
    assert r(0, 1) == (2, 2)
    assert r(1, 0) == (3, 3)
    assert r(2, 2) == (0, 1)


def test_duplicate_words_are_rejected():
    with pytest.raises(DuplicateWord):
        IRelations(2, (((0, 1), (0, 1)),))
    with pytest.raises(DuplicateWord):
        IRelations(3, (((0, 1), (1, 0)), ((0, 1), (2, 2)), ((0, 2), (2, 0))))
    with pytest.raises(ValueError):
        IRelations(3, (((0, 1), (1, 0)),))


def test_ybe_examples():
    assert check_ybe(build_rmap(FOUR)).ok
    n = 3
    swap = RMap(n, tuple((j, i) for i in range(n) for j in range(n)))
    assert check_ybe(swap).ok
    assert check_nondegeneracy(swap) == (True, True)
    bad = build_rmap(IRelations(3, (((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2)))))
    res = check_ybe(bad)
    assert not res.ok and res.violation is not None


def test_nondegeneracy_examples():
    assert check_nondegeneracy(build_rmap(FOUR)) == (True, True)


words3 = [(i, j) for i in range(3) for j in range(3)]


@settings(max_examples=150, deadline=None)
@given(st.permutations(words3))
def test_ybe_agrees_with_direct_braid_check(ws):
    rel = IRelations(3, tuple((ws[2 * k], ws[2 * k + 1]) for k in range(3)))
    r = build_rmap(rel)
    assert check_ybe(r).ok == braid_oracle(r.table, 3)


# ------------------------------------------------------------ permutations


def test_derived_permutations():
    d = derive_permutations(FOUR)
    assert d.sigmas == (cycles(4, (2, 3)), cycles(4, (1, 4)), cycles(4, (1, 2, 4, 3)), cycles(4, (1, 3, 4, 2)))
    assert d.group_order == 8


def compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def test_dihedral_relations():
    s1, _, s3, _ = derive_permutations(FOUR).sigmas
    a, b = s3, s1
    e = tuple(range(4))

    def pw(p, k):
        out = e
        for _ in range(k):
            out = compose(out, p)
        return out

    assert pw(a, 4) == e and pw(a, 2) != e
    assert compose(b, b) == e
    assert compose(pw(a, 3), b) == compose(b, a)


def test_commuting_relations_give_identities():
    d = derive_permutations(commuting(3))
    assert all(s == (0, 1, 2) for s in d.sigmas)
    assert d.group_order == 1


# ------------------------------------------------------------- I-type to IG


def test_free_abelian_relations():
    t = itype_to_ig(commuting(3))
    assert t.ig.cocycle.kernel == Sublattice.full(3)
    assert t.ig.cocycle.values == (0,)


def test_four_generator_monoid():
    t = itype_to_ig(FOUR)
    s = t.ig
    assert s.action.order == 8
    assert set(s.cocycle.values) == set(range(8))
    assert s.action.perms[s.phi(s.base.images[0])] == cycles(4, (2, 3))


def test_round_trip_of_permutations():
    t = itype_to_ig(FOUR)
    s = t.ig
    back = tuple(s.action.perms[s.phi(g)] for g in s.base.images)
    assert back == derive_permutations(FOUR).sigmas == t.sigmas
    assert quadratic_relations(s) == IRelations(4, tuple(sorted(tuple(sorted(r)) for r in FOUR.relations)))


def test_relations_hold_in_the_monoid():
    s = itype_to_ig(FOUR).ig
    x = [s.generator(i) for i in range(4)]
    for (i, j), (k, l) in FOUR.relations:
        assert multiply(s, x[i], x[j]) == multiply(s, x[k], x[l])


def word_classes(rel, d):
    """Words of length ``d`` up to the relations applied to adjacent letters."""
    swap = {}
    for a, b in rel.relations:
        swap[a] = b
        swap[b] = a
    seen = {}
    classes = 0
    for w in product(range(rel.n), repeat=d):
        if w in seen:
            continue
        stack = [w]
        seen[w] = classes
        while stack:
            u = stack.pop()
            for i in range(d - 1):
                if (u[i], u[i + 1]) in swap:
                    a, b = swap[(u[i], u[i + 1])]
                    v = u[:i] + (a, b) + u[i + 2:]
                    if v not in seen:
                        seen[v] = classes
                        stack.append(v)
        classes += 1
    return seen, classes


@pytest.mark.parametrize("d", [2, 3, 4])
def test_projection_is_bijective_on_words(d):
    s = itype_to_ig(FOUR).ig
    seen, classes = word_classes(FOUR, d)
    assert classes == comb(4 + d - 1, d)
    value = {}
    for w, c in seen.items():
        x = s.identity
        for i in w:
            x = multiply(s, x, s.generator(i))
        assert value.setdefault(c, x) == x
    assert len(set(value.values())) == classes


def test_period_inference_needs_enough_degree():
    with pytest.raises(PeriodInferenceFailed):
        itype_to_ig(FOUR, degree=2)


def test_braid_failure_is_a_precondition_error():
    with pytest.raises(PreconditionUnmet):
        itype_to_ig(IRelations(3, (((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2)))))


# ----------------------------------------------------------------- covers


def test_cover_of_trivial_group():
    a = build_monoid(Presentation.free(["x", "y"]))
    s = build_ig(a, GenAction.trivial(2, 2), CosetCocycle(Sublattice.full(2), (0,)))
    c = ig_cover(s)
    assert c.m == 2
    assert c.kernel.rank == 0
    assert c.report.ok


def test_cover_of_swap_monoid():
    s = corpus_model("and.igm").ig
    c = ig_cover(s, degree=3)
    assert c.m == 8
    assert c.report.ok
    sigma = s.action.index_of_perm((1, 0, 3, 2))
    assert c.covering_map[sigma * 4 + 0] == s.base.images[1]
    # B is invariant under every group element of the cover
    t = c.cover.ig
    for m in t.action.matrices:
        for b in c.kernel.basis:
            assert tuple(sum(x * y for x, y in zip(row, b)) for row in m) in c.kernel
    assert len(c.cover.relations.relations) == 28


def test_cover_map_is_a_morphism_on_generator_pairs():
    s = corpus_model("and.igm").ig
    c = ig_cover(s)
    t = c.cover.ig
    f = c.covering_map

    def image(x):
        return tuple(sum(k * v[i] for k, v in zip(x, f)) for i in range(s.rank))

    for i, j in product(range(c.m), repeat=2):
        prod = multiply(t, t.generator(i), t.generator(j))
        expect = multiply(s, s.element(f[i]), s.element(f[j]))
        assert image(prod.translation) == expect.translation
