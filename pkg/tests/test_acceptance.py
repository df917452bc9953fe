"""Acceptance criteria, one test each.

Every test records a PASS or FAIL line that is printed at the end of the
session (see ``conftest.py``); running this file directly prints the same
lines without pytest.
"""

from itertools import combinations, product

import pytest

from igmonoid.analysis import (
    NoneFoundUpToBound,
    divisorial_torsion_crosscheck,
    finite_normal_subgroup_search,
    is_maximal_order_s,
    is_torsion_free,
    non_maximal_witness,
    prime_orbits,
    primes_of_s,
)
from igmonoid.cli import run_corpus
from igmonoid.igcore import inverse, multiply, not_i_type_certificate, orbit_generators, power, verify_cocycle
from igmonoid.intlat import Sublattice
from igmonoid.itype import build_rmap, check_nondegeneracy, check_ybe, derive_permutations, ig_cover
from igmonoid.monoid import (
    AffineMonoid,
    divisorial_factorization,
    indecomposables,
    is_maximal_order,
    minimal_primes,
)

from conftest import corpus_model
from test_analysis import verify_witness
from test_itype import FOUR, compose, cycles
from test_monoid import normal_oracle

RESULTS: dict[int, tuple[bool, str]] = {}

SUMMARIES = {
    1: "swap example: minimal primes and divisorial factorizations",
    2: "swap example: torsion-free, primes of S, maximal order",
    3: "final example: primes, non-maximal verdict and witness",
    4: "dihedral torsion example: witness and no finite normal subgroup",
    5: "infinite dihedral input: torsion witness and relations",
    6: "four-generator relations: braid relation, permutations, group of order 8",
    7: "degree-three Veronese monoid: 20 indecomposables, maximal order",
    8: "I-type cover of the swap example",
    9: "property suites and golden reports",
}


def named(m, p):
    return tuple(sorted(m.base.names[i] for i in p.generators))


def check_1():
    m = corpus_model("and.igm")
    a = m.base
    primes = minimal_primes(a)
    labels = [named(m, p) for p in primes]
    q = {lab: i for i, lab in enumerate(labels)}
    assert set(labels) == {("u1", "u3"), ("u1", "u4"), ("u2", "u3"), ("u2", "u4")}
    q1, q2, q3, q4 = (q[("u1", "u3")], q[("u1", "u4")], q[("u2", "u3")], q[("u2", "u4")])

    def divisor(i, *expected):
        d = divisorial_factorization(a, a.images[i]).exponents
        want = [0] * 4
        for k in expected:
            want[k] += 1
        assert list(d) == want

    divisor(0, q1, q2)
    divisor(1, q3, q4)
    divisor(2, q1, q3)


def check_2():
    m = corpus_model("and.igm")
    s = m.ig
    assert is_torsion_free(s).torsion_free is True
    assert divisorial_torsion_crosscheck(s) is True
    got = {frozenset(named(m, q) for q in p.primes) for p in primes_of_s(s, 1)}
    assert got == {frozenset({("u1", "u3"), ("u2", "u4")}), frozenset({("u1", "u4"), ("u2", "u3")})}
    assert is_maximal_order_s(s).verdict is True


def check_3():
    m = corpus_model("nonmax.igm")
    s = m.ig
    assert is_maximal_order(s.base)
    assert len(minimal_primes(s.base)) == 3
    assert is_torsion_free(s).torsion_free
    ps = primes_of_s(s, 1)
    assert sorted(tuple(named(m, q) for q in p.primes) for p in ps) == [
        (("u1", "u4"),), (("u2", "u4"),), (("u3", "u4"),)]
    assert is_maximal_order_s(s).verdict is False
    w = non_maximal_witness(s, 2)
    assert w is not None
    assert verify_witness(s, w.element, w.ideal)


def check_4():
    m = corpus_model("torsionex.igm")
    s = m.ig
    res = is_torsion_free(s)
    assert res.torsion_free is False
    w = res.witness
    assert w.order == 2 and power(s, w.element, 2) == s.identity and w.element != s.identity
    u1, u2, u3, u4 = s.base.images
    assert w.element.translation == tuple(c - b for b, c in zip(u2, u3))
    assert m.group_label(s, w.element.group) == "(12)(34)"
    assert isinstance(finite_normal_subgroup_search(s, 3), NoneFoundUpToBound)


def check_5():
    s = corpus_model("dinfty.igm").ig
    res = is_torsion_free(s)
    assert res.torsion_free is False and res.witness.order == 2
    b = res.witness.element
    a = s.element((2,))
    assert multiply(s, b, b) == s.identity
    assert multiply(s, multiply(s, b, a), inverse(s, b)) == inverse(s, a)


def check_6():
    r = build_rmap(FOUR)
    assert check_ybe(r).ok
    assert check_nondegeneracy(r) == (True, True)
    d = derive_permutations(FOUR)
    assert d.sigmas == (cycles(4, (2, 3)), cycles(4, (1, 4)), cycles(4, (1, 2, 4, 3)), cycles(4, (1, 3, 4, 2)))
    assert d.group_order == 8
    a, b = d.sigmas[2], d.sigmas[0]
    e = tuple(range(4))
    a2 = compose(a, a)
    a3 = compose(a2, a)
    assert compose(a2, a2) == e and compose(b, b) == e
    assert compose(a3, b) == compose(b, a)


def check_7():
    s = corpus_model("belvb-veronese.igm").ig
    assert len(indecomposables(s.base)) == 20
    assert is_maximal_order(s.base)
    c = not_i_type_certificate(s)
    assert c is not None and (c.rank, c.indecomposables) == (4, 20)
    assert is_maximal_order_s(s).verdict is True


def check_8():
    s = corpus_model("and.igm").ig
    c = ig_cover(s, degree=3)
    assert c.m == 8
    assert c.report.morphism and c.report.onto and c.report.degree == 3
    assert c.report.kernel_invariant
    assert c.report.ok


def _small_rank2_generators():
    pts = [p for p in product(range(3), repeat=2) if any(p)]
    for k in (2, 3):
        for gens in combinations(pts, k):
            lat = Sublattice.span(gens, 2)
            if lat.is_full_rank and lat.index() == 1:
                yield list(gens)


def check_9():
    names = ["and.igm", "torsionex.igm", "dinfty.igm", "nonmax.igm", "belvb.irel", "belvb-veronese.igm"]
    for name in names:
        s = corpus_model(name).ig
        assert verify_cocycle(s.cocycle, s.action).ok
        gens = [s.element(b) for b in orbit_generators(s)][:8]
        for x, y, z in product(gens, repeat=3):
            assert multiply(s, multiply(s, x, y), z) == multiply(s, x, multiply(s, y, z))
        if name == "dinfty.igm":
            continue
        assert is_torsion_free(s).torsion_free == divisorial_torsion_crosscheck(s)
        ps = primes_of_s(s, 1, require_torsion_free=False)
        for k, orbit in enumerate(prime_orbits(s, 1)):
            parts = [q.facets for p in ps if p.orbit == k for q in p.primes]
            assert sorted(parts, key=sorted) == sorted((q.facets for q in orbit), key=sorted)
    for gens in _small_rank2_generators():
        assert is_maximal_order(AffineMonoid.from_points(gens)) == normal_oracle(gens)
    _, ok = run_corpus(False)
    assert ok


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5,
          6: check_6, 7: check_7, 8: check_8, 9: check_9}


def evaluate(k: int) -> tuple[bool, str]:
    try:
        CHECKS[k]()
    except AssertionError as e:
        return False, f"assertion failed {e}".strip()
    return True, ""


def line(k: int, ok: bool, why: str = "") -> str:
    text = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {SUMMARIES[k]}"
    return text + (f"  ({why})" if why and not ok else "")


@pytest.mark.parametrize("k", sorted(CHECKS))
def test_criterion(k):
    ok, why = evaluate(k)
    RESULTS[k] = (ok, why)
    print(line(k, ok, why))
    assert ok, why


if __name__ == "__main__":
    for k in sorted(CHECKS):
        print(line(k, *evaluate(k)))
