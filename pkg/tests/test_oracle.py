import itertools

import pytest
from hypothesis import given, settings, strategies as st

from flagpuzzle import oracle
from flagpuzzle.oracle import (OracleRing, SchubertVector, SpecialClass, oracle_product, oracle_ring,
                               oracle_structure_constant, pieri_multiply, triple_intersection_oracle)
from flagpuzzle.strings import content, hat, identity_string, inversions, pieri_successors_012, reverse, strings012

SMALL = [(1, 2, 3), (1, 2, 4), (0, 2, 4), (2, 2, 4), (1, 3, 5), (2, 3, 5)]


def flags(max_n):
    for n in range(1, max_n + 1):
        for a in range(n + 1):
            for b in range(a, n + 1):
                yield a, b, n


def test_special_strings():
    assert SpecialClass("p", 2).string(1, 3, 6) == (0, 1, 2, 2, 1, 2)
    assert SpecialClass("p~", 1).string(2, 3, 5) == (0, 1, 0, 2, 2)
    for a, b, n in flags(6):
        for kind, top in (("p", n - b), ("p~", a)):
            for p in range(0, top + 1):
                if p and a == b and (a == 0 or b == n):
                    continue  # a point has no special classes of positive degree
                s = SpecialClass(kind, p).string(a, b, n)
                assert content(s) == (a, b, n) and inversions(s) == p
    with pytest.raises(ValueError):
        SpecialClass("p", 3).string(1, 2, 4)
    with pytest.raises(ValueError):
        SpecialClass("p", 1).string(0, 0, 3)
    with pytest.raises(ValueError):
        SpecialClass("p~", 1).string(3, 3, 3)


def test_pieri_from_identity_gives_special_class():
    for a, b, n in flags(6):
        e = SchubertVector.basis(identity_string(a, b, n))
        for kind, top in (("p", n - b), ("p~", a)):
            for p in range(0, top + 1):
                if p and a == b and (a == 0 or b == n):
                    continue
                s = SpecialClass(kind, p)
                assert pieri_multiply(s, e).coeffs == {s.string(a, b, n): 1}


def test_pieri_degree_zero_is_identity():
    x = SchubertVector(1, 2, 4, {(0, 1, 2, 2): 2, (1, 0, 2, 2): -1})
    assert pieri_multiply(SpecialClass("p", 0), x) == x
    assert pieri_multiply(SpecialClass("p~", 0), x) == x


def test_tilde_action_conjugates_by_hat():
    s = SpecialClass("p~", 1)
    for u in strings012(2, 3, 5):
        got = set(pieri_multiply(s, SchubertVector.basis(u)).coeffs)
        assert got == {hat(x) for x in pieri_successors_012(hat(u), 1)}


@pytest.mark.parametrize("flag", SMALL)
def test_generators_commute(flag):
    ring = oracle_ring(*flag)
    for g, h in itertools.combinations(range(len(ring.gens)), 2):
        for u in ring.strings:
            assert ring.apply((g, h), u) == ring.apply((h, g), u)


@pytest.mark.parametrize("flag", SMALL)
def test_ring_axioms(flag):
    ring = oracle_ring(*flag)
    S = ring.strings
    e = identity_string(*flag)
    for u in S:
        assert ring.product(e, u) == {u: 1}
        for v in S:
            assert ring.product(u, v) == ring.product(v, u)
    for u, v, w in itertools.product(S[:6], S, S[:6]):
        left, right = {}, {}
        for x, c in ring.product(u, v).items():
            for y, d in ring.product(x, w).items():
                left[y] = left.get(y, 0) + c * d
        for x, c in ring.product(v, w).items():
            for y, d in ring.product(u, x).items():
                right[y] = right.get(y, 0) + c * d
        assert left == right


@pytest.mark.parametrize("flag", SMALL)
def test_pairing_and_symmetry(flag):
    S = strings012(*flag)
    e = identity_string(*flag)
    for u in S:
        for w in S:
            assert triple_intersection_oracle(e, u, w) == (1 if w == reverse(u) else 0)
    for u, v, w in itertools.product(S, repeat=3):
        c = triple_intersection_oracle(u, v, w)
        assert c >= 0
        if inversions(u) + inversions(v) + inversions(w) != inversions(S[-1]):
            assert c == 0
        assert c == triple_intersection_oracle(v, w, u) == triple_intersection_oracle(v, u, w)


def test_grassmannian_textbook_value():
    # sigma_1 squared on G(2,4) is sigma_2 + sigma_11
    s1 = SpecialClass("p", 1).string(2, 2, 4)
    prod = oracle_product(s1, s1)
    assert sorted(prod.values()) == [1, 1] and all(inversions(w) == 2 for w in prod)


@pytest.mark.parametrize("flag", [(1, 2, 4), (1, 3, 5), (2, 4, 6)])
def test_seed_independence(flag):
    ring = oracle_ring(*flag)
    other = OracleRing(*flag, seed=17)
    for u in ring.strings:
        for v in ring.strings:
            assert ring.product(u, v) == other.product(u, v)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(1, 2, 4), (1, 3, 5)]), st.data())
def test_structure_constant_matches_triple(flag, data):
    S = strings012(*flag)
    u, v, w = (data.draw(st.sampled_from(S)) for _ in range(3))
    assert oracle_structure_constant(u, v, w) == oracle_product(u, v).get(w, 0)
    assert oracle_structure_constant(u, v, w) == triple_intersection_oracle(u, v, reverse(w))


def test_mixed_flags_rejected():
    with pytest.raises(ValueError):
        triple_intersection_oracle((0, 1, 2), (0, 2, 2), (0, 1, 2))


def test_generation_failure_is_reported():
    ring = oracle_ring(1, 2, 4)
    broken = object.__new__(OracleRing)
    broken.__dict__.update(ring.__dict__)
    broken.gens = ring.gens[:1]
    broken.ops = ring.ops[:1]
    broken._apply_memo = {}
    with pytest.raises(oracle.GenerationFailure):
        broken._build()
