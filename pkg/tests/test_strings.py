import itertools

import pytest
from hypothesis import given, settings, strategies as st

from flagpuzzle.strings import (NotCommutable, PieriChain, commute_pair, content, dual_label, find_pieri_chain,
                                fmt, hat, identity_string, inversions, is_012, is_pieri_chain, label_predecessors,
                                label_successors, parse, pieri_successors_012, predecessors_p, reverse,
                                right_increasing_chain, right_increasing_normalize, step_between,
                                strings012, successors_p)

labels = st.lists(st.integers(0, 7), min_size=1, max_size=8).map(tuple)
s012 = st.lists(st.integers(0, 2), min_size=0, max_size=9).map(tuple)


# -- brute force oracles, written from the definitions ----------------------

def brute_swaps(u):
    """Single swaps (i, j): u_i in {0,1}, u_j = 2, every entry between smaller than u_i."""
    for i, j in itertools.combinations(range(len(u)), 2):
        if u[i] in (0, 1) and u[j] == 2 and all(u[k] < u[i] for k in range(i + 1, j)):
            w = list(u)
            w[i], w[j] = w[j], w[i]
            yield tuple(w), i, j


def brute_pieri_012(u, p):
    out = set()
    frontier = [(tuple(u), -1)]
    for _ in range(p):
        frontier = [(w, j) for s, last in frontier for w, i, j in brute_swaps(s) if last <= i]
    for s, _ in frontier:
        out.add(s)
    return out


def all_label_chains(u, v, p):
    """Every Pieri chain u ->p v, by exhaustive search over single steps."""
    found = []

    def rec(strings, steps):
        if len(steps) == p:
            if strings[-1] == v:
                found.append((tuple(strings), tuple(steps)))
            return
        for w, stp in label_successors(strings[-1]):
            if all(s.index[0] < stp.index[1] for s in steps + [stp]):
                rec(strings + [w], steps + [stp])

    rec([tuple(u)], [])
    return found


# -- basics ----------------------------------------------------------------

def test_parse_fmt_roundtrip():
    assert parse("04730202245") == (0, 4, 7, 3, 0, 2, 0, 2, 2, 4, 5)
    assert fmt(parse("0241")) == "0241"
    with pytest.raises(ValueError):
        parse("01a")
    with pytest.raises(ValueError):
        parse("018")


@pytest.mark.parametrize("u,n", [((0, 1, 2), 0), ((2, 1, 0), 3), ((1, 0, 2), 1)])
def test_inversions(u, n):
    assert inversions(u) == n


def test_inversions_rejects_composed():
    with pytest.raises(ValueError):
        inversions((0, 3, 2))


def test_reverse_and_hat():
    assert reverse((0, 1, 2)) == (2, 1, 0)
    assert hat((0, 1, 2)) == (0, 1, 2)
    assert hat((0, 0, 1, 2, 2)) == (0, 0, 1, 2, 2)
    assert reverse((4, 7, 3)) == (3, 7, 4)
    with pytest.raises(ValueError):
        hat((0, 3, 2))


def test_dual_label_values():
    assert dual_label(3) == 4
    assert dual_label(5) == 5
    assert [dual_label(x) for x in range(8)] == [2, 1, 0, 4, 3, 5, 7, 6]


@given(st.integers(0, 7))
def test_dual_label_involution(x):
    assert dual_label(dual_label(x)) == x


@given(s012)
def test_hat_involution_and_inversions(u):
    assert hat(hat(u)) == u
    assert inversions(hat(u)) == inversions(u)


def test_strings012_counts():
    from math import comb
    for n in range(6):
        for a in range(n + 1):
            for b in range(a, n + 1):
                S = strings012(a, b, n)
                assert len(S) == comb(n, a) * comb(n - a, b - a)
                assert all(content(s) == (a, b, n) for s in S)
                assert S[0] == identity_string(a, b, n) and inversions(S[0]) == 0


# -- the 012 Pieri relation ------------------------------------------------

def test_pieri_012_displayed_chain():
    u = (0, 2, 1, 1, 0, 0, 2, 0, 2, 0, 2)
    assert (2, 0, 1, 2, 0, 0, 2, 0, 1, 2, 0) in pieri_successors_012(u, 4)


@given(s012)
def test_pieri_012_zero_steps(u):
    assert pieri_successors_012(u, 0) == {u}


def test_pieri_012_matches_brute_force():
    for n in range(1, 7):
        for u in itertools.product(range(3), repeat=n):
            for p in range(4):
                assert pieri_successors_012(u, p) == brute_pieri_012(u, p), (u, p)


def test_pieri_012_small_example():
    assert pieri_successors_012((0, 1, 2), 1) == brute_pieri_012((0, 1, 2), 1) == {(0, 2, 1)}


# -- the Pieri relation on label strings -------------------------------------

def test_rule_table_facts():
    from flagpuzzle.rulesets import default_tables
    rules = default_tables().rules
    assert len(rules) == 15
    for r in rules:
        assert r.a1 in {0, 1, 3, 7} and r.b2 in {0, 1, 3, 7}
        assert r.b1 in {2, 4, 5, 6} and r.a2 in {2, 4, 5, 6}
        assert r.allowed_middle <= {0, 2, 3, 4}


def test_label_step_example():
    u, v = parse("72130335644"), parse("72230337644")
    st_ = step_between(u, v)
    assert st_ is not None and st_.index == (3, 8) and st_.type_tag == "D"
    assert (st_.rule.a1, st_.rule.b1, st_.rule.a2, st_.rule.b2) == (1, 2, 5, 7)


def test_label_step_type_a():
    assert any(v == (2, 0) and s.type_tag == "A" and s.index == (1, 2) for v, s in label_successors((0, 2)))


@given(labels)
def test_step_is_unique_and_predecessors_agree(u):
    seen = {}
    for v, s in label_successors(u):
        assert v not in seen, "two steps between the same strings"
        seen[v] = s
        assert (u, s) in label_predecessors(v)


def test_only_two_rules_fire_on_012_strings():
    for n in range(1, 7):
        for u in itertools.product(range(3), repeat=n):
            for v, s in label_successors(u):
                assert is_012(v)
                assert (s.type_tag, s.rule.a2, s.rule.b2) in {("A", 2, 0), ("D", 2, 1)}


def test_label_relation_restricts_to_012_relation():
    for n in range(1, 8):
        for a in range(n + 1):
            for b in range(a, n + 1):
                for u in strings012(a, b, n):
                    for p in range(4):
                        lab = {x for x in successors_p(u, p) if is_012(x)}
                        assert lab == pieri_successors_012(u, p), (u, p)


def test_example_chain_is_right_increasing():
    u, v = parse("04730202245"), parse("40720522015")
    want = [parse(x) for x in ("04730202245", "40730202245", "40720302245", "40720320245", "40720322045",
                               "40720522015")]
    chain = right_increasing_chain(u, v, 5)
    assert chain is not None and list(chain.strings) == want
    assert chain.is_right_increasing() and is_pieri_chain(want)
    assert find_pieri_chain(u, v, 5) is not None
    assert right_increasing_normalize(chain) == chain


def test_empty_chain_and_length_mismatch():
    c = find_pieri_chain((0, 4), (0, 4), 0)
    assert c.strings == ((0, 4),) and c.steps == ()
    with pytest.raises(ValueError):
        find_pieri_chain((0, 2), (0, 2, 2), 1)


@settings(max_examples=60, deadline=None)
@given(labels, st.integers(0, 3))
def test_reverse_symmetry(u, p):
    for v in successors_p(u, p):
        assert reverse(u) in successors_p(reverse(v), p)
        assert u in predecessors_p(v, p)


# -- commuting nested steps and normalization --------------------------------

def _nested_pairs(max_len=4):
    for n in range(2, max_len + 1):
        for u in itertools.product(range(8), repeat=n):
            for v, s1 in label_successors(u):
                for w, s2 in label_successors(v):
                    (i, j), (k, l) = s1.index, s2.index
                    if i < l and (i < k < l < j or k < i < j < l):
                        yield u, v, w


def test_commute_pair_involution():
    count = 0
    for u, v, w in _nested_pairs():
        m = commute_pair(u, v, w)
        assert m != v
        assert commute_pair(u, m, w) == v
        assert is_pieri_chain([u, m, w])
        count += 1
    assert count > 0


def test_commute_pair_rejects_non_nested():
    u = (0, 2, 0, 2)
    v = (2, 0, 0, 2)
    w = (2, 0, 2, 0)
    assert is_pieri_chain([u, v, w])
    with pytest.raises(NotCommutable):
        commute_pair(u, v, w)


def test_crossing_in_type_ee_example():
    u, up = (3, 0, 0, 2, 2, 4), (5, 0, 2, 2, 0, 1)
    chains = all_label_chains(u, up, 3)
    ri = right_increasing_chain(u, up, 3)
    assert len(chains) >= 2
    assert sum(1 for s, st_ in chains if all(a.index[1] < b.index[1] for a, b in zip(st_, st_[1:]))) == 1
    crossing = 0
    for strings, steps in chains:
        assert right_increasing_normalize(PieriChain(strings, steps)) == ri
        for t in range(2):
            (i, j), (k, l) = steps[t].index, steps[t + 1].index
            if i < k < l < j:
                crossing += 1
                m = commute_pair(*strings[t:t + 3])
                assert step_between(strings[t], m).type_tag == steps[t + 1].type_tag
                assert step_between(m, strings[t + 2]).type_tag == steps[t].type_tag
    assert crossing > 0


def test_normalization_unique_small():
    """Every chain of length 2 or 3 between strings of length <= 4 normalizes to the same chain."""
    for n in range(2, 5):
        for u in itertools.product(range(8), repeat=n):
            for p in (2, 3):
                for v in successors_p(u, p):
                    chains = all_label_chains(u, v, p)
                    ri = right_increasing_chain(u, v, p)
                    assert ri is not None and ri.is_right_increasing()
                    for strings, steps in chains:
                        assert right_increasing_normalize(PieriChain(strings, steps)) == ri


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=5, max_size=6).map(tuple), st.integers(2, 3), st.randoms())
def test_normalization_unique_random(u, p, rnd):
    targets = sorted(successors_p(u, p))
    if not targets:
        return
    v = rnd.choice(targets)
    ri = right_increasing_chain(u, v, p)
    assert ri is not None and ri.is_right_increasing()
    for strings, steps in all_label_chains(u, v, p):
        assert right_increasing_normalize(PieriChain(strings, steps)) == ri
