"""Label strings, 012-strings and the Pieri relations on them.

Labels are the integers 0..7.  0, 1, 2 are simple; 3..7 are composed and
abbreviate the simple strings 10, 21, 20, 2(10) and (21)0.
"""
from dataclasses import dataclass
from typing import Optional

SIMPLE = frozenset((0, 1, 2))
COMPOSED = frozenset((3, 4, 5, 6, 7))

# composed label -> simple string it abbreviates
DECOMPOSITION = {0: "0", 1: "1", 2: "2", 3: "10", 4: "21", 5: "20", 6: "210", 7: "210"}

_DUAL = {0: 2, 1: 1, 2: 0, 3: 4, 4: 3, 5: 5, 6: 7, 7: 6}


class NotCommutable(ValueError):
    pass


def parse(text):
    """Parse a bare digit string such as "04730202245" into a tuple."""
    text = text.strip()
    if any(ch not in "01234567" for ch in text):
        raise ValueError(f"invalid label string {text!r}: labels must be digits 0-7")
    return tuple(int(ch) for ch in text)


def fmt(u):
    return "".join(str(x) for x in u)


def is_012(u):
    return all(x in SIMPLE for x in u)


def _require_012(u, what="string"):
    if not is_012(u):
        raise ValueError(f"{what} {fmt(u)} is not a 012-string")


def inversions(u):
    _require_012(u)
    n = len(u)
    return sum(1 for i in range(n) for j in range(i + 1, n) if u[i] > u[j])


def reverse(u):
    return tuple(reversed(u))


def hat(u):
    _require_012(u)
    return tuple(2 - x for x in reversed(u))


def dual_label(x):
    return _DUAL[x]


def content(u):
    """(a, b, n) for a 012-string."""
    _require_012(u)
    a = u.count(0)
    return a, a + u.count(1), len(u)


def strings012(a, b, n):
    """All 012-strings for Fl(a,b;n) in lexicographic order."""
    out = []

    def rec(prefix, z, o, t):
        if z == o == t == 0:
            out.append(tuple(prefix))
            return
        for lab, left in ((0, z), (1, o), (2, t)):
            if left:
                prefix.append(lab)
                rec(prefix, z - (lab == 0), o - (lab == 1), t - (lab == 2))
                prefix.pop()

    rec([], a, b - a, n - b)
    return out


def identity_string(a, b, n):
    return (0,) * a + (1,) * (b - a) + (2,) * (n - b)


# -- Pieri relation on 012-strings ------------------------------------------

def _swaps_012(u, start):
    n = len(u)
    for i in range(start, n):
        if u[i] not in (0, 1):
            continue
        for j in range(i + 1, n):
            if u[j] == 2:
                w = list(u)
                w[i], w[j] = w[j], w[i]
                yield tuple(w), i, j
                break
            if not u[j] < u[i]:
                break


def pieri_successors_012(u, p):
    """All u' with u ->p u' for the Pieri formula on 012-strings."""
    _require_012(u)
    res = set()

    def rec(s, k, start):
        if k == 0:
            res.add(s)
            return
        for w, _, j in _swaps_012(s, start):
            rec(w, k - 1, j)

    rec(tuple(u), p, 0)
    return res


# -- Pieri relation on label strings ----------------------------------------

@dataclass(frozen=True)
class PieriRule:
    type_tag: str
    a1: int
    b1: int
    a2: int
    b2: int
    allowed_middle: frozenset

    def __str__(self):
        mid = "".join(str(x) for x in sorted(self.allowed_middle))
        return f"{self.type_tag}:({self.a1}->{self.b1}) {mid or '-'} ({self.a2}->{self.b2})"


@dataclass(frozen=True)
class PieriStep:
    rule: PieriRule
    index: tuple  # (i, j), 1-based

    @property
    def type_tag(self):
        return self.rule.type_tag


@dataclass(frozen=True)
class PieriChain:
    strings: tuple
    steps: tuple

    def is_right_increasing(self):
        js = [s.index[1] for s in self.steps]
        return all(x < y for x, y in zip(js, js[1:]))


def _rules(rules):
    if rules is None:
        from .rulesets import default_tables
        return default_tables().rules
    return rules


def label_successors(u, rules=None):
    """All (v, step) with u ->1 v."""
    u = tuple(u)
    n = len(u)
    out = []
    for r in _rules(rules):
        for i in range(n):
            if u[i] != r.a1:
                continue
            for j in range(i + 1, n):
                if u[j] == r.a2:
                    w = list(u)
                    w[i], w[j] = r.b1, r.b2
                    out.append((tuple(w), PieriStep(r, (i + 1, j + 1))))
                if u[j] not in r.allowed_middle:
                    break
    return out


def label_predecessors(v, rules=None):
    """All (u, step) with u ->1 v."""
    v = tuple(v)
    n = len(v)
    out = []
    for r in _rules(rules):
        for i in range(n):
            if v[i] != r.b1:
                continue
            for j in range(i + 1, n):
                if v[j] == r.b2:
                    w = list(v)
                    w[i], w[j] = r.a1, r.a2
                    out.append((tuple(w), PieriStep(r, (i + 1, j + 1))))
                if v[j] not in r.allowed_middle:
                    break
    return out


def step_between(u, v, rules=None):
    """The unique step for u ->1 v, or None."""
    for w, st in label_successors(u, rules):
        if w == tuple(v):
            return st
    return None


def successors_p(u, p, rules=None):
    """All v with u ->p v (chain condition i_s < j_t for s <= t)."""
    rules = _rules(rules)
    res = set()
    seen = set()

    def rec(s, k, maxi):
        key = (s, k, maxi)
        if key in seen:
            return
        seen.add(key)
        if k == 0:
            res.add(s)
            return
        for w, st in label_successors(s, rules):
            i, j = st.index
            if j > maxi:
                rec(w, k - 1, max(maxi, i))

    rec(tuple(u), p, 0)
    return res


def predecessors_p(v, p, rules=None):
    """All u with u ->p v, using u ->p v iff reverse(v) ->p reverse(u)."""
    return {reverse(x) for x in successors_p(reverse(v), p, rules)}


def find_pieri_chain(u, v, p, rules=None) -> Optional[PieriChain]:
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise ValueError("length mismatch")
    rules = _rules(rules)
    dead = set()

    def rec(s, k, maxi):
        if k == 0:
            return ((s,), ()) if s == v else None
        if (s, k, maxi) in dead:
            return None
        for w, st in label_successors(s, rules):
            i, j = st.index
            if j <= maxi:
                continue
            sub = rec(w, k - 1, max(maxi, i))
            if sub:
                return (s,) + sub[0], (st,) + sub[1]
        dead.add((s, k, maxi))
        return None

    found = rec(u, p, 0)
    return PieriChain(*found) if found else None


def is_pieri_chain(strings, rules=None):
    """Check consecutive ->1 relations plus the chain condition."""
    maxi = 0
    for s, t in zip(strings, strings[1:]):
        st = step_between(s, t, rules)
        if st is None:
            return False
        i, j = st.index
        if j <= maxi:
            return False
        maxi = max(maxi, i)
    return True


def commute_pair(u, v, w, rules=None):
    """Given a chain u ->1 v ->1 w with nested indices, return the other middle string."""
    rules = _rules(rules)
    s1 = step_between(u, v, rules)
    s2 = step_between(v, w, rules)
    if s1 is None or s2 is None:
        raise ValueError("not a chain of single steps")
    (i, j), (k, l) = s1.index, s2.index
    nested = (i < k < l < j and (s1.type_tag, s2.type_tag) == ("E", "A")) or (
        k < i < j < l and (s1.type_tag, s2.type_tag) == ("A", "E"))
    if not nested:
        raise NotCommutable(f"indices {(i, j)}, {(k, l)} are not a nested A/E pair")
    m = list(u)
    m[k - 1], m[l - 1] = w[k - 1], w[l - 1]
    m = tuple(m)
    t1, t2 = step_between(u, m, rules), step_between(m, w, rules)
    if t1 is None or t2 is None:
        raise NotCommutable("commuted chain is not valid")
    return m


def right_increasing_normalize(chain, rules=None):
    strings = list(chain.strings)
    rules = _rules(rules)

    def idx(t):
        return step_between(strings[t], strings[t + 1], rules).index

    changed = True
    while changed:
        changed = False
        for t in range(len(strings) - 2):
            if idx(t + 1)[1] < idx(t)[1]:
                strings[t + 1] = commute_pair(strings[t], strings[t + 1], strings[t + 2], rules)
                changed = True
    steps = tuple(step_between(a, b, rules) for a, b in zip(strings, strings[1:]))
    return PieriChain(tuple(strings), steps)


def right_increasing_chain(u, v, p, rules=None) -> Optional[PieriChain]:
    """The unique right-increasing chain u ->p v, built from its last step backwards."""
    rules = _rules(rules)
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise ValueError("length mismatch")
    strings = [v]
    steps = []
    cur = v
    for _ in range(p):
        diff = [k for k in range(len(u)) if u[k] != cur[k]]
        if not diff:
            return None
        j = diff[-1]
        cands = [r for r in rules if (r.a2, r.b2) == (u[j], cur[j])]
        if not cands:
            return None
        S = cands[0].allowed_middle
        i = j - 1
        while i >= 0 and cur[i] in S:
            i -= 1
        if i < 0:
            return None
        rule = next((r for r in cands if r.b1 == cur[i]), None)
        if rule is None:
            return None
        prev = list(cur)
        prev[i], prev[j] = rule.a1, rule.a2
        cur = tuple(prev)
        strings.append(cur)
        steps.append(PieriStep(rule, (i + 1, j + 1)))
    if cur != u:
        return None
    strings.reverse()
    steps.reverse()
    js = [s.index[1] for s in steps]
    if any(a >= b for a, b in zip(js, js[1:])):
        return None
    if not is_pieri_chain(strings, rules):
        return None
    return PieriChain(tuple(strings), tuple(steps))
