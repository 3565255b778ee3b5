"""Gashed single-row puzzles, the propagation map and its multi-step forms.

A single-row puzzle with border (c1, top, bottom, c2) and l columns has
slanted edges d[0..2l]; cell s is a down triangle (top[s/2], d[s+1], d[s])
for even s and an up triangle (d[s], d[s+1], bottom[(s-1)/2]) for odd s.

Propagating a gash builds the new row Q from left to right.  The "front" is
the slanted edge f up to which Q is known; beyond it Q agrees with the
original row P except for the new top labels.
"""
from dataclasses import dataclass, field
from typing import Optional

from .rulesets import default_tables
from .strings import (content, label_predecessors, right_increasing_chain, reverse,
                      step_between)

ALLOWED_INTERIOR = frozenset([
    (0, 0, 0), (0, 5, 2), (3, 1, 0), (3, 6, 2),  # up triangles (left, right, bottom)
    ("d", 0, 0, 0), ("d", 2, 0, 5), ("d", 0, 3, 1), ("d", 2, 3, 6),  # down (top, right, left)
])


class PropagationDefect(RuntimeError):
    """No swap region, or more than one, applies to a gashed row."""


class PropertyViolation(AssertionError):
    pass


@dataclass(frozen=True)
class SingleRowPuzzle:
    c1: int
    top: tuple
    bottom: tuple
    c2: int
    diags: tuple

    @classmethod
    def from_border(cls, c1, top, bottom, c2, tables=None):
        """The unique filling with this border (any two labels of a piece fix the third)."""
        eng = engine(tables)
        d = eng.diags(c1, tuple(top), tuple(bottom))
        if d is None or d[-1] != c2:
            raise ValueError(f"no single-row puzzle with border ({c1}, {_s(top)}, {_s(bottom)}, {c2})")
        return cls(c1, tuple(top), tuple(bottom), c2, d)

    @property
    def length(self):
        return len(self.top)

    def border(self):
        return self.c1, self.top, self.bottom, self.c2

    def triangles(self):
        d = self.diags
        out = []
        for s in range(2 * self.length):
            if s % 2 == 0:
                out.append((self.top[s // 2], d[s + 1], d[s]))
            else:
                out.append((d[s], d[s + 1], self.bottom[s // 2]))
        return out

    def is_valid(self, tables=None):
        valid = engine(tables).t.valid
        simple = self.c1 in (0, 1, 2) and self.c2 in (0, 1, 2)
        return simple and self.diags[0] == self.c1 and self.diags[-1] == self.c2 and all(
            tri in valid for tri in self.triangles())

    def serialize(self):
        return f"({self.c1}, {_s(self.top)}, {_s(self.bottom)}, {self.c2}) D={_s(self.diags)}"


def _s(x):
    return "".join(str(a) for a in x)


def rotate180(P):
    """Border (c1, u, v, c2) becomes (c2, reverse v, reverse u, c1)."""
    return SingleRowPuzzle(P.c2, reverse(P.bottom), reverse(P.top), P.c1, reverse(P.diags))


@dataclass
class GashedRow:
    """Row P with a gash moving through it.

    ``new_top`` replaces P's top labels.  Q is known on diagonals 0..front and
    on the bottom edges left of the front.  state is 'top', 'mid' or 'bottom'.
    """
    base: SingleRowPuzzle
    new_top: tuple
    type_tag: str
    index: tuple
    state: str = "top"
    front: int = 0
    qd: tuple = ()
    qb: tuple = ()

    def labels(self):
        """(new, original) label pairs on the current top, bottom and slanted edges."""
        P, f = self.base, self.front
        top = [(self.new_top[k], P.top[k]) for k in range(P.length)]
        bottom = [(self.qb[k], P.bottom[k]) if k < len(self.qb) else (P.bottom[k],) * 2
                  for k in range(P.length)]
        diags = [(self.qd[s], P.diags[s]) if s < len(self.qd) else (P.diags[s],) * 2
                 for s in range(len(P.diags))]
        return top, bottom, diags

    def render(self):
        top, bottom, diags = self.labels()

        def cell(p):
            return f"{p[0]}" if p[0] == p[1] else f"{p[0]}/{p[1]}"

        n = self.base.length
        line1 = "top    " + " ".join(cell(top[k]).center(5) for k in range(n))
        line2 = "diag   " + " ".join(cell(d) for d in diags)
        line3 = "bottom " + " ".join(cell(bottom[k]).center(5) for k in range(n))
        return f"[{self.type_tag} {self.state}]\n{line1}\n{line2}\n{line3}"

    def finished(self):
        """Erase the gash: new labels on top, Q's bottom labels."""
        P = self.base
        return SingleRowPuzzle(P.c1, self.new_top, tuple(self.qb), P.c2, tuple(self.qd))


@dataclass
class TraceStep:
    region: str
    start: int  # first cell of the window
    end: int  # slanted edge closing the window
    row: GashedRow


@dataclass
class PropagationTrace:
    steps: list = field(default_factory=list)

    @property
    def names(self):
        return [s.region for s in self.steps]


# -- the table driven engine -------------------------------------------------

class _Region:
    __slots__ = ("name", "X", "Y", "anchor", "terminal", "first_T", "d0", "q0", "segs", "src")

    def __init__(self, r):
        self.src = r
        self.name, self.X, self.Y = r.name, r.before_type, r.after_type
        self.anchor, self.terminal = r.anchor, r.terminal
        self.first_T = r.kinds[0] == "T"
        self.d0, self.q0 = r.pd[0], r.qd[0]
        cells = [(r.kinds[s] == "T", r.ph[s], r.qh[s], r.pd[s + 1], r.qd[s + 1]) for s in range(r.size)]
        self.segs = []
        for kind, s in r.segments():
            self.segs.append(("c", cells[s]) if kind == "cell" else ("g", (cells[s], cells[s + 1])))


def _match(segs, s, old, new, bot, Pd, end):
    """All ways the window pattern fits row position s: list of (end, cells)."""
    out = []

    def ok(c, s):
        if s >= end:
            return False
        isT, ph, qh, pd, _ = c
        if isT != (s % 2 == 0):
            return False
        k = s >> 1
        if isT:
            if old[k] != ph or new[k] != qh:
                return False
        elif bot[k] != ph:
            return False
        return Pd[s + 1] == pd

    def rec(i, s, acc):
        if i == len(segs):
            out.append((s, acc))
            return
        kind, c = segs[i]
        if kind == "c":
            if ok(c, s):
                rec(i + 1, s + 1, acc + (c,))
            return
        a, b = c
        while True:
            rec(i + 1, s, acc)
            if ok(a, s) and ok(b, s + 1):
                acc = acc + (a, b)
                s += 2
            else:
                break

    rec(0, s, ())
    return out


class Engine:
    def __init__(self, t):
        self.t = t
        self.third = {(x, z): y for x, y, z in t.valid}
        self.legs = {X: [] for X in "ABCDEF"}
        self.fronts = {}
        for r in t.regions.values():
            c = _Region(r)
            if c.anchor == "leg":
                self.legs[c.X].append(c)
            else:
                self.fronts.setdefault((c.X, c.q0, c.d0, c.first_T), []).append(c)
        self.rule_by_pair = {(r.a1, r.b1, r.a2, r.b2): r for r in t.rules}
        self.cont_memo = {}
        self.single_memo = {}
        self.pred_memo = {}

    def diags(self, c1, top, bottom):
        d = [c1]
        third = self.third
        for s in range(2 * len(top)):
            key = (top[s >> 1], d[-1]) if s % 2 == 0 else (d[-1], bottom[s >> 1])
            y = third.get(key)
            if y is None:
                return None
            d.append(y)
        return tuple(d)

    def preds(self, s):
        """[(w, i, j, type)] with w ->1 s, 1-based indices."""
        r = self.pred_memo.get(s)
        if r is None:
            r = [(w, st.index[0], st.index[1], st.type_tag) for w, st in label_predecessors(s, self.t.rules)]
            self.pred_memo[s] = r
        return r

    # one region application
    def _leg_step(self, X, P, new, legcell):
        matches = []
        Pd, old, bot = P.diags, P.top, P.bottom
        end = len(Pd) - 1
        for r in self.legs[X]:
            for lo in range(legcell + 1):
                if Pd[lo] != r.d0 or r.first_T != (lo % 2 == 0):
                    continue
                for s_end, cells in _match(r.segs, lo, old, new, bot, Pd, end):
                    matches.append((r, lo, s_end, cells))
        return matches

    def _front_step(self, X, qdf, f, P, new):
        matches = []
        Pd = P.diags
        end = len(Pd) - 1
        for r in self.fronts.get((X, qdf, Pd[f], f % 2 == 0), ()):
            for s_end, cells in _match(r.segs, f, P.top, new, P.bottom, Pd, end):
                matches.append((r, f, s_end, cells))
        return matches

    def _pick(self, matches, g):
        if len(matches) == 1:
            return matches[0]
        what = "no swap region applies" if not matches else "ambiguous swap regions " + ",".join(
            f"{m[0].name}@{m[1]}" for m in matches)
        raise PropagationDefect(f"{what} to gashed row {g.base.serialize()} new top {_s(g.new_top)} "
                                f"front {g.front} type {g.type_tag}")

    @staticmethod
    def _apply(qd, qb, cells):
        qd, qb = list(qd), list(qb)
        for isT, _, qh, _, q in cells:
            if not isT:
                qb.append(qh)
            qd.append(q)
        return qd, qb

    def propagate(self, P, new, X, index, record=False):
        """Propagate a top gash to the bottom.  Returns (Q, region names, trace or None)."""
        i, j = index
        legcell = 2 * (i - 1)
        g = GashedRow(P, new, X, index)
        trace = PropagationTrace() if record else None
        r, lo, s_end, cells = self._pick(self._leg_step(X, P, new, legcell), g)
        qd, qb = self._apply(P.diags[:lo + 1], P.bottom[:lo // 2], cells)
        names = [r.name]
        if record:
            trace.steps.append(TraceStep(r.name, lo, s_end, self._snapshot(g, r, s_end, qd, qb)))
        if r.terminal:
            qd, qb = self._finish(g, r, s_end, qd, qb)
            Q = SingleRowPuzzle(P.c1, new, tuple(qb), P.c2, tuple(qd))
            if record:
                trace.steps[-1].row = self._snapshot(g, r, s_end, qd, qb, done=True)
            return Q, names, trace
        if record:
            f, Y = s_end, r.Y
            while True:
                g2 = GashedRow(P, new, Y, index, "mid", f, tuple(qd), tuple(qb))
                r, lo, s_end, cells = self._pick(self._front_step(Y, qd[f], f, P, new), g2)
                qd, qb = self._apply(qd, qb, cells)
                names.append(r.name)
                if r.terminal:
                    qd, qb = self._finish(g2, r, s_end, qd, qb)
                    trace.steps.append(TraceStep(r.name, lo, s_end, self._snapshot(g, r, s_end, qd, qb, True)))
                    break
                trace.steps.append(TraceStep(r.name, lo, s_end, self._snapshot(g, r, s_end, qd, qb)))
                f, Y = s_end, r.Y
            return SingleRowPuzzle(P.c1, new, tuple(qb), P.c2, tuple(qd)), names, trace
        tail_names, qd_t, qb_t = self._cont(r.Y, qd[s_end], s_end, P, new, g)
        Q = SingleRowPuzzle(P.c1, new, tuple(qb) + qb_t, P.c2, tuple(qd) + qd_t)
        return Q, names + list(tail_names), None

    def _cont(self, Y, qdf, f, P, new, g):
        """Propagation from a front at slanted edge f; memoized on the row suffix."""
        kt, kb = (f + 1) // 2, f // 2
        key = (Y, qdf, f & 1, P.diags[f:], P.top[kt:], new[kt:], P.bottom[kb:])
        hit = self.cont_memo.get(key)
        if hit is not None:
            return hit
        g2 = GashedRow(P, new, Y, g.index, "mid", f, (), ())
        r, lo, s_end, cells = self._pick(self._front_step(Y, qdf, f, P, new), g2)
        qd, qb = self._apply((), (), cells)
        if r.terminal:
            end = len(P.diags) - 1
            if qd[-1] != P.diags[s_end]:
                raise PropagationDefect(f"terminal region {r.name} leaves a mismatched slanted edge")
            qd += P.diags[s_end + 1:]
            qb += P.bottom[kb + len(qb):]
            res = ((r.name,), tuple(qd), tuple(qb))
            assert len(qd) == end - f
        else:
            if s_end >= len(P.diags) - 1:
                raise PropagationDefect(f"region {r.name} pushes the gash past the right border")
            n2, qd2, qb2 = self._cont(r.Y, qd[-1], s_end, P, new, g)
            res = ((r.name,) + n2, tuple(qd) + qd2, tuple(qb) + qb2)
        self.cont_memo[key] = res
        return res

    def _finish(self, g, r, s_end, qd, qb):
        P = g.base
        if qd[-1] != P.diags[s_end]:
            raise PropagationDefect(f"terminal region {r.name} leaves a mismatched slanted edge")
        qd = qd + list(P.diags[s_end + 1:])
        qb = qb + list(P.bottom[len(qb):])
        return qd, qb

    @staticmethod
    def _snapshot(g, r, s_end, qd, qb, done=False):
        if done:
            return GashedRow(g.base, g.new_top, r.Y, g.index, "bottom", len(qd) - 1, tuple(qd), tuple(qb))
        return GashedRow(g.base, g.new_top, r.Y, g.index, "mid", s_end, tuple(qd), tuple(qb))


_engines = {}


def engine(tables=None):
    t = tables or default_tables()
    e = _engines.get(id(t))
    if e is None or e.t is not t:
        e = Engine(t)
        _engines[id(t)] = e
    return e


# -- public operations -------------------------------------------------------

def introduce_gash(P, u, tables=None):
    """Put the relation u ->1 P.top as a gash on the top border of P."""
    t = (tables or default_tables())
    u = tuple(u)
    st = step_between(u, P.top, t.rules)
    if st is None:
        raise ValueError(f"{_s(u)} ->1 {_s(P.top)} does not hold")
    return GashedRow(P, u, st.type_tag, st.index)


def find_swap_region(g, tables=None):
    """The unique (region name, first cell) applicable to a gashed row."""
    eng = engine(tables)
    if g.state == "bottom":
        raise ValueError("gash already lies on the bottom border")
    if g.state == "top":
        m = eng._pick(eng._leg_step(g.type_tag, g.base, g.new_top, 2 * (g.index[0] - 1)), g)
    else:
        m = eng._pick(eng._front_step(g.type_tag, g.qd[g.front], g.front, g.base, g.new_top), g)
    return eng.t.regions[m[0].name], m[1]


def propagate_phi(g, tables=None):
    """Move a top gash to the bottom border.  Returns (final GashedRow, trace)."""
    if g.state != "top":
        raise ValueError("propagation starts from a gash on the top border")
    eng = engine(tables)
    _, _, trace = eng.propagate(g.base, g.new_top, g.type_tag, g.index, record=True)
    return trace.steps[-1].row, trace


def single_step(P, u, tables=None):
    """Phi^u for u ->1 P.top: returns (new row, region names)."""
    g = introduce_gash(P, u, tables)
    Q, names, _ = engine(tables).propagate(P, g.new_top, g.type_tag, g.index)
    return Q, names


def _chain(u, v, tables):
    rules = (tables or default_tables()).rules
    for p in range(0, 2 * len(u) + 1):
        c = right_increasing_chain(u, v, p, rules)
        if c is not None:
            return c
    raise ValueError(f"no Pieri relation {_s(u)} ->p {_s(v)}")


def phi_u(P, u, tables=None, history=None):
    """Phi^u(P), propagating the steps of the right-increasing chain from the last one."""
    u = tuple(u)
    if u == P.top:
        return P
    chain = _chain(u, P.top, tables)
    cur = P
    for s in reversed(chain.strings[:-1]):
        cur, names = single_step(cur, s, tables)
        if history is not None:
            history.append((cur, names))
    return cur


def phi_inverse(Q, v_prime, tables=None):
    """Phi_{v'}(Q) = rho Phi^{reverse v'} rho (Q)."""
    return rotate180(phi_u(rotate180(Q), reverse(tuple(v_prime)), tables))


# -- rhombus transport -------------------------------------------------------

def rhombus_transport(rows, u, tables=None, sequential=False):
    """Apply Phi^u to a stack of single-row puzzles, threading bottoms into tops.

    ``sequential`` (test only) instead moves each gash of the chain through
    all rows before starting the next one; this is not a bijection.
    """
    u = tuple(u)
    rows = list(rows)
    if not sequential:
        out, cur = [], u
        for R in rows:
            R2 = phi_u(R, cur, tables)
            out.append(R2)
            cur = R2.bottom
        return out
    chain = _chain(u, rows[0].top, tables)
    for s in reversed(chain.strings[:-1]):
        out, cur = [], s
        for R in rows:
            R2 = single_step(R, cur, tables)[0] if cur != R.top else R
            out.append(R2)
            cur = R2.bottom
        rows = out
    return rows


# -- reference engine --------------------------------------------------------

def _classify(t, alpha, beta, kinds):
    mm = [s for s in range(len(alpha)) if alpha[s] != beta[s]]
    if len(mm) != 2:
        return None
    p, q = mm
    for X, g in t.grammar.items():
        lp, rp = (alpha[p], beta[p]), (alpha[q], beta[q])
        okl = lp in g.hleft if kinds[p] in "TB" else (kinds[p] == "/" and lp in g.dleft)
        okr = rp in g.hright if kinds[q] in "TB" else (kinds[q] == "/" and rp in g.dright)
        if not (okl and okr):
            continue
        if all((alpha[s] in g.hmid) if kinds[s] in "TB" else (alpha[s] in g.dmid.get(kinds[s], ()))
               for s in range(p + 1, q)):
            return X, p, q
    return None


def reference_propagate(P, u, tables=None):
    """Greedy propagation driven only by the gash grammar.

    At each step Q is extended to the nearest slanted edge where the new
    boundary is again a legal gash (or the row ends); exactly one extension
    must exist.  Used to cross-check the swap-region tables.
    """
    t = tables or default_tables()
    eng = engine(t)
    u = tuple(u)
    n = len(u)
    L = 2 * n
    up, vp, Pd = P.top, P.bottom, P.diags

    def curve(f, qd, qb):
        nb, nt = f // 2, (f + 1) // 2
        alpha = tuple(qb[:nb]) + (qd[f],) + u[nt:]
        beta = tuple(vp[:nb]) + (Pd[f],) + up[nt:]
        kinds = "B" * nb + ("/" if f % 2 else "\\") + "T" * (n - nt)
        return alpha, beta, kinds, nb

    def extend(qd, qb, f, f2):
        out = []

        def rec(s, d, bl):
            if s == f2:
                out.append((tuple(d), tuple(bl)))
                return
            if s % 2 == 0:
                y = eng.third.get((u[s // 2], d[-1]))
                if y is not None:
                    rec(s + 1, d + [y], bl)
            else:
                for dr, b in t.up.get(d[-1], ()):
                    rec(s + 1, d + [dr], bl + [b])

        rec(f, list(qd), list(qb))
        return out

    f, qd, qb = 0, (P.c1,), ()
    while True:
        cands = []
        for f2 in range(f + 1, L + 1):
            for d, bl in extend(qd, qb, f, f2):
                if f2 == L:
                    if d[-1] == P.c2 and _classify(t, bl, vp, "B" * n):
                        cands.append((d, bl, True))
                    continue
                a, b, k, nb = curve(f2, d, bl)
                c = _classify(t, a, b, k)
                if c is None or c[1] > nb:
                    continue
                if c[2] < nb:
                    if d[-1] != Pd[f2]:
                        continue
                    cands.append((d + Pd[f2 + 1:], bl + vp[len(bl):], True))
                else:
                    cands.append((d, bl, False))
            if cands:
                break
        if len(cands) != 1:
            raise PropagationDefect(f"reference engine found {len(cands)} continuations")
        d, bl, done = cands[0]
        if done:
            return SingleRowPuzzle(P.c1, u, tuple(bl), P.c2, tuple(d))
        f, qd, qb = f2, d, bl


# -- exhaustive verification ---------------------------------------------------

def all_rows(length, tables=None):
    """Every single-row puzzle of the given length with simple side labels."""
    eng = engine(tables)
    t = eng.t
    out = []

    def rec(d, diags, top, bot):
        if len(top) == length and len(bot) == length:
            if d in (0, 1, 2):
                out.append(SingleRowPuzzle(diags[0], tuple(top), tuple(bot), d, tuple(diags)))
            return
        if len(top) == len(bot):
            for x, dr in t.down.get(d, ()):
                diags.append(dr)
                top.append(x)
                rec(dr, diags, top, bot)
                top.pop()
                diags.pop()
        else:
            for dr, b in t.up.get(d, ()):
                diags.append(dr)
                bot.append(b)
                rec(dr, diags, top, bot)
                bot.pop()
                diags.pop()

    for c in (0, 1, 2):
        rec(c, [c], [], [])
    return out


@dataclass
class BijectionReport:
    rows: int = 0
    pairs: dict = field(default_factory=dict)  # p -> number of (P, u)
    propagations: int = 0
    ee_propagations: int = 0
    failures: list = field(default_factory=list)

    def ok(self):
        return not self.failures


def _rowkey(P):
    return bytes((P.c1,) + P.top + P.bottom)


def check_single(eng, P, u, i, j, X, Q, names, report):
    """Lemma checks on one propagation P -> Q of the relation u ->1 P.top."""
    n = P.length
    diff = [m for m in range(n) if Q.bottom[m] != P.bottom[m]]
    bad = []
    Y = names and eng.t.regions[names[-1]].after_type
    if len(diff) != 2:
        bad.append("bottom gash does not have two legs")
        k = l = 0
    else:
        k, l = diff[0] + 1, diff[1] + 1
        v, vp = Q.bottom, P.bottom
        rule = eng.rule_by_pair.get((v[k - 1], vp[k - 1], v[l - 1], vp[l - 1]))
        if rule is None or rule.type_tag != Y or any(v[m] not in rule.allowed_middle for m in range(k, l - 1)):
            bad.append(f"bottom {_s(v)} ->1 {_s(vp)} fails for type {Y}")
        if not (i <= l and k < j):
            bad.append(f"index inequality i<=l, k<j fails: ({i},{j}) ({k},{l})")
        if "E" in (X, Y) and not (i - 1 <= k and j - 1 <= l):
            bad.append(f"type E index inequality fails: ({i},{j}) ({k},{l})")
        if X == Y == "E":
            report.ee_propagations += 1
            tp, tq = P.triangles(), Q.triangles()
            for s in range(2 * n):
                if s % 2 == 0:
                    m = s // 2  # down triangle: top edge m, bottom node m
                    inner = i - 1 < m < j - 1 and k <= m <= l - 1
                    tag = ("d",) + tp[s]
                else:
                    m = s // 2  # up triangle: apex node m+1, bottom edge m
                    inner = i <= m + 1 <= j - 1 and k - 1 < m < l - 1
                    tag = tp[s]
                if inner and (tp[s] != tq[s] or tag not in ALLOWED_INTERIOR):
                    bad.append(f"interior triangle {s} changed or not allowed: {tp[s]} -> {tq[s]}")
    if not Q.is_valid(eng.t) or Q.top != u:
        bad.append("result is not a valid row with the new top")
    for b in bad:
        report.failures.append(f"{P.serialize()} u={_s(u)}: {b}")
    return k, l


def verify_bijection(max_len=6, max_p=3, tables=None, lengths=None, limit_failures=50):
    """Exhaustive check of rho Phi rho Phi = id, the round trip Phi_{v'} Phi^u = id
    and the index and interior lemmas over all rows of length <= max_len."""
    eng = engine(tables)
    report = BijectionReport()
    memo = eng.single_memo
    for n in (lengths or range(1, max_len + 1)):
        G = {p: {} for p in range(1, max_p + 1)}
        rows = all_rows(n, eng.t)
        report.rows += len(rows)

        def single(R, rk, c, i, j, X):
            key = rk + bytes(c)
            hit = memo.get(key)
            if hit is None:
                Q, names, _ = eng.propagate(R, c, X, (i, j))
                report.propagations += 1
                k, l = check_single(eng, R, c, i, j, X, Q, names, report)
                hit = (Q, k, l)
                memo[key] = hit
            return hit

        for P in rows:
            pk = _rowkey(P)
            rb = bytes(reverse(P.bottom))
            head = bytes((P.c2,))
            stack = [(P, pk, P.top, 10 ** 6, 10 ** 6, 0)]
            while stack:
                R, rk, s, jmax, minl, depth = stack.pop()
                for c, i, j, X in eng.preds(s):
                    if j >= jmax:
                        continue
                    Q, k, l = single(R, rk, c, i, j, X)
                    if not k < minl:
                        report.failures.append(f"{P.serialize()} u={_s(c)}: bottom strings are not a Pieri chain")
                    d = depth + 1
                    # G(P, u) = (rho Phi^u(P), reverse of P's bottom)
                    G[d][pk + bytes(c)] = head + bytes(reverse(Q.bottom)) + bytes(reverse(c)) + rb
                    if d < max_p:
                        stack.append((Q, _rowkey(Q), c, j, min(minl, l), d))
            if len(report.failures) > limit_failures:
                return report
        for p, g in G.items():
            report.pairs[p] = report.pairs.get(p, 0) + len(g)
            for x, y in g.items():
                if g.get(y) != x:
                    report.failures.append(f"length {n} p={p}: round trip fails for key {x.hex()}")
                    if len(report.failures) > limit_failures:
                        return report
        memo.clear()
    return report
