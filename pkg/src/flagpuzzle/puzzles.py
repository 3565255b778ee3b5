"""Triangular and rhombus puzzle boards: counting, enumeration and structure constants.

Triangular board of size n.  Row r (1..n from the apex) has r up triangles
and r-1 down triangles; its slanted unit edges are e[0..2r-1] from left to
right, its bottom edges b[0..r-1].  Up triangle k is (e[2k], e[2k+1], b[k])
and down triangle k is (top[k], e[2k+2], e[2k+1]), both read clockwise.
With clockwise borders u (left, bottom to top), v (right, top to bottom)
and w (bottom, right to left): e[0] of row r is u[n-r], e[2r-1] is v[r-1],
and the bottom row read left to right is reverse(w).

Rhombus board with m rows of l columns.  Each row is a single-row puzzle:
slanted edges d[0..2l] with even ones parallel to the left border; cell j
is a down triangle (t, d[j+1], d[j]) for even j and an up triangle
(d[j], d[j+1], b) for odd j.  Borders are read north-west to south-east.
"""
from collections import defaultdict
from dataclasses import dataclass

from .rulesets import default_tables
from .strings import content, dual_label, identity_string, inversions, is_012, reverse

_memo = {}


def _tables(tables):
    return tables or default_tables()


def _cache(t):
    c = _memo.get(id(t))
    if c is None or c[0] is not t:
        down = defaultdict(list)  # (top, d_left) -> [d_right]
        for x, y, z in t.valid:
            down[(x, z)].append(y)
        c = (t, {}, {}, dict(down))
        _memo[id(t)] = c
    return c


def row_fill(top, left, right, tables=None):
    """Bottoms (as a dict bottom -> count) of triangular rows with given top and sides."""
    t = _tables(tables)
    _, memo, _, down = _cache(t)
    key = (top, left, right)
    res = memo.get(key)
    if res is not None:
        return res
    r = len(top) + 1
    states = {(left, ()): 1}
    for k in range(r):
        ns = defaultdict(int)
        for (e, bot), c in states.items():
            for er, b in t.up.get(e, ()):
                if k == r - 1:
                    if er == right:
                        ns[(er, bot + (b,))] += c
                    continue
                for en in down.get((top[k], er), ()):
                    ns[(en, bot + (b,))] += c
        states = ns
    res = {}
    for (_, bot), c in states.items():
        res[bot] = res.get(bot, 0) + c
    memo[key] = res
    return res


def _check_border(*strings):
    n = len(strings[0])
    for s in strings:
        if len(s) != n:
            raise ValueError("border length mismatch")
        if not is_012(s):
            raise ValueError(f"border {''.join(map(str, s))} has a non-simple label")


def _bottom_counts(u, v, tables):
    n = len(u)
    states = {(): 1}
    for r in range(1, n + 1):
        left, right = u[n - r], v[r - 1]
        ns = defaultdict(int)
        for top, c in states.items():
            for bot, k in row_fill(top, left, right, tables).items():
                ns[bot] += c * k
        states = ns
    return states


def count_triangular_clockwise(u, v, w, tables=None):
    """Number of triangular puzzles with u, v, w on left, right, bottom, all clockwise."""
    u, v, w = tuple(u), tuple(v), tuple(w)
    _check_border(u, v, w)
    return _bottom_counts(u, v, tables).get(reverse(w), 0)


def _check_flag(*strings):
    cs = {content(s) for s in strings}
    if len(cs) != 1:
        raise ValueError("strings belong to different flag varieties")
    return cs.pop()


def structure_constant(u, v, w, tables=None):
    """C^w_{u,v}: the coefficient of [X_w] in [X_u][X_v]."""
    u, v, w = tuple(u), tuple(v), tuple(w)
    _check_flag(u, v, w)
    if inversions(u) + inversions(v) != inversions(w):
        return 0
    return count_triangular_clockwise(u, v, reverse(w), tables)


def product(u, v, tables=None):
    """[X_u][X_v] as a dict w -> C^w_{u,v} (nonzero terms only)."""
    u, v = tuple(u), tuple(v)
    _check_flag(u, v)
    _check_border(u, v)
    # counter-clockwise w on the bottom means the bottom row reads w left to right
    out = {}
    for bot, c in _bottom_counts(u, v, tables).items():
        if c and is_012(bot) and content(bot) == content(u):
            out[bot] = c
    return out


# -- single rows and rhombi -------------------------------------------------

def single_row_fills(top, c1, tables=None):
    """All fillings of a single row with top and left edge given: (bottom, c2, diags)."""
    t = _tables(tables)
    out = []

    def rec(j, d, diags, bot):
        if j == 2 * len(top):
            out.append((tuple(bot), d, tuple(diags)))
            return
        if j % 2 == 0:
            for x, dr in t.down.get(d, ()):
                if x == top[j // 2]:
                    diags.append(dr)
                    rec(j + 1, dr, diags, bot)
                    diags.pop()
        else:
            for dr, b in t.up.get(d, ()):
                diags.append(dr)
                bot.append(b)
                rec(j + 1, dr, diags, bot)
                bot.pop()
                diags.pop()

    rec(0, c1, [c1], [])
    return out


def _row_transfer(top, c1, tables):
    """dict (bottom, c2) -> count for a single row."""
    t = _tables(tables)
    _, _, memo, _ = _cache(t)
    key = (top, c1)
    res = memo.get(key)
    if res is None:
        res = defaultdict(int)
        for bot, c2, _ in single_row_fills(top, c1, t):
            res[(bot, c2)] += 1
        res = dict(res)
        memo[key] = res
    return res


def count_rhombus(w1, u, v, w2, tables=None):
    """Number of rhombus puzzles with border (w1, u, v, w2), all read north-west to south-east."""
    w1, u, v, w2 = map(tuple, (w1, u, v, w2))
    if len(w1) != len(w2) or len(u) != len(v):
        raise ValueError("rhombus dimension mismatch")
    _check_border(w1, w2)  # top and bottom may carry composed labels
    states = {u: 1}
    for c1, c2 in zip(w1, w2):
        ns = defaultdict(int)
        for top, c in states.items():
            for (bot, r), k in _row_transfer(top, c1, tables).items():
                if r == c2:
                    ns[bot] += c * k
        states = ns
    return states.get(v, 0)


# -- boards ------------------------------------------------------------------

@dataclass(frozen=True)
class TriangleBoard:
    """rows[r-1] = (e, b): slanted edges and bottom edges of row r."""
    rows: tuple

    @property
    def n(self):
        return len(self.rows)

    def border(self):
        """(u, v, w), all clockwise."""
        n = self.n
        u = tuple(self.rows[n - 1 - i][0][0] for i in range(n))
        v = tuple(e[-1] for e, _ in self.rows)
        w = reverse(self.rows[-1][1]) if n else ()
        return u, v, w

    def triangles(self):
        """Yield ((row, 'up'|'down', k), clockwise triple)."""
        top = ()
        for r, (e, b) in enumerate(self.rows, 1):
            for k in range(r):
                yield (r, "up", k), (e[2 * k], e[2 * k + 1], b[k])
                if k < r - 1:
                    yield (r, "down", k), (top[k], e[2 * k + 2], e[2 * k + 1])
            top = b

    def is_valid(self, tables=None):
        valid = _tables(tables).valid
        return all(tri in valid for _, tri in self.triangles())

    def serialize(self):
        lines = []
        for r, (e, b) in enumerate(self.rows, 1):
            lines.append(f"row {r}: D=" + "".join(map(str, e)) + " B=" + "".join(map(str, b)))
        return "\n".join(lines)


def enumerate_triangular(u, v, w, tables=None):
    """Yield every triangular puzzle with clockwise border (u, v, w)."""
    t = _tables(tables)
    u, v, w = tuple(u), tuple(v), tuple(w)
    _check_border(u, v, w)
    n = len(u)
    _, _, _, down = _cache(t)
    target = reverse(w)

    def fills(top, left, right):
        r = len(top) + 1
        out = []

        def rec(k, e, edges, bot):
            for er, b in t.up.get(e, ()):
                if k == r - 1:
                    if er == right:
                        out.append((tuple(edges + [er]), tuple(bot + [b])))
                    continue
                for en in down.get((top[k], er), ()):
                    rec(k + 1, en, edges + [er, en], bot + [b])

        rec(0, left, [left], [])
        return out

    def rec_rows(r, top, acc):
        if r > n:
            if top == target:
                yield TriangleBoard(tuple(acc))
            return
        for e, b in fills(top, u[n - r], v[r - 1]):
            # prune: rows below can only be completed if a count exists
            if r == n and b != target:
                continue
            acc.append((e, b))
            yield from rec_rows(r + 1, b, acc)
            acc.pop()

    yield from rec_rows(1, (), [])


def dualize_board(board):
    """Reflect in a vertical line and dualize every label."""
    rows = []
    for e, b in board.rows:
        rows.append((tuple(dual_label(x) for x in reversed(e)),
                     tuple(dual_label(x) for x in reversed(b))))
    return TriangleBoard(tuple(rows))


# -- composed pieces ---------------------------------------------------------

COMPOSED_KINDS = ("tri0", "tri1", "tri2", "rhomb01", "rhomb02", "rhomb12")


def _edge_ids(board):
    """Map each triangle id to its three (edge id, label) sides."""
    out = {}
    top = ()
    for r, (e, b) in enumerate(board.rows, 1):
        for k in range(r):
            out[(r, "up", k)] = [(("e", r, 2 * k), e[2 * k]), (("e", r, 2 * k + 1), e[2 * k + 1]),
                                 (("b", r, k), b[k])]
            if k < r - 1:
                out[(r, "down", k)] = [(("b", r - 1, k), top[k]), (("e", r, 2 * k + 2), e[2 * k + 2]),
                                       (("e", r, 2 * k + 1), e[2 * k + 1])]
        top = b
    return out


def composed_pieces(board, tables=None):
    """Decompose a board into composed pieces: list of (kind, stretch).

    Triangles glued along composed labels form one piece.  Raises ValueError if
    a component is not one of the six composed pieces.
    """
    tri = dict(board.triangles())
    sides = _edge_ids(board)
    by_edge = defaultdict(list)
    for tid, ss in sides.items():
        for eid, lab in ss:
            if lab >= 3:
                by_edge[eid].append(tid)
    seen, out = set(), []
    base = {frozenset((a, b, c)): (a, b, c) for a, b, c in [(0, 0, 0), (1, 1, 1), (2, 2, 2)]}
    for tid in tri:
        if tid in seen:
            continue
        comp, stack = [], [tid]
        seen.add(tid)
        while stack:
            x = stack.pop()
            comp.append(x)
            for eid, lab in sides[x]:
                if lab >= 3:
                    for y in by_edge[eid]:
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
        labs = sorted(max(tri[x]) for x in comp)
        if len(comp) == 1:
            tr = tri[comp[0]]
            if frozenset(tr) in base and len(set(tr)) == 1:
                out.append((f"tri{tr[0]}", 0))
                continue
            raise ValueError(f"isolated composed triangle {tr}")
        kinds = sorted(tuple(sorted(tri[x])) for x in comp)
        if kinds == [(0, 2, 5), (0, 2, 5)]:
            out.append(("rhomb02", 0))
            continue
        k = (len(comp) - 2) // 2
        if len(comp) % 2 == 0 and kinds == sorted([(0, 1, 3)] * 2 + [(2, 3, 6)] * (2 * k)):
            out.append(("rhomb01", k))
            continue
        if len(comp) % 2 == 0 and kinds == sorted([(1, 2, 4)] * 2 + [(0, 4, 7)] * (2 * k)):
            out.append(("rhomb12", k))
            continue
        raise ValueError(f"component with labels {labs} is not a composed piece")
    return out


def simple_projection(board):
    """Labels of all simple-labelled edges, with composed edges blanked."""
    return tuple((tuple(x if x < 3 else None for x in e), tuple(x if x < 3 else None for x in b))
                 for e, b in board.rows)


def identity_puzzle_count(v, tables=None):
    """Number of puzzles with the identity on the left and v on the right (both clockwise)."""
    a, b, n = content(v)
    return sum(c for bot, c in _bottom_counts(identity_string(a, b, n), tuple(v), tables).items() if is_012(bot))


def enumerate_rhombus(w1, u, v, w2, tables=None):
    """Yield every rhombus puzzle with border (w1, u, v, w2) as a tuple of rows
    (c1, top, bottom, c2, diags), borders read north-west to south-east."""
    w1, u, v, w2 = map(tuple, (w1, u, v, w2))
    if len(w1) != len(w2) or len(u) != len(v):
        raise ValueError("rhombus dimension mismatch")
    m = len(w1)

    def rec(r, top, acc):
        if r == m:
            if top == v:
                yield tuple(acc)
            return
        for bot, c2, diags in single_row_fills(top, w1[r], tables):
            if c2 != w2[r]:
                continue
            acc.append((w1[r], top, bot, c2, diags))
            yield from rec(r + 1, bot, acc)
            acc.pop()

    yield from rec(0, u, [])
