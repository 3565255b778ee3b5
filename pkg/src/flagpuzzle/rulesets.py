"""Loading and validating the rule bundle: pieces, Pieri rules, gash grammar, swap regions."""
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .strings import PieriRule, dual_label

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
BUNDLE_FILES = ("pieces.txt", "pieri.txt", "gashes.txt", "regions.txt")

REGION_NAMES = (
    ["AA1", "AB", "AD", "AA2", "AF", "AC", "AA3", "AA4"]
    + ["BA", "BB1", "BE", "BB2"]
    + ["CC1", "CC2", "CF", "CC3", "CA", "CC4", "CC5", "CC6"]
    + [f"DD{i}" for i in range(1, 21)] + ["DA", "DE", "DF"]
    + [f"EE{i}" for i in range(1, 21)] + ["ED", "EB", "EF"]
    + ["FF1", "FF2", "FF3", "FC", "FE", "FF4", "FA", "FD", "FF6", "FF7",
       "FF8", "FF9", "FF10", "FF11"]
)
TYPES = "ABCDEF"


class TableError(ValueError):
    """A rule bundle failed to parse or violated a table invariant."""


def rotations(t):
    a, b, c = t
    return {(a, b, c), (b, c, a), (c, a, b)}


@dataclass(frozen=True)
class GashType:
    hleft: frozenset
    hright: frozenset
    dleft: frozenset
    dright: frozenset
    hmid: frozenset
    dmid: dict = field(hash=False, compare=False)  # slope -> frozenset


@dataclass(frozen=True)
class SwapRegion:
    """A before/after rewrite of a window of consecutive cells of a single row.

    Cell t has kind 'T' (a down triangle whose horizontal edge lies on the top
    border) or 'B' (an up triangle with its edge on the bottom border).  Diagonal
    t+1 is the right side of cell t; diagonal 0 is the left boundary.  ``ph``/``pd``
    hold the original labels, ``qh``/``qd`` the new ones.  ``star`` flags cells in
    stretchable two-cell groups.
    """
    name: str
    before_type: str
    after_type: str
    anchor: str
    kinds: tuple
    ph: tuple
    qh: tuple
    pd: tuple
    qd: tuple
    star: tuple
    terminal: bool = False

    @property
    def size(self):
        return len(self.kinds)

    def segments(self):
        """Split cells into ('cell', t) and ('group', t) items; groups span t, t+1."""
        out, t = [], 0
        while t < len(self.kinds):
            if self.star[t]:
                out.append(("group", t))
                t += 2
            else:
                out.append(("cell", t))
                t += 1
        return out

    def expand(self, counts):
        """Concrete instance with group g repeated counts[g] times: (kinds, ph, qh, pd, qd)."""
        kinds, ph, qh = [], [], []
        pd, qd = [self.pd[0]], [self.qd[0]]
        g = 0
        for kind, t in self.segments():
            idx = [t] if kind == "cell" else [t, t + 1] * counts[g]
            g += kind == "group"
            for s in idx:
                kinds.append(self.kinds[s])
                ph.append(self.ph[s])
                qh.append(self.qh[s])
                pd.append(self.pd[s + 1])
                qd.append(self.qd[s + 1])
        return tuple(kinds), tuple(ph), tuple(qh), tuple(pd), tuple(qd)

    @property
    def n_groups(self):
        return sum(1 for k, _ in self.segments() if k == "group")

    def instances(self, max_repeat=2):
        return {self.expand(c) for c in product(range(max_repeat + 1), repeat=self.n_groups)}


def rotate_instance(inst):
    """180 degree rotation: the new row becomes the original one and vice versa."""
    kinds, ph, qh, pd, qd = inst
    flip = {"T": "B", "B": "T"}
    return (tuple(flip[k] for k in reversed(kinds)), tuple(reversed(qh)),
            tuple(reversed(ph)), tuple(reversed(qd)), tuple(reversed(pd)))


@dataclass
class Tables:
    pieces: tuple
    rules: tuple
    grammar: dict
    regions: dict
    source: str = ""

    def __post_init__(self):
        self.valid = frozenset(t for p in self.pieces for t in rotations(p))
        # single-row transitions keyed by the left diagonal of a cell
        self.down = {}  # d_left -> [(top, d_right)]
        self.up = {}    # d_left -> [(d_right, bottom)]
        for x, y, z in self.valid:
            self.down.setdefault(z, []).append((x, y))
            self.up.setdefault(x, []).append((y, z))
        self.by_type = {X: [r for r in self.regions.values() if r.before_type == X] for X in TYPES}

    def counts(self):
        return len(self.pieces), len(self.rules), len(self.regions)

    def rotate_region(self, r):
        return rotate_region(self, r)


# -- parsing -----------------------------------------------------------------

def _pair(tok, where):
    m = re.fullmatch(r"([0-7])/([0-7])", tok)
    if not m:
        raise TableError(f"{where}: bad label pair {tok!r}")
    return int(m.group(1)), int(m.group(2))


def _digits(tok, where):
    if not re.fullmatch(r"[0-7]*", tok):
        raise TableError(f"{where}: bad label set {tok!r}")
    return frozenset(int(c) for c in tok)


def _parse_gash(words, where):
    X = words[1]
    if X not in TYPES:
        raise TableError(f"{where}: unknown gash type {X}")
    f = {"hleft": frozenset(), "hright": frozenset(), "dleft": frozenset(), "dright": frozenset(),
         "hmid": frozenset(), "dmid/": frozenset(), "dmid\\": frozenset()}
    for w in words[2:]:
        key, _, val = w.partition("=")
        if key not in f:
            raise TableError(f"{where}: unknown gash field {key}")
        if key in ("hmid", "dmid/", "dmid\\"):
            f[key] = _digits(val, where)
        else:
            f[key] = frozenset(_pair(p, where) for p in val.split(",") if p)
    return X, GashType(f["hleft"], f["hright"], f["dleft"], f["dright"], f["hmid"],
                       {"/": f["dmid/"], "\\": f["dmid\\"]})


_EDGE = re.compile(r"([TBD])(\d+)(\*?)=([0-7])(?:/([0-7]))?$")


def _parse_patch(words, where):
    edges = {}
    for w in words:
        m = _EDGE.match(w)
        if not m:
            raise TableError(f"{where}: bad patch entry {w!r}")
        k, i, st, a, b = m.groups()
        key = (k if k == "D" else "H", int(i))
        if key in edges:
            raise TableError(f"{where}: duplicate edge {w}")
        edges[key] = (k, st == "*", int(a), None if b is None else int(b))
    return edges


def _build_region(name, tb, ta, anchor, before, after, where):
    m = max(i for (_, i) in before)
    for rowname, row in (("before", before), ("after", after)):
        want = {("D", i) for i in range(m + 1)} | {("H", i) for i in range(1, m + 1)}
        if set(row) != want:
            raise TableError(f"{where}: {rowname} row must list D0..D{m} and one T/B edge per cell")
    kinds, ph, qh, pd, qd, star = [], [], [], [], [], []
    for i in range(1, m + 1):
        kb, sb, a, b = before[("H", i)]
        ka, sa, c, d = after[("H", i)]
        if kb != ka or sb != sa:
            raise TableError(f"{where}: cell {i} differs in kind or stretch between rows")
        if before[("D", i)][1] != sb or after[("D", i)][1] != sb:
            raise TableError(f"{where}: stretch mark on D{i} disagrees with its cell")
        if kb == "T":
            if d is not None:
                raise TableError(f"{where}: T{i} may not be gashed after the swap")
            orig = a if b is None else b
            if c != a:
                raise TableError(f"{where}: T{i} after-label must be the new top label {a}")
            ph.append(orig)
            qh.append(c)
        else:
            if b is not None:
                raise TableError(f"{where}: B{i} may not be gashed before the swap")
            if d is not None and d != a:
                raise TableError(f"{where}: B{i} after-gash original {d} disagrees with {a}")
            ph.append(a)
            qh.append(c)
        kinds.append(kb)
        star.append(sb)
    for i in range(m + 1):
        _, _, a, b = before[("D", i)]
        _, _, c, d = after[("D", i)]
        if i == 0:
            if d is not None:
                raise TableError(f"{where}: D0 may not be gashed after the swap")
            new = a
            orig = a if b is None else b
            if c != new:
                raise TableError(f"{where}: D0 after-label must equal its new label {new}")
            pd.append(orig)
            qd.append(new)
        else:
            if b is not None:
                raise TableError(f"{where}: D{i} may not be gashed before the swap")
            if d is not None and (i != m or d != a):
                raise TableError(f"{where}: D{i} after-gash invalid")
            pd.append(a)
            qd.append(c)
    return SwapRegion(name, tb, ta, anchor, tuple(kinds), tuple(ph), tuple(qh),
                      tuple(pd), tuple(qd), tuple(star))


def parse_bundle(text, source="<text>"):
    pieces, rules, grammar, regions = [], [], {}, {}
    cur = None
    lines = text.splitlines()
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        where = f"{source}:{no}"
        words = line.split()
        if not raw[0].isspace():
            cur = None
            head = words[0]
            if head == "piece":
                if len(words) != 4:
                    raise TableError(f"{where}: piece needs three labels")
                pieces.append(tuple(int(x) for x in _digits_list(words[1:], where)))
            elif head == "rule":
                if len(words) != 7 or not words[6].startswith("S="):
                    raise TableError(f"{where}: malformed rule")
                X = words[1]
                a1, b1, a2, b2 = _digits_list(words[2:6], where)
                rules.append(PieriRule(X, a1, b1, a2, b2, _digits(words[6][2:], where)))
            elif head == "gash":
                X, g = _parse_gash(words, where)
                if X in grammar:
                    raise TableError(f"{where}: duplicate gash type {X}")
                grammar[X] = g
            elif head == "region":
                if len(words) != 4:
                    raise TableError(f"{where}: region needs NAME TYPEBEFORE TYPEAFTER")
                name = words[1]
                if name in regions:
                    raise TableError(f"{where}: duplicate region {name}")
                cur = {"name": name, "tb": words[2], "ta": words[3], "where": where}
                regions[name] = cur
            else:
                raise TableError(f"{where}: unknown entry {head}")
        else:
            if cur is None:
                raise TableError(f"{where}: indented row outside a region")
            key = words[0]
            if key == "anchor":
                if len(words) != 2 or words[1] not in ("leg", "front"):
                    raise TableError(f"{where}: anchor must be leg or front")
                cur["anchor"] = words[1]
            elif key in ("before", "after"):
                cur[key] = _parse_patch(words[1:], where)
            else:
                raise TableError(f"{where}: unknown region row {key}")
    built = {}
    for name, d in regions.items():
        for k in ("anchor", "before", "after"):
            if k not in d:
                raise TableError(f"{d['where']}: region {name} lacks {k}")
        built[name] = _build_region(name, d["tb"], d["ta"], d["anchor"], d["before"], d["after"], d["where"])
    return Tables(tuple(pieces), tuple(rules), grammar, built, source)


def _digits_list(words, where):
    out = []
    for w in words:
        if not re.fullmatch(r"[0-7]", w):
            raise TableError(f"{where}: bad label {w!r}")
        out.append(int(w))
    return out


def read_bundle_text(path=None):
    path = path or DATA_DIR
    if os.path.isdir(path):
        parts = []
        for fn in BUNDLE_FILES:
            fp = os.path.join(path, fn)
            if not os.path.exists(fp):
                raise TableError(f"bundle {path} lacks {fn}")
            with open(fp) as fh:
                parts.append(fh.read())
        return "\n".join(parts)
    with open(path) as fh:
        return fh.read()


def load_tables(source=None, validate=True):
    """Load a bundle directory (or single file) and check every table invariant."""
    t = parse_bundle(read_bundle_text(source), str(source or DATA_DIR))
    if validate:
        validate_tables(t)
    return t


@lru_cache(maxsize=None)
def default_tables():
    return load_tables()


# -- validators ----------------------------------------------------------------

def validate_tables(t):
    validate_pieces(t)
    validate_rules(t)
    validate_grammar(t)
    validate_regions(t)
    validate_rotation_closure(t)


def validate_pieces(t):
    if len(t.pieces) != 8:
        raise TableError(f"cardinality: expected 8 pieces, found {len(t.pieces)}")
    if len({frozenset(rotations(p)) for p in t.pieces}) != 8:
        raise TableError("pieces: two entries are rotations of each other")
    for p in t.pieces:
        a, b, c = p
        d = (dual_label(c), dual_label(b), dual_label(a))
        if d not in t.valid:
            raise TableError(f"pieces: dual of piece {p} is not a piece")
    for s in (0, 1, 2):
        if (s, s, s) not in t.valid:
            raise TableError(f"pieces: missing simple triangle {s}{s}{s}")


def validate_rules(t):
    if len(t.rules) != 15:
        raise TableError(f"cardinality: expected 15 rules, found {len(t.rules)}")
    mult = {X: sum(r.type_tag == X for r in t.rules) for X in TYPES}
    if [mult[X] for X in TYPES] != [1, 1, 1, 4, 4, 4]:
        raise TableError(f"rules: type multiplicities {mult} are not (1,1,1,4,4,4)")
    by_pair, by_type = {}, {}
    for r in t.rules:
        if r.a1 not in (0, 1, 3, 7) or r.b2 not in (0, 1, 3, 7):
            raise TableError(f"rules: {r} has a1 or b2 outside {{0,1,3,7}}")
        if r.b1 not in (2, 4, 5, 6) or r.a2 not in (2, 4, 5, 6):
            raise TableError(f"rules: {r} has b1 or a2 outside {{2,4,5,6}}")
        if not r.allowed_middle <= {0, 2, 3, 4}:
            raise TableError(f"rules: {r} has middle set outside {{0,2,3,4}}")
        if by_pair.setdefault((r.a2, r.b2), r.type_tag) != r.type_tag:
            raise TableError(f"rules: pair ({r.a2},{r.b2}) belongs to two types")
        if by_type.setdefault(r.type_tag, r.allowed_middle) != r.allowed_middle:
            raise TableError(f"rules: type {r.type_tag} has two middle sets")
    if len({(r.a1, r.b1, r.a2, r.b2) for r in t.rules}) != 15:
        raise TableError("rules: duplicate rule")


def validate_grammar(t):
    if set(t.grammar) != set(TYPES):
        raise TableError(f"grammar: expected types A-F, found {sorted(t.grammar)}")
    for X, g in t.grammar.items():
        rs = [r for r in t.rules if r.type_tag == X]
        left = {(r.a1, r.b1) for r in rs}
        right = {(r.a2, r.b2) for r in rs}
        if set(g.hleft) != left or set(g.hright) != right:
            raise TableError(f"grammar mismatch: horizontal legs of type {X} disagree with its Pieri rules")
        if rs and g.hmid != rs[0].allowed_middle:
            raise TableError(f"grammar mismatch: horizontal middle of type {X} disagrees with S")
        if bool(g.dleft) != bool(g.dright):
            raise TableError(f"grammar: type {X} has only one diagonal leg set")
        if (g.hleft | g.dleft) & (g.hright | g.dright):
            raise TableError(f"grammar: type {X} has a pair that is both a left and a right leg")


def _tile_ok(t, kinds, h, d):
    for s, k in enumerate(kinds):
        tri = (h[s], d[s + 1], d[s]) if k == "T" else (d[s], d[s + 1], h[s])
        if tri not in t.valid:
            return False
    return True


def validate_regions(t):
    names = set(t.regions)
    if len(t.regions) != 80 or names != set(REGION_NAMES):
        missing = sorted(set(REGION_NAMES) - names)
        extra = sorted(names - set(REGION_NAMES))
        raise TableError(f"cardinality: expected the 80 named regions (missing {missing}, extra {extra})")
    terminal = {}
    fronts = {}
    for r in t.regions.values():
        name = r.name
        if r.before_type != name[0] or r.after_type != name[1]:
            raise TableError(f"region {name}: types {r.before_type}{r.after_type} do not match its name")
        for a, b in zip(r.kinds, r.kinds[1:]):
            if a == b:
                raise TableError(f"region {name}: cells must alternate between T and B")
        segs = r.segments()
        for s, k in enumerate(r.star):
            if k and not (s + 1 < len(r.star) and r.star[s + 1]) and not (s > 0 and r.star[s - 1]):
                raise TableError(f"region {name}: stretch group must have two cells")
        for kind, s in segs:
            if kind == "group":
                if not (s + 1 < r.size and r.star[s + 1]):
                    raise TableError(f"region {name}: stretch group must have two cells")
                if r.pd[s] != r.pd[s + 2] or r.qd[s] != r.qd[s + 2]:
                    raise TableError(f"region {name}: stretch group is not periodic")
        for inst in r.instances():
            kinds, ph, qh, pd, qd = inst
            if not _tile_ok(t, kinds, ph, pd):
                raise TableError(f"region {name}: before-patch does not tile by valid pieces")
            if not _tile_ok(t, kinds, qh, qd):
                raise TableError(f"region {name}: after-patch does not tile by valid pieces")
        g = t.grammar[r.before_type]
        ga = t.grammar[r.after_type]
        top_gash = [(r.qh[s], r.ph[s]) for s in range(r.size) if r.kinds[s] == "T" and r.qh[s] != r.ph[s]]
        if r.anchor == "leg":
            if r.qd[0] != r.pd[0] or not top_gash or top_gash[0] not in g.hleft:
                raise TableError(f"grammar mismatch: region {name} does not start at a left leg of type {name[0]}")
        else:
            slope = "\\" if r.kinds[0] == "T" else "/"
            front = (r.qd[0], r.pd[0])
            if front[0] != front[1]:
                if front not in (g.dleft | g.dright) or slope != "/":
                    raise TableError(f"grammar mismatch: region {name} front {front} is not a diagonal leg")
            elif front[0] not in g.dmid.get(slope, ()):
                raise TableError(f"grammar mismatch: region {name} front label {front[0]} not allowed")
            else:
                fronts.setdefault((r.before_type, slope), set()).add(front[0])
        bottom = [(r.qh[s], r.ph[s]) for s in range(r.size) if r.kinds[s] == "B" and r.qh[s] != r.ph[s]]
        terminal[name] = any(p in ga.hright for p in bottom)
        for p in bottom:
            if p not in ga.hleft | ga.hright:
                raise TableError(f"grammar mismatch: region {name} leaves bottom pair {p} outside type {name[1]}")
    # every allowed diagonal middle label must be reached by some region
    for X, g in t.grammar.items():
        for slope, labels in g.dmid.items():
            if set(labels) != fronts.get((X, slope), set()):
                raise TableError(f"grammar mismatch: diagonal middle labels {slope} of type {X} are not all used")
    for name, term in terminal.items():
        object.__setattr__(t.regions[name], "terminal", term)


def rotate_region(t, r):
    want = {rotate_instance(i) for i in r.instances()}
    for cand in t.regions.values():
        if (cand.before_type, cand.after_type) == (r.after_type, r.before_type) and cand.instances() == want:
            return cand
    raise TableError(f"rotation closure: no region equals the rotation of {r.name}")


def validate_rotation_closure(t):
    for r in t.regions.values():
        s = rotate_region(t, r)
        X, Y = r.name[0], r.name[1]
        if s.name[0] != Y or s.name[1] != X:
            raise TableError(f"rotation closure: rotation of {r.name} is {s.name}, expected type {Y}{X}")
