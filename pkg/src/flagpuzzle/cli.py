"""Command line front end."""
import argparse
import json
import sys

from . import oracle as _oracle
from . import propagation as _prop
from . import puzzles as _puz
from . import quantum as _q
from . import rulesets as _rs
from . import strings as _str


class CliError(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _triple(s, what):
    try:
        parts = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise CliError("invalid-argument", f"{what} must be comma separated integers")
    if len(parts) != {"--grassmannian": 2, "--flag": 3}[what]:
        raise CliError("invalid-argument", f"bad {what} value {s}")
    return parts


def _strings(args, names, flag=None, simple=True):
    out = []
    for name in names:
        text = getattr(args, name)
        try:
            s = _str.parse(text)
        except ValueError as e:
            raise CliError("invalid-argument", str(e))
        if simple and not _str.is_012(s):
            raise CliError("invalid-argument", f"{text} is not a 012-string")
        if flag is not None and _str.content(s) != flag:
            raise CliError("invalid-argument", f"{text} is not a string for Fl{flag}")
        out.append(s)
    if len({len(s) for s in out}) > 1:
        raise CliError("invalid-argument", "strings have different lengths")
    if simple and len({_str.content(s) for s in out}) > 1:
        raise CliError("invalid-argument", "strings belong to different flag varieties")
    return out


class Out:
    def __init__(self, fmt, stream):
        self.json = fmt == "json-lines"
        self.stream = stream

    def record(self, human, **fields):
        if self.json:
            if fields:
                self.stream.write(json.dumps(fields) + "\n")
        elif human is not None:
            self.stream.write(human + "\n")


f = _str.fmt


def cmd_count(args, t, out, use_oracle=False):
    flag = _triple(args.flag, "--flag") if args.flag else None
    u, v, w = _strings(args, ("u", "v", "w"), flag)
    if use_oracle:
        c = _oracle.triple_intersection_oracle(u, v, w)
    else:
        c = _puz.count_triangular_clockwise(u, v, w, t)
    out.record(str(c), u=f(u), v=f(v), w=f(w), count=c)


def cmd_product(args, t, out):
    flag = _triple(args.flag, "--flag") if args.flag else None
    u, v = _strings(args, ("u", "v"), flag)
    prod = _puz.product(u, v, t)
    for w in sorted(prod, key=lambda s: (_str.inversions(s), s)):
        out.record(f"{prod[w]} [{f(w)}]", u=f(u), v=f(v), w=f(w), count=prod[w])
    if not prod:
        out.record("0", u=f(u), v=f(v), w=None, count=0)


def cmd_quantum(args, t, out):
    if not args.grassmannian or args.degree is None:
        raise CliError("invalid-argument", "quantum needs --grassmannian m,n and --degree d")
    m, n = _triple(args.grassmannian, "--grassmannian")
    u, v, w = _strings(args, ("u", "v", "w"))
    d = args.degree
    try:
        g = _q.gw_invariant(u, v, w, d, m, n, t)
        lifts = [f(_q.lift_string(x, d, m, n)) for x in (u, v, w)] if d <= min(m, n - m) else [None] * 3
    except _q.DegreeMismatch as e:
        raise CliError("degree-mismatch", str(e))
    except ValueError as e:
        raise CliError("invalid-argument", str(e))
    human = (f"lifted {lifts[0]} {lifts[1]} {lifts[2]}\n" if lifts[0] else "") + str(g)
    out.record(human, u=f(u), v=f(v), w=f(w), degree=d, u_d=lifts[0], v_d=lifts[1], w_d=lifts[2],
               invariant=g)


def _border(P, new=None):
    top = f(P.top) if new is None or new == P.top else f"{f(new)}/{f(P.top)}"
    return f"({P.c1},{top},{f(P.bottom)},{P.c2})"


def cmd_propagate(args, t, out):
    try:
        top, bottom, u = _str.parse(args.top), _str.parse(args.bottom), _str.parse(args.u)
        P = _prop.SingleRowPuzzle.from_border(args.c1, top, bottom, args.c2, t)
        chain = _prop._chain(u, top, t)
    except ValueError as e:
        raise CliError("invalid-argument", str(e))
    cur, step = P, 0
    for s in reversed(chain.strings[:-1]):
        g = _prop.introduce_gash(cur, s, t)
        final, trace = _prop.propagate_phi(g, t)
        nxt = final.finished()
        if args.trace and not out.json:
            out.stream.write(g.render() + "\n")
        for ts in trace.steps:
            step += 1
            if args.trace and not out.json:
                out.stream.write(f"-- {ts.region}\n{ts.row.render()}\n")
            out.record(None, step=step, region=ts.region, border_before=_border(cur, s),
                       border_after=_border(nxt))
        out.record(f"{_border(cur, s)} -> {_border(nxt)}: {' '.join(trace.names)}")
        cur = nxt
    out.record(f"result {_border(cur)}", result=_border(cur))


def cmd_tables(args, t, out):
    n_p, n_r, n_g = t.counts()
    term = sum(r.terminal for r in t.regions.values())
    out.record(f"pieces {n_p}\nrules {n_r}\nregions {n_g} ({term} terminal)\nvalid", pieces=n_p,
               rules=n_r, regions=n_g, terminal=term, valid=True)


# -- verification suites -----------------------------------------------------

def suite_tables(t, args):
    _rs.validate_tables(t)
    return [("tables", 1, 0)]


def suite_pieri(t, args):
    agree = bad = 0
    for n in range(1, 8):
        for a in range(n + 1):
            for b in range(a, n + 1):
                for u in _str.strings012(a, b, n):
                    for p in range(4):
                        lab = {x for x in _str.successors_p(u, p, t.rules) if _str.is_012(x)}
                        if lab == _str.pieri_successors_012(u, p):
                            agree += 1
                        else:
                            bad += 1
    return [("label-string vs 012 Pieri relation", agree, bad)]


def suite_puzzles(t, args):
    ok = bad = 0
    for n in range(1, 8):
        for a in range(n + 1):
            for b in range(a, n + 1):
                e = _str.identity_string(a, b, n)
                for u in _str.strings012(a, b, n):
                    if _puz.product(e, u, t) == {u: 1}:
                        ok += 1
                    else:
                        bad += 1
    return [("identity products", ok, bad)]


def suite_oracle(t, args):
    ok = bad = 0
    for fl in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 2, 5), (1, 3, 5), (2, 3, 5), (2, 4, 6)]:
        ring = _oracle.oracle_ring(*fl)
        for u in ring.strings:
            for v in ring.strings:
                if ring.product(u, v) == _puz.product(u, v, t):
                    ok += 1
                else:
                    bad += 1
    return [("puzzle products vs oracle", ok, bad)]


def suite_propagation(t, args):
    rep = _prop.verify_bijection(max_len=args.max_len, tables=t)
    n = sum(rep.pairs.values())
    return [("bijection round trips and lemmas", n, len(rep.failures))]


def suite_quantum(t, args):
    ok = bad = 0
    for m, n in [(2, 4), (2, 5)]:
        S = _str.strings012(m, m, n)
        for d in range(0, min(m, n - m) + 2):
            for u in S:
                for v in S:
                    for w in S:
                        if d > min(m, n - m):
                            good = _q.gw_invariant(u, v, w, d, m, n, t) == 0
                        elif _str.inversions(u) + _str.inversions(v) + _str.inversions(w) != m * (n - m) + n * d:
                            continue
                        else:
                            lifted = [_q.lift_string(x, d) for x in (u, v, w)]
                            good = _q.gw_invariant(u, v, w, d, m, n, t) == _oracle.triple_intersection_oracle(*lifted)
                        ok += good
                        bad += not good
    return [("quantum invariants vs oracle", ok, bad)]


SUITES = {"tables": suite_tables, "pieri": suite_pieri, "puzzles": suite_puzzles,
          "oracle": suite_oracle, "propagation": suite_propagation, "quantum": suite_quantum}


def cmd_verify(args, t, out):
    names = [args.suite] if args.suite else list(SUITES)
    total_bad = 0
    for name in names:
        if name not in SUITES:
            raise CliError("invalid-argument", f"unknown suite {name}")
        for label, ok, bad in SUITES[name](t, args):
            total_bad += bad
            status = "pass" if not bad else "FAIL"
            out.record(f"{name}: {label}: {status} ({ok} passed, {bad} failed)", suite=name, check=label,
                       passed=ok, failed=bad, status=status)
    return 1 if total_bad else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="flagpuzzle", description="Two-step flag variety puzzles")
    ap.add_argument("--format", choices=["human", "json-lines"], default="human")
    ap.add_argument("--tables", help="rule bundle directory or file")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("count", "oracle"):
        p = sub.add_parser(name, help="number of puzzles with clockwise border u, v, w" if name == "count"
                           else "integral of [X_u][X_v][X_w] from the Pieri oracle")
        p.add_argument("u")
        p.add_argument("v")
        p.add_argument("w")
        p.add_argument("--flag")
    p = sub.add_parser("product", help="expansion of [X_u][X_v]")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--flag")
    p = sub.add_parser("quantum", help="Gromov-Witten invariant of a Grassmannian")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("w")
    p.add_argument("--grassmannian")
    p.add_argument("--degree", type=int)
    p = sub.add_parser("propagate", help="apply Phi^u to the single-row puzzle (c1, top, bottom, c2)")
    p.add_argument("c1", type=int, choices=[0, 1, 2])
    p.add_argument("top")
    p.add_argument("bottom")
    p.add_argument("c2", type=int, choices=[0, 1, 2])
    p.add_argument("u", help="new top string with u ->p top")
    p.add_argument("--trace", action="store_true")
    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", nargs="?", choices=sorted(SUITES))
    p.add_argument("--max-len", type=int, default=4)
    sub.add_parser("tables", help="validate and summarize the rule bundle")
    return ap


def run(argv=None, stream=None):
    stream = stream or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    out = Out(args.format, stream)
    try:
        t = _rs.load_tables(args.tables) if args.tables else _rs.default_tables()
        if args.command == "count":
            cmd_count(args, t, out)
        elif args.command == "oracle":
            cmd_count(args, t, out, use_oracle=True)
        elif args.command == "product":
            cmd_product(args, t, out)
        elif args.command == "quantum":
            cmd_quantum(args, t, out)
        elif args.command == "propagate":
            cmd_propagate(args, t, out)
        elif args.command == "verify":
            return cmd_verify(args, t, out)
        elif args.command == "tables":
            cmd_tables(args, t, out)
    except CliError as e:
        sys.stderr.write(f"error {e.code}: {e}\n")
        return 2
    except _rs.TableError as e:
        sys.stderr.write(f"error table-invalid: {e}\n")
        return 3
    except _prop.PropagationDefect as e:
        sys.stderr.write(f"error propagation-defect: {e}\n")
        return 4
    except (ValueError, OSError) as e:
        sys.stderr.write(f"error invalid-argument: {e}\n")
        return 2
    return 0


def main():
    sys.exit(run())
