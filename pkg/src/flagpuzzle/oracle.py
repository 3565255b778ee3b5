"""Structure constants from the Pieri formulas alone.

The special classes generate the cohomology ring, so every Schubert class is
a polynomial in their multiplication operators applied to the identity
class.  Solving for that polynomial exactly and applying it to a second
class gives the product.
"""
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .strings import (content, hat, identity_string, inversions, pieri_successors_012,
                      reverse, strings012)


class GenerationFailure(RuntimeError):
    """The special-class monomials did not span the cohomology ring."""


@dataclass
class SchubertVector:
    a: int
    b: int
    n: int
    coeffs: dict = field(default_factory=dict)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return SchubertVector(self.a, self.b, self.n, {k: c for k, c in out.items() if c})

    def scaled(self, s):
        return SchubertVector(self.a, self.b, self.n, {k: c * s for k, c in self.coeffs.items() if c * s})

    @classmethod
    def basis(cls, u):
        a, b, n = content(u)
        return cls(a, b, n, {tuple(u): 1})


@dataclass(frozen=True)
class SpecialClass:
    kind: str  # "p" or "p~"
    degree: int

    def string(self, a, b, n):
        p = self.degree
        if self.kind == "p":
            if not 0 <= p <= n - b:
                raise ValueError("degree out of range")
            if b == a:
                if a == 0 and p:
                    raise ValueError("no special class of positive degree on a point")
                # no 1-labels: the last zero moves p steps to the right
                return (0,) * (a - 1) + (2,) * p + (0,) + (2,) * (n - b - p) if p else identity_string(a, b, n)
            return (0,) * a + (1,) * (b - a - 1) + (2,) * p + (1,) + (2,) * (n - b - p)
        if not 0 <= p <= a:
            raise ValueError("degree out of range")
        if b == a:
            return hat(SpecialClass("p", p).string(n - b, n - a, n))
        return (0,) * (a - p) + (1,) + (0,) * p + (1,) * (b - a - 1) + (2,) * (n - b)


def _successors(kind, p, u):
    if kind == "p":
        return pieri_successors_012(u, p)
    return {hat(x) for x in pieri_successors_012(hat(u), p)}


def pieri_multiply(s, x):
    """[X_s] * x for a special class s."""
    out = {}
    for u, c in x.coeffs.items():
        for v in _successors(s.kind, s.degree, u):
            out[v] = out.get(v, 0) + c
    return SchubertVector(x.a, x.b, x.n, {k: c for k, c in out.items() if c})


class OracleRing:
    """Exact multiplication in H*(Fl(a,b;n)) driven by the Pieri operators."""

    def __init__(self, a, b, n, seed=None):
        self.a, self.b, self.n = a, b, n
        self.strings = strings012(a, b, n)
        self.idx = {s: k for k, s in enumerate(self.strings)}
        self.gens = [SpecialClass("p", p) for p in range(1, n - b + 1)]
        self.gens += [SpecialClass("p~", p) for p in range(1, a + 1)]
        self.ops = [{u: tuple(_successors(g.kind, g.degree, u)) for u in self.strings} for g in self.gens]
        self.rng = random.Random(seed) if seed is not None else None
        self.dim = inversions(self.strings[-1]) if self.strings else 0
        self._apply_memo = {}
        self._build()

    def apply(self, word, v):
        """word (tuple of generator indices) applied to the basis class v, as a sparse dict."""
        key = (word, v)
        hit = self._apply_memo.get(key)
        if hit is not None:
            return hit
        if not word:
            res = {v: 1}
        else:
            prev = self.apply(word[:-1], v)
            op = self.ops[word[-1]]
            res = {}
            for s, c in prev.items():
                for t in op[s]:
                    res[t] = res.get(t, 0) + c
        self._apply_memo[key] = res
        return res

    def _build(self):
        e0 = identity_string(self.a, self.b, self.n)
        degs = [g.degree for g in self.gens]
        # words are non-decreasing index sequences, grouped by total degree
        by_deg = {0: [()]}
        self.basis = {}  # degree -> list of (pivot, vec, coeffs)
        found = 0
        N = len(self.strings)
        for D in range(0, self.dim + 1):
            words = by_deg.get(D, [])
            if self.rng is not None:
                words = list(words)
                self.rng.shuffle(words)
            rows = self.basis.setdefault(D, [])
            for w in words:
                vec = dict(self.apply(w, e0))
                coef = {w: 1}
                vec, coef, _ = self._reduce(rows, vec, coef, 1)
                if not vec:
                    continue
                piv = min(vec, key=self.idx.get)
                rows.append((piv, vec, coef))
                found += 1
                for g in range(w[-1] if w else 0, len(self.gens)):
                    by_deg.setdefault(D + degs[g], []).append(w + (g,))
        if found != N:
            raise GenerationFailure(f"monomials span {found} of {N} classes on Fl({self.a},{self.b};{self.n})")

    @staticmethod
    def _reduce(rows, vec, coef, mult):
        """Fraction-free reduction: mult*target = vec + sum coef*words."""
        for piv, bv, bc in rows:
            x = vec.get(piv, 0)
            if not x:
                continue
            y = bv[piv]
            g = math.gcd(x, y)
            fx, fy = y // g, x // g
            nv = {k: fx * c for k, c in vec.items()}
            for k, c in bv.items():
                nv[k] = nv.get(k, 0) - fy * c
            vec = {k: c for k, c in nv.items() if c}
            coef = {k: fx * c for k, c in coef.items()}
            for k, c in bc.items():
                coef[k] = coef.get(k, 0) - fy * c
            mult *= fx
        return vec, coef, mult

    @lru_cache(maxsize=None)
    def express(self, u):
        """(m, {word: c}) with m [X_u] = sum c * word([X_0])."""
        rows = self.basis.get(inversions(u), [])
        vec, coef, m = self._reduce(rows, {u: 1}, {}, 1)
        if vec:
            raise GenerationFailure(f"class {u} is not in the span")
        # vec was reduced to zero: m*X_u - sum(coef*words) = 0 with the sign of coef flipped
        return m, {k: -c for k, c in coef.items() if c}

    def product(self, u, v):
        """[X_u][X_v] as a dict w -> coefficient."""
        u, v = tuple(u), tuple(v)
        m, comb = self.express(u)
        out = {}
        for w, c in comb.items():
            for s, x in self.apply(w, v).items():
                out[s] = out.get(s, 0) + c * x
        res = {}
        for s, x in out.items():
            if x % m:
                raise GenerationFailure(f"non-integral product coefficient for {u} * {v}")
            if x:
                res[s] = x // m
        return res

    def triple(self, u, v, w):
        """Integral of [X_u][X_v][X_w]."""
        if inversions(u) + inversions(v) + inversions(w) != self.dim:
            return 0
        return self.product(u, v).get(reverse(tuple(w)), 0)


@lru_cache(maxsize=None)
def oracle_ring(a, b, n, seed=None):
    return OracleRing(a, b, n, seed)


def triple_intersection_oracle(u, v, w, seed=None):
    u, v, w = tuple(u), tuple(v), tuple(w)
    cs = {content(u), content(v), content(w)}
    if len(cs) != 1:
        raise ValueError("strings belong to different flag varieties")
    return oracle_ring(*cs.pop(), seed).triple(u, v, w)


def oracle_structure_constant(u, v, w, seed=None):
    """C^w_{u,v} via the oracle."""
    return triple_intersection_oracle(u, v, reverse(tuple(w)), seed)


def oracle_product(u, v, seed=None):
    return oracle_ring(*content(tuple(u)), seed).product(u, v)
