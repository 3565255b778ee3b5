"""Gromov-Witten invariants of Grassmannians G(m,n) via two-step puzzles."""
from .puzzles import count_triangular_clockwise
from .strings import inversions


class DegreeMismatch(ValueError):
    """The three classes and the degree violate the dimension equation."""


def check_grassmannian(u, m, n):
    u = tuple(u)
    if len(u) != n or any(x not in (0, 2) for x in u) or u.count(0) != m:
        raise ValueError(f"{''.join(map(str, u))} is not a 02-string with {m} zeros and length {n}")
    return u


def lift_string(u, d, m=None, n=None):
    """Turn the first d twos and the last d zeros into ones."""
    u = tuple(u)
    m = u.count(0) if m is None else m
    n = len(u) if n is None else n
    check_grassmannian(u, m, n)
    if not 0 <= d <= min(m, n - m):
        raise ValueError(f"degree {d} out of range for G({m},{n})")
    out = list(u)
    twos = [k for k, x in enumerate(u) if x == 2][:d]
    zeros = [k for k, x in enumerate(u) if x == 0][m - d:] if d else []
    for k in twos + zeros:
        out[k] = 1
    return tuple(out)


def gw_invariant(u, v, w, d, m, n, tables=None):
    """Three-point genus-zero degree-d invariant of G(m,n)."""
    u, v, w = (check_grassmannian(x, m, n) for x in (u, v, w))
    if d < 0:
        raise ValueError("negative degree")
    # no degree-d curves to count; checked first since the dimension equation
    # can never hold in this range
    if d > min(m, n - m):
        return 0
    if inversions(u) + inversions(v) + inversions(w) != m * (n - m) + n * d:
        raise DegreeMismatch(f"codimensions do not add up to {m * (n - m)} + {n}*{d}")
    return count_triangular_clockwise(lift_string(u, d), lift_string(v, d), lift_string(w, d), tables)
