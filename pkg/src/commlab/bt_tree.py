"""The Bruhat-Tits tree of PGL(2, Q_p): vertices, metric, group actions.

A vertex is a homothety class of rank-2 Z_p-lattices in Q_p^2. Every class
has a unique representative lattice spanned by the columns of

    [[p^n, u], [0, 1]]    with n an integer and u a rational determined
                          modulo p^n Z_p,

so a vertex is charted by the pair (n, u) once u is forced into a canonical
residue: u = 0 when v_p(u) >= n, otherwise u = c * p^m with m = v_p(u)
(possibly negative), 0 < c < p^(n-m) and gcd(c, p) = 1. The pairs (n, u) are
in bijection with vertices only together with that residue rule. The base
vertex v_0 = (0, 0) is the class of Z_p^2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .exact_core import INFINITY, Mat2, vp, _require_prime
from .words import Word, iter_words_with_matrices


@dataclass(frozen=True)
class TreeVertex:
    p: int
    n: int
    u: Fraction

    def __post_init__(self):
        if not isinstance(self.u, Fraction):
            object.__setattr__(self, "u", Fraction(self.u))

    def __repr__(self):
        return f"TreeVertex({self.p}^{self.n}:{self.u})"


def base_vertex(p):
    _require_prime(p)
    return TreeVertex(p, 0, Fraction(0))


def canonical_residue(u, n, p):
    """The canonical representative of u + p^n Z_(p)."""
    u = Fraction(u)
    if u == 0:
        return Fraction(0)
    m = vp(u, p)
    if m >= n:
        return Fraction(0)
    # unit part of u is A/B with both prime to p
    if m >= 0:
        A, B = u.numerator // p**m, u.denominator
    else:
        A, B = u.numerator, u.denominator // p ** (-m)
    mod = p ** (n - m)
    c = A * pow(B, -1, mod) % mod
    return Fraction(c) * Fraction(p) ** m


def rep_matrix(v):
    """The canonical lattice basis [[p^n, u], [0, 1]] of a vertex."""
    return Mat2(Fraction(v.p) ** v.n, v.u, 0, 1)


def vertex_of(m, p):
    """The vertex spanned by the columns of an invertible matrix.

    Column operations over Z_p preserve the lattice: pivot on the bottom-row
    entry of least valuation, rescale by it (a homothety), then clear the
    other column. What remains is [[det/d^2, b/d], [0, 1]] up to units.
    """
    _require_prime(p)
    det = m.det()
    if det == 0:
        raise ValueError("singular matrix spans no lattice")
    a, b, c, d = m.entries()
    if vp(c, p) < vp(d, p):
        a, b, c, d = b, a, d, c
    n = vp(det / (d * d), p)
    return TreeVertex(p, n, canonical_residue(b / d, n, p))


def act(g, v):
    """Image vertex of v under g in GL(2, Q)."""
    return vertex_of(g * rep_matrix(v), v.p)


def distance(v, w):
    """Tree distance: the gap between the elementary divisor exponents of the
    transition matrix between representative lattices."""
    if v.p != w.p:
        raise ValueError("vertices live on different trees")
    p = v.p
    m = rep_matrix(v).inverse() * rep_matrix(w)
    least = min(vp(e, p) for e in m.entries() if e != 0)
    return abs(vp(m.det(), p) - 2 * least)


def neighbors(v):
    """The p + 1 adjacent vertices."""
    p = v.p
    base = rep_matrix(v)
    out = []
    for step in [Mat2(1, 0, 0, p)] + [Mat2(p, j, 0, 1) for j in range(p)]:
        out.append(vertex_of(base * step, p))
    return out


def ball(center, radius):
    """Vertices within the radius, as a dict vertex -> distance, BFS order."""
    out = {center: 0}
    frontier = deque([center])
    while frontier:
        v = frontier.popleft()
        if out[v] == radius:
            continue
        for w in neighbors(v):
            if w not in out:
                out[w] = out[v] + 1
                frontier.append(w)
    return out


def translation_length(g, p):
    """min over vertices of d(v, g v), from the trace: max(0, -v_p(tr^2/det)).

    Bounded elements with odd v_p(det) invert an edge and fix no vertex; for
    them the vertex minimum is 1 while the translation length is 0.
    """
    _require_prime(p)
    det = g.det()
    if det == 0:
        raise ValueError("singular matrix")
    t = g.trace()
    if t == 0:
        return 0
    v = vp(t * t / det, p)
    return max(0, -v)


def busemann(g, p):
    """Busemann cocycle at the end fixed by the upper-triangular subgroup.

    For g = [[a, b], [0, d]] the value is v_p(a) - v_p(d), the signed rate at
    which g shifts horospheres centered on that end. Additive on products.
    """
    _require_prime(p)
    if g.c != 0:
        raise ValueError("matrix does not fix the charted end")
    if g.a == 0 or g.d == 0:
        raise ValueError("singular matrix")
    return vp(g.a, p) - vp(g.d, p)


@dataclass(frozen=True)
class OrbitResult:
    status: str        # "bounded" | "unbounded" | "inconclusive"
    orbit: tuple       # visited vertices in discovery order, None unless bounded
    radius_seen: int
    witness: Word      # loxodromic word certifying escape, None otherwise
    max_radius: int


def orbit_bounded(alphabet, p, max_radius, base=None):
    """Decide whether the orbit of the base vertex stays within max_radius.

    Closes {base} under generators and inverses breadth-first. Termination
    inside the radius proves a bounded orbit. On escape, words of length
    <= 2*max_radius are scanned in canonical order for a loxodromic witness,
    whose positive translation length certifies every orbit unbounded;
    without one the escape stays inconclusive at this budget.
    """
    _require_prime(p)
    if base is None:
        base = base_vertex(p)
    gens = []
    for i in range(len(alphabet)):
        gens.append(alphabet.matrices[i])
        gens.append(alphabet.inverses[i])
    seen = {base}
    order = [base]
    frontier = deque([base])
    radius_seen = 0
    escaped = False
    while frontier and not escaped:
        v = frontier.popleft()
        for g in gens:
            w = act(g, v)
            if w in seen:
                continue
            d = distance(base, w)
            if d > max_radius:
                escaped = True
                break
            radius_seen = max(radius_seen, d)
            seen.add(w)
            order.append(w)
            frontier.append(w)
    if not escaped:
        return OrbitResult("bounded", tuple(order), radius_seen, None, max_radius)
    for word, m in iter_words_with_matrices(alphabet, 2 * max_radius):
        if len(word) == 0:
            continue
        if translation_length(m, p) > 0:
            return OrbitResult("unbounded", None, max_radius, word, max_radius)
    return OrbitResult("inconclusive", None, max_radius, None, max_radius)


@dataclass(frozen=True)
class PigeonholeResult:
    n1: int
    n2: int
    k: int             # n1 - n2
    z: Mat2            # x y^k x^-1 y^-k, fixes v
    radius: int        # common distance of the orbit points from v
    steps: int         # orbit points computed up to the collision
    ball_bound: int    # same-parity ball count + 1, an a priori pigeonhole bound


class PigeonholeBudgetError(RuntimeError):
    def __init__(self, n_max, ball_bound):
        super().__init__(
            f"no collision within n_max = {n_max}; the pigeonhole bound is {ball_bound}"
        )
        self.n_max = n_max
        self.ball_bound = ball_bound


def commutator_pigeonhole(x, y, v, p=None, n_max=None):
    """Produce z = [x, y^k] fixing v by pigeonholing the y-orbit of x^-1 v.

    Requires y v = v. The points w_j = y^j x^-1 v all lie at the fixed
    distance R = d(v, x^-1 v) from v because y is an isometry fixing v, and
    vertices at distance R from v with the parity of R are finitely many, so
    two indices collide and z = x y^(n1-n2) x^-1 y^(n2-n1) fixes v. The
    reported bound is that same-parity ball count plus one; the loop never
    needs more steps, and a smaller n_max raises PigeonholeBudgetError.
    """
    if p is None:
        p = v.p
    if p != v.p:
        raise ValueError("p disagrees with the vertex")
    if act(y, v) != v:
        raise ValueError("y must fix v")
    w = act(x.inverse(), v)
    R = distance(v, w)
    sphere = ball(v, R)
    ball_bound = sum(1 for d in sphere.values() if d % 2 == R % 2) + 1
    limit = ball_bound if n_max is None else n_max
    seen = {w: 0}
    wj = w
    for j in range(1, limit + 1):
        wj = act(y, wj)
        if wj in seen:
            n2 = seen[wj]
            k = j - n2
            z = x * y**k * x.inverse() * y**-k
            if act(z, v) != v:
                raise AssertionError("pigeonhole element failed to fix v")
            return PigeonholeResult(j, n2, k, z, R, j + 1, ball_bound)
        seen[wj] = j
    raise PigeonholeBudgetError(limit, ball_bound)
