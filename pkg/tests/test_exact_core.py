"""Exact arithmetic layer: valuations, 2x2 matrices, element classification.

The torsion tables are pinned two independent ways: a float enumeration of
2cos(pi k/n) (the only rational values are 0, +-1, +-2), and direct matrix
powers. Floats appear only here, never in the package.
"""

import math
import random
from fractions import Fraction

import pytest

from commlab.exact_core import (
    INFINITY,
    Mat2,
    classify_padic,
    classify_real,
    commutator,
    denominator_primes,
    is_prime,
    prime_factors,
    projective_normalize,
    vp,
)
from helpers import rand_frac, rand_sl2


# ---------------------------------------------------------------- oracles

def test_rational_trace_oracle():
    # enumerate 2cos(pi k/n); the values that land on a rational are exactly
    # 0, +-1, +-2, which is why the finite-order trace tables below are short
    hits = set()
    for n in range(1, 121):
        for k in range(0, 2 * n + 1):
            x = 2.0 * math.cos(math.pi * k / n)
            r = Fraction(x).limit_denominator(1000)
            if abs(float(r) - x) < 1e-9:
                hits.add(r)
    assert hits == {Fraction(v) for v in (-2, -1, 0, 1, 2)}


@pytest.mark.parametrize(
    "m,order",
    [
        (Mat2(0, 1, -1, 0), 4),  # trace 0
        (Mat2(1, -1, 1, 0), 6),  # trace 1
        (Mat2(0, 1, -1, -1), 3),  # trace -1
    ],
)
def test_sl2_torsion_orders_by_direct_power(m, order):
    assert m.det() == 1
    p = Mat2.identity()
    for _ in range(order - 1):
        p = p * m
        assert p != Mat2.identity()
    assert p * m == Mat2.identity()
    c = classify_real(m)
    assert c.kind == "elliptic-finite-order" and c.order == order


@pytest.mark.parametrize(
    "m,order",
    [
        (Mat2(0, 1, -1, 0), 2),  # tr^2/det = 0
        (Mat2(1, 1, -1, 0), 3),  # tr^2/det = 1
        (Mat2(1, 1, -1, 1), 4),  # tr^2/det = 2
        (Mat2(2, 1, -1, 1), 6),  # tr^2/det = 3
    ],
)
def test_pgl2_torsion_orders_by_direct_power(m, order):
    # projective order: least k with m^k scalar
    r = m.trace() ** 2 / m.det()
    assert r in (0, 1, 2, 3)
    p = m
    for k in range(1, 7):
        if p.b == 0 and p.c == 0 and p.a == p.d:
            assert k == order
            break
        p = p * m
    else:
        pytest.fail("no scalar power found")


# ---------------------------------------------------------------- primes

def test_is_prime_frozen():
    primes = [p for p in range(60) if is_prime(p)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)


def test_prime_factors_agrees_with_is_prime():
    for n in range(1, 400):
        fs = prime_factors(n)
        assert all(is_prime(p) for p in fs)
        m = n
        for p in fs:
            while m % p == 0:
                m //= p
        assert m == 1
        assert list(fs) == sorted(set(fs))


# ---------------------------------------------------------------- valuations

def test_vp_frozen():
    assert vp(12, 2) == 2
    assert vp(12, 3) == 1
    assert vp(Fraction(3, 4), 2) == -2
    assert vp(Fraction(-9, 5), 3) == 2
    assert vp(7, 5) == 0
    assert vp(0, 5) is INFINITY


def test_vp_rejects_nonprime():
    with pytest.raises(ValueError):
        vp(10, 4)
    with pytest.raises(ValueError):
        vp(10, 1)


def test_infinity_ordering():
    assert INFINITY > 10**9 and INFINITY >= 10**9
    assert not (INFINITY < 0) and not (INFINITY <= -(10**9))
    assert INFINITY == INFINITY and INFINITY >= INFINITY and INFINITY <= INFINITY
    assert not (INFINITY > INFINITY)
    assert min(INFINITY, 3) == 3
    assert max(INFINITY, 3) is INFINITY


def test_vp_multiplicative_and_ultrametric():
    rng = random.Random(101)
    for _ in range(1000):
        p = rng.choice([2, 3, 5, 7])
        x = rand_frac(rng, nonzero=True)
        y = rand_frac(rng, nonzero=True)
        assert vp(x * y, p) == vp(x, p) + vp(y, p)
        if x + y != 0:
            lo = min(vp(x, p), vp(y, p))
            assert vp(x + y, p) >= lo
            if vp(x, p) != vp(y, p):
                assert vp(x + y, p) == lo


def test_denominator_primes():
    assert denominator_primes(Fraction(1, 12)) == (2, 3)
    assert denominator_primes(Fraction(-5, 6)) == (2, 3)
    assert denominator_primes(Fraction(3)) == ()


# ---------------------------------------------------------------- matrices

def test_mat2_algebra():
    rng = random.Random(7)
    for _ in range(200):
        m = rand_sl2(rng)
        n = rand_sl2(rng)
        assert (m * n).det() == m.det() * n.det() == 1
        assert m * m.inverse() == Mat2.identity()
        assert m.inverse() * m == Mat2.identity()
        assert (m * n).inverse() == n.inverse() * m.inverse()
        assert m**3 == m * m * m
        assert m**-2 == (m.inverse()) ** 2
        assert m**0 == Mat2.identity()


def test_mat2_inverse_rejects_singular():
    with pytest.raises(ZeroDivisionError):
        Mat2(1, 2, 2, 4).inverse()


def test_mat2_hash_and_eq():
    a = Mat2(1, Fraction(1, 2), 0, 1)
    b = Mat2(Fraction(2, 2), Fraction(2, 4), Fraction(0), Fraction(3, 3))
    assert a == b and hash(a) == hash(b)


def test_commutator_convention():
    g = Mat2(1, 1, 0, 1)
    h = Mat2(1, 0, 1, 1)
    assert commutator(g, h) == g * h * g.inverse() * h.inverse()


def test_two_generator_trace_identity():
    # Fricke: tr[g,h] = tr^2 g + tr^2 h + tr^2(gh) - tr g tr h tr gh - 2
    rng = random.Random(55)
    for _ in range(500):
        g = rand_sl2(rng)
        h = rand_sl2(rng)
        x, y, z = g.trace(), h.trace(), (g * h).trace()
        assert commutator(g, h).trace() == x * x + y * y + z * z - x * y * z - 2


# ------------------------------------------------------ projective normal form

def test_projective_normalize_basics():
    m = Mat2(0, Fraction(3, 2), 5, 7)
    n = projective_normalize(m)
    assert n == Mat2(0, 1, Fraction(10, 3), Fraction(14, 3))
    # first nonzero entry in row-major order is 1
    first = next(x for x in (n.a, n.b, n.c, n.d) if x != 0)
    assert first == 1


def test_projective_normalize_scale_invariant():
    rng = random.Random(31)
    for _ in range(50):
        m = rand_sl2(rng)
        s = rand_frac(rng, nonzero=True)
        assert projective_normalize(m.scale(s)) == projective_normalize(m)
        assert projective_normalize(projective_normalize(m)) == projective_normalize(m)


def test_projective_normalize_separates():
    a = Mat2(1, 1, 0, 1)
    b = Mat2(1, 2, 0, 1)
    assert projective_normalize(a) != projective_normalize(b)
    with pytest.raises(ValueError):
        projective_normalize(Mat2(0, 0, 0, 0))


# ---------------------------------------------------------------- real place

def test_classify_real_frozen():
    assert classify_real(Mat2.identity()).kind == "identity"
    assert classify_real(Mat2.identity().scale(-1)).kind == "identity"
    assert classify_real(Mat2(1, 5, 0, 1)).kind == "parabolic"
    assert classify_real(Mat2(-1, 0, 3, -1)).kind == "parabolic"
    assert classify_real(Mat2(3, 0, 0, Fraction(1, 3))).kind == "loxodromic"
    c = classify_real(Mat2(0, 1, -1, Fraction(1, 2)))
    assert c.kind == "elliptic-infinite-order" and c.order is None


def test_classify_real_requires_det_one():
    with pytest.raises(ValueError):
        classify_real(Mat2(2, 0, 0, 1))


def test_classify_real_conjugation_invariant():
    rng = random.Random(13)
    samples = [
        Mat2(0, 1, -1, 0),
        Mat2(1, -1, 1, 0),
        Mat2(1, 1, 0, 1),
        Mat2(2, 1, 1, 1),
        Mat2(0, 2, Fraction(-1, 2), Fraction(1, 2)),
    ]
    for m in samples:
        base = classify_real(m)
        for _ in range(20):
            c = rand_sl2(rng)
            conj = classify_real(c * m * c.inverse())
            assert (conj.kind, conj.order) == (base.kind, base.order)


# ---------------------------------------------------------------- finite places

def test_classify_padic_frozen():
    p2 = lambda m: classify_padic(m, 2)
    assert p2(Mat2.identity()).kind == "identity"
    assert p2(Mat2(3, 0, 0, 3)).kind == "identity"

    c = p2(Mat2(2, 0, 0, Fraction(1, 2)))
    assert c.kind == "loxodromic" and c.translation_length == 2

    c = p2(Mat2(1, 0, 0, 2))
    assert c.kind == "loxodromic" and c.translation_length == 1

    assert p2(Mat2(1, 0, 1, 1)).kind == "parabolic"
    assert p2(Mat2(1, Fraction(1, 2), 0, 1)).kind == "parabolic"

    c = p2(Mat2(0, 1, -1, 0))  # trace 0: projective order 2
    assert c.kind == "elliptic-finite-order" and c.order == 2

    c = p2(Mat2(1, 1, -1, 1))  # tr^2/det = 2
    assert c.kind == "elliptic-finite-order" and c.order == 4

    c = p2(Mat2(1, 2, -1, 1))  # tr^2/det = 4/3, a 2-adic unit, not in the table
    assert c.kind == "elliptic-infinite-order"

    c = classify_padic(Mat2(1, 2, -1, 1), 3)  # v_3(4/3) = -1
    assert c.kind == "loxodromic" and c.translation_length == 1

    c = p2(Mat2(0, 1, 2, 0))  # trace 0, det -2 of odd valuation
    assert c.kind == "elliptic-finite-order" and c.order == 2
    assert c.note is not None


def test_classify_padic_scale_invariant():
    rng = random.Random(97)
    samples = [
        Mat2(2, 0, 0, Fraction(1, 2)),
        Mat2(1, 0, 1, 1),
        Mat2(0, 1, -1, 0),
        Mat2(1, 2, -1, 1),
        Mat2(1, Fraction(1, 4), 0, 1),
    ]
    for m in samples:
        for p in (2, 3, 5):
            base = classify_padic(m, p)
            for _ in range(10):
                s = rand_frac(rng, nonzero=True)
                c = classify_padic(m.scale(s), p)
                assert (c.kind, c.order, c.translation_length) == (
                    base.kind,
                    base.order,
                    base.translation_length,
                )


def test_classify_padic_parabolic_iff_r_is_four():
    # unipotent conjugates all come out parabolic
    rng = random.Random(43)
    u = Mat2(1, 1, 0, 1)
    for _ in range(30):
        c = rand_sl2(rng)
        m = c * u * c.inverse()
        for p in (2, 3):
            assert classify_padic(m, p).kind == "parabolic"
