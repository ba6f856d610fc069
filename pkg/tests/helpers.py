"""Shared test utilities: seeded random rationals, SL2 matrices, words."""

from fractions import Fraction

from commlab.exact_core import Mat2
from commlab.words import Word, canonical_letters, reduce_letters


def rand_frac(rng, bound=30, nonzero=False):
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if not (nonzero and x == 0):
            return x


def rand_sl2(rng, steps=4, bound=5):
    """Random det-1 matrix as a product of elementary shears; exact."""
    m = Mat2.identity()
    for _ in range(steps):
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if rng.random() < 0.5:
            m = m * Mat2(1, x, 0, 1)
        else:
            m = m * Mat2(1, 0, x, 1)
    return m


def rand_reduced_word(rng, num_gens, length):
    letters = canonical_letters(num_gens)
    out = []
    while len(out) < length:
        l = rng.choice(letters)
        if out and out[-1][0] == l[0] and out[-1][1] == -l[1]:
            continue
        out.append(l)
    assert reduce_letters(tuple(out)) == tuple(out)
    return Word(tuple(out))
