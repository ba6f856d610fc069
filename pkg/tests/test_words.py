"""Free-group words: reduction, enumeration order, evaluation, necklaces."""

import random
from fractions import Fraction

import pytest

from commlab.exact_core import Mat2
from commlab.words import (
    EMPTY_WORD,
    Alphabet,
    Word,
    canonical_letters,
    evaluate,
    format_word,
    invert,
    is_reduced,
    iter_level,
    iter_level_with_matrices,
    iter_words,
    multiply,
    necklace_canonical,
    parse_word,
    reduce,
    word_key,
)
from helpers import rand_reduced_word

A = (0, 1)
Ai = (0, -1)
B = (1, 1)
Bi = (1, -1)


def two_gen_alphabet():
    return Alphabet(["a", "b"], [Mat2(1, 2, 0, 1), Mat2(1, 0, 2, 1)])


# ---------------------------------------------------------------- reduction

def test_reduce_frozen():
    assert reduce(Word((A, B, Bi, A))) == Word((A, A))
    assert reduce(Word((A, Ai))) == EMPTY_WORD
    assert reduce(Word((B, A, Ai, Bi))) == EMPTY_WORD
    assert reduce(Word((A, B, A))) == Word((A, B, A))


def test_reduce_handles_cascades():
    # inner cancellation exposes an outer one
    w = Word((A, B, Ai, A, Bi, B, Bi, Ai))
    assert reduce(w) == EMPTY_WORD


def test_multiply_and_invert():
    rng = random.Random(17)
    for _ in range(200):
        u = rand_reduced_word(rng, 2, rng.randint(0, 6))
        v = rand_reduced_word(rng, 2, rng.randint(0, 6))
        assert multiply(u, invert(u)) == EMPTY_WORD
        assert invert(invert(u)) == u
        assert invert(multiply(u, v)) == multiply(invert(v), invert(u))
        assert is_reduced(multiply(u, v).letters)


# ---------------------------------------------------------------- enumeration

def test_iter_words_frozen_two_generators():
    got = [w.letters for w in iter_words(2, 1)]
    assert got == [(), (A,), (Ai,), (B,), (Bi,)]


def test_iter_words_frozen_one_generator():
    got = [w.letters for w in iter_words(1, 3)]
    assert got == [
        (),
        (A,),
        (Ai,),
        (A, A),
        (Ai, Ai),
        (A, A, A),
        (Ai, Ai, Ai),
    ]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_level_counts(k):
    # reduced words of length n over k generators: 2k (2k-1)^(n-1)
    for n in range(1, 5):
        count = sum(1 for _ in iter_level(k, n))
        assert count == 2 * k * (2 * k - 1) ** (n - 1)


def test_enumeration_order_and_uniqueness():
    seen = set()
    prev = None
    for w in iter_words(2, 4):
        assert is_reduced(w.letters)
        key = (len(w), word_key(w.letters))
        if prev is not None:
            assert prev < key
        prev = key
        assert w.letters not in seen
        seen.add(w.letters)


def test_iter_level_sharding_matches_full_level():
    full = list(iter_level(2, 3))
    shards = []
    for first in canonical_letters(2):
        shards.extend(iter_level(2, 3, first=first))
    assert shards == full


def test_iter_level_with_matrices_consistent():
    ab = two_gen_alphabet()
    for w, m in iter_level_with_matrices(ab, 3):
        assert m == evaluate(w, ab)


# ---------------------------------------------------------------- evaluation

def test_evaluate_is_a_homomorphism():
    ab = two_gen_alphabet()
    rng = random.Random(23)
    for _ in range(200):
        u = rand_reduced_word(rng, 2, rng.randint(0, 5))
        v = rand_reduced_word(rng, 2, rng.randint(0, 5))
        assert evaluate(multiply(u, v), ab) == evaluate(u, ab) * evaluate(v, ab)
        assert evaluate(invert(u), ab) == evaluate(u, ab).inverse()
    assert evaluate(EMPTY_WORD, ab) == Mat2.identity()


# ---------------------------------------------------------------- necklaces

def test_necklace_frozen():
    assert necklace_canonical(Word((A, Bi))) == Word((A, Bi))
    # conjugate of b by a cyclically reduces to b
    assert necklace_canonical(Word((A, B, Ai))) == Word((B,))
    # inverse closure: least over the class of w and w^-1
    assert necklace_canonical(Word((Bi, A))) == Word((A, Bi))
    assert necklace_canonical(Word((B, Ai))) == Word((A, Bi))
    assert necklace_canonical(EMPTY_WORD) == EMPTY_WORD


def test_necklace_invariance():
    rng = random.Random(29)
    for _ in range(50):
        w = rand_reduced_word(rng, 2, rng.randint(1, 6))
        c = rand_reduced_word(rng, 2, rng.randint(0, 4))
        conj = multiply(multiply(c, w), invert(c))
        assert necklace_canonical(conj) == necklace_canonical(w)
        assert necklace_canonical(invert(w)) == necklace_canonical(w)
        # idempotent
        n = necklace_canonical(w)
        assert necklace_canonical(n) == n


# ---------------------------------------------------------------- parse/format

def test_format_frozen():
    ab = two_gen_alphabet()
    assert format_word(Word((A, Bi, Bi)), ab) == "a b^-1 b^-1"
    assert format_word(EMPTY_WORD, ab) == ""


def test_parse_round_trip():
    ab = two_gen_alphabet()
    rng = random.Random(37)
    for _ in range(100):
        w = rand_reduced_word(rng, 2, rng.randint(0, 6))
        assert parse_word(format_word(w, ab), ab) == w


def test_parse_syntax():
    ab = two_gen_alphabet()
    assert parse_word("a^3", ab) == Word((A, A, A))
    assert parse_word("b^-2", ab) == Word((Bi, Bi))
    assert parse_word("A b", ab) == Word((Ai, B))  # single uppercase = inverse
    assert parse_word("a b b^-1", ab) == Word((A, B, Bi))  # parse does not reduce
    assert parse_word("", ab) == EMPTY_WORD
    assert parse_word("   ", ab) == EMPTY_WORD


def test_parse_errors():
    ab = two_gen_alphabet()
    with pytest.raises(ValueError):
        parse_word("c", ab)
    with pytest.raises(ValueError):
        parse_word("a^0", ab)
    with pytest.raises(ValueError):
        parse_word("a^", ab)
    with pytest.raises(ValueError):
        parse_word("a*b", ab)


# ---------------------------------------------------------------- alphabet

def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(["a", "a"], [Mat2(1, 2, 0, 1), Mat2(1, 0, 2, 1)])
    with pytest.raises(ValueError):
        Alphabet(["a"], [Mat2(1, 2, 2, 4)])  # singular
    with pytest.raises(ValueError):
        Alphabet(["2bad"], [Mat2(1, 2, 0, 1)])
    with pytest.raises(ValueError):
        Alphabet([], [])


def test_alphabet_inverses_precomputed():
    ab = two_gen_alphabet()
    assert ab.matrix_of(Ai) == Mat2(1, -2, 0, 1)
    assert ab.matrix_of(B) * ab.matrix_of(Bi) == Mat2.identity()
