"""Reduced words over a symmetric alphabet and their matrix images.

A letter is a pair (index, sign) with sign +1 or -1; a word is a tuple of
letters. The canonical order on letters puts each generator just before its
inverse: a < a^-1 < b < b^-1 < ... All enumeration in the package follows
(length, lexicographic) order under that convention, so search results are
reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exact_core import Mat2


@dataclass(frozen=True)
class Word:
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


EMPTY_WORD = Word(())


def letter_key(letter):
    i, s = letter
    return (i, 0 if s > 0 else 1)


def word_key(letters):
    return tuple(letter_key(l) for l in letters)


def canonical_letters(num_gens):
    """All 2k letters in canonical order."""
    out = []
    for i in range(num_gens):
        out.append((i, 1))
        out.append((i, -1))
    return tuple(out)


def _cancels(x, y):
    return x[0] == y[0] and x[1] == -y[1]


def reduce_letters(letters):
    out = []
    for l in letters:
        if out and _cancels(out[-1], l):
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def invert_letters(letters):
    return tuple((i, -s) for i, s in reversed(letters))


def reduce(w):
    return Word(reduce_letters(w.letters))


def invert(w):
    return Word(invert_letters(w.letters))


def multiply(u, v):
    """Concatenate and reduce."""
    return Word(reduce_letters(u.letters + v.letters))


def is_reduced(letters):
    return all(not _cancels(letters[i], letters[i + 1]) for i in range(len(letters) - 1))


def necklace_canonical(w):
    """Canonical representative of the conjugacy class of w and w^-1.

    Cyclically reduce, then take the lexicographically least rotation of the
    word and of its inverse under the canonical letter order.
    """
    ls = list(reduce_letters(w.letters))
    while len(ls) >= 2 and _cancels(ls[0], ls[-1]):
        ls = ls[1:-1]
    if not ls:
        return EMPTY_WORD
    best = None
    for cand in (tuple(ls), invert_letters(tuple(ls))):
        for r in range(len(cand)):
            rot = cand[r:] + cand[:r]
            if best is None or word_key(rot) < word_key(best):
                best = rot
    return Word(best)


class Alphabet:
    """Named generators with exact invertible matrices; inverses precomputed."""

    _NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

    def __init__(self, names, matrices):
        self.names = tuple(names)
        self.matrices = tuple(matrices)
        if len(self.names) != len(self.matrices):
            raise ValueError("names and matrices differ in length")
        if not self.names:
            raise ValueError("empty alphabet")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator name")
        for n in self.names:
            if not self._NAME_RE.match(n):
                raise ValueError(f"bad generator name {n!r}")
        for m in self.matrices:
            if m.det() == 0:
                raise ValueError("singular generator matrix")
        self.inverses = tuple(m.inverse() for m in self.matrices)

    def __len__(self):
        return len(self.names)

    def matrix_of(self, letter):
        i, s = letter
        return self.matrices[i] if s > 0 else self.inverses[i]


def evaluate(w, alphabet):
    """Left-to-right matrix image of a word; a homomorphism on reduced words."""
    out = Mat2.identity()
    for l in w.letters:
        out = out * alphabet.matrix_of(l)
    return out


def iter_level(num_gens, length, first=None):
    """Reduced words of exactly the given length, lexicographic order.

    first, when given, restricts to words starting with that letter; levels
    shard cleanly by first letter because it dominates the lex order.
    """
    letters = canonical_letters(num_gens)
    if length == 0:
        if first is None:
            yield EMPTY_WORD
        return

    def extend(prefix, remaining):
        if remaining == 0:
            yield Word(tuple(prefix))
            return
        last = prefix[-1] if prefix else None
        for l in letters:
            if last is not None and _cancels(last, l):
                continue
            prefix.append(l)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    if first is None:
        yield from extend([], length)
    else:
        yield from extend([first], length - 1)


def iter_words(num_gens, max_len):
    """All reduced words of length <= max_len, shortest first, lex within a length.

    Iterative deepening: memory stays O(max_len) while the output is in the
    canonical total order.
    """
    for n in range(max_len + 1):
        yield from iter_level(num_gens, n)


def iter_level_with_matrices(alphabet, length, first=None):
    """Like iter_level but carrying the exact matrix image along the DFS."""
    letters = canonical_letters(len(alphabet))
    if length == 0:
        if first is None:
            yield EMPTY_WORD, Mat2.identity()
        return

    def extend(prefix, m, remaining):
        if remaining == 0:
            yield Word(tuple(prefix)), m
            return
        last = prefix[-1] if prefix else None
        for l in letters:
            if last is not None and _cancels(last, l):
                continue
            prefix.append(l)
            yield from extend(prefix, m * alphabet.matrix_of(l), remaining - 1)
            prefix.pop()

    if first is None:
        yield from extend([], Mat2.identity(), length)
    else:
        yield from extend([first], alphabet.matrix_of(first), length - 1)


def iter_words_with_matrices(alphabet, max_len):
    for n in range(max_len + 1):
        yield from iter_level_with_matrices(alphabet, n)


def format_word(w, alphabet):
    """Whitespace-separated tokens, one per letter, ^-1 marking inverses."""
    parts = []
    for i, s in w.letters:
        name = alphabet.names[i]
        parts.append(name if s > 0 else name + "^-1")
    return " ".join(parts)


_TOKEN_RE = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*)(?:\^(?P<exp>-?\d+))?$")


def parse_word(text, alphabet):
    """Parse whitespace-separated tokens into a word.

    Token forms: name, name^k, name^-k. A single uppercase token whose
    lowercase form is a generator denotes the inverse (A means a^-1). The
    result is not reduced; callers reduce when they need to.
    """
    index = {n: i for i, n in enumerate(alphabet.names)}
    letters = []
    for tok in text.split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        name = m.group("name")
        sign = 1
        if name not in index and name != name.lower() and name.lower() in index:
            name = name.lower()
            sign = -1
        if name not in index:
            raise ValueError(f"unknown generator {m.group('name')!r}")
        exp = m.group("exp")
        k = 1 if exp is None else int(exp)
        if k == 0:
            raise ValueError(f"zero exponent in token {tok!r}")
        sign = sign * (1 if k > 0 else -1)
        letters.extend([(index[name], sign)] * abs(k))
    return Word(tuple(letters))
