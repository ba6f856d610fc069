"""Two-parabolic lab: the groups Delta_q = <a, b_q> with

    a = [[1, 0], [1, 1]],    b_q = [[1, q], [0, 1]],  q rational, q != 0.

Knapp's discreteness window, ping-pong freeness for |q| >= 4, and shortest
relator searches by meet-in-the-middle over projective images.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .exact_core import Mat2, projective_normalize
from .words import (
    Alphabet,
    EMPTY_WORD,
    Word,
    canonical_letters,
    evaluate,
    iter_level,
    iter_level_with_matrices,
    necklace_canonical,
    reduce_letters,
    word_key,
)


def lu_generators(q):
    """The alphabet {a, b} of Delta_q. Rejects q = 0 (b collapses to I)."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("q = 0 collapses b to the identity")
    a = Mat2(1, 0, 1, 1)
    b = Mat2(1, q, 0, 1)
    return Alphabet(("a", "b"), (a, b))


@dataclass(frozen=True)
class KnappVerdict:
    verdict: str  # "discrete" | "indiscrete"
    n: int        # Knapp parameter with |q| = 4cos^2(pi/n), None when indiscrete
    q: Fraction


def knapp(q):
    """Discreteness of Delta_q inside the window 0 < |q| < 4.

    The discrete parameters in the window are |q| = 4cos^2(pi/n) for
    n in {3, 4, 6}, i.e. |q| in {1, 2, 3}; 2 + 2cos(2pi/n) is rational at no
    other n >= 3, so every other rational q in the window is indiscrete.
    q and -q give conjugate groups (conjugate by diag(1, -1)).
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("q = 0 collapses b to the identity")
    if abs(q) >= 4:
        raise ValueError("knapp window is 0 < |q| < 4")
    table = {Fraction(1): 3, Fraction(2): 4, Fraction(3): 6}
    n = table.get(abs(q))
    if n is None:
        return KnappVerdict("indiscrete", None, q)
    return KnappVerdict("discrete", n, q)


@dataclass(frozen=True)
class PingpongResult:
    applicable: bool
    free: bool
    m_squared: Fraction  # |q|, the square of the balanced parameter
    inequalities: tuple
    q: Fraction


def pingpong(q):
    """Ping-pong freeness certificate for |q| >= 4.

    Conjugating by diag(t, 1/t) with t^4 = 1/|q| balances the pair to
    [[1, m], [0, 1]], [[1, 0], [m, 1]] with m^2 = |q| (and a sign flip on one
    parameter when q < 0, which does not affect the estimate). The classical
    chain |x + k*m*y| >= m|y| - |x| > |y| for k != 0 only needs m >= 2, so
    the exact inequality |q| >= 4 certifies freeness.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("q = 0 collapses b to the identity")
    if abs(q) < 4:
        return PingpongResult(False, False, abs(q), ("|q| < 4: ping-pong estimate not available",), q)
    steps = (
        f"|q| = {abs(q)} >= 4",
        "balanced form has m^2 = |q|, so m >= 2",
        "for k != 0: |x + k*m*y| >= m|y| - |x| > |y| whenever |x| < |y|",
        "the two parabolic subgroups play ping-pong on the height-ordered halves of R^2",
    )
    return PingpongResult(True, True, abs(q), steps, q)


@dataclass(frozen=True)
class RelatorResult:
    status: str                # "relator-found" | "none-found" | "inconclusive"
    relator: Word              # necklace-canonical, None unless found
    scalar: Fraction           # evaluate(relator) = scalar * I
    strategy: str
    max_len: int
    completed_length: int      # no relator of length <= this was missed
    words_per_length: dict     # reduced words enumerated, by exact length
    images_per_length: dict    # distinct projective images among them, by exact length


def _projective_key(m):
    return projective_normalize(m).entries()


def _entry_cost(key, word_len):
    # Coarse deterministic memory model for one table entry, in bytes: dict
    # slot overhead plus bignum digits plus the stored word. Used only to
    # compare against mem_cap; identical on every run by construction.
    digits = 0
    for f in key:
        digits += (f.numerator.bit_length() + f.denominator.bit_length() + 15) // 8
    return 64 + 8 * word_len + digits


def _level_entries(alphabet, length, first):
    out = []
    for word, m in iter_level_with_matrices(alphabet, length, first=first):
        out.append((word, _projective_key(m), _projective_key(m.inverse())))
    return out


def relator_search(alphabet, max_len, mem_cap=None, threads=1, progress=None):
    """Shortest relator (word with scalar image) by meet-in-the-middle.

    Builds all reduced words of length <= ceil(max_len/2) keyed by projective
    normal form. A relator w = u x of length L makes image(u) = image(x^-1)
    collide, and every rotation of a cyclic relator is scanned, so the first
    level with a collision carries a certified-minimal relator; among
    minimal-length relators the least necklace form is returned
    (necklace-deduplicating the collision set). No collision through level k
    certifies no relator of length <= 2k.

    mem_cap bounds the table size under a coarse deterministic byte model; a
    breached cap yields status "inconclusive" unless a relator was already
    certified at a completed level. threads shards each level by first
    letter; shards merge in canonical order, so results never depend on
    scheduling.
    """
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    half = (max_len + 1) // 2
    table = {_projective_key(Mat2.identity()): EMPTY_WORD}
    cost = _entry_cost(next(iter(table)), 0)
    words_per_length = {0: 1}
    images_per_length = {0: 1}
    firsts = canonical_letters(len(alphabet))

    def finish(status, relator=None, scalar=None, completed=0):
        return RelatorResult(
            status,
            relator,
            scalar,
            "meet-in-the-middle",
            max_len,
            completed,
            words_per_length,
            images_per_length,
        )

    for level in range(1, half + 1):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                shards = list(pool.map(lambda f: _level_entries(alphabet, level, f), firsts))
        else:
            shards = [_level_entries(alphabet, level, f) for f in firsts]

        entries = [e for shard in shards for e in shard]
        words_per_length[level] = len(entries)
        level_keys = set()
        capped = False
        for word, key, _ in entries:
            level_keys.add(key)
            if key not in table:
                cost += _entry_cost(key, len(word))
                if mem_cap is not None and cost > mem_cap:
                    capped = True
                    break
                table[key] = word
        images_per_length[level] = len(level_keys)
        if capped:
            return finish("inconclusive", completed=min(2 * (level - 1), max_len))

        candidates = []
        for word, _, inv_key in entries:
            u = table.get(inv_key)
            if u is None:
                continue
            rel = reduce_letters(u.letters + word.letters)
            if rel and len(rel) <= max_len:
                candidates.append(Word(rel))
        if progress is not None:
            progress(level, len(entries), len(table))
        if candidates:
            best = min(candidates, key=lambda w: (len(w), word_key(necklace_canonical(w).letters)))
            relator = necklace_canonical(best)
            image = evaluate(relator, alphabet)
            if not image.is_scalar():
                raise AssertionError("collision produced a non-scalar image")
            return finish(
                "relator-found",
                relator=relator,
                scalar=image.a,
                completed=min(2 * level, max_len),
            )
    return finish("none-found", completed=max_len)


def naive_relator_search(alphabet, max_len):
    """Reference strategy: scan every reduced word by length for a scalar image.

    Exponentially slower than relator_search; kept as an independent oracle,
    including an independent count of distinct projective images per length.
    """
    words_per_length = {}
    images_per_length = {}
    found = []
    for length in range(max_len + 1):
        count = 0
        keys = set()
        for word in iter_level(len(alphabet), length):
            m = evaluate(word, alphabet)
            count += 1
            keys.add(_projective_key(m))
            if length > 0 and m.is_scalar():
                found.append(word)
        words_per_length[length] = count
        images_per_length[length] = len(keys)
        if found:
            best = min(found, key=lambda w: word_key(necklace_canonical(w).letters))
            relator = necklace_canonical(best)
            return RelatorResult(
                "relator-found",
                relator,
                evaluate(relator, alphabet).a,
                "naive",
                max_len,
                length,
                words_per_length,
                images_per_length,
            )
    return RelatorResult(
        "none-found", None, None, "naive", max_len, max_len, words_per_length, images_per_length
    )
