"""Irreducibility and discreteness diagnostics for S-arithmetic subgroups of
SL(2, Q): place support, Zariski density, integral-trace scans, per-place
indiscreteness witnesses, and a two-generator probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bt_tree import orbit_bounded, translation_length
from .exact_core import (
    ElementClass,
    Mat2,
    classify_padic,
    classify_real,
    commutator,
    denominator_primes,
    vp,
)
from .lu_lab import knapp, pingpong
from .words import Alphabet, Word, evaluate, format_word, iter_words_with_matrices, necklace_canonical

GS_TAG = "conditional on the Greenberg-Shalom hypothesis"

PROBE_MESSAGE = (
    "candidate irreducible pair: finite index in an arithmetic lattice "
    "would follow, " + GS_TAG
)

# tr^2/det values of nontrivial torsion; 4 is the parabolic/identity line
_TORSION_R = (Fraction(0), Fraction(1), Fraction(2), Fraction(3))


def long_reid_pair():
    """The diagonal/dense pair in SL(2, Z[1/6]) acting on H^2 x T_2 x T_3."""
    a = Mat2(3, 0, 0, Fraction(1, 3))
    b = Mat2(Fraction(1, 8), 9, Fraction(1, 32), Fraction(41, 4))
    return Alphabet(("a", "b"), (a, b))


@dataclass(frozen=True)
class PlaceSupport:
    primes: tuple
    includes_real: bool = True


def place_support(alphabet):
    """Primes appearing in any denominator of a generator or its inverse."""
    primes = set()
    for m in alphabet.matrices + alphabet.inverses:
        for e in m.entries():
            primes.update(denominator_primes(e))
    return PlaceSupport(tuple(sorted(primes)), True)


@dataclass(frozen=True)
class DensityResult:
    verdict: str      # "dense" | "not-dense" | "unknown"
    reason: str       # "reducible" | "monomial" | "finite" | None
    traces: dict      # labelled exact traces backing the verdict
    pair: tuple = None  # words tested, as formatted strings, when relevant


def zariski_dense(g, h):
    """Zariski density of <g, h> in SL_2, decided by exact trace conditions.

    Requires det 1. tr[g, h] = 2 is equivalent to a common eigenvector over
    an extension (reducible). Otherwise the only way to miss density is to
    preserve an unordered pair of lines (monomial up to conjugacy): with
    both squares noncentral that is detected by tr[g^2, h^2] = 2; when a
    generator s has trace 0 (central square) the pair of lines test becomes
    tr([t, s t s^-1]) = 2 for the other generator t. Finite image cannot
    occur for det-1 matrices over Q beyond the cases already covered.
    """
    if g.det() != 1 or h.det() != 1:
        raise ValueError("zariski_dense needs det 1")
    c = commutator(g, h).trace()
    traces = {"tr_commutator": c}
    if c == 2:
        return DensityResult("not-dense", "reducible", traces)
    g2, h2 = g * g, h * h
    if not g2.is_scalar() and not h2.is_scalar():
        c2 = commutator(g2, h2).trace()
        traces["tr_commutator_squares"] = c2
        if c2 == 2:
            return DensityResult("not-dense", "monomial", traces)
        return DensityResult("dense", None, traces)
    # a central square means that generator has trace 0
    if g.trace() == 0 and h.trace() == 0:
        traces["tr_g"] = g.trace()
        traces["tr_h"] = h.trace()
        return DensityResult("not-dense", "monomial", traces)
    s, t = (g, h) if g.trace() == 0 else (h, g)
    cc = commutator(t, s * t * s.inverse()).trace()
    traces["tr_line_pair_test"] = cc
    if cc == 2:
        return DensityResult("not-dense", "monomial", traces)
    return DensityResult("dense", None, traces)


def density_report(alphabet):
    """Density verdict for the whole generating set.

    One generator is never dense. For two, the pair decides the group. For
    more, pairs of generators and two-letter products are tried until one is
    dense; failing that the verdict stays unknown (pair certificates cannot
    rule density out).
    """
    k = len(alphabet)
    if k == 1:
        return DensityResult(
            "not-dense", "reducible", {}, (alphabet.names[0],)
        )
    candidates = [Word(((i, 1),)) for i in range(k)]
    if k > 2:
        for i in range(k):
            for j in range(k):
                if i != j:
                    candidates.append(Word(((i, 1), (j, 1))))
    best = None
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            u, v = candidates[i], candidates[j]
            g, h = evaluate(u, alphabet), evaluate(v, alphabet)
            if g.det() != 1 or h.det() != 1:
                continue
            r = zariski_dense(g, h)
            named = DensityResult(
                r.verdict, r.reason, r.traces,
                (format_word(u, alphabet), format_word(v, alphabet)),
            )
            if r.verdict == "dense":
                return named
            if best is None:
                best = named
    if k == 2 and best is not None:
        # the pair is the whole group, so its verdict is exact
        return best
    return DensityResult("unknown", None, {}, None)


@dataclass(frozen=True)
class TraceScanResult:
    primes: tuple
    max_len: int
    hits: tuple               # (word, trace, {p: v_p(trace)}) per hit
    classes_per_length: dict  # necklace classes scanned, by representative length
    hits_per_length: dict


def integral_trace_scan(alphabet, primes, max_len):
    """Conjugacy-class scan for words whose trace is integral at every prime.

    Walks reduced words of length 1..max_len in canonical order, keeps one
    representative per necklace class (the word equal to its own canonical
    form), and records those whose trace has nonnegative valuation at every
    listed prime. The identity (length 0) is integral trivially and skipped.
    """
    for p in primes:
        vp(1, p)  # validates primality
    classes_per_length = {n: 0 for n in range(1, max_len + 1)}
    hits_per_length = {n: 0 for n in range(1, max_len + 1)}
    hits = []
    for word, m in iter_words_with_matrices(alphabet, max_len):
        if len(word) == 0:
            continue
        if necklace_canonical(word) != word:
            continue
        classes_per_length[len(word)] += 1
        t = m.trace()
        vals = {p: vp(t, p) for p in primes}
        if all(v >= 0 for v in vals.values()):
            hits_per_length[len(word)] += 1
            hits.append((word, t, vals))
    return TraceScanResult(tuple(primes), max_len, tuple(hits), classes_per_length, hits_per_length)


@dataclass(frozen=True)
class PlaceStatus:
    place: str            # "real" or the prime as a string
    status: str           # "indiscrete-witness" | "bounded-orbit" | "inconclusive"
    word: Word            # witness word, None otherwise
    classification: ElementClass
    note: str = None


def _real_place_status(alphabet, max_len):
    for word, m in iter_words_with_matrices(alphabet, max_len):
        if len(word) == 0:
            continue
        det = m.det()
        if det <= 0:
            continue
        r = m.trace() ** 2 / det
        if r < 4 and r not in _TORSION_R:
            if det == 1:
                cls = classify_real(m)
            else:
                cls = ElementClass("elliptic-infinite-order", note="class from tr^2/det")
            return PlaceStatus("real", "indiscrete-witness", word, cls,
                               "elliptic of infinite order: orbits accumulate")
    return PlaceStatus(
        "real", "inconclusive", None, None,
        f"no elliptic element of infinite order among words of length <= {max_len}",
    )


def _finite_place_status(alphabet, p, max_len, radius):
    # direct witness: a p-integral unit-determinant word of infinite order
    # lives in the stabilizer of the base vertex, a compact group
    for word, m in iter_words_with_matrices(alphabet, max_len):
        if len(word) == 0 or m.is_scalar():
            continue
        if any(vp(e, p) < 0 for e in m.entries()):
            continue
        if vp(m.det(), p) != 0:
            continue
        if m.trace() ** 2 / m.det() in _TORSION_R:
            continue
        return PlaceStatus(
            str(p), "indiscrete-witness", word, classify_padic(m, p),
            "infinite order inside the base vertex stabilizer",
        )
    orbit = orbit_bounded(alphabet, p, radius)
    if orbit.status == "bounded":
        for word, m in iter_words_with_matrices(alphabet, max_len):
            if len(word) == 0:
                continue
            cls = classify_padic(m, p)
            if cls.kind in ("parabolic", "elliptic-infinite-order"):
                return PlaceStatus(
                    str(p), "indiscrete-witness", word, cls,
                    f"infinite order with the whole orbit inside radius {orbit.radius_seen}",
                )
        return PlaceStatus(
            str(p), "bounded-orbit", None, None,
            f"orbit closed within radius {orbit.radius_seen}; no infinite-order word of length <= {max_len}",
        )
    if orbit.status == "unbounded":
        return PlaceStatus(
            str(p), "inconclusive", orbit.witness, None,
            f"orbit escapes radius {radius} with loxodromic witness; no integrality witness of length <= {max_len}",
        )
    return PlaceStatus(
        str(p), "inconclusive", None, None,
        f"orbit escapes radius {radius} without a loxodromic witness at this depth",
    )


def _lu_parameter(alphabet):
    if len(alphabet) != 2:
        return None
    a, b = alphabet.matrices
    if a != Mat2(1, 0, 1, 1):
        return None
    if b.a == 1 and b.d == 1 and b.c == 0 and b.b != 0:
        return b.b
    return None


@dataclass(frozen=True)
class IrreducibilityReport:
    support: PlaceSupport
    places: tuple             # PlaceStatus entries, real first then primes ascending
    product_discrete: bool
    product_justification: str
    density: DensityResult
    conditional_notes: tuple


def irreducibility_report(alphabet, max_len=6, radius=3):
    """Per-place indiscreteness diagnostics and the product-level summary.

    Each finite place in the support is probed for an indiscreteness
    witness; the real place is scanned for elliptic elements of infinite
    order. The diagonal image in the product over the full support is
    always discrete (S-integer matrices of bounded denominator form a
    discrete set), which is what makes per-place indiscreteness evidence
    of irreducibility rather than of chaos.
    """
    support = place_support(alphabet)
    real = _real_place_status(alphabet, max_len)
    q = _lu_parameter(alphabet)
    if q is not None:
        if abs(q) >= 4:
            note = f"free and discrete at the real place by ping-pong (|q| = {abs(q)} >= 4)"
            real = PlaceStatus(real.place, real.status, real.word, real.classification,
                               (real.note + "; " + note) if real.note else note)
        else:
            kv = knapp(q)
            if kv.verdict == "discrete":
                note = f"discrete at the real place (Knapp parameter n = {kv.n})"
            else:
                note = "inside the Knapp indiscreteness window"
            real = PlaceStatus(real.place, real.status, real.word, real.classification,
                               (real.note + "; " + note) if real.note else note)
    places = [real]
    for p in support.primes:
        places.append(_finite_place_status(alphabet, p, max_len, radius))
    density = density_report(alphabet)
    notes = []
    finite = places[1:]
    if finite and all(st.status == "indiscrete-witness" for st in finite) and density.verdict == "dense":
        notes.append(
            GS_TAG + ": if the diagonal image is discrete in the product over "
            "its place support, these witnesses fit the profile of an "
            "irreducible lattice there"
        )
        notes.append(
            "discreteness of the image in the product over the finite places "
            "alone is not decided by these searches"
        )
    return IrreducibilityReport(
        support,
        tuple(places),
        True,
        "S-integer diagonal embedding: finitely many generators with "
        "denominators supported on S give a discrete diagonal image in the "
        "product over S and the real place",
        density,
        tuple(notes),
    )


@dataclass(frozen=True)
class ProbeCheck:
    name: str
    passed: bool
    data: dict


@dataclass(frozen=True)
class ProbeReport:
    checks: tuple
    decisive_pass: bool   # checks (1), (2) and (4); check (3) is evidence only
    message: str          # PROBE_MESSAGE on decisive pass, else None


def _delta_from_identity(m):
    one = Fraction(1)
    return max(abs(m.a - one), abs(m.b), abs(m.c), abs(m.d - one))


def two_gen_probe(g, h, p, iterations=5, names=("g", "h"), max_word_len=6):
    """Four quick exact checks on a candidate irreducible pair at {real, p}.

    (1) g is loxodromic over R; (2) <g, h> is Zariski dense; (3) iterated
    commutators c_0 = h, c_(k+1) = [c_k, g] stay nontrivial while their
    max-entry distance from I strictly decreases, reported as evidence and
    never as proof; (4) some word of length <= max_word_len is loxodromic on
    the tree at p. Entries must lie in Z[1/p] with det 1.
    """
    for m in (g, h):
        if m.det() != 1:
            raise ValueError("probe needs det 1")
        for e in m.entries():
            extra = [q for q in denominator_primes(e) if q != p]
            if extra:
                raise ValueError(f"entries outside Z[1/{p}]: denominator prime {extra[0]}")
    vp(1, p)  # validates primality

    t = g.trace()
    check1 = ProbeCheck("real-loxodromic-generator", t * t > 4, {"trace": t})

    density = zariski_dense(g, h)
    check2 = ProbeCheck("zariski-dense-pair", density.verdict == "dense",
                        {"verdict": density.verdict, "traces": density.traces})

    deltas = []
    nonidentity = True
    c = h
    for _ in range(iterations):
        c = commutator(c, g)
        deltas.append(_delta_from_identity(c))
        if c.is_identity():
            nonidentity = False
            break
    decreasing = all(deltas[i] > deltas[i + 1] for i in range(len(deltas) - 1))
    first_violation = None
    for i in range(len(deltas) - 1):
        if deltas[i] <= deltas[i + 1]:
            first_violation = i + 2  # 1-based index of the offending c_k
            break
    check3 = ProbeCheck(
        "iterated-commutator-contraction",
        nonidentity and decreasing and len(deltas) == iterations,
        {
            "start_delta": _delta_from_identity(h),
            "deltas": tuple(deltas),
            "nonidentity": nonidentity,
            "strictly_decreasing": decreasing,
            "first_violation": first_violation,
        },
    )

    alphabet = Alphabet(tuple(names), (g, h))
    check4 = ProbeCheck("loxodromic-word-at-p", False, {"p": p})
    for word, m in iter_words_with_matrices(alphabet, max_word_len):
        if len(word) == 0:
            continue
        ell = translation_length(m, p)
        if ell > 0:
            check4 = ProbeCheck(
                "loxodromic-word-at-p", True,
                {"p": p, "word": word, "trace": m.trace(),
                 "valuation": vp(m.trace(), p), "translation_length": ell},
            )
            break

    decisive = check1.passed and check2.passed and check4.passed
    return ProbeReport(
        (check1, check2, check3, check4),
        decisive,
        PROBE_MESSAGE if decisive else None,
    )
