"""Words over [r], permutations, and pattern containment.

Conventions used throughout the package:

- Letters and positions are 1-based. A word over the alphabet [r] is a
  finite sequence of integers from {1, ..., r}; a permutation of [k] is
  given in one-line notation.
- A permutation tau is a *pattern* of a word sigma if some subsequence of
  sigma is order-isomorphic to tau. A word is a *k-superpattern* if it
  contains every permutation of [k] as a pattern.

Containment on a general alphabet reduces to value-subset search: tau is a
pattern of sigma iff, for some k-subset Y of the letter values, tau embeds
into the subsequence of sigma supported on Y with values relabeled
order-preservingly to [k]. On a word that uses every letter of [k], an
embedding exists iff the greedy leftmost-next-occurrence embedding
succeeds, so each subset costs one linear scan instead of a search over
index subsets.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import AlphabetMismatchError, ResourceLimitError

__all__ = [
    "Word",
    "Permutation",
    "as_word",
    "as_permutation",
    "is_pattern",
    "find_embedding",
    "greedy_embed",
    "pattern_set",
    "is_superpattern",
    "f_oracle",
    "circular_contains",
    "ascent_count",
    "repeat_word",
    "exhaustive_f_search",
    "parse_word",
    "format_word",
    "parse_permutation",
    "format_permutation",
]

# Safe default caps; every capped operation takes these as keyword
# arguments so callers can raise them deliberately.
MAX_FACTORIAL_K = 10
MAX_ENUM_WORDS = 10**7


@dataclass(frozen=True)
class Word:
    """A finite word over the alphabet [r] = {1, ..., r}.

    >>> Word((1, 2, 3, 2), 3)
    Word(letters=(1, 2, 3, 2), alphabet_size=3)
    >>> len(Word((1, 2, 3, 2), 3))
    4
    """

    letters: tuple[int, ...]
    alphabet_size: int

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be a positive integer")
        for x in self.letters:
            if not (1 <= x <= self.alphabet_size):
                raise ValueError(
                    f"letter {x!r} outside alphabet [{self.alphabet_size}]"
                )

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def distinct_letters(self) -> tuple[int, ...]:
        """The letter values that actually occur, ascending."""
        return tuple(sorted(set(self.letters)))

    def reversed(self) -> "Word":
        return Word(self.letters[::-1], self.alphabet_size)

    def rotated(self, i: int) -> "Word":
        """The rotation starting at 1-based position i+1."""
        i %= max(len(self.letters), 1)
        return Word(self.letters[i:] + self.letters[:i], self.alphabet_size)


@dataclass(frozen=True)
class Permutation:
    """A permutation of [k] in one-line notation.

    >>> Permutation((3, 1, 2)).k
    3
    """

    images: tuple[int, ...]

    def __post_init__(self):
        k = len(self.images)
        if sorted(self.images) != list(range(1, k + 1)):
            raise ValueError(f"{self.images!r} is not a permutation of [{k}]")

    @property
    def k(self) -> int:
        return len(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def reversed(self) -> "Permutation":
        return Permutation(self.images[::-1])


def as_word(sigma, alphabet_size: Optional[int] = None) -> Word:
    """Coerce a Word or a plain sequence of letters to a Word.

    When alphabet_size is omitted it is inferred as the maximum letter
    (1 for the empty word).
    """
    if isinstance(sigma, Word):
        if alphabet_size is not None and alphabet_size != sigma.alphabet_size:
            raise AlphabetMismatchError(
                f"word declares r={sigma.alphabet_size}, caller wants r={alphabet_size}"
            )
        return sigma
    letters = tuple(int(x) for x in sigma)
    if alphabet_size is None:
        alphabet_size = max(letters, default=1)
    return Word(letters, alphabet_size)


def as_permutation(tau) -> Permutation:
    if isinstance(tau, Permutation):
        return tau
    return Permutation(tuple(int(x) for x in tau))


def _positions_by_letter(letters: Sequence[int]) -> dict:
    """1-based occurrence lists per letter value, in increasing order."""
    occ: dict[int, list[int]] = {}
    for i, x in enumerate(letters, start=1):
        occ.setdefault(x, []).append(i)
    return occ


def _greedy_on_values(occ: dict, values: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Leftmost embedding reading the given letter values in order.

    Returns the 1-based index sequence, or None if some value has no
    occurrence after the previous index.
    """
    indices = []
    i = 0
    for v in values:
        ps = occ.get(v)
        if ps is None:
            return None
        at = bisect_right(ps, i)
        if at == len(ps):
            return None
        i = ps[at]
        indices.append(i)
    return tuple(indices)


def is_pattern(sigma, tau) -> bool:
    """Whether tau occurs in sigma as a (classical, order-isomorphic) pattern.

    >>> is_pattern((2, 5, 1, 4, 3), (3, 1, 2))
    True
    >>> is_pattern((1, 2, 3, 2), (2, 1, 3))
    False
    """
    sigma = as_word(sigma)
    tau = as_permutation(tau)
    k = tau.k
    if k == 0:
        return True
    values = sigma.distinct_letters()
    if len(values) < k:
        return False
    occ = _positions_by_letter(sigma.letters)
    for Y in combinations(values, k):
        wanted = tuple(Y[t - 1] for t in tau.images)
        if _greedy_on_values(occ, wanted) is not None:
            return True
    return False


def find_embedding(sigma, tau) -> Optional[tuple[int, ...]]:
    """The lexicographically least embedding of tau into sigma, or None.

    An embedding is a strictly increasing tuple of 1-based positions
    i_1 < ... < i_k with sigma restricted to them order-isomorphic to tau.

    >>> find_embedding((2, 5, 1, 4, 3), (3, 1, 2))
    (2, 3, 4)
    """
    sigma = as_word(sigma)
    tau = as_permutation(tau)
    k = tau.k
    if k == 0:
        return ()
    values = sigma.distinct_letters()
    if len(values) < k:
        return None
    occ = _positions_by_letter(sigma.letters)
    best = None
    for Y in combinations(values, k):
        wanted = tuple(Y[t - 1] for t in tau.images)
        emb = _greedy_on_values(occ, wanted)
        if emb is not None and (best is None or emb < best):
            best = emb
    return best


def greedy_embed(sigma, tau) -> Optional[tuple[int, ...]]:
    """Greedy leftmost-next-occurrence embedding of tau into sigma.

    sigma must be declared over the alphabet [k] where k = len(tau); on
    such words the greedy embedding succeeds iff any embedding exists.
    Positions are 1-based.

    >>> greedy_embed(as_word((1, 2, 3, 2), 3), (1, 2, 3))
    (1, 2, 3)
    >>> greedy_embed(as_word((1, 2, 3, 2), 3), (2, 1, 3)) is None
    True
    """
    sigma = as_word(sigma)
    tau = as_permutation(tau)
    if sigma.alphabet_size != tau.k:
        raise AlphabetMismatchError(
            f"greedy embedding needs a word over [k]: "
            f"r={sigma.alphabet_size} but k={tau.k}"
        )
    occ = _positions_by_letter(sigma.letters)
    return _greedy_on_values(occ, tau.images)


def _patterns_of_relabeled(occ_by_rank: list, k: int) -> set:
    """All tau in S_k embeddable when rank j's occurrences are occ_by_rank[j].

    Depth-first search over injective letter sequences, advancing a
    position cursor with the greedy rule; abandoning a prefix as soon as
    its next letter has no later occurrence prunes the k! tree to viable
    branches only.
    """
    found: set[tuple[int, ...]] = set()
    path: list[int] = []

    def rec(pos: int, used: int):
        if len(path) == k:
            found.add(tuple(path))
            return
        for t in range(1, k + 1):
            bit = 1 << (t - 1)
            if used & bit:
                continue
            ps = occ_by_rank[t]
            at = bisect_right(ps, pos)
            if at < len(ps):
                path.append(t)
                rec(ps[at], used | bit)
                path.pop()

    rec(0, 0)
    return found


def pattern_set(sigma, k: int, *, max_k: int = MAX_FACTORIAL_K) -> set:
    """Exactly the permutations of [k] contained in sigma, as Permutations.

    >>> sorted(p.images for p in pattern_set((1, 2, 3, 2), 3))
    [(1, 2, 3), (1, 3, 2)]
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > max_k:
        raise ResourceLimitError(
            f"pattern_set with k={k} exceeds the k! cap (max_k={max_k})"
        )
    sigma = as_word(sigma)
    if k == 0:
        return {Permutation(())}
    values = sigma.distinct_letters()
    if len(values) < k:
        return set()
    occ = _positions_by_letter(sigma.letters)
    out: set[tuple[int, ...]] = set()
    for Y in combinations(values, k):
        occ_by_rank = [None] + [occ[y] for y in Y]
        out |= _patterns_of_relabeled(occ_by_rank, k)
    return {Permutation(t) for t in out}


def is_superpattern(sigma, k: int, *, max_k: int = MAX_FACTORIAL_K) -> bool:
    """Whether sigma contains every permutation of [k] as a pattern."""
    if k == 0:
        return True
    return len(pattern_set(sigma, k, max_k=max_k)) == math.factorial(k)


def _canonical_words(n: int, max_letters: int):
    """Words of length n, first occurrences in increasing letter order.

    Each letter-relabeling class has exactly one canonical member, and it
    is the lexicographically least member, so canonical words enumerate
    classes in lexicographic order.
    """
    prefix: list[int] = []

    def rec(seen: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for t in range(1, min(seen + 1, max_letters) + 1):
            prefix.append(t)
            yield from rec(max(seen, t))
            prefix.pop()

    yield from rec(0)


def _count_patterns_full_alphabet(letters: Sequence[int], k: int) -> int:
    """Pattern count of a word over [k] that uses all k letters."""
    occ = _positions_by_letter(letters)
    occ_by_rank = [None] + [occ[t] for t in range(1, k + 1)]
    return len(_patterns_of_relabeled(occ_by_rank, k))


def f_oracle(
    k: int, n: int, *, max_k: int = 4, max_n: int = 12
) -> tuple[int, Word]:
    """Exact maximum pattern count over all words in [k]^n, with a witness.

    Exhausts canonical representatives under letter relabeling (pattern
    counts are relabeling-invariant), so the search space is k^n / ~k!.
    The witness is the lexicographically least maximizing word.

    >>> f_oracle(3, 4)[0]
    2
    """
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    if k > max_k or n > max_n:
        raise ResourceLimitError(
            f"f_oracle(k={k}, n={n}) exceeds caps (max_k={max_k}, max_n={max_n})"
        )
    best = -1
    witness = ()
    for w in _canonical_words(n, k):
        # Canonical words use exactly the letters 1..max(w); anything
        # short of the full alphabet contains no length-k pattern.
        uses_all = bool(w) and max(w) == k
        count = _count_patterns_full_alphabet(w, k) if uses_all else 0
        if count > best:
            best = count
            witness = w
    return best, Word(witness, k)


def circular_contains(sigma, tau, bidirectional: bool = False) -> bool:
    """Whether tau is a pattern of some rotation of sigma (or, with
    bidirectional=True, of some rotation of sigma's reversal).

    >>> circular_contains((1, 2, 3), (3, 2, 1), False)
    False
    >>> circular_contains((1, 2, 3), (3, 2, 1), True)
    True
    """
    sigma = as_word(sigma)
    tau = as_permutation(tau)
    n = len(sigma)
    candidates = [sigma] if n == 0 else [sigma.rotated(i) for i in range(n)]
    if bidirectional:
        rev = sigma.reversed()
        candidates += [rev] if n == 0 else [rev.rotated(i) for i in range(n)]
    return any(is_pattern(w, tau) for w in candidates)


def ascent_count(tau) -> int:
    """Number of positions j with tau(j) < tau(j+1).

    Reversal complements it: a permutation of [k] with a ascents reverses
    to one with k-1-a ascents.

    >>> ascent_count((1, 3, 2))
    1
    """
    tau = as_permutation(tau)
    im = tau.images
    return sum(1 for j in range(len(im) - 1) if im[j] < im[j + 1])


def repeat_word(k: int, m: int) -> Word:
    """m concatenated copies of 1, 2, ..., k.

    Contains every permutation of [k] with at least k-m ascents; with
    m = k it is a k-superpattern of length k^2.

    >>> repeat_word(3, 2).letters
    (1, 2, 3, 1, 2, 3)
    """
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and m >= 1")
    return Word(tuple(range(1, k + 1)) * m, k)


def exhaustive_f_search(
    k: int,
    r: int,
    n_max: int,
    *,
    max_words: int = MAX_ENUM_WORDS,
    max_k: int = MAX_FACTORIAL_K,
) -> list[tuple[int, bool]]:
    """For each n <= n_max, whether some word in [r]^n is a k-superpattern.

    The least n marked True (if any) is the minimum superpattern length
    for this (k, r). Superpattern-ness survives appending letters, so the
    search stops at the first reachable n and marks the rest True.

    >>> exhaustive_f_search(2, 2, 4)
    [(1, False), (2, False), (3, True), (4, True)]
    """
    if k < 0 or r < 1 or n_max < 1:
        raise ValueError("need k >= 0, r >= 1, n_max >= 1")
    if k > max_k:
        raise ResourceLimitError(f"k={k} exceeds the k! cap (max_k={max_k})")
    if r**n_max > max_words:
        raise ResourceLimitError(
            f"r^n_max = {r}^{n_max} exceeds the word-enumeration cap {max_words}"
        )
    target = math.factorial(k)
    rows: list[tuple[int, bool]] = []
    found_at: Optional[int] = None
    for n in range(1, n_max + 1):
        if found_at is not None:
            rows.append((n, True))
            continue
        exists = False
        if k == 0:
            exists = True
        else:
            for w in _canonical_words(n, r):
                if len(set(w)) < min(k, r):
                    continue
                word = Word(w, r)
                if len(pattern_set(word, k, max_k=max_k)) == target:
                    exists = True
                    break
        rows.append((n, exists))
        if exists:
            found_at = n
    return rows


def minimal_superpattern_length(rows: Iterable[tuple[int, bool]]) -> Optional[int]:
    """First n marked True in an exhaustive_f_search table, or None."""
    for n, ok in rows:
        if ok:
            return n
    return None


# ---------------------------------------------------------------------------
# Text format: whitespace-separated 1-based integers on one line, with an
# optional leading "r=<int>" header; without the header the alphabet size
# is inferred as the maximum letter.

def parse_word(text: str) -> Word:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    alphabet_size = None
    if lines and lines[0].replace(" ", "").startswith("r="):
        alphabet_size = int(lines[0].split("=", 1)[1])
        lines = lines[1:]
    letters = tuple(int(tok) for ln in lines for tok in ln.split())
    return as_word(letters, alphabet_size)


def format_word(word: Word, *, header: bool = True) -> str:
    body = " ".join(str(x) for x in word.letters)
    if header:
        return f"r={word.alphabet_size}\n{body}\n"
    return body + "\n"


def parse_permutation(text: str) -> Permutation:
    return as_permutation(int(tok) for tok in text.split())


def format_permutation(tau: Permutation) -> str:
    return " ".join(str(x) for x in tau.images) + "\n"
