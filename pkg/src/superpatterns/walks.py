"""Random permutational words and cost statistics of automaton walks.

A *permutational word* is an injective word over [k] (a permutation when
its length reaches k). For a k-DFA D, a state v, and a length L, the
central quantity is

    P(v, L, eps) = P[ cost of walking a uniform random permutational word
                      of length L from v is below (1/2 - eps) * k * L ]

evaluated here both exactly (by exhausting injective words) and by Monte
Carlo with Clopper-Pearson intervals.

Walk costs on k-DFAs decompose per step as C_j = X_j + Y_j, where X_j is
the rank of the paid cost among the costs (at the current state) of the
letters not yet read, and Y_j >= 0 is the number of cost values below C_j
already burned by earlier letters. Over a uniform random permutation the
X_j are independent and uniform on [k-j+1] regardless of the automaton.

Monte-Carlo reproducibility: every sample i draws from a BLAKE2b
counter-mode stream keyed by (seed, i), so estimates are bit-identical no
matter how samples are scheduled across workers.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from hashlib import blake2b

import numpy as np
from scipy.stats import beta as _beta_dist

from .dfa import SubsetDfa, is_k_dfa, letters_of
from .errors import ResourceLimitError

__all__ = [
    "CounterRng",
    "PermutationalWord",
    "sample_perm_word",
    "restriction",
    "cost_distributions_by_length",
    "exact_P",
    "exact_P_max",
    "EstimateReport",
    "estimate_P",
    "clopper_pearson",
    "Decomposition",
    "xy_decompose",
    "t_statistic",
    "sample_x_sums",
    "ConcentrationReport",
    "concentration_experiment",
]

MAX_INJECTIVE_ENUM = 10**7


class CounterRng:
    """Uniform integers from BLAKE2b in counter mode.

    The pair (seed, stream) names an independent, reproducible stream;
    sampling loops use one stream per sample index.
    """

    __slots__ = ("_key", "_counter", "_pool")

    def __init__(self, seed: int, stream: int = 0):
        self._key = seed.to_bytes(16, "little", signed=True) + stream.to_bytes(
            16, "little"
        )
        self._counter = 0
        self._pool: list[int] = []

    def bits64(self) -> int:
        if not self._pool:
            block = blake2b(
                self._key + self._counter.to_bytes(8, "little"), digest_size=64
            ).digest()
            self._counter += 1
            self._pool = [
                int.from_bytes(block[i : i + 8], "little") for i in range(0, 64, 8)
            ]
        return self._pool.pop()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("empty range")
        limit = ((1 << 64) // n) * n
        while True:
            r = self.bits64()
            if r < limit:
                return r % n


@dataclass(frozen=True)
class PermutationalWord:
    """An injective word over [k]; length at most k."""

    letters: tuple[int, ...]
    alphabet_size: int

    def __post_init__(self):
        k = self.alphabet_size
        if k < 0:
            raise ValueError("alphabet_size must be non-negative")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"{self.letters!r} repeats a letter")
        for x in self.letters:
            if not (1 <= x <= k):
                raise ValueError(f"letter {x!r} outside alphabet [{k}]")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


def sample_perm_word(k: int, L: int, rng) -> PermutationalWord:
    """A uniform random injective word of length L over [k].

    Partial Fisher-Yates: shuffle only the first L slots of 1..k and take
    them; each of the k!/(k-L)! outcomes is equally likely. rng needs a
    randrange(n) method (CounterRng or random.Random both work).
    """
    if not (0 <= L <= k):
        raise ValueError(f"need 0 <= L <= k, got L={L}, k={k}")
    pool = list(range(1, k + 1))
    for i in range(L):
        j = i + rng.randrange(k - i)
        pool[i], pool[j] = pool[j], pool[i]
    return PermutationalWord(tuple(pool[:L]), k)


def restriction(w, E) -> PermutationalWord:
    """The subword of w on the index set E, indices in increasing order.

    Restriction preserves uniformity: if w is a uniform permutational word
    then so is w restricted to any fixed E.
    """
    if isinstance(w, PermutationalWord):
        letters, k = w.letters, w.alphabet_size
    else:
        letters = letters_of(w)
        k = max(letters, default=0)
    idx = sorted(set(int(e) for e in E))
    for e in idx:
        if not (1 <= e <= len(letters)):
            raise IndexError(f"index {e} out of range 1..{len(letters)}")
    return PermutationalWord(tuple(letters[e - 1] for e in idx), k)


# ---------------------------------------------------------------------------
# Exact evaluation


def cost_distributions_by_length(dfa, start, max_len: int, *, max_words: int = MAX_INJECTIVE_ENUM):
    """Cost distribution of every injective walk from start, per length.

    Returns a list dists with dists[L] = Counter {total cost: number of
    injective length-L words paying it}; one depth-first sweep over the
    injective-prefix tree covers all lengths at once.
    """
    k = dfa.alphabet_size
    if not dfa.has_state(start):
        raise ValueError(f"unknown state {start!r}")
    if not (0 <= max_len <= k):
        raise ValueError(f"need 0 <= max_len <= k, got {max_len}")
    tree = 0
    nodes = 1
    for L in range(1, max_len + 1):
        nodes *= k - L + 1
        tree += nodes
    if tree > max_words:
        raise ResourceLimitError(
            f"enumerating {tree} injective words exceeds the cap {max_words}"
        )
    dists = [Counter() for _ in range(max_len + 1)]
    dists[0][0] = 1
    step = dfa.step
    step_cost = dfa.step_cost

    def rec(v, used: int, total, depth: int):
        nxt = depth + 1
        bucket = dists[nxt]
        for t in range(1, k + 1):
            bit = 1 << (t - 1)
            if used & bit:
                continue
            nt = total + step_cost(v, t)
            bucket[nt] += 1
            if nxt < max_len:
                rec(step(v, t), used | bit, nt, nxt)

    if max_len > 0:
        rec(start, 0, 0, 0)
    return dists


def _threshold(k: int, L: int, epsilon: float) -> Fraction:
    # exact rational form of (1/2 - eps) * k * L
    return (Fraction(1, 2) - Fraction(epsilon)) * k * L


def _cost_bound(k: int, L: int, epsilon: float, strict: bool) -> int:
    """Largest integer cost counted by the comparator against the
    threshold (1/2 - eps)kL."""
    thr = _threshold(k, L, epsilon)
    return math.ceil(thr) - 1 if strict else math.floor(thr)


def exact_P(
    dfa,
    state,
    L: int,
    epsilon: float,
    *,
    strict: bool = True,
    max_words: int = MAX_INJECTIVE_ENUM,
) -> Fraction:
    """Exact P(state, L, eps) as a fraction.

    strict=True counts cost < (1/2-eps)kL (the probability definition);
    strict=False counts cost <= threshold (the "bad word" convention).
    """
    if not is_k_dfa(dfa):
        raise ValueError("exact_P needs a k-DFA (every cost row a permutation)")
    dists = cost_distributions_by_length(dfa, state, L, max_words=max_words)
    bound = _cost_bound(dfa.alphabet_size, L, epsilon, strict)
    hits = sum(c for cost, c in dists[L].items() if cost <= bound)
    total = sum(dists[L].values())
    return Fraction(hits, total)


def exact_P_max(
    dfa,
    L: int,
    epsilon: float,
    *,
    strict: bool = True,
    max_words: int = MAX_INJECTIVE_ENUM,
) -> Fraction:
    """max over states of exact_P (the form the walk bounds are stated for)."""
    return max(
        exact_P(dfa, v, L, epsilon, strict=strict, max_words=max_words)
        for v in dfa.states
    )


# ---------------------------------------------------------------------------
# Monte Carlo


def clopper_pearson(successes: int, samples: int, confidence: float = 0.99):
    """Exact binomial (Clopper-Pearson) confidence interval."""
    if not (0 <= successes <= samples) or samples <= 0:
        raise ValueError("need 0 <= successes <= samples, samples > 0")
    alpha = 1.0 - confidence
    if successes == 0:
        lo = 0.0
    else:
        lo = float(_beta_dist.ppf(alpha / 2, successes, samples - successes + 1))
    if successes == samples:
        hi = 1.0
    else:
        hi = float(_beta_dist.ppf(1 - alpha / 2, successes + 1, samples - successes))
    return lo, hi


@dataclass(frozen=True)
class EstimateReport:
    """Monte-Carlo estimate of P with its exact 99% binomial interval."""

    estimate: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int
    threshold: float
    comparator: str
    k: int
    L: int
    epsilon: float

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "samples": self.samples,
            "seed": self.seed,
            "threshold": self.threshold,
            "comparator": self.comparator,
            "k": self.k,
            "L": self.L,
            "epsilon": self.epsilon,
        }


def _count_hits(dfa, state, L: int, bound: int, seed: int, lo: int, hi: int) -> int:
    """Successes among sample indices [lo, hi); each sample uses its own
    (seed, index) stream, so any partition of the index range agrees."""
    k = dfa.alphabet_size
    step = dfa.step
    step_cost = dfa.step_cost
    hits = 0
    for i in range(lo, hi):
        rng = CounterRng(seed, i)
        randrange = rng.randrange
        pool = list(range(1, k + 1))
        v = state
        total = 0
        for j in range(L):
            at = j + randrange(k - j)
            pool[j], pool[at] = pool[at], pool[j]
            t = pool[j]
            total += step_cost(v, t)
            v = step(v, t)
        if total <= bound:
            hits += 1
    return hits


def estimate_P(
    dfa,
    state,
    L: int,
    epsilon: float,
    samples: int,
    seed: int,
    *,
    strict: bool = True,
    threads: int = 1,
    confidence: float = 0.99,
) -> EstimateReport:
    """Monte-Carlo P(state, L, eps) with a Clopper-Pearson interval.

    Deterministic in seed and independent of the threads setting: sample i
    is a pure function of (seed, i).
    """
    if samples <= 0:
        raise ValueError("need at least one sample")
    if not is_k_dfa(dfa):
        raise ValueError("estimate_P needs a k-DFA")
    if not dfa.has_state(state):
        raise ValueError(f"unknown state {state!r}")
    k = dfa.alphabet_size
    if not (0 <= L <= k):
        raise ValueError(f"need 0 <= L <= k, got L={L}")
    bound = _cost_bound(k, L, epsilon, strict)
    if threads <= 1:
        hits = _count_hits(dfa, state, L, bound, seed, 0, samples)
    else:
        chunk = -(-samples // threads)
        ranges = [
            (lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)
        ]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(
                lambda r: _count_hits(dfa, state, L, bound, seed, r[0], r[1]),
                ranges,
            )
            hits = sum(parts)
    lo, hi = clopper_pearson(hits, samples, confidence)
    return EstimateReport(
        estimate=hits / samples,
        ci_low=lo,
        ci_high=hi,
        samples=samples,
        seed=seed,
        threshold=float(_threshold(k, L, epsilon)),
        comparator="<" if strict else "<=",
        k=k,
        L=L,
        epsilon=float(epsilon),
    )


# ---------------------------------------------------------------------------
# Step-cost decomposition


@dataclass(frozen=True)
class Decomposition:
    """Per-step split C_j = X_j + Y_j of a permutation's walk cost.

    pool_sizes[j] = k - j (0-indexed) is the number of unread letters
    whose costs X_j ranks among; Y_j counts cost values below C_j already
    paid for by earlier letters, and is always non-negative.
    """

    step_costs: tuple[int, ...]
    x_ranks: tuple[int, ...]
    y_slacks: tuple[int, ...]
    pool_sizes: tuple[int, ...]
    states: tuple
    total_cost: int


def xy_decompose(dfa, tau) -> Decomposition:
    """Walk tau from the root of a k-DFA and split each step cost into its
    rank among available costs plus slack."""
    if not is_k_dfa(dfa):
        raise ValueError("xy_decompose needs a k-DFA")
    k = dfa.alphabet_size
    word = letters_of(tau)
    if sorted(word) != list(range(1, k + 1)):
        raise ValueError(f"{word!r} is not a permutation of [{k}]")
    v = dfa.root
    states = [v]
    C: list[int] = []
    X: list[int] = []
    used: set[int] = set()
    for t in word:
        row = dfa.cost_row(v)
        c = row[t - 1]
        rank = sum(
            1 for u in range(1, k + 1) if u not in used and row[u - 1] <= c
        )
        C.append(c)
        X.append(rank)
        used.add(t)
        v = dfa.step(v, t)
        states.append(v)
    Y = tuple(c - x for c, x in zip(C, X))
    return Decomposition(
        step_costs=tuple(C),
        x_ranks=tuple(X),
        y_slacks=Y,
        pool_sizes=tuple(range(k, 0, -1)),
        states=tuple(states),
        total_cost=sum(C),
    )


def t_statistic(dfa, prefix, x) -> tuple[dict, int]:
    """Occupied low cost values per state, and the minimum over states.

    For each state v, counts the prefix letters whose cost at v is at most
    x — the number of cost values <= x that a walk sitting at v could no
    longer pay when reading fresh letters. Returns ({state: count}, min).
    """
    if not is_k_dfa(dfa):
        raise ValueError("t_statistic needs a k-DFA")
    k = dfa.alphabet_size
    letters = letters_of(prefix)
    if len(set(letters)) != len(letters):
        raise ValueError("prefix must be injective")
    for t in letters:
        if not (1 <= t <= k):
            raise ValueError(f"letter {t!r} outside alphabet [{k}]")
    if x < 0:
        raise ValueError("x must be non-negative")
    per_state = {}
    for v in dfa.states:
        row = dfa.cost_row(v)
        per_state[v] = sum(1 for t in letters if row[t - 1] <= x)
    return per_state, (min(per_state.values()) if per_state else 0)


# ---------------------------------------------------------------------------
# Monte-Carlo X sums and the concentration experiments


def _sample_perm_matrix(k: int, samples: int, seed: int) -> np.ndarray:
    """samples uniform random permutations of [k], one (seed, i) stream per
    row, as an int array of shape (samples, k).

    Draw-for-draw identical to sample_perm_word(k, k, CounterRng(seed, i));
    inlined to skip per-row object construction in large batches.
    """
    out = np.empty((samples, k), dtype=np.int64)
    for i in range(samples):
        rng = CounterRng(seed, i)
        randrange = rng.randrange
        pool = list(range(1, k + 1))
        for j in range(k):
            at = j + randrange(k - j)
            pool[j], pool[at] = pool[at], pool[j]
        out[i] = pool
    return out


def _x_matrix_subset(perm_matrix: np.ndarray) -> np.ndarray:
    """X ranks on the subset-state automaton: the cost of reading t_j is
    its rank among unread letters, so X_j = t_j - #{j' < j : t_j' < t_j}."""
    samples, k = perm_matrix.shape
    X = np.empty_like(perm_matrix)
    for j in range(k):
        col = perm_matrix[:, j : j + 1]
        X[:, j] = perm_matrix[:, j] - (perm_matrix[:, :j] < col).sum(axis=1)
    return X


def sample_x_sums(dfa, samples: int, seed: int) -> np.ndarray:
    """Monte-Carlo samples of sum_j X_j over uniform random permutations.

    Subset automata use the vectorized rank identity (cross-checked
    against xy_decompose in the test suite); other k-DFAs walk each sample
    explicitly.
    """
    if samples <= 0:
        raise ValueError("need at least one sample")
    k = dfa.alphabet_size
    if isinstance(dfa, SubsetDfa):
        return _x_matrix_subset(_sample_perm_matrix(k, samples, seed)).sum(axis=1)
    out = np.empty(samples, dtype=np.int64)
    for i in range(samples):
        tau = sample_perm_word(k, k, CounterRng(seed, i))
        out[i] = sum(xy_decompose(dfa, tau).x_ranks)
    return out


@dataclass(frozen=True)
class ConcentrationReport:
    """Empirical frequencies of the two window-event families.

    For each window pair (m1, m2) in [M-1]^2 over uniform random
    permutations:

    - con1: the count of steps j in window m1 with X_j/(k-j+1) > m2/M
      falls short of (1-eps*)(1-m2/M)k/M.
    - con2: some j in window m1 has T_{j, m2 k/M} below
      (1-eps*)(m2/M)(j-1), where T is the minimum t_statistic over states.
    """

    k: int
    M: int
    epsilon_star: float
    samples: int
    seed: int
    con1: dict
    con2: dict

    def to_json_dict(self) -> dict:
        entries = [
            {
                "m1": m1,
                "m2": m2,
                "con1": self.con1[(m1, m2)],
                "con2": self.con2[(m1, m2)],
            }
            for (m1, m2) in sorted(self.con1)
        ]
        return {
            "k": self.k,
            "M": self.M,
            "epsilon_star": self.epsilon_star,
            "samples": self.samples,
            "seed": self.seed,
            "entries": entries,
        }


def _window(k: int, M: int, m1: int) -> list[int]:
    # j with m1*k/M < j <= (m1+1)*k/M, in exact integer arithmetic
    return [j for j in range(1, k + 1) if j * M > m1 * k and j * M <= (m1 + 1) * k]


def concentration_experiment(
    dfa, M: int, epsilon_star: float, samples: int, seed: int
) -> ConcentrationReport:
    """Estimate the frequencies of the con1/con2 window events."""
    if M < 2:
        raise ValueError("need M >= 2")
    if samples <= 0:
        raise ValueError("need at least one sample")
    if not is_k_dfa(dfa):
        raise ValueError("concentration_experiment needs a k-DFA")
    k = dfa.alphabet_size
    windows = {m1: _window(k, M, m1) for m1 in range(1, M)}
    con1_counts = {(m1, m2): 0 for m1 in range(1, M) for m2 in range(1, M)}
    con2_counts = dict(con1_counts)

    if isinstance(dfa, SubsetDfa):
        X = _x_matrix_subset(_sample_perm_matrix(k, samples, seed))
        for m1 in range(1, M):
            js = windows[m1]
            for m2 in range(1, M):
                thr1 = (1 - epsilon_star) * (1 - m2 / M) * k / M
                if js:
                    exceed = np.zeros(samples, dtype=np.int64)
                    for j in js:
                        exceed += X[:, j - 1] * M > m2 * (k - j + 1)
                    con1_counts[(m1, m2)] = int((exceed < thr1).sum())
                else:
                    con1_counts[(m1, m2)] = samples if 0 < thr1 else 0
                # the minimum T over subset states is sample-independent
                x = m2 * k / M
                bad = any(
                    dfa.min_t_statistic(j - 1, x)
                    < (1 - epsilon_star) * (m2 / M) * (j - 1)
                    for j in js
                )
                con2_counts[(m1, m2)] = samples if bad else 0
    else:
        state_list = list(dfa.states)
        rows = {v: dfa.cost_row(v) for v in state_list}
        xs = [m2 * k / M for m2 in range(1, M)]
        j_to_m1 = {j: m1 for m1, js in windows.items() for j in js}
        for i in range(samples):
            word = sample_perm_word(k, k, CounterRng(seed, i)).letters
            # T_{j, x} per threshold, tracked incrementally per state
            t_counts = {v: [0] * (M - 1) for v in state_list}
            exceeds = {
                (m1, m2): 0 for m1 in range(1, M) for m2 in range(1, M)
            }
            t_shortfall = {key: False for key in exceeds}
            v = dfa.root
            unused = set(range(1, k + 1))
            for j in range(1, k + 1):
                t = word[j - 1]
                row = rows[v]
                c = row[t - 1]
                m1 = j_to_m1.get(j)
                if m1 is not None:
                    x_rank = sum(1 for u in unused if row[u - 1] <= c)
                    for m2 in range(1, M):
                        if x_rank * M > m2 * (k - j + 1):
                            exceeds[(m1, m2)] += 1
                        T_j = min(t_counts[s][m2 - 1] for s in state_list)
                        if T_j < (1 - epsilon_star) * (m2 / M) * (j - 1):
                            t_shortfall[(m1, m2)] = True
                unused.discard(t)
                for s in state_list:
                    cs = rows[s][t - 1]
                    tc = t_counts[s]
                    for m2 in range(1, M):
                        if cs <= xs[m2 - 1]:
                            tc[m2 - 1] += 1
                v = dfa.step(v, t)
            for m1 in range(1, M):
                for m2 in range(1, M):
                    thr1 = (1 - epsilon_star) * (1 - m2 / M) * k / M
                    if exceeds[(m1, m2)] < thr1:
                        con1_counts[(m1, m2)] += 1
                    if t_shortfall[(m1, m2)]:
                        con2_counts[(m1, m2)] += 1

    con1 = {key: c / samples for key, c in con1_counts.items()}
    con2 = {key: c / samples for key, c in con2_counts.items()}
    return ConcentrationReport(
        k=k,
        M=M,
        epsilon_star=float(epsilon_star),
        samples=samples,
        seed=seed,
        con1=con1,
        con2=con2,
    )
