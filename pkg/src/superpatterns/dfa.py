"""Weighted deterministic finite automata with extended (possibly infinite)
step costs, and the automaton constructions used throughout the package.

A weighted DFA here reads letters of [k]; each (state, letter) pair has a
successor state and a cost in {0, 1, 2, ...} ∪ {∞}, with ∞ absorbing under
addition. The cost of a walk is the sum of its step costs.

A *k-DFA* is a weighted DFA whose cost row at every state is a permutation
of [k]. The greedy automaton of a word is generally not a k-DFA (it has
infinite entries), but it can always be *cheapened* to one: costs replaced
by pointwise lower-or-equal permutation rows, which never increases the
cost of any walk.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from typing import Union

from .errors import CheapeningError, ResourceLimitError
from .patterns import MAX_FACTORIAL_K, as_word

__all__ = [
    "INFINITY",
    "ExtCost",
    "WalkTrace",
    "WeightedDfa",
    "SubsetDfa",
    "build_greedy_dfa",
    "walk_cost",
    "is_k_dfa",
    "cheapen",
    "build_subset_dfa",
    "build_two_track_dfa",
    "cheap_perm_count",
    "perm_cost_census",
    "random_k_dfa",
    "finite_edges",
    "dfa_to_json",
    "dfa_from_json",
    "dfa_to_dot",
]

INFINITY = math.inf

# A step cost: a non-negative integer, or INFINITY. math.inf gives the
# required absorbing arithmetic (inf + x == inf) exactly, and Python ints
# cannot overflow, so finite sums are always exact.
ExtCost = Union[int, float]

# Enumerating all 2^k subset states is capped; walking the lazy automaton
# is not (a permutational walk touches at most k+1 subsets).
MAX_SUBSET_ENUM_K = 20


def letters_of(w) -> tuple[int, ...]:
    """Letter sequence of a Word, Permutation, or plain iterable."""
    if hasattr(w, "letters"):
        return tuple(w.letters)
    if hasattr(w, "images"):
        return tuple(w.images)
    return tuple(int(x) for x in w)


@dataclass(frozen=True)
class WalkTrace:
    """States visited and costs paid along one walk.

    states has length len(word) + 1; total_cost is the (absorbing) sum of
    step_costs.
    """

    states: tuple
    step_costs: tuple
    total_cost: ExtCost


class WeightedDfa:
    """Immutable table-backed weighted DFA.

    delta and cost are given per state as length-k tuples indexed by
    letter - 1.
    """

    def __init__(self, alphabet_size: int, root, delta: dict, cost: dict):
        k = alphabet_size
        if k < 1:
            raise ValueError("alphabet_size must be positive")
        if root not in delta:
            raise ValueError(f"root {root!r} is not a state")
        if set(delta) != set(cost):
            raise ValueError("delta and cost must cover the same states")
        for v, row in delta.items():
            if len(row) != k or len(cost[v]) != k:
                raise ValueError(f"state {v!r}: rows must have length k={k}")
            for u in row:
                if u not in delta:
                    raise ValueError(f"state {v!r}: successor {u!r} unknown")
            for c in cost[v]:
                if c != INFINITY and (not isinstance(c, int) or c < 0):
                    raise ValueError(f"state {v!r}: bad cost {c!r}")
        self.alphabet_size = k
        self.root = root
        self._delta = {v: tuple(row) for v, row in delta.items()}
        self._cost = {v: tuple(row) for v, row in cost.items()}

    @property
    def states(self):
        return tuple(self._delta)

    def has_state(self, v) -> bool:
        return v in self._delta

    def step(self, v, t: int):
        return self._delta[v][t - 1]

    def step_cost(self, v, t: int) -> ExtCost:
        return self._cost[v][t - 1]

    def delta_row(self, v) -> tuple:
        return self._delta[v]

    def cost_row(self, v) -> tuple:
        return self._cost[v]

    def __eq__(self, other):
        return (
            isinstance(other, WeightedDfa)
            and self.alphabet_size == other.alphabet_size
            and self.root == other.root
            and self._delta == other._delta
            and self._cost == other._cost
        )

    def __repr__(self):
        return (
            f"WeightedDfa(k={self.alphabet_size}, root={self.root!r}, "
            f"states={len(self._delta)})"
        )


class SubsetDfa:
    """Lazy automaton on the subsets of [k]: state v is the set of letters
    read so far (as a bitmask), the root is the empty set, and reading t
    moves to v | {t}.

    Costs make every row a permutation of [k] while pushing already-read
    letters to the top: letters outside v get 1..k-|v| in ascending letter
    order, letters inside v get k-|v|+1..k in ascending letter order.
    Reading any permutation from the root therefore always pays the rank
    of the letter among those not yet read, and the slack terms Y_j of the
    walk decomposition are identically zero.

    Transitions and costs are computed on demand, so walks work at any k;
    only operations that enumerate all 2^k states are capped.
    """

    def __init__(self, alphabet_size: int):
        if alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        self.alphabet_size = alphabet_size
        self.root = 0

    @property
    def states(self):
        k = self.alphabet_size
        if k > MAX_SUBSET_ENUM_K:
            raise ResourceLimitError(
                f"enumerating 2^{k} subset states exceeds the cap "
                f"(k <= {MAX_SUBSET_ENUM_K})"
            )
        return range(1 << k)

    def has_state(self, v) -> bool:
        return isinstance(v, int) and 0 <= v < (1 << self.alphabet_size)

    def step(self, v: int, t: int) -> int:
        self._check_letter(t)
        return v | (1 << (t - 1))

    def step_cost(self, v: int, t: int) -> int:
        self._check_letter(t)
        bit = 1 << (t - 1)
        below = (v & (bit - 1)).bit_count()
        if v & bit:
            return self.alphabet_size - v.bit_count() + below + 1
        return t - below

    def delta_row(self, v: int) -> tuple:
        return tuple(v | (1 << t) for t in range(self.alphabet_size))

    def cost_row(self, v: int) -> tuple:
        return tuple(
            self.step_cost(v, t) for t in range(1, self.alphabet_size + 1)
        )

    def min_t_statistic(self, prefix_len: int, x: float) -> int:
        """min over all states of #{prefix letters with cost <= x}.

        At the state equal to the prefix's letter set, the prefix letters
        carry the top prefix_len cost values k-prefix_len+1..k; no state
        can do better because a permutation row fits at most k - floor(x)
        of them above x.
        """
        return max(0, prefix_len + math.floor(x) - self.alphabet_size)

    def _check_letter(self, t: int):
        if not (1 <= t <= self.alphabet_size):
            raise ValueError(
                f"letter {t!r} outside alphabet [{self.alphabet_size}]"
            )

    def __repr__(self):
        return f"SubsetDfa(k={self.alphabet_size})"


Dfa = Union[WeightedDfa, SubsetDfa]


def build_greedy_dfa(sigma) -> WeightedDfa:
    """The greedy-embedding automaton of a word over [k].

    States are 0..n with root 0; state v means "the previous matched
    position was v". Reading t jumps to the next occurrence of t after v,
    paying the distance; if t never occurs again the automaton self-loops
    at infinite cost. Walking a word w from 0 therefore costs exactly the
    final position of w's greedy embedding, or ∞ when the embedding fails.
    """
    sigma = as_word(sigma)
    k = sigma.alphabet_size
    n = len(sigma)
    occ: dict[int, list[int]] = {}
    for i, x in enumerate(sigma.letters, start=1):
        occ.setdefault(x, []).append(i)
    delta = {}
    cost = {}
    for v in range(n + 1):
        drow = []
        crow = []
        for t in range(1, k + 1):
            ps = occ.get(t, ())
            at = bisect_right(ps, v)
            if at < len(ps):
                u = ps[at]
                drow.append(u)
                crow.append(u - v)
            else:
                drow.append(v)
                crow.append(INFINITY)
        delta[v] = tuple(drow)
        cost[v] = tuple(crow)
    return WeightedDfa(k, 0, delta, cost)


def walk_cost(dfa: Dfa, start, w) -> WalkTrace:
    """Walk w from start, returning the visited states and (absorbing)
    total cost.

    Cost is additive over concatenation: splitting w as u·w' gives
    total(w) = total(u) + total-from-δ(start,u)(w').
    """
    if not dfa.has_state(start):
        raise ValueError(f"unknown state {start!r}")
    k = dfa.alphabet_size
    word = letters_of(w)
    states = [start]
    costs = []
    total: ExtCost = 0
    v = start
    for t in word:
        if not (1 <= t <= k):
            raise ValueError(f"letter {t!r} outside alphabet [{k}]")
        c = dfa.step_cost(v, t)
        v = dfa.step(v, t)
        costs.append(c)
        total += c
        states.append(v)
    return WalkTrace(tuple(states), tuple(costs), total)


def is_k_dfa(dfa: Dfa) -> bool:
    """Whether every state's cost row is a permutation of [k]."""
    if isinstance(dfa, SubsetDfa):
        # Rows are permutations by construction (ascending ranks within
        # and outside v partition [k]); asserted exhaustively in tests.
        return True
    expected = list(range(1, dfa.alphabet_size + 1))
    return all(sorted(dfa.cost_row(v)) == expected for v in dfa.states)


def cheapen(dfa: Dfa) -> WeightedDfa:
    """Replace each cost row by a dominated permutation of [k], keeping
    states and transitions.

    Row construction: letters with cost <= k keep their cost (these are
    distinct for greedy automata, since the cost names a position of the
    word); the remaining letters receive the remaining values of [k] in
    ascending letter order. Every entry can only shrink, so no walk gets
    more expensive, and the result is a k-DFA.
    """
    k = dfa.alphabet_size
    new_cost = {}
    for v in dfa.states:
        row = dfa.cost_row(v)
        pinned: dict[int, int] = {}
        taken: set[int] = set()
        for t, c in enumerate(row, start=1):
            if c != INFINITY and c <= k:
                if c in taken:
                    raise CheapeningError(
                        f"state {v!r}: duplicate low cost {c} admits no "
                        f"dominating permutation row"
                    )
                pinned[t] = c
                taken.add(c)
        free_values = iter(sorted(set(range(1, k + 1)) - taken))
        new_cost[v] = tuple(
            pinned[t] if t in pinned else next(free_values)
            for t in range(1, k + 1)
        )
    delta = {v: dfa.delta_row(v) for v in dfa.states}
    return WeightedDfa(k, dfa.root, delta, new_cost)


def build_subset_dfa(k: int) -> SubsetDfa:
    """The subset-state k-DFA (see SubsetDfa). Walks work at any k; state
    enumeration is capped at k <= 20 and the full census at k <= 10."""
    return SubsetDfa(k)


def build_two_track_dfa(k: int) -> WeightedDfa:
    """The two-track k-DFA on states -m..m for k = 2m.

    Letters split into the low half A = {1..m} and high half B = {m+1..2m}.
    Reading A-letters walks left, B-letters right, holding at the
    boundary. Costs: t in negative states; t+m (A) or t-m (B) otherwise.
    Every row is a permutation of [k], and cost(v,t) = m*q(v,t) + r(t)
    with q in {0,1} and r(t) in [m] independent of the state.
    """
    if k < 2 or k % 2:
        raise ValueError(f"two-track construction is defined for even k >= 2, got {k}")
    m = k // 2
    delta = {}
    cost = {}
    for v in range(-m, m + 1):
        drow = []
        crow = []
        for t in range(1, k + 1):
            if t <= m:  # A: walk left
                drow.append(v - 1 if v != -m else v)
                crow.append(t if v < 0 else t + m)
            else:  # B: walk right
                drow.append(v + 1 if v != m else v)
                crow.append(t if v < 0 else t - m)
        delta[v] = tuple(drow)
        cost[v] = tuple(crow)
    return WeightedDfa(k, 0, delta, cost)


def cheap_perm_count(dfa: Dfa, budget: int, *, max_k: int = MAX_FACTORIAL_K) -> int:
    """How many permutations of [k], walked from the root, cost at most
    budget.

    Depth-first over injective prefixes, abandoning a prefix once its
    partial cost exceeds the budget (costs are non-negative).
    """
    k = dfa.alphabet_size
    if k > max_k:
        raise ResourceLimitError(f"k={k} exceeds the k! cap (max_k={max_k})")
    step = dfa.step
    step_cost = dfa.step_cost

    def rec(v, used: int, total, depth: int) -> int:
        if depth == k:
            return 1
        hits = 0
        for t in range(1, k + 1):
            bit = 1 << (t - 1)
            if used & bit:
                continue
            nt = total + step_cost(v, t)
            if nt <= budget:
                hits += rec(step(v, t), used | bit, nt, depth + 1)
        return hits

    return rec(dfa.root, 0, 0, 0)


def perm_cost_census(dfa: Dfa, *, max_k: int = MAX_FACTORIAL_K) -> dict:
    """Exact distribution {total cost: count} of root walk costs over all
    permutations of [k]. Infinite totals are keyed by INFINITY."""
    k = dfa.alphabet_size
    if k > max_k:
        raise ResourceLimitError(f"k={k} exceeds the k! cap (max_k={max_k})")
    census: dict = {}
    step = dfa.step
    step_cost = dfa.step_cost

    def rec(v, used: int, total, depth: int):
        if depth == k:
            census[total] = census.get(total, 0) + 1
            return
        for t in range(1, k + 1):
            bit = 1 << (t - 1)
            if not used & bit:
                rec(step(v, t), used | bit, total + step_cost(v, t), depth + 1)

    rec(dfa.root, 0, 0, 0)
    return census


def random_k_dfa(k: int, state_count: int, seed: int) -> WeightedDfa:
    """A uniformly random k-DFA: independent uniform successors and
    independent uniform permutation cost rows. Deterministic in seed."""
    if state_count < 1:
        raise ValueError("need at least one state")
    rng = random.Random(seed)
    delta = {}
    cost = {}
    for v in range(state_count):
        delta[v] = tuple(rng.randrange(state_count) for _ in range(k))
        row = list(range(1, k + 1))
        rng.shuffle(row)
        cost[v] = tuple(row)
    return WeightedDfa(k, 0, delta, cost)


def finite_edges(dfa: Dfa) -> list[tuple]:
    """All finite-cost edges as (state, letter, successor, cost), in state
    enumeration order then letter order."""
    out = []
    for v in dfa.states:
        crow = dfa.cost_row(v)
        drow = dfa.delta_row(v)
        for t in range(1, dfa.alphabet_size + 1):
            if crow[t - 1] != INFINITY:
                out.append((v, t, drow[t - 1], crow[t - 1]))
    return out


# ---------------------------------------------------------------------------
# Serialization


def _cost_to_jsonable(c: ExtCost):
    return "inf" if c == INFINITY else c


def _cost_from_jsonable(c) -> ExtCost:
    return INFINITY if c == "inf" else int(c)


def dfa_to_json_dict(dfa: Dfa) -> dict:
    rows = []
    for v in dfa.states:
        crow = dfa.cost_row(v)
        drow = dfa.delta_row(v)
        rows.append(
            {
                "state": v,
                "edges": [
                    {
                        "letter": t,
                        "next": drow[t - 1],
                        "cost": _cost_to_jsonable(crow[t - 1]),
                    }
                    for t in range(1, dfa.alphabet_size + 1)
                ],
            }
        )
    return {
        "schema_version": 1,
        "kind": "weighted_dfa",
        "alphabet_size": dfa.alphabet_size,
        "root": dfa.root,
        "states": list(dfa.states),
        "rows": rows,
    }


def dfa_to_json(dfa: Dfa) -> str:
    return json.dumps(dfa_to_json_dict(dfa), sort_keys=True)


def dfa_from_json_dict(doc: dict) -> WeightedDfa:
    k = int(doc["alphabet_size"])
    delta = {}
    cost = {}
    for row in doc["rows"]:
        v = row["state"]
        edges = sorted(row["edges"], key=lambda e: e["letter"])
        if [e["letter"] for e in edges] != list(range(1, k + 1)):
            raise ValueError(f"state {v!r}: rows must cover letters 1..{k}")
        delta[v] = tuple(e["next"] for e in edges)
        cost[v] = tuple(_cost_from_jsonable(e["cost"]) for e in edges)
    return WeightedDfa(k, doc["root"], delta, cost)


def dfa_from_json(text: str) -> WeightedDfa:
    return dfa_from_json_dict(json.loads(text))


def dfa_to_dot(dfa: Dfa, include_infinite: bool = False) -> str:
    """GraphViz rendering with one labeled edge per (state, letter); the
    label "t (c)" names the letter read and the cost paid. Infinite-cost
    self-loops are omitted unless asked for."""
    lines = [
        "digraph {",
        "    rankdir=LR;",
        '    node [shape=circle];',
        '    __root__ [shape=point, label=""];',
        f'    __root__ -> "{dfa.root}" [label="root"];',
    ]
    for v in dfa.states:
        lines.append(f'    "{v}";')
    for v in dfa.states:
        crow = dfa.cost_row(v)
        drow = dfa.delta_row(v)
        for t in range(1, dfa.alphabet_size + 1):
            c = crow[t - 1]
            if c == INFINITY and not include_infinite:
                continue
            label = f"{t} (inf)" if c == INFINITY else f"{t} ({c})"
            lines.append(f'    "{v}" -> "{drow[t - 1]}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
