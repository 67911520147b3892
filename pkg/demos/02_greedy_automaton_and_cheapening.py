"""The greedy embedding automaton of a word, its walk-cost semantics, and
cheapening it into a permutation-cost automaton.

Run with: python demos/02_greedy_automaton_and_cheapening.py
"""

from superpatterns import (
    INFINITY,
    as_word,
    build_greedy_dfa,
    cheap_perm_count,
    cheapen,
    dfa_to_dot,
    finite_edges,
    is_k_dfa,
    pattern_set,
    walk_cost,
)

# States 0..n track "last matched position"; reading a letter jumps to its
# next occurrence and pays the distance. Missing letters self-loop at
# infinite cost.
sigma = as_word((1, 2, 3, 2), 3)
a = build_greedy_dfa(sigma)
print("finite edges of the greedy automaton for 1 2 3 2:")
for v, t, u, c in finite_edges(a):
    print(f"  {v} --{t}--> {u}  cost {c}")

# Walk cost from the root equals the final position of the greedy
# embedding, so containment is exactly "walk cost <= n".
for tau in ((1, 2, 3), (1, 3, 2), (2, 1, 3)):
    trace = walk_cost(a, 0, tau)
    print(f"walk {tau}: states {trace.states}, cost {trace.total_cost}, "
          f"pattern? {trace.total_cost <= len(sigma)}")

# Cheapening replaces every cost row by a dominated permutation of [k]:
# entries never grow, so no walk gets more expensive, and every row
# becomes a full permutation (a k-DFA row).
b = cheapen(a)
print("greedy automaton is a k-DFA:", is_k_dfa(a))
print("cheapened automaton is a k-DFA:", is_k_dfa(b))
print("row at state 3 before:", tuple(
    "inf" if c == INFINITY else c for c in a.cost_row(3)))
print("row at state 3 after: ", b.cost_row(3))

# The number of permutations walking under budget n from the root matches
# the pattern census of the underlying word at n = |sigma|.
print("permutations with walk cost <= 4:", cheap_perm_count(a, 4))
print("pattern census of the word:     ", len(pattern_set(sigma, 3)))

# GraphViz rendering (infinite self-loops omitted, like the usual sketch).
print()
print(dfa_to_dot(a))
