"""Exact and Monte-Carlo statistics of random permutational walks.

Run with: python demos/03_walk_statistics.py
"""

import math

from superpatterns import (
    build_subset_dfa,
    build_two_track_dfa,
    concentration_experiment,
    con_constants,
    estimate_P,
    exact_P,
    perm_cost_census,
    sample_x_sums,
    t_statistic,
    xy_decompose,
)

# The subset-state automaton remembers which letters were read and charges
# each fresh letter its rank among the unread ones. Walking the six
# permutations of [3] from the root costs 3,4,4,5,5,6.
s3 = build_subset_dfa(3)
print("cost census over S_3:", dict(sorted(perm_cost_census(s3).items())))

# P(v, L, eps) = chance a uniform injective word of length L walks below
# (1/2 - eps) k L. Exactly half of S_3 stays under 4.5.
print("exact P(root, 3, ~0):", exact_P(s3, 0, 3, 1e-9))

# The Monte-Carlo estimator brackets the exact value with an exact
# binomial interval, reproducibly: sample i depends only on (seed, i).
rep = estimate_P(s3, 0, 3, 1e-9, samples=200_000, seed=7)
print(f"estimated P: {rep.estimate:.4f}  CI [{rep.ci_low:.4f}, {rep.ci_high:.4f}]")

# Each step cost splits as C_j = X_j + Y_j: the rank of the paid cost
# among available ones, plus slack from cost values burned by earlier
# letters. On the subset automaton the slack is identically zero.
d = xy_decompose(s3, (3, 2, 1))
print("walk 321: costs", d.step_costs, " ranks", d.x_ranks, " slack", d.y_slacks)

# T statistics: per state, how many prefix letters have cost <= x there;
# their minimum lower-bounds the slack of any continuation.
per_state, mn = t_statistic(s3, (3,), 3)
print("T(prefix=(3), x=3) at root:", per_state[0], " min over states:", mn)

# Rank sums concentrate: at k = 60 the exact mean is (k^2+3k)/4 = 945 and
# the lower tail dies off exponentially.
k = 60
xs = sample_x_sums(build_subset_dfa(k), 20_000, seed=11)
print(f"k={k}: mean rank sum {xs.mean():.1f} (exact {(k*k+3*k)/4})")
tail = (xs <= (0.25 - 0.1) * k * k).mean()
print(f"P(sum X <= 0.15 k^2) ~ {tail:g} vs bound exp(-32 eps^2 k/3) = "
      f"{math.exp(-32*0.01*k/3):.4f}")

# Window concentration events: on the subset automaton the rank events
# (con1) are exponentially rare, while the T-shortfall events (con2) fire
# always - with 2^k states the minimum T collapses, which is exactly why
# bounding the state count matters for that part of the argument.
rep = concentration_experiment(build_subset_dfa(40), M=4, epsilon_star=0.3,
                               samples=20_000, seed=5)
c1, _ = con_constants(0.3, 4)
print("k=40 con1 frequencies (bound exp(-c k) =",
      f"{math.exp(-c1*40):.3f}):", sorted(set(rep.con1.values())))
print("k=40 con2 frequencies:", sorted(set(rep.con2.values())))

# The two-track automaton walks a +/- counter and charges within-half
# ranks shifted by which half you sit in; every cost splits as
# m*q(v,t) + r(t) with r independent of the state.
tt = build_two_track_dfa(6)
m = 3
r = {t: (tt.step_cost(0, t) - 1) % m + 1 for t in range(1, 7)}
print("two-track k=6 remainders r(t):", r, " sum:", sum(r.values()))
