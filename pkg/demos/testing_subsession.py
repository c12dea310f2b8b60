"""
Subsession by testing
=====================

``S ⪯ T`` holds when every tester completing ``S`` also completes ``T``.
Positive answers come from algebraic laws, negative ones from a bounded
search for a distinguishing tester.  Anything else is reported Unknown.
"""

from sessium import Bound, default_universe, equivalent, parse_type, strong_subsession, subsession

u = default_universe()
T = lambda s: parse_type(s, u)  # noqa: E731
bound = Bound(4, 2)

# an internal choice may always be resolved early
print(strong_subsession(T("!Int.1 (+) ?Bool.1"), T("!Int.1"), bound, u))

# sending a Real where an Int was promised is the safe direction
print(subsession(T("!Real.1"), T("!Int.1"), bound, u))

# %%
# Adding a branch to an external choice is not safe: the tester
# !Int.1 + !Bool.0 completes ?Int.1 but may pick the dead Bool branch.
v = subsession(T("?Int.1"), T("?Int.1 + ?Bool.1"), bound, u)
print(v)
print(v.to_dict())

# %%
# 0 and !Int.0 cannot be told apart by a tester alone, but an external
# choice context separates them.
print(equivalent(T("0"), T("!Int.0"), bound, u, "weak"))
print(strong_subsession(T("0"), T("!Int.0"), bound, u))

# %%
# Interleavings: neither direction is refuted, neither is derived.
print(equivalent(T("!Int.1 | !Bool.1"), T("!Int.!Bool.1 + !Bool.!Int.1"), bound, u))
