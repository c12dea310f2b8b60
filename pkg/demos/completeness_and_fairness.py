"""
Completeness of session types
=============================

A session type is complete when every state it can reach internally can
still reach a state offering success.  Outputs commit to a value before
they synchronise, and that commitment is where things go wrong.
"""

from sessium import build_graph, default_universe, is_complete, parse_type, stuck_witness

u = default_universe()

# the reader expects an Int, the writer may send any Real
t = parse_type("?Int.1 | !Real.1", u)
print(build_graph(t, u).format_text())
print("complete:", is_complete(t, u))
print("stuck at:", stuck_witness(t, u))

# %%
# Two endless loops never deadlock, yet success is never offered.
loops = parse_type("(rec X. ?Int.X) | (rec Y. !Int.Y)", u)
print("\nloops complete:", is_complete(loops, u))

# %%
# A client happy to stop and a server free to stop complete each other.
pair = parse_type("(1 + ?Int.1) | (1 (+) !Int.1)", u)
print(build_graph(pair, u).format_text())
print("complete:", is_complete(pair, u))
