"""
Typing and running the two-buyer system
========================================

Buyer1 opens a session with the seller, asks for a price, then delegates
the rest of the session to Buyer2 over a private channel.
"""

from sessium import default_universe, parse_document, typecheck
from sessium.harness import corpus_source, simulate, subject_reduction_check

u = default_universe()
src = corpus_source("seller_buyers")
print(src)

doc = parse_document(src, u)
report = typecheck(doc.process, {}, "strict", universe=u)
print(report.format_text())

# %%
# A seeded run; every step is a synchronisation.
trace = simulate(doc.process, steps=20, seed=0, universe=u)
print(trace.format_text())

# %%
# Subject reduction, replayed over every reachable state.
print(subject_reduction_check(doc.process, universe=u, exhaustive=True).format_text())

# %%
# The persistent server needs a check the bounded search cannot settle.
server = parse_document(corpus_source("persistent_server"), u).process
print(typecheck(server, {}, "permissive", universe=u).format_text())
