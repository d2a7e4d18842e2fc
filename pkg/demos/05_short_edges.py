"""
Forcing every short edge
========================

With gamma > 1 and a strong enough energy, the Gibbs measure puts almost all
of its mass on graphs that contain every edge of length at most L.
"""

from gibbsgraphs import ModelParams, enumerate_measure, exact_event_probability, run_chain
from gibbsgraphs.graph import all_long_pairs
from gibbsgraphs.local import has_all_short_edges

L = 2
for b in (0, 1, 2, 3, 4, 5, 8):
    rep = enumerate_measure(ModelParams(5, gamma=2.0, b=b, p=1.0))
    print(f"b={b}:  P(all edges of length <= {L}) = {exact_event_probability(rep, lambda g: has_all_short_edges(g, L)):.5f}")

# too large to enumerate; the chain gives the trend instead
params = ModelParams(30, gamma=2.0, b=3.0, p=1.0)
short = [e for e in all_long_pairs(30) if e[1] - e[0] <= L]
graphs = run_chain(params, seed=2, burn_in=20 * params.n_pairs, n_samples=10, thinning=params.n_pairs)
print("n=30 mean short-edge fraction:", sum(sum(e in g.edges for e in short) / len(short) for g in graphs) / len(graphs))
