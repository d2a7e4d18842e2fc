"""
Reference and Gibbs sampling
============================

Draw from the independent-edge reference measure, then run the edge-flip
chain for the Gibbs measure and compare with exact enumeration at n=5.
"""

from collections import Counter

import numpy as np

from gibbsgraphs import (
    ModelParams,
    chain_rng,
    enumerate_measure,
    h_p,
    run_chain,
    sample_reference,
    total_variation,
)

rng = chain_rng(1)
ref = ModelParams(n=2000, gamma=1.0)
graphs = [sample_reference(ref, rng) for _ in range(20)]
print("long edges per sample:", [len(g.edges) for g in graphs][:10], "...")
print("diameter / n:", np.round([h_p(g, float("inf")) / ref.n for g in graphs[:5]], 3))

params = ModelParams(n=5, gamma=1.5, b=0.5, p=2.0)
exact = enumerate_measure(params)
print("graphs on [1,5]:", len(exact), " log Z =", round(exact.log_z, 6))

samples = run_chain(params, seed=7, burn_in=300, n_samples=50_000, thinning=6)
counts = Counter(g.edges for g in samples)
print("TV(chain, exact) =", round(total_variation(exact, counts), 4))

# the five most likely graphs, exact vs empirical
order = np.argsort(exact.probs)[::-1][:5]
for i in order:
    g = exact.graph(int(i))
    print(f"{str(g.sorted_edges()):32s} exact {exact.probs[i]:.4f}  chain {counts[g.edges] / len(samples):.4f}")
