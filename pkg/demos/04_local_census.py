"""
Neighbourhood census
====================

Fraction of vertices whose truncated ball looks like a bare stretch of path,
against the same probability on the whole integer line.
"""

from gibbsgraphs import (
    ModelParams,
    NeighborhoodQuery,
    RootedPattern,
    chain_rng,
    mu_truncated,
    pattern_census,
    sample_reference,
)
from gibbsgraphs.local import mu_ladder

q = NeighborhoodQuery(k=1, l=3)
bare = RootedPattern.path_ball(1)

rng = chain_rng(3)
samples = [sample_reference(ModelParams(2000, 3.0), rng) for _ in range(30)]
census = pattern_census(samples, q)

for pat, entry in sorted(census.items(), key=lambda kv: -kv[1].mean)[:5]:
    print(f"{pat.to_json():60s} {entry.mean:.5f} +- {entry.stderr:.5f}")

print("mu exact      :", mu_truncated(3.0, q, bare))
print("mu monte carlo:", mu_truncated(3.0, q, bare, mode="monte_carlo", samples=200_000, seed=1))

# raising the cutoff changes mu less and less
for l, mu, step in mu_ladder(1.0, 1, bare, [2, 3, 4]):
    print(l, round(mu, 6), step)
