"""
Distances on a segment graph
============================

A path on 1..n with a few long chords, and the power-mean distance h_p.
"""

import math

from gibbsgraphs import SegmentGraph, all_pairs_distances, distance, h_p

g = SegmentGraph(10, {(1, 4), (4, 7), (7, 10)})
print(g.to_json())
print("d(1, 10) =", distance(g, 1, 10))

# the bare path for comparison
path = SegmentGraph(10)
for p in (1, 2, 7, math.inf):
    print(f"p={p:>4}:  path {h_p(path, p):6.3f}   with chords {h_p(g, p):6.3f}")

D = all_pairs_distances(g)
print(D)

# chords never make distances longer
assert (D <= all_pairs_distances(path)).all()
