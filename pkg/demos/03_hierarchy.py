"""
Hierarchical layer graphs
=========================
"""

import math

from gibbsgraphs import Critical, SubCritical, SuperCritical, g_star, layer, layer_spacings, verify_scaling
from gibbsgraphs.hierarchy import scaling_csv

print(layer(10, 3))
print(layer(7, 10))

for reg in (SubCritical(0.5, 0.5), SuperCritical(2.0, 0.5), Critical(2)):
    print(reg, "spacings at n=16:", layer_spacings(16, reg))

g = g_star(64, SuperCritical(2.0, 0.5))
print(len(g.edges), "long edges in g* at n=64")

# ratios h_p / n^alpha should stay bounded along the grid
rows = verify_scaling([2**e for e in range(8, 13)], SuperCritical(2.0, 0.5), math.inf)
print(scaling_csv(rows))
