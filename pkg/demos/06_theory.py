"""
Exponent table
==============
"""

from fractions import Fraction

from gibbsgraphs import alpha_star, in_exceptional_set, theory_table

for b in (-0.5, 0.0, 0.3, 0.5, Fraction(2, 3), 0.9, 1.0):
    r = alpha_star(1.0, b)
    print(f"gamma=1 b={str(b):>5}: alpha*={r.value:.4f}  k={r.critical_k}")

print(in_exceptional_set(2.0, 0.55), in_exceptional_set(float("inf"), 0.3))
print(theory_table([0.5, 1.0, 2.0], [-0.5, 0.0, 0.25, 0.5, 1.0], 2.0))
