"""
The 16-cell joint probability table of the two-detector experiment
==================================================================

Each trial picks a setting pair (a_i, b_j) and produces outcomes x, y in
{-1, +1}.  The joint table multiplies the setting distribution with the
exact outcome probabilities of the entangled pair, so each of the four
columns carries its setting probability as total mass.
"""

import math

from bellmodel import (
    COLUMN_ORDER,
    ROW_ORDER,
    TSIRELSON_ANGLES,
    DetectorAngle,
    chsh_measure,
    conditional_joint_probs,
    correlation,
    spectral_coefficients,
)

# outcome probabilities for one fixed setting pair, two independent routes
a = DetectorAngle(0.0)
b = DetectorAngle(5 * math.pi / 8)

closed_form = conditional_joint_probs(a, b)
spectral = spectral_coefficients(a, b)
print(f"setting pair ({float(a):.4f}, {float(b):.4f}):")
for xy, p in closed_form.items():
    print(f"  P{xy} = {p:.12f}   |amplitude|^2 = {spectral.probability(*xy):.12f}")
print("correlation E[XY] =", correlation(a, b), "= -cos(2(a-b)) =", -math.cos(2 * (float(a) - float(b))))
print()

# the full table at the maximally violating angles, uniform settings
measure = chsh_measure(TSIRELSON_ANGLES)
header = "  ".join(f"a{i}b{j}" for (i, j) in COLUMN_ORDER)
print("cells (rows: outcome pairs, columns: setting pairs)")
print(f"  x  y   {header}")
for (x, y) in ROW_ORDER:
    cells = "  ".join(f"{measure.probability(x, y, i, j):.6f}" for (i, j) in COLUMN_ORDER)
    print(f" {x:+d} {y:+d}   {cells}")

gamma_sq = (2 + math.sqrt(2)) / 4
beta_sq = (2 - math.sqrt(2)) / 4
print()
print("gamma^2/8 =", gamma_sq / 8, "  beta^2/8 =", beta_sq / 8)

for (i, j) in COLUMN_ORDER:
    mass = sum(measure.probability(x, y, i, j) for (x, y) in ROW_ORDER)
    print(f"column a{i}b{j} mass = {mass:.12f}")

# serialized forms round-trip the numbers exactly
print()
print(measure.to_csv())
print("digest:", measure.digest())
