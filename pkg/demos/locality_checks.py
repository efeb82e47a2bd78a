"""
Statistical locality versus factorizability
===========================================

The quantum measure never signals: each detector's outcome rates are
independent of the other detector's setting.  It still fails to factorize
into independent per-detector coins, and the best product fit quantifies
the gap.
"""

import math

from bellmodel import (
    COLUMN_ORDER,
    ROW_ORDER,
    TSIRELSON_ANGLES,
    JointMeasure,
    SettingsDistribution,
    chsh_measure,
    factorizability_fit,
    no_signaling_report,
)

measure = chsh_measure(TSIRELSON_ANGLES)

report = no_signaling_report(measure)
print("max marginal deviation across the other detector's settings:", report.max_deviation)
for (party, outcome, own, other), value in sorted(report.conditional_marginals.items()):
    if outcome == 1:
        print(f"  P[{party}=+1 | own setting {own}, other setting {other}] = {value:.12f}")
print()

# a deliberately signaling table: move mass between outcomes inside one column
weights = list(measure.space.weights)
weights[0] += 0.01
weights[1] -= 0.01
tampered = JointMeasure.from_probabilities(
    TSIRELSON_ANGLES, SettingsDistribution.uniform(), weights
)
print("tampered table max deviation:", no_signaling_report(tampered).max_deviation)
print()

# factorizability: least-squares fit of per-detector coin parameters
fit = factorizability_fit(measure)
print("best product fit to the entangled table:")
print("  parameters:", [round(p, 6) for p in fit.params()])
print("  residual:  ", fit.residual, "(= 1/32 at the maximally violating angles)")
print()


def product_measure(u, v):
    cells = {}
    for (i, j) in COLUMN_ORDER:
        for (x, y) in ROW_ORDER:
            px = u[i] if x == 1 else 1.0 - u[i]
            py = v[j] if y == 1 else 1.0 - v[j]
            cells[(x, y, i, j)] = 0.25 * px * py
    return JointMeasure.from_probabilities(
        TSIRELSON_ANGLES, SettingsDistribution.uniform(), cells
    )


made_up = product_measure((0.3, 0.6), (0.2, 0.9))
recovered = factorizability_fit(made_up)
print("fit on a constructed product table:")
print("  parameters:", [round(p, 6) for p in recovered.params()])
print("  residual:  ", recovered.residual)

# angles with a flat conditional table do factorize
from bellmodel import DetectorAngle

flat_angles = tuple(DetectorAngle(f * math.pi) for f in (0.0, 0.5, 0.25, 0.75))
flat = chsh_measure(flat_angles)
print()
print("flat-table angles residual:", factorizability_fit(flat).residual)
