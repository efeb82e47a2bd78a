"""
One inequality, three readings
==============================

The four-term combination |t00 + t10 + t11 - t01| is compared against the
classical bound 2 with three different term definitions:

* fixed answers: every deterministic assignment gives exactly -2 or +2,
* conditional expectations: the quantum value reaches 2*sqrt(2),
* partial expectations: the same measure yields sqrt(2)/2, inside the bound.
"""

import math

from bellmodel import (
    BELL_TEST_ANGLES,
    BELL_TEST_SETTINGS,
    TSIRELSON_ANGLES,
    bell_original,
    chsh_conditional,
    chsh_measure,
    chsh_partial,
    realism_table_check,
)

values = realism_table_check()
print("fixed-answer combinations:", sorted(set(values)), "from 16 assignments")
print()

measure = chsh_measure(TSIRELSON_ANGLES)

conditional = chsh_conditional(measure)
print("conditional terms:  ", [round(t, 12) for t in conditional.term_values])
print("conditional combined:", conditional.combined_value, "=", 2 * math.sqrt(2))
print("satisfied:", conditional.satisfied)
print()

partial = chsh_partial(measure)
print("partial terms:      ", [round(t, 12) for t in partial.term_values])
print("partial combined:   ", partial.combined_value, "=", math.sqrt(2) / 2)
print("satisfied:", partial.satisfied)
print()

# each partial term is the conditional term scaled by its setting probability
for t_cond, t_part in zip(conditional.term_values, partial.term_values):
    assert abs(t_part - t_cond / 4) < 1e-12
print("partial term = conditional term / 4 under uniform settings")
print()

# the older single-sided inequality, with a shared middle orientation and
# settings that never use the swapped pair
report = bell_original(*BELL_TEST_ANGLES, BELL_TEST_SETTINGS)
print("single-sided form: lhs =", report.lhs, " rhs =", report.rhs)
print("  lhs = sqrt(2)/6 =", math.sqrt(2) / 6)
print("  rhs = 1 - sqrt(2)/6 =", 1 - math.sqrt(2) / 6)
print("satisfied:", report.satisfied)
