"""
Three expectation flavors on a pair of fair dice
================================================

Plain expectation, conditional expectation (renormalized to an event), and
partial expectation (event indicator, no renormalization) behave differently
under summation.  Conditionals over a partition do not add up to the plain
expectation; partials do.
"""

from fractions import Fraction

from bellmodel import (
    Event,
    RandomVariable,
    conditional_expectation,
    dice_space,
    expectation,
    partial_expectation,
    verify_expectation_relation,
)

space = dice_space()

first = RandomVariable(lambda roll: roll[0])
total = RandomVariable(lambda roll: roll[0] + roll[1])
doubles = Event(lambda roll: roll[0] == roll[1])

print("E[first die]      =", expectation(space, first))
print("E[sum]            =", expectation(space, total))
print()

# conditioning on doubles or on their complement gives 7 both times
print("E[sum | doubles]     =", conditional_expectation(space, total, doubles))
print("E[sum | not doubles] =", conditional_expectation(space, total, ~doubles))
print("sum of conditionals  =", 7.0 + 7.0, " (not 7: conditionals do not add)")
print()

# partial expectations weight by the event indicator instead
p_doubles = partial_expectation(space, total, doubles)
p_rest = partial_expectation(space, total, ~doubles)
print("E_doubles[sum]       =", p_doubles, "=", Fraction(42, 36))
print("E_not_doubles[sum]   =", p_rest, "=", Fraction(210, 36))
print("sum of partials      =", p_doubles + p_rest, " (the plain expectation)")
print()

# partial = conditional * P[event], on any event with positive probability
print("identity holds on doubles:    ", verify_expectation_relation(space, total, doubles))
print("identity holds on the rest:   ", verify_expectation_relation(space, total, ~doubles))

# algebra on random variables works as expected
twice_minus_three = 2 * first - 3
print("E[2*first - 3] =", expectation(space, twice_minus_three))
