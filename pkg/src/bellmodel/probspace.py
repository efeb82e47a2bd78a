"""Finite probability spaces and the three expectation flavors.

For a random variable X on a finite space (Omega, P) and an event A:

    expectation(X)              = sum over all w of X(w) P[{w}]
    conditional_expectation(X|A)= partial_expectation(X, A) / P[A]
    partial_expectation(X, A)   = sum over w in A of X(w) P[{w}]

The partial flavor keeps the absolute weight of A: it is additive over a
partition of Omega, it vanishes on null events instead of being undefined,
and conditional = partial / P[A] whenever P[A] > 0.

The same machinery hosts the four-setting two-outcome experiment: a
`JointMeasure` is a distribution over the 16 points (x, y, i, j) where
(x, y) are the two detector outcomes and (i, j) pick which of the two
orientations each detector used on that run.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from typing import Any

import numpy as np

from .singlet import DetectorAngle, conditional_joint_probs

__all__ = [
    "COLUMN_ORDER",
    "ChshOutcome",
    "Event",
    "FiniteProbabilitySpace",
    "JointMeasure",
    "OUTCOME_ORDER",
    "ROW_ORDER",
    "RandomVariable",
    "SettingsDistribution",
    "ZeroProbabilityError",
    "chsh_measure",
    "conditional_expectation",
    "dice_space",
    "expectation",
    "outcome_product",
    "partial_expectation",
    "setting_event",
    "sig17",
    "verify_expectation_relation",
]

_ATOL = 1e-12


class ZeroProbabilityError(ValueError):
    """Raised when conditioning on an event of probability zero."""


def sig17(value: float) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    return format(float(value), ".17g")


class RandomVariable:
    """Real-valued function of outcomes, closed under +, -, * and scaling."""

    def __init__(self, fn: Callable[[Any], float]):
        self._fn = fn

    def __call__(self, outcome: Any) -> float:
        return self._fn(outcome)

    @staticmethod
    def _lift(other: Any) -> "RandomVariable":
        if isinstance(other, RandomVariable):
            return other
        if isinstance(other, (int, float)):
            return RandomVariable(lambda _w, c=float(other): c)
        raise TypeError(f"cannot combine RandomVariable with {type(other).__name__}")

    def __add__(self, other: Any) -> "RandomVariable":
        rhs = self._lift(other)
        return RandomVariable(lambda w: self(w) + rhs(w))

    __radd__ = __add__

    def __neg__(self) -> "RandomVariable":
        return RandomVariable(lambda w: -self(w))

    def __sub__(self, other: Any) -> "RandomVariable":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "RandomVariable":
        return self._lift(other) + (-self)

    def __mul__(self, other: Any) -> "RandomVariable":
        rhs = self._lift(other)
        return RandomVariable(lambda w: self(w) * rhs(w))

    __rmul__ = __mul__


class Event:
    """Measurable subset of the outcome set, given by a predicate."""

    def __init__(self, predicate: Callable[[Any], bool]):
        self._predicate = predicate

    def __call__(self, outcome: Any) -> bool:
        return bool(self._predicate(outcome))

    def indicator(self) -> RandomVariable:
        return RandomVariable(lambda w: 1.0 if self(w) else 0.0)

    def __and__(self, other: "Event") -> "Event":
        return Event(lambda w: self(w) and other(w))

    def __invert__(self) -> "Event":
        return Event(lambda w: not self(w))


@dataclass(frozen=True, eq=False)
class FiniteProbabilitySpace:
    """Finitely many distinct outcomes with nonnegative weights summing to 1.

    Weights are taken exactly as given; nothing is silently renormalized.
    """

    outcomes: tuple
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        outcomes = tuple(self.outcomes)
        weights = tuple(float(w) for w in self.weights)
        if len(outcomes) == 0:
            raise ValueError("a probability space needs at least one outcome")
        if len(outcomes) != len(weights):
            raise ValueError(f"{len(outcomes)} outcomes but {len(weights)} weights")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("outcomes must be distinct")
        for w in weights:
            if not (w >= 0.0):  # also rejects NaN
                raise ValueError(f"weights must be nonnegative, got {w!r}")
        total = math.fsum(weights)
        if abs(total - 1.0) > _ATOL:
            raise ValueError(f"weights must sum to 1 within {_ATOL}, got {total!r}")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", {w: k for k, w in enumerate(outcomes)})

    def weight(self, outcome: Any) -> float:
        """P[{outcome}]; outcomes not in the space have weight 0."""
        k = self._index.get(outcome)
        return 0.0 if k is None else self.weights[k]

    def probability(self, event: Event) -> float:
        return math.fsum(w for o, w in zip(self.outcomes, self.weights) if event(o))


def expectation(space: FiniteProbabilitySpace, rv: RandomVariable) -> float:
    """Plain expectation: weighted sum of X over all outcomes."""
    return math.fsum(rv(o) * w for o, w in zip(space.outcomes, space.weights))


def partial_expectation(space: FiniteProbabilitySpace, rv: RandomVariable, event: Event) -> float:
    """Expectation summed only over the event; 0 on a null event."""
    return math.fsum(rv(o) * w for o, w in zip(space.outcomes, space.weights) if event(o))


def conditional_expectation(space: FiniteProbabilitySpace, rv: RandomVariable, event: Event) -> float:
    """Expectation under the renormalized restriction to the event."""
    p = space.probability(event)
    if p <= 0.0:
        raise ZeroProbabilityError("cannot condition on an event of probability zero")
    return partial_expectation(space, rv, event) / p


def verify_expectation_relation(
    space: FiniteProbabilitySpace,
    rv: RandomVariable,
    event: Event,
    tol: float = _ATOL,
) -> bool:
    """Check partial = conditional * P[A] on a positive-probability event."""
    p = space.probability(event)
    if p <= 0.0:
        raise ZeroProbabilityError("relation is only defined when P[A] > 0")
    lhs = partial_expectation(space, rv, event)
    rhs = conditional_expectation(space, rv, event) * p
    return abs(lhs - rhs) <= tol


def dice_space() -> FiniteProbabilitySpace:
    """Two fair dice: outcomes (i, j) with i, j in 1..6, each weight 1/36."""
    outcomes = tuple((i, j) for i in range(1, 7) for j in range(1, 7))
    return FiniteProbabilitySpace(outcomes=outcomes, weights=(1.0 / 36.0,) * 36)


# ---------------------------------------------------------------------------
# The four-setting experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SettingsDistribution:
    """Distribution over the four setting pairs; p_ij = P[A uses a_i, B uses b_j]."""

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self) -> None:
        for name, p in self.items():
            if not (p >= 0.0):
                raise ValueError(f"setting probability {name} must be nonnegative, got {p!r}")
        total = math.fsum(p for _name, p in self.items())
        if abs(total - 1.0) > _ATOL:
            raise ValueError(f"setting probabilities must sum to 1, got {total!r}")

    @classmethod
    def uniform(cls) -> "SettingsDistribution":
        return cls(0.25, 0.25, 0.25, 0.25)

    @classmethod
    def from_mapping(cls, table: Mapping[tuple[int, int], float]) -> "SettingsDistribution":
        return cls(
            p00=table.get((0, 0), 0.0),
            p01=table.get((0, 1), 0.0),
            p10=table.get((1, 0), 0.0),
            p11=table.get((1, 1), 0.0),
        )

    def probability(self, i: int, j: int) -> float:
        try:
            return {(0, 0): self.p00, (0, 1): self.p01, (1, 0): self.p10, (1, 1): self.p11}[(i, j)]
        except KeyError:
            raise ValueError(f"setting indices must be 0 or 1, got ({i!r}, {j!r})") from None

    def items(self) -> tuple[tuple[str, float], ...]:
        return (("p00", self.p00), ("p01", self.p01), ("p10", self.p10), ("p11", self.p11))

    def is_uniform(self, tol: float = _ATOL) -> bool:
        return all(abs(p - 0.25) <= tol for _name, p in self.items())


@dataclass(frozen=True)
class ChshOutcome:
    """One experimental run: outcomes x, y in {-1, +1}, setting indices i, j in {0, 1}."""

    x: int
    y: int
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.x not in (-1, 1) or self.y not in (-1, 1):
            raise ValueError(f"outcomes must be -1 or +1, got x={self.x!r} y={self.y!r}")
        if self.i not in (0, 1) or self.j not in (0, 1):
            raise ValueError(f"setting indices must be 0 or 1, got i={self.i!r} j={self.j!r}")


#: Setting-pair columns in table layout order.
COLUMN_ORDER: tuple[tuple[int, int], ...] = ((0, 0), (1, 0), (1, 1), (0, 1))

#: Outcome-pair rows in table layout order.
ROW_ORDER: tuple[tuple[int, int], ...] = ((1, 1), (-1, 1), (1, -1), (-1, -1))

#: Canonical flat order of all 16 points: column-major over the table layout.
OUTCOME_ORDER: tuple[ChshOutcome, ...] = tuple(
    ChshOutcome(x=x, y=y, i=i, j=j) for (i, j) in COLUMN_ORDER for (x, y) in ROW_ORDER
)

_COLUMN_LABELS = tuple(f"a{i}b{j}" for (i, j) in COLUMN_ORDER)


def outcome_product() -> RandomVariable:
    """The product X*Y of the two detector outcomes."""
    return RandomVariable(lambda o: float(o.x * o.y))


def setting_event(i: int, j: int) -> Event:
    """The event that detector A used a_i and detector B used b_j."""
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError(f"setting indices must be 0 or 1, got ({i!r}, {j!r})")
    return Event(lambda o: o.i == i and o.j == j)


@dataclass(frozen=True, eq=False)
class JointMeasure:
    """Distribution over the 16 points (x, y, i, j) of the four-setting experiment.

    The underlying space is always ordered by `OUTCOME_ORDER`, and the mass
    of each setting-pair column must match the stated settings distribution.
    """

    space: FiniteProbabilitySpace
    angles: tuple[DetectorAngle, DetectorAngle, DetectorAngle, DetectorAngle]
    settings: SettingsDistribution

    def __post_init__(self) -> None:
        if len(self.angles) != 4 or not all(isinstance(a, DetectorAngle) for a in self.angles):
            raise ValueError("angles must be 4 DetectorAngle values (a0, a1, b0, b1)")
        object.__setattr__(self, "angles", tuple(self.angles))
        if self.space.outcomes != OUTCOME_ORDER:
            raise ValueError("the space must enumerate the 16 points in canonical order")
        for col, (i, j) in enumerate(COLUMN_ORDER):
            mass = math.fsum(self.space.weights[col * 4 : col * 4 + 4])
            stated = self.settings.probability(i, j)
            if abs(mass - stated) > _ATOL:
                raise ValueError(
                    f"column (a{i}, b{j}) has mass {mass!r} but settings say {stated!r}"
                )

    @classmethod
    def from_probabilities(
        cls,
        angles: Iterable[DetectorAngle],
        settings: SettingsDistribution,
        cells: Mapping[tuple[int, int, int, int], float] | Iterable[float],
    ) -> "JointMeasure":
        """Build a measure from explicit cell weights.

        ``cells`` is either a mapping (x, y, i, j) -> probability (missing
        cells are 0) or a flat sequence of 16 weights in canonical order.
        """
        if isinstance(cells, Mapping):
            weights = tuple(cells.get((o.x, o.y, o.i, o.j), 0.0) for o in OUTCOME_ORDER)
        else:
            weights = tuple(float(c) for c in cells)
            if len(weights) != 16:
                raise ValueError(f"expected 16 cell weights, got {len(weights)}")
        space = FiniteProbabilitySpace(outcomes=OUTCOME_ORDER, weights=weights)
        return cls(space=space, angles=tuple(angles), settings=settings)

    @property
    def probs(self) -> np.ndarray:
        """All 16 weights as an array aligned with `OUTCOME_ORDER`."""
        return np.array(self.space.weights)

    def probability(self, x: int, y: int, i: int, j: int) -> float:
        return self.space.weight(ChshOutcome(x=x, y=y, i=i, j=j))

    def column(self, i: int, j: int) -> dict[tuple[int, int], float]:
        """Joint weights p(x, y, i, j) of one setting-pair column."""
        col = COLUMN_ORDER.index((i, j))
        return {xy: self.space.weights[col * 4 + row] for row, xy in enumerate(ROW_ORDER)}

    def conditional_column(self, i: int, j: int) -> dict[tuple[int, int], float]:
        """Outcome distribution p(x, y | i, j); errors if the pair has probability 0."""
        p = self.settings.probability(i, j)
        if p <= 0.0:
            raise ZeroProbabilityError(f"setting pair (a{i}, b{j}) has probability zero")
        return {xy: w / p for xy, w in self.column(i, j).items()}

    def as_dict(self) -> dict:
        return {
            "angles": {
                "a0": self.angles[0].radians,
                "a1": self.angles[1].radians,
                "b0": self.angles[2].radians,
                "b1": self.angles[3].radians,
            },
            "settings": dict(self.settings.items()),
            "cells": [
                {"x": o.x, "y": o.y, "i": o.i, "j": o.j, "p": w}
                for o, w in zip(OUTCOME_ORDER, self.space.weights)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    def to_csv(self) -> str:
        """Table layout: one row per outcome pair, one column per setting pair.

        Cells carry 17 significant digits so parsing the CSV reproduces the
        weights bit-for-bit.
        """
        lines = ["x,y," + ",".join(_COLUMN_LABELS)]
        for row, (x, y) in enumerate(ROW_ORDER):
            cells = [sig17(self.space.weights[col * 4 + row]) for col in range(4)]
            lines.append(f"{x},{y}," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """SHA-256 over a canonical text rendering; identifies the measure."""
        parts = [sig17(a.radians) for a in self.angles]
        parts += [sig17(p) for _name, p in self.settings.items()]
        parts += [sig17(w) for w in self.space.weights]
        return hashlib.sha256(";".join(parts).encode("ascii")).hexdigest()


def chsh_measure(
    angles: Iterable[DetectorAngle],
    settings: SettingsDistribution | None = None,
) -> JointMeasure:
    """Joint measure of the singlet experiment: p(x, y, i, j) = p_ij * p(x, y | a_i, b_j).

    ``angles`` are (a0, a1, b0, b1); ``settings`` defaults to uniform.
    """
    angles = tuple(angles)
    if len(angles) != 4:
        raise ValueError(f"expected 4 angles (a0, a1, b0, b1), got {len(angles)}")
    if settings is None:
        settings = SettingsDistribution.uniform()
    a = angles[:2]
    b = angles[2:]
    weights = []
    for (i, j) in COLUMN_ORDER:
        p_ij = settings.probability(i, j)
        cond = conditional_joint_probs(a[i], b[j])
        weights.extend(p_ij * cond[xy] for xy in ROW_ORDER)
    space = FiniteProbabilitySpace(outcomes=OUTCOME_ORDER, weights=tuple(weights))
    return JointMeasure(space=space, angles=angles, settings=settings)
