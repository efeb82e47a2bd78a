"""Hidden-variable analysis of the four-setting experiment.

Four related questions about the measured probability table:

* `no_signaling_report`: does either detector's outcome distribution depend
  on the *other* detector's setting?  (For the quantum table it never does.)
* `factorizability_fit`: how close is the table to a product of independent
  per-detector Bernoulli outcomes, one parameter per orientation?
* `fourier_witness_check`: a quadrature demonstration that no response
  function bounded in [0, 1] can reproduce the singlet correlation exactly;
  the required first-harmonic amplitude works out to sqrt 2 > 1.
* `m_separability_search`: numerical search for a finite hidden-variable
  model whose predictions stay within m of the table, minimizing m.

The hidden-variable models here (`LHVModel`) are local: a latent value
lambda is drawn from a finite distribution, then each detector answers
independently given lambda and its own setting.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from .probspace import COLUMN_ORDER, ROW_ORDER, JointMeasure
from .singlet import DetectorAngle, conditional_joint_probs

__all__ = [
    "FourierWitnessReport",
    "LHVModel",
    "NoSignalingReport",
    "ProductFit",
    "SeparabilityResult",
    "factorizability_fit",
    "fourier_witness_check",
    "lhv_correlation",
    "lhv_predicted_probs",
    "m_separability_search",
    "no_signaling_report",
]

_ATOL = 1e-12


# ---------------------------------------------------------------------------
# No-signaling
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NoSignalingReport:
    """Single-detector marginals and their spread across the other detector's setting.

    Keys of ``joint_marginals`` and ``conditional_marginals`` are
    (party, outcome, own_setting, other_setting); keys of ``deviations``
    are (party, outcome, own_setting).  Setting pairs with probability 0
    have no conditional marginal and are listed in ``skipped``.
    """

    joint_marginals: dict[tuple[str, int, int, int], float]
    conditional_marginals: dict[tuple[str, int, int, int], float]
    deviations: dict[tuple[str, int, int], float]
    skipped: tuple[tuple[int, int], ...]
    max_deviation: float

    def as_dict(self) -> dict:
        return {
            "marginals": [
                {
                    "party": party,
                    "outcome": outcome,
                    "own_setting": own,
                    "other_setting": other,
                    "joint": self.joint_marginals[(party, outcome, own, other)],
                    "conditional": cond,
                }
                for (party, outcome, own, other), cond in self.conditional_marginals.items()
            ],
            "deviations": [
                {"party": party, "outcome": outcome, "own_setting": own, "deviation": d}
                for (party, outcome, own), d in self.deviations.items()
            ],
            "skipped": [list(pair) for pair in self.skipped],
            "max_deviation": self.max_deviation,
        }


def no_signaling_report(measure: JointMeasure) -> NoSignalingReport:
    """Compare each detector's outcome distribution across the other's settings.

    For party A, outcome x and own setting i, the conditional marginal
    P[X = x | a_i, b_j] is computed for each j with positive setting
    probability; the deviation is the absolute difference across j (and
    symmetrically for party B).  The joint marginals (not divided by the
    setting probability) are reported alongside.
    """
    joint: dict[tuple[str, int, int, int], float] = {}
    cond: dict[tuple[str, int, int, int], float] = {}
    skipped = tuple(
        (i, j) for (i, j) in sorted(COLUMN_ORDER) if measure.settings.probability(i, j) <= 0.0
    )
    usable = {pair for pair in COLUMN_ORDER if pair not in skipped}

    for (i, j) in sorted(COLUMN_ORDER):
        column = measure.column(i, j)
        p_ij = measure.settings.probability(i, j)
        for x in (1, -1):
            jm = column[(x, 1)] + column[(x, -1)]
            joint[("A", x, i, j)] = jm
            if (i, j) in usable:
                cond[("A", x, i, j)] = jm / p_ij
        for y in (1, -1):
            jm = column[(1, y)] + column[(-1, y)]
            joint[("B", y, j, i)] = jm
            if (i, j) in usable:
                cond[("B", y, j, i)] = jm / p_ij

    deviations: dict[tuple[str, int, int], float] = {}
    for party in ("A", "B"):
        for outcome in (1, -1):
            for own in (0, 1):
                k0 = (party, outcome, own, 0)
                k1 = (party, outcome, own, 1)
                if k0 in cond and k1 in cond:
                    deviations[(party, outcome, own)] = abs(cond[k0] - cond[k1])

    max_dev = max(deviations.values(), default=0.0)
    return NoSignalingReport(
        joint_marginals=joint,
        conditional_marginals=cond,
        deviations=deviations,
        skipped=skipped,
        max_deviation=max_dev,
    )


# ---------------------------------------------------------------------------
# Factorizability (Bernoulli product fit)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductFit:
    """Best product-form table: independent +1-probabilities per orientation.

    The fitted table has cells p(x, y, i, j) = (1/4) * Bern(x; u_i) *
    Bern(y; v_j) where u_i = p_plus_a{i} and v_j = p_plus_b{j}; ``residual``
    is the summed squared difference from the target over all 16 cells.
    """

    p_plus_a0: float
    p_plus_a1: float
    p_plus_b0: float
    p_plus_b1: float
    residual: float

    def params(self) -> tuple[float, float, float, float]:
        return (self.p_plus_a0, self.p_plus_a1, self.p_plus_b0, self.p_plus_b1)

    def as_dict(self) -> dict:
        return {
            "p_plus_a0": self.p_plus_a0,
            "p_plus_a1": self.p_plus_a1,
            "p_plus_b0": self.p_plus_b0,
            "p_plus_b1": self.p_plus_b1,
            "residual": self.residual,
        }


def _product_residual(params: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Summed squared error of the product table; broadcasts over leading axes.

    ``params`` has shape (..., 4) = (u0, u1, v0, v1); ``target`` is the
    flat 16-cell table in canonical order.
    """
    u = (params[..., 0], params[..., 1])
    v = (params[..., 2], params[..., 3])
    res = 0.0
    for col, (i, j) in enumerate(COLUMN_ORDER):
        px = {1: u[i], -1: 1.0 - u[i]}
        py = {1: v[j], -1: 1.0 - v[j]}
        for row, (x, y) in enumerate(ROW_ORDER):
            res = res + (0.25 * px[x] * py[y] - target[col * 4 + row]) ** 2
    return res


def factorizability_fit(
    measure: JointMeasure, grid_points: int = 21, restarts: int = 5
) -> ProductFit:
    """Least-squares fit of a Bernoulli-product table to the measure.

    Coarse grid search over [0, 1]^4 (``grid_points`` per axis) picks the
    ``restarts`` best corners, each refined with bounded L-BFGS-B; the best
    refined point wins.  Requires uniform settings: the product form fixes
    every setting-pair probability at 1/4.
    """
    if not measure.settings.is_uniform():
        raise ValueError("factorizability fit requires uniform settings (each pair 1/4)")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    target = measure.probs

    axis = np.linspace(0.0, 1.0, grid_points)
    grid = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 4)
    coarse = _product_residual(grid, target)
    k = min(restarts, len(coarse))
    starts = grid[np.argpartition(coarse, k - 1)[:k]]

    best_params = None
    best_value = math.inf
    for x0 in starts:
        out = minimize(
            lambda p: float(_product_residual(p, target)),
            x0,
            method="L-BFGS-B",
            bounds=[(0.0, 1.0)] * 4,
        )
        if out.fun < best_value:
            best_value = float(out.fun)
            best_params = np.clip(out.x, 0.0, 1.0)

    u0, u1, v0, v1 = (float(p) for p in best_params)
    return ProductFit(p_plus_a0=u0, p_plus_a1=u1, p_plus_b0=v0, p_plus_b1=v1, residual=best_value)


# ---------------------------------------------------------------------------
# Fourier witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FourierWitnessReport:
    """Quadrature check that an exact hidden-variable response cannot exist.

    A response probability reproducing the singlet statistics exactly would
    need, for almost every latent value, a first harmonic (in twice the
    detector angle) whose coefficient c(lambda) satisfies

        integral c = 0,  integral c^2 = 0,  integral |c|^2 = pi/2,

    forcing |c| = sqrt(pi/2) almost everywhere.  The response then swings
    with amplitude 2|c|/sqrt(pi) = sqrt 2 around its mean, and since twice
    the angle sweeps a full period the swing is attained: the "probability"
    would leave [0, 1].  ``contradiction`` records that all four numbers hit
    those targets.
    """

    first_moment_abs: float
    second_moment_abs: float
    power: float
    response_amplitude_max: float
    grid_size: int
    contradiction: bool

    def as_dict(self) -> dict:
        return {
            "first_moment_abs": self.first_moment_abs,
            "second_moment_abs": self.second_moment_abs,
            "power": self.power,
            "response_amplitude_max": self.response_amplitude_max,
            "grid_size": self.grid_size,
            "contradiction": self.contradiction,
        }


def fourier_witness_check(grid_size: int = 10000) -> FourierWitnessReport:
    """Evaluate the witness integrals by midpoint quadrature on [0, 1].

    ``grid_size`` is the number of midpoint nodes (at least 100).  The
    coefficient function is c(lambda) = sqrt(pi/2) * exp(2*pi*i*lambda).
    """
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    lam = (np.arange(grid_size) + 0.5) / grid_size
    c = math.sqrt(math.pi / 2.0) * np.exp(2j * math.pi * lam)
    w = 1.0 / grid_size

    first = abs(complex(np.sum(c) * w))
    second = abs(complex(np.sum(c * c) * w))
    power = float(np.sum(np.abs(c) ** 2) * w)
    amplitude = float(np.max(2.0 * np.abs(c) / math.sqrt(math.pi)))

    contradiction = (
        first <= 1e-8
        and second <= 1e-8
        and abs(power - math.pi / 2.0) <= 1e-8
        and amplitude > 1.0 + 1e-6
    )
    return FourierWitnessReport(
        first_moment_abs=first,
        second_moment_abs=second,
        power=power,
        response_amplitude_max=amplitude,
        grid_size=grid_size,
        contradiction=contradiction,
    )


# ---------------------------------------------------------------------------
# Finite hidden-variable models and the m-separability search
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LHVModel:
    """Local hidden-variable model on a finite latent grid.

    ``rho`` is the distribution over latent values; ``p_response[i, k]`` is
    P[X = +1 | a_i, lambda_k] and ``q_response[j, k]`` is
    P[Y = -1 | b_j, lambda_k].  Given lambda the two answers are independent.
    """

    lambda_grid: np.ndarray
    rho: np.ndarray
    p_response: np.ndarray
    q_response: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.lambda_grid, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        p = np.asarray(self.p_response, dtype=float)
        q = np.asarray(self.q_response, dtype=float)
        n = grid.shape[0] if grid.ndim == 1 else -1
        if grid.ndim != 1 or n < 1:
            raise ValueError("lambda_grid must be a nonempty 1-d array")
        if rho.shape != (n,):
            raise ValueError(f"rho must have shape ({n},), got {rho.shape}")
        if p.shape != (2, n) or q.shape != (2, n):
            raise ValueError(f"responses must have shape (2, {n})")
        if np.any(rho < 0.0) or abs(float(rho.sum()) - 1.0) > 1e-9:
            raise ValueError("rho must be a probability distribution")
        for name, arr in (("p_response", p), ("q_response", q)):
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise ValueError(f"{name} entries must lie in [0, 1]")
        object.__setattr__(self, "lambda_grid", grid)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "p_response", p)
        object.__setattr__(self, "q_response", q)

    @property
    def size(self) -> int:
        return self.lambda_grid.shape[0]

    def as_dict(self) -> dict:
        return {
            "lambda_grid": self.lambda_grid.tolist(),
            "rho": self.rho.tolist(),
            "p_response": self.p_response.tolist(),
            "q_response": self.q_response.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "LHVModel":
        return cls(
            lambda_grid=np.array(doc["lambda_grid"], dtype=float),
            rho=np.array(doc["rho"], dtype=float),
            p_response=np.array(doc["p_response"], dtype=float),
            q_response=np.array(doc["q_response"], dtype=float),
        )

    @classmethod
    def from_json(cls, text: str) -> "LHVModel":
        return cls.from_dict(json.loads(text))


def _predicted_table(rho: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Predicted conditional probabilities, shape (4 rows, 2, 2) = (row, i, j)."""
    pr = p * rho
    mr = (1.0 - p) * rho
    qt = q.T
    nt = 1.0 - qt
    pred = np.empty((4, 2, 2))
    pred[0] = pr @ nt  # (+1, +1): X answers +1, Y does not answer -1
    pred[1] = mr @ nt  # (-1, +1)
    pred[2] = pr @ qt  # (+1, -1)
    pred[3] = mr @ qt  # (-1, -1)
    return pred


def lhv_predicted_probs(model: LHVModel, i: int, j: int) -> dict[tuple[int, int], float]:
    """Model prediction for p(x, y | a_i, b_j)."""
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError(f"setting indices must be 0 or 1, got ({i!r}, {j!r})")
    pred = _predicted_table(model.rho, model.p_response, model.q_response)
    return {xy: float(pred[row, i, j]) for row, xy in enumerate(ROW_ORDER)}


def lhv_correlation(model: LHVModel, i: int, j: int) -> float:
    """E[XY | a_i, b_j] under the model: sum over lambda of rho*(2p-1)*(1-2q)."""
    p = model.p_response[i]
    q = model.q_response[j]
    return float(np.sum(model.rho * (2.0 * p - 1.0) * (1.0 - 2.0 * q)))


@dataclass(frozen=True, eq=False)
class SeparabilityResult:
    """Outcome of the m-separability search.

    ``m_hat`` is the largest absolute deviation between the model's
    predictions and the target over the compared cells, i.e. the max of
    ``per_setting_deviations``.
    """

    m_hat: float
    model: LHVModel
    per_setting_deviations: dict[tuple[int, int, int, int], float]

    def __post_init__(self) -> None:
        worst = max(self.per_setting_deviations.values(), default=0.0)
        if abs(self.m_hat - worst) > _ATOL:
            raise ValueError("m_hat must equal the largest per-cell deviation")

    def as_dict(self) -> dict:
        return {
            "m_hat": self.m_hat,
            "per_setting_deviations": [
                {"x": x, "y": y, "i": i, "j": j, "deviation": d}
                for (x, y, i, j), d in self.per_setting_deviations.items()
            ],
            "model": self.model.as_dict(),
        }


def _conditional_target(
    angles: tuple[DetectorAngle, DetectorAngle, DetectorAngle, DetectorAngle],
) -> np.ndarray:
    """Target conditional table, shape (4 rows, 2, 2) = (row, i, j)."""
    a = angles[:2]
    b = angles[2:]
    target = np.empty((4, 2, 2))
    for i in (0, 1):
        for j in (0, 1):
            cond = conditional_joint_probs(a[i], b[j])
            for row, xy in enumerate(ROW_ORDER):
                target[row, i, j] = cond[xy]
    return target


def _unpack(theta: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p = theta[0 : 2 * size].reshape(2, size)
    q = theta[2 * size : 4 * size].reshape(2, size)
    raw = theta[4 * size :]
    total = float(raw.sum())
    rho = raw / total if total > 0.0 else np.full(size, 1.0 / size)
    return p, q, rho


def _objective(theta: np.ndarray, size: int, target: np.ndarray, mask: np.ndarray) -> float:
    p, q, rho = _unpack(theta, size)
    pred = _predicted_table(rho, p, q)
    return float(np.max(np.abs(pred - target)[mask]))


def _pattern_search(
    theta: np.ndarray,
    fn,
    step: float = 0.1,
    min_step: float = 1e-6,
    max_sweeps: int = 2000,
) -> tuple[np.ndarray, float]:
    """Compass search with coordinate moves clamped to [0, 1].

    A sweep tries +-step on every coordinate, keeping strict improvements;
    the step halves after a sweep with no improvement.  The objective never
    increases, so a start that is already optimal is returned unchanged.
    """
    theta = theta.copy()
    value = fn(theta)
    sweeps = 0
    while step >= min_step and sweeps < max_sweeps:
        sweeps += 1
        improved = False
        for k in range(len(theta)):
            old = theta[k]
            for delta in (step, -step):
                cand = min(1.0, max(0.0, old + delta))
                if cand == old:
                    continue
                theta[k] = cand
                candidate_value = fn(theta)
                if candidate_value < value:
                    value = candidate_value
                    improved = True
                    break
                theta[k] = old
        if not improved:
            step *= 0.5
    return theta, value


def _central_start(size: int) -> np.ndarray:
    return np.full(5 * size, 0.5)


def _product_start(size: int, target: np.ndarray) -> np.ndarray:
    """Single latent point carrying the target's per-detector marginals.

    Exact whenever the target itself factorizes into independent
    per-orientation Bernoulli outcomes.
    """
    theta = _central_start(size)
    for i in (0, 1):
        theta[i * size] = target[0, i, 0] + target[2, i, 0]  # P[X=+1 | a_i, b_0]
    for j in (0, 1):
        theta[(2 + j) * size] = target[2, 0, j] + target[3, 0, j]  # P[Y=-1 | a_0, b_j]
    raw = np.zeros(size)
    raw[0] = 1.0
    theta[4 * size :] = raw
    return theta


def _two_point_start(size: int, target: np.ndarray, i: int) -> np.ndarray:
    """Two latent points that reproduce both columns with A-setting i exactly.

    Point 1: X always +1 and Y answers -1 with probability c_j; point 2 is
    the mirror image.  Choosing c_j = P[x=+1, y=-1 | a_i, b_j] * 2 matches
    every cell of columns (i, 0) and (i, 1).
    """
    theta = _central_start(size)
    p = np.full((2, size), 0.5)
    q = np.full((2, size), 0.5)
    p[:, 0] = 1.0
    p[:, 1] = 0.0
    for j in (0, 1):
        c = min(1.0, max(0.0, 2.0 * target[2, i, j]))
        q[j, 0] = c
        q[j, 1] = 1.0 - c
    raw = np.zeros(size)
    raw[0] = 0.5
    raw[1] = 0.5
    theta[0 : 2 * size] = p.ravel()
    theta[2 * size : 4 * size] = q.ravel()
    theta[4 * size :] = raw
    return theta


def _deterministic_tables() -> np.ndarray:
    """Predicted tables of all 16 deterministic strategies, shape (16, 4, 2, 2).

    Strategy k fixes the four answers (x0, x1, y0, y1) from bits 0..3 of k
    (+1 if the bit is set, else -1).  Every local model's prediction is a
    convex mixture of these tables.
    """
    tables = np.zeros((16, 4, 2, 2))
    for k in range(16):
        x = tuple(1 if (k >> b) & 1 else -1 for b in (0, 1))
        y = tuple(1 if (k >> b) & 1 else -1 for b in (2, 3))
        for row, (xo, yo) in enumerate(ROW_ORDER):
            for i in (0, 1):
                for j in (0, 1):
                    if x[i] == xo and y[j] == yo:
                        tables[k, row, i, j] = 1.0
    return tables


def _solve_mixture_lp(target: np.ndarray, mask: np.ndarray) -> np.ndarray | None:
    """Mixture weights over the 16 deterministic strategies minimizing the worst deviation.

    Minimizing the largest masked-cell deviation over such mixtures is a
    linear program, and its optimum is the true minimum over *all* local
    models: every local model predicts a convex mixture of the
    deterministic tables.  Returns None if the solver fails.
    """
    tables = _deterministic_tables()
    cells = np.argwhere(mask)
    n_cells = len(cells)
    cost = np.zeros(17)
    cost[16] = 1.0
    a_ub = np.zeros((2 * n_cells, 17))
    b_ub = np.zeros(2 * n_cells)
    for m, (row, i, j) in enumerate(cells):
        column = tables[:, row, i, j]
        value = target[row, i, j]
        a_ub[2 * m, :16] = column
        a_ub[2 * m, 16] = -1.0
        b_ub[2 * m] = value
        a_ub[2 * m + 1, :16] = -column
        a_ub[2 * m + 1, 16] = -1.0
        b_ub[2 * m + 1] = -value
    a_eq = np.zeros((1, 17))
    a_eq[0, :16] = 1.0
    out = linprog(
        cost,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=[(0.0, 1.0)] * 16 + [(0.0, None)],
        method="highs",
    )
    if not out.success:
        return None
    return np.clip(out.x[:16], 0.0, 1.0)


def _mixture_start(size: int, weights: np.ndarray) -> np.ndarray | None:
    """Pack LP mixture weights as a search start on ``size`` latent points.

    With at least as many latent points as the support of the mixture the
    start already achieves the LP optimum; smaller grids keep the heaviest
    strategies, renormalized.
    """
    keep = np.argsort(weights)[::-1][: min(16, size)]
    kept = weights[keep]
    total = float(kept.sum())
    if total <= 0.0:
        return None
    kept = kept / total

    theta = _central_start(size)
    p = np.full((2, size), 0.5)
    q = np.full((2, size), 0.5)
    raw = np.zeros(size)
    for slot, (k, weight) in enumerate(zip(keep, kept)):
        for b in (0, 1):
            p[b, slot] = 1.0 if (k >> b) & 1 else 0.0  # X answers +1
            q[b, slot] = 0.0 if (k >> (2 + b)) & 1 else 1.0  # Y answers -1
        raw[slot] = weight
    theta[0 : 2 * size] = p.ravel()
    theta[2 * size : 4 * size] = q.ravel()
    theta[4 * size :] = raw
    return theta


def _pad_start(theta: np.ndarray, old_size: int, new_size: int) -> np.ndarray:
    """Embed a solution on a smaller latent grid by adding zero-weight points.

    The extra points carry weight 0, so the padded model predicts exactly
    the same table.
    """
    p, q, rho = _unpack(theta, old_size)
    out = _central_start(new_size)
    for block, values in enumerate((p[0], p[1], q[0], q[1])):
        out[block * new_size : block * new_size + old_size] = values
    raw = np.zeros(new_size)
    raw[:old_size] = rho
    out[4 * new_size :] = raw
    return out


def _level_sizes(grid_size: int) -> list[int]:
    sizes = []
    s = grid_size
    while True:
        sizes.append(s)
        if s <= 1:
            break
        s //= 2
    return sizes[::-1]


def m_separability_search(
    angles: tuple[DetectorAngle, DetectorAngle, DetectorAngle, DetectorAngle],
    grid_size: int = 16,
    restarts: int = 8,
    seed: int = 0,
    setting_pairs: tuple[tuple[int, int], ...] | None = None,
    restrict_outcome: tuple[int, int] | None = None,
) -> SeparabilityResult:
    """Search for a hidden-variable model minimizing the worst cell deviation.

    The target is the conditional table p(x, y | a_i, b_j) at the given
    orientations (a0, a1, b0, b1).  The search runs a coarse-to-fine cascade
    over latent grid sizes (doubling up to ``grid_size``); each level runs
    compass search from structured starts, ``restarts`` seeded random
    starts, and the previous level's best embedded with zero-weight padding,
    so enlarging the grid from k to 2k can never give a worse ``m_hat``.

    ``setting_pairs`` restricts the compared cells to a subset of the four
    columns; ``restrict_outcome`` restricts them to one (x, y) row.  By
    default every cell of every column counts.
    """
    angles = tuple(angles)
    if len(angles) != 4:
        raise ValueError(f"expected 4 angles (a0, a1, b0, b1), got {len(angles)}")
    if grid_size < 1:
        raise ValueError("grid_size must be at least 1")
    if restarts < 0:
        raise ValueError("restarts must be nonnegative")
    pairs = tuple(setting_pairs) if setting_pairs is not None else COLUMN_ORDER
    if not pairs:
        raise ValueError("setting_pairs must name at least one column")
    for pair in pairs:
        if pair not in COLUMN_ORDER:
            raise ValueError(f"unknown setting pair {pair!r}")
    if restrict_outcome is not None and restrict_outcome not in ROW_ORDER:
        raise ValueError(f"unknown outcome pair {restrict_outcome!r}")

    target = _conditional_target(angles)
    mask = np.zeros((4, 2, 2), dtype=bool)
    rows = range(4) if restrict_outcome is None else [ROW_ORDER.index(restrict_outcome)]
    for row in rows:
        for (i, j) in pairs:
            mask[row, i, j] = True

    a_settings = sorted({i for (i, _j) in pairs})
    mixture_weights = _solve_mixture_lp(target, mask)
    best_theta: np.ndarray | None = None
    best_value = math.inf

    for size in _level_sizes(grid_size):
        fn = lambda t: _objective(t, size, target, mask)  # noqa: E731
        starts: list[np.ndarray] = []
        if best_theta is not None:
            starts.append(_pad_start(best_theta, best_theta.shape[0] // 5, size))
        if mixture_weights is not None:
            packed = _mixture_start(size, mixture_weights)
            if packed is not None:
                starts.append(packed)
        starts.append(_product_start(size, target))
        starts.append(_central_start(size))
        if size >= 2:
            starts.extend(_two_point_start(size, target, i) for i in a_settings)
        for k in range(restarts):
            rng = np.random.default_rng(np.random.SeedSequence((seed, size, k)))
            starts.append(rng.random(5 * size))

        level_theta: np.ndarray | None = None
        level_value = math.inf
        for theta0 in starts:
            theta, value = _pattern_search(theta0, fn)
            if value < level_value:
                level_value = value
                level_theta = theta

        # normalize the weight block so zero-padding at the next level is exact
        p, q, rho = _unpack(level_theta, size)
        level_theta = level_theta.copy()
        level_theta[4 * size :] = rho
        best_theta = level_theta
        best_value = level_value

    size = grid_size
    p, q, rho = _unpack(best_theta, size)
    model = LHVModel(
        lambda_grid=(np.arange(size) + 0.5) / size,
        rho=rho,
        p_response=p,
        q_response=q,
    )
    pred = _predicted_table(rho, p, q)
    deviations = {
        (x, y, i, j): float(abs(pred[row, i, j] - target[row, i, j]))
        for row, (x, y) in enumerate(ROW_ORDER)
        for (i, j) in pairs
        if mask[row, i, j]
    }
    m_hat = max(deviations.values())
    return SeparabilityResult(m_hat=m_hat, model=model, per_setting_deviations=deviations)
