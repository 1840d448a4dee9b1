"""
Benchmark constraint suites behind a uniform expensive-evaluation interface.

The CEC2006 problems keep only their inequality constraints in g(x) <= 0 form;
objectives are not part of feasibility search. ``demo1d`` is the two-sine
problem used for the interval demo.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core.model import Array
from .core.ports import ConstraintFunction
from .core.utils import as_points, check_bounds, make_rng
from .errors import BudgetError, InputError

logger = logging.getLogger(__name__)

MIN_RHO_SAMPLES = 10_000
_RHO_CHUNK = 100_000


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    thresholds: tuple[float, ...]
    reference_rho: float
    constraints: ConstraintFunction = field(repr=False, compare=False)
    description: str = ""

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def num_constraints(self) -> int:
        return len(self.thresholds)

    @property
    def bounds(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        return self.lower, self.upper

    def box(self) -> tuple[np.ndarray, np.ndarray]:
        return check_bounds(np.asarray(self.lower), np.asarray(self.upper))


@dataclass
class EvaluationLedger:
    """Counter and call log of expensive evaluations for one run."""

    cap: int | None = None
    log: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    @property
    def calls(self) -> int:
        return len(self.log)


def _g4(x: Array) -> Array:
    x1, x2, x3, x4, x5 = x.T
    u = 85.334407 + 0.0056858 * x2 * x5 + 0.0006262 * x1 * x4 - 0.0022053 * x3 * x5
    v = 80.51249 + 0.0071317 * x2 * x5 + 0.0029955 * x1 * x2 + 0.0021813 * x3**2
    w = 9.300961 + 0.0047026 * x3 * x5 + 0.0012547 * x1 * x3 + 0.0019085 * x3 * x4
    return np.stack([u - 92.0, -u, v - 110.0, 90.0 - v, w - 25.0, 20.0 - w], axis=1)


def _g8(x: Array) -> Array:
    x1, x2 = x.T
    return np.stack([x1**2 - x2 + 1.0, 1.0 - x1 + (x2 - 4.0) ** 2], axis=1)


def _g9(x: Array) -> Array:
    x1, x2, x3, x4, x5, x6, x7 = x.T
    return np.stack(
        [
            2 * x1**2 + 3 * x2**4 + x3 + 4 * x4**2 + 5 * x5 - 127.0,
            7 * x1 + 3 * x2 + 10 * x3**2 + x4 - x5 - 282.0,
            23 * x1 + x2**2 + 6 * x6**2 - 8 * x7 - 196.0,
            4 * x1**2 + x2**2 - 3 * x1 * x2 + 2 * x3**2 + 5 * x6 - 11 * x7,
        ],
        axis=1,
    )


_G19_E = np.array([-15.0, -27.0, -36.0, -18.0, -12.0])
_G19_C = np.array(
    [
        [30.0, -20.0, -10.0, 32.0, -10.0],
        [-20.0, 39.0, -6.0, -31.0, 32.0],
        [-10.0, -6.0, 10.0, -6.0, -10.0],
        [32.0, -31.0, -6.0, 39.0, -20.0],
        [-10.0, 32.0, -10.0, -20.0, 30.0],
    ]
)
_G19_D = np.array([4.0, 8.0, 10.0, 6.0, 2.0])
_G19_A = np.array(
    [
        [-16.0, 2.0, 0.0, 1.0, 0.0],
        [0.0, -2.0, 0.0, 0.4, 2.0],
        [-3.5, 0.0, 2.0, 0.0, 0.0],
        [0.0, -2.0, 0.0, -4.0, -1.0],
        [0.0, -9.0, -2.0, 1.0, -2.8],
        [2.0, 0.0, -4.0, 0.0, 0.0],
        [-1.0, -1.0, -1.0, -1.0, -1.0],
        [-1.0, -2.0, -3.0, -2.0, -1.0],
        [1.0, 2.0, 3.0, 4.0, 5.0],
        [1.0, 1.0, 1.0, 1.0, 1.0],
    ]
)


def _g19(x: Array) -> Array:
    head, tail = x[:, :10], x[:, 10:]
    return -2.0 * tail @ _G19_C - 3.0 * _G19_D * tail**2 - _G19_E + head @ _G19_A


def _g24(x: Array) -> Array:
    x1, x2 = x.T
    return np.stack(
        [
            -2 * x1**4 + 8 * x1**3 - 8 * x1**2 + x2 - 2.0,
            -4 * x1**4 + 32 * x1**3 - 88 * x1**2 + 96 * x1 + x2 - 36.0,
        ],
        axis=1,
    )


def _demo1d(x: Array) -> Array:
    return np.stack([np.sin(x[:, 0]), 2.0 * np.sin(x[:, 0] - 1.0)], axis=1)


DEMO_THRESHOLDS = (0.05, 1.5)


def demo1d_boundaries() -> tuple[float, float]:
    """Edges of the demo feasible set [0, a] U [b, 2 pi]."""
    a = float(np.arcsin(DEMO_THRESHOLDS[0]))
    b = float(1.0 + np.pi - np.arcsin(DEMO_THRESHOLDS[1] / 2.0))
    return a, b


def _demo1d_rho() -> float:
    a, b = demo1d_boundaries()
    return 100.0 * (a + 2.0 * np.pi - b) / (2.0 * np.pi)


PROBLEMS: dict[str, ProblemSpec] = {
    "g4": ProblemSpec(
        id="g4",
        lower=(78.0, 33.0, 27.0, 27.0, 27.0),
        upper=(102.0, 45.0, 45.0, 45.0, 45.0),
        thresholds=(0.0,) * 6,
        reference_rho=26.9953,
        constraints=_g4,
        description="CEC2006 G04, 5 variables, 6 nonlinear inequalities",
    ),
    "g8": ProblemSpec(
        id="g8",
        lower=(0.0, 0.0),
        upper=(10.0, 10.0),
        thresholds=(0.0, 0.0),
        reference_rho=0.8727,
        constraints=_g8,
        description="CEC2006 G08, 2 variables, 2 nonlinear inequalities",
    ),
    "g9": ProblemSpec(
        id="g9",
        lower=(-10.0,) * 7,
        upper=(10.0,) * 7,
        thresholds=(0.0,) * 4,
        reference_rho=0.5218,
        constraints=_g9,
        description="CEC2006 G09, 7 variables, 4 nonlinear inequalities",
    ),
    "g19": ProblemSpec(
        id="g19",
        lower=(0.0,) * 15,
        upper=(10.0,) * 15,
        thresholds=(0.0,) * 5,
        reference_rho=33.4856,
        constraints=_g19,
        description="CEC2006 G19, 15 variables, 5 nonlinear inequalities",
    ),
    "g24": ProblemSpec(
        id="g24",
        lower=(0.0, 0.0),
        upper=(3.0, 4.0),
        thresholds=(0.0, 0.0),
        reference_rho=44.2294,
        constraints=_g24,
        description="CEC2006 G24, 2 variables, 2 nonlinear inequalities",
    ),
    "demo1d": ProblemSpec(
        id="demo1d",
        lower=(0.0,),
        upper=(2.0 * np.pi,),
        thresholds=DEMO_THRESHOLDS,
        reference_rho=_demo1d_rho(),
        constraints=_demo1d,
        description="sin(x) <= 0.05 and 2 sin(x - 1) <= 1.5 on [0, 2 pi]",
    ),
}


def get_problem(problem_id: str) -> ProblemSpec:
    try:
        return PROBLEMS[problem_id]
    except KeyError:
        known = ", ".join(PROBLEMS)
        raise InputError(f"Unknown problem '{problem_id}' (known: {known})") from None


def _in_box(spec: ProblemSpec, points: np.ndarray) -> np.ndarray:
    lo, hi = spec.box()
    return np.all((points >= lo) & (points <= hi), axis=1)


def _checked_points(spec: ProblemSpec, x: np.ndarray) -> tuple[np.ndarray, bool]:
    points, single = as_points(x, spec.dimension)
    if not np.all(_in_box(spec, points)):
        raise InputError(f"Point outside the bounds of {spec.id}")
    return points, single


def evaluate_constraints(
    spec: ProblemSpec, x: np.ndarray, ledger: EvaluationLedger | None = None
) -> np.ndarray:
    """
    Expensive evaluation of G(x) for one in-bounds design vector.

    Each call is appended to ``ledger``; a capped ledger refuses calls past its cap.
    """
    points, _ = _checked_points(spec, x)
    if points.shape[0] != 1:
        raise InputError("evaluate_constraints takes a single design vector")
    if ledger is not None and ledger.cap is not None and ledger.calls >= ledger.cap:
        raise BudgetError(f"Evaluation budget of {ledger.cap} exhausted on {spec.id}")
    values = np.asarray(spec.constraints(points), dtype=float)[0]
    if ledger is not None:
        ledger.log.append((points[0].copy(), values.copy()))
    return values


def true_labels(spec: ProblemSpec, points: np.ndarray) -> np.ndarray:
    """Ground-truth feasibility of each row (all g_l <= t_l, inclusive)."""
    values = spec.constraints(np.atleast_2d(points))
    return np.all(values <= np.asarray(spec.thresholds), axis=1)


def true_feasible(spec: ProblemSpec, x: np.ndarray) -> bool | np.ndarray:
    points, single = _checked_points(spec, x)
    labels = true_labels(spec, points)
    return bool(labels[0]) if single else labels


def monte_carlo_rho(spec: ProblemSpec, samples: int, seed: int) -> float:
    """Percentage of uniform samples over the box that are feasible."""
    if samples < MIN_RHO_SAMPLES:
        raise InputError(f"monte_carlo_rho needs at least {MIN_RHO_SAMPLES} samples")
    rng = make_rng(seed)
    lo, hi = spec.box()
    feasible = 0
    remaining = samples
    while remaining > 0:
        chunk = min(remaining, _RHO_CHUNK)
        points = rng.uniform(lo, hi, size=(chunk, spec.dimension))
        feasible += int(np.count_nonzero(true_labels(spec, points)))
        remaining -= chunk
    return 100.0 * feasible / samples


def binomial_standard_error(rho: float, samples: int) -> float:
    """
    Standard error of a Monte Carlo volume estimate, in percentage points.

    Examples:
        >>> round(binomial_standard_error(50.0, 10_000), 6)
        0.5
    """
    p = rho / 100.0
    return 100.0 * float(np.sqrt(p * (1.0 - p) / samples))
