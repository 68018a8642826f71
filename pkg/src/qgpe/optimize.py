"""Dense BFGS minimizer with strong Wolfe line search and full iteration trace.

The objective callable returns (value, gradient) jointly so a circuit
forward/adjoint pair is never evaluated twice for the same point.  The
inverse Hessian is stored densely and updated with rank-2 outer products;
the default gradient tolerance of 1e-20 means runs are normally budget
limited (they stop at max_iters or when the line search cannot improve).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import line_search as _scipy_line_search

from .exceptions import ConfigurationError, SolverError

GRADIENT_TOL = "gradient_tol"
MAX_ITERS = "max_iters"
OBJECTIVE_CHANGE = "objective_change"
LINE_SEARCH_FAILURE = "line_search_failure"

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 100
    grad_tol: float = 1e-20
    c1: float = 1e-4              # sufficient decrease (Armijo)
    c2: float = 0.9               # curvature
    objective_change_tol: float = 0.0   # 0 disables

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 < self.c1 < self.c2 < 1.0:
            raise ConfigurationError(f"need 0 < c1 < c2 < 1, got c1={self.c1}, c2={self.c2}")


@dataclass
class OptimizeResult:
    theta: np.ndarray
    objective: float
    iterations: int                 # accepted steps
    termination: str
    objectives: np.ndarray          # accepted iterates incl. start, length iterations+1
    grad_norms: np.ndarray          # same length as objectives
    step_lengths: np.ndarray        # length iterations


def _check_finite(f: float, g: np.ndarray, where: str) -> None:
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise SolverError(f"non-finite objective or gradient at {where}: f={f}")


def _wolfe_line_search(objective, x, p, f0, g0, old_old_f, cfg):
    """Strong Wolfe step along p.  Returns (alpha, f_new, g_new) or (None,)*3."""
    evals: dict[bytes, tuple[float, np.ndarray]] = {}

    def point(xa):
        key = xa.tobytes()
        if key not in evals:
            evals[key] = objective(xa)
        return evals[key]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        alpha, _, _, f_new, _, _ = _scipy_line_search(
            lambda xa: point(xa)[0],
            lambda xa: point(xa)[1],
            x,
            p,
            gfk=g0,
            old_fval=f0,
            old_old_fval=old_old_f,
            c1=cfg.c1,
            c2=cfg.c2,
            maxiter=40,
        )
    if alpha is None or alpha <= 0.0:
        return None, None, None
    x_new = x + alpha * p
    f_new, g_new = point(x_new)
    return alpha, f_new, g_new


def minimize(
    objective: Objective,
    theta0,
    config: OptimizerConfig,
    callback: Callable[[int, np.ndarray, float, float], None] | None = None,
) -> OptimizeResult:
    """BFGS with identity initialization and strong Wolfe line search.

    ``callback(k, theta, f, grad_norm)`` fires on the start point (k=0) and
    after every accepted iterate.  Accepted objective values are strictly
    decreasing; on line-search failure the best (= last accepted) iterate
    is returned with the matching termination reason.
    """
    theta = np.ascontiguousarray(theta0, dtype=float).copy()
    f, g = objective(theta)
    _check_finite(f, g, "initial point")

    m = theta.size
    H = np.eye(m)
    objectives = [float(f)]
    grad_norms = [float(np.linalg.norm(g))]
    step_lengths: list[float] = []
    if callback is not None:
        callback(0, theta, float(f), grad_norms[0])

    termination = MAX_ITERS
    old_old_f = None
    for _ in range(config.max_iters):
        if np.linalg.norm(g) <= config.grad_tol:
            termination = GRADIENT_TOL
            break
        p = -H @ g
        if float(g @ p) >= 0.0:
            # numerically lost positive-definiteness: restart from identity
            H = np.eye(m)
            p = -g
            if float(g @ p) >= 0.0:
                termination = GRADIENT_TOL
                break
        alpha, f_new, g_new = _wolfe_line_search(objective, theta, p, f, g, old_old_f, config)
        if alpha is None:
            termination = LINE_SEARCH_FAILURE
            break
        _check_finite(f_new, g_new, f"iteration {len(step_lengths) + 1}")

        s = alpha * p
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-14 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            Hy = H @ y
            H -= rho * (np.outer(s, Hy) + np.outer(Hy, s))
            H += (rho * rho * float(y @ Hy) + rho) * np.outer(s, s)

        theta = theta + s
        old_old_f = f
        f_prev, f, g = f, f_new, g_new
        objectives.append(float(f))
        grad_norms.append(float(np.linalg.norm(g)))
        step_lengths.append(float(alpha))
        if callback is not None:
            callback(len(step_lengths), theta, float(f), grad_norms[-1])
        if config.objective_change_tol > 0.0 and abs(f_prev - f) <= config.objective_change_tol:
            termination = OBJECTIVE_CHANGE
            break

    return OptimizeResult(
        theta=theta,
        objective=float(f),
        iterations=len(step_lengths),
        termination=termination,
        objectives=np.asarray(objectives),
        grad_norms=np.asarray(grad_norms),
        step_lengths=np.asarray(step_lengths),
    )
