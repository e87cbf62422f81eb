"""Profile log-likelihood in the heritability and its Newton-Raphson maximizer.

With kinship eigenvalues lambda_i and rotated observations y_i, the
residual variance profiles out in closed form,

    sigma2(eta) = (1/n) sum_i y_i^2 / (eta (lambda_i - 1) + 1),

leaving the scalar objective

    L(eta) = -log sigma2(eta) - (1/n) sum_i log(eta (lambda_i - 1) + 1)

to maximize over eta in [0, 1 - delta]. First and second derivatives are
analytic; the solver runs plain Newton iterations from several starts,
clamps iterates into the search interval, applies the boundary reporting
rule, and verifies the selected maximizer against a coarse grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateDataError,
    NumericalFailureError,
    ShapeMismatchError,
    UnidentifiableModelError,
)

# Eigenvalue spreads below this are treated as "all lambda equal 1", where
# the objective is constant and eta is unidentifiable.
_FLAT_SPECTRUM_TOL = 1e-12


def _as_inputs(lambdas, y_rot) -> tuple[np.ndarray, np.ndarray]:
    lam = np.asarray(lambdas, dtype=np.float64)
    y = np.asarray(y_rot, dtype=np.float64)
    if lam.ndim != 1 or y.ndim != 1 or lam.size != y.size:
        raise ShapeMismatchError(
            f"eigenvalues ({lam.shape}) and rotated observations ({y.shape}) disagree"
        )
    return lam, y


def _denominators(eta: float, lam: np.ndarray) -> np.ndarray:
    # eta (lambda - 1) + 1 >= min(1 - eta, 1) > 0 for lambda >= 0, eta < 1.
    if not 0.0 <= eta < 1.0:
        raise ConfigurationError(f"eta must be in [0, 1), got {eta}")
    d = eta * (lam - 1.0) + 1.0
    if d.size and d.min() <= 0.0:
        raise NumericalFailureError(
            f"non-positive denominator at eta={eta}: min eigenvalue {lam.min()}"
        )
    return d


def g(eta: float, lam):
    """Eigenvalue sensitivity kernel (lam - 1) / (eta (lam - 1) + 1).

    This is d/d_eta log(eta (lam - 1) + 1); its empirical variance over the
    spectrum drives every standard-error formula in the package.
    """
    lam = np.asarray(lam, dtype=np.float64)
    d = _denominators(float(eta), np.atleast_1d(lam))
    result = (np.atleast_1d(lam) - 1.0) / d
    return float(result[0]) if lam.ndim == 0 else result


def profile_sigma2(eta: float, lambdas, y_rot) -> float:
    """Closed-form residual-variance profile at a given heritability."""
    lam, y = _as_inputs(lambdas, y_rot)
    if not np.any(y != 0.0):
        raise DegenerateDataError("rotated observations are identically zero")
    d = _denominators(float(eta), lam)
    return float(np.mean(y**2 / d))


def loglik(eta: float, lambdas, y_rot) -> float:
    """Profile log-likelihood (up to constants) at eta."""
    lam, y = _as_inputs(lambdas, y_rot)
    if not np.any(y != 0.0):
        raise DegenerateDataError("rotated observations are identically zero")
    d = _denominators(float(eta), lam)
    return float(-np.log(np.mean(y**2 / d)) - np.mean(np.log(d)))


def loglik_grid(etas: np.ndarray, lambdas, y_rot) -> np.ndarray:
    """Vectorized profile log-likelihood over a grid of eta values."""
    lam, y = _as_inputs(lambdas, y_rot)
    if not np.any(y != 0.0):
        raise DegenerateDataError("rotated observations are identically zero")
    etas = np.asarray(etas, dtype=np.float64)
    if etas.size and not ((etas >= 0.0) & (etas < 1.0)).all():
        raise ConfigurationError("grid values must lie in [0, 1)")
    d = etas[:, None] * (lam - 1.0) + 1.0
    if d.size and d.min() <= 0.0:
        raise NumericalFailureError("non-positive denominator on the evaluation grid")
    y2 = y**2
    return -np.log(np.mean(y2 / d, axis=1)) - np.mean(np.log(d), axis=1)


def dloglik(eta: float, lambdas, y_rot) -> float:
    """Analytic first derivative of the profile log-likelihood."""
    lam, y = _as_inputs(lambdas, y_rot)
    if not np.any(y != 0.0):
        raise DegenerateDataError("rotated observations are identically zero")
    d = _denominators(float(eta), lam)
    y2 = y**2
    s0 = np.mean(y2 / d)
    s1 = np.mean(y2 * (lam - 1.0) / d**2)
    return float(s1 / s0 - np.mean((lam - 1.0) / d))


def d2loglik(eta: float, lambdas, y_rot) -> float:
    """Analytic second derivative of the profile log-likelihood."""
    lam, y = _as_inputs(lambdas, y_rot)
    if not np.any(y != 0.0):
        raise DegenerateDataError("rotated observations are identically zero")
    d = _denominators(float(eta), lam)
    y2 = y**2
    s0 = np.mean(y2 / d)
    s1 = np.mean(y2 * (lam - 1.0) / d**2)
    s2 = np.mean(y2 * (lam - 1.0) ** 2 / d**3)
    return float(-2.0 * s2 / s0 + (s1 / s0) ** 2 + np.mean((lam - 1.0) ** 2 / d**2))


@dataclass(frozen=True)
class SolverConfig:
    """Newton solver settings.

    ``delta`` bounds the search interval [0, 1 - delta]; ``inits`` are the
    multi-start initializations; iteration stops when the Newton step drops
    below ``tol`` or after ``max_iter`` steps. Runs pinned at the upper
    boundary report ``clamp_value`` instead of the boundary itself.
    """

    delta: float = 0.01
    inits: tuple[float, ...] = (0.1, 0.5, 0.9)
    max_iter: int = 20
    tol: float = 1e-8
    clamp_value: float = 0.99
    verify_grid_step: float = 1e-3
    verify_tol: float = 1e-6

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ConfigurationError(f"delta must be in (0, 0.5), got {self.delta}")
        upper = 1.0 - self.delta
        if not self.inits:
            raise ConfigurationError("at least one initialization is required")
        for e0 in self.inits:
            if not 0.0 < e0 < upper:
                raise ConfigurationError(
                    f"initialization {e0} outside the open interval (0, {upper})"
                )
        if self.max_iter < 1:
            raise ConfigurationError("max_iter must be >= 1")
        if not self.tol > 0.0:
            raise ConfigurationError("tol must be positive")

    @property
    def upper(self) -> float:
        return 1.0 - self.delta


@dataclass
class SolverResult:
    """Outcome of a multi-start Newton maximization."""

    eta_hat: float
    sigma2_hat: float
    iterations_per_start: tuple[int, ...]
    converged: tuple[bool, ...]
    chosen_start: int
    clamped: bool

    def summary(self) -> dict:
        return {
            "eta_hat": self.eta_hat,
            "sigma2_hat": self.sigma2_hat,
            "iterations_per_start": list(self.iterations_per_start),
            "converged": list(self.converged),
            "chosen_start": self.chosen_start,
            "clamped": self.clamped,
        }


def _eta_grid(upper: float, step: float) -> np.ndarray:
    count = int(np.floor(upper / step + 1e-9))
    grid = np.linspace(0.0, count * step, count + 1)
    if upper - grid[-1] > 1e-12:
        grid = np.append(grid, upper)
    return grid


def _check_identifiable(lam: np.ndarray) -> None:
    if np.all(np.abs(lam - 1.0) < _FLAT_SPECTRUM_TOL):
        raise UnidentifiableModelError(
            "all kinship eigenvalues equal 1: the likelihood is constant in eta"
        )


def newton_estimate(lambdas, y_rot, cfg: SolverConfig | None = None) -> SolverResult:
    """Maximize the profile log-likelihood by multi-start Newton-Raphson.

    Each start iterates eta <- eta - L'(eta)/L''(eta) with iterates clamped
    into [0, 1 - delta], stopping on a small step or after ``max_iter``
    iterations. A run pinned at the upper boundary reports
    ``cfg.clamp_value`` with ``clamped=True``. When starts disagree, the
    candidate farthest from the boundaries (largest min(eta, clamp - eta))
    wins; ties break on higher log-likelihood, then lower start index.
    The winner is verified against a coarse grid and replaced by the grid
    argmax if it is not within ``verify_tol`` of the grid maximum.
    """
    cfg = cfg or SolverConfig()
    lam, y = _as_inputs(lambdas, y_rot)
    _check_identifiable(lam)
    if not np.any(y != 0.0):
        raise DegenerateDataError("rotated observations are identically zero")

    upper = cfg.upper
    boundary_tol = 1e-12

    def _newton_run(eta0: float) -> tuple[float, int, bool]:
        eta = float(eta0)
        steps = 0
        for _ in range(cfg.max_iter):
            d2 = d2loglik(eta, lam, y)
            if not np.isfinite(d2) or d2 == 0.0:
                return eta, steps, False
            step = dloglik(eta, lam, y) / d2
            if not np.isfinite(step):
                return eta, steps, False
            new = float(np.clip(eta - step, 0.0, upper))
            steps += 1
            if abs(new - eta) < cfg.tol:
                return new, steps, True
            eta = new
        return eta, steps, False

    candidates: list[float] = []
    iterations: list[int] = []
    converged: list[bool] = []
    for eta0 in cfg.inits:
        eta, steps, ok = _newton_run(eta0)
        candidates.append(eta)
        iterations.append(steps)
        converged.append(ok)

    # Boundary-pinned runs report the clamp value.
    run_clamped = [eta >= upper - boundary_tol for eta in candidates]
    reported = [
        cfg.clamp_value if clamped else eta
        for eta, clamped in zip(candidates, run_clamped)
    ]

    objective = []
    for eta in reported:
        try:
            objective.append(loglik(min(eta, 1.0 - 1e-12), lam, y))
        except (NumericalFailureError, ConfigurationError):
            objective.append(-np.inf)
    if not np.isfinite(objective).any():
        raise NumericalFailureError("no start produced a finite log-likelihood")

    order = sorted(
        range(len(reported)),
        key=lambda s: (
            min(reported[s], cfg.clamp_value - reported[s]),
            objective[s],
            -s,
        ),
    )
    chosen = order[-1]
    eta_hat = reported[chosen]
    clamped = run_clamped[chosen]

    # Post-hoc verification: the return may not sit measurably below the
    # likelihood anywhere on a coarse grid. On failure, restart Newton from
    # the grid argmax and keep whichever of the two scores higher.
    grid = _eta_grid(upper, cfg.verify_grid_step)
    grid_values = loglik_grid(grid, lam, y)
    best_grid = int(np.argmax(grid_values))
    if loglik(min(eta_hat, 1.0 - 1e-12), lam, y) < grid_values[best_grid] - cfg.verify_tol:
        eta_hat = float(grid[best_grid])
        polished, _, _ = _newton_run(eta_hat)
        if loglik(polished, lam, y) >= grid_values[best_grid]:
            eta_hat = polished
        clamped = eta_hat >= upper - boundary_tol
        if clamped:
            eta_hat = cfg.clamp_value
        chosen = -1

    return SolverResult(
        eta_hat=eta_hat,
        sigma2_hat=profile_sigma2(min(eta_hat, 1.0 - 1e-12), lam, y),
        iterations_per_start=tuple(iterations),
        converged=tuple(converged),
        chosen_start=chosen,
        clamped=bool(clamped),
    )


def grid_oracle(lambdas, y_rot, grid_step: float, delta: float = 0.01) -> float:
    """Brute-force argmax of the profile log-likelihood over a uniform grid.

    Ties resolve to the lowest eta. Deliberately independent of the Newton
    path so the two can cross-validate each other.
    """
    if not 0.0 < grid_step <= 0.01:
        raise ConfigurationError(f"grid_step must be in (0, 0.01], got {grid_step}")
    if not 0.0 < delta < 0.5:
        raise ConfigurationError(f"delta must be in (0, 0.5), got {delta}")
    lam, y = _as_inputs(lambdas, y_rot)
    grid = _eta_grid(1.0 - delta, grid_step)
    values = loglik_grid(grid, lam, y)
    return float(grid[int(np.argmax(values))])
