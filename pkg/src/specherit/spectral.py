"""Design standardization, kinship spectrum, and Marchenko-Pastur utilities.

The estimator consumes only the eigenvalues of the kinship matrix
R = Z Z' / N together with the rotated observations U'Y, so the heavy
objects (eigenvectors) are retained only on request.

The reference spectral law is the Marchenko-Pastur distribution with
aspect ratio a = n/N: an absolutely continuous part on
[(1-sqrt(a))^2, (1+sqrt(a))^2] plus, when a > 1, an atom of mass 1 - 1/a
at zero. Integrals against the continuous part use the substitution

    lambda(theta) = 1 + a - 2 sqrt(a) cos(theta),  theta in [0, pi],

under which the density becomes (2/pi) sin(theta)^2 / lambda(theta):
both square-root edge singularities disappear and fixed-order
Gauss-Legendre quadrature converges spectrally for smooth integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ConfigurationError,
    MonomorphicColumnError,
    NumericalFailureError,
    RankDeficientCovariatesError,
    ShapeMismatchError,
)

# Tiny negative eigenvalues from round-off are clamped to zero; R is PSD
# by construction so anything below -EIGENVALUE_CLAMP_TOL is left alone
# for the caller to notice.
EIGENVALUE_CLAMP_TOL = 1e-8

DEFAULT_QUADRATURE_ORDER = 512


@dataclass
class StandardizedDesign:
    """n x N design whose columns are empirically centered and scaled.

    Column j of Z is (W_j - mean(W_j)) / s_j with s_j the divide-by-n
    empirical standard deviation, so each column sums to 0 and its squared
    entries sum to n. ``dropped`` lists original column indices removed
    under the ``drop`` monomorphic-column policy.
    """

    Z: np.ndarray
    dropped: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def N(self) -> int:
        return self.Z.shape[1]


@dataclass
class SpectralDecomposition:
    """Kinship eigenvalues (descending), rotated observations, and a = n/N."""

    lambdas: np.ndarray
    y_rot: np.ndarray
    a: float
    eigvecs: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.lambdas.size


def standardize(W, policy: str = "error") -> StandardizedDesign:
    """Center and scale genotype columns to zero mean and unit empirical variance.

    Args:
        W: GenotypeMatrix or plain 2-D array of raw column data.
        policy: what to do with zero-variance (monomorphic) columns:
            ``"error"`` raises :class:`MonomorphicColumnError` listing them,
            ``"drop"`` removes them and records their indices.

    Returns:
        StandardizedDesign with column sums 0 and squared column sums n.
    """
    if policy not in ("error", "drop"):
        raise ConfigurationError(f"policy must be 'error' or 'drop', got {policy!r}")
    Wm = np.asarray(getattr(W, "entries", W), dtype=np.float64)
    if Wm.ndim != 2:
        raise ShapeMismatchError("design matrix must be 2-D")
    n = Wm.shape[0]
    if n < 2:
        raise ConfigurationError(f"standardization needs n >= 2 rows, got {n}")
    mean = Wm.mean(axis=0)
    centered = Wm - mean
    s = np.sqrt(np.mean(centered**2, axis=0))
    monomorphic = np.flatnonzero(s == 0.0)
    dropped: tuple[int, ...] = ()
    if monomorphic.size:
        if policy == "error":
            raise MonomorphicColumnError(monomorphic)
        keep = s > 0.0
        centered = centered[:, keep]
        s = s[keep]
        dropped = tuple(int(j) for j in monomorphic)
    return StandardizedDesign(Z=centered / s, dropped=dropped)


def residualize(Y: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Project Y onto the orthogonal complement of the column space of X.

    Raises RankDeficientCovariatesError when X is column-rank deficient.
    """
    Y = np.asarray(Y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if Y.ndim != 1 or X.ndim != 2 or X.shape[0] != Y.size:
        raise ShapeMismatchError(
            f"covariates {X.shape} do not align with phenotype of length {Y.size}"
        )
    n, p = X.shape
    if p >= n:
        raise ConfigurationError(f"need p < n covariates, got p={p}, n={n}")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    tol = max(n, p) * np.finfo(np.float64).eps * (diag.max() if diag.size else 0.0)
    if diag.size == 0 or (diag <= tol).any():
        raise RankDeficientCovariatesError(
            f"covariate matrix has column rank < {p} (tolerance {tol:.3e})"
        )
    return Y - Q @ (Q.T @ Y)


def kinship(Z) -> np.ndarray:
    """Kinship matrix R = Z Z' / N, symmetrized against round-off."""
    Zm = np.asarray(getattr(Z, "Z", Z), dtype=np.float64)
    if Zm.ndim != 2:
        raise ShapeMismatchError("design matrix must be 2-D")
    R = Zm @ Zm.T / Zm.shape[1]
    return (R + R.T) / 2.0


def eigendecompose(R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending, tiny negatives clamped to 0) and eigenvectors.

    Columns of the returned U are the eigenvectors of the corresponding
    eigenvalues, so U diag(lambda) U' reconstructs R.
    """
    R = np.asarray(R, dtype=np.float64)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got {R.shape}")
    if not np.allclose(R, R.T, rtol=0.0, atol=1e-10):
        raise ShapeMismatchError("matrix is not symmetric within 1e-10")
    try:
        lam, U = np.linalg.eigh(R)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    lam = lam[::-1].copy()
    U = U[:, ::-1].copy()
    small_negative = (lam < 0.0) & (lam >= -EIGENVALUE_CLAMP_TOL)
    lam[small_negative] = 0.0
    return lam, U


def rotate(U: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Rotate observations into the eigenbasis: returns U'Y."""
    U = np.asarray(U, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if U.ndim != 2 or Y.ndim != 1 or U.shape[0] != Y.size:
        raise ShapeMismatchError(f"cannot rotate length-{Y.size} vector by {U.shape}")
    return U.T @ Y


def decompose(Z, Y: np.ndarray, keep_eigvecs: bool = False) -> SpectralDecomposition:
    """Full spectral pipeline: kinship, eigendecomposition, rotation."""
    Zm = np.asarray(getattr(Z, "Z", Z), dtype=np.float64)
    lam, U = eigendecompose(kinship(Zm))
    y_rot = rotate(U, Y)
    return SpectralDecomposition(
        lambdas=lam,
        y_rot=y_rot,
        a=Zm.shape[0] / Zm.shape[1],
        eigvecs=U if keep_eigvecs else None,
    )


def esd(lambdas: np.ndarray, x) -> float | np.ndarray:
    """Empirical spectral distribution: fraction of eigenvalues <= x."""
    lam = np.sort(np.asarray(lambdas, dtype=np.float64))
    xs = np.asarray(x, dtype=np.float64)
    values = np.searchsorted(lam, xs, side="right") / max(lam.size, 1)
    return float(values) if np.isscalar(x) else values


@dataclass(frozen=True)
class MPLaw:
    """Marchenko-Pastur law with aspect ratio a > 0.

    Support of the continuous part is [a_minus, a_plus] = (1 -+ sqrt(a))^2;
    for a > 1 an atom of mass 1 - 1/a sits at zero.
    """

    a: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ConfigurationError(f"aspect ratio must be positive, got {self.a}")

    @property
    def a_minus(self) -> float:
        return (1.0 - np.sqrt(self.a)) ** 2

    @property
    def a_plus(self) -> float:
        return (1.0 + np.sqrt(self.a)) ** 2

    @property
    def mass_at_zero(self) -> float:
        return max(0.0, 1.0 - 1.0 / self.a)


@lru_cache(maxsize=8)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _theta_nodes(order: int, upper: float) -> tuple[np.ndarray, np.ndarray]:
    # Gauss-Legendre nodes mapped onto [0, upper] in the theta variable.
    x, w = _gauss_legendre(order)
    return 0.5 * upper * (x + 1.0), 0.5 * upper * w


def _bulk_quadrature(a: float, upper: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    theta, wt = _theta_nodes(order, upper)
    lam = 1.0 + a - 2.0 * np.sqrt(a) * np.cos(theta)
    density = (2.0 / np.pi) * np.sin(theta) ** 2 / lam
    return lam, density * wt


def mp_integrate(law: MPLaw, f, order: int = DEFAULT_QUADRATURE_ORDER) -> float:
    """Integrate f against the Marchenko-Pastur law.

    ``f`` is evaluated on an ndarray of quadrature nodes inside the bulk
    support (it must broadcast) and, when the law has an atom at zero, once
    at 0.0. Absolute accuracy is ~1e-9 or better for smooth integrands at
    the default order; step discontinuities inside the support are only
    resolved to O(1/order).
    """
    lam, weights = _bulk_quadrature(law.a, np.pi, order)
    values = np.asarray(f(lam), dtype=np.float64)
    atom = law.mass_at_zero
    atom_term = atom * float(f(np.float64(0.0))) if atom > 0.0 else 0.0
    total = float(np.dot(values, weights)) + atom_term
    if not np.isfinite(total):
        raise NumericalFailureError("integrand produced non-finite values")
    return total


def mp_cdf(law: MPLaw, x, order: int = DEFAULT_QUADRATURE_ORDER) -> float | np.ndarray:
    """Marchenko-Pastur distribution function at x.

    Computed as mass_at_zero * 1{x >= 0} plus the bulk integral up to x,
    evaluated by Gauss-Legendre on the theta interval [0, theta_x], which
    keeps the integrand smooth for every x.
    """
    scalar = np.isscalar(x)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty(xs.shape, dtype=np.float64)
    sqrt_a = np.sqrt(law.a)
    for i, xi in enumerate(xs.ravel()):
        if xi < 0.0:
            out.ravel()[i] = 0.0
        elif xi >= law.a_plus:
            out.ravel()[i] = 1.0
        elif xi <= law.a_minus:
            out.ravel()[i] = law.mass_at_zero
        else:
            cos_theta = (1.0 + law.a - xi) / (2.0 * sqrt_a)
            theta_x = float(np.arccos(np.clip(cos_theta, -1.0, 1.0)))
            _, weights = _bulk_quadrature(law.a, theta_x, order)
            out.ravel()[i] = law.mass_at_zero + float(weights.sum())
    if not np.isfinite(out).all():
        raise NumericalFailureError("CDF quadrature produced non-finite values")
    return float(out[0]) if scalar else out
