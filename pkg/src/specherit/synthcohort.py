"""Synthetic genotype/phenotype cohorts with deterministic seeding.

Cohorts follow the generative model used throughout the package: a raw
genotype matrix of Binomial(2, p_j) allele counts (or an i.i.d. Gaussian
design), a sparse effect vector whose components are Bernoulli(q)-gated
Gaussians, and a phenotype Y = Z u + e.

Reproducibility contract: every random draw flows through a NumPy PCG64
generator seeded by ``replicate_rng(master_seed, replicate_index)``, so
replicate streams are independent of each other and of scheduling order.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError, ShapeMismatchError


def replicate_rng(seed: int, replicate: int = 0) -> np.random.Generator:
    """Derive the PCG64 stream for one replicate of a seeded study.

    Streams for distinct ``replicate`` indices are statistically
    independent and can be generated in any order, which makes replicate
    loops safely parallel.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replicate),))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of one synthetic cohort.

    ``eta_star`` is the heritability, ``sigma_star2`` the total variance,
    ``q`` the proportion of non-null random effects. Allele frequencies
    are drawn uniformly on [freq_lo, freq_hi].
    """

    n: int
    N: int
    eta_star: float
    q: float = 1.0
    sigma_star2: float = 1.0
    freq_lo: float = 0.1
    freq_hi: float = 0.5
    seed: int = 0
    replicates: int = 1

    def __post_init__(self):
        if self.n < 2 or self.N < 1:
            raise ConfigurationError(f"need n >= 2 and N >= 1, got n={self.n}, N={self.N}")
        if not 0.0 < self.q <= 1.0:
            raise ConfigurationError(f"q must be in (0, 1], got {self.q}")
        if not 0.0 <= self.eta_star < 1.0:
            raise ConfigurationError(f"eta_star must be in [0, 1), got {self.eta_star}")
        if not self.sigma_star2 > 0.0:
            raise ConfigurationError(f"sigma_star2 must be positive, got {self.sigma_star2}")
        if not 0.0 < self.freq_lo <= self.freq_hi < 1.0:
            raise ConfigurationError(
                f"need 0 < freq_lo <= freq_hi < 1, got [{self.freq_lo}, {self.freq_hi}]"
            )
        if self.replicates < 1:
            raise ConfigurationError(f"replicates must be >= 1, got {self.replicates}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SimulationConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"invalid simulation config JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigurationError("simulation config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known
        if extra:
            raise ConfigurationError(f"unknown simulation config fields: {sorted(extra)}")
        if "n" not in doc or "N" not in doc or "eta_star" not in doc:
            raise ConfigurationError("simulation config requires at least n, N, eta_star")
        return cls(**doc)


@dataclass
class GenotypeMatrix:
    """Raw n x N allele-count matrix with entries in {0, 1, 2}.

    Allele frequencies used to generate the matrix are kept alongside as
    metadata when available.
    """

    entries: np.ndarray
    freqs: np.ndarray | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries)
        if self.entries.ndim != 2:
            raise ShapeMismatchError("genotype matrix must be 2-D")
        if self.entries.shape[0] < 2 or self.entries.shape[1] < 1:
            raise ConfigurationError(
                f"need n >= 2 individuals and N >= 1 markers, got shape {self.entries.shape}"
            )
        if not np.isin(self.entries, (0, 1, 2)).all():
            raise ConfigurationError("genotype entries must all be in {0, 1, 2}")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]


@dataclass
class EffectVector:
    """Sparse random-effect vector: u_i = support_i * Normal(0, sigma_u2)."""

    u: np.ndarray
    support: np.ndarray
    sigma_u2: float

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.float64)
        self.support = np.asarray(self.support, dtype=bool)
        if self.u.shape != self.support.shape:
            raise ShapeMismatchError("u and support must have the same length")
        if np.any(self.u[~self.support] != 0.0):
            raise ConfigurationError("u must vanish off the support")


def sample_allele_frequencies(
    N: int, lo: float, hi: float, rng: np.random.Generator
) -> np.ndarray:
    """Draw N i.i.d. allele frequencies uniformly on [lo, hi]."""
    if not 0.0 < lo <= hi < 1.0:
        raise ConfigurationError(f"need 0 < lo <= hi < 1, got [{lo}, {hi}]")
    return rng.uniform(lo, hi, size=int(N))


def sample_genotypes(n: int, freqs: np.ndarray, rng: np.random.Generator) -> GenotypeMatrix:
    """Sample allele counts: entry (i, j) ~ Binomial(2, p_j).

    The two binomial trials are realized as two explicit Bernoulli draws
    per entry; rows are i.i.d. and columns independent.
    """
    freqs = np.asarray(freqs, dtype=np.float64)
    if freqs.ndim != 1:
        raise ConfigurationError("freqs must be a 1-D vector")
    if freqs.size and not ((freqs > 0.0) & (freqs < 1.0)).all():
        raise ConfigurationError("allele frequencies must lie strictly inside (0, 1)")
    n = int(n)
    first = rng.random((n, freqs.size)) < freqs
    second = rng.random((n, freqs.size)) < freqs
    entries = first.astype(np.int8) + second.astype(np.int8)
    return GenotypeMatrix(entries=entries, freqs=freqs)


def effect_scale(eta_star: float, sigma_star2: float, q: float, N: int) -> tuple[float, float]:
    """Split (eta_star, sigma_star2) into per-component variances.

    Returns (sigma_u2, sigma_e2) with sigma_u2 = eta_star*sigma_star2/(N q)
    and sigma_e2 = (1 - eta_star)*sigma_star2, so that the heritability
    ratio N q sigma_u2 / (N q sigma_u2 + sigma_e2) recovers eta_star exactly.
    """
    if not 0.0 <= eta_star < 1.0:
        raise ConfigurationError(f"eta_star must be in [0, 1), got {eta_star}")
    if not sigma_star2 > 0.0:
        raise ConfigurationError(f"sigma_star2 must be positive, got {sigma_star2}")
    if not 0.0 < q <= 1.0:
        raise ConfigurationError(f"q must be in (0, 1], got {q}")
    if N < 1:
        raise ConfigurationError(f"N must be >= 1, got {N}")
    sigma_u2 = eta_star * sigma_star2 / (N * q)
    sigma_e2 = (1.0 - eta_star) * sigma_star2
    return sigma_u2, sigma_e2


def sample_effects(N: int, q: float, sigma_u2: float, rng: np.random.Generator) -> EffectVector:
    """Draw a sparse effect vector: Bernoulli(q) support times N(0, sigma_u2)."""
    if not 0.0 < q <= 1.0:
        raise ConfigurationError(f"q must be in (0, 1], got {q}")
    if sigma_u2 < 0.0:
        raise ConfigurationError(f"sigma_u2 must be >= 0, got {sigma_u2}")
    N = int(N)
    support = rng.random(N) < q
    u = support * rng.normal(0.0, np.sqrt(sigma_u2), N)
    return EffectVector(u=u, support=support, sigma_u2=sigma_u2)


def simulate_phenotype(Z, u, sigma_e2: float, rng: np.random.Generator) -> np.ndarray:
    """Simulate Y = Z u + e with e_i i.i.d. Normal(0, sigma_e2).

    ``Z`` may be a plain array or any object with a ``Z`` attribute;
    ``u`` may be a plain vector or an :class:`EffectVector`.
    """
    Zm = np.asarray(getattr(Z, "Z", Z), dtype=np.float64)
    uv = np.asarray(getattr(u, "u", u), dtype=np.float64)
    if sigma_e2 < 0.0:
        raise ConfigurationError(f"sigma_e2 must be >= 0, got {sigma_e2}")
    if Zm.ndim != 2 or uv.ndim != 1 or Zm.shape[1] != uv.size:
        raise ShapeMismatchError(
            f"design is {Zm.shape} but effect vector has length {uv.size}"
        )
    e = rng.normal(0.0, np.sqrt(sigma_e2), Zm.shape[0])
    return Zm @ uv + e


@dataclass
class SimulatedCohort:
    """One realized cohort plus the ground truth that generated it."""

    config: SimulationConfig
    replicate: int
    design: str
    genotypes: GenotypeMatrix | None
    Z: np.ndarray
    effects: EffectVector
    sigma_e2: float
    Y: np.ndarray

    @property
    def truth(self) -> dict:
        return {
            "eta_star": self.config.eta_star,
            "sigma_star2": self.config.sigma_star2,
            "q": self.config.q,
            "sigma_u2": self.effects.sigma_u2,
            "sigma_e2": self.sigma_e2,
            "seed": self.config.seed,
            "replicate": self.replicate,
            "design": self.design,
            "support_indices": np.flatnonzero(self.effects.support).tolist(),
        }


def simulate_cohort(
    config: SimulationConfig, replicate: int = 0, design: str = "genotype"
) -> SimulatedCohort:
    """Generate one full cohort (design, effects, phenotype) for a replicate.

    ``design="genotype"`` draws binomial allele counts and standardizes
    them; ``design="gaussian"`` uses an i.i.d. N(0,1) design directly
    (no standardization), which is the setting of the sparse-case theory.
    """
    from .spectral import standardize  # local import to avoid a cycle

    if design not in ("genotype", "gaussian"):
        raise ConfigurationError(f"design must be 'genotype' or 'gaussian', got {design!r}")
    rng = replicate_rng(config.seed, replicate)
    genotypes = None
    if design == "genotype":
        freqs = sample_allele_frequencies(config.N, config.freq_lo, config.freq_hi, rng)
        genotypes = sample_genotypes(config.n, freqs, rng)
        Z = standardize(genotypes).Z
    else:
        Z = rng.standard_normal((config.n, config.N))
    sigma_u2, sigma_e2 = effect_scale(config.eta_star, config.sigma_star2, config.q, config.N)
    effects = sample_effects(config.N, config.q, sigma_u2, rng)
    Y = simulate_phenotype(Z, effects, sigma_e2, rng)
    return SimulatedCohort(
        config=config,
        replicate=replicate,
        design=design,
        genotypes=genotypes,
        Z=Z,
        effects=effects,
        sigma_e2=sigma_e2,
        Y=Y,
    )
