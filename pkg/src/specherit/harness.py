"""File formats, estimation pipeline, Monte-Carlo study runner, and CLI.

Formats (all UTF-8 text, chosen for desk-scale transparency):

* genotype: delimited (comma or tab, autodetected), one row per
  individual, one column per marker, entries in {0, 1, 2}, optional
  single header row;
* phenotype: one decimal value per line;
* covariates: delimited, one row per individual;
* simulation/study configs, truth files and reports: JSON;
* replicate and summary tables: CSV with fixed column order, floats
  written with 17 significant digits.

Exit codes are a stable contract: 0 success, 1 usage or configuration
error, 2 data or numerical error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigurationError,
    DataError,
    DataParseError,
    NumericalFailureError,
    SpecheritError,
    UnidentifiableModelError,
)
from .inference import EstimateReport, build_report
from .likelihood import SolverConfig, newton_estimate
from .spectral import MPLaw, decompose, esd, mp_cdf, residualize, standardize
from .synthcohort import (
    SimulationConfig,
    replicate_rng,
    sample_allele_frequencies,
    sample_genotypes,
    simulate_cohort,
)

log = logging.getLogger("specherit")

# Desk-scale guard: study cells wider than this need an explicit opt-in.
MAX_MARKERS_DEFAULT = 20_000

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


# ---------------------------------------------------------------------------
# file readers / writers
# ---------------------------------------------------------------------------


def _sniff_delimiter(line: str) -> str:
    return "\t" if "\t" in line else ","


def _is_numeric_row(tokens: list[str]) -> bool:
    try:
        for t in tokens:
            float(t)
        return True
    except ValueError:
        return False


def read_genotypes(path: str) -> np.ndarray:
    """Read a genotype matrix, autodetecting delimiter and optional header."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.strip():
            raise DataParseError(f"{path}: line 1: empty genotype file")
        delim = _sniff_delimiter(first)
        header = not _is_numeric_row([t for t in first.strip().split(delim) if t != ""])
    try:
        W = np.loadtxt(path, delimiter=delim, skiprows=1 if header else 0, ndmin=2)
    except ValueError as exc:
        raise DataParseError(f"{path}: {exc}") from exc
    bad = ~np.isin(W, (0.0, 1.0, 2.0))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        line = int(i) + 1 + (1 if header else 0)
        raise DataParseError(
            f"{path}: line {line}, column {int(j) + 1}: genotype entry {W[i, j]!r} "
            "not in {0, 1, 2}"
        )
    return W.astype(np.int8)


def read_phenotype(path: str) -> np.ndarray:
    """Read a phenotype vector, one decimal per line."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError as exc:
                raise DataParseError(f"{path}: line {lineno}: {text!r} is not a number") from exc
    if not values:
        raise DataParseError(f"{path}: no phenotype values found")
    return np.asarray(values, dtype=np.float64)


def read_covariates(path: str) -> np.ndarray:
    """Read a covariate matrix, one row per individual."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.strip():
            raise DataParseError(f"{path}: line 1: empty covariate file")
        delim = _sniff_delimiter(first)
        header = not _is_numeric_row([t for t in first.strip().split(delim) if t != ""])
    try:
        return np.loadtxt(path, delimiter=delim, skiprows=1 if header else 0, ndmin=2)
    except ValueError as exc:
        raise DataParseError(f"{path}: {exc}") from exc


def write_genotypes(path: str, W: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.asarray(W):
            fh.write(",".join(str(int(v)) for v in row))
            fh.write("\n")


def write_phenotype(path: str, Y: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(Y, dtype=np.float64):
            fh.write(f"{v:.17g}\n")


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fingerprint(path: str, shape: tuple[int, ...]) -> dict:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    info = {"path": os.path.abspath(path), "sha256": digest.hexdigest()}
    if len(shape) == 2:
        info["rows"], info["cols"] = int(shape[0]), int(shape[1])
    else:
        info["rows"] = int(shape[0])
    return info


# ---------------------------------------------------------------------------
# estimation pipeline
# ---------------------------------------------------------------------------


def estimate_from_design(
    Z,
    Y: np.ndarray,
    *,
    q_assumed: float | None = None,
    ci_level: float = 0.95,
    solver: SolverConfig | None = None,
) -> EstimateReport:
    """Run the spectral pipeline and inference on an in-memory design."""
    Zm = np.asarray(getattr(Z, "Z", Z), dtype=np.float64)
    spec = decompose(Zm, np.asarray(Y, dtype=np.float64))
    result = newton_estimate(spec.lambdas, spec.y_rot, solver or SolverConfig())
    return build_report(
        spec.lambdas,
        spec.y_rot,
        n_markers=Zm.shape[1],
        solver_result=result,
        q_assumed=q_assumed,
        ci_level=ci_level,
    )


def estimate_files(
    geno_path: str,
    pheno_path: str,
    covar_path: str | None = None,
    *,
    q_assumed: float | None = None,
    ci_level: float = 0.95,
    drop_monomorphic: bool = False,
    solver: SolverConfig | None = None,
) -> dict:
    """File-based estimation: returns the report document with fingerprints."""
    W = read_genotypes(geno_path)
    Y = read_phenotype(pheno_path)
    if W.shape[0] != Y.size:
        raise DataError(
            f"genotype rows ({W.shape[0]}) and phenotype length ({Y.size}) disagree"
        )
    inputs = {
        "genotype": _fingerprint(geno_path, W.shape),
        "phenotype": _fingerprint(pheno_path, Y.shape),
    }
    if covar_path is not None:
        X = read_covariates(covar_path)
        if X.shape[0] != Y.size:
            raise DataError(
                f"covariate rows ({X.shape[0]}) and phenotype length ({Y.size}) disagree"
            )
        Y = residualize(Y, X)
        inputs["covariates"] = _fingerprint(covar_path, X.shape)
    design = standardize(W, policy="drop" if drop_monomorphic else "error")
    report = estimate_from_design(
        design.Z, Y, q_assumed=q_assumed, ci_level=ci_level, solver=solver
    )
    doc = report.to_dict()
    if design.dropped:
        doc["dropped_monomorphic_columns"] = list(design.dropped)
    doc["inputs"] = inputs
    return doc


# ---------------------------------------------------------------------------
# Monte-Carlo studies
# ---------------------------------------------------------------------------


REPLICATE_COLUMNS = (
    "replicate_id", "seed", "eta_star", "a", "q", "n", "N",
    "eta_hat", "sigma2_hat", "se_q1", "se_sparse", "pivot_q1", "pivot_sparse",
    "ci_lo", "ci_hi", "covered", "iterations", "clamped", "error",
)

SUMMARY_COLUMNS = (
    "eta_star", "a", "q", "n", "N", "replicates", "errors",
    "mean_eta_hat", "sd_eta_hat", "mean_se_q1", "mean_se_sparse", "coverage",
    "pivot_q1_mean", "pivot_q1_var", "pivot_sparse_mean", "pivot_sparse_var",
)


@dataclass
class ReplicateRecord:
    """One estimated replicate of a study cell."""

    replicate_id: int
    seed: int
    eta_star: float
    a: float
    q: float
    n: int
    N: int
    eta_hat: float | None = None
    sigma2_hat: float | None = None
    se_q1: float | None = None
    se_sparse: float | None = None
    pivot_q1: float | None = None
    pivot_sparse: float | None = None
    ci_lo: float | None = None
    ci_hi: float | None = None
    covered: bool | None = None
    iterations: int | None = None
    clamped: bool | None = None
    error: str = ""

    def to_row(self) -> dict:
        row = {}
        for name in REPLICATE_COLUMNS:
            value = getattr(self, name)
            if value is None:
                row[name] = ""
            elif isinstance(value, bool):
                row[name] = int(value)
            elif isinstance(value, float):
                row[name] = f"{value:.17g}"
            else:
                row[name] = value
        return row


@dataclass(frozen=True)
class StudySpec:
    """Grid of simulation cells around a base configuration.

    ``a_grid`` values map to marker counts N = round(n / a). The sparse
    standard error in every record assumes the cell's own q (labelled
    "assumed q" because real data never reveals it).
    """

    base: SimulationConfig
    eta_grid: tuple[float, ...] = ()
    a_grid: tuple[float, ...] = ()
    q_grid: tuple[float, ...] = ()
    design: str = "genotype"
    workers: int = 1
    ci_level: float = 0.95
    outputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.design not in ("genotype", "gaussian"):
            raise ConfigurationError(f"design must be genotype|gaussian, got {self.design!r}")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        for eta in self.eta_grid:
            if not 0.0 <= eta < 1.0:
                raise ConfigurationError(f"eta grid value {eta} outside [0, 1)")
        for a in self.a_grid:
            if not a > 0.0:
                raise ConfigurationError(f"a grid value {a} must be positive")
        for q in self.q_grid:
            if not 0.0 < q <= 1.0:
                raise ConfigurationError(f"q grid value {q} outside (0, 1]")
        if not 0.0 < self.ci_level < 1.0:
            raise ConfigurationError(f"ci_level must be in (0, 1), got {self.ci_level}")

    @classmethod
    def from_json(cls, text: str) -> "StudySpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"invalid study JSON: {exc}") from exc
        if not isinstance(doc, dict) or "base" not in doc:
            raise ConfigurationError("study spec must be a JSON object with a 'base' config")
        base = SimulationConfig(**doc["base"])
        return cls(
            base=base,
            eta_grid=tuple(doc.get("eta_grid", [base.eta_star])),
            a_grid=tuple(doc.get("a_grid", [base.n / base.N])),
            q_grid=tuple(doc.get("q_grid", [base.q])),
            design=doc.get("design", "genotype"),
            workers=int(doc.get("workers", 1)),
            ci_level=float(doc.get("ci_level", 0.95)),
            outputs=dict(doc.get("outputs", {})),
        )

    def cells(self) -> list[tuple[float, float, float]]:
        etas = self.eta_grid or (self.base.eta_star,)
        aa = self.a_grid or (self.base.n / self.base.N,)
        qq = self.q_grid or (self.base.q,)
        return [(eta, a, q) for eta in etas for a in aa for q in qq]


def run_replicate(
    *,
    n: int,
    N: int,
    eta_star: float,
    q: float,
    seed: int,
    replicate: int,
    design: str = "genotype",
    sigma_star2: float = 1.0,
    freq_lo: float = 0.1,
    freq_hi: float = 0.5,
    ci_level: float = 0.95,
    solver: SolverConfig | None = None,
) -> ReplicateRecord:
    """Simulate one cohort and estimate it; failures land in the record."""
    record = ReplicateRecord(
        replicate_id=replicate, seed=seed, eta_star=eta_star,
        a=n / N, q=q, n=n, N=N,
    )
    try:
        config = SimulationConfig(
            n=n, N=N, eta_star=eta_star, q=q, sigma_star2=sigma_star2,
            freq_lo=freq_lo, freq_hi=freq_hi, seed=seed, replicates=1,
        )
        cohort = simulate_cohort(config, replicate=replicate, design=design)
        report = estimate_from_design(
            cohort.Z, cohort.Y, q_assumed=q, ci_level=ci_level, solver=solver
        )
    except SpecheritError as exc:
        record.error = f"{type(exc).__name__}: {exc}"
        return record
    record.eta_hat = report.eta_hat
    record.sigma2_hat = report.sigma2_hat
    record.se_q1 = report.se_q1
    record.se_sparse = report.se_sparse
    record.pivot_q1 = (report.eta_hat - eta_star) / report.se_q1
    record.pivot_sparse = (report.eta_hat - eta_star) / report.se_sparse
    record.ci_lo = report.ci_lo
    record.ci_hi = report.ci_hi
    record.covered = report.ci_lo <= eta_star <= report.ci_hi
    record.iterations = int(sum(report.solver["iterations_per_start"]))
    record.clamped = bool(report.solver["clamped"])
    return record


def _study_task(payload: tuple) -> tuple[int, int, dict]:
    cell_idx, rep, kwargs = payload
    record = run_replicate(**kwargs)
    return cell_idx, rep, record.to_row()


def run_study(
    spec: StudySpec,
    out_dir: str,
    *,
    workers: int | None = None,
    allow_large: bool = False,
) -> tuple[str, str]:
    """Run every cell of a study and write replicate and summary CSVs.

    Replicate streams depend only on (master seed, replicate index), so
    the output is identical for any worker count.
    """
    os.makedirs(out_dir, exist_ok=True)
    workers = spec.workers if workers is None else workers
    base = spec.base

    tasks = []
    for cell_idx, (eta, a, q) in enumerate(spec.cells()):
        N = int(round(base.n / a))
        if N > MAX_MARKERS_DEFAULT and not allow_large:
            raise ConfigurationError(
                f"cell (eta={eta}, a={a}, q={q}) needs N={N} > {MAX_MARKERS_DEFAULT} "
                "markers; pass --allow-large to run it anyway"
            )
        for rep in range(base.replicates):
            tasks.append(
                (
                    cell_idx,
                    rep,
                    dict(
                        n=base.n, N=N, eta_star=eta, q=q, seed=base.seed,
                        replicate=rep, design=spec.design,
                        sigma_star2=base.sigma_star2, freq_lo=base.freq_lo,
                        freq_hi=base.freq_hi, ci_level=spec.ci_level,
                    ),
                )
            )

    log.info("running %d replicates across %d cells", len(tasks), len(spec.cells()))
    results: dict[tuple[int, int], dict] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cell_idx, rep, row in pool.map(_study_task, tasks, chunksize=4):
                results[(cell_idx, rep)] = row
    else:
        for payload in tasks:
            cell_idx, rep, row = _study_task(payload)
            results[(cell_idx, rep)] = row

    replicates_path = os.path.join(out_dir, spec.outputs.get("replicates", "replicates.csv"))
    with open(replicates_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPLICATE_COLUMNS)
        writer.writeheader()
        for key in sorted(results):
            writer.writerow(results[key])

    summary_path = os.path.join(out_dir, spec.outputs.get("summary", "summary.csv"))
    summary_rows = summarize_replicates(replicates_path)
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(summary_rows)
    return replicates_path, summary_path


def summarize_replicates(replicates_path: str) -> list[dict]:
    """Recompute per-cell summary statistics from a replicate CSV alone."""
    cells: dict[tuple, list[dict]] = {}
    with open(replicates_path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["eta_star"], row["a"], row["q"], row["n"], row["N"])
            cells.setdefault(key, []).append(row)

    def _column(rows, name):
        return np.array([float(r[name]) for r in rows if r[name] != ""])

    out = []
    for key in sorted(cells):
        rows = cells[key]
        good = [r for r in rows if not r["error"]]
        eta_hat = _column(good, "eta_hat")
        summary = {
            "eta_star": key[0], "a": key[1], "q": key[2], "n": key[3], "N": key[4],
            "replicates": str(len(rows)), "errors": str(len(rows) - len(good)),
        }
        stats = {
            "mean_eta_hat": eta_hat.mean() if eta_hat.size else None,
            "sd_eta_hat": eta_hat.std(ddof=1) if eta_hat.size > 1 else None,
            "mean_se_q1": _column(good, "se_q1").mean() if good else None,
            "mean_se_sparse": _column(good, "se_sparse").mean() if good else None,
            "coverage": _column(good, "covered").mean() if good else None,
            "pivot_q1_mean": _column(good, "pivot_q1").mean() if good else None,
            "pivot_q1_var": _column(good, "pivot_q1").var(ddof=1) if len(good) > 1 else None,
            "pivot_sparse_mean": _column(good, "pivot_sparse").mean() if good else None,
            "pivot_sparse_var": _column(good, "pivot_sparse").var(ddof=1) if len(good) > 1 else None,
        }
        for name, value in stats.items():
            summary[name] = "" if value is None else f"{float(value):.17g}"
        out.append(summary)
    return out


# ---------------------------------------------------------------------------
# Marchenko-Pastur convergence check
# ---------------------------------------------------------------------------


def mp_check(n: int, N: int, dist: str = "gaussian", seed: int = 0) -> dict:
    """Sup-distance between the empirical spectral CDF and the MP law.

    The distance is evaluated on a 2001-point grid spanning
    [-0.1, a_plus + 0.1]; the check passes below 0.05.
    """
    if n < 2 or N < 2:
        raise ConfigurationError(f"need n, N >= 2, got n={n}, N={N}")
    if dist not in ("gaussian", "genotype"):
        raise ConfigurationError(f"dist must be gaussian|genotype, got {dist!r}")
    rng = replicate_rng(seed, 0)
    if dist == "gaussian":
        Z = rng.standard_normal((n, N))
    else:
        freqs = sample_allele_frequencies(N, 0.1, 0.5, rng)
        Z = standardize(sample_genotypes(n, freqs, rng)).Z
    spec = decompose(Z, np.zeros(n))
    law = MPLaw(n / N)
    grid = np.linspace(-0.1, law.a_plus + 0.1, 2001)
    distance = float(np.max(np.abs(esd(spec.lambdas, grid) - mp_cdf(law, grid))))
    return {
        "ks_distance": distance,
        "a": law.a,
        "pass": bool(distance < 0.05),
        "n": int(n),
        "N": int(N),
        "dist": dist,
        "seed": int(seed),
    }


# ---------------------------------------------------------------------------
# command-line interface
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _solver_from_args(args) -> SolverConfig:
    kwargs = {}
    if args.delta is not None:
        kwargs["delta"] = args.delta
    if args.inits is not None:
        try:
            kwargs["inits"] = tuple(float(tok) for tok in args.inits.split(","))
        except ValueError as exc:
            raise ConfigurationError(f"--inits must be comma-separated floats: {exc}") from exc
    return SolverConfig(**kwargs)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specherit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="estimate heritability from data files")
    p_est.add_argument("genotype", help="genotype matrix file")
    p_est.add_argument("phenotype", help="phenotype file, one value per line")
    p_est.add_argument("--covariates", default=None, help="optional covariate file")
    p_est.add_argument("--q", type=float, default=None,
                       help="assumed proportion of non-null effects (enables sparse SE)")
    p_est.add_argument("--level", type=float, default=0.95, help="confidence level")
    p_est.add_argument("--delta", type=float, default=None, help="boundary margin")
    p_est.add_argument("--inits", default=None, help="comma-separated Newton starts")
    p_est.add_argument("--drop-monomorphic", action="store_true",
                       help="drop zero-variance genotype columns instead of failing")
    p_est.add_argument("--out", default=None, help="also write the report JSON here")

    p_sim = sub.add_parser("simulate", help="write a synthetic cohort to disk")
    p_sim.add_argument("config", help="SimulationConfig JSON file")
    p_sim.add_argument("out_dir", help="output directory")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")

    p_mc = sub.add_parser("mc-study", help="run a Monte-Carlo study grid")
    p_mc.add_argument("study", help="StudySpec JSON file")
    p_mc.add_argument("out_dir", help="output directory")
    p_mc.add_argument("--workers", type=int, default=None, help="parallel workers")
    p_mc.add_argument("--seed", type=int, default=None, help="override the base seed")
    p_mc.add_argument("--allow-large", action="store_true",
                      help=f"permit cells with more than {MAX_MARKERS_DEFAULT} markers")

    p_mp = sub.add_parser("mp-check", help="empirical spectrum vs Marchenko-Pastur law")
    p_mp.add_argument("--n", type=int, required=True, help="individuals")
    p_mp.add_argument("--N", type=int, required=True, help="markers")
    p_mp.add_argument("--dist", choices=("gaussian", "genotype"), default="gaussian")
    p_mp.add_argument("--seed", type=int, default=0)
    p_mp.add_argument("--out", default=None, help="also write the JSON here")
    return parser


def _cmd_estimate(args) -> int:
    doc = estimate_files(
        args.genotype,
        args.phenotype,
        args.covariates,
        q_assumed=args.q,
        ci_level=args.level,
        drop_monomorphic=args.drop_monomorphic,
        solver=_solver_from_args(args),
    )
    _emit(doc, args.out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = SimulationConfig.from_json(fh.read())
    if args.seed is not None:
        config = SimulationConfig(**{**config.__dict__, "seed": args.seed})
    os.makedirs(args.out_dir, exist_ok=True)
    cohort = simulate_cohort(config, replicate=0)
    geno_path = os.path.join(args.out_dir, "genotypes.csv")
    pheno_path = os.path.join(args.out_dir, "phenotypes.txt")
    truth_path = os.path.join(args.out_dir, "truth.json")
    write_genotypes(geno_path, cohort.genotypes.entries)
    write_phenotype(pheno_path, cohort.Y)
    _write_json(truth_path, cohort.truth)
    log.info("wrote %s, %s, %s", geno_path, pheno_path, truth_path)
    return EXIT_OK


def _cmd_mc_study(args) -> int:
    with open(args.study, "r", encoding="utf-8") as fh:
        spec = StudySpec.from_json(fh.read())
    if args.seed is not None:
        base = SimulationConfig(**{**spec.base.__dict__, "seed": args.seed})
        spec = StudySpec(
            base=base, eta_grid=spec.eta_grid, a_grid=spec.a_grid, q_grid=spec.q_grid,
            design=spec.design, workers=spec.workers, ci_level=spec.ci_level,
            outputs=spec.outputs,
        )
    replicates_path, summary_path = run_study(
        spec, args.out_dir, workers=args.workers, allow_large=args.allow_large
    )
    print(json.dumps({"replicates": replicates_path, "summary": summary_path}))
    return EXIT_OK


def _cmd_mp_check(args) -> int:
    doc = mp_check(args.n, args.N, args.dist, args.seed)
    _emit(doc, args.out)
    return EXIT_OK


_COMMANDS = {
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "mc-study": _cmd_mc_study,
    "mp-check": _cmd_mp_check,
}


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("HERIT_LOG", "").upper()
    if level:
        logging.basicConfig(level=getattr(logging, level, logging.INFO))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NumericalFailureError, UnidentifiableModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
