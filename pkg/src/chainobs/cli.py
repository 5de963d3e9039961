"""Experiment orchestration and the ``chainobs`` command-line tool.

Subcommands:

  build      construct the observer, certify it, write the matrices as CSV
  simulate   sample the coefficient trajectory and the spatial average
  timeavg    exact time averages on a geometric horizon ladder
  check      run every certificate without writing files (report to stdout)

All subcommands read a JSON config (see parse_config).

Exit codes:

  0  every certificate and tolerance in the run passed
  1  a certificate or tolerance failed
  2  the config was rejected
  3  unexpected error

The CHAINOBS_LOG environment variable (DEBUG/INFO/WARNING/ERROR) controls
log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import serialize
from .analysis import (
    SpectralCertificate,
    build_reduced,
    certify_positive_definite,
    laplacian_split,
    verify_exp_bound,
)
from .builder import (
    SCHEME_ALL_HARMONICS,
    SCHEME_RANDOM,
    SCHEMES,
    AugmentedSystem,
    ChainObserverParams,
    ParameterScheme,
    PlantSpec,
    assemble_augmented,
    build_chain,
    check_fixed_point,
    consensus_target,
    make_mu_schedule,
)
from .errors import (
    BoundViolatedError,
    ChainobsError,
    ConfigError,
    ConfigSchemaError,
    ConfigValidationError,
    NotPositiveDefiniteError,
    NumericalFailureError,
    StepTooCoarseError,
    ToleranceExceededError,
)
from .lqs import make_symplectic, realizability_residual
from .simulate import (
    TimeGrid,
    coefficient_trajectory,
    consensus_error,
    default_step,
    spatial_average,
    time_average_exact,
    time_average_quadrature,
)

log = logging.getLogger("chainobs")

REALIZABILITY_REL_TOL = 1e-12
FIXED_POINT_REL_TOL = 1e-12
ROW_SUM_REL_TOL = 1e-14
PLANT_ROW_REL_TOL = 1e-13
PLANT_ROW_DRIFT_TOL = 1e-9
ORACLE_REL_TOL = 1e-8
EXP_BOUND_SAMPLES = 500
EXP_BOUND_SPAN = 50.0


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description, as read from a JSON config file."""

    n_elements: int
    scheme: str
    omega0: float
    c_p: tuple[float, float]
    horizon: float
    seed: int | None = None
    step: float | str = "auto"
    output_dir: str = "."

    def to_dict(self) -> dict:
        d = {
            "n_elements": self.n_elements,
            "scheme": self.scheme,
            "omega0": self.omega0,
            "c_p": list(self.c_p),
            "horizon": self.horizon,
            "step": self.step,
            "output_dir": self.output_dir,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        return d


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    bound: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "passed": self.passed,
        }


@dataclass
class RunReport:
    """Certificates and residuals of one run, plus where its files went."""

    certificate: SpectralCertificate
    fixed_point_residual: float
    realizability_residual: float
    consensus_error_curve: list[tuple[float, float]] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    outputs: dict[str, str] = field(default_factory=dict)
    passed: bool = True

    def add(self, name: str, value: float, bound: float) -> None:
        ok = bool(value <= bound)
        self.checks.append(CheckResult(name, float(value), float(bound), ok))
        if not ok:
            self.passed = False
        log.info("%s %s: %.6e (bound %.6e)", "ok" if ok else "FAIL", name, value, bound)

    def failing(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "certificate": {
                "lambda_min": self.certificate.lambda_min,
                "lambda_max": self.certificate.lambda_max,
                "exp_norm_bound": self.certificate.exp_norm_bound,
            },
            "fixed_point_residual": self.fixed_point_residual,
            "realizability_residual": self.realizability_residual,
            "consensus_error_curve": [[t, e] for t, e in self.consensus_error_curve],
            "checks": [c.to_dict() for c in self.checks],
            "outputs": self.outputs,
            "passed": self.passed,
        }


def _expect(condition: bool, exc: type[ConfigError], message: str) -> None:
    if not condition:
        raise exc(message)


def _number(raw: object, path: str) -> float:
    _expect(
        isinstance(raw, (int, float)) and not isinstance(raw, bool),
        ConfigSchemaError,
        f"{path}: expected a number, got {raw!r}",
    )
    value = float(raw)
    _expect(np.isfinite(value), ConfigSchemaError, f"{path}: must be finite, got {raw!r}")
    return value


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment config.

    Schema problems (anything from invalid JSON to a missing or mistyped
    field) raise a schema error naming the field; semantically inconsistent
    values raise a validation error.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigSchemaError(f"config is not valid JSON: {exc}") from exc
    _expect(isinstance(raw, dict), ConfigSchemaError, "config must be a JSON object")

    known = {"n_elements", "scheme", "omega0", "c_p", "horizon", "seed", "step", "output_dir"}
    unknown = sorted(set(raw) - known)
    _expect(not unknown, ConfigSchemaError, f"unknown config fields: {', '.join(unknown)}")
    for name in ("n_elements", "scheme", "omega0", "c_p", "horizon"):
        _expect(name in raw, ConfigSchemaError, f"{name}: required field is missing")

    _expect(
        isinstance(raw["n_elements"], int) and not isinstance(raw["n_elements"], bool),
        ConfigSchemaError,
        f"n_elements: expected an integer, got {raw['n_elements']!r}",
    )
    n_elements = raw["n_elements"]
    _expect(isinstance(raw["scheme"], str), ConfigSchemaError, "scheme: expected a string")
    scheme = raw["scheme"]
    omega0 = _number(raw["omega0"], "omega0")
    _expect(
        isinstance(raw["c_p"], list) and len(raw["c_p"]) == 2,
        ConfigSchemaError,
        "c_p: expected a list of exactly 2 numbers",
    )
    c_p = tuple(_number(v, f"c_p[{i}]") for i, v in enumerate(raw["c_p"]))
    horizon = _number(raw["horizon"], "horizon")

    seed = raw.get("seed")
    if seed is not None:
        _expect(
            isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0,
            ConfigSchemaError,
            f"seed: expected a nonnegative integer, got {seed!r}",
        )
    step: float | str = raw.get("step", "auto")
    if step != "auto":
        step = _number(step, "step")
    output_dir = raw.get("output_dir", ".")
    _expect(isinstance(output_dir, str), ConfigSchemaError, "output_dir: expected a string")

    _expect(n_elements >= 1, ConfigValidationError, f"n_elements must be >= 1, got {n_elements}")
    _expect(
        scheme in SCHEMES,
        ConfigValidationError,
        f"scheme must be one of {', '.join(SCHEMES)}; got {scheme!r}",
    )
    _expect(omega0 > 0, ConfigValidationError, f"omega0 must be positive, got {omega0}")
    _expect(horizon > 0, ConfigValidationError, f"horizon must be positive, got {horizon}")
    if step != "auto":
        _expect(step > 0, ConfigValidationError, f"step must be positive, got {step}")
    _expect(
        c_p != (0.0, 0.0),
        ConfigValidationError,
        "c_p must not be the zero vector (degenerate output: nothing to observe)",
    )
    if scheme == SCHEME_RANDOM:
        _expect(seed is not None, ConfigValidationError, "scheme 'random' requires a seed")
    else:
        _expect(
            seed is None,
            ConfigValidationError,
            f"seed is only meaningful for the random scheme, not {scheme!r}",
        )
    if scheme == SCHEME_ALL_HARMONICS:
        _expect(
            n_elements % 2 == 0,
            ConfigValidationError,
            f"the all-harmonics scheme needs an even n_elements, got {n_elements}",
        )
    return ExperimentConfig(
        n_elements=n_elements,
        scheme=scheme,
        omega0=omega0,
        c_p=c_p,
        horizon=horizon,
        seed=seed,
        step=step,
        output_dir=output_dir,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigSchemaError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


@dataclass(frozen=True)
class _Constructed:
    plant: PlantSpec
    chain: ChainObserverParams
    aug: AugmentedSystem


def _construct(config: ExperimentConfig) -> _Constructed:
    plant = PlantSpec.static_plant(np.array(config.c_p))
    scheme = ParameterScheme(variant=config.scheme, omega0=config.omega0, seed=config.seed)
    mu_tilde = make_mu_schedule(scheme, config.n_elements)
    chain = build_chain(plant, mu_tilde)
    aug = assemble_augmented(plant, chain)
    return _Constructed(plant=plant, chain=chain, aug=aug)


def _base_report(built: _Constructed) -> RunReport:
    """Certify the construction itself; shared by every subcommand."""
    aug, chain = built.aug, built.chain
    certificate = certify_positive_definite(aug.r_o)
    report = RunReport(
        certificate=certificate,
        fixed_point_residual=check_fixed_point(aug, chain),
        realizability_residual=realizability_residual(aug.a_a, aug.theta),
    )
    a_norm = float(np.linalg.norm(aug.a_a, ord="fro"))
    report.add("realizability_residual", report.realizability_residual, REALIZABILITY_REL_TOL * a_norm)
    o_norm = float(np.linalg.norm(aug.a_o, ord="fro"))
    report.add("fixed_point_residual", report.fixed_point_residual, FIXED_POINT_REL_TOL * o_norm)

    reduced = build_reduced(chain)
    certify_positive_definite(reduced.matrix)
    _, laplacian = laplacian_split(reduced)
    if chain.n_elements > 1:
        lap_scale = float(np.linalg.norm(laplacian, ord=2))
        # the recovered corner weight rounds relative to the comparison
        # matrix, so that is the right scale for the row-sum residual
        row_scale = float(np.linalg.norm(reduced.matrix, ord=2))
        row_sums = float(np.abs(laplacian.sum(axis=1)).max())
        report.add("laplacian_row_sums", row_sums, ROW_SUM_REL_TOL * row_scale)
        lap_eigs = np.linalg.eigvalsh(laplacian)
        report.add("laplacian_min_eigenvalue", -float(lap_eigs[0]), 1e-12 * row_scale)
        # kernel must be exactly one-dimensional: second eigenvalue strictly positive
        report.add("laplacian_kernel_excess", -float(lap_eigs[1]), -1e-12 * lap_scale)

    plant_row = np.abs(aug.c_a @ aug.a_a)[0].max()
    report.add("plant_row_of_c_a_a_a", float(plant_row), PLANT_ROW_REL_TOL * a_norm)

    target = consensus_target(chain)
    target_residual = float(np.abs(aug.c_o @ target.alpha_stack - target.ones_vector).max())
    report.add("consensus_target_identity", target_residual, 1e-12)
    return report


def _resolve_step(config: ExperimentConfig, built: _Constructed) -> float:
    if config.step == "auto":
        return default_step(built.aug)
    return float(config.step)


def _out_dir(config: ExperimentConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_build(config: ExperimentConfig) -> RunReport:
    """Construct and certify the observer, then serialize its matrices."""
    built = _construct(config)
    report = _base_report(built)
    out = _out_dir(config)
    reduced = build_reduced(built.chain)
    files = {
        "r_a": built.aug.r_a,
        "a_a": built.aug.a_a,
        "c_a": built.aug.c_a,
        "r_o_reduced": reduced.matrix,
    }
    for name, matrix in files.items():
        path = out / f"{name}.csv"
        serialize.write_matrix_csv(path, matrix)
        report.outputs[name] = path.name
        log.info("wrote %s", path)
    report.outputs["report"] = "report.json"
    serialize.write_report_json(out / "report.json", report.to_dict())
    return report


def run_simulate(config: ExperimentConfig) -> RunReport:
    """Sample the coefficient trajectory and write it with its spatial average."""
    built = _construct(config)
    report = _base_report(built)
    grid = TimeGrid.covering(0.0, config.horizon, _resolve_step(config, built))
    trajectory = coefficient_trajectory(built.aug, grid)

    plant_row_drift = float(
        np.linalg.norm(
            trajectory.coefficient_rows[:, 0, :] - built.aug.c_a[0], axis=1
        ).max()
    )
    report.add("plant_row_drift", plant_row_drift, PLANT_ROW_DRIFT_TOL)

    out = _out_dir(config)
    serialize.write_trajectory_csv(out / "trajectory.csv", trajectory)
    serialize.write_spatial_csv(
        out / "spatial_average.csv", trajectory, spatial_average(trajectory)
    )
    report.outputs["trajectory"] = "trajectory.csv"
    report.outputs["spatial_average"] = "spatial_average.csv"
    report.outputs["report"] = "report.json"
    serialize.write_report_json(out / "report.json", report.to_dict())
    log.info("wrote trajectory with %d samples", grid.samples)
    return report


def run_timeavg(config: ExperimentConfig) -> RunReport:
    """Exact time averages on the horizon ladder T/16, T/8, T/4, T/2, T.

    The exact route is cross-checked against Simpson quadrature at the
    shortest ladder horizon; disagreement beyond 1e-8 relative fails the
    run, since it would mean the averaging itself cannot be trusted.
    """
    built = _construct(config)
    report = _base_report(built)
    horizons = [config.horizon / 16, config.horizon / 8, config.horizon / 4,
                config.horizon / 2, config.horizon]
    averages = [time_average_exact(built.aug, t) for t in horizons]
    report.consensus_error_curve = [
        (avg.horizon, consensus_error(avg)) for avg in averages
    ]

    grid = TimeGrid.covering(0.0, horizons[0], default_step(built.aug))
    trajectory = coefficient_trajectory(built.aug, grid)
    quad = time_average_quadrature(trajectory)
    scale = float(np.linalg.norm(averages[0].averaged_rows, ord="fro"))
    disagreement = float(
        np.linalg.norm(averages[0].averaged_rows - quad.averaged_rows, ord="fro")
    )
    report.add("time_average_oracle_disagreement", disagreement, ORACLE_REL_TOL * scale)

    final = averages[-1]
    row_errors = [
        float(np.linalg.norm(final.averaged_rows[i] - final.averaged_rows[0]))
        for i in range(1, final.averaged_rows.shape[0])
    ]
    out = _out_dir(config)
    serialize.write_averages_csv(out / "time_averages.csv", averages, row_errors)
    report.outputs["time_averages"] = "time_averages.csv"
    report.outputs["report"] = "report.json"
    serialize.write_report_json(out / "report.json", report.to_dict())
    return report


def run_check(config: ExperimentConfig) -> RunReport:
    """Run every certificate, including the exponential bound; write nothing."""
    built = _construct(config)
    report = _base_report(built)
    times = np.linspace(0.0, EXP_BOUND_SPAN, EXP_BOUND_SAMPLES)
    theta_o = make_symplectic(built.aug.n_elements)
    observed, bound = verify_exp_bound(built.aug.r_o, theta_o, times)
    report.add("exp_norm_observed", observed, bound * (1.0 + 1e-9))
    return report


_EXIT_TOLERANCE = (
    NotPositiveDefiniteError,
    BoundViolatedError,
    ToleranceExceededError,
    NumericalFailureError,
    StepTooCoarseError,
)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="chainobs",
        description="Build and analyze chain-coupled quantum observers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("build", "construct the observer and write its matrices"),
        ("simulate", "sample the coefficient trajectory"),
        ("timeavg", "time averages on a geometric horizon ladder"),
        ("check", "run all certificates without writing files"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--output-dir", default=None, help="override the config's output_dir")
        p.add_argument("--horizon", type=float, default=None, help="override the horizon")
        p.add_argument("--step", default=None, help="override the step ('auto' or a number)")
    args = parser.parse_args(argv)

    level = os.environ.get("CHAINOBS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")

    runners = {
        "build": run_build,
        "simulate": run_simulate,
        "timeavg": run_timeavg,
        "check": run_check,
    }
    try:
        config = load_config(args.config)
        overrides: dict[str, object] = {}
        if args.output_dir is not None:
            overrides["output_dir"] = args.output_dir
        if args.horizon is not None:
            if not (np.isfinite(args.horizon) and args.horizon > 0):
                raise ConfigValidationError(f"horizon must be positive, got {args.horizon}")
            overrides["horizon"] = args.horizon
        if args.step is not None:
            if args.step != "auto":
                step = _number(_maybe_float(args.step), "step")
                if step <= 0:
                    raise ConfigValidationError(f"step must be positive, got {step}")
                overrides["step"] = step
            else:
                overrides["step"] = "auto"
        if overrides:
            merged = config.to_dict()
            merged.update(overrides)
            config = parse_config(json.dumps(merged))
        report = runners[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _EXIT_TOLERANCE as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ChainobsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 3

    if args.command == "check":
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        for result in report.checks:
            print(f"{'ok  ' if result.passed else 'FAIL'} {result.name}: "
                  f"{result.value:.6e} (bound {result.bound:.6e})")
        if report.consensus_error_curve:
            for horizon, err in report.consensus_error_curve:
                print(f"consensus error at T = {horizon:g}: {err:.6e}")
        if report.outputs:
            print("outputs: " + ", ".join(sorted(report.outputs.values())))
    if not report.passed:
        print(f"FAILED checks: {', '.join(report.failing())}", file=sys.stderr)
        return 1
    return 0


def _maybe_float(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigSchemaError(f"step: expected 'auto' or a number, got {raw!r}") from None


if __name__ == "__main__":
    raise SystemExit(main())
