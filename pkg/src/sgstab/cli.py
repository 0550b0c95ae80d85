"""Experiment harness: declarative JSON configs in, CSV artifacts out.

One executable with four subcommands:

    sgstab abscissa-sweep --config cfg.json   # abscissa_sweep.csv
    sgstab eigs           --config cfg.json   # eigs.csv
    sgstab equilibrium    --config cfg.json   # equilibrium_curves.csv + equilibrium_abscissae.csv
    sgstab ivp            --config cfg.json   # ivp.csv

Config keys: system ("paper-linear" | "paper-quadratic"), density ("uniform"
| "beta" with alpha/beta), degree_min, degree_max (0..10), quad_nodes
(>= degree_max + 1), variant ("original" | "shifted" | "stabilized"),
optional ivp block {t_end, step, initial, perturbation}, output_dir. All
numbers are serialized with 17 significant digits, so reruns of the same
config are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import galerkin, model, odesolve, orthopoly
from .errors import ConfigError, NumericsError
from .matops import eigenvalues, spectral_abscissa

__all__ = [
    "IvpConfig",
    "ExperimentConfig",
    "parse_config",
    "run_abscissa_sweep",
    "run_eigenvalue_dump",
    "run_equilibrium_study",
    "run_ivp",
    "main",
]

MAX_DEGREE = 10
CURVE_GRID_POINTS = 201

_SYSTEMS = ("paper-linear", "paper-quadratic")
_DENSITIES = ("uniform", "beta")
_VARIANTS = ("original", "shifted", "stabilized")
_INITIAL_MODES = ("near-equilibrium", "unit-first-coefficient")


@dataclass(frozen=True)
class IvpConfig:
    t_end: float = 10.0
    step: float = 0.01
    initial: object = None  # mode name, explicit vector, or None for the variant default
    perturbation: float = 1e-3


@dataclass(frozen=True)
class ExperimentConfig:
    system: str
    density: orthopoly.Density
    degree_min: int = 0
    degree_max: int = MAX_DEGREE
    quad_nodes: int = 20
    variant: str = "original"
    ivp: Optional[IvpConfig] = None
    output_dir: Path = Path(".")


def _require_int(raw: dict, key: str, violations: list[str]) -> Optional[int]:
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        violations.append(f"{key} must be an integer, got {value!r}")
        return None
    return value


def _require_number(raw: dict, key: str, violations: list[str]) -> Optional[float]:
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        violations.append(f"{key} must be a number, got {value!r}")
        return None
    return float(value)


def _parse_ivp(raw: object, violations: list[str]) -> Optional[IvpConfig]:
    if not isinstance(raw, dict):
        violations.append(f"ivp must be an object, got {raw!r}")
        return None
    known = {"t_end", "step", "initial", "perturbation"}
    for key in sorted(set(raw) - known):
        violations.append(f"unknown ivp key: {key}")
    cfg = IvpConfig()
    if "t_end" in raw:
        value = _require_number(raw, "t_end", violations)
        if value is not None:
            if value <= 0.0:
                violations.append(f"ivp.t_end must be positive, got {value}")
            else:
                cfg = replace(cfg, t_end=value)
    if "step" in raw:
        value = _require_number(raw, "step", violations)
        if value is not None:
            if value <= 0.0:
                violations.append(f"ivp.step must be positive, got {value}")
            else:
                cfg = replace(cfg, step=value)
    if cfg.t_end < cfg.step:
        violations.append(f"ivp.t_end={cfg.t_end} is shorter than one step {cfg.step}")
    if "perturbation" in raw:
        value = _require_number(raw, "perturbation", violations)
        if value is not None:
            cfg = replace(cfg, perturbation=value)
    if "initial" in raw:
        initial = raw["initial"]
        if isinstance(initial, str):
            if initial not in _INITIAL_MODES:
                violations.append(
                    f"ivp.initial must be one of {_INITIAL_MODES} or an explicit "
                    f"vector, got {initial!r}"
                )
            else:
                cfg = replace(cfg, initial=initial)
        elif isinstance(initial, list):
            if not initial or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in initial
            ):
                violations.append("ivp.initial vector must be a non-empty list of numbers")
            else:
                cfg = replace(cfg, initial=tuple(float(v) for v in initial))
        else:
            violations.append(f"ivp.initial has unsupported type {type(initial).__name__}")
    return cfg


def parse_config(path) -> ExperimentConfig:
    """Load and validate a JSON experiment config, reporting every violation."""
    path = Path(path)
    violations: list[str] = []
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError([f"cannot read config {path}: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError([f"config root must be an object, got {type(raw).__name__}"])

    known = {
        "system",
        "density",
        "alpha",
        "beta",
        "degree_min",
        "degree_max",
        "quad_nodes",
        "variant",
        "ivp",
        "output_dir",
    }
    for key in sorted(set(raw) - known):
        violations.append(f"unknown config key: {key}")

    system = raw.get("system")
    if system not in _SYSTEMS:
        violations.append(f"system must be one of {_SYSTEMS}, got {system!r}")

    density = None
    density_name = raw.get("density")
    if density_name not in _DENSITIES:
        violations.append(f"density must be one of {_DENSITIES}, got {density_name!r}")
    elif density_name == "uniform":
        for key in ("alpha", "beta"):
            if key in raw:
                violations.append(f"{key} is only valid for the beta density")
        density = orthopoly.uniform_density()
    else:
        exponents = {}
        for key in ("alpha", "beta"):
            if key not in raw:
                violations.append(f"beta density requires {key}")
            else:
                value = _require_number(raw, key, violations)
                if value is not None:
                    if value <= -1.0:
                        violations.append(f"{key} must be > -1, got {value}")
                    else:
                        exponents[key] = value
        if len(exponents) == 2:
            density = orthopoly.beta_density(exponents["alpha"], exponents["beta"])

    degree_min, degree_max = 0, MAX_DEGREE
    if "degree_min" in raw:
        value = _require_int(raw, "degree_min", violations)
        if value is not None:
            degree_min = value
    if "degree_max" in raw:
        value = _require_int(raw, "degree_max", violations)
        if value is not None:
            degree_max = value
    if not 0 <= degree_min <= degree_max <= MAX_DEGREE:
        violations.append(
            f"degrees must satisfy 0 <= degree_min <= degree_max <= {MAX_DEGREE}, "
            f"got {degree_min}..{degree_max}"
        )

    quad_nodes = 20
    if "quad_nodes" in raw:
        value = _require_int(raw, "quad_nodes", violations)
        if value is not None:
            quad_nodes = value
    if quad_nodes < degree_max + 1:
        violations.append(
            f"quad_nodes={quad_nodes} is too small; need at least degree_max + 1 = "
            f"{degree_max + 1}"
        )

    variant = raw.get("variant", "original")
    if variant not in _VARIANTS:
        violations.append(f"variant must be one of {_VARIANTS}, got {variant!r}")

    ivp = None
    if "ivp" in raw:
        ivp = _parse_ivp(raw["ivp"], violations)
        if (
            ivp is not None
            and isinstance(ivp.initial, tuple)
            and system == "paper-quadratic"
        ):
            expected = 2 * (degree_max + 1)
            if len(ivp.initial) != expected:
                violations.append(
                    f"ivp.initial has {len(ivp.initial)} entries; degree "
                    f"{degree_max} needs {expected}"
                )

    output_dir = raw.get("output_dir", ".")
    if not isinstance(output_dir, str):
        violations.append(f"output_dir must be a string, got {output_dir!r}")
        output_dir = "."

    if violations:
        raise ConfigError(violations)
    return ExperimentConfig(
        system=system,
        density=density,
        degree_min=degree_min,
        degree_max=degree_max,
        quad_nodes=quad_nodes,
        variant=variant,
        ivp=ivp,
        output_dir=Path(output_dir),
    )


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header: str, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    return path


def _require_system(config: ExperimentConfig, expected: str) -> None:
    if config.system != expected:
        raise ConfigError([f"this command requires system={expected!r}, got {config.system!r}"])


def _linear_setup(config: ExperimentConfig):
    system = model.paper_linear_system()
    rule = orthopoly.quadrature_new(config.density, config.quad_nodes)
    return system, rule, np.eye(system.dim)


def run_abscissa_sweep(config: ExperimentConfig) -> list[Path]:
    """Spectral abscissae of the plain and stabilized projections per degree."""
    _require_system(config, "paper-linear")
    system, rule, q = _linear_setup(config)
    rows = []
    for degree in range(config.degree_min, config.degree_max + 1):
        basis = orthopoly.basis_new(config.density, degree + 1)
        plain = galerkin.assemble_linear(system, basis, rule)
        stabilized = galerkin.assemble_stabilized_linear(system, q, basis, rule)
        rows.append(
            (
                str(degree),
                _fmt(spectral_abscissa(plain.matrix)),
                _fmt(spectral_abscissa(stabilized.matrix)),
            )
        )
    out = _write_csv(
        config.output_dir / "abscissa_sweep.csv",
        "degree,alpha_original,alpha_stabilized",
        rows,
    )
    return [out]


def run_eigenvalue_dump(config: ExperimentConfig) -> list[Path]:
    """Full spectra of the plain and stabilized projections per degree."""
    _require_system(config, "paper-linear")
    system, rule, q = _linear_setup(config)
    rows = []
    for degree in range(config.degree_min, config.degree_max + 1):
        basis = orthopoly.basis_new(config.density, degree + 1)
        projected = {
            "original": galerkin.assemble_linear(system, basis, rule),
            "stabilized": galerkin.assemble_stabilized_linear(system, q, basis, rule),
        }
        for variant, gmat in projected.items():
            for index, value in enumerate(eigenvalues(gmat.matrix), start=1):
                rows.append(
                    (variant, str(degree), str(index), _fmt(value.real), _fmt(value.imag))
                )
    out = _write_csv(config.output_dir / "eigs.csv", "variant,degree,index,real,imag", rows)
    return [out]


def _galerkin_equilibrium(system, basis, rule, tol: float = 1e-10):
    guess = orthopoly.project(system.equilibrium, basis, rule).reshape(-1)
    report = odesolve.newton_solve(
        lambda v: galerkin.nonlinear_galerkin_rhs(system, basis, rule, v),
        lambda v: galerkin.nonlinear_galerkin_jacobian(system, basis, rule, v),
        guess,
        tol=tol,
    )
    return report


def run_equilibrium_study(config: ExperimentConfig) -> list[Path]:
    """Equilibrium curves and Jacobian abscissae of all three formulations."""
    _require_system(config, "paper-quadratic")
    system = model.paper_quadratic_system()
    shifted = model.shift_system(system)
    rule = orthopoly.quadrature_new(config.density, config.quad_nodes)
    q = np.eye(system.dim)
    stab = galerkin.stabilized_system(shifted, q, rule)
    grid = np.linspace(-1.0, 1.0, CURVE_GRID_POINTS)
    curve_rows = []
    abscissa_rows = []
    for degree in range(config.degree_min, config.degree_max + 1):
        basis = orthopoly.basis_new(config.density, degree + 1)
        report = _galerkin_equilibrium(system, basis, rule)
        if not report.converged:
            raise NumericsError(
                f"Newton iteration for the Galerkin equilibrium did not converge "
                f"at degree {degree} (residual {report.residual:.3e})"
            )
        v_star = report.root
        for p in grid:
            x = galerkin.reconstruct(v_star, basis, p)
            curve_rows.append((str(degree), _fmt(p), _fmt(x[0]), _fmt(x[1])))
        zero = np.zeros(v_star.size)
        abscissa_rows.append(
            (
                str(degree),
                _fmt(spectral_abscissa(galerkin.nonlinear_galerkin_jacobian(system, basis, rule, v_star))),
                _fmt(spectral_abscissa(galerkin.nonlinear_galerkin_jacobian(shifted, basis, rule, zero))),
                _fmt(spectral_abscissa(galerkin.nonlinear_galerkin_jacobian(stab, basis, rule, zero))),
            )
        )
    curves = _write_csv(
        config.output_dir / "equilibrium_curves.csv", "degree,p,x1,x2", curve_rows
    )
    abscissae = _write_csv(
        config.output_dir / "equilibrium_abscissae.csv",
        "degree,alpha_original,alpha_shifted,alpha_stabilized",
        abscissa_rows,
    )
    return [curves, abscissae]


def _initial_state(config: ExperimentConfig, system, basis, rule) -> np.ndarray:
    """Resolve the configured initial condition for the variant's system."""
    ivp = config.ivp
    mn = basis.size * system.dim
    initial = ivp.initial
    if initial is None:
        initial = "unit-first-coefficient" if config.variant == "stabilized" else "near-equilibrium"
    if isinstance(initial, tuple):
        if len(initial) != mn:
            raise ConfigError(
                [f"ivp.initial has {len(initial)} entries; expected {mn}"]
            )
        return np.array(initial)
    if initial == "unit-first-coefficient":
        state = np.zeros(mn)
        state[0] = 1.0
        return state
    report = _galerkin_equilibrium(system, basis, rule)
    if not report.converged:
        raise NumericsError(
            f"Newton iteration for the Galerkin equilibrium did not converge "
            f"(residual {report.residual:.3e})"
        )
    state = report.root.copy()
    state[0] += ivp.perturbation
    return state


def run_ivp(config: ExperimentConfig) -> list[Path]:
    """Integrate the configured variant at degree degree_max; one column per coefficient."""
    _require_system(config, "paper-quadratic")
    if config.ivp is None:
        raise ConfigError(["ivp command requires an ivp block in the config"])
    system = model.paper_quadratic_system()
    rule = orthopoly.quadrature_new(config.density, config.quad_nodes)
    basis = orthopoly.basis_new(config.density, config.degree_max + 1)
    if config.variant == "original":
        target = system
    elif config.variant == "shifted":
        target = model.shift_system(system)
    else:
        target = galerkin.stabilized_system(
            model.shift_system(system), np.eye(system.dim), rule
        )
    x0 = _initial_state(config, target, basis, rule)
    trajectory = odesolve.trapezoidal_integrate(
        lambda v: galerkin.nonlinear_galerkin_rhs(target, basis, rule, v),
        lambda v: galerkin.nonlinear_galerkin_jacobian(target, basis, rule, v),
        x0,
        t_end=config.ivp.t_end,
        h=config.ivp.step,
    )
    header = "t," + ",".join(f"c{i}" for i in range(1, x0.size + 1))
    rows = (
        (_fmt(t), *(_fmt(c) for c in state))
        for t, state in zip(trajectory.times, trajectory.states)
    )
    out = _write_csv(config.output_dir / "ivp.csv", header, rows)
    return [out]


_COMMANDS = {
    "abscissa-sweep": run_abscissa_sweep,
    "eigs": run_eigenvalue_dump,
    "equilibrium": run_equilibrium_study,
    "ivp": run_ivp,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgstab",
        description="Stochastic Galerkin stability experiments; writes CSV artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler in _COMMANDS.items():
        cmd = sub.add_parser(name, help=handler.__doc__)
        cmd.add_argument("--config", required=True, help="path to the JSON config file")
        cmd.add_argument("--output-dir", default=None, help="override the config output_dir")
        cmd.set_defaults(handler=handler)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = parse_config(args.config)
        if args.output_dir is not None:
            config = replace(config, output_dir=Path(args.output_dir))
        written = args.handler(config)
    except ConfigError as exc:
        print(f"configuration error:\n{exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
