"""Config-driven batch front door.

One JSON config fully determines a run; subcommands dispatch to the
library and write result artifacts (JSON + CSV) into the output
directory.  Identical config and seed produce byte-identical outputs up
to the timestamp field inside JSON files.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 solver error,
5 iteration limit reached with partial output written.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import errors
from .grid import DOMAIN_KINDS, Grid, build_grid
from .grid import assemble_stiffness as _assemble_stiffness
from .logistic import simulate_logistic
from .optimize import minimize_lambda1, oscillating_arrangement
from .rearrange import (
    RearrangementClass,
    decreasing_rearrangement,
    monotone_x1_rearrangement,
)
from .serialize import (
    eigenpair_payload,
    optimization_payload,
    read_profile_csv,
    write_field_csv,
    write_json,
    write_profile_csv,
    write_spectrum_csv,
    write_stiffness_coo,
    write_trajectory_csv,
)
from .spectral import (
    WeightField,
    principal_eigenpair,
    signed_spectrum,
    weight_field,
)
from .verify import format_report, run_all_checks

CONFIG_VERSION = 1

COMMANDS = ("solve", "optimize", "rearrange", "simulate", "verify")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4
EXIT_ITERATION_LIMIT = 5

_VALIDATION_ERRORS = (
    errors.ValidationError,
    errors.InvalidSpec,
    errors.NotAdmissible,
    errors.NotAdmissibleClass,
    errors.NoPositivePart,
    errors.NegativeInitial,
    errors.LengthMismatch,
    errors.NonUniformGrid,
    errors.MeasureMismatch,
    errors.IndivisibleStripes,
)

_SOLVER_ERRORS = (
    errors.SingularSystem,
    errors.TooLarge,
    errors.ZeroWeightIntegral,
    errors.ConstantField,
    errors.UnstableStep,
)


@dataclass
class RunConfig:
    """Validated run description parsed from a config document."""

    domain_kind: str
    extents: tuple
    shape: tuple
    weight: dict
    solve: dict = field(default_factory=dict)
    optimize: dict = field(default_factory=dict)
    rearrange: dict = field(default_factory=dict)
    simulate: dict = field(default_factory=dict)
    output_dir: str = "out"

    def build_grid(self) -> Grid:
        return build_grid(self.domain_kind, self.extents, self.shape)

    def build_weight(self, grid: Grid) -> WeightField:
        return weight_field(grid, _weight_values(self.weight, grid))

    def build_class(self, grid: Grid) -> RearrangementClass:
        return decreasing_rearrangement(_weight_values(self.weight, grid),
                                        grid)


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise errors.ParseError(f"missing key {key!r} in {context}")
    return mapping[key]


def _weight_values(spec: dict, grid: Grid) -> np.ndarray:
    kind = spec["kind"]
    if kind == "explicit":
        values = np.asarray(spec["values"], dtype=float)
        if values.size != grid.n_cells:
            raise errors.ValidationError(
                f"explicit weight has {values.size} values, grid has "
                f"{grid.n_cells} cells")
        return values
    if kind == "bang_bang":
        n_pos = int(round(spec["positive_fraction"] * grid.n_cells))
        n_pos = min(max(n_pos, 1), grid.n_cells - 1)
        values = np.full(grid.n_cells, spec["negative_value"])
        values[:n_pos] = spec["positive_value"]
        return values
    if kind == "profile":
        pairs = read_profile_csv(spec["path"])
        cls = RearrangementClass(
            profile=tuple(sorted(pairs, key=lambda p: -p[0])),
            total_measure=float(sum(s for _, s in pairs)),
            source_integral=float(sum(v * s for v, s in pairs)),
        )
        return cls.cell_values(grid)
    raise errors.ValidationError(f"unknown weight kind {kind!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config document.

    Structural problems (malformed JSON, missing keys, wrong version)
    raise ParseError with the offending line or key; value problems raise
    ValidationError naming the violated precondition.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ParseError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise errors.ParseError("config root must be an object")
    version = _require(doc, "version", "config")
    if version != CONFIG_VERSION:
        raise errors.ParseError(
            f"unsupported config version {version!r}, expected "
            f"{CONFIG_VERSION}")

    domain = _require(doc, "domain", "config")
    kind = _require(domain, "type", "domain")
    if kind not in DOMAIN_KINDS:
        raise errors.ValidationError(f"unknown domain type {kind!r}")
    extents = tuple(float(x) for x in _require(domain, "extents", "domain"))
    shape = tuple(int(n) for n in _require(domain, "shape", "domain"))
    if len(extents) != DOMAIN_KINDS[kind] or len(shape) != DOMAIN_KINDS[kind]:
        raise errors.ValidationError(
            f"domain type {kind!r} needs {DOMAIN_KINDS[kind]} axes")
    if any(x <= 0 for x in extents):
        raise errors.ValidationError("extents must be positive")
    if any(n < 2 for n in shape):
        raise errors.ValidationError("shape entries must be at least 2")

    weight = dict(_require(doc, "weight", "config"))
    w_kind = _require(weight, "kind", "weight")
    if w_kind == "bang_bang":
        pos = float(_require(weight, "positive_value", "weight"))
        neg = float(_require(weight, "negative_value", "weight"))
        frac = float(_require(weight, "positive_fraction", "weight"))
        if not 0.0 < frac < 1.0:
            raise errors.ValidationError(
                f"positive_fraction must lie in (0, 1), got {frac}")
        if pos <= 0 or neg >= 0:
            raise errors.ValidationError(
                "bang-bang values must satisfy positive_value > 0 > "
                "negative_value")
        mean = frac * pos + (1.0 - frac) * neg
        if mean >= 0:
            raise errors.ValidationError(
                f"admissibility violated: ∫m ≥ 0 "
                f"(mean value {mean:g})")
        weight.update(positive_value=pos, negative_value=neg,
                      positive_fraction=frac)
    elif w_kind == "explicit":
        values = [float(v) for v in _require(weight, "values", "weight")]
        weight["values"] = values
    elif w_kind == "profile":
        _require(weight, "path", "weight")
    else:
        raise errors.ValidationError(f"unknown weight kind {w_kind!r}")

    return RunConfig(
        domain_kind=kind,
        extents=extents,
        shape=shape,
        weight=weight,
        solve=dict(doc.get("solve", {})),
        optimize=dict(doc.get("optimize", {})),
        rearrange=dict(doc.get("rearrange", {})),
        simulate=dict(doc.get("simulate", {})),
        output_dir=str(doc.get("output_dir", "out")),
    )


def _cmd_solve(config: RunConfig, out: Path) -> int:
    grid = config.build_grid()
    m = config.build_weight(grid)
    pair = principal_eigenpair(
        m,
        solver=config.solve.get("solver", "dense"),
        tol=float(config.solve.get("tol", 1e-12)),
    )
    payload = eigenpair_payload(pair)
    payload["n_cells"] = grid.n_cells
    write_json(out / "eigenpair.json", payload)
    write_field_csv(out / "u.csv", pair.u, grid)
    if config.solve.get("dump_stiffness"):
        write_stiffness_coo(out / "stiffness.txt",
                            _assemble_stiffness(grid).entries)
    n_eigs = int(config.solve.get("spectrum", 0))
    if n_eigs > 0:
        write_spectrum_csv(out / "spectrum.csv", signed_spectrum(m, n_eigs))
    return EXIT_OK


def _cmd_optimize(config: RunConfig, out: Path, seed_override) -> int:
    grid = config.build_grid()
    cls = config.build_class(grid)
    opts = config.optimize
    seed = int(opts.get("seed", 0)) if seed_override is None \
        else int(seed_override)
    result = minimize_lambda1(
        cls, grid,
        max_iters=int(opts.get("max_iters", 200)),
        tol=float(opts.get("tol", 1e-12)),
        restarts=int(opts.get("restarts", 1)),
        seed=seed,
        solver=opts.get("solver", "dense"),
    )
    write_json(out / "optimization.json", optimization_payload(result))
    write_field_csv(out / "final_m.csv", result.final_m, grid)
    write_field_csv(out / "final_u.csv", result.final_pair.u, grid)
    return EXIT_OK if result.converged else EXIT_ITERATION_LIMIT


def _cmd_rearrange(config: RunConfig, out: Path) -> int:
    grid = config.build_grid()
    values = _weight_values(config.weight, grid)
    direction = config.rearrange.get("direction", "decreasing")
    cls = decreasing_rearrangement(values, grid)
    write_profile_csv(out / "profile.csv", cls)
    write_field_csv(out / "monotone_m.csv",
                    monotone_x1_rearrangement(values, grid, direction), grid)
    stripes = config.rearrange.get("stripes")
    if stripes:
        for k in stripes:
            field_k = oscillating_arrangement(cls, grid, int(k))
            write_field_csv(out / f"oscillating_k{int(k)}.csv", field_k, grid)
    return EXIT_OK


def _cmd_simulate(config: RunConfig, out: Path) -> int:
    grid = config.build_grid()
    m = config.build_weight(grid)
    opts = config.simulate
    v0_spec = opts.get("v0", 0.01)
    v0 = np.full(grid.n_cells, float(v0_spec)) \
        if np.isscalar(v0_spec) else np.asarray(v0_spec, dtype=float)
    traj = simulate_logistic(
        m,
        gamma=float(opts.get("gamma", 1.0)),
        v0=v0,
        dt=float(opts.get("dt", 0.01)),
        t_end=float(opts.get("t_end", 10.0)),
    )
    write_trajectory_csv(out / "trajectory.csv", traj)
    write_field_csv(out / "final_v.csv", traj.final_v, grid)
    write_json(out / "simulation.json", {
        "outcome": traj.outcome,
        "final_mass": float(traj.total_mass[-1]),
        "clamp_events": traj.clamp_events,
    })
    return EXIT_OK


def _cmd_verify(out: Path, seed: int, quiet: bool) -> int:
    results = run_all_checks(seed=seed)
    report = format_report(results)
    (out / "verify_report.txt").write_text(report)
    if not quiet:
        sys.stdout.write(report)
    return EXIT_OK if all(r.passed for r in results) else EXIT_SOLVER


def execute(config: RunConfig, command: str, out_dir=None,
            seed_override=None, quiet: bool = False) -> int:
    """Dispatch one subcommand; returns the process exit code."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if command == "solve":
            return _cmd_solve(config, out)
        if command == "optimize":
            return _cmd_optimize(config, out, seed_override)
        if command == "rearrange":
            return _cmd_rearrange(config, out)
        if command == "simulate":
            return _cmd_simulate(config, out)
        seed = 0 if seed_override is None else int(seed_override)
        return _cmd_verify(out, seed, quiet)
    except errors.ParseError as exc:
        if not quiet:
            print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _VALIDATION_ERRORS as exc:
        if not quiet:
            print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except errors.IterationLimit as exc:
        if not quiet:
            print(f"iteration limit: {exc}", file=sys.stderr)
        return EXIT_ITERATION_LIMIT
    except _SOLVER_ERRORS as exc:
        if not quiet:
            print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="eigenweight",
        description="Principal eigenvalues with sign-changing weights: "
                    "solve, optimize, rearrange, simulate, verify.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="path to the JSON run config "
                        "(required except for verify)")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed override for optimize/verify")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    if args.command == "verify" and args.config is None:
        config = RunConfig(domain_kind="interval", extents=(1.0,),
                           shape=(16,), weight={"kind": "bang_bang",
                                                "positive_value": 1.0,
                                                "negative_value": -2.0,
                                                "positive_fraction": 0.25})
        if args.out is None:
            args.out = "out"
    else:
        if args.config is None:
            parser.error("--config is required for this command")
        try:
            config = parse_config(Path(args.config).read_text())
        except errors.ParseError as exc:
            if not args.quiet:
                print(f"parse error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except errors.ValidationError as exc:
            if not args.quiet:
                print(f"validation error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION

    code = execute(config, args.command, out_dir=args.out,
                   seed_override=args.seed, quiet=args.quiet)
    if not args.quiet and code == EXIT_OK:
        print(f"{args.command}: ok")
    return code


if __name__ == "__main__":
    sys.exit(main())
