"""Command line front end.

Subcommands: ``solve`` (closed-form pulse design), ``classify`` (channel
regime), ``oracle`` (closed form vs brute-force cross-check), ``simulate``
(Monte Carlo verification of the designed link), ``sweep`` (evenly-spread
family over a p0 grid) and ``general`` (numerical optimization at general L).

Inputs come from flags, optionally underlaid by a JSON config file whose
recognized keys are ``p``, ``L``, ``sigma2``, ``trials``, ``samples``,
``seed`` and ``scattering``; flags override file values.  Output is JSON
(canonical: sorted keys, floats at 12 significant digits), CSV with fixed
per-command columns, or human-oriented text.  Exit codes: 0 success,
2 invalid input, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .bloch import (
    ChannelClass,
    ScatteringQuad,
    classify_channel,
    solve_fidelity,
)
from .errors import InvalidConfigError, WHPrecodeError
from .linalg import rank_one_projector
from .mc import estimate_expectations, sweep_p0
from .multiplex import best_scheme, select_schemes
from .optimize import (
    OptimizerConfig,
    alternating_fidelity_max,
    brute_force_bloch_oracle,
    fidelity_lower_bound_search,
)
from .wssus import ScatteringFunction

_CONFIG_KEYS = ("p", "L", "sigma2", "trials", "samples", "seed", "scattering")
_DEFAULTS = {"L": 2, "sigma2": 0.1, "trials": 100_000, "samples": 100_000, "seed": 0}
_QUAD_COMMANDS = ("solve", "classify", "oracle", "simulate")
_CASE_NUMBERS = {
    ChannelClass.NON_DISPERSIVE: 1,
    ChannelClass.SINGLE_DISPERSIVE: 2,
    ChannelClass.UNDERSPREAD: 3,
    ChannelClass.COMPLETELY_OVERSPREAD: 4,
}
_CASE_NARRATIVES = {
    ChannelClass.NON_DISPERSIVE: "all power on a single shift: flat fading, gain 1 with any pulse",
    ChannelClass.SINGLE_DISPERSIVE: "dispersion confined to one shift axis: gain 1 with the matching pulse",
    ChannelClass.UNDERSPREAD: "a dominant weight above one half keeps the gain above one half",
    ChannelClass.COMPLETELY_OVERSPREAD: "uniform weights over all four shifts: gain pinned at the floor 1/2",
    ChannelClass.GENERIC: "doubly dispersive profile without a dominant weight",
}


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one invocation."""

    command: str
    quad: ScatteringQuad | None
    scattering: ScatteringFunction | None
    L: int
    sigma2: float
    trials: int
    samples: int
    seed: int
    output_format: str
    output_path: str | None


def _build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset flags off the namespace entirely, so flags may
    # appear before or after the subcommand without the subparser's
    # defaults clobbering values parsed at the top level.
    absent = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", default=absent, metavar="P0,P1,P2,P3",
                        help="four scattering weights, comma separated")
    common.add_argument("--p0", type=float, default=absent, help="weight of the identity shift")
    common.add_argument("--p1", type=float, default=absent, help="weight of the time shift")
    common.add_argument("--p2", type=float, default=absent, help="weight of the joint shift")
    common.add_argument("--p3", type=float, default=absent, help="weight of the frequency shift")
    common.add_argument("--L", type=int, default=absent, help="signal space dimension")
    common.add_argument("--sigma2", type=float, default=absent, help="noise power (default 0.1)")
    common.add_argument("--trials", type=int, default=absent, help="Monte Carlo trials (default 1e5)")
    common.add_argument("--samples", type=int, default=absent, help="oracle/search samples (default 1e5)")
    common.add_argument("--seed", type=int, default=absent, help="master RNG seed (default 0)")
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"),
                        default=absent, help="output format (default json)")
    common.add_argument("--out", default=absent, metavar="PATH", help="write output to PATH")
    common.add_argument("--config", default=absent, metavar="PATH", help="JSON config file")

    parser = argparse.ArgumentParser(
        prog="whprecode",
        description="Design and verify statistics-adapted pulses for dispersive channels.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="closed-form optimal pulses and schemes")
    sub.add_parser("classify", parents=[common], help="qualitative channel regime")
    sub.add_parser("oracle", parents=[common], help="closed form vs brute-force cross-check")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo link verification")
    sub.add_parser("sweep", parents=[common], help="evenly-spread family over a p0 grid")
    sub.add_parser("general", parents=[common], help="numerical optimization at general L")
    return parser


def _load_config_file(path: str, violations: list[str]) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        violations.append(f"config: cannot read {path}: {exc}")
        return {}
    except json.JSONDecodeError as exc:
        violations.append(f"config: invalid JSON in {path}: {exc}")
        return {}
    if not isinstance(data, dict):
        violations.append("config: top level must be a JSON object")
        return {}
    for key in data:
        if key not in _CONFIG_KEYS:
            violations.append(f"config: unknown key {key!r}")
    return data


def _merge_scalar(name, flag_value, file_cfg, violations, kind):
    value = flag_value
    if value is None and name in file_cfg:
        raw = file_cfg[name]
        ok_types = int if kind is int else (int, float)
        if isinstance(raw, bool) or not isinstance(raw, ok_types):
            noun = "an integer" if kind is int else "a number"
            violations.append(f"{name}: must be {noun}, got {raw!r}")
        else:
            value = kind(raw)
    if value is None:
        value = _DEFAULTS[name]
    return value


def _assemble_quad(args, file_cfg, violations) -> ScatteringQuad | None:
    components: list[float | None] = [None, None, None, None]
    if "p" in file_cfg:
        raw = file_cfg["p"]
        if not isinstance(raw, list) or len(raw) != 4 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
        ):
            violations.append("p: config value must be a list of four numbers")
        else:
            components = [float(v) for v in raw]
    p_flag = getattr(args, "p", None)
    if p_flag is not None:
        parts = p_flag.split(",")
        try:
            parsed = [float(v) for v in parts]
        except ValueError:
            parsed = []
        if len(parsed) != 4:
            violations.append("p: expected four comma-separated numbers")
        else:
            components = parsed
    for i, name in enumerate(("p0", "p1", "p2", "p3")):
        flag = getattr(args, name, None)
        if flag is not None:
            components[i] = float(flag)
    if all(v is None for v in components):
        return None
    if any(v is None for v in components):
        missing = [f"p{i}" for i, v in enumerate(components) if v is None]
        violations.append(f"p: all four weights are required (missing {', '.join(missing)})")
        return None
    try:
        return ScatteringQuad(*components)
    except WHPrecodeError as exc:
        violations.append(f"p: {exc}")
        return None


def _assemble_scattering(file_cfg, L, quad, violations) -> ScatteringFunction | None:
    raw = file_cfg.get("scattering")
    if raw is not None:
        grid = np.asarray(raw, dtype=float)
        if grid.ndim == 1 and grid.size == L * L:
            grid = grid.reshape(L, L)
        if grid.shape != (L, L):
            violations.append(
                f"scattering: must be an {L}x{L} grid (nested or flat row-major), got shape {grid.shape}"
            )
            return None
        try:
            return ScatteringFunction(L, grid)
        except WHPrecodeError as exc:
            violations.append(f"scattering: {exc}")
            return None
    if quad is not None and L == 2:
        return quad.to_scattering_function()
    return None


def parse_config(argv=None) -> RunConfig:
    """Parse flags and optional config file into a validated RunConfig.

    Every violation found is reported at once, each naming the offending
    field, via InvalidConfigError.
    """
    args = _build_parser().parse_args(argv)
    violations: list[str] = []
    config_path = getattr(args, "config", None)
    file_cfg = _load_config_file(config_path, violations) if config_path else {}

    L = _merge_scalar("L", getattr(args, "L", None), file_cfg, violations, int)
    sigma2 = _merge_scalar("sigma2", getattr(args, "sigma2", None), file_cfg, violations, float)
    trials = _merge_scalar("trials", getattr(args, "trials", None), file_cfg, violations, int)
    samples = _merge_scalar("samples", getattr(args, "samples", None), file_cfg, violations, int)
    seed = _merge_scalar("seed", getattr(args, "seed", None), file_cfg, violations, int)

    if L < 1:
        violations.append(f"L: must be >= 1, got {L}")
    if sigma2 < 0.0:
        violations.append(f"sigma2: must be >= 0, got {sigma2}")
    if args.command in ("simulate", "sweep") and trials < 2:
        violations.append(f"trials: must be >= 2 for '{args.command}', got {trials}")
    if args.command in ("oracle", "general") and samples < 1:
        violations.append(f"samples: must be >= 1, got {samples}")

    quad = _assemble_quad(args, file_cfg, violations)
    if args.command in _QUAD_COMMANDS:
        if quad is None and not any(v.startswith("p:") for v in violations):
            violations.append("p: four scattering weights are required (--p or --p0..--p3)")
        if L != 2:
            violations.append(f"L: command '{args.command}' is defined for L=2, got {L}")

    scattering = None
    if args.command == "general" and L >= 1:
        scattering = _assemble_scattering(file_cfg, L, quad, violations)
        if scattering is None and not any(v.startswith("scattering:") for v in violations):
            violations.append(
                "scattering: an LxL weight grid is required for 'general' "
                "(config key 'scattering', or --p at L=2)"
            )

    if violations:
        raise InvalidConfigError("; ".join(violations))
    return RunConfig(
        command=args.command,
        quad=quad,
        scattering=scattering,
        L=L,
        sigma2=sigma2,
        trials=trials,
        samples=samples,
        seed=seed,
        output_format=getattr(args, "output_format", None) or "json",
        output_path=getattr(args, "out", None),
    )


def _complex_pairs(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _scheme_doc(scheme) -> list[list[int]]:
    return [[int(m), int(n)] for m, n in scheme]


def _family_flags(quad: ScatteringQuad) -> tuple[bool, bool]:
    rest = (quad.p1, quad.p2, quad.p3)
    worst = max(rest) - min(rest) <= 1e-9
    best = sum(1 for v in rest if v <= 1e-9) == 2 and max(rest) > 1e-9
    return worst, best


def _cmd_solve(cfg: RunConfig) -> dict:
    solution = solve_fidelity(cfg.quad)
    return {
        "command": "solve",
        "p": [float(v) for v in cfg.quad.as_tuple()],
        "fidelity": solution.fidelity,
        "n_star": solution.n_star,
        "sign": solution.sign,
        "degenerate": solution.degenerate,
        "tied": list(solution.tied),
        "x_opt": [float(v) for v in solution.x_opt],
        "y_opt": [float(v) for v in solution.y_opt],
        "precoder": _complex_pairs(solution.precoder),
        "equalizer": _complex_pairs(solution.equalizer),
        "channel_class": classify_channel(cfg.quad).value,
        "schemes": [_scheme_doc(s) for s in select_schemes(solution.n_star)],
    }


def _cmd_classify(cfg: RunConfig) -> dict:
    channel_class = classify_channel(cfg.quad)
    worst, best = _family_flags(cfg.quad)
    case = _CASE_NUMBERS.get(channel_class)
    if case is None:
        case = 5 if worst else (6 if best else None)
    narrative = _CASE_NARRATIVES[channel_class]
    if worst:
        narrative += "; evenly spread off-origin power (gain-minimizing family for this p0)"
    if best:
        narrative += "; off-origin power on one axis (gain-maximizing family for this p0)"
    return {
        "command": "classify",
        "p": [float(v) for v in cfg.quad.as_tuple()],
        "channel_class": channel_class.value,
        "case": case,
        "narrative": narrative,
        "fidelity": solve_fidelity(cfg.quad).fidelity,
        "worst_case_family": worst,
        "best_case_family": best,
    }


def _cmd_oracle(cfg: RunConfig) -> dict:
    closed = solve_fidelity(cfg.quad).fidelity
    with_axes = brute_force_bloch_oracle(cfg.quad, cfg.samples, include_axes=True, seed=cfg.seed)
    random_only = brute_force_bloch_oracle(cfg.quad, cfg.samples, include_axes=False, seed=cfg.seed)
    return {
        "command": "oracle",
        "p": [float(v) for v in cfg.quad.as_tuple()],
        "samples": cfg.samples,
        "seed": cfg.seed,
        "closed_form": closed,
        "oracle_axes": with_axes,
        "oracle_random": random_only,
        "gap_axes": closed - with_axes,
        "gap_random": closed - random_only,
    }


def _cmd_simulate(cfg: RunConfig) -> dict:
    solution = solve_fidelity(cfg.quad)
    C = cfg.quad.to_scattering_function()
    scheme = best_scheme(
        C,
        rank_one_projector(solution.precoder),
        rank_one_projector(solution.equalizer),
        solution.n_star,
    )
    report = estimate_expectations(
        C,
        solution.precoder,
        solution.equalizer,
        scheme,
        sigma2=cfg.sigma2,
        trials=cfg.trials,
        seed=cfg.seed,
    )
    return {
        "command": "simulate",
        "p": [float(v) for v in cfg.quad.as_tuple()],
        "sigma2": cfg.sigma2,
        "trials": report.trials,
        "seed": report.seed,
        "fidelity": solution.fidelity,
        "n_star": solution.n_star,
        "precoder": _complex_pairs(solution.precoder),
        "equalizer": _complex_pairs(solution.equalizer),
        "scheme": _scheme_doc(scheme),
        "mean_gain": report.mean_gain,
        "stderr_gain": report.stderr_gain,
        "mean_interf": report.mean_interf,
        "stderr_interf": report.stderr_interf,
        "analytic_gain": report.analytic_gain,
        "analytic_interf": report.analytic_interf,
        "sinr_empirical": report.sinr_empirical,
        "sinr_analytic": report.sinr_analytic,
    }


def _cmd_sweep(cfg: RunConfig) -> dict:
    grid = [i / 100.0 for i in range(101)]
    rows = sweep_p0(grid, trials=cfg.trials, seed=cfg.seed)
    return {
        "command": "sweep",
        "trials": cfg.trials,
        "seed": cfg.seed,
        "points": len(rows),
        "rows": [
            {
                "p0": row.p0,
                "fidelity": row.fidelity,
                "mc_gain": row.mc_gain,
                "stderr": row.stderr,
            }
            for row in rows
        ],
    }


def _cmd_general(cfg: RunConfig) -> dict:
    C = cfg.scattering
    lower = fidelity_lower_bound_search(C, cfg.L, cfg.samples, seed=cfg.seed)
    trace = alternating_fidelity_max(C, cfg.L, OptimizerConfig(seed=cfg.seed))
    return {
        "command": "general",
        "L": cfg.L,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "scattering": [[float(v) for v in row] for row in C.weights],
        "lower_bound": lower,
        "alternating": {
            "best_value": trace.best_value,
            "converged": trace.converged,
            "restarts": len(trace.restart_values),
            "half_steps": len(trace.objective_history),
            "restart_values": list(trace.restart_values),
        },
    }


_COMMANDS = {
    "solve": _cmd_solve,
    "classify": _cmd_classify,
    "oracle": _cmd_oracle,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "general": _cmd_general,
}


def dispatch(cfg: RunConfig) -> dict:
    """Run the configured command and return its report document."""
    return _COMMANDS[cfg.command](cfg)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _canonical(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    return value


def render_json(doc: dict) -> str:
    """Canonical JSON: sorted keys, floats at 12 significant digits."""
    return json.dumps(_canonical(doc), sort_keys=True, indent=2) + "\n"


def _flatten_for_csv(doc: dict) -> dict:
    flat = {}
    for key, value in doc.items():
        if key in ("command", "rows"):
            continue
        if key == "p":
            for i, v in enumerate(value):
                flat[f"p{i}"] = _fmt(v)
        elif key in ("precoder", "equalizer"):
            flat[key] = ";".join(f"{re:.12g}{im:+.12g}j" for re, im in value)
        elif key == "scheme":
            flat[key] = "|".join(f"{m},{n}" for m, n in value)
        elif key == "schemes":
            flat[key] = " ".join(
                "|".join(f"{m},{n}" for m, n in scheme) for scheme in value
            )
        elif key in ("tied", "x_opt", "y_opt"):
            flat[key] = "|".join(_fmt(v) for v in value)
        elif key == "scattering":
            flat[key] = "|".join(_fmt(v) for row in value for v in row)
        elif key == "alternating":
            flat["alternating_best"] = _fmt(value["best_value"])
            flat["alternating_converged"] = _fmt(value["converged"])
            flat["restarts"] = _fmt(value["restarts"])
        else:
            flat[key] = _fmt(value)
    return flat


def render_csv(doc: dict) -> str:
    """Fixed per-command columns; sweep emits one row per grid point."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if doc["command"] == "sweep":
        writer.writerow(["p0", "fidelity", "mc_gain", "stderr"])
        for row in doc["rows"]:
            writer.writerow(
                [_fmt(row["p0"]), _fmt(row["fidelity"]), _fmt(row["mc_gain"]), _fmt(row["stderr"])]
            )
    else:
        flat = _flatten_for_csv(doc)
        writer.writerow(list(flat))
        writer.writerow(list(flat.values()))
    return buffer.getvalue()


def render_text(doc: dict) -> str:
    """Human-oriented key/value lines; format carries no stability guarantee."""
    lines = []
    for key, value in doc.items():
        if key == "rows":
            lines.append("p0      fidelity        mc_gain         stderr")
            for row in value:
                lines.append(
                    f"{row['p0']:<8.4g}{row['fidelity']:<16.10g}"
                    f"{row['mc_gain']:<16.10g}{row['stderr']:.4g}"
                )
        elif isinstance(value, dict):
            for sub_key, sub_value in value.items():
                lines.append(f"{key}.{sub_key}: {_fmt_nested(sub_value)}")
        else:
            lines.append(f"{key}: {_fmt_nested(value)}")
    return "\n".join(lines) + "\n"


def _fmt_nested(value) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt_nested(v) for v in value) + "]"
    return _fmt(value)


_RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    try:
        cfg = parse_config(argv)
    except InvalidConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        doc = dispatch(cfg)
    except WHPrecodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    rendered = _RENDERERS[cfg.output_format](doc)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
