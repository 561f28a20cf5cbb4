"""Batch command-line front end.

Subcommands: spectrum, phase-grid, zak, open-spectrum, edge-modes,
boundaries. Every command reads the model couplings from the common flags
--t --mu --da --db (or from a JSON config given with --config; flags
override file values) and writes a CSV or JSON file to --out.

Output is deterministic: floats are printed with 17 significant digits,
lines end with a bare newline, JSON keys keep insertion order, and sweep
rows are emitted in ascending grid order. Exit codes: 0 success, 2 config
error, 3 physics-domain refusal, 4 numerical non-convergence.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import biortho, bogoliubov, phases, realspace
from .biortho import Band, PhaseDomainError
from .model import ModelParams, dispersion
from .numerics import NonConvergenceError
from .realspace import AnalyticCaseError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NONCONVERGENCE = 4

SWEEP_AXES = ("mu", "delta_a", "delta_b", "product")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: ModelParams
    nk: int
    n_sites: int
    output_path: str
    fmt: str
    band: str = "plus"
    sweep: tuple | None = None          # (axis, start, stop, steps)
    grid: tuple | None = None           # (axes, start1, stop1, steps1, start2, stop2, steps2)
    resolution: int = 16
    midgap_tol: float = realspace.MIDGAP_TOL
    physical_units: bool = False


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_table(cfg: RunConfig, header: list[str], rows: list[list]) -> None:
    if cfg.fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(c) if isinstance(c, float) else str(c) for c in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = [
            {h: (_fmt(c) if isinstance(c, float) else c) for h, c in zip(header, row)}
            for row in rows
        ]
        text = json.dumps(payload, indent=1) + "\n"
    with open(cfg.output_path, "w", newline="\n") as fh:
        fh.write(text)


def _apply_axis(params: ModelParams, axis: str, value: float) -> ModelParams:
    """One sweep point. The 'product' axis sets the balanced pairing
    delta_a = delta_b = value, so sqrt(delta_a delta_b) = |value|."""
    if axis == "mu":
        return ModelParams(params.t, value, params.delta_a, params.delta_b)
    if axis == "delta_a":
        return ModelParams(params.t, params.mu, value, params.delta_b)
    if axis == "delta_b":
        return ModelParams(params.t, params.mu, params.delta_a, value)
    if axis == "product":
        return ModelParams(params.t, params.mu, value, value)
    raise ConfigError(f"unknown sweep axis {axis!r}")


def cmd_spectrum(cfg: RunConfig) -> None:
    if cfg.nk < 2:
        raise ConfigError(f"spectrum requires nk >= 2, got {cfg.nk}")
    rows = []
    for m in range(cfg.nk):
        k = 2.0 * math.pi * m / cfg.nk
        eps = dispersion(cfg.params, k).epsilon
        rows.append([float(k), float(eps.real), float(eps.imag)])
    _write_table(cfg, ["k", "re_epsilon", "im_epsilon"], rows)


def cmd_phase_grid(cfg: RunConfig) -> None:
    if cfg.grid is None:
        raise ConfigError("phase-grid requires --axes/--range1/--range2")
    axes, lo1, hi1, n1, lo2, hi2, n2 = cfg.grid
    if n1 < 2 or n2 < 2:
        raise ConfigError("grid steps must be >= 2")
    if axes not in ("delta_a,delta_b", "mu,product"):
        raise ConfigError(f"unsupported grid axes {axes!r}")
    a1 = np.linspace(lo1, hi1, n1)
    a2 = np.linspace(lo2, hi2, n2)
    rows = []
    for v1 in a1:
        for v2 in a2:
            if axes == "delta_a,delta_b":
                p = ModelParams(cfg.params.t, cfg.params.mu, float(v1), float(v2))
            else:
                p = _apply_axis(_apply_axis(cfg.params, "mu", float(v1)), "product", float(v2))
            label = phases.classify(p)
            zak = _fmt(label.zak_value) if label.zak_value is not None else ""
            rows.append([p.delta_a, p.delta_b, p.mu, label.kind.value, zak])
    _write_table(cfg, ["delta_a", "delta_b", "mu", "label", "zak"], rows)


def cmd_zak(cfg: RunConfig) -> None:
    if cfg.nk < biortho.MIN_WILSON_NK:
        raise ConfigError(f"zak requires nk >= {biortho.MIN_WILSON_NK}, got {cfg.nk}")
    res = biortho.zak_phase(cfg.params, Band(cfg.band), cfg.nk)
    payload = {
        "params": {
            "t": cfg.params.t,
            "mu": cfg.params.mu,
            "delta_a": cfg.params.delta_a,
            "delta_b": cfg.params.delta_b,
        },
        "band": res.band.value,
        "nk": res.nk,
        "zak": res.value,
        "converged": res.converged,
    }
    with open(cfg.output_path, "w", newline="\n") as fh:
        fh.write(json.dumps(payload, indent=1) + "\n")


def _sweep_values(cfg: RunConfig) -> list[float]:
    if cfg.sweep is None:
        return []
    axis, start, stop, steps = cfg.sweep
    if steps < 2:
        raise ConfigError("sweep steps must be >= 2")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}")
    return [float(v) for v in np.linspace(start, stop, steps)]


def cmd_open_spectrum(cfg: RunConfig) -> None:
    values = _sweep_values(cfg)
    points = values if values else [None]
    axis = cfg.sweep[0] if cfg.sweep else None
    rows = []
    n = cfg.n_sites
    for v in points:
        p = cfg.params if v is None else _apply_axis(cfg.params, axis, v)
        if p.pairing_product <= 0.0:
            raise PhaseDomainError(
                f"open-spectrum requires delta_a * delta_b > 0, got {p.pairing_product}"
            )
        system = realspace.build_system(p, n)
        energies = realspace.open_spectrum(system, cfg.physical_units)
        n_midgap = int(np.count_nonzero(np.abs(energies) < cfg.midgap_tol))
        rows.append([0.0 if v is None else v, n_midgap] + [float(e) for e in energies])
    header = ["sweep_value", "n_midgap"] + [f"e_{i}" for i in range(2 * n)]
    _write_table(cfg, header, rows)


def cmd_edge_modes(cfg: RunConfig) -> None:
    profile = realspace.edge_states(cfg.params, cfg.n_sites)
    _, _, fn = realspace.zero_mode_f(cfg.params, cfg.n_sites)
    fbar, fplain = realspace.canonical_zero_modes(cfg.params, cfg.n_sites)
    system = realspace.build_system(cfg.params, cfg.n_sites)
    residual = float(np.linalg.norm(system.h_nonhermitian @ fplain.coefficients))
    overlap = realspace.kernel_overlap(cfg.params, cfg.n_sites)
    omega, omega_p = realspace.omega_constants(
        cfg.params.mu / cfg.params.t, cfg.n_sites
    )
    rows = [
        [j + 1, float(profile.amplitudes_left[j]), float(profile.amplitudes_right[j])]
        for j in range(cfg.n_sites)
    ]
    _write_table(cfg, ["j", "psi_left", "psi_right"], rows)
    sidecar = {
        "omega": omega,
        "omega_prime": omega_p,
        "residual": residual,
        "kernel_overlap": overlap,
    }
    with open(cfg.output_path + ".meta.json", "w", newline="\n") as fh:
        fh.write(json.dumps(sidecar, indent=1) + "\n")


def cmd_boundaries(cfg: RunConfig) -> None:
    if cfg.resolution < 8:
        raise ConfigError(f"boundaries requires resolution >= 8, got {cfg.resolution}")
    samples = phases.boundary_surfaces(cfg.resolution)
    rows = [[s.surface_id, s.delta_a, s.delta_b, s.mu] for s in samples]
    _write_table(cfg, ["surface_id", "delta_a", "delta_b", "mu"], rows)


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "phase-grid": cmd_phase_grid,
    "zak": cmd_zak,
    "open-spectrum": cmd_open_spectrum,
    "edge-modes": cmd_edge_modes,
    "boundaries": cmd_boundaries,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhkitaev",
        description="Kitaev chain with imbalanced pairing: batch data generation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--t", type=float, default=None)
        p.add_argument("--mu", type=float, default=None)
        p.add_argument("--da", type=float, default=None, help="pair-creation strength delta_a")
        p.add_argument("--db", type=float, default=None, help="pair-annihilation strength delta_b")
        p.add_argument("--nk", type=int, default=None)
        p.add_argument("--n-sites", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--config", type=str, default=None, help="JSON config file; flags override")
        if name == "zak":
            p.add_argument("--band", choices=("plus", "minus"), default=None)
        if name == "open-spectrum":
            p.add_argument("--sweep", type=str, default=None,
                           help="axis=start:stop:steps with axis in mu|delta_a|delta_b|product")
            p.add_argument("--midgap-tol", type=float, default=None)
            p.add_argument("--physical-units", action="store_true", default=None)
        if name == "phase-grid":
            p.add_argument("--axes", type=str, default=None,
                           help="'delta_a,delta_b' (fixed mu) or 'mu,product'")
            p.add_argument("--range1", type=str, default=None, help="start:stop:steps")
            p.add_argument("--range2", type=str, default=None, help="start:stop:steps")
        if name == "boundaries":
            p.add_argument("--resolution", type=int, default=None)
    return parser


def _parse_range(text: str) -> tuple[float, float, int]:
    try:
        start, stop, steps = text.split(":")
        return float(start), float(stop), int(steps)
    except ValueError as exc:
        raise ConfigError(f"malformed range {text!r}, expected start:stop:steps") from exc


def _merged(args: argparse.Namespace) -> dict:
    merged: dict = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path) as fh:
                merged.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        merged[key.replace("-", "_")] = value
    return merged


def _run_config(command: str, merged: dict) -> RunConfig:
    try:
        params = ModelParams(
            t=float(merged.get("t", 1.0)),
            mu=float(merged.get("mu", 0.0)),
            delta_a=float(merged.get("da", merged.get("delta_a", 1.0))),
            delta_b=float(merged.get("db", merged.get("delta_b", 1.0))),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    out = merged.get("out", merged.get("output_path"))
    if not out:
        raise ConfigError("--out is required")
    sweep = None
    if merged.get("sweep"):
        text = merged["sweep"]
        if "=" not in text:
            raise ConfigError(f"malformed sweep {text!r}, expected axis=start:stop:steps")
        axis, rng = text.split("=", 1)
        sweep = (axis.strip(), *_parse_range(rng))
    grid = None
    if command == "phase-grid":
        axes = merged.get("axes", "delta_a,delta_b")
        r1 = _parse_range(merged.get("range1", "-2:2:81"))
        r2 = _parse_range(merged.get("range2", "-2:2:81"))
        grid = (axes, *r1, *r2)
    return RunConfig(
        command=command,
        params=params,
        nk=int(merged.get("nk", 256)),
        n_sites=int(merged.get("n_sites", 50)),
        output_path=str(out),
        fmt=str(merged.get("format", "csv")),
        band=str(merged.get("band", "plus")),
        sweep=sweep,
        grid=grid,
        resolution=int(merged.get("resolution", 16)),
        midgap_tol=float(merged.get("midgap_tol", realspace.MIDGAP_TOL)),
        physical_units=bool(merged.get("physical_units", False)),
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _run_config(args.command, _merged(args))
        _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, (PhaseDomainError, AnalyticCaseError)):
            print(f"refused: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
