"""Command-line frontend: parameter sweeps, figure data, packet runs, checks.

Output is deterministic CSV: a `#` provenance line echoing the configuration,
a header line, then rows with 17-significant-digit floats.

Exit codes: 0 success, 1 domain/config error, 2 numeric non-convergence,
3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import scattering as sc
from . import wavepacket as wp
from .errors import DomainError, NonConvergenceError
from .kinematics import NormalizationMode, barrier_from_dimensionless, kinematics_from_dimensionless, normalize_time
from .verify import run_all_checks

_NORM_NAMES = {"abs": NormalizationMode.ABSOLUTE, "tauk": NormalizationMode.BY_TAU_K, "tauw": NormalizationMode.BY_TAU_W}
_SYM_NAMES = {
    "plus": wp.Symmetrization.PLUS,
    "minus": wp.Symmetrization.MINUS,
    "single": wp.Symmetrization.SINGLE_LEFT,
}


@dataclass
class RunConfig:
    command: str = "times"
    wl: float = 4.0 * math.pi
    n: float = 0.5                      # packet operating point
    n_min: float = 0.01
    n_max: float = 0.99
    n_steps: int = 99
    sigma_rel: float = 0.01
    delta: float = 0.0
    sym: str = "plus"
    norm: str = "tauk"
    out: str = ""
    seed: int = 20260809
    nodes: int = wp.DEFAULT_K_NODES
    fig1_n: tuple[float, ...] = (0.25, 0.5, 0.75)
    scan_wl: tuple[float, ...] = sc.DEFAULT_SCAN_WL

    def validate(self) -> None:
        if not (0.0 < self.n_min < self.n_max):
            raise DomainError(f"need 0 < n_min < n_max, got {self.n_min}, {self.n_max}")
        if self.n_steps < 2:
            raise DomainError("n_steps must be at least 2")
        if not (self.wl > 0.0):
            raise DomainError("wl must be positive")
        if self.sym not in _SYM_NAMES:
            raise DomainError(f"unknown symmetrization {self.sym!r}")
        if self.norm not in _NORM_NAMES:
            raise DomainError(f"unknown normalization {self.norm!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise DomainError(f"bad numeric list {text!r}") from exc


def load_config_file(path: str) -> dict:
    """Plain `key = value` configuration, `#` comments, UTF-8."""
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DomainError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in line.split("=", 1))
                values[key] = value
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc}") from exc
    return values


def _apply_config_values(cfg: RunConfig, values: dict) -> None:
    converters = {
        "wl": float, "n": float, "n_min": float, "n_max": float, "n_steps": int,
        "sigma_rel": float, "delta": float, "sym": str, "norm": str, "out": str,
        "seed": int, "nodes": int, "fig1_n": _parse_float_list, "scan_wl": _parse_float_list,
    }
    known = {f.name for f in fields(RunConfig)}
    for key, value in values.items():
        if key not in known or key == "command":
            raise DomainError(f"unknown config key {key!r}")
        try:
            setattr(cfg, key, converters[key](value))
        except ValueError as exc:
            raise DomainError(f"bad value for {key!r}: {value!r}") from exc


# ---------------------------------------------------------------------------
# CSV output


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _provenance(cfg: RunConfig, extra: str = "") -> str:
    core = (
        f"# tunneltimes {cfg.command} wl={_fmt(cfg.wl)} n={_fmt(cfg.n)}"
        f" n_min={_fmt(cfg.n_min)} n_max={_fmt(cfg.n_max)} n_steps={cfg.n_steps}"
        f" sigma_rel={_fmt(cfg.sigma_rel)} delta={_fmt(cfg.delta)}"
        f" sym={cfg.sym} norm={cfg.norm} seed={cfg.seed}"
    )
    return core + (" " + extra if extra else "")


def write_csv(path: str, provenance: str, header: list[str], rows: list[list], trailer: str = "") -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(provenance + "\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
            if trailer:
                fh.write(trailer + "\n")
    except OSError as exc:
        raise DomainError(f"cannot write output file {path}: {exc}") from exc


def _worker_count() -> int:
    raw = os.environ.get("TUNNELTIMES_THREADS", "")
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise DomainError(f"TUNNELTIMES_THREADS must be an integer, got {raw!r}")
    if count == 0:
        return os.cpu_count() or 1
    return max(1, count)


def _sweep(fn, values):
    """Map fn over values, optionally fanning out; output keeps input order."""
    workers = _worker_count()
    if workers <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


# ---------------------------------------------------------------------------
# Commands


def _n_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.n_min, cfg.n_max, cfg.n_steps)


def cmd_times(cfg: RunConfig) -> int:
    mode = _NORM_NAMES[cfg.norm]

    def row(n: float) -> list:
        kin = kinematics_from_dimensionless(float(n), cfg.wl)
        bundle = sc.time_bundle(kin)
        return [
            float(n),
            abs(kin.alpha),
            normalize_time(bundle.t_T, mode, kin),
            normalize_time(bundle.t_T_phi, mode, kin),
            normalize_time(bundle.t_D_phi, mode, kin),
            normalize_time(bundle.t_I_phi, mode, kin),
        ]

    rows = _sweep(row, _n_grid(cfg))
    write_csv(
        cfg.out or "times.csv",
        _provenance(cfg),
        ["n", "alpha", "t_T", "t_T_phi", "t_D_phi", "t_I_phi"],
        rows,
    )
    return 0


def cmd_figure1(cfg: RunConfig) -> int:
    """Standard vs symmetric group delay against barrier opacity, per n."""
    mode = _NORM_NAMES[cfg.norm]
    wls = np.linspace(math.pi / 4.0, cfg.wl, cfg.n_steps)
    rows = []
    for n in cfg.fig1_n:
        def row(wl: float, n=n) -> list:
            kin = kinematics_from_dimensionless(float(n), float(wl))
            saturation = 2.0 * kin.m / (kin.k * kin.rho.real) if 0 < n < 1 else math.nan
            return [
                float(n),
                float(wl),
                abs(kin.alpha),
                normalize_time(sc.standard_phase_time(kin), mode, kin),
                normalize_time(sc.symmetric_phase_time(kin), mode, kin),
                normalize_time(saturation, mode, kin),
            ]

        rows.extend(_sweep(row, wls))
    write_csv(
        cfg.out or "figure1.csv",
        _provenance(cfg, extra=f"fig1_n={','.join(_fmt(v) for v in cfg.fig1_n)}"),
        ["n", "wl", "alpha", "t_T", "t_T_phi", "saturation_limit"],
        rows,
    )
    return 0


def cmd_figure2(cfg: RunConfig) -> int:
    """All four times across n at fixed wL, in both normalizations."""

    def row(n: float) -> list:
        kin = kinematics_from_dimensionless(float(n), cfg.wl)
        bundle = sc.time_bundle(kin)
        by_w = [normalize_time(t, NormalizationMode.BY_TAU_W, kin)
                for t in (bundle.t_T, bundle.t_T_phi, bundle.t_D_phi, bundle.t_I_phi)]
        by_k = [normalize_time(t, NormalizationMode.BY_TAU_K, kin)
                for t in (bundle.t_T, bundle.t_T_phi, bundle.t_D_phi, bundle.t_I_phi)]
        return [float(n), abs(kin.alpha), *by_w, *by_k]

    rows = _sweep(row, _n_grid(cfg))
    write_csv(
        cfg.out or "figure2.csv",
        _provenance(cfg),
        [
            "n", "alpha",
            "t_T_tauw", "t_T_phi_tauw", "t_D_phi_tauw", "t_I_phi_tauw",
            "t_T_tauk", "t_T_phi_tauk", "t_D_phi_tauk", "t_I_phi_tauk",
        ],
        rows,
    )
    return 0


def cmd_packet(cfg: RunConfig) -> int:
    b = barrier_from_dimensionless(cfg.wl)
    k0 = math.sqrt(cfg.n) * b.w
    spec = wp.PacketSpec(
        k0=k0,
        sigma_k=cfg.sigma_rel * k0,
        delta=cfg.delta,
        symmetrization=_SYM_NAMES[cfg.sym],
    )
    result = wp.measure_collision_delay(b, spec, n_nodes=cfg.nodes)
    base = cfg.out or "packet"
    for i, snap in enumerate(result.snapshots):
        xs = snap.grid.positions()
        rows = [
            [float(x), float(p.real), float(p.imag), float(abs(p)) ** 2]
            for x, p in zip(xs, snap.psi)
        ]
        write_csv(
            f"{base}_snapshot_{i:03d}.csv",
            _provenance(cfg, extra=f"t={_fmt(snap.t)}"),
            ["x", "re_psi", "im_psi", "abs2"],
            rows,
        )
    est = result.estimate
    rel_vs_k0 = abs(est.delay - result.group_delay_k0) / result.group_delay_k0
    rel_vs_pred = abs(est.delay - result.prediction) / abs(result.prediction)
    write_csv(
        f"{base}_report.csv",
        _provenance(cfg),
        [
            "delay", "uncertainty", "group_delay_k0", "prediction",
            "phase_time_average", "rel_err_vs_k0", "rel_err_vs_prediction",
            "peak_delay", "fit_velocity",
        ],
        [[
            est.delay, est.uncertainty, result.group_delay_k0, result.prediction,
            result.phase_time_average, rel_vs_k0, rel_vs_pred,
            result.peak_estimate.delay, result.fit_velocity,
        ]],
    )
    print(
        f"extracted delay {est.delay:.9g} (uncertainty {est.uncertainty:.3g}); "
        f"group delay at k0 {result.group_delay_k0:.9g} (rel. diff {rel_vs_k0:.3g}); "
        f"distribution prediction {result.prediction:.9g} (rel. diff {rel_vs_pred:.3g})"
    )
    return 0


def cmd_scan(cfg: RunConfig, explicit_grid: bool) -> int:
    grid = _n_grid(cfg) if explicit_grid else sc.default_scan_grid()
    rows = []
    onset = None
    clean = True
    for wl in cfg.scan_wl:
        report = sc.superluminal_scan(float(wl), grid)
        clean = clean and report.joint_empty_in_tunneling
        if report.onset_n is not None:
            onset = report.onset_n if onset is None else min(onset, report.onset_n)
        for r in report.rows:
            rows.append([r.n, r.wl, r.T2, r.t_ratio, r.flag_T, r.flag_fast, r.flag_joint])
    summary = (
        f"# summary: tunneling_joint_region_empty={str(clean).lower()}"
        f" joint_onset_n={_fmt(onset) if onset is not None else 'none'}"
    )
    write_csv(
        cfg.out or "scan.csv",
        _provenance(cfg, extra=f"scan_wl={','.join(_fmt(v) for v in cfg.scan_wl)}"),
        ["n", "wl", "T2", "t_ratio", "flag_T", "flag_fast", "flag_joint"],
        rows,
        trailer=summary,
    )
    print(summary.lstrip("# "))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    results = run_all_checks(seed=cfg.seed)
    for res in results:
        print(res.line())
    if cfg.out:
        write_csv(
            cfg.out,
            _provenance(cfg),
            ["check", "passed", "achieved", "required"],
            [[r.name, r.passed, r.achieved, r.required] for r in results],
        )
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 3 if failed else 0


# ---------------------------------------------------------------------------
# Entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad flags, per the exit-code contract
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tunneltimes", description=__doc__)
    parser.add_argument("command", choices=["times", "figure1", "figure2", "packet", "scan", "verify"])
    parser.add_argument("--config", help="key = value config file; flags override it")
    parser.add_argument("--wl", type=float, help="dimensionless barrier opacity w*L")
    parser.add_argument("--n", type=float, help="operating point k^2/w^2 for packet runs")
    parser.add_argument("--n-min", type=float, dest="n_min")
    parser.add_argument("--n-max", type=float, dest="n_max")
    parser.add_argument("--n-steps", type=int, dest="n_steps")
    parser.add_argument("--sigma-rel", type=float, dest="sigma_rel", help="sigma_k / k0")
    parser.add_argument("--delta", type=float, help="momentum cutoff fraction")
    parser.add_argument("--sym", choices=sorted(_SYM_NAMES))
    parser.add_argument("--norm", choices=sorted(_NORM_NAMES))
    parser.add_argument("--out", help="output path (prefix for packet runs)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--nodes", type=int, help="momentum quadrature nodes")
    parser.add_argument("--fig1-n", dest="fig1_n", help="comma list of n values for figure1")
    parser.add_argument("--scan-wl", dest="scan_wl", help="comma list of wL values for scan")
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command)
    file_values = load_config_file(args.config) if args.config else {}
    if args.command == "figure1" and "wl" not in file_values and args.wl is None:
        cfg.wl = 16.0 * math.pi  # opacity sweep needs headroom to show saturation
    if file_values:
        _apply_config_values(cfg, file_values)
    explicit_grid = (
        args.n_min is not None or args.n_max is not None or args.n_steps is not None
        or any(key in file_values for key in ("n_min", "n_max", "n_steps"))
    )
    for name in ("wl", "n", "n_min", "n_max", "n_steps", "sigma_rel", "delta",
                 "sym", "norm", "out", "seed", "nodes"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.fig1_n is not None:
        cfg.fig1_n = _parse_float_list(args.fig1_n)
    if args.scan_wl is not None:
        cfg.scan_wl = _parse_float_list(args.scan_wl)
    cfg.validate()
    if cfg.command == "times":
        return cmd_times(cfg)
    if cfg.command == "figure1":
        return cmd_figure1(cfg)
    if cfg.command == "figure2":
        return cmd_figure2(cfg)
    if cfg.command == "packet":
        return cmd_packet(cfg)
    if cfg.command == "scan":
        return cmd_scan(cfg, explicit_grid)
    return cmd_verify(cfg)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonConvergenceError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
