"""Command-line front end: point evaluation, sweeps, and oracle validation.

    covertfas eval     --config c.ini [--preset paper-sec4] [--seed N]
    covertfas sweep    --config c.ini --out sweep.csv [...]
    covertfas validate --config c.ini --out report.csv [...]

``eval`` prints one flat JSON record (metrics plus the resolved linear
parameters); ``sweep`` writes one CSV row per (scenario, axis point);
``validate`` re-estimates every sweep point with the Monte Carlo channel
oracle and fails (exit 1) if any analytic value strays outside the
combined tolerance.  Exit codes: 0 ok, 1 validation failure, 2 config
parse error, 3 invariant violation, 4 I/O error.

Sweep points are evaluated in parallel; COVERTFAS_THREADS caps the worker
count (0 or unset picks a default).  Output order and content depend only
on the config and master seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from .config import ConfigParseError, PRESETS, RunConfig, Scenario, apply_scenario, load_config
from .geometry import PortGrid
from .metrics import (
    NodeFas,
    dbm_to_watts,
    false_alarm_prob,
    miss_detection_prob,
    normalized_rate_threshold,
    optimal_threshold,
    outage_prob,
)
from .mvt import MetricValue
from .oracle import McSettings, estimate_metrics
from .rng import derive_seed

SWEEP_HEADER = (
    "scenario,axis,value,p_md,p_md_err,p_fa,cop,cop_err,"
    "p_out,p_out_err,p_suc,p_suc_err,seed"
)
VALIDATE_HEADER = (
    "scenario,axis,value,metric,analytic,analytic_err,oracle,oracle_err,gap,tolerance,status"
)

# Copula-vs-channel modeling allowance for multi-port nodes (single-port
# nodes are copula-free, so only statistical error applies there).
_COPULA_ALLOWANCE = 0.03


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _worker_count() -> int:
    raw = os.environ.get("COVERTFAS_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(os.cpu_count() or 1, 8)
    return n


def _near_square(n: int) -> tuple[int, int]:
    a = max(1, int(np.sqrt(n)))
    while n % a:
        a -= 1
    return a, n // a


def apply_axis(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    """Pin one sweep-axis value onto a resolved config."""
    if axis == "zeta":
        return replace(cfg, zeta=float(value))
    if axis == "p_a_dbm":
        return replace(cfg, link=replace(cfg.link, p_a=dbm_to_watts(value)))
    if axis == "w_aperture":
        if value < 0:
            raise ValueError("aperture sweep values must be nonnegative")
        bob = NodeFas(
            grid=replace(cfg.bob.grid, w1=float(value), w2=float(value)), nu=cfg.bob.nu
        )
        willie = NodeFas(
            grid=replace(cfg.willie.grid, w1=float(value), w2=float(value)), nu=cfg.willie.nu
        )
        return replace(cfg, bob=bob, willie=willie)
    if axis in ("n_ports_w", "n_ports_b"):
        if abs(value - round(value)) > 1e-9 or value < 1:
            raise ValueError(f"port-count sweep values must be positive integers, got {value}")
        n1, n2 = _near_square(int(round(value)))
        node = cfg.willie if axis == "n_ports_w" else cfg.bob
        new = NodeFas(
            grid=PortGrid(n1_count=n1, n2_count=n2, w1=node.grid.w1, w2=node.grid.w2),
            nu=node.nu,
        )
        return replace(cfg, willie=new) if axis == "n_ports_w" else replace(cfg, bob=new)
    raise ValueError(f"unknown axis {axis!r}")


def point_metrics(cfg: RunConfig, seed: int) -> dict[str, float]:
    """All analytic metrics for one resolved configuration and QMC seed."""
    qmc = replace(cfg.qmc, seed=seed)
    zeta_star = optimal_threshold(cfg.link)
    zeta = cfg.zeta if cfg.zeta is not None else zeta_star

    md = miss_detection_prob(
        cfg.link, cfg.willie, zeta, qmc, dependence=cfg.dependence, kernel=cfg.willie_kernel
    )
    fa = false_alarm_prob(cfg.link, zeta)
    cop = MetricValue(min(max(1.0 - fa - md.value, 0.0), 1.0), md.abs_error_estimate)
    out = outage_prob(cfg.link, cfg.bob, qmc, dependence=cfg.dependence, kernel=cfg.bob_kernel)
    if zeta == zeta_star:
        md_star = md
    else:
        md_star = miss_detection_prob(
            cfg.link, cfg.willie, zeta_star, qmc,
            dependence=cfg.dependence, kernel=cfg.willie_kernel,
        )
    suc_val = md_star.value * (1.0 - out.value)
    suc_err = md_star.value * out.abs_error_estimate + (1.0 - out.value) * md_star.abs_error_estimate
    return {
        "p_md": md.value,
        "p_md_err": md.abs_error_estimate,
        "p_fa": fa,
        "cop": cop.value,
        "cop_err": cop.abs_error_estimate,
        "zeta_star": zeta_star,
        "p_out": out.value,
        "p_out_err": out.abs_error_estimate,
        "p_suc": suc_val,
        "p_suc_err": suc_err,
        "zeta": zeta,
    }


def eval_record(cfg: RunConfig) -> dict:
    """The flat JSON record for ``covertfas eval``."""
    m = point_metrics(cfg, cfg.seed)
    record = {
        "p_md": m["p_md"],
        "p_md_err": m["p_md_err"],
        "p_fa": m["p_fa"],
        "cop": m["cop"],
        "cop_err": m["cop_err"],
        "zeta_star": m["zeta_star"],
        "p_out": m["p_out"],
        "p_out_err": m["p_out_err"],
        "p_suc": m["p_suc"],
        "p_suc_err": m["p_suc_err"],
        # resolved linear-scale parameters, for auditing
        "zeta": m["zeta"],
        "p_a": cfg.link.p_a,
        "sigma2_w": cfg.link.sigma2_w,
        "sigma2_b": cfg.link.sigma2_b,
        "r_b": cfg.link.r_b,
        "mu": cfg.link.mu,
        "r_bar_b": normalized_rate_threshold(cfg.link),
        "bob_n1": cfg.bob.grid.n1_count,
        "bob_n2": cfg.bob.grid.n2_count,
        "bob_w1": cfg.bob.grid.w1,
        "bob_w2": cfg.bob.grid.w2,
        "bob_nu": cfg.bob.nu,
        "willie_n1": cfg.willie.grid.n1_count,
        "willie_n2": cfg.willie.grid.n2_count,
        "willie_w1": cfg.willie.grid.w1,
        "willie_w2": cfg.willie.grid.w2,
        "willie_nu": cfg.willie.nu,
        "dependence": cfg.dependence,
        "seed": cfg.seed,
    }
    return record


def _sweep_points(cfg: RunConfig):
    """(scenario_idx, point_idx, scenario, resolved_cfg, axis_value) per row."""
    values = cfg.sweep.values()
    for s_idx, scenario in enumerate(cfg.sweep.scenarios):
        scen_cfg = apply_scenario(cfg, scenario)
        for p_idx, value in enumerate(values):
            yield s_idx, p_idx, scenario, apply_axis(scen_cfg, cfg.sweep.axis, float(value)), float(value)


def sweep_rows(cfg: RunConfig) -> list[str]:
    """CSV body rows, scenario-major and axis-ascending."""
    jobs = list(_sweep_points(cfg))

    def run(job):
        s_idx, p_idx, scenario, point_cfg, value = job
        seed = derive_seed(cfg.seed, s_idx, p_idx)
        m = point_metrics(point_cfg, seed)
        fields = [
            scenario.name,
            cfg.sweep.axis,
            _fmt(value),
            _fmt(m["p_md"]),
            _fmt(m["p_md_err"]),
            _fmt(m["p_fa"]),
            _fmt(m["cop"]),
            _fmt(m["cop_err"]),
            _fmt(m["p_out"]),
            _fmt(m["p_out_err"]),
            _fmt(m["p_suc"]),
            _fmt(m["p_suc_err"]),
            str(seed),
        ]
        return ",".join(fields)

    workers = _worker_count()
    if workers == 1 or len(jobs) <= 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def validate_rows(cfg: RunConfig) -> tuple[list[str], bool]:
    """Analytic-vs-oracle comparison rows plus the overall verdict."""
    jobs = list(_sweep_points(cfg))

    def run(job):
        s_idx, p_idx, scenario, point_cfg, value = job
        qmc_seed = derive_seed(cfg.seed, s_idx, p_idx)
        mc_seed = derive_seed(cfg.seed, s_idx, p_idx, 1)
        ana = point_metrics(point_cfg, qmc_seed)
        mc = estimate_metrics(
            point_cfg.link,
            point_cfg.bob,
            point_cfg.willie,
            ana["zeta"],
            McSettings(trials=cfg.mc_trials, seed=mc_seed,
                       symbols_per_slot=cfg.mc_symbols_per_slot),
        )
        allow_w = _COPULA_ALLOWANCE if point_cfg.willie.grid.total_ports > 1 else 0.0
        allow_b = _COPULA_ALLOWANCE if point_cfg.bob.grid.total_ports > 1 else 0.0
        comparisons = [
            ("p_md", ana["p_md"], ana["p_md_err"], mc.p_md, mc.p_md_err, allow_w),
            ("p_fa", ana["p_fa"], 0.0, mc.p_fa, 0.0, 0.0),
            ("cop", ana["cop"], ana["cop_err"], mc.cop, mc.cop_err, allow_w),
            ("p_out", ana["p_out"], ana["p_out_err"], mc.p_out, mc.p_out_err, allow_b),
            ("p_suc", ana["p_suc"], ana["p_suc_err"], mc.p_suc, mc.p_suc_err, allow_w + allow_b),
        ]
        rows = []
        all_ok = True
        for name, a, a_err, o, o_err, allowance in comparisons:
            gap = abs(a - o)
            tol = allowance + a_err + o_err + 1e-12
            ok = gap <= tol
            all_ok &= ok
            rows.append(
                ",".join(
                    [
                        scenario.name,
                        cfg.sweep.axis,
                        _fmt(value),
                        name,
                        _fmt(a),
                        _fmt(a_err),
                        _fmt(o),
                        _fmt(o_err),
                        _fmt(gap),
                        _fmt(tol),
                        "PASS" if ok else "FAIL",
                    ]
                )
            )
        return rows, all_ok

    workers = _worker_count()
    if workers == 1 or len(jobs) <= 1:
        results = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    rows: list[str] = []
    ok = True
    for r, point_ok in results:
        rows.extend(r)
        ok &= point_ok
    return rows, ok


def _read_config_arg(path: str | None) -> str | None:
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _IoError(f"cannot read config {path}: {exc}") from exc


class _IoError(Exception):
    pass


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IoError(f"cannot write {path}: {exc}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covertfas",
        description="Detection/outage metrics for port-selection antennas, analytic and Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_out in (("eval", False), ("sweep", True), ("validate", True)):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="INI configuration file")
        cmd.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
        cmd.add_argument("--seed", type=int, help="master seed (overrides [qmc] seed)")
        if needs_out:
            cmd.add_argument("--out", required=True, help="output CSV path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = _read_config_arg(args.config)
        cfg = load_config(
            config_text=text,
            preset=args.preset,
            seed_override=args.seed,
            origin=args.config or "<config>",
        )
        if args.command == "eval":
            print(json.dumps(eval_record(cfg), indent=2))
            return 0
        if args.command == "sweep":
            rows = sweep_rows(cfg)
            _write_text(args.out, "\n".join([SWEEP_HEADER, *rows]) + "\n")
            return 0
        # validate
        rows, ok = validate_rows(cfg)
        _write_text(args.out, "\n".join([VALIDATE_HEADER, *rows]) + "\n")
        n_fail = sum(1 for r in rows if r.endswith(",FAIL"))
        print(f"validate: {len(rows) - n_fail}/{len(rows)} comparisons passed "
              f"({len(cfg.sweep.scenarios)} scenarios x {cfg.sweep.points} points x 5 metrics)")
        print("VERDICT: " + ("PASS" if ok else "FAIL"))
        return 0 if ok else 1
    except ConfigParseError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 3
    except _IoError as exc:
        print(str(exc), file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
