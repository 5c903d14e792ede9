"""Command-line front end.

Subcommands
-----------
solve      optimise an ansatz, then evaluate the requested stability bounds
bound      evaluate bounds for a fixed ansatz (zero, resampled oracle or file)
oracle     Numerov phase shifts for l = 0..lmax
pathology  run the line demonstrations and print a pass/fail table

Exit codes: 0 success, 1 invalid configuration or precondition, 2 degraded
result (line-search failure, or a failed pathology tolerance).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np
from threadpoolctl import threadpool_limits

from . import bounds as bnd
from . import pathology as path
from .oracles import oracle_partial_waves
from .potentials import RadialPotential
from .variational import OptimizerConfig, optimize
from .violation import violation_report
from .wavefield import (ScatteringAnsatz, ansatz_from_record, ansatz_to_record, cross_section,
                        radial_grid, resample_oracle)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DEGRADED = 2
THREADS_ENV = "SCATTERBOUND_THREADS"

DEFAULT_BOUNDS = ({"theorem": "phase-shift", "xi": "numerical", "ell": 0},
                  {"theorem": "cross-section", "xi": "numerical"})


class ConfigError(Exception):
    """Invalid job configuration or unmet precondition (exit code 1)."""


# --------------------------------------------------------------------------
# configuration


def job_schema() -> dict:
    text = resources.files(__package__).joinpath("job_schema.json").read_text()
    return json.loads(text)


def validate_config(cfg) -> None:
    """Raise :class:`ConfigError` naming the offending key."""
    validator = jsonschema.Draft202012Validator(job_schema())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise ConfigError(f"config error at {pointer}: {err.message}")


def load_config(path_: Optional[str]) -> dict:
    if path_ is None:
        raise ConfigError("--config is required for this command")
    try:
        cfg = json.loads(Path(path_).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path_}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    validate_config(cfg)
    cfg["_base"] = str(Path(path_).resolve().parent)
    return cfg


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer")
    return n


def _potential(cfg) -> RadialPotential:
    try:
        return RadialPotential.from_record(dict(cfg["potential"]))
    except ValueError as exc:
        raise ConfigError(f"config error at /potential: {exc}") from None


def _physics(cfg):
    ph = cfg["physics"]
    return float(ph["k"]), float(ph["mass"]), int(ph.get("lmax", 4))


def _optimizer(cfg, seed: int) -> OptimizerConfig:
    try:
        return OptimizerConfig(seed=seed, **cfg.get("optimizer", {}))
    except ValueError as exc:
        raise ConfigError(f"config error at /optimizer: {exc}") from None


def _start_ansatz(cfg, p: RadialPotential, default_start: str) -> ScatteringAnsatz:
    k, mass, lmax = _physics(cfg)
    ansatz_cfg = cfg.get("ansatz", {})
    start = ansatz_cfg.get("start", default_start)
    if start == "file":
        if "path" not in ansatz_cfg:
            raise ConfigError("config error at /ansatz/path: required when start is 'file'")
        try:
            rec = json.loads((Path(cfg["_base"]) / ansatz_cfg["path"]).read_text())
            return ansatz_from_record(rec)
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"config error at /ansatz/path: {exc}") from None
    n_nodes = int(ansatz_cfg.get("n_nodes", 33))
    r_grid = float(ansatz_cfg.get("r_grid", p.outer_radius() + 10.0 / k))
    if r_grid <= p.outer_radius() and p.kind != "zero":
        raise ConfigError("config error at /ansatz/r_grid: must exceed the potential support")
    width = ansatz_cfg.get("width")
    grid = radial_grid(n_nodes, r_grid, p.breakpoints())
    if start == "oracle":
        if p.is_coulomb:
            raise ConfigError("oracle requires short-range potential")
        return resample_oracle(p, k, mass, lmax=lmax, grid=grid, width=width)
    eta = p.alpha * mass / k if p.is_coulomb else 0.0
    return ScatteringAnsatz.zero(k, mass, lmax=lmax, grid=grid, breakpoints=p.breakpoints(),
                                 width=width, eta=eta)


# --------------------------------------------------------------------------
# output


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, shortest round-trip floats)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def _complex(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _write(out: Path, name: str, text: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _public_config(cfg) -> dict:
    return {k: v for k, v in cfg.items() if not k.startswith("_")}


# --------------------------------------------------------------------------
# bounds


def _xi_estimate(source: str, p, ell, k, mass, oracle) -> bnd.XiEstimate:
    if source == "free":
        if p.kind != "zero":
            raise bnd.BoundUnavailable("the free sup-norm applies only to V = 0")
        return bnd.free_xi()
    if source == "gamma-star":
        return bnd.xi_from_gamma(p, k, mass, ell=ell)
    if source == "transfer-1d":
        if ell not in (None, 0):
            raise bnd.BoundUnavailable("the transfer bound covers the s-wave only")
        if ell is None:
            raise bnd.BoundUnavailable("the transfer bound does not cover the full state")
        return bnd.xi_from_transfer(p, k, mass)
    if oracle is None:
        raise bnd.BoundUnavailable("numerical sup-norms need a short-range potential")
    if ell is None:
        # the full-state supremum needs every partial wave up to ~ k r_max
        return bnd.xi_state_numerical(p, k, mass)
    if ell >= len(oracle):
        raise bnd.BoundUnavailable(f"no oracle partial wave for l = {ell}")
    return bnd.xi_linf_numerical(p, ell, k, mass, result=oracle[ell])


def evaluate_bounds(requests, p, a: ScatteringAnsatz, report, oracle) -> list[dict]:
    """One record per request; unavailable estimates are reported, not fatal."""
    k, mass = a.k, a.mass
    l1 = report.l1_upper
    sigma = cross_section(a.asymptotic_form()) if not a.is_coulomb else float("nan")
    out = []
    for req in requests:
        theorem = req["theorem"]
        source = req.get("xi", "free" if theorem == "free" else "numerical")
        ell = req.get("ell", 0) if theorem == "phase-shift" else None
        rec = {"request": dict(req)}
        try:
            if theorem == "free":
                if p.kind != "zero":
                    raise bnd.BoundUnavailable("the free bound applies only to V = 0")
                sb = bnd.free_stability(mass, k, l1)
                rec.update(sb.to_record(), estimate=_complex(_f_forward_back(a)))
            elif theorem == "phase-shift":
                if ell > a.lmax:
                    raise bnd.BoundUnavailable(f"ansatz has no partial wave l = {ell}")
                xi = _xi_estimate(source, p, ell, k, mass, oracle)
                sb = bnd.phase_shift_stability(mass, ell, k, l1, xi)
                est = complex(a.amplitudes[ell])
                rec.update(sb.to_record(), estimate=_complex(est),
                           certified_interval={"centre": _complex(est), "radius": sb.value},
                           xi_details=xi.details)
            elif theorem == "cross-section":
                xi = _xi_estimate(source, p, None, k, mass, oracle)
                sb = bnd.cross_section_stability(mass, k, l1, sigma, xi)
                rec.update(sb.to_record(), estimate=sigma, xi_details=xi.details)
            else:
                xi = _xi_estimate(source, p, None, k, mass, oracle)
                sb = bnd.pointwise_stability(mass, k, l1, xi)
                rec.update(sb.to_record(), estimate=_complex(_f_forward_back(a)),
                           xi_details=xi.details)
        except bnd.BoundUnavailable as exc:
            rec.update(theorem=theorem, unavailable=str(exc))
        out.append(rec)
    return out


def _f_forward_back(a: ScatteringAnsatz) -> complex:
    """Backscattering amplitude ``f(-k_hat)`` of the ansatz."""
    ells = np.arange(a.lmax + 1)
    return complex(np.sum((2 * ells + 1) * a.amplitudes * (-1.0) ** ells))


def _oracle_comparison(a: ScatteringAnsatz, oracle, bound_recs) -> Optional[dict]:
    if oracle is None:
        return None
    waves = []
    for res in oracle[: a.lmax + 1]:
        diff = abs(complex(a.amplitudes[res.ell]) - res.f)
        waves.append({"ell": res.ell, "delta": res.delta, "f": _complex(res.f),
                      "convergence": res.convergence, "abs_error": diff})
    sigma = 4.0 * math.pi * sum((2 * r.ell + 1) * abs(r.f) ** 2 for r in oracle)
    checks = []
    for rec in bound_recs:
        if "unavailable" in rec:
            continue
        if rec["theorem"] == "phase-shift":
            ell = rec["inputs"]["ell"]
            checks.append({"theorem": "phase-shift", "ell": ell,
                           "contains_oracle": waves[ell]["abs_error"] <= rec["value"]})
        elif rec["theorem"] == "cross-section":
            lo, hi = rec["interval"]
            checks.append({"theorem": "cross-section", "contains_oracle": lo <= sigma <= hi})
    return {"partial_waves": waves, "sigma": sigma, "checks": checks}


def _ansatz_summary(a: ScatteringAnsatz) -> dict:
    return {"k": a.k, "mass": a.mass, "lmax": a.lmax, "n_nodes": int(a.grid.size),
            "r_grid": a.r_grid, "width": a.width, "eta": a.eta,
            "amplitudes": [_complex(z) for z in a.amplitudes]}


def _oracle_for(p: RadialPotential, k, mass, lmax):
    if p.is_coulomb:
        return None
    return oracle_partial_waves(p, k, mass, lmax=lmax)


# --------------------------------------------------------------------------
# commands


def cmd_solve(cfg: dict, out: Path, seed: int) -> int:
    p = _potential(cfg)
    k, mass, lmax = _physics(cfg)
    opt = _optimizer(cfg, seed)
    a0 = _start_ansatz(cfg, p, "zero")
    trace = optimize(p, a0, opt)
    oracle = _oracle_for(p, k, mass, max(lmax, a0.lmax))
    bound_recs = evaluate_bounds(cfg.get("bounds", DEFAULT_BOUNDS), p, trace.ansatz,
                                 trace.report, oracle)
    names = cfg.get("output", {})
    report = {
        "command": "solve",
        "config": _public_config(cfg),
        "seed": seed,
        "ansatz": _ansatz_summary(trace.ansatz),
        "violation": trace.report.to_record(),
        "optimizer": {"reason": trace.reason, "line_search_failed": trace.line_search_failed,
                      "iterations": len(trace.accepted_losses) - 1,
                      "initial_loss": trace.accepted_losses[0],
                      "final_loss": trace.final_loss},
        "bounds": bound_recs,
        "oracle": _oracle_comparison(trace.ansatz, oracle, bound_recs),
    }
    _write(out, names.get("report", "report.json"), dumps(report))
    _write(out, names.get("trace", "trace.csv"), "\n".join(trace.csv_rows()) + "\n")
    _write(out, names.get("ansatz", "ansatz.json"), dumps(ansatz_to_record(trace.ansatz)))
    return EXIT_DEGRADED if trace.line_search_failed else EXIT_OK


def cmd_bound(cfg: dict, out: Path, seed: int) -> int:
    p = _potential(cfg)
    k, mass, lmax = _physics(cfg)
    a = _start_ansatz(cfg, p, "oracle")
    rep = violation_report(p, a)
    oracle = _oracle_for(p, k, mass, max(lmax, a.lmax))
    bound_recs = evaluate_bounds(cfg.get("bounds", DEFAULT_BOUNDS), p, a, rep, oracle)
    report = {"command": "bound", "config": _public_config(cfg), "seed": seed,
              "ansatz": _ansatz_summary(a), "violation": rep.to_record(),
              "bounds": bound_recs, "oracle": _oracle_comparison(a, oracle, bound_recs)}
    _write(out, cfg.get("output", {}).get("report", "report.json"), dumps(report))
    return EXIT_OK


def cmd_oracle(cfg: dict, out: Path, seed: int) -> int:
    p = _potential(cfg)
    k, mass, lmax = _physics(cfg)
    if p.is_coulomb:
        raise ConfigError("oracle requires short-range potential")
    results = oracle_partial_waves(p, k, mass, lmax=lmax)
    recs = [r.to_record() for r in results]
    report = {"command": "oracle", "config": _public_config(cfg), "seed": seed,
              "phase_shifts": recs}
    _write(out, "oracle.json", dumps(report))
    _write(out, "oracle.csv", _csv(["ell", "delta", "f_re", "f_im", "convergence"],
                                   [[r["ell"], r["delta"], r["f_re"], r["f_im"],
                                     r["convergence"]] for r in recs]))
    return EXIT_OK


def _check(name, ok, detail):
    return {"demo": name, "pass": bool(ok), "detail": detail}


def pathology_checks(workers: int = 1) -> list[dict]:
    """The demonstrations at their default parameters with pass/fail flags."""
    rows = path.l2_instability_scan(0.0, 1.0, 1.0, 1.0, [100, 200, 400, 800])
    ratios = [b.l2sq / a.l2sq for a, b in zip(rows[:-1], rows[1:])]
    fluxes = [r.flux_jump for r in rows]
    l1_over_l2 = [r.l1 / r.l2sq for r in rows]
    checks = [_check("l2-instability",
                     all(abs(x - 0.5) <= 0.02 for x in ratios)
                     and max(fluxes) - min(fluxes) <= 1e-10
                     and all(b > a for a, b in zip(l1_over_l2[:-1], l1_over_l2[1:])),
                     {"l2sq_ratios": ratios, "flux_jumps": fluxes, "l1_over_l2sq": l1_over_l2})]

    tune = path.expectation_tuning(1.0, 2.0, 1.0, 100.0)
    checks.append(_check("expectation-tuning",
                         abs(tune.residual) < 1e-10 and 0.1 < tune.alpha < 10.0,
                         asdict(tune)))

    eps, amp, k = 1e-3, 1.0, 1.0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        runs = list(pool.map(lambda args: path.nonconservation_demo(*args, k),
                             [(eps, amp), (2 * eps, amp), (eps, 3 * amp)]))
    (l1a, ja), (l1b, jb), (l1c, jc) = runs
    checks.append(_check("nonconservation",
                         abs(ja - eps * k * amp) <= 1e-12 * eps * k * amp
                         and abs(jc - 3 * eps * k * amp) <= 1e-12 * 3 * eps * k * amp
                         and abs(l1b / l1a - 2.0) <= 0.02 and abs(l1c / l1a - 1.0) <= 0.01,
                         {"l1": [l1a, l1b, l1c], "current": [ja, jb, jc]}))

    v1 = path.vslow_demo(1e4, 1e-4)
    v2 = path.vslow_demo(2e4, 1e-4)
    kink_ratio = v2.l1_kinks / v1.l1_kinks
    checks.append(_check("slow-plateau",
                         abs(v1.l1_measured / v1.l1_predicted - 1) <= 0.03
                         and abs(v1.amplitude_measured / v1.amplitude_predicted - 1) <= 0.05
                         and abs(kink_ratio - 0.5) <= 0.025,
                         {**asdict(v1), "kink_ratio": kink_ratio}))

    cases = [(0.0, 1.0, (0.0, 1.0), False), (1.0, 1.0, (-1.0, 2.0), False),
             (-1.0 / 8.0, 1.0, (0.5, 0.5), False)]
    ok = all((r := path.inverse_square_exponents(a2, m)).pathological == flag
             and (r.beta_minus, r.beta_plus) == roots for a2, m, roots, flag in cases)
    ok = ok and path.inverse_square_exponents(-1.0, 1.0).pathological
    ok = ok and path.inverse_square_exponents(-0.125 - 1e-12, 1.0).pathological
    checks.append(_check("inverse-square", ok,
                         {"cases": [[a2, m] for a2, m, _, _ in cases] + [[-1.0, 1.0]]}))
    return checks


def pathology_scans(seed: int, workers: int = 1) -> dict[str, str]:
    """CSV scaling curves keyed by file name."""
    n_list = [100, 200, 400, 800, 1600, 3200]
    rows = path.l2_instability_scan(0.0, 1.0, 1.0, 1.0, n_list)
    files = {"l2_scan.csv": _csv(["n", "l2sq", "l1", "kink_l1", "flux_jump"],
                                 [[r.n, r.l2sq, r.l1, r.kink_l1, r.flux_jump] for r in rows])}
    eps_list = [float(x) for x in np.geomspace(1e-4, 1e-1, 7)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        res = list(pool.map(lambda e: path.nonconservation_demo(e, 1.0, 1.0), eps_list))
    files["eps_scan.csv"] = _csv(["eps", "l1", "current"],
                                 [[e, l1, j] for e, (l1, j) in zip(eps_list, res)])
    slow_eps = [1e-5, 1e-4, 1e-3, 1e-2]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        slow = list(pool.map(lambda e: path.vslow_demo(1e4, e), slow_eps))
    files["vslow_scan.csv"] = _csv(
        ["eps", "l1_measured", "l1_predicted", "amplitude_measured", "amplitude_predicted"],
        [[e, v.l1_measured, v.l1_predicted, v.amplitude_measured, v.amplitude_predicted]
         for e, v in zip(slow_eps, slow)])
    rng = np.random.default_rng(seed)
    tune_rows = []
    for _ in range(8):
        lo, hi = sorted(float(x) for x in rng.uniform(0.5, 3.0, 2))
        try:
            t = path.expectation_tuning(lo, hi, 1.0, 100.0)
            tune_rows.append([lo, hi, t.alpha, t.residual, t.flux_jump])
        except ValueError:
            tune_rows.append([lo, hi, "nan", "nan", "nan"])
    files["tuning_scan.csv"] = _csv(["a_less", "a_greater", "alpha", "residual", "flux_jump"],
                                    tune_rows)
    return files


def cmd_pathology(out: Optional[Path], seed: int, scan: bool, workers: int = 1,
                  stream=None) -> int:
    stream = sys.stdout if stream is None else stream
    checks = pathology_checks(workers)
    width = max(len(c["demo"]) for c in checks)
    for c in checks:
        print(f"{c['demo']:<{width}}  {'PASS' if c['pass'] else 'FAIL'}", file=stream)
    if out is not None:
        _write(out, "pathology.json", dumps({"command": "pathology", "seed": seed,
                                             "checks": checks}))
        if scan:
            for name, text in pathology_scans(seed, workers).items():
                _write(out, name, text)
    return EXIT_OK if all(c["pass"] for c in checks) else EXIT_DEGRADED


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scatterbound",
                                     description="Certified scattering amplitudes from L1 "
                                                 "violations of approximate eigenstates.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("solve", "optimise an ansatz and bound its amplitudes"),
                       ("bound", "bound the amplitudes of a fixed ansatz"),
                       ("oracle", "Numerov phase shifts"),
                       ("pathology", "run the line demonstrations")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", help="JSON job file")
        sp.add_argument("--out", default="out", help="output directory (default: out)")
        sp.add_argument("--seed", type=int, default=None, help="seed (overrides the config)")
        sp.add_argument("--scan", action="store_true",
                        help="also write CSV scaling curves (pathology)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        workers = thread_count()
        out = Path(args.out)
        with threadpool_limits(limits=workers):
            if args.command == "pathology":
                seed = 0 if args.seed is None else args.seed
                return cmd_pathology(out, seed, args.scan, workers)
            cfg = load_config(args.config)
            seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
            command = {"solve": cmd_solve, "bound": cmd_bound, "oracle": cmd_oracle}
            return command[args.command](cfg, out, seed)
    except (ConfigError, bnd.BoundUnavailable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # library preconditions (e.g. an oracle asked for a Coulomb tail)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
