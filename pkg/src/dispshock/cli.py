"""Command-line front end.

    python3 -m dispshock {validate,profile,periods,oscillations,sweep} --config cfg.json

Every run validates the whole JSON config before computing anything, writes
its CSV outputs atomically and prints a one-line JSON summary. Exit codes:
0 success, 1 config or hypothesis failure, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analysis import fit_length_scaling, oscillation_report, period, period_ode
from .convergence import primary_fields, sweep
from .errors import ConfigError, DispShockError, FrictionError, HypothesisError
from .heteroclinic import shoot_heteroclinic
from .integrate import energy_audit
from .models import (
    QHD,
    Boussinesq,
    Elasticity,
    StressLaw,
    boussinesq_shock,
    build_profile_problem,
    problem_for_friction,
    qhd_mass_flux,
    shock_speed,
    validate_admissibility,
)

COMMANDS = ("validate", "profile", "periods", "oscillations", "sweep")


# --------------------------------------------------------------------------
# config
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    family: str
    stress: Optional[dict] = None
    gamma: Optional[float] = None
    s: Optional[float] = None


@dataclass(frozen=True)
class ShockSpec:
    u_minus: Optional[float] = None
    u_plus: Optional[float] = None
    rho_minus: Optional[float] = None
    rho_plus: Optional[float] = None
    family: int = 2
    v_minus: float = 0.0


@dataclass(frozen=True)
class FrictionSpec:
    c: Optional[float] = None
    c_list: Optional[tuple] = None
    epsilon: Optional[float] = None
    delta: Optional[float] = None


@dataclass(frozen=True)
class Numerics:
    rtol: float = 1e-10
    atol: Optional[float] = None
    offset_scale: float = 1e-7
    tau_budget: Optional[float] = None


@dataclass(frozen=True)
class PeriodsSpec:
    fractions: tuple = (0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95)
    divergence_k: tuple = (2, 3, 4, 5, 6)
    ode_check: bool = True


@dataclass(frozen=True)
class SweepSpec:
    eps_list: tuple = (4e-2, 2e-2, 1e-2, 5e-3)
    p: float = 1.5
    window: Optional[tuple] = None


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "out"
    gnuplot: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    model: ModelSpec
    shock: ShockSpec = field(default_factory=ShockSpec)
    friction: FrictionSpec = field(default_factory=FrictionSpec)
    numerics: Numerics = field(default_factory=Numerics)
    periods: PeriodsSpec = field(default_factory=PeriodsSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    experiment: Optional[str] = None


def _num(value, where: str, integer: bool = False):
    """Accept JSON numbers or exact decimal strings; reject bools."""
    if isinstance(value, bool) or value is None:
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    try:
        out = float(value) if isinstance(value, (int, float)) else float(str(value).strip())
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {value!r} as a number") from None
    if not math.isfinite(out):
        raise ConfigError(f"{where}: must be finite")
    if integer:
        if out != int(out):
            raise ConfigError(f"{where}: expected an integer")
        return int(out)
    return out


def _opt_num(value, where):
    return None if value is None else _num(value, where)


def _section(doc: dict, key: str, allowed: tuple) -> dict:
    sec = doc.get(key, {})
    if sec is None:
        sec = {}
    if not isinstance(sec, dict):
        raise ConfigError(f"{key}: expected an object")
    unknown = sorted(set(sec) - set(allowed))
    if unknown:
        raise ConfigError(f"{key}: unknown keys {unknown}")
    return sec


def _num_list(value, where):
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{where}: expected a non-empty list")
    return tuple(_num(v, f"{where}[{i}]") for i, v in enumerate(value))


def _flag(value, where):
    if not isinstance(value, bool):
        raise ConfigError(f"{where}: expected true or false")
    return value


def parse_config(doc: dict) -> ExperimentConfig:
    """Validate a config document completely; unknown keys are errors."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    top = ("name", "experiment", "model", "shock", "friction", "numerics", "periods", "sweep", "output")
    unknown = sorted(set(doc) - set(top))
    if unknown:
        raise ConfigError(f"unknown top-level keys {unknown}")
    if "model" not in doc:
        raise ConfigError("missing 'model'")

    m = _section(doc, "model", ("family", "stress", "gamma", "s"))
    family = m.get("family")
    if family not in ("elasticity", "qhd", "boussinesq"):
        raise ConfigError(f"model.family must be elasticity, qhd or boussinesq, got {family!r}")
    stress = None
    if family == "elasticity":
        st = _section(m, "stress", ("kind", "k", "q", "a"))
        if "kind" not in st:
            raise ConfigError("model.stress.kind is required for elasticity")
        stress = {"kind": st["kind"], **{k: _num(st[k], f"model.stress.{k}") for k in ("k", "q", "a") if k in st}}
    model = ModelSpec(family=family, stress=stress,
                      gamma=_opt_num(m.get("gamma"), "model.gamma"), s=_opt_num(m.get("s"), "model.s"))
    if family == "qhd" and model.gamma is None:
        raise ConfigError("model.gamma is required for qhd")
    if family == "boussinesq" and model.s is None:
        raise ConfigError("model.s is required for boussinesq")

    sh = _section(doc, "shock", ("u_minus", "u_plus", "rho_minus", "rho_plus", "family", "v_minus"))
    shock = ShockSpec(u_minus=_opt_num(sh.get("u_minus"), "shock.u_minus"),
                      u_plus=_opt_num(sh.get("u_plus"), "shock.u_plus"),
                      rho_minus=_opt_num(sh.get("rho_minus"), "shock.rho_minus"),
                      rho_plus=_opt_num(sh.get("rho_plus"), "shock.rho_plus"),
                      family=_num(sh.get("family", 2), "shock.family", integer=True),
                      v_minus=_num(sh.get("v_minus", 0.0), "shock.v_minus"))
    if shock.family not in (1, 2):
        raise ConfigError("shock.family must be 1 or 2")
    if family == "elasticity" and (shock.u_minus is None or shock.u_plus is None):
        raise ConfigError("elasticity needs shock.u_minus and shock.u_plus")
    if family == "qhd" and (shock.rho_minus is None or shock.rho_plus is None):
        raise ConfigError("qhd needs shock.rho_minus and shock.rho_plus")

    fr = _section(doc, "friction", ("c", "c_list", "epsilon", "delta"))
    friction = FrictionSpec(c=_opt_num(fr.get("c"), "friction.c"),
                            c_list=_num_list(fr["c_list"], "friction.c_list") if "c_list" in fr else None,
                            epsilon=_opt_num(fr.get("epsilon"), "friction.epsilon"),
                            delta=_opt_num(fr.get("delta"), "friction.delta"))
    if friction.c is not None and friction.delta is not None:
        raise ConfigError("friction: give either c or (epsilon, delta), not both")
    for name in ("c", "epsilon", "delta"):
        val = getattr(friction, name)
        if val is not None and not val > 0:
            raise ConfigError(f"friction.{name} must be positive")

    nu = _section(doc, "numerics", ("rtol", "atol", "offset_scale", "tau_budget"))
    numerics = Numerics(rtol=_num(nu.get("rtol", 1e-10), "numerics.rtol"),
                        atol=_opt_num(nu.get("atol"), "numerics.atol"),
                        offset_scale=_num(nu.get("offset_scale", 1e-7), "numerics.offset_scale"),
                        tau_budget=_opt_num(nu.get("tau_budget"), "numerics.tau_budget"))
    if not (1e-13 <= numerics.rtol <= 1e-6):
        raise ConfigError("numerics.rtol must lie in [1e-13, 1e-6]")
    if not numerics.offset_scale > 0:
        raise ConfigError("numerics.offset_scale must be positive")

    pe = _section(doc, "periods", ("fractions", "divergence_k", "ode_check"))
    periods = PeriodsSpec(
        fractions=_num_list(pe["fractions"], "periods.fractions") if "fractions" in pe else PeriodsSpec.fractions,
        divergence_k=tuple(_num(k, "periods.divergence_k", integer=True) for k in pe["divergence_k"])
        if "divergence_k" in pe else PeriodsSpec.divergence_k,
        ode_check=_flag(pe.get("ode_check", True), "periods.ode_check"))
    if any(not 0 < f < 1 for f in periods.fractions):
        raise ConfigError("periods.fractions must lie in (0, 1)")

    sw = _section(doc, "sweep", ("eps_list", "p", "window"))
    window = sw.get("window")
    if window is not None:
        window = _num_list(window, "sweep.window")
        if len(window) != 2 or not window[0] < 0 < window[1]:
            raise ConfigError("sweep.window must be [lo, hi] with lo < 0 < hi")
    sweep_spec = SweepSpec(
        eps_list=_num_list(sw["eps_list"], "sweep.eps_list") if "eps_list" in sw else SweepSpec.eps_list,
        p=_num(sw.get("p", 1.5), "sweep.p"), window=window)
    if not sweep_spec.p > 1:
        raise ConfigError("sweep.p must exceed 1")

    out = _section(doc, "output", ("dir", "gnuplot"))
    output = OutputSpec(dir=str(out.get("dir", "out")), gnuplot=_flag(out.get("gnuplot", False), "output.gnuplot"))

    experiment = doc.get("experiment")
    if experiment is not None and experiment not in COMMANDS[1:]:
        raise ConfigError(f"experiment must be one of {COMMANDS[1:]}")
    name = str(doc.get("name", "run"))
    return ExperimentConfig(name=name, model=model, shock=shock, friction=friction, numerics=numerics,
                            periods=periods, sweep=sweep_spec, output=output, experiment=experiment)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    return parse_config(doc)


# --------------------------------------------------------------------------
# building objects from a config
# --------------------------------------------------------------------------

def build_model_and_shock(cfg: ExperimentConfig):
    ms, ss = cfg.model, cfg.shock
    if ms.family == "elasticity":
        model = Elasticity(StressLaw(**ms.stress))
        shock = shock_speed(model.stress, ss.u_minus, ss.u_plus, ss.family, ss.v_minus)
    elif ms.family == "qhd":
        model = QHD(ms.gamma)
        shock = qhd_mass_flux(ms.gamma, ss.rho_minus, ss.rho_plus, ss.family)
    else:
        model = Boussinesq(ms.s)
        shock = boussinesq_shock(ms.s)
    return model, shock


def build_problem(cfg: ExperimentConfig, model, shock, c: Optional[float] = None):
    fr = cfg.friction
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FrictionError)
        if c is not None or fr.c is not None:
            return problem_for_friction(model, shock, c if c is not None else fr.c,
                                        epsilon=fr.epsilon or 1e-3)
        if fr.epsilon is not None and fr.delta is not None:
            return build_profile_problem(model, shock, fr.epsilon, fr.delta)
    raise ConfigError("friction: give c or both epsilon and delta")


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, comment: str, header, rows) -> None:
    lines = [f"# {comment}", ",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    write_atomic(path, "\n".join(lines) + "\n")


def _comment(cfg: ExperimentConfig, c) -> str:
    c_txt = "sweep" if c is None else _fmt(c)
    return f"dispshock {__version__} name={cfg.name} model={cfg.model.family} c={c_txt} rtol={_fmt(cfg.numerics.rtol)}"


def _gnuplot(path: Path, data: str, using: str, xlabel: str, ylabel: str) -> None:
    script = (f"set datafile separator ','\nset key autotitle columnhead\n"
              f"set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"
              f"plot '{data}' using {using} with lines\n")
    write_atomic(path, script)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_validate(cfg, outdir):
    model, shock = build_model_and_shock(cfg)
    report = validate_admissibility(model, shock)
    summary = {"command": "validate", "ok": report.ok, "lax": shock.lax}
    summary.update(report.verdicts)
    summary["margins"] = report.margins
    c_star = None
    if report.ok:
        try:
            c_star = build_problem(cfg, model, shock, c=cfg.friction.c or 1e-3).c_star
        except (DispShockError, ConfigError):
            c_star = None
    summary["c_star"] = c_star
    if not report.ok:
        summary["messages"] = report.messages
        return 1, summary, "; ".join(report.messages) or "admissibility failure"
    return 0, summary, None


def cmd_profile(cfg, outdir):
    model, shock = build_model_and_shock(cfg)
    problem = build_problem(cfg, model, shock)
    prof = shoot_heteroclinic(problem, offset_scale=cfg.numerics.offset_scale, rtol=cfg.numerics.rtol,
                              tau_budget=cfg.numerics.tau_budget)
    names = primary_fields(model)
    f1, f2 = prof.fields[names[0]], prof.fields[names[1]]
    rows = zip(prof.theta, prof.tau, prof.u, prof.w, prof.E, f1, f2)
    path = outdir / "profile.csv"
    write_csv(path, _comment(cfg, problem.c) + f" field1={names[0]} field2={names[1]}",
              ("theta", "tau", "u", "w", "E", "field1", "field2"), rows)
    if cfg.output.gnuplot:
        _gnuplot(outdir / "profile.gp", "profile.csv", "1:6", "theta", names[0])
    tr = prof.trajectory
    first = tr.events[0] if tr.events else None
    return 0, {"command": "profile", "c": problem.c, "c_star": problem.c_star, "overdamped": problem.overdamped,
               "u_minus": problem.u_minus, "u_plus": problem.u_plus, "u_s": problem.u_s,
               "first_extremum_u": first.u if first else None, "n_events": len(tr.events),
               "terminal_offset": float(tr.v[-1]), "energy_audit": energy_audit(problem, tr),
               "samples": int(prof.tau.size), "output": str(path)}, None


def cmd_periods(cfg, outdir):
    model, shock = build_model_and_shock(cfg)
    problem = build_problem(cfg, model, shock, c=cfg.friction.c or 1e-3)
    energies = [f * problem.E_max for f in cfg.periods.fractions]
    energies += [problem.E_max * (1.0 - 10.0 ** (-k)) for k in cfg.periods.divergence_k]
    rows, worst = [], 0.0
    for E in energies:
        Tq = period(problem, E)
        To = period_ode(problem, E) if cfg.periods.ode_check else math.nan
        if cfg.periods.ode_check:
            worst = max(worst, abs(Tq - To) / To)
        rows.append((E, Tq, To))
    path = outdir / "periods.csv"
    write_csv(path, _comment(cfg, 0.0), ("E", "T_quad", "T_ode"), rows)
    if cfg.output.gnuplot:
        _gnuplot(outdir / "periods.gp", "periods.csv", "1:2", "E", "T(E)")
    return 0, {"command": "periods", "E_max": problem.E_max, "n": len(rows),
               "max_rel_diff": worst if cfg.periods.ode_check else None, "output": str(path)}, None


def cmd_oscillations(cfg, outdir):
    model, shock = build_model_and_shock(cfg)
    problem = build_problem(cfg, model, shock)
    num = cfg.numerics
    prof = shoot_heteroclinic(problem, offset_scale=num.offset_scale, rtol=num.rtol, tau_budget=num.tau_budget)
    rep = oscillation_report(problem, prof)
    path = outdir / "cycles.csv"
    write_csv(path, _comment(cfg, problem.c), ("n", "tau_min", "tau_max", "E_yn", "dE", "spacing"),
              ((cy.n, cy.tau_min, cy.tau_max, cy.E_yn, cy.dE, cy.spacing) for cy in rep.cycles))
    summary = {"command": "oscillations", "c": problem.c, "cycles": len(rep.cycles), "L_high": rep.L_high,
               "L_low": rep.L_low, "decay_rate": rep.decay_rate, "tail_spacing": rep.tail_spacing,
               "low_confidence": rep.low_confidence, "output": str(path)}
    if cfg.friction.c_list:
        reports = []
        for c in cfg.friction.c_list:
            pc = problem.with_friction(c)
            reports.append(oscillation_report(pc, shoot_heteroclinic(pc, offset_scale=num.offset_scale,
                                                                     rtol=num.rtol)))
        lpath = outdir / "lengths.csv"
        write_csv(lpath, _comment(cfg, None), ("c", "L_high", "L_low", "decay_rate", "tail_spacing"),
                  ((r.c, r.L_high, r.L_low, r.decay_rate, r.tail_spacing) for r in reports))
        slope, intercept, r2 = fit_length_scaling(reports)
        summary.update({"length_slope": slope, "length_intercept": intercept, "length_r2": r2,
                        "lengths_output": str(lpath)})
    return 0, summary, None


def _threads() -> int:
    raw = os.environ.get("DISPSHOCK_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"DISPSHOCK_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def cmd_sweep(cfg, outdir):
    model, shock = build_model_and_shock(cfg)
    sp = cfg.sweep
    records = sweep(model, shock, sp.eps_list, sp.p, window=sp.window, offset_scale=cfg.numerics.offset_scale,
                    rtol=cfg.numerics.rtol, workers=_threads())
    path = outdir / "sweep.csv"
    write_csv(path, _comment(cfg, None) + f" p={_fmt(sp.p)}",
              ("epsilon", "delta", "c", "l1_distance", "support_width"),
              ((r.epsilon, r.delta, r.c, r.l1_distance, r.support_width) for r in records))
    if cfg.output.gnuplot:
        _gnuplot(outdir / "sweep.gp", "sweep.csv", "1:4", "epsilon", "L1 distance")
    failed = [f"epsilon={r.epsilon:g}: {r.error}" for r in records if r.error]
    summary = {"command": "sweep", "records": len(records), "failed": len(failed),
               "window": list(records[0].window) if records else None,
               "l1_distance": [r.l1_distance for r in records], "output": str(path)}
    if failed:
        return 2, summary, "; ".join(failed)
    return 0, summary, None


HANDLERS = {"validate": cmd_validate, "profile": cmd_profile, "periods": cmd_periods,
            "oscillations": cmd_oscillations, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dispshock", description="Dispersive-shock traveling-wave laboratory.")
    ap.add_argument("--version", action="version", version=f"dispshock {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--out", default=None, help="output directory (overrides output.dir)")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if cfg.experiment is not None and args.command not in ("validate", cfg.experiment):
            raise ConfigError(f"config is for '{cfg.experiment}', not '{args.command}'")
        outdir = Path(args.out if args.out is not None else cfg.output.dir)
        code, summary, message = HANDLERS[args.command](cfg, outdir)
    except (ConfigError, HypothesisError) as exc:
        code, summary, message = 1, {"command": args.command}, str(exc)
    except (ValueError, DispShockError) as exc:
        # domain/admissibility problems in the inputs are config errors, the rest numerical
        numerical = isinstance(exc, DispShockError) and not isinstance(exc, ValueError)
        code, summary, message = (2 if numerical else 1), {"command": args.command}, str(exc)
    summary = {"status": "ok" if code == 0 else "error", "exit_code": code, **summary}
    if message:
        summary["message"] = message
        print(f"dispshock {args.command}: {message}", file=sys.stderr)
    print(json.dumps(_json_safe(summary), sort_keys=False, allow_nan=False))
    return code


def main() -> None:
    sys.exit(run())
