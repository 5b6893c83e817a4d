"""Scenario-driven command line: check pinning conditions, run simulations.

A scenario is a JSON object (or one of the built-in ids in
:mod:`pinnet.scenarios`) naming the coupling matrix, node dynamics, coupling
function, pin plan, certificate, initial data, and integration grid.
``check`` runs the condition chain and prints a report; ``run`` integrates
and writes trajectory/metrics CSVs plus a plain-text summary.

Exit codes: 0 success, 1 validation error, 2 condition-check failure under
``--require-conditions``, 3 divergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .conditions import (
    QuadCertificate,
    SpectralReport,
    Verdict,
    min_coupling_strength,
    proposition1_holds,
    quad_check_sampled,
    reducible_pinnability,
    theorem2_check,
    theorem3_check,
    theorem4_check,
)
from .linalg import (
    Condensation,
    left_null_vector,
    scc_condensation,
    symmetrize_weighted,
)
from .model import (
    CouplingError,
    CouplingFunction,
    CouplingMatrix,
    Dynamics,
    NetworkSystem,
    PinPlan,
    make_coupling_function,
    make_dynamics,
    pinned_matrix,
    validate_coupling,
)
from .scenarios import BUILTIN_SCENARIOS, COUPLING_MATRICES
from .simulate import (
    DivergenceError,
    MetricSeries,
    MonitorReport,
    Trajectory,
    decay_rate_fit,
    integrate,
    lyapunov_monitor,
    metrics,
)

QUAD_SAMPLE_BOX = (-30.0, 30.0)
_SUMMARY_FIT_HORIZON = 10.0

_SCENARIO_FIELDS = {
    "name",
    "coupling",
    "dynamics",
    "coupling_function",
    "pin",
    "certificate",
    "initial_states",
    "reference_initial",
    "integration",
    "outputs",
}


class ScenarioError(ValueError):
    """A scenario file or dict failed validation; the message names the field."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated scenario, ready to check or run."""

    name: str
    coupling: CouplingMatrix
    coupling_id: Optional[str]
    dynamics: Dynamics
    gfun: CouplingFunction
    pin: Optional[PinPlan]
    certificate: Optional[QuadCertificate]
    initial_states: np.ndarray
    reference_initial: np.ndarray
    dt: float
    t_max: float
    outputs: dict


def _require(data: dict, key: str):
    if key not in data:
        raise ScenarioError(f"scenario field {key!r} is required")
    return data[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where} must be a number, got {value!r}")
    return float(value)


def parse_scenario(source) -> ScenarioConfig:
    """Load and validate a scenario from a dict, a built-in id, or a file path.

    Every validation error names the offending field; node indices are
    1-based throughout.
    """
    if isinstance(source, dict):
        data = source
    else:
        key = str(source)
        if key in BUILTIN_SCENARIOS:
            data = BUILTIN_SCENARIOS[key]
        else:
            path = Path(key)
            if not path.is_file():
                known = ", ".join(sorted(BUILTIN_SCENARIOS))
                raise ScenarioError(
                    f"{key!r} is neither a readable file nor a built-in scenario "
                    f"(built-ins: {known})"
                )
            try:
                data = json.loads(path.read_text())
            except json.JSONDecodeError as err:
                raise ScenarioError(f"{path}: invalid JSON: {err}") from err
            if not isinstance(data, dict):
                raise ScenarioError(f"{path}: top level must be a JSON object")

    unknown = set(data) - _SCENARIO_FIELDS
    if unknown:
        raise ScenarioError(f"unknown scenario field(s): {', '.join(sorted(unknown))}")

    name = _require(data, "name")
    if not isinstance(name, str) or not name:
        raise ScenarioError("scenario field 'name' must be a nonempty string")

    reference_initial = np.asarray(_require(data, "reference_initial"), dtype=float)
    if reference_initial.ndim != 1 or reference_initial.size == 0:
        raise ScenarioError("reference_initial must be a nonempty flat list of numbers")
    n = reference_initial.size

    dyn_spec = _require(data, "dynamics")
    if not isinstance(dyn_spec, dict) or "kind" not in dyn_spec:
        raise ScenarioError("dynamics must be an object with a 'kind' field")
    try:
        dynamics = make_dynamics(
            dyn_spec["kind"], dim=n, params=dyn_spec.get("params", {})
        )
    except (ValueError, CouplingError) as err:
        raise ScenarioError(f"dynamics: {err}") from err

    coupling_spec = _require(data, "coupling")
    coupling_id = None
    if isinstance(coupling_spec, str):
        if coupling_spec not in COUPLING_MATRICES:
            known = ", ".join(sorted(COUPLING_MATRICES))
            raise ScenarioError(
                f"unknown built-in coupling id {coupling_spec!r} (known: {known})"
            )
        coupling_id = coupling_spec
        coupling_spec = COUPLING_MATRICES[coupling_spec]
    try:
        coupling = validate_coupling(coupling_spec)
    except CouplingError as err:
        raise ScenarioError(f"coupling: {err}") from err
    m = coupling.m

    initial_states = np.asarray(_require(data, "initial_states"), dtype=float)
    if initial_states.shape != (m, n):
        raise ScenarioError(
            f"initial_states must have shape ({m}, {n}) to match the coupling "
            f"matrix and dynamics, got {initial_states.shape}"
        )

    gfun_spec = data.get("coupling_function", {"kind": "identity"})
    if not isinstance(gfun_spec, dict) or "kind" not in gfun_spec:
        raise ScenarioError("coupling_function must be an object with a 'kind' field")
    try:
        gfun = make_coupling_function(
            gfun_spec["kind"], alpha_lower=gfun_spec.get("alpha_lower")
        )
    except ValueError as err:
        raise ScenarioError(f"coupling_function: {err}") from err

    pin = None
    if data.get("pin") is not None:
        pin_spec = data["pin"]
        if not isinstance(pin_spec, dict):
            raise ScenarioError("pin must be an object with node, epsilon, c")
        node = pin_spec.get("node")
        if not isinstance(node, int) or isinstance(node, bool) or not 1 <= node <= m:
            raise ScenarioError(
                f"pin.node must be an integer between 1 and {m} "
                f"(node indices are 1-based), got {node!r}"
            )
        try:
            pin = PinPlan(
                pin_node=node,
                epsilon=_number(_require(pin_spec, "epsilon"), "pin.epsilon"),
                c=_number(_require(pin_spec, "c"), "pin.c"),
            )
        except ValueError as err:
            raise ScenarioError(f"pin: {err}") from err

    certificate = None
    if data.get("certificate") is not None:
        cert_spec = data["certificate"]
        if not isinstance(cert_spec, dict):
            raise ScenarioError("certificate must be an object with P, Delta, eta")
        p = np.asarray(_require(cert_spec, "P"), dtype=float)
        delta = np.asarray(_require(cert_spec, "Delta"), dtype=float)
        if p.shape != (n,) or delta.shape != (n,):
            raise ScenarioError(
                f"certificate.P and certificate.Delta must be length-{n} lists"
            )
        try:
            certificate = QuadCertificate(
                p=p, delta=delta, eta=_number(_require(cert_spec, "eta"), "certificate.eta")
            )
        except ValueError as err:
            raise ScenarioError(f"certificate: {err}") from err

    integration = _require(data, "integration")
    if not isinstance(integration, dict):
        raise ScenarioError("integration must be an object with dt and t_max")
    dt = _number(_require(integration, "dt"), "integration.dt")
    t_max = _number(_require(integration, "t_max"), "integration.t_max")
    if dt <= 0:
        raise ScenarioError(f"integration.dt must be > 0, got {dt}")
    if t_max < dt:
        raise ScenarioError(f"integration.t_max must be >= dt, got {t_max}")

    outputs = data.get("outputs")
    if outputs is None:
        outputs = {
            "trajectory": f"{name}_trajectory.csv",
            "metrics": f"{name}_metrics.csv",
            "summary": f"{name}_summary.txt",
        }
    if (
        not isinstance(outputs, dict)
        or set(outputs) != {"trajectory", "metrics", "summary"}
        or not all(isinstance(v, str) and v for v in outputs.values())
    ):
        raise ScenarioError(
            "outputs must map exactly 'trajectory', 'metrics', 'summary' to filenames"
        )

    return ScenarioConfig(
        name=name,
        coupling=coupling,
        coupling_id=coupling_id,
        dynamics=dynamics,
        gfun=gfun,
        pin=pin,
        certificate=certificate,
        initial_states=initial_states,
        reference_initial=reference_initial,
        dt=dt,
        t_max=t_max,
        outputs=dict(outputs),
    )


def serialize_scenario(cfg: ScenarioConfig) -> dict:
    """Canonical dict form of a config; parse/serialize round-trips exactly."""
    out = {
        "name": cfg.name,
        "coupling": cfg.coupling_id
        if cfg.coupling_id is not None
        else cfg.coupling.entries.tolist(),
        "dynamics": {"kind": cfg.dynamics.kind, "params": dict(cfg.dynamics.params)},
        "coupling_function": {
            "kind": cfg.gfun.kind,
            "alpha_lower": cfg.gfun.alpha_lower,
        },
        "initial_states": cfg.initial_states.tolist(),
        "reference_initial": cfg.reference_initial.tolist(),
        "integration": {"dt": cfg.dt, "t_max": cfg.t_max},
        "outputs": dict(cfg.outputs),
    }
    if cfg.pin is not None:
        out["pin"] = {
            "node": cfg.pin.pin_node,
            "epsilon": cfg.pin.epsilon,
            "c": cfg.pin.c,
        }
    if cfg.certificate is not None:
        out["certificate"] = {
            "P": cfg.certificate.p.tolist(),
            "Delta": cfg.certificate.delta.tolist(),
            "eta": cfg.certificate.eta,
        }
    return out


def build_system(cfg: ScenarioConfig) -> NetworkSystem:
    return NetworkSystem(
        coupling=cfg.coupling, dynamics=cfg.dynamics, gfun=cfg.gfun, pin=cfg.pin
    )


# ---------------------------------------------------------------------------
# condition chain


@dataclass(frozen=True)
class ConditionReport:
    """Everything the condition chain learned about one scenario."""

    scenario: str
    route: str  # "symmetric" | "asymmetric" | "reducible"
    pin: PinPlan
    spectral: Optional[SpectralReport]
    proposition1: Optional[Verdict]
    theorem_name: Optional[str]
    theorem: Optional[Verdict]
    min_c: Optional[float]
    reducibility: Optional[Verdict]
    condensation: Optional[Condensation]
    quad_sampled: Optional[Verdict] = None

    @property
    def gate_verdict(self) -> Optional[Verdict]:
        """The verdict that decides --require-conditions for this route."""
        if self.theorem is not None:
            return self.theorem
        if self.reducibility is not None:
            return self.reducibility
        return self.proposition1


def check_scenario(cfg: ScenarioConfig, quad_samples: int = 0, seed: int = 0) -> ConditionReport:
    """Run the applicable checker chain for a scenario.

    Symmetric coupling: pinned-spectrum negativity plus the global margin
    (theorem2, or theorem3 under a nonlinear coupling map). Asymmetric
    irreducible coupling: the weighted-symmetrization condition (theorem4).
    Reducible coupling: the structural pinnability criterion. Pass
    ``quad_samples > 0`` to also falsification-test the certificate by
    sampling on the default box.
    """
    pin = cfg.pin if cfg.pin is not None else PinPlan(1, 0.0, 1.0)
    spectral = None
    prop = None
    theorem_name = None
    theorem = None
    min_c = None
    reducibility = None
    condensation = None

    if cfg.coupling.symmetric:
        route = "symmetric"
        prop, spectral = proposition1_holds(pinned_matrix(cfg.coupling, pin))
        if cfg.certificate is not None:
            if cfg.gfun.kind == "identity":
                theorem_name = "theorem2"
                theorem = theorem2_check(cfg.certificate, pin.c, spectral.lambda1)
                alpha = 1.0
            else:
                theorem_name = "theorem3"
                alpha = cfg.gfun.alpha_lower
                theorem = theorem3_check(
                    cfg.certificate, pin.c, spectral.lambda1, alpha
                )
            try:
                min_c = min_coupling_strength(
                    cfg.certificate, spectral.lambda1, alpha=alpha
                )
            except ValueError:
                min_c = None
    else:
        condensation = scc_condensation(cfg.coupling)
        if condensation.irreducible:
            route = "asymmetric"
            if cfg.certificate is not None:
                theorem_name = "theorem4"
                theorem, spectral = theorem4_check(cfg.coupling, pin, cfg.certificate)
                prop = _strict_negativity(spectral)
                try:
                    min_c = min_coupling_strength(
                        cfg.certificate, spectral.lambda1, xi_max=spectral.xi_max
                    )
                except ValueError:
                    min_c = None
            else:
                xi = left_null_vector(cfg.coupling)
                weighted = symmetrize_weighted(pinned_matrix(cfg.coupling, pin), xi)
                prop, base = proposition1_holds(weighted)
                spectral = SpectralReport(
                    eigenvalues=base.eigenvalues,
                    lambda1=base.lambda1,
                    xi=xi,
                    xi_max=float(xi.max()),
                )
        else:
            route = "reducible"
            reducibility, condensation = reducible_pinnability(
                cfg.coupling, pin.pin_node
            )

    quad_sampled = None
    if quad_samples > 0:
        if cfg.certificate is None:
            raise ScenarioError("QUAD sampling needs a certificate in the scenario")
        quad_sampled = quad_check_sampled(
            cfg.dynamics, cfg.certificate, QUAD_SAMPLE_BOX, quad_samples, seed=seed
        )

    return ConditionReport(
        scenario=cfg.name,
        route=route,
        pin=pin,
        spectral=spectral,
        proposition1=prop,
        theorem_name=theorem_name,
        theorem=theorem,
        min_c=min_c,
        reducibility=reducibility,
        condensation=condensation,
        quad_sampled=quad_sampled,
    )


def _strict_negativity(spectral: SpectralReport) -> Verdict:
    scale = float(np.max(np.abs(spectral.eigenvalues)))
    holds = spectral.lambda1 < -1e-9 * max(1.0, scale)
    return Verdict(
        holds=bool(holds),
        margin=float(spectral.lambda1),
        detail={"eigenvalues": spectral.eigenvalues},
    )


def _fmt_verdict(v: Verdict) -> str:
    return f"{'holds' if v.holds else 'FAILS'} (margin {v.margin:+.6g})"


def render_report(report: ConditionReport) -> str:
    lines = [f"condition report: {report.scenario}"]
    lines.append(f"  route: {report.route} coupling")
    pin = report.pin
    lines.append(
        f"  pin: node {pin.pin_node}, epsilon {pin.epsilon:g}, c {pin.c:g}"
    )
    if report.spectral is not None:
        sp = report.spectral
        label = "mu1" if report.route == "asymmetric" else "lambda1"
        lines.append(
            f"  {label} = {sp.lambda1:.6f}   (c*{label} = {pin.c * sp.lambda1:.6f})"
        )
        lines.append(
            "  spectrum: [" + ", ".join(f"{v:.6f}" for v in sp.eigenvalues) + "]"
        )
        if sp.xi is not None:
            lines.append(
                "  left Perron vector xi: ["
                + ", ".join(f"{v:.6f}" for v in sp.xi)
                + f"]   max xi = {sp.xi_max:.6f}"
            )
    if report.proposition1 is not None:
        lines.append(
            f"  pinned-spectrum negativity: {_fmt_verdict(report.proposition1)}"
        )
    if report.theorem is not None:
        lines.append(f"  {report.theorem_name}: {_fmt_verdict(report.theorem)}")
    if report.min_c is not None:
        lines.append(f"  minimal coupling strength c* = {report.min_c:.6f}")
    elif report.theorem is not None:
        lines.append("  minimal coupling strength: none (top eigenvalue not negative)")
    if report.reducibility is not None:
        v = report.reducibility
        lines.append(f"  reducible pinnability: {'holds' if v.holds else 'FAILS'}")
        lines.append(f"    blocks: {[list(b) for b in report.condensation.blocks]}")
        for problem in v.detail["problems"]:
            lines.append(f"    problem: {problem}")
    if report.quad_sampled is not None:
        v = report.quad_sampled
        lines.append(
            f"  QUAD sampling: {'no violation' if v.holds else 'VIOLATED'} "
            f"(min quotient {v.detail['min_quotient']:.6f} vs eta, "
            f"{v.detail['samples']} samples, seed {v.detail['seed']})"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# run pipeline


@dataclass
class RunResult:
    config: ScenarioConfig
    report: ConditionReport
    exit_code: int
    diverged: bool = False
    blowup_time: Optional[float] = None
    trajectory_path: Optional[Path] = None
    metrics_path: Optional[Path] = None
    summary_path: Optional[Path] = None
    final_sync: Optional[float] = None
    final_pin: Optional[float] = None
    fitted_rate: Optional[float] = None
    fit_window: Optional[tuple] = None
    monitor: Optional[MonitorReport] = None
    summary_text: str = ""


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_metrics_csv(path, series: MetricSeries) -> None:
    """``t,sync_ratio,pin_ratio,lyapunov`` rows at full double precision;
    undefined ratios are written as nan."""
    nan = float("nan")
    sync = series.sync_ratio
    pin = series.pin_ratio
    with open(path, "w") as f:
        f.write("t,sync_ratio,pin_ratio,lyapunov\n")
        for i, t in enumerate(series.times):
            s = sync[i] if sync is not None else nan
            q = pin[i] if pin is not None else nan
            f.write(f"{_fmt(t)},{_fmt(s)},{_fmt(q)},{_fmt(series.lyapunov[i])}\n")


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """Long-form ``t,node,x1..xn`` rows; the reference is node 0."""
    m, n = traj.states.shape[1], traj.states.shape[2]
    with open(path, "w") as f:
        f.write("t,node," + ",".join(f"x{k + 1}" for k in range(n)) + "\n")
        for i, t in enumerate(traj.times):
            ts = _fmt(t)
            f.write(f"{ts},0," + ",".join(_fmt(v) for v in traj.reference[i]) + "\n")
            for j in range(m):
                f.write(
                    f"{ts},{j + 1},"
                    + ",".join(_fmt(v) for v in traj.states[i, j])
                    + "\n"
                )


def _summary_fit(series: MetricSeries, t_max: float):
    """Fit window [0, min(10, t_max)] clipped to the strictly positive prefix
    of the pin ratio; returns (rate, window) or (None, None)."""
    if series.pin_ratio is None:
        return None, None
    end = min(_SUMMARY_FIT_HORIZON, t_max)
    dead = np.nonzero((series.pin_ratio <= 0.0) & (series.times <= end))[0]
    if dead.size:
        if dead[0] < 2:
            return None, None
        end = float(series.times[dead[0] - 1])
    try:
        return decay_rate_fit(series, (0.0, end)), (0.0, end)
    except ValueError:
        return None, None


def run_scenario(
    cfg: ScenarioConfig,
    out_dir=".",
    require_conditions: bool = False,
) -> RunResult:
    """Check conditions, integrate, and write the scenario's output files.

    Writes only under ``out_dir``. On divergence the partial trajectory and
    metrics are still written, the summary is flagged, and the exit code is
    3. With ``require_conditions`` a failing gate verdict aborts before
    integration with exit code 2.
    """
    report = check_scenario(cfg)
    gate = report.gate_verdict
    if require_conditions and (gate is None or not gate.holds):
        text = render_report(report) + "\nrun aborted: conditions not satisfied"
        return RunResult(config=cfg, report=report, exit_code=2, summary_text=text)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    diverged = False
    blowup = None
    try:
        traj = integrate(
            build_system(cfg),
            cfg.initial_states,
            cfg.reference_initial,
            cfg.dt,
            cfg.t_max,
        )
    except DivergenceError as err:
        traj = err.trajectory
        diverged = True
        blowup = err.blowup_time

    weights = None
    if report.route == "asymmetric" and report.spectral is not None:
        weights = report.spectral.xi
    p = cfg.certificate.p if cfg.certificate is not None else None
    series = metrics(traj, weights=weights, p=p)
    rate, window = _summary_fit(series, cfg.t_max)
    monitor = None
    if cfg.certificate is not None:
        monitor = lyapunov_monitor(traj, cfg.certificate, weights=weights)

    traj_path = out / cfg.outputs["trajectory"]
    metrics_path = out / cfg.outputs["metrics"]
    summary_path = out / cfg.outputs["summary"]
    write_trajectory_csv(traj_path, traj)
    write_metrics_csv(metrics_path, series)

    lines = [render_report(report), ""]
    lines.append(
        f"integration: dt={cfg.dt:g}, t_max={cfg.t_max:g}, steps={len(traj.times) - 1}"
    )
    if diverged:
        lines.append(
            f"DIVERGED at t={blowup:g}: outputs hold the partial trajectory"
        )
    final_sync = float(series.sync_ratio[-1]) if series.sync_ratio is not None else None
    final_pin = float(series.pin_ratio[-1]) if series.pin_ratio is not None else None
    lines.append(
        "final sync_ratio: "
        + (f"{final_sync:.6g}" if final_sync is not None else "undefined")
    )
    lines.append(
        "final pin_ratio: "
        + (f"{final_pin:.6g}" if final_pin is not None else "undefined")
    )
    if rate is not None:
        lines.append(
            f"fitted pin decay rate over [{window[0]:g}, {window[1]:g}]: {rate:.6g}"
        )
    else:
        lines.append("fitted pin decay rate: unavailable")
    if monitor is not None:
        lines.append(
            f"lyapunov monitor: {monitor.violations} violations "
            f"(required rate {monitor.required_rate:.6g}"
            + (
                f", first at t={monitor.first_violation_time:g})"
                if monitor.first_violation_time is not None
                else ")"
            )
        )
    text = "\n".join(lines)
    summary_path.write_text(text + "\n")

    return RunResult(
        config=cfg,
        report=report,
        exit_code=3 if diverged else 0,
        diverged=diverged,
        blowup_time=blowup,
        trajectory_path=traj_path,
        metrics_path=metrics_path,
        summary_path=summary_path,
        final_sync=final_sync,
        final_pin=final_pin,
        fitted_rate=rate,
        fit_window=window,
        monitor=monitor,
        summary_text=text,
    )


# ---------------------------------------------------------------------------
# sweep


def parse_sweep(spec: str) -> np.ndarray:
    """Parse ``c=<a>:<b>:<n>`` into the n sweep values."""
    try:
        key, rest = spec.split("=", 1)
        lo_s, hi_s, n_s = rest.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(n_s)
    except ValueError as err:
        raise ScenarioError(f"bad sweep spec {spec!r}, expected c=<a>:<b>:<n>") from err
    if key != "c":
        raise ScenarioError(f"only coupling-strength sweeps are supported, got {key!r}")
    if count < 1 or hi < lo:
        raise ScenarioError(f"bad sweep range {spec!r}")
    return np.linspace(lo, hi, count)


def run_sweep(cfg: ScenarioConfig, spec: str, out_dir) -> int:
    """Run the scenario at each sweep value of c, one metrics CSV per point,
    plus a ``<name>_sweep.csv`` table of margins and final pin ratios."""
    if cfg.pin is None:
        raise ScenarioError("--sweep needs a scenario with a pin plan")
    values = parse_sweep(spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for c in values:
        pin = dataclasses.replace(cfg.pin, c=float(c))
        point = dataclasses.replace(
            cfg,
            pin=pin,
            outputs={
                "trajectory": f"{cfg.name}_sweep_c{c:g}_trajectory.csv",
                "metrics": f"{cfg.name}_sweep_c{c:g}_metrics.csv",
                "summary": f"{cfg.name}_sweep_c{c:g}_summary.txt",
            },
        )
        result = run_scenario(point, out_dir=out)
        gate = result.report.gate_verdict
        rows.append(
            (
                float(c),
                gate.margin if gate is not None else float("nan"),
                bool(gate.holds) if gate is not None else False,
                result.final_pin if result.final_pin is not None else float("nan"),
                result.diverged,
            )
        )
        print(
            f"sweep c={c:g}: margin={rows[-1][1]:+.6g} holds={rows[-1][2]} "
            f"final_pin={rows[-1][3]:.6g} diverged={result.diverged}"
        )
    table = out / f"{cfg.name}_sweep.csv"
    with open(table, "w") as f:
        f.write("c,margin,holds,final_pin_ratio,diverged\n")
        for c, margin, holds, final_pin, div in rows:
            f.write(f"{_fmt(c)},{_fmt(margin)},{int(holds)},{_fmt(final_pin)},{int(div)}\n")
    print(f"sweep table written to {table}")
    return 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinnet",
        description="Check pinning conditions and simulate pinned ODE networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="integrate a scenario and write CSV outputs")
    run_p.add_argument("scenario", help="scenario file path or built-in id")
    run_p.add_argument("--dt", type=float, help="override the integration step")
    run_p.add_argument("--tmax", type=float, help="override the horizon")
    run_p.add_argument("--out", default="out", help="output directory (default: out)")
    run_p.add_argument(
        "--require-conditions",
        action="store_true",
        help="abort with exit code 2 unless the applicable condition holds",
    )
    run_p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    run_p.add_argument(
        "--sweep", metavar="c=<a>:<b>:<n>", help="sweep the coupling strength"
    )
    run_p.add_argument(
        "--dry-run",
        action="store_true",
        help="validate and print the resolved config without integrating",
    )

    check_p = sub.add_parser("check", help="run the condition chain and report")
    check_p.add_argument("scenario", help="scenario file path or built-in id")
    check_p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    check_p.add_argument(
        "--quad-samples",
        type=int,
        default=0,
        help="also falsification-test the certificate with this many samples",
    )
    check_p.add_argument(
        "--require-conditions",
        action="store_true",
        help="exit with code 2 when the applicable condition fails",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_scenario(args.scenario)
        if args.command == "run":
            if args.dt is not None:
                if args.dt <= 0:
                    raise ScenarioError(f"--dt must be > 0, got {args.dt}")
                cfg = dataclasses.replace(cfg, dt=args.dt)
            if args.tmax is not None:
                if args.tmax < cfg.dt:
                    raise ScenarioError(f"--tmax must be >= dt, got {args.tmax}")
                cfg = dataclasses.replace(cfg, t_max=args.tmax)

        if args.command == "check":
            report = check_scenario(
                cfg, quad_samples=args.quad_samples, seed=args.seed
            )
            print(render_report(report))
            gate = report.gate_verdict
            if args.require_conditions and (gate is None or not gate.holds):
                return 2
            return 0

        if args.dry_run:
            print(json.dumps(serialize_scenario(cfg), indent=2))
            return 0
        if args.sweep:
            return run_sweep(cfg, args.sweep, args.out)
        result = run_scenario(
            cfg, out_dir=args.out, require_conditions=args.require_conditions
        )
        print(result.summary_text)
        return result.exit_code
    except (ScenarioError, CouplingError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
