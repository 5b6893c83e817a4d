"""Fixed-step integration of the pinned network and its tracking metrics.

Classical RK4 advances all node states and the reference trajectory on one
uniform grid. The reference is integrated, never assumed: an equilibrium
start stays put only because the field maps it there. A norm guard converts
silent blowup into a :class:`DivergenceError` carrying the partial trajectory
and the time of the breach.

The circuit's diode term is nonsmooth at |x1| = 1; no event detection is
used (the field is globally Lipschitz, so RK4 merely drops to lower order
locally at crossings, acceptable at the tolerances here).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conditions import QuadCertificate
from .model import NetworkSystem, make_network_rhs

DIVERGENCE_NORM = 1e9
_MONITOR_FLOOR = 1e-300


class DivergenceError(RuntimeError):
    """A node or reference norm breached the guard; ``trajectory`` holds the
    finite prefix (including the breaching state) and ``blowup_time`` the
    grid time of the breach."""

    def __init__(self, message: str, trajectory: "Trajectory", blowup_time: float):
        super().__init__(message)
        self.trajectory = trajectory
        self.blowup_time = blowup_time


@dataclass(frozen=True)
class Trajectory:
    """Uniform-grid sample of the network run: ``times`` (N+1,), node
    ``states`` (N+1, m, n), and the integrated ``reference`` (N+1, n)."""

    times: np.ndarray
    states: np.ndarray
    reference: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def num_nodes(self) -> int:
        return self.states.shape[1]


def integrate(sys: NetworkSystem, x0, s0, dt: float, t_max: float) -> Trajectory:
    """Integrate nodes and reference together with classical RK4.

    ``x0`` is (m, n) initial node states, ``s0`` the (n,) reference start.
    Raises :class:`DivergenceError` once any per-node Euclidean norm exceeds
    ``DIVERGENCE_NORM``, and ``ValueError`` if the right-hand side produces
    non-finite values from finite state.
    """
    if not (dt > 0.0 and np.isfinite(dt)):
        raise ValueError(f"dt must be positive, got {dt}")
    if t_max < dt:
        raise ValueError(f"t_max={t_max} must be at least dt={dt}")
    m, n = sys.coupling.m, sys.dynamics.dim
    x0 = np.asarray(x0, dtype=float)
    s0 = np.asarray(s0, dtype=float)
    if x0.shape != (m, n):
        raise ValueError(f"x0 must have shape ({m}, {n}), got {x0.shape}")
    if s0.shape != (n,):
        raise ValueError(f"s0 must have shape ({n},), got {s0.shape}")
    if not (np.all(np.isfinite(x0)) and np.all(np.isfinite(s0))):
        raise ValueError("initial data must be finite")

    rhs = make_network_rhs(sys)
    steps = int(round(t_max / dt))
    times = np.arange(steps + 1) * dt
    y = np.vstack([x0, s0[None, :]])
    buf = np.empty((steps + 1, m + 1, n))
    buf[0] = y
    half = 0.5 * dt
    sixth = dt / 6.0
    guard2 = DIVERGENCE_NORM * DIVERGENCE_NORM

    for i in range(steps):
        t = times[i]
        k1 = rhs(y, t)
        k2 = rhs(y + half * k1, t + half)
        k3 = rhs(y + half * k2, t + half)
        k4 = rhs(y + dt * k3, t + dt)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        buf[i + 1] = y
        if not np.all(np.isfinite(y)):
            raise ValueError(
                f"right-hand side produced non-finite values at t={times[i + 1]:g}"
            )
        if float(np.max(np.einsum("ij,ij->i", y, y))) > guard2:
            partial = Trajectory(
                times=times[: i + 2],
                states=buf[: i + 2, :m, :].copy(),
                reference=buf[: i + 2, m, :].copy(),
            )
            raise DivergenceError(
                f"state norm exceeded {DIVERGENCE_NORM:g} at t={times[i + 1]:g}",
                partial,
                float(times[i + 1]),
            )
    return Trajectory(times=times, states=buf[:, :m, :], reference=buf[:, m, :])


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class MetricSeries:
    """Normalized tracking errors along a trajectory.

    ``sync_ratio`` measures dispersion around the node average,
    ``pin_ratio`` distance to the reference, both normalized to 1 at t = 0;
    either is None when its initial denominator vanishes (the ratio is
    undefined, not 0/0). ``lyapunov`` is V(t) = 0.5 sum_i w_i dx_i^T P dx_i
    with dx_i = x_i - s.
    """

    times: np.ndarray
    sync_ratio: Optional[np.ndarray]
    pin_ratio: Optional[np.ndarray]
    lyapunov: np.ndarray


def metrics(traj: Trajectory, weights=None, p=None) -> MetricSeries:
    """Sync ratio, pin ratio, and the weighted quadratic error V(t).

    ``weights`` default to 1 per node (pass the left Perron vector for
    asymmetric coupling); ``p`` is the diagonal of P, default identity.
    Node norms are Euclidean.
    """
    x = traj.states
    s = traj.reference
    m, n = x.shape[1], x.shape[2]
    w = np.ones(m) if weights is None else np.asarray(weights, dtype=float)
    pd = np.ones(n) if p is None else np.asarray(p, dtype=float)
    if w.shape != (m,):
        raise ValueError(f"weights must have shape ({m},), got {w.shape}")
    if pd.shape != (n,):
        raise ValueError(f"p must have shape ({n},), got {pd.shape}")

    xbar = x.mean(axis=1)
    sync_dev = np.linalg.norm(x - xbar[:, None, :], axis=2).sum(axis=1)
    pin_dev = np.linalg.norm(x - s[:, None, :], axis=2).sum(axis=1)
    sync_ratio = sync_dev / sync_dev[0] if sync_dev[0] > 0.0 else None
    pin_ratio = pin_dev / pin_dev[0] if pin_dev[0] > 0.0 else None

    dx = x - s[:, None, :]
    lyap = 0.5 * np.einsum("tik,k,i->t", dx * dx, pd, w)
    return MetricSeries(
        times=traj.times, sync_ratio=sync_ratio, pin_ratio=pin_ratio, lyapunov=lyap
    )


def decay_rate_fit(series: MetricSeries, window: tuple[float, float]) -> float:
    """Exponential rate of the pinning error on a time window.

    Least-squares slope of log(pin_ratio) against time; negative means
    decay. The ratio must exist and be strictly positive on the window.
    """
    if series.pin_ratio is None:
        raise ValueError("pin ratio is undefined for this trajectory")
    t_a, t_b = window
    mask = (series.times >= t_a) & (series.times <= t_b)
    if int(mask.sum()) < 2:
        raise ValueError(f"window [{t_a}, {t_b}] contains fewer than two samples")
    vals = series.pin_ratio[mask]
    if np.any(vals <= 0.0):
        raise ValueError("pin ratio must be strictly positive on the fit window")
    return float(np.polyfit(series.times[mask], np.log(vals), 1)[0])


@dataclass(frozen=True)
class MonitorReport:
    """Outcome of the discrete Lyapunov-decrease check: violation count,
    first violation time (None when clean), the worst relative excess over
    the allowed per-step factor, and the required decay rate."""

    violations: int
    first_violation_time: Optional[float]
    worst_excess: float
    required_rate: float


def lyapunov_monitor(
    traj: Trajectory,
    cert: QuadCertificate,
    weights=None,
    tol_rate: float = 1e-3,
) -> MonitorReport:
    """Check V(t+dt) <= V(t) exp(-(eta / min_k p_k - tol_rate) dt) stepwise.

    Report-only: violations are counted, never raised, since the bound is
    meaningful only when the matching global condition holds. ``tol_rate``
    absorbs the O(dt^4) integration error. Steps whose V has underflowed
    below 1e-300 are skipped; the quadratic form is meaningless there.
    """
    series = metrics(traj, weights=weights, p=cert.p)
    v = series.lyapunov
    rate = cert.eta / float(cert.p.min()) - tol_rate
    factor = float(np.exp(-rate * traj.dt))
    prev, nxt = v[:-1], v[1:]
    considered = prev >= _MONITOR_FLOOR
    bad = considered & (nxt > prev * factor)
    count = int(bad.sum())
    first = float(traj.times[1:][bad][0]) if count else None
    if np.any(considered):
        excess = float(np.max(nxt[considered] / (prev[considered] * factor) - 1.0))
    else:
        excess = 0.0
    return MonitorReport(
        violations=count,
        first_violation_time=first,
        worst_excess=excess,
        required_rate=rate,
    )
