"""Network data model for diffusively coupled ODE nodes with a single controller.

Coupling matrices have nonnegative off-diagonal weights and zero row sums, so
the all-ones vector is always a right null vector and a fully synchronized
state feels no coupling. A :class:`PinPlan` describes the one controlled node:
feedback gain ``epsilon`` and overall coupling strength ``c``; folding the gain
into the pinned node's diagonal entry gives the "pinned" matrix whose spectrum
drives every stability check in :mod:`pinnet.conditions`.

Node dynamics are looked up in a small registry (built-ins: Chua's circuit and
a linear decay field); coupling may pass through a componentwise monotone map.
State layout is an ``(m, n)`` array, one row per node. Node indices are
1-based in all public interfaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

ROW_SUM_TOL = 1e-12
SYMMETRY_TOL = 1e-12

CHUA_K = 9.0
CHUA_L = 100.0 / 7.0

FieldFn = Callable[[np.ndarray, float], np.ndarray]


class CouplingError(ValueError):
    """An array violates the coupling-matrix contract, or dimensions clash."""


def _absmax(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class CouplingMatrix:
    """Validated m-by-m coupling matrix (build via :func:`validate_coupling`).

    ``symmetric`` is derived at validation time; the entries array is marked
    read-only so instances are safe to share.
    """

    entries: np.ndarray
    symmetric: bool

    @property
    def m(self) -> int:
        return self.entries.shape[0]


def validate_coupling(entries) -> CouplingMatrix:
    """Check zero row sums and nonnegative off-diagonals; wrap the array.

    Raises :class:`CouplingError` naming the offending row or entry (1-based)
    on the first violation found. Row sums must vanish within ``ROW_SUM_TOL``
    absolute.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise CouplingError(f"coupling matrix must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise CouplingError("coupling matrix must have at least one node")
    if not np.all(np.isfinite(a)):
        i, j = map(int, np.argwhere(~np.isfinite(a))[0])
        raise CouplingError(f"entry ({i + 1},{j + 1}) is not finite")
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    neg = np.argwhere(off < 0.0)
    if neg.size:
        i, j = map(int, neg[0])
        raise CouplingError(
            f"off-diagonal entry ({i + 1},{j + 1}) is negative: {a[i, j]!r}"
        )
    sums = a.sum(axis=1)
    bad = np.where(np.abs(sums) > ROW_SUM_TOL)[0]
    if bad.size:
        i = int(bad[0])
        raise CouplingError(
            f"row {i + 1} sums to {sums[i]:.6g}, expected 0 within {ROW_SUM_TOL:g}"
        )
    sym = _absmax(a - a.T) <= SYMMETRY_TOL * max(1.0, _absmax(a))
    a.setflags(write=False)
    return CouplingMatrix(entries=a, symmetric=bool(sym))


@dataclass(frozen=True)
class PinPlan:
    """Single-controller plan: pinned node (1-based), feedback gain, strength.

    ``epsilon == 0`` switches the controller off while keeping the coupling
    strength ``c``; that is how the uncontrolled baselines are expressed. The
    stability theorems themselves require ``epsilon > 0``.
    """

    pin_node: int
    epsilon: float
    c: float

    def __post_init__(self):
        if self.pin_node < 1:
            raise ValueError(f"pin_node is 1-based, got {self.pin_node}")
        if not np.isfinite(self.epsilon) or self.epsilon < 0:
            raise ValueError(f"feedback gain epsilon must be >= 0, got {self.epsilon}")
        if not np.isfinite(self.c) or self.c <= 0:
            raise ValueError(f"coupling strength c must be > 0, got {self.c}")


def pinned_matrix(a, pin: PinPlan) -> np.ndarray:
    """Coupling matrix with the feedback gain folded into the pinned diagonal.

    The output differs from ``a`` at exactly one entry: ``(p, p)`` is reduced
    by ``pin.epsilon``, so the pinned row sums to ``-epsilon`` and every other
    row still sums to zero.
    """
    arr = np.asarray(getattr(a, "entries", a), dtype=float)
    m = arr.shape[0]
    if not 1 <= pin.pin_node <= m:
        raise CouplingError(f"pin_node {pin.pin_node} out of range 1..{m}")
    out = arr.copy()
    i = pin.pin_node - 1
    out[i, i] = out[i, i] - pin.epsilon
    return out


# ---------------------------------------------------------------------------
# node dynamics


def chua_diode(x1):
    """Piecewise-linear diode characteristic h(x) = (2/7)x - (3/14)(|x+1| - |x-1|).

    Slope is -1/7 on |x| <= 1 and 2/7 outside; continuous at the kinks, with
    h(0) = 0.
    """
    x1 = np.asarray(x1, dtype=float)
    return (2.0 / 7.0) * x1 - (3.0 / 14.0) * (np.abs(x1 + 1.0) - np.abs(x1 - 1.0))


def chua_field(x, k: float = CHUA_K, l: float = CHUA_L) -> np.ndarray:
    """Chua's circuit vector field, vectorized over leading axes.

        dx1/dt = k (x2 - h(x1))
        dx2/dt = x1 - x2 + x3
        dx3/dt = -l x2

    At k = 9, l = 100/7 the circuit carries the double-scroll chaotic
    attractor; the origin is an equilibrium since h(0) = 0.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 3:
        raise ValueError(f"chua state must have last dimension 3, got {x.shape}")
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return np.stack([k * (x2 - chua_diode(x1)), x1 - x2 + x3, -l * x2], axis=-1)


CHUA_REGIONS = ("left", "middle", "right")


def chua_region_jacobian(region: str, k: float = CHUA_K, l: float = CHUA_L) -> np.ndarray:
    """Jacobian of the circuit field on one of its three linear regions.

    ``middle`` is |x1| <= 1 where the diode slope is -1/7; ``left`` and
    ``right`` are the outer regions with slope 2/7.
    """
    if region not in CHUA_REGIONS:
        raise ValueError(f"region must be one of {CHUA_REGIONS}, got {region!r}")
    slope = -1.0 / 7.0 if region == "middle" else 2.0 / 7.0
    return np.array(
        [
            [-k * slope, k, 0.0],
            [1.0, -1.0, 1.0],
            [0.0, -l, 0.0],
        ]
    )


@dataclass(frozen=True)
class Dynamics:
    """A named node vector field with its state dimension and parameters.

    ``field_fn(x, t)`` must be vectorized over leading axes, map ``(..., dim)``
    to ``(..., dim)``, return a fresh array, and produce finite derivatives at
    finite states. Build instances through :func:`make_dynamics`.
    """

    kind: str
    dim: int
    params: dict
    field_fn: FieldFn = field(repr=False, compare=False)

    def __call__(self, x, t: float = 0.0) -> np.ndarray:
        return self.field_fn(np.asarray(x, dtype=float), t)


def _build_chua(dim: int, params: Mapping) -> FieldFn:
    if dim != 3:
        raise CouplingError(f"chua dynamics is 3-dimensional, got dim={dim}")
    k = float(params.get("k", CHUA_K))
    l = float(params.get("l", CHUA_L))

    def fn(x, t):
        return chua_field(x, k=k, l=l)

    return fn


def _build_linear_decay(dim: int, params: Mapping) -> FieldFn:
    rate = float(params.get("rate", 1.0))

    def fn(x, t):
        return -rate * x

    return fn


_DYNAMICS_BUILDERS: dict[str, Callable[[int, Mapping], FieldFn]] = {
    "chua": _build_chua,
    "linear_decay": _build_linear_decay,
}


def register_dynamics(kind: str, builder: Callable[[int, Mapping], FieldFn]) -> None:
    """Register a vector-field builder under ``kind`` (import-time setup only)."""
    _DYNAMICS_BUILDERS[kind] = builder


def make_dynamics(kind: str, dim: Optional[int] = None, params: Optional[Mapping] = None) -> Dynamics:
    """Resolve a registered vector field into a ready-to-call :class:`Dynamics`."""
    if kind not in _DYNAMICS_BUILDERS:
        known = ", ".join(sorted(_DYNAMICS_BUILDERS))
        raise ValueError(f"unknown dynamics kind {kind!r} (known: {known})")
    if dim is None:
        if kind != "chua":
            raise ValueError(f"dynamics kind {kind!r} needs an explicit dim")
        dim = 3
    params = dict(params or {})
    return Dynamics(kind=kind, dim=int(dim), params=params,
                    field_fn=_DYNAMICS_BUILDERS[kind](int(dim), params))


# ---------------------------------------------------------------------------
# coupling functions


@dataclass(frozen=True)
class CouplingFunction:
    """Componentwise monotone map applied to coupled states.

    ``alpha_lower`` is a certified lower bound on the difference quotients
    (g(u) - g(v)) / (u - v); the identity map has bound 1.
    """

    kind: str
    alpha_lower: float
    map_fn: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def __call__(self, u) -> np.ndarray:
        return self.map_fn(np.asarray(u, dtype=float))


def _g_identity(u):
    return u


def _g_sine_blend(u):
    # slope 1 + 0.5 cos(u) stays in [0.5, 1.5]
    return u + 0.5 * np.sin(u)


_COUPLING_FUNCTIONS: dict[str, tuple[Callable, float]] = {
    "identity": (_g_identity, 1.0),
    "sine_blend": (_g_sine_blend, 0.5),
}


def register_coupling_function(kind: str, fn: Callable, alpha_lower: float) -> None:
    """Register a scalar monotone map with its certified slope lower bound."""
    if alpha_lower <= 0:
        raise ValueError("alpha_lower must be > 0")
    _COUPLING_FUNCTIONS[kind] = (fn, float(alpha_lower))


def make_coupling_function(kind: str = "identity", alpha_lower: Optional[float] = None) -> CouplingFunction:
    if kind not in _COUPLING_FUNCTIONS:
        known = ", ".join(sorted(_COUPLING_FUNCTIONS))
        raise ValueError(f"unknown coupling function kind {kind!r} (known: {known})")
    fn, default_alpha = _COUPLING_FUNCTIONS[kind]
    alpha = default_alpha if alpha_lower is None else float(alpha_lower)
    if alpha <= 0:
        raise ValueError(f"alpha_lower must be > 0, got {alpha}")
    return CouplingFunction(kind=kind, alpha_lower=alpha, map_fn=fn)


# ---------------------------------------------------------------------------
# assembled system


@dataclass(frozen=True)
class NetworkSystem:
    """Coupling topology + node dynamics + coupling map + optional controller.

    Without a pin plan the coupling strength is 1 (fold any strength into the
    matrix). Instances are immutable and safe to share across threads.
    """

    coupling: CouplingMatrix
    dynamics: Dynamics
    gfun: CouplingFunction = field(default_factory=make_coupling_function)
    pin: Optional[PinPlan] = None

    def __post_init__(self):
        if self.pin is not None and self.pin.pin_node > self.coupling.m:
            raise CouplingError(
                f"pin_node {self.pin.pin_node} exceeds node count {self.coupling.m}"
            )


def make_network_rhs(sys: NetworkSystem) -> Callable[[np.ndarray, float], np.ndarray]:
    """Right-hand side over the stacked array: m node rows plus the reference row.

    The reference evolves under the bare node dynamics; node i additionally
    receives ``c * sum_j a_ij g(x_j)`` and, at the pinned node,
    ``-c epsilon (g(x_pin) - g(s))``. With the identity coupling map both
    reduce to the raw-state forms.
    """
    a = sys.coupling.entries
    dyn = sys.dynamics
    g = sys.gfun
    identity_g = g.kind == "identity"
    if sys.pin is not None:
        c = sys.pin.c
        p = sys.pin.pin_node - 1
        gain = c * sys.pin.epsilon
    else:
        c, p, gain = 1.0, 0, 0.0

    def rhs(y: np.ndarray, t: float) -> np.ndarray:
        out = dyn(y, t)
        coupled = y if identity_g else g(y)
        out[:-1] += c * (a @ coupled[:-1])
        if gain != 0.0:
            out[p] -= gain * (coupled[p] - coupled[-1])
        return out

    return rhs


def system_rhs(sys: NetworkSystem, state, s, t: float = 0.0) -> np.ndarray:
    """Time derivative of all node states given the reference state ``s``.

    ``state`` is (m, n), ``s`` is (n,); returns (m, n). On the synchronized
    manifold (every node at ``s``) the coupling and controller terms vanish up
    to the row-sum tolerance, so the derivative is the bare field at ``s``.
    """
    state = np.asarray(state, dtype=float)
    s = np.asarray(s, dtype=float)
    m, n = sys.coupling.m, sys.dynamics.dim
    if state.shape != (m, n):
        raise CouplingError(f"state must have shape ({m}, {n}), got {state.shape}")
    if s.shape != (n,):
        raise CouplingError(f"reference must have shape ({n},), got {s.shape}")
    y = np.vstack([state, s[None, :]])
    return make_network_rhs(sys)(y, t)[:-1]
