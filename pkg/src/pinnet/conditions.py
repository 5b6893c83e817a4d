"""Executable sufficient conditions for pinning a coupled network to a target.

The checkers cover the whole decision chain: negativity of the pinned
coupling spectrum (:func:`proposition1_holds`), the QUAD one-sided-Lipschitz
certificate for the node dynamics (:func:`quad_certificate_chua`,
:func:`quad_check_sampled`), local and global margins for symmetric coupling
(:func:`theorem1_margin`, :func:`theorem2_check`), nonlinear coupling
(:func:`theorem3_check`), asymmetric coupling through the weighted
symmetrization (:func:`theorem4_check`), the minimal coupling strength
(:func:`min_coupling_strength`), and the structural criterion for reducible
topologies (:func:`reducible_pinnability`).

All conditions are strict inequalities: a margin of exactly zero fails. The
negativity tolerance is relative, ``margin < -1e-9 * max(1, scale)`` with
``scale`` the magnitude of the binding combination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    Condensation,
    ReducibilityError,
    SymmetryError,
    left_null_vector,
    scc_condensation,
    sym_eigen,
    symmetrize_weighted,
)
from .model import (
    CHUA_K,
    CHUA_L,
    CouplingMatrix,
    Dynamics,
    PinPlan,
    chua_region_jacobian,
    pinned_matrix,
    validate_coupling,
)

NEG_TOL = 1e-9


@dataclass(frozen=True)
class QuadCertificate:
    """Diagonal certificate (P, Delta, eta) for the quadratic decrease bound

        (x - y)^T P (f(x) - Delta x - f(y) + Delta y) <= -eta ||x - y||^2.

    ``p`` and ``delta`` are the diagonals (length n); all p_k and eta must be
    positive.
    """

    p: np.ndarray
    delta: np.ndarray
    eta: float

    def __post_init__(self):
        # copy so freezing the fields cannot leak back to caller arrays
        p = np.atleast_1d(np.array(self.p, dtype=float))
        d = np.atleast_1d(np.array(self.delta, dtype=float))
        if p.ndim != 1 or d.shape != p.shape:
            raise ValueError("p and delta must be 1-d diagonals of equal length")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(d))):
            raise ValueError("certificate diagonals must be finite")
        if np.any(p <= 0.0):
            raise ValueError("all p_k must be > 0")
        if not np.isfinite(self.eta) or self.eta <= 0.0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        p.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "delta", d)


@dataclass(frozen=True)
class SpectralReport:
    """Spectrum backing a verdict: eigenvalues sorted descending, their top
    value, and (asymmetric case) the left Perron vector with its maximum."""

    eigenvalues: np.ndarray
    lambda1: float
    xi: Optional[np.ndarray] = None
    xi_max: Optional[float] = None


@dataclass(frozen=True)
class Verdict:
    """Outcome of one condition: ``margin`` is the most-binding slack
    (negative means satisfied), ``detail`` carries per-component values and
    which component binds."""

    holds: bool
    margin: float
    detail: dict


def _strict(margin: float, scale: float, detail: dict) -> Verdict:
    holds = margin < -NEG_TOL * max(1.0, abs(scale))
    return Verdict(holds=bool(holds), margin=float(margin), detail=detail)


# ---------------------------------------------------------------------------
# spectral negativity


def proposition1_holds(a_tilde) -> tuple[Verdict, SpectralReport]:
    """All eigenvalues of a pinned symmetric coupling matrix are negative.

    Holds when the largest eigenvalue is below the negativity tolerance; an
    unpinned zero-row-sum matrix always fails (eigenvalue 0 on the all-ones
    vector). Asymmetric input raises :class:`SymmetryError`; route those
    through :func:`theorem4_check`.
    """
    arr = np.asarray(getattr(a_tilde, "entries", a_tilde), dtype=float)
    try:
        dec = sym_eigen(arr)
    except SymmetryError:
        raise SymmetryError(
            "proposition1_holds needs symmetric coupling; "
            "use theorem4_check for asymmetric matrices"
        ) from None
    lam1 = float(dec.eigenvalues[0])
    scale = float(np.max(np.abs(arr)))
    verdict = _strict(lam1, scale, {"eigenvalues": dec.eigenvalues})
    report = SpectralReport(eigenvalues=dec.eigenvalues, lambda1=lam1)
    return verdict, report


# ---------------------------------------------------------------------------
# QUAD certificates


def _sym_part(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2.0


def _spectral_norm_sym(m: np.ndarray) -> float:
    ev = sym_eigen(m).eigenvalues
    return float(max(abs(ev[0]), abs(ev[-1])))


def _check_diagonals(p, delta, n: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if n is not None and (p.shape != (n,) or delta.shape != (n,)):
        raise ValueError(f"p and delta must have shape ({n},)")
    if np.any(p <= 0.0):
        raise ValueError("all p_k must be > 0")
    return p, delta


def quad_margin_affine(p, delta, jacobian) -> float:
    """Exact QUAD margin for an affine field f(x) = J x + b:
    -lambda_max(sym(P (J - Delta))). Positive means certified."""
    jac = np.asarray(jacobian, dtype=float)
    p, delta = _check_diagonals(p, delta, jac.shape[0])
    m = _sym_part(p[:, None] * (jac - np.diag(delta)))
    return -float(sym_eigen(m).eigenvalues[0])


def quad_certificate_chua(p, delta, k: float = CHUA_K, l: float = CHUA_L) -> float:
    """Certified QUAD margin for Chua's circuit with diagonal P and Delta.

    The field is affine except through the scalar piecewise-linear diode
    term, whose difference quotients lie between the two regional slopes
    (-1/7 and 2/7). The certificate evaluates the classical worst-case bound
    at those slope extremes:

        eta = min_k p_k Delta_k - max_slope || sym(P J(slope)) ||_2

    which is conservative for pairs straddling a kink but valid everywhere;
    a nonpositive return means no certificate at this (P, Delta). For P = I,
    Delta = 10 I at the standard circuit parameters the binding region is the
    outer slope and eta = 0.6218.
    """
    p, delta = _check_diagonals(p, delta, 3)
    gain = max(
        _spectral_norm_sym(_sym_part(p[:, None] * chua_region_jacobian(region, k, l)))
        for region in ("middle", "right")
    )
    return float(np.min(p * delta) - gain)


def certified_quad_margin(dynamics: Dynamics, p, delta) -> float:
    """Closed-form QUAD margin for a built-in field; the sanity path for
    affine dynamics is exact, the circuit path uses the regional certificate.
    Unknown kinds raise: fall back on :func:`quad_check_sampled`."""
    if dynamics.kind == "chua":
        k = float(dynamics.params.get("k", CHUA_K))
        l = float(dynamics.params.get("l", CHUA_L))
        return quad_certificate_chua(p, delta, k=k, l=l)
    if dynamics.kind == "linear_decay":
        rate = float(dynamics.params.get("rate", 1.0))
        return quad_margin_affine(p, delta, -rate * np.eye(dynamics.dim))
    raise ValueError(
        f"no closed-form QUAD margin for dynamics kind {dynamics.kind!r}; "
        "use quad_check_sampled"
    )


def quad_check_sampled(
    dynamics: Dynamics,
    cert: QuadCertificate,
    box,
    samples: int,
    seed: int = 0,
) -> Verdict:
    """Monte-Carlo falsifier for a QUAD certificate.

    Samples state pairs uniformly in the box and evaluates the decrease
    quotient -(x-y)^T P (f(x) - Delta x - f(y) + Delta y) / ||x-y||^2; the
    verdict holds when the minimum observed quotient is >= cert.eta.
    Sampling can only refute a certificate, never prove one. Coincident
    pairs are redrawn, so the quotient is well defined for every sample.
    ``box`` is (lo, hi) scalars or per-dimension arrays.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = dynamics.dim
    lo, hi = box
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (n,)).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (n,)).copy()
    if not np.all(hi > lo) or not np.all(np.isfinite(lo) & np.isfinite(hi)):
        raise ValueError(f"degenerate sampling box: lo={lo}, hi={hi}")
    p, delta = cert.p, cert.delta
    if p.shape != (n,):
        raise ValueError(f"certificate dimension {p.shape[0]} != dynamics dim {n}")

    rng = np.random.default_rng(seed)
    best = np.inf
    best_pair = (None, None)
    chunk = 200_000
    remaining = int(samples)
    while remaining > 0:
        size = min(chunk, remaining)
        remaining -= size
        x = rng.uniform(lo, hi, size=(size, n))
        y = rng.uniform(lo, hi, size=(size, n))
        d = x - y
        nrm2 = np.einsum("ij,ij->i", d, d)
        while np.any(nrm2 == 0.0):
            idx = np.nonzero(nrm2 == 0.0)[0]
            y[idx] = rng.uniform(lo, hi, size=(idx.size, n))
            d[idx] = x[idx] - y[idx]
            nrm2[idx] = np.einsum("ij,ij->i", d[idx], d[idx])
        decrease = -(d * (p * (dynamics(x) - dynamics(y)) - (p * delta) * d)).sum(axis=1)
        quotients = decrease / nrm2
        k = int(np.argmin(quotients))
        if quotients[k] < best:
            best = float(quotients[k])
            best_pair = (x[k].copy(), y[k].copy())
    margin = cert.eta - best
    detail = {
        "min_quotient": best,
        "minimizing_pair": best_pair,
        "samples": int(samples),
        "seed": int(seed),
    }
    return Verdict(holds=bool(best >= cert.eta), margin=float(margin), detail=detail)


# ---------------------------------------------------------------------------
# margin checks


def _margin_verdict(terms: np.ndarray, scale_terms: np.ndarray, detail: dict) -> Verdict:
    k = int(np.argmax(terms))
    detail = dict(detail, per_component=terms, binding_k=k + 1)
    return _strict(float(terms[k]), float(scale_terms[k]), detail)


def theorem1_margin(sys, lambda1: float) -> Verdict:
    """Local pinning condition for the built-in circuit dynamics.

    mu_region is the largest eigenvalue of the symmetrized Jacobian on each
    linear region; the condition holds when max_region mu < -c lambda1, i.e.
    margin = max mu + c lambda1 < 0. Other dynamics kinds are unsupported.
    """
    if sys.dynamics.kind != "chua":
        raise ValueError("theorem1_margin supports only the built-in circuit dynamics")
    if sys.pin is None:
        raise ValueError("theorem1_margin needs a pin plan (coupling strength c)")
    k = float(sys.dynamics.params.get("k", CHUA_K))
    l = float(sys.dynamics.params.get("l", CHUA_L))
    mus = {
        region: float(sym_eigen(_sym_part(chua_region_jacobian(region, k, l))).eigenvalues[0])
        for region in ("left", "middle", "right")
    }
    mu = max(mus.values())
    c = sys.pin.c
    margin = mu + c * lambda1
    scale = abs(mu) + abs(c * lambda1)
    return _strict(margin, scale, {"mu_by_region": mus, "c_lambda1": c * lambda1})


def theorem2_check(cert: QuadCertificate, c: float, lambda1: float) -> Verdict:
    """Global pinning margin for symmetric coupling:
    max_k Delta_k + c lambda1 < 0."""
    terms = cert.delta + c * lambda1
    scales = np.abs(cert.delta) + abs(c * lambda1)
    return _margin_verdict(terms, scales, {"c": c, "lambda1": lambda1})


def theorem3_check(cert: QuadCertificate, c: float, lambda1: float, alpha: float) -> Verdict:
    """Global pinning margin under a monotone coupling map with difference
    quotients >= alpha > 0: max_k Delta_k + alpha c lambda1 < 0. At alpha = 1
    this coincides with :func:`theorem2_check` bit for bit."""
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    terms = cert.delta + alpha * (c * lambda1)
    scales = np.abs(cert.delta) + abs(alpha * (c * lambda1))
    return _margin_verdict(terms, scales, {"c": c, "lambda1": lambda1, "alpha": alpha})


def theorem4_check(a, pin: PinPlan, cert: QuadCertificate) -> tuple[Verdict, SpectralReport]:
    """Global pinning margin for irreducible asymmetric coupling.

    With xi the left Perron vector of the unpinned matrix and mu1 the largest
    eigenvalue of (diag(xi) A~ + A~^T diag(xi)) / 2 for the pinned matrix A~,
    the condition is max_k Delta_k max_i xi_i + c mu1 < 0. Reducible input
    raises :class:`ReducibilityError`; use :func:`reducible_pinnability`.
    """
    coupling = a if isinstance(a, CouplingMatrix) else validate_coupling(a)
    cond = scc_condensation(coupling)
    if not cond.irreducible:
        raise ReducibilityError(
            "theorem4_check needs an irreducible coupling matrix; "
            "use reducible_pinnability",
            cond,
        )
    xi = left_null_vector(coupling)
    weighted = symmetrize_weighted(pinned_matrix(coupling, pin), xi)
    dec = sym_eigen(weighted)
    mu1 = float(dec.eigenvalues[0])
    xi_max = float(xi.max())
    terms = cert.delta * xi_max + pin.c * mu1
    scales = np.abs(cert.delta * xi_max) + abs(pin.c * mu1)
    verdict = _margin_verdict(terms, scales, {"c": pin.c, "mu1": mu1, "xi_max": xi_max})
    report = SpectralReport(
        eigenvalues=dec.eigenvalues, lambda1=mu1, xi=xi, xi_max=xi_max
    )
    return verdict, report


def min_coupling_strength(
    cert: QuadCertificate,
    lambda1: float,
    alpha: float = 1.0,
    xi_max: float = 1.0,
) -> float:
    """Smallest coupling strength making the global margin negative.

    Closed form for the family max_k Delta_k xi_max + alpha c lambda1 < 0:
    c* = max_k Delta_k xi_max / (-alpha lambda1), re-verified by evaluating
    the margin just above c*. Requires lambda1 < 0 (a numerically zero top
    eigenvalue means no finite strength pins the network) and returns 0 when
    every Delta_k is nonpositive.
    """
    if alpha <= 0 or xi_max <= 0:
        raise ValueError("alpha and xi_max must be > 0")
    if lambda1 >= -1e-12:
        raise ValueError(
            f"lambda1 = {lambda1:.6g} is not negative: no finite coupling strength exists"
        )
    top = float(np.max(cert.delta)) * xi_max
    if top <= 0.0:
        return 0.0
    c_star = top / (-alpha * lambda1)
    probe = cert.delta * xi_max + alpha * (c_star * (1.0 + 1e-6)) * lambda1
    if not np.max(probe) < 0.0:
        raise RuntimeError("minimal coupling strength failed re-verification")
    return float(c_star)


def reducible_pinnability(a, pin_node: int) -> tuple[Verdict, Condensation]:
    """Structural pinnability of a possibly reducible network.

    Holds when the condensation has exactly one root block (a component
    receiving no cross-block input), the pinned node lies inside it, and
    every other block is fed by some earlier block. The verdict margin is
    -1 when all requirements hold and counts the violations otherwise.
    """
    coupling = a if isinstance(a, CouplingMatrix) else validate_coupling(a)
    if not 1 <= pin_node <= coupling.m:
        raise ValueError(f"pin_node {pin_node} out of range 1..{coupling.m}")
    cond = scc_condensation(coupling)
    receivers = {r for r, _ in cond.block_edges}
    roots = [q for q in range(1, len(cond.blocks) + 1) if q not in receivers]
    pin_block = next(
        q for q, block in enumerate(cond.blocks, start=1) if pin_node in block
    )
    unfed = [q for q in range(2, len(cond.blocks) + 1) if q not in receivers]
    problems = []
    if len(roots) != 1:
        problems.append(f"{len(roots)} root blocks, need exactly 1")
    if pin_block not in roots:
        problems.append(f"pinned node {pin_node} sits in block {pin_block}, not a root")
    if unfed:
        problems.append(f"blocks {unfed} receive no cross-block input")
    holds = not problems
    detail = {
        "blocks": cond.blocks,
        "root_blocks": roots,
        "pin_block": pin_block,
        "unfed_blocks": unfed,
        "problems": problems,
    }
    return Verdict(holds=holds, margin=-1.0 if holds else float(len(problems)), detail=detail), cond


# ---------------------------------------------------------------------------
# random instances for property suites


def random_coupling_matrix(
    rng: np.random.Generator,
    m: int,
    symmetric: bool = True,
    edge_prob: float = 0.5,
    require_irreducible: bool = True,
    max_tries: int = 500,
) -> CouplingMatrix:
    """Random Erdos-Renyi coupling matrix with uniform (0, 1] edge weights.

    Off-diagonal entries are present independently with ``edge_prob``
    (mirrored when symmetric), the diagonal is set to minus the row sum, and
    draws are rejected until the graph is strongly connected when
    ``require_irreducible``. Deterministic given the generator state.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    for _ in range(max_tries):
        a = np.zeros((m, m))
        if m > 1:
            mask = rng.random((m, m)) < edge_prob
            weights = 1.0 - rng.random((m, m))  # uniform on (0, 1]
            np.fill_diagonal(mask, False)
            if symmetric:
                upper = np.triu(mask, 1)
                a[upper] = weights[upper]
                a = a + a.T
            else:
                a[mask] = weights[mask]
            np.fill_diagonal(a, -a.sum(axis=1))
        if not require_irreducible or scc_condensation(a).irreducible:
            return validate_coupling(a)
    raise RuntimeError(
        f"no strongly connected draw in {max_tries} tries (m={m}, p={edge_prob})"
    )
