"""Small dense linear algebra and graph structure analysis.

Everything here targets coupling matrices of desk scale (tens of nodes), so
the symmetric eigensolver is a cyclic Jacobi iteration chosen for robustness
and determinism rather than speed, left null vectors come from a direct
least-squares solve, and reducibility is decided by Tarjan's
strongly-connected-components algorithm.

Functions accept plain arrays or anything with an ``entries`` attribute
(e.g. :class:`pinnet.model.CouplingMatrix`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OFF_DIAG_TOL = 1e-12
SYMMETRY_TOL = 1e-12
NULL_RESIDUAL_TOL = 1e-10
_MAX_SWEEPS = 60


class SymmetryError(ValueError):
    """Input matrix is not symmetric within tolerance."""


class ReducibilityError(ValueError):
    """An operation requires a strongly connected (irreducible) coupling
    matrix; carries the offending condensation as ``condensation``."""

    def __init__(self, message: str, condensation: "Condensation"):
        super().__init__(message)
        self.condensation = condensation


def _as_square(a, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(getattr(a, "entries", a), dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"{name} must be square and nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum of a symmetric matrix: eigenvalues sorted descending, with the
    matching orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eigen(a) -> EigenDecomposition:
    """Full symmetric eigendecomposition by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm drops below
    ``OFF_DIAG_TOL`` (scaled by the matrix norm above unit size). Raises
    :class:`SymmetryError` if the input is asymmetric beyond tolerance.
    """
    arr = _as_square(a)
    scale = max(1.0, float(np.max(np.abs(arr))))
    if float(np.max(np.abs(arr - arr.T))) > SYMMETRY_TOL * scale:
        raise SymmetryError(
            "matrix is not symmetric within tolerance; "
            "the weighted symmetrization path handles asymmetric coupling"
        )
    n = arr.shape[0]
    b = np.array((arr + arr.T) / 2.0)  # exact symmetrization of roundoff dust
    w = np.eye(n)
    if n > 1:
        tol = OFF_DIAG_TOL * max(1.0, float(np.linalg.norm(b)))
        for _ in range(_MAX_SWEEPS):
            off = float(np.sqrt(2.0 * np.sum(np.tril(b, -1) ** 2)))
            if off <= tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = b[p, q]
                    if apq == 0.0:
                        continue
                    theta = (b[q, q] - b[p, p]) / (2.0 * apq)
                    if theta == 0.0:
                        t = 1.0
                    else:
                        t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    rp, rq = b[p, :].copy(), b[q, :].copy()
                    b[p, :] = c * rp - s * rq
                    b[q, :] = s * rp + c * rq
                    cp, cq = b[:, p].copy(), b[:, q].copy()
                    b[:, p] = c * cp - s * cq
                    b[:, q] = s * cp + c * cq
                    wp, wq = w[:, p].copy(), w[:, q].copy()
                    w[:, p] = c * wp - s * wq
                    w[:, q] = s * wp + c * wq
        else:
            raise RuntimeError(f"Jacobi iteration did not converge in {_MAX_SWEEPS} sweeps")
    values = b.diagonal().copy()
    order = np.argsort(values, kind="stable")[::-1]
    return EigenDecomposition(eigenvalues=values[order], eigenvectors=w[:, order])


def left_null_vector(a, require_irreducible: bool = False) -> np.ndarray:
    """Left null vector xi of a zero-row-sum matrix, normalized to sum 1.

    Solved directly as the least-squares system {xi^T A = 0, sum xi = 1},
    which is deterministic and exact at these sizes. For an irreducible
    matrix this is the (strictly positive) left Perron vector; pass
    ``require_irreducible=True`` to insist, raising
    :class:`ReducibilityError` with the condensation otherwise.
    """
    arr = _as_square(a)
    m = arr.shape[0]
    scale = max(1.0, float(np.max(np.abs(arr))))
    sums = arr.sum(axis=1)
    if float(np.max(np.abs(sums))) > 1e-12 * scale:
        raise ValueError("left_null_vector needs zero row sums")
    if require_irreducible:
        cond = scc_condensation(arr)
        if len(cond.blocks) != 1:
            raise ReducibilityError(
                f"matrix is reducible ({len(cond.blocks)} strongly connected components)",
                cond,
            )
    system = np.vstack([arr.T, np.ones((1, m))])
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    xi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    xi = xi / xi.sum()
    residual = float(np.max(np.abs(xi @ arr)))
    if residual > NULL_RESIDUAL_TOL * scale:
        raise ValueError(f"left null vector residual {residual:.3g} exceeds tolerance")
    return xi


@dataclass(frozen=True)
class Condensation:
    """Strongly-connected-component structure of a coupling graph.

    ``blocks`` holds 1-based node indices, topologically sorted so that
    permuting rows and columns into block order leaves every nonzero entry on
    or below the diagonal blocks (the first block receives no cross-block
    input). ``block_edges`` lists (receiver_block, sender_block) pairs of
    1-based block positions with a nonzero connecting entry.
    """

    blocks: tuple[tuple[int, ...], ...]
    block_edges: frozenset[tuple[int, int]]

    @property
    def irreducible(self) -> bool:
        return len(self.blocks) == 1

    def permutation(self) -> list[int]:
        """0-based node order that makes the matrix block lower triangular."""
        return [i - 1 for block in self.blocks for i in block]


def scc_condensation(a) -> Condensation:
    """Condense the coupling graph into topologically sorted strong components.

    A strictly positive off-diagonal entry ``a[i, j]`` is the edge j -> i
    (node i receives from node j); zero-weight entries carry no connectivity.
    An irreducible matrix yields exactly one block.
    """
    arr = _as_square(a)
    m = arr.shape[0]
    # successors in the "sends to" direction: j -> i iff a[i, j] > 0, i != j
    succ = []
    for j in range(m):
        out = np.nonzero(arr[:, j] > 0.0)[0]
        succ.append([int(i) for i in out if i != j])

    index = [-1] * m
    low = [0] * m
    onstack = [False] * m
    stack: list[int] = []
    counter = 0
    comps: list[list[int]] = []

    for root in range(m):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            descended = False
            for k in range(pi, len(succ[v])):
                u = succ[v][k]
                if index[u] == -1:
                    work[-1] = (v, k + 1)
                    work.append((u, 0))
                    descended = True
                    break
                if onstack[u]:
                    low[v] = min(low[v], index[u])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    onstack[u] = False
                    comp.append(u)
                    if u == v:
                        break
                comps.append(sorted(comp))

    # Tarjan emits receivers first; reverse so sources (root blocks) lead and
    # cross-block entries land below the diagonal blocks.
    comps.reverse()
    blocks = tuple(tuple(i + 1 for i in comp) for comp in comps)
    edges = set()
    for r in range(len(comps)):
        for s in range(r):
            sub = arr[np.ix_(comps[r], comps[s])]
            if np.any(sub > 0.0):
                edges.add((r + 1, s + 1))
    return Condensation(blocks=blocks, block_edges=frozenset(edges))


def symmetrize_weighted(a_tilde, xi) -> np.ndarray:
    """(diag(xi) A + A^T diag(xi)) / 2, symmetric by construction.

    With ``xi`` the left null vector of an unpinned coupling matrix this is
    the weighted form whose largest eigenvalue drives the asymmetric pinning
    condition; its row sums then vanish because xi^T A = 0.
    """
    arr = _as_square(a_tilde)
    w = np.asarray(xi, dtype=float)
    if w.shape != (arr.shape[0],):
        raise ValueError(f"xi must have shape ({arr.shape[0]},), got {w.shape}")
    if np.any(w <= 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("xi must be strictly positive and finite")
    weighted = w[:, None] * arr  # diag(xi) @ A; A.T @ diag(xi) is its transpose
    return (weighted + weighted.T) / 2.0
