"""Susceptance and scattering matrices of a lossless reciprocal BD-RIS.

Component values are stored as a flat vector: the ground susceptances
``b_1..b_N`` first, then one susceptance per interconnection in the graph's
(lexicographic) edge order. The susceptance matrix follows the nodal rule

    B[n, m] = -b_{n,m}                      for n != m
    B[n, n] = b_n + sum_k b_{n,k}

and the scattering matrix is the Cayley transform
``Theta = (I + j Z0 B)^{-1} (I - j Z0 B)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .graph_core import CircuitGraph

__all__ = [
    "Z0",
    "PatternError",
    "SusceptancePattern",
    "assemble_susceptance",
    "extract_components",
    "scattering_from_susceptance",
    "pattern_membership",
    "pattern_mask",
    "matrix_to_json",
    "matrix_from_json",
]

Z0 = 50.0  # reference impedance, ohms


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class SusceptancePattern:
    """Map between component vectors and graph-constrained matrices."""

    graph: CircuitGraph
    rows: np.ndarray = field(init=False, repr=False)
    cols: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        e = np.array(self.graph.edges, dtype=int).reshape(-1, 2) - 1
        object.__setattr__(self, "rows", e[:, 0])
        object.__setattr__(self, "cols", e[:, 1])

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def size(self) -> int:
        """Number of free coordinates, ``N + |E|``."""
        return self.graph.n + len(self.graph.edges)

    def labels(self) -> list[str]:
        return [f"b{v}" for v in self.graph.vertices] + [
            f"b{i},{j}" for i, j in self.graph.edges
        ]

    @property
    def basis(self) -> np.ndarray:
        """Dense ``(N*N, N+|E|)`` matrix with ``vec(B) = basis @ components``."""
        try:
            return self.__dict__["_basis"]
        except KeyError:
            pass
        n = self.n
        M = np.zeros((n, n, self.size))
        idx = np.arange(n)
        M[idx, idx, idx] = 1.0
        for k, (i, j) in enumerate(zip(self.rows, self.cols), start=n):
            M[i, i, k] = M[j, j, k] = 1.0
            M[i, j, k] = M[j, i, k] = -1.0
        M = M.reshape(n * n, self.size)
        object.__setattr__(self, "_basis", M)
        return M

    def chain_rule(self, grad_b: np.ndarray) -> np.ndarray:
        """Pull a gradient with respect to the entries of B back to components.

        ``grad_b[n, m]`` is the derivative with respect to entry ``B[n, m]``
        treated as independent of the others.
        """
        return grad_b.reshape(-1) @ self.basis


def assemble_susceptance(pattern: SusceptancePattern, components) -> np.ndarray:
    x = np.asarray(components, dtype=float)
    if x.shape != (pattern.size,):
        raise PatternError(
            f"expected {pattern.size} components for this pattern, got shape {x.shape}"
        )
    if not np.all(np.isfinite(x)):
        raise PatternError("component values must be finite")
    n = pattern.n
    ground, edge = x[:n], x[n:]
    r, c = pattern.rows, pattern.cols
    B = np.zeros((n, n))
    B[r, c] = -edge
    B[c, r] = -edge
    diag = ground.copy()
    np.add.at(diag, r, edge)
    np.add.at(diag, c, edge)
    B[np.arange(n), np.arange(n)] = diag
    return B


def extract_components(B, pattern: SusceptancePattern) -> np.ndarray:
    """Invert :func:`assemble_susceptance`.

    Raises :class:`PatternError` naming the first entry that breaks symmetry
    or the graph's zero pattern.
    """
    B = np.asarray(B, dtype=float)
    _check_square(B, pattern.n)
    _check_pattern(B, pattern.graph, raise_on_fail=True)
    r, c = pattern.rows, pattern.cols
    edge = -B[r, c]
    ground = B.sum(axis=1)
    return np.concatenate([ground, edge])


def scattering_from_susceptance(B, z0: float = Z0) -> np.ndarray:
    """Cayley transform of ``j z0 B`` through a linear solve (no inverse)."""
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    A = 1j * z0 * B
    eye = np.eye(n)
    try:
        return scipy.linalg.solve(eye + A, eye - A, check_finite=True)
    except scipy.linalg.LinAlgError as exc:
        raise PatternError(f"I + jZ0B is singular; corrupted susceptance input ({exc})") from exc


def pattern_membership(B, graph: CircuitGraph) -> bool:
    """True iff ``B`` is symmetric and zero on every off-diagonal non-edge."""
    B = np.asarray(B)
    _check_square(B, graph.n)
    return _check_pattern(B, graph, raise_on_fail=False)


def pattern_mask(graph: CircuitGraph) -> np.ndarray:
    """0/1 mask of entries that may be nonzero (diagonal always free)."""
    m = np.eye(graph.n, dtype=int)
    for i, j in graph.edges:
        m[i - 1, j - 1] = m[j - 1, i - 1] = 1
    return m


def _check_square(B, n):
    if B.ndim != 2 or B.shape != (n, n):
        raise PatternError(f"matrix shape {B.shape} does not match graph order {n}")


def _check_pattern(B, graph, raise_on_fail):
    asym = np.argwhere(B != B.T)
    if asym.size:
        if raise_on_fail:
            i, j = asym[0] + 1
            raise PatternError(f"matrix is not symmetric at entry ({i}, {j})")
        return False
    bad = np.argwhere((B != 0) & (pattern_mask(graph) == 0))
    if bad.size:
        if raise_on_fail:
            i, j = bad[0] + 1
            raise PatternError(f"entry ({i}, {j}) is nonzero but ({i}, {j}) is not an edge")
        return False
    return True


def matrix_to_json(M) -> str:
    M = np.asarray(M)
    return json.dumps(
        {"real": np.real(M).tolist(), "imag": np.imag(M).tolist()}
    )


def matrix_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    re = np.array(data["real"], dtype=float)
    im = np.array(data.get("imag", np.zeros_like(re)), dtype=float)
    return re + 1j * im if np.any(im) else re
