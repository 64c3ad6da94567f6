"""Spectral Galerkin space discretization on the interval (-1, 1).

The basis consists of the orthonormalized Legendre polynomials
``phi_i = sqrt((2i+1)/2) P_i`` for i = 0..p, which makes the mass matrix
the identity; the block eigenproblems downstream then reduce to standard
(rather than generalized) dense eigenproblems.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre
from scipy.linalg import eigh

from .errors import DomainError, InvalidDegreeError, NumericError


@dataclass
class SpatialBasis:
    """Orthonormal Legendre basis of degree p with assembled matrices.

    Attributes
    ----------
    p : int
        Maximal polynomial degree; the basis has p+1 functions.
    M, S, B : ndarray
        Mass, stiffness and boundary-trace matrices, each (p+1) x (p+1);
        B_ij = phi_i(-1) phi_j(-1) + phi_i(1) phi_j(1).
    trace_right, trace_left : ndarray
        Basis values at x = +1 and x = -1.
    """

    p: int
    M: np.ndarray
    S: np.ndarray
    B: np.ndarray
    trace_right: np.ndarray
    trace_left: np.ndarray

    @property
    def n(self):
        return self.p + 1


def _scaled_legendre_matrix(p, x, derivative=False):
    """Values (or derivatives) of the orthonormal basis at points x."""
    n = p + 1
    scale = np.sqrt((2.0 * np.arange(n) + 1.0) / 2.0)
    out = np.zeros((len(x), n))
    for i in range(n):
        c = np.zeros(i + 1)
        c[i] = scale[i]
        out[:, i] = legendre.legval(x, legendre.legder(c) if derivative else c)
    return out


def build_basis(p, quad_nodes=None):
    """Assemble the degree-p basis with Gauss-Legendre quadrature.

    ``quad_nodes`` defaults to p+2, which integrates every polynomial
    integrand appearing in M and S exactly.
    """
    if p < 1:
        raise InvalidDegreeError(f"degree must be >= 1, got {p}")
    if quad_nodes is None:
        quad_nodes = p + 2
    x, w = legendre.leggauss(quad_nodes)
    V = _scaled_legendre_matrix(p, x)
    dV = _scaled_legendre_matrix(p, x, derivative=True)
    M = V.T @ (w[:, None] * V)
    S = dV.T @ (w[:, None] * dV)
    M = 0.5 * (M + M.T)
    S = 0.5 * (S + S.T)
    scale = np.sqrt((2.0 * np.arange(p + 1) + 1.0) / 2.0)
    trace_right = scale.copy()                      # P_i(1) = 1
    trace_left = scale * (-1.0) ** np.arange(p + 1)  # P_i(-1) = (-1)^i
    B = np.outer(trace_left, trace_left) + np.outer(trace_right, trace_right)
    return SpatialBasis(p=p, M=M, S=S, B=B,
                        trace_right=trace_right, trace_left=trace_left)


def inverse_constant(basis):
    """Smallest C with ||u_h'|| <= C ||u_h|| on the basis span.

    Square root of the largest generalized eigenvalue of (S, M).
    """
    try:
        vals = eigh(basis.S, basis.M, eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy rarely fails here
        raise NumericError(f"generalized eigensolve failed for p={basis.p}: {exc}\n"
                           f"S=\n{basis.S}\nM=\n{basis.M}") from exc
    return float(np.sqrt(max(vals.max(), 0.0)))


def eval_on_grid(basis, coeffs, points, derivative=False):
    """Evaluate sum_i coeffs_i phi_i at points in [-1, 1]."""
    points = np.atleast_1d(np.asarray(points, dtype=float))
    if np.any(np.abs(points) > 1.0 + 1e-14):
        raise DomainError("evaluation point outside [-1, 1]")
    V = _scaled_legendre_matrix(basis.p, points, derivative=derivative)
    return V @ np.asarray(coeffs)


def project_function(basis, f, quad_nodes=200):
    """L2 projection of a function onto the basis (coefficient vector)."""
    x, w = legendre.leggauss(quad_nodes)
    V = _scaled_legendre_matrix(basis.p, x)
    rhs = V.T @ (w * f(x))
    return np.linalg.solve(basis.M, rhs)


def export_matrices(basis, outdir):
    """Write the basis matrices M, S, B to CSV files for debugging."""
    from pathlib import Path
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, mat in (("M", basis.M), ("S", basis.S), ("B", basis.B)):
        path = out / f"basis_{name}_p{basis.p}.csv"
        np.savetxt(path, mat, delimiter=",")
        paths.append(str(path))
    return paths
