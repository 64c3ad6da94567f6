"""Dense eigenvalue solution of the block pencil and mode bookkeeping.

The block pencil A x = i omega Bmass x is reduced to a standard dense
eigenproblem (Bmass is the identity for the orthonormal spatial basis)
and solved with the LAPACK QR algorithm.  Every eigenvalue is folded
into the temporal Brillouin zone Re omega in (-W/2, W/2]; eigenvectors
are normalized in ||.||_{K,D} and refined by one round of inverse
iteration plus a Rayleigh-quotient root update on the quadratic pencil,
which pushes residuals of well-separated eigenvalues below 1e-8.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import ModeNotFoundError, NumericError, SizeLimitError
from .modulation import HarmonicVector, shifted_derivative
from .assembly import assemble_block, assemble_quadratic
from .spectral import inverse_constant
from .timedomain import growth_constant

DENSE_LIMIT = 6000


def brillouin_fold(omega, omega_mod):
    """Representative of omega with real part in (-W/2, W/2]."""
    if omega_mod <= 0:
        raise ValueError("modulation frequency must be positive")
    omega = complex(omega)
    shift = np.round(omega.real / omega_mod)
    folded = omega - shift * omega_mod
    if folded.real <= -omega_mod / 2:
        folded += omega_mod
    elif folded.real > omega_mod / 2:
        folded -= omega_mod
    return folded


@dataclass
class FloquetMode:
    """One computed eigenpair of the fully discrete coupled harmonics."""

    omega: complex
    u_hat: HarmonicVector
    z_hat: HarmonicVector
    residual: float
    K: int
    p: int
    bc: str
    kappa0: float
    fingerprint: str = ""
    # number of modulation frequencies subtracted when folding the raw
    # eigenvalue into the fundamental zone; 0 marks the in-zone representative
    fold_index: int = 0

    def correlation(self, reference_flat):
        """|<u, r>| / (||u|| ||r||) against a reference coefficient vector."""
        u = self.u_hat.flat()
        r = np.asarray(reference_flat, dtype=complex).reshape(-1)
        denom = np.linalg.norm(u) * np.linalg.norm(r)
        return float(abs(np.vdot(r, u)) / denom)


@dataclass
class SpectrumReport:
    """Computed spectrum with diagnostics and provenance."""

    modes: list
    omega_mod: float
    C_inv: float
    c_kappa: float
    C_kappa: float
    C_kappa_prime: float
    elapsed: float
    config: dict = field(default_factory=dict)

    def omegas(self):
        return np.array([m.omega for m in self.modes])

    def csv_rows(self):
        rows = []
        for m in self.modes:
            rows.append({
                "re_omega": m.omega.real,
                "im_omega": m.omega.imag,
                "residual": m.residual,
                "K": m.K,
                "p": m.p,
                "bc": m.bc,
                "kappa0": m.kappa0,
                "C_inv": self.C_inv,
                "C_kappa_prime": self.C_kappa_prime,
            })
        return rows

    def near_duplicates(self, tol=1e-10):
        """Pairs of eigenvalues closer than ``tol`` (possible genuine multiples)."""
        om = self.omegas()
        order = np.lexsort((om.imag, om.real))
        pairs = []
        for a, b in zip(order[:-1], order[1:]):
            if abs(om[a] - om[b]) < tol:
                pairs.append((a, b))
        return pairs


def _refine_mode(problem, pencil, omega, u_flat):
    """Inverse iteration on Q(omega) plus a quadratic Rayleigh root update."""
    n = u_flat.size
    best_u = u_flat / np.linalg.norm(u_flat)
    best_omega = omega
    best_res = np.linalg.norm(pencil(best_omega) @ best_u)
    u = best_u
    for _ in range(2):
        Q = pencil(omega)
        try:
            x = sla.solve(Q + 1e-14 * np.linalg.norm(Q, np.inf) * np.eye(n), u)
        except (np.linalg.LinAlgError, ValueError):
            break
        nx = np.linalg.norm(x)
        if not np.isfinite(nx) or nx == 0.0:
            break
        u = x / nx
        # Rayleigh update: root of the scalar quadratic u* Q(w) u = 0 nearest omega
        a = -np.vdot(u, pencil.M2 @ u)
        b = -1j * np.vdot(u, pencil.C1 @ u)
        c = np.vdot(u, pencil.K0 @ u)
        roots = np.roots([a, b, c]) if abs(a) > 0 else np.array([omega])
        if roots.size:
            omega = roots[np.argmin(np.abs(roots - omega))]
        res = np.linalg.norm(pencil(omega) @ u)
        if res < best_res:
            best_res, best_u, best_omega = res, u, omega
    return best_omega, best_u, float(best_res)


def solve_spectrum(problem, dense_limit=DENSE_LIMIT, refine=True,
                   refine_tol=1e-9, block=None, pencil=None):
    """All eigenvalues of the block pencil, folded and normalized.

    Modes whose raw residual exceeds refine_tol, and modes that sit in
    a defective cluster at the origin, are polished by inverse
    iteration with a Rayleigh root update; the rest keep the QR output.
    Returns a SpectrumReport with modes sorted by |Im omega|, then Re.
    """
    t0 = time.perf_counter()
    if block is None:
        block = assemble_block(problem)
    if block.size > dense_limit:
        raise SizeLimitError(f"pencil dimension {block.size} exceeds limit {dense_limit}")
    if pencil is None:
        pencil = assemble_quadratic(problem)
    # Bmass is the identity for the orthonormal basis; fall back to a
    # generalized solve otherwise.
    if np.allclose(block.Bmass, np.eye(block.size), atol=1e-12):
        try:
            lam, vecs = sla.eig(block.A)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"dense eigensolver failed: {exc}") from exc
    else:
        lam, vecs = sla.eig(block.A, block.Bmass)
    omegas = -1j * lam
    n = problem.size
    modes = []
    fp = problem.fingerprint()
    for j in range(omegas.size):
        om = brillouin_fold(omegas[j], problem.omega_mod)
        u = vecs[:n, j]
        if np.linalg.norm(u) < 1e-13 * np.linalg.norm(vecs[:, j]):
            # z-dominated vector from a defective cluster; reconstruct u by
            # refinement from the z part
            u = vecs[n:, j]
        # folding omega by l*W re-indexes the harmonics: u'_m = u_{m-l},
        # dropping coefficients pushed outside the truncation window
        shift = int(np.round((omegas[j].real - om.real) / problem.omega_mod))
        if shift != 0:
            U = u.reshape(2 * problem.K + 1, -1)
            V = np.zeros_like(U)
            if abs(shift) <= 2 * problem.K:
                if shift > 0:
                    V[shift:] = U[:-shift]
                else:
                    V[:shift] = U[-shift:]
            if np.linalg.norm(V) > 1e-12 * np.linalg.norm(U):
                u = V.reshape(-1)
            # else: the whole window leaves the zone; keep the raw vector
            # so the recorded residual reflects the unresolved translate
        u = u / np.linalg.norm(u)
        res = float(np.linalg.norm(pencil(om) @ u))
        # translate copies (shift != 0) keep their honest wrap residual;
        # only in-zone modes are polished
        if refine and shift == 0 and (res > refine_tol or abs(om) < 1e-6):
            om, u, res = _refine_mode(problem, pencil, om, u)
            om = brillouin_fold(om, problem.omega_mod)
            res = float(np.linalg.norm(pencil(om) @ u))
        u_hat = HarmonicVector.from_flat(problem.K, u / np.linalg.norm(u))
        z_hat = shifted_derivative(u_hat, om, problem.omega_mod)
        modes.append(FloquetMode(
            omega=complex(om), u_hat=u_hat, z_hat=z_hat, residual=res,
            K=problem.K, p=problem.basis.p, bc=problem.bc,
            kappa0=problem.kappa0, fingerprint=fp, fold_index=shift,
        ))
    modes.sort(key=lambda m: (abs(m.omega.imag), m.omega.real))
    spec = problem.modulation
    return SpectrumReport(
        modes=modes,
        omega_mod=problem.omega_mod,
        C_inv=inverse_constant(problem.basis),
        c_kappa=spec.ess_inf,
        C_kappa=spec.ess_sup,
        C_kappa_prime=growth_constant(spec),
        elapsed=time.perf_counter() - t0,
        config={"K": problem.K, "p": problem.basis.p, "bc": problem.bc,
                "kappa0": problem.kappa0, "kappa": spec.fingerprint()},
    )


def solve_eigenvalues(problem, dense_limit=DENSE_LIMIT):
    """Folded eigenvalues only (no eigenvectors); cheap path for sweeps."""
    block = assemble_block(problem)
    if block.size > dense_limit:
        raise SizeLimitError(f"pencil dimension {block.size} exceeds limit {dense_limit}")
    lam = sla.eigvals(block.A)
    return np.array([brillouin_fold(-1j * l, problem.omega_mod) for l in lam])


def match_eigenvalue(report, target, radius):
    """Mode with minimal |omega - target| within ``radius``.

    Folded translate copies of one physical mode land within a tight
    cluster around the best distance; within that cluster the
    representative with the smallest residual (the copy whose harmonic
    window is centered) is preferred, with |Im omega| as the final tie
    break.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    target = complex(target)
    dists = np.abs(report.omegas() - target)
    best = dists.min() if dists.size else np.inf
    if best > radius:
        raise ModeNotFoundError(
            f"no eigenvalue within {radius} of {target} (closest at {best:.3e})"
        )
    cluster = max(1e-12, 1e-2 * radius)
    candidates = [m for m, d in zip(report.modes, dists) if d <= best + cluster]
    candidates.sort(key=lambda m: (m.residual, abs(m.omega.imag)))
    return candidates[0]


def constant_mode_vector(problem):
    """Flat coefficient vector of the constant-in-space, n=0 mode."""
    u = HarmonicVector.zeros(problem.K, problem.basis.n)
    u.data[problem.K, 0] = 1.0
    return u.flat()
