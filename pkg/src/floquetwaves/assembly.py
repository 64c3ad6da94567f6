"""Assembly of the truncated coupled-harmonics operators.

The unknown is the stack of Fourier coefficients u_n (n = -K..K) of a
quasi-periodic solution Re[exp(-i omega t) u(x, t)].  All operators are
dense with Kronecker structure: harmonic index outer, spatial index
inner, so the Toeplitz blocks of the modulation stay contiguous.

The quadratic pencil is

    Q(omega) = -omega^2 M2 - i omega C1 + K0,

with M2 the block mass, C1 = 2 D (x) M + kappa0 I (x) B and
K0 = D^2 (x) M + T_kappa (x) S + kappa0 D (x) B.  The absorbing boundary
term carries no Toeplitz factor by default: the weak boundary form of
kappa d_nu u = -kappa0 d_t u is kappa0 (v, d_t u)_Gamma.  The switch
``boundary_toeplitz`` makes the alternative reading (T_kappa inside the
boundary pairing) testable.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (
    DimensionMismatchError,
    NearResonanceError,
    PositivityError,
    UnsupportedVariantError,
)
from .modulation import HarmonicVector, ModulationSpec, toeplitz_matrix
from .spectral import SpatialBasis

ABSORBING = "absorbing"
NEUMANN = "neumann"


@dataclass
class HarmonicProblem:
    """Full description of a truncated coupled-harmonics problem."""

    modulation: ModulationSpec
    bc: str
    K: int
    basis: SpatialBasis
    kappa0: float = 0.0
    boundary_toeplitz: bool = False

    def __post_init__(self):
        if self.bc not in (ABSORBING, NEUMANN):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if self.bc == ABSORBING and self.kappa0 <= 0:
            raise PositivityError("absorbing boundary requires kappa0 > 0")
        if self.K < 0:
            raise ValueError("truncation K must be >= 0")

    @property
    def omega_mod(self):
        return self.modulation.frequency

    @property
    def n_harmonics(self):
        return 2 * self.K + 1

    @property
    def size(self):
        return self.n_harmonics * self.basis.n

    def harmonic_indices(self):
        return np.arange(-self.K, self.K + 1)

    def fingerprint(self):
        return (f"K={self.K};p={self.basis.p};bc={self.bc};kappa0={self.kappa0};"
                f"bt={self.boundary_toeplitz};kappa={self.modulation.fingerprint()}")


@dataclass
class QuadraticPencil:
    """Coefficient matrices of Q(omega) = -omega^2 M2 - i omega C1 + K0."""

    M2: np.ndarray
    C1: np.ndarray
    K0: np.ndarray

    def __call__(self, omega):
        return -omega**2 * self.M2 - 1j * omega * self.C1 + self.K0

    @property
    def size(self):
        return self.M2.shape[0]


@dataclass
class BlockPencil:
    """First-order block linearization A x = i omega Bmass x, x = (u; z)."""

    A: np.ndarray
    Bmass: np.ndarray

    @property
    def size(self):
        return self.A.shape[0]


def _operator_parts(problem):
    b = problem.basis
    K = problem.K
    ns = problem.harmonic_indices()
    D = np.diag(-1j * ns * problem.omega_mod)
    Tk = toeplitz_matrix(problem.modulation, K)
    I_t = np.eye(2 * K + 1)
    return b, D, Tk, I_t


def assemble_quadratic(problem):
    """Assemble the quadratic pencil of the truncated weak form."""
    b, D, Tk, I_t = _operator_parts(problem)
    I_x = np.eye(b.n)
    M2 = np.kron(I_t, b.M)
    C1 = 2.0 * np.kron(D, b.M)
    K0 = np.kron(D @ D, b.M) + np.kron(Tk, b.S)
    if problem.bc == ABSORBING:
        Tb = Tk if problem.boundary_toeplitz else I_t
        C1 = C1 + problem.kappa0 * np.kron(Tb, b.B)
        K0 = K0 + problem.kappa0 * np.kron(Tb @ D, b.B)
    return QuadraticPencil(M2=M2, C1=C1, K0=K0)


def assemble_block(problem):
    """Linearize via the auxiliary variable z = (-i omega + D) u."""
    b, D, Tk, I_t = _operator_parts(problem)
    n = problem.size
    DM = np.kron(D, b.M)
    A12 = -np.kron(I_t, b.M)
    A21 = np.kron(Tk, b.S)
    A22 = DM.copy()
    if problem.bc == ABSORBING:
        Tb = Tk if problem.boundary_toeplitz else I_t
        A22 = A22 + problem.kappa0 * np.kron(Tb, b.B)
    A = np.block([[DM, A12], [A21, A22]])
    Bmass = np.kron(np.eye(2), np.kron(I_t, b.M))
    return BlockPencil(A=A, Bmass=Bmass)


def assemble_fasttime(problem):
    """First-order-in-omega variant (L0, L1) with L0 x = i omega L1 x.

    Only stated for the absorbing boundary condition.
    """
    if problem.bc != ABSORBING:
        raise UnsupportedVariantError("fast-time variant requires the absorbing boundary")
    b, D, Tk, I_t = _operator_parts(problem)
    Tb = Tk if problem.boundary_toeplitz else I_t
    L0 = np.kron(D @ D, b.M) + np.kron(Tk, b.S) + problem.kappa0 * np.kron(Tb @ D, b.B)
    L1 = 2.0 * np.kron(D, b.M) + problem.kappa0 * np.kron(Tb, b.B)
    return L0, L1


def mass_load(problem, coeffs):
    """Mass-weighted load vector for ``solve_forced`` from raw coefficients."""
    v = coeffs if isinstance(coeffs, HarmonicVector) else HarmonicVector(problem.K, coeffs)
    return HarmonicVector(problem.K, v.data @ problem.basis.M.T)


def solve_forced(problem, omega, b, pencil=None, cond_limit=1e12):
    """Solve Q(omega) u = b for the mass-weighted load b.

    Returns ``(u, condition_estimate)``; raises NearResonanceError when the
    estimated condition number exceeds ``cond_limit`` (the computational
    face of the Fredholm alternative: near a resonant quasi-frequency the
    forced problem degenerates).
    """
    if pencil is None:
        pencil = assemble_quadratic(problem)
    if isinstance(b, HarmonicVector):
        if b.K != problem.K or b.nx != problem.basis.n:
            raise DimensionMismatchError("load does not match problem dimensions")
        rhs = b.flat()
    else:
        rhs = np.asarray(b, dtype=complex).reshape(-1)
    Q = pencil(omega)
    cond = np.linalg.cond(Q)
    if not np.isfinite(cond) or cond > cond_limit:
        raise NearResonanceError(
            f"Q(omega) nearly singular at omega={omega}: cond ~ {cond:.3e}", cond
        )
    u = sla.solve(Q, rhs)
    return HarmonicVector.from_flat(problem.K, u), float(cond)


def residual_form(problem, omega, u, pencil=None):
    """Discrete dual norm of the residual of the truncated weak form.

    For a unit vector u this is sup over unit v of |a^K_omega(u, v)|,
    realized as ||Bmass^{-1/2} Q(omega) u||; the block mass is the
    identity for the orthonormal basis, so this is the plain 2-norm.
    """
    if pencil is None:
        pencil = assemble_quadratic(problem)
    flat = u.flat() if isinstance(u, HarmonicVector) else np.asarray(u, dtype=complex)
    nrm = np.linalg.norm(flat)
    if nrm == 0.0:
        raise DimensionMismatchError("residual of the zero vector is undefined")
    return float(np.linalg.norm(pencil(omega) @ flat))


def quadratic_form(problem, omega, u, v, pencil=None):
    """Value of the sesquilinear form a^K_omega(u, v)."""
    if pencil is None:
        pencil = assemble_quadratic(problem)
    uf = u.flat() if isinstance(u, HarmonicVector) else np.asarray(u, dtype=complex)
    vf = v.flat() if isinstance(v, HarmonicVector) else np.asarray(v, dtype=complex)
    return complex(np.conj(vf) @ (pencil(omega) @ uf))


def export_pencil(problem, outdir):
    """Write the real and imaginary parts of M2, C1, K0 to CSV files."""
    from pathlib import Path
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    pen = assemble_quadratic(problem)
    paths = []
    for name, mat in (("M2", pen.M2), ("C1", pen.C1), ("K0", pen.K0)):
        for part, arr in (("re", np.real(mat)), ("im", np.imag(mat))):
            path = out / f"pencil_{name}_{part}.csv"
            np.savetxt(path, arr, delimiter=",")
            paths.append(str(path))
    return paths
