"""Closed-form and semi-analytic reference solutions.

Three families of references for validating the coupled-harmonics
solver: resonance sets of the constant-coefficient problem on an
interval, the periodic Sturm-Liouville eigenproblem associated with the
modulation, and a Neumann series for the resolvent at small modulation
amplitude.

The absorbing resonance set is enumerated exactly as printed in the
source formula, {0} union {2 pi k - i log((1+k0)/(1-k0))}.  The
determinant it comes from, (1-k0)^2 e^{i w} - (1+k0)^2 e^{-i w},
actually vanishes on the pi-spaced set {pi k - i log((1+k0)/(1-k0))},
and a direct computation on the length-2 interval gives yet another
spacing and level (pi/2 spacing, half the log).  All three sets are
exposed so the discrepancy is measurable rather than assumed.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import PositivityError, UnsupportedVariantError
from .modulation import HarmonicVector, toeplitz_matrix
from .assembly import ABSORBING, NEUMANN


@dataclass
class ResonanceSet:
    """Enumerated resonances of a constant-coefficient problem."""

    description: dict
    members: np.ndarray
    folded: np.ndarray
    candidates: np.ndarray = field(default_factory=lambda: np.array([]))
    candidate_dets: np.ndarray = field(default_factory=lambda: np.array([]))

    def distances(self, omegas):
        """Min distance from each value in ``omegas`` to the folded set."""
        omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
        if self.folded.size == 0:
            return np.full(omegas.shape, np.inf)
        return np.min(np.abs(omegas[:, None] - self.folded[None, :]), axis=1)


def _fold_all(values, omega_mod):
    from .eigensolver import brillouin_fold
    folded = np.array([brillouin_fold(v, omega_mod) for v in values])
    # deduplicate: translates of one member fold onto the same point
    out = []
    for v in folded:
        if not any(abs(v - w) < 1e-12 for w in out):
            out.append(v)
    return np.array(out)


def absorbing_determinant(omega, kappa0):
    """The printed determinant (1-k0)^2 e^{iw} - (1+k0)^2 e^{-iw}."""
    omega = np.asarray(omega, dtype=complex)
    return (1 - kappa0) ** 2 * np.exp(1j * omega) \
        - (1 + kappa0) ** 2 * np.exp(-1j * omega)


def absorbing_const_resonances(kappa0, window, omega_mod):
    """Printed absorbing resonance set intersected with a complex box.

    window is (re_min, re_max, im_min, im_max).  The pi-spaced roots of
    the printed determinant are attached as candidates together with
    their |det| values.
    """
    if not 0.0 < kappa0 < 1.0:
        raise PositivityError(f"kappa0 must lie in (0,1), got {kappa0}")
    re_min, re_max, im_min, im_max = window
    level = -np.log((1.0 + kappa0) / (1.0 - kappa0))
    members = [0.0 + 0.0j]
    k_lo = int(np.floor(re_min / (2 * np.pi))) - 1
    k_hi = int(np.ceil(re_max / (2 * np.pi))) + 1
    for k in range(k_lo, k_hi + 1):
        members.append(2 * np.pi * k + 1j * level)
    members = np.array([m for m in members
                        if re_min <= m.real <= re_max and im_min <= m.imag <= im_max])
    j_lo = int(np.floor(re_min / np.pi)) - 1
    j_hi = int(np.ceil(re_max / np.pi)) + 1
    candidates = np.array([np.pi * j + 1j * level for j in range(j_lo, j_hi + 1)
                           if re_min <= np.pi * j <= re_max])
    return ResonanceSet(
        description={"bc": ABSORBING, "kappa": 1.0, "kappa0": kappa0,
                     "length": 1.0, "im_level": level},
        members=members,
        folded=_fold_all(members, omega_mod),
        candidates=candidates,
        candidate_dets=np.abs(absorbing_determinant(candidates, kappa0)),
    )


def absorbing_length_scaled(kappa0, length, count, omega_mod):
    """Length-L rescaling of the absorbing set: (pi j - i log r)/L.

    This is what a direct computation on an interval of length L
    produces; for L=2 the imaginary level is half the printed one.
    """
    if not 0.0 < kappa0 < 1.0:
        raise PositivityError(f"kappa0 must lie in (0,1), got {kappa0}")
    level = -np.log((1.0 + kappa0) / (1.0 - kappa0)) / length
    members = np.array([(np.pi * j) / length + 1j * level
                        for j in range(-count, count + 1)])
    return ResonanceSet(
        description={"bc": ABSORBING, "kappa": 1.0, "kappa0": kappa0,
                     "length": length, "im_level": level},
        members=members,
        folded=_fold_all(members, omega_mod),
    )


def neumann_const_resonances(kappa, length, count, omega_mod=None):
    """{sqrt(kappa) k pi / L : k = 0..count}, with folded translates."""
    if kappa <= 0:
        raise PositivityError(f"kappa must be positive, got {kappa}")
    if count < 1:
        raise ValueError("count must be at least 1")
    members = np.array([np.sqrt(kappa) * k * np.pi / length
                        for k in range(count + 1)], dtype=complex)
    folded = members
    if omega_mod is not None:
        folded = _fold_all(np.concatenate([members, -members]), omega_mod)
    return ResonanceSet(
        description={"bc": NEUMANN, "kappa": kappa, "kappa0": 0.0,
                     "length": length},
        members=members,
        folded=folded,
    )


@dataclass
class SturmLiouvilleResult:
    """Eigenpairs of -p'' = mu kappa(t) p with T-periodic p."""

    eigenvalues: np.ndarray
    vectors: np.ndarray  # columns are Fourier coefficient vectors, n = -K..K
    K: int
    period: float


def sturm_liouville(spec, K):
    """Fourier-Galerkin solve of the periodic Sturm-Liouville problem.

    Harmonics -K..K; (D*D) p = mu T_kappa p as a Hermitian-definite
    generalized eigenproblem, eigenvalues ascending.
    """
    omega_mod = spec.frequency
    n_idx = np.arange(-K, K + 1)
    A = np.diag((n_idx * omega_mod) ** 2).astype(complex)
    Tk = toeplitz_matrix(spec, K)
    # Hermitian-definite solve requires positive definite T_kappa
    try:
        mu, vecs = sla.eigh(A, Tk)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise PositivityError(
            "Toeplitz modulation matrix is not positive definite; "
            f"eigh failed: {exc}"
        ) from exc
    return SturmLiouvilleResult(eigenvalues=mu, vectors=vecs, K=K,
                                period=spec.period)


def sl_quadratic_fit(result, lo=5, hi=None):
    """Log-log growth exponent of mu_n vs n over indices [lo, hi]."""
    if hi is None:
        hi = result.K // 2
    n = np.arange(lo, hi + 1)
    mu = result.eigenvalues[lo:hi + 1]
    slope = np.polyfit(np.log(n), np.log(mu), 1)[0]
    return float(slope)


def temporal_factor_residual(alpha_coeffs, spec, k, omega):
    """| int |a'|^2 - (pi^2 k^2 - w^2) int kappa |a|^2 | over one period.

    alpha_coeffs are Fourier coefficients of the temporal factor on
    harmonics -K..K with the e^{-i n W t} convention; both integrals are
    evaluated by trapezoid quadrature on a fine grid.
    """
    alpha_coeffs = np.asarray(alpha_coeffs, dtype=complex)
    K = (alpha_coeffs.size - 1) // 2
    T = spec.period
    omega_mod = spec.frequency
    t = np.linspace(0.0, T, 4096, endpoint=False)
    n_idx = np.arange(-K, K + 1)
    phases = np.exp(-1j * np.outer(n_idx, t) * omega_mod)
    a = alpha_coeffs @ phases
    da = ((-1j * n_idx * omega_mod) * alpha_coeffs) @ phases
    kap = np.real(spec.sample(t))
    lhs = np.mean(np.abs(da) ** 2) * T
    rhs = (np.pi ** 2 * k ** 2 - omega ** 2) * np.mean(kap * np.abs(a) ** 2) * T
    return float(abs(lhs - rhs))


def _per_harmonic_factors(kappa_bar, basis, bc, kappa0, omega, omega_mod, K):
    """LU factors of the decoupled blocks Q_n(w) for constant kappa_bar."""
    factors = []
    for n in range(-K, K + 1):
        s = omega + n * omega_mod
        Qn = -s * s * basis.M + kappa_bar * basis.S
        if bc == ABSORBING:
            Qn = Qn - 1j * s * kappa0 * basis.B
        elif bc != NEUMANN:
            raise UnsupportedVariantError(f"unknown boundary condition {bc!r}")
        factors.append(sla.lu_factor(Qn.astype(complex)))
    return factors


def _apply_decoupled(factors, v_flat, nx):
    out = np.empty_like(v_flat)
    for i, f in enumerate(factors):
        out[i * nx:(i + 1) * nx] = sla.lu_solve(f, v_flat[i * nx:(i + 1) * nx])
    return out


def resolvent_series(kappa_r, per_spec, K, basis, bc, kappa0, omega, eps,
                     order, load):
    """Neumann-series resolvent for kappa = kappa_r + eps * kappa_per.

    The mean of the perturbation is absorbed into the unmodulated
    constant kappa_bar = kappa_r + eps*mean(kappa_per), which keeps the
    zeroth-order operator decoupled across harmonics.  Returns
    (HarmonicVector, info); info carries a divergence flag based on a
    power-iteration estimate of eps*||R_bar F||.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    omega_mod = per_spec.frequency
    mean_per = per_spec.mean()
    kappa_bar = kappa_r + eps * mean_per
    if kappa_bar <= 0:
        raise PositivityError(f"effective constant kappa {kappa_bar} <= 0")
    nx = basis.n
    nt = 2 * K + 1
    factors = _per_harmonic_factors(kappa_bar, basis, bc, kappa0,
                                    omega, omega_mod, K)
    E = toeplitz_matrix(per_spec, K) - mean_per * np.eye(nt)
    F = np.kron(E, basis.S).astype(complex)

    b = load.flat() if isinstance(load, HarmonicVector) else \
        np.asarray(load, dtype=complex).reshape(-1)
    term = _apply_decoupled(factors, b, nx)
    acc = term.copy()
    term_norms = [float(np.linalg.norm(term))]
    for _ in range(order):
        term = -eps * _apply_decoupled(factors, F @ term, nx)
        acc += term
        term_norms.append(float(np.linalg.norm(term)))

    # power iteration estimate of the contraction factor eps*||R_bar F||
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(nt * nx) + 1j * rng.standard_normal(nt * nx)
    v /= np.linalg.norm(v)
    rho = 0.0
    for _ in range(8):
        w = _apply_decoupled(factors, F @ v, nx)
        rho = np.linalg.norm(w)
        if rho == 0.0:
            break
        v = w / rho
    contraction = eps * rho
    info = {
        "kappa_bar": kappa_bar,
        "contraction": float(contraction),
        "diverging": bool(contraction >= 1.0),
        "term_norms": term_norms,
    }
    return HarmonicVector.from_flat(K, acc), info
