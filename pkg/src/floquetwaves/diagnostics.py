"""Executable checks of the theoretical estimates.

Localization decay of harmonic coefficients, folding residuals, the
admissible regions for Im omega, the truncation threshold for K, and
the tail defect of truncated Bloch modes.  Unknown multiplicative
constants in the estimates are existential, so thresholds here are
either dimensionless rate checks or carry a calibrated/advisory label.
"""

import math
from dataclasses import dataclass

import numpy as np

from .modulation import fold_shift
from .assembly import ABSORBING, NEUMANN, assemble_quadratic, residual_form
from .spectral import inverse_constant
from .timedomain import growth_constant


@dataclass
class LocalizationProfile:
    """Per-harmonic mass of a mode and its fitted decay rate."""

    norms: np.ndarray  # ||u_hat_n||, n = -K..K
    slope: float       # log-log fit over the band [fit_lo, K], -inf if tail is zero
    fit_lo: int
    C_inv: float

    @property
    def K(self):
        return (self.norms.size - 1) // 2

    def norm_at(self, n):
        return float(self.norms[n + self.K])


def localization_profile(mode, basis, fit_lo=4):
    """Harmonic norms in the M inner product and their decay slope.

    The slope is fitted by least squares on log|n| vs log||u_hat_n||
    pooled over both signs of n in the band fit_lo <= |n| <= K, which
    skips the non-asymptotic head of the profile.
    """
    K = mode.u_hat.K
    norms = np.sqrt(np.real(np.einsum(
        "ni,ij,nj->n", np.conj(mode.u_hat.data), basis.M, mode.u_hat.data)))
    # entries at the numerical noise floor are treated as exact zeros,
    # otherwise fitting noise reports a spurious shallow slope
    floor = 1e-13 * norms.max()
    logs_n, logs_v = [], []
    for n in range(fit_lo, K + 1):
        for s in (n, -n):
            v = norms[s + K]
            if v > floor:
                logs_n.append(math.log(n))
                logs_v.append(math.log(v))
    if len(logs_n) < 2:
        slope = -math.inf
    else:
        slope = float(np.polyfit(logs_n, logs_v, 1)[0])
    return LocalizationProfile(norms=norms, slope=slope, fit_lo=fit_lo,
                               C_inv=inverse_constant(basis))


def folding_residual(problem, mode, l, pencil=None):
    """Residual of the folded pair (omega + l*W, F^l u), re-normalized."""
    if abs(l) > problem.K:
        raise ValueError(f"fold index {l} exceeds K={problem.K}")
    if pencil is None:
        pencil = assemble_quadratic(problem)
    # under the e^{-inWt} convention, omega + l*W pairs with F^{-l}
    folded = fold_shift(mode.u_hat, -l)
    nrm = np.linalg.norm(folded.flat())
    if nrm == 0.0:
        return math.inf
    folded.data /= nrm
    return residual_form(problem, mode.omega + l * problem.omega_mod, folded,
                         pencil=pencil)


@dataclass
class RegionReport:
    """Outcome of the Im-omega region test for a spectrum."""

    bound: float          # C'_kappa of the modulation
    violations: list      # (omega, excess) pairs beyond tolerance
    advisory: bool        # True when K is below the localization threshold
    threshold: int
    tolerance: float

    @property
    def passed(self):
        return not self.violations


def region_check(report, problem, tolerance=1e-6, margin=1.0):
    """Test every eigenvalue against the admissible Im-omega region.

    Absorbing: Im omega <= C'_kappa; Neumann: |Im omega| <= C'_kappa,
    both with additive tolerance.  If K is below the threshold rule the
    result is flagged advisory rather than authoritative.
    """
    bound = growth_constant(problem.modulation)
    thr = k_threshold(inverse_constant(problem.basis), margin)
    violations = []
    for m in report.modes:
        if problem.bc == ABSORBING:
            excess = m.omega.imag - bound
        elif problem.bc == NEUMANN:
            excess = abs(m.omega.imag) - bound
        else:
            excess = math.inf
        if excess > tolerance:
            violations.append((m.omega, float(excess)))
    return RegionReport(bound=bound, violations=violations,
                        advisory=problem.K < thr, threshold=thr,
                        tolerance=tolerance)


def k_threshold(C_inv, margin=1.0):
    """Smallest integer K strictly exceeding margin * C_inv^2."""
    if margin < 1.0:
        raise ValueError("margin must be at least 1")
    return int(math.floor(margin * C_inv ** 2)) + 1


def k_threshold_relaxed(C_inv, decay_exponent, margin=1.0):
    """Threshold with the localized-mode relaxation K^q > margin*C_inv^2."""
    if margin < 1.0:
        raise ValueError("margin must be at least 1")
    if decay_exponent <= 0:
        raise ValueError("decay exponent must be positive")
    return int(math.floor((margin * C_inv ** 2) ** (1.0 / decay_exponent))) + 1


def bloch_defect_norm(problem, mode, per_band=False):
    """Norm of the tail defect of the truncated Bloch representation.

    The gradient defect is -sum_{|n|>K} sum_{|m|<=K} khat_{n-m}
    (grad u)_m at frequency band n; its squared L2(0,T;L2) norm under
    the (1/T) time average is the sum over excluded bands of
    g_n^* S g_n with g_n the convolved coefficient vector.  Bands are
    enumerated out to |n| = 3K and cut off once every contributing
    khat is below 1e-15.
    """
    K = problem.K
    spec = problem.modulation
    coeffs = spec.coefficients(4 * K + 4)  # indices -(4K+4)..(4K+4)
    off = 4 * K + 4

    def khat(n):
        return coeffs[n + off] if abs(n) <= off else 0.0

    S = problem.basis.S
    U = mode.u_hat.data  # rows m = -K..K
    total = 0.0
    bands = {}
    for n_abs in range(K + 1, 3 * K + 2):
        band_sq = 0.0
        for n in (n_abs, -n_abs):
            g = np.zeros(problem.basis.n, dtype=complex)
            biggest = 0.0
            for m in range(-K, K + 1):
                c = khat(n - m)
                biggest = max(biggest, abs(c))
                if c != 0.0:
                    g += c * U[m + K]
            band_sq += float(np.real(np.conj(g) @ S @ g))
        bands[n_abs] = band_sq
        total += band_sq
        if all(abs(khat(s * n_abs - m)) < 1e-15
               for s in (1, -1) for m in range(-K, K + 1)):
            break
    if per_band:
        return math.sqrt(total), {n: math.sqrt(v) for n, v in bands.items()}
    return math.sqrt(total)


def localization_bound_constant(profile):
    """Smallest C with ||u_hat_n|| <= C * C_inv^2 / n^2 for 0 < |n| <= K.

    Used once on a reference configuration to calibrate the frozen
    constant of the regression tests.
    """
    K = profile.K
    best = 0.0
    for n in range(1, K + 1):
        for s in (n, -n):
            best = max(best, profile.norms[s + K] * n * n / profile.C_inv ** 2)
    return float(best)
