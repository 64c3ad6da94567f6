"""Temporal Fourier algebra for the periodic coefficient kappa(t).

Conventions used throughout the package:

* a T-periodic signal is expanded as ``u(t) = sum_n u_n exp(-i n W t)``
  with ``W = 2 pi / T``, so the Fourier coefficients are
  ``u_n = (1/T) int_0^T u(t) exp(+i n W t) dt``;
* the frequency-domain multiplication operator of ``kappa`` acts by the
  convolution ``(T_k u)_n = sum_m k_{n-m} u_m`` (the index order forced
  by the expansion above, certified by the Parseval product test);
* the coefficient-side pairing is the plain sum ``sum_n (u_n, v_n)`` and
  the matching time-side integral carries the prefactor ``1/T``, so
  Parseval's identity holds exactly.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from .errors import (
    DimensionMismatchError,
    InvalidModulationError,
    NeedsMoreCoefficientsError,
    PositivityError,
)

_VALIDATION_GRID = 2048


def _trapezoid_coefficients(sampler, period, order, n_nodes=None):
    """Fourier coefficients k_{-order..order} by the periodic trapezoidal rule.

    Uses ``M = max(4*order + 1, 256)`` uniform nodes, which is spectrally
    accurate for smooth integrands.
    """
    m = max(4 * order + 1, 256) if n_nodes is None else n_nodes
    t = np.arange(m) * (period / m)
    values = np.asarray(sampler(t), dtype=float)
    if values.shape != t.shape:
        values = np.broadcast_to(values, t.shape)
    if not np.all(np.isfinite(values)):
        raise InvalidModulationError("modulation sampler returned a non-finite value")
    if values.min() <= 0.0:
        raise PositivityError(
            f"modulation must be strictly positive; min sampled value {values.min():.3e}"
        )
    omega = 2.0 * np.pi / period
    ns = np.arange(-order, order + 1)
    phases = np.exp(1j * omega * np.outer(ns, t))
    coeffs = phases @ values / m
    # enforce Hermitian symmetry exactly: kappa real => k_{-n} = conj(k_n)
    coeffs = 0.5 * (coeffs + np.conj(coeffs[::-1]))
    return coeffs


@dataclass
class ModulationSpec:
    """A T-periodic, strictly positive modulation coefficient.

    Parameters
    ----------
    period : float
        The period T of the modulation.
    sampler : callable
        Vectorized map t -> kappa(t); must be real, smooth and T-periodic.
    name : str
        Label used in reports and output provenance columns.
    params : dict
        Preset parameters echoed into reports.
    """

    period: float
    sampler: object
    name: str = "custom"
    params: dict = field(default_factory=dict)
    _coeffs: np.ndarray = field(default=None, repr=False, compare=False)
    _order: int = field(default=-1, repr=False, compare=False)

    def __post_init__(self):
        if self.period <= 0:
            raise InvalidModulationError("period must be positive")
        t = np.linspace(0.0, self.period, _VALIDATION_GRID, endpoint=False)
        values = np.asarray(self.sampler(t), dtype=float)
        if not np.all(np.isfinite(values)):
            raise InvalidModulationError("modulation sampler returned a non-finite value")
        if values.min() <= 0.0:
            raise PositivityError(
                f"modulation must be strictly positive; min sampled value {values.min():.3e}"
            )
        self.ess_inf = float(values.min())
        self.ess_sup = float(values.max())

    @property
    def frequency(self):
        """Angular modulation frequency W = 2 pi / T."""
        return 2.0 * np.pi / self.period

    def sample(self, t):
        return np.asarray(self.sampler(np.asarray(t, dtype=float)), dtype=float)

    def coefficients(self, order):
        """Cached coefficient array k_{-order..order}."""
        if order > self._order:
            self._coeffs = _trapezoid_coefficients(self.sampler, self.period, order)
            self._order = order
        lo = self._order - order
        return self._coeffs[lo : lo + 2 * order + 1]

    def coefficient(self, n):
        c = self.coefficients(abs(n))
        return c[n + abs(n)]

    def derivative_sample(self, t, order=None):
        """kappa'(t) from the spectrally differentiated Fourier series."""
        if order is None:
            order = self._suggest_order()
        c = self.coefficients(order)
        ns = np.arange(-order, order + 1)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        phases = np.exp(-1j * self.frequency * np.outer(t, ns))
        out = phases @ (-1j * ns * self.frequency * c)
        return out.real

    def reconstruction_error(self, order):
        """Max pointwise defect of the order-``order`` partial sum."""
        t = np.linspace(0.0, self.period, 513)
        c = self.coefficients(order)
        ns = np.arange(-order, order + 1)
        rec = (np.exp(-1j * self.frequency * np.outer(t, ns)) @ c).real
        return float(np.abs(rec - self.sample(t)).max())

    def _suggest_order(self):
        order = 16
        while order < 512 and self.reconstruction_error(order) > 1e-13:
            order *= 2
        return order

    def mean(self):
        return float(self.coefficient(0).real)

    def fingerprint(self):
        items = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}(T={self.period:.12g};{items})"


def preset(name, period, eps=0.1, value=1.0):
    """Named modulation presets.

    ``const``               kappa = value
    ``one-plus-eps-exp-cos``  kappa(t) = 1 + eps * exp(cos(W t))
    ``exp-cos``             kappa(t) = exp(cos(W t))
    ``cos-cos``             kappa(t) = cos(cos(W t))
    """
    omega = 2.0 * np.pi / period
    if name == "const":
        return ModulationSpec(period, lambda t: value * np.ones_like(np.asarray(t, float)),
                              name=name, params={"value": value})
    if name == "one-plus-eps-exp-cos":
        return ModulationSpec(period, lambda t: 1.0 + eps * np.exp(np.cos(omega * t)),
                              name=name, params={"eps": eps})
    if name == "exp-cos":
        return ModulationSpec(period, lambda t: np.exp(np.cos(omega * t)), name=name)
    if name == "cos-cos":
        return ModulationSpec(period, lambda t: np.cos(np.cos(omega * t)), name=name)
    raise ValueError(f"unknown modulation preset {name!r}")


def from_coefficients(coeffs, period):
    """Modulation defined by an explicit coefficient list k_{-m..m}."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.size % 2 != 1:
        raise DimensionMismatchError("coefficient list must have odd length (orders -m..m)")
    m = coeffs.size // 2
    omega = 2.0 * np.pi / period
    ns = np.arange(-m, m + 1)

    def sampler(t):
        t = np.asarray(t, dtype=float)
        return (np.exp(-1j * omega * np.outer(np.atleast_1d(t), ns)) @ coeffs).real.reshape(t.shape)

    return ModulationSpec(period, sampler, name="coefficients",
                          params={"order": m})


def fourier_coefficients(spec, order):
    """Coefficients k_{-order..order} of the modulation ``spec``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return spec.coefficients(order).copy()


def toeplitz_matrix(spec, K, order=None):
    """Matrix of the multiplication operator T_kappa on harmonics -K..K.

    Entry (n, m) is k_{n-m}; indices run from -K to K (row/column offset K).
    """
    if order is not None and order < 2 * K:
        raise NeedsMoreCoefficientsError(
            f"need coefficients to order {2 * K}, only {order} available"
        )
    c = spec.coefficients(2 * K)
    col = c[2 * K :]          # k_0, k_1, ..., k_{2K}
    row = c[2 * K :: -1]      # k_0, k_{-1}, ..., k_{-2K}
    return toeplitz(col, row)


@dataclass
class HarmonicVector:
    """Stack of spatial coefficient vectors indexed by harmonics -K..K.

    ``data`` has shape (2K+1, nx); row ``n + K`` holds the coefficient
    vector of the harmonic ``exp(-i n W t)``.
    """

    K: int
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.ndim == 1:
            self.data = self.data[:, None]
        if self.data.shape[0] != 2 * self.K + 1:
            raise DimensionMismatchError(
                f"expected {2 * self.K + 1} harmonic rows, got {self.data.shape[0]}"
            )

    @classmethod
    def zeros(cls, K, nx):
        return cls(K, np.zeros((2 * K + 1, nx), dtype=complex))

    @classmethod
    def from_flat(cls, K, flat):
        flat = np.asarray(flat, dtype=complex)
        nx = flat.size // (2 * K + 1)
        return cls(K, flat.reshape(2 * K + 1, nx))

    def entry(self, n):
        return self.data[n + self.K]

    def flat(self):
        """Kronecker layout: harmonic index outer, spatial index inner."""
        return self.data.reshape(-1)

    @property
    def nx(self):
        return self.data.shape[1]

    def copy(self):
        return HarmonicVector(self.K, self.data.copy())


def shifted_derivative(v, omega, omega_mod):
    """Apply (-i omega + D), i.e. multiply entry n by (-i omega - i n W)."""
    ns = np.arange(-v.K, v.K + 1)
    factors = -1j * (omega + ns * omega_mod)
    return HarmonicVector(v.K, factors[:, None] * v.data)


def fold_shift(v, l):
    """Folding operator (F^l v)_n = v_{n-l}, indices wrapped into -K..K.

    Under the e^{-i n W t} harmonic convention used here, the frequency
    translate omega -> omega + l*W pairs with F^{-l}: that combination
    represents the same time-domain function up to the wrapped tail.
    """
    if abs(l) > 2 * v.K + 1:
        raise DimensionMismatchError(f"shift {l} exceeds harmonic range of K={v.K}")
    return HarmonicVector(v.K, np.roll(v.data, l, axis=0))


def pairing(u, v, gram=None):
    """Coefficient pairing sum_n conj(v_n) . gram . u_n.

    With the spatial mass matrix this realizes the (.,.)_{K,D} product,
    with the boundary matrix the (.,.)_{K,Gamma} product.
    """
    if u.K != v.K or u.nx != v.nx:
        raise DimensionMismatchError("harmonic vectors of different shape")
    if gram is None:
        return complex(np.sum(np.conj(v.data) * u.data))
    if gram.shape != (u.nx, u.nx):
        raise DimensionMismatchError("gram matrix does not match spatial dimension")
    return complex(np.einsum("ni,ij,nj->", np.conj(v.data), gram, u.data))


def norm_kd(u, gram=None):
    """Norm induced by ``pairing`` (the ||.||_{K,D} norm for the mass gram)."""
    return float(np.sqrt(pairing(u, u, gram).real))
