import numpy as np
import pytest
from scipy.special import iv

from floquetwaves import (
    ModulationSpec, HarmonicVector, preset, from_coefficients,
    fourier_coefficients, toeplitz_matrix, shifted_derivative, fold_shift,
    pairing, norm_kd, build_basis,
    InvalidModulationError, PositivityError, DimensionMismatchError,
)

TWO_PI = 2.0 * np.pi


def const_spec(value=1.0, period=1.0):
    return ModulationSpec(period=period,
                          sampler=lambda t: value + 0.0 * np.asarray(t),
                          name="const", params={"value": value})


def test_constant_coefficients():
    c = fourier_coefficients(const_spec(1.0), 5)
    assert abs(c[5] - 1.0) < 1e-14
    off = np.delete(c, 5)
    assert np.max(np.abs(off)) < 1e-14


def test_cosine_coefficients():
    spec = preset("cos-cos", TWO_PI)  # plain cos(W t) shape at eps slot
    # use an explicit cosine instead, presets aside
    cos_spec = ModulationSpec(period=TWO_PI,
                              sampler=lambda t: 2.0 + np.cos(t),
                              name="shifted-cos", params={})
    c = fourier_coefficients(cos_spec, 3)
    assert abs(c[3] - 2.0) < 1e-13
    assert abs(c[2] - 0.5) < 1e-13 and abs(c[4] - 0.5) < 1e-13
    assert abs(c[1]) < 1e-13 and abs(c[5]) < 1e-13
    assert spec.ess_inf > 0


def test_paper_modulation_bessel_values():
    # khat_0 = 1 + I_0(1)/10, khat_{+-1} = I_1(1)/10
    spec = preset("one-plus-eps-exp-cos", TWO_PI, eps=0.1)
    c = fourier_coefficients(spec, 2)
    assert abs(c[2] - (1.0 + iv(0, 1.0) / 10)) < 1e-12
    assert abs(c[2].real - 1.1266066) < 1e-6
    assert abs(c[1] - iv(1, 1.0) / 10) < 1e-12
    assert abs(c[1].real - 0.0565159) < 1e-6
    assert abs(c[1] - c[3]) < 1e-14


def test_hermitian_symmetry_enforced():
    spec = preset("exp-cos", 1.0)
    c = spec.coefficients(8)
    assert np.allclose(c, np.conj(c[::-1]), atol=0)


def test_positivity_violation_raises():
    bad = lambda t: np.cos(TWO_PI * np.asarray(t))  # touches zero and below
    with pytest.raises((PositivityError, InvalidModulationError)):
        ModulationSpec(period=1.0, sampler=bad, name="bad", params={})


def test_nonfinite_sampler_raises():
    bad = lambda t: np.where(np.asarray(t) > 0.5, np.inf, 1.0)
    with pytest.raises(InvalidModulationError):
        ModulationSpec(period=1.0, sampler=bad, name="bad", params={})


def test_quadrature_spectral_accuracy():
    # doubling the node count moves the coefficients by < 1e-12
    spec = preset("one-plus-eps-exp-cos", TWO_PI, eps=0.1)
    from floquetwaves.modulation import _trapezoid_coefficients
    a = _trapezoid_coefficients(spec.sample, TWO_PI, 10)
    b = _trapezoid_coefficients(spec.sample, TWO_PI, 10, n_nodes=2048)
    assert np.max(np.abs(a - b)) < 1e-12


def test_toeplitz_constant_is_identity():
    T = toeplitz_matrix(const_spec(3.0), 4)
    assert np.allclose(T, 3.0 * np.eye(9), atol=1e-13)


def test_toeplitz_single_shift():
    # kappa = e^{-iWt} has khat_1 = 1 only; T_kappa is the sub-diagonal
    # shift.  Not a real modulation, so feed the coefficients directly.
    class Stub:
        def coefficients(self, order):
            c = np.zeros(2 * order + 1, dtype=complex)
            c[order + 1] = 1.0
            return c

    T = toeplitz_matrix(Stub(), 2)
    expect = np.diag(np.ones(4), -1)
    assert np.allclose(T, expect, atol=1e-13)


def test_from_coefficients_round_trip():
    spec = from_coefficients([0.25, 2.0, 0.25], period=1.0)  # 2 + cos/2
    c = fourier_coefficients(spec, 2)
    assert np.allclose(c, [0, 0.25, 2.0, 0.25, 0], atol=1e-12)


def test_toeplitz_matches_time_domain_product():
    # kappa(t) u(t) projected back onto harmonics equals T_kappa @ u on
    # interior harmonics, away from the truncation edge
    rng = np.random.default_rng(7)
    K = 6
    spec = preset("one-plus-eps-exp-cos", 1.0, eps=0.3)
    u = rng.standard_normal(2 * K + 1) + 1j * rng.standard_normal(2 * K + 1)
    T = toeplitz_matrix(spec, K)
    t = np.linspace(0, 1.0, 4096, endpoint=False)
    W = TWO_PI
    n_idx = np.arange(-K, K + 1)
    ut = u @ np.exp(-1j * np.outer(n_idx, W * t))
    prod = spec.sample(t) * ut
    proj = np.array([np.mean(prod * np.exp(1j * n * W * t)) for n in n_idx])
    band = 3  # kappa coefficients decay fast; edge rows feel the truncation
    inner = slice(band, 2 * K + 1 - band)
    assert np.max(np.abs((T @ u - proj)[inner])) < 1e-10


def test_shifted_derivative_factors():
    W = TWO_PI
    v = HarmonicVector.zeros(3, 1)
    v.data[3 + 1, 0] = 1.0  # indicator of n=1
    out = shifted_derivative(v, 0.0, W)
    assert abs(out.entry(1)[0] - (-1j * W)) < 1e-14
    v2 = HarmonicVector.zeros(3, 1)
    v2.data[3 - 1, 0] = 1.0
    out2 = shifted_derivative(v2, W, W)
    assert abs(out2.entry(-1)[0]) < 1e-14
    v3 = HarmonicVector.zeros(3, 1)
    v3.data[3 + 3, 0] = 1.0
    out3 = shifted_derivative(v3, 1 + 2j, TWO_PI)
    assert abs(out3.entry(3)[0] - (2 - 1j * (1 + 6 * np.pi))) < 1e-12


def test_fold_shift_cyclic():
    v = HarmonicVector(1, np.array([[1.0], [2.0], [3.0]], dtype=complex))
    out = fold_shift(v, 1)
    assert np.allclose(out.data[:, 0], [3.0, 1.0, 2.0])
    assert np.allclose(fold_shift(v, 0).data, v.data)


def test_fold_shift_inverse_and_unitary():
    rng = np.random.default_rng(3)
    v = HarmonicVector(4, rng.standard_normal((9, 5))
                       + 1j * rng.standard_normal((9, 5)))
    for l in (1, 2, 3):
        back = fold_shift(fold_shift(v, l), -l)
        assert np.allclose(back.data, v.data, atol=0)
        assert abs(np.linalg.norm(fold_shift(v, l).flat())
                   - np.linalg.norm(v.flat())) < 1e-13


def test_pairing_constant_mode():
    basis = build_basis(4)
    u = HarmonicVector.zeros(2, basis.n)
    u.data[2, 0] = np.sqrt(2.0)  # chi_D = sqrt(2) * phi_0
    val = pairing(u, u, gram=basis.M)
    assert abs(val - 2.0) < 1e-13


def test_pairing_disjoint_support():
    basis = build_basis(3)
    u = HarmonicVector.zeros(2, basis.n)
    v = HarmonicVector.zeros(2, basis.n)
    u.data[0, :] = 1.0
    v.data[4, :] = 1.0
    assert pairing(u, v, gram=basis.M) == 0


def test_parseval_against_tensor_quadrature():
    # coefficient pairing == (1/T) int_0^T int_{-1}^{1} u conj(v) dx dt
    rng = np.random.default_rng(11)
    basis = build_basis(6)
    K, T = 3, 1.0
    W = TWO_PI / T
    xg, wg = np.polynomial.legendre.leggauss(40)
    from floquetwaves import eval_on_grid
    tg = np.linspace(0, T, 512, endpoint=False)
    for _ in range(20):
        u = HarmonicVector(K, rng.standard_normal((2 * K + 1, basis.n))
                           + 1j * rng.standard_normal((2 * K + 1, basis.n)))
        v = HarmonicVector(K, rng.standard_normal((2 * K + 1, basis.n))
                           + 1j * rng.standard_normal((2 * K + 1, basis.n)))
        coeff = pairing(u, v, gram=basis.M)
        n_idx = np.arange(-K, K + 1)
        ph = np.exp(-1j * np.outer(n_idx, W * tg))
        uxt = np.einsum("ni,ix,nt->xt", u.data,
                        np.array([eval_on_grid(basis, e, xg)
                                  for e in np.eye(basis.n)]), ph)
        vxt = np.einsum("ni,ix,nt->xt", v.data,
                        np.array([eval_on_grid(basis, e, xg)
                                  for e in np.eye(basis.n)]), ph)
        quad = np.mean(wg @ (uxt * np.conj(vxt)), axis=-1)
        assert abs(coeff - quad) < 1e-12 * max(1.0, abs(coeff))


def test_pairing_dimension_mismatch():
    u = HarmonicVector.zeros(2, 3)
    v = HarmonicVector.zeros(3, 3)
    with pytest.raises(DimensionMismatchError):
        pairing(u, v)


def test_norm_kd_matches_flat_norm():
    rng = np.random.default_rng(5)
    u = HarmonicVector(2, rng.standard_normal((5, 4)) + 0j)
    assert abs(norm_kd(u) - np.linalg.norm(u.flat())) < 1e-13


def test_reconstruction_error_small():
    spec = preset("exp-cos", 1.0)
    assert spec.reconstruction_error(20) < 1e-10
