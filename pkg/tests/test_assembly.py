import numpy as np
import pytest
import scipy.linalg as sla

from floquetwaves import (
    ABSORBING, NEUMANN, HarmonicProblem, HarmonicVector, ModulationSpec,
    preset, build_basis, assemble_quadratic, assemble_block,
    assemble_fasttime, mass_load, solve_forced, residual_form,
    NearResonanceError, UnsupportedVariantError, DimensionMismatchError,
    PositivityError,
)


def const_spec(value=1.0, period=1.0):
    return ModulationSpec(period=period,
                          sampler=lambda t: value + 0.0 * np.asarray(t),
                          name="const", params={"value": value})


def make_problem(bc=ABSORBING, K=2, p=4, kappa0=0.5, spec=None, **kw):
    if spec is None:
        spec = const_spec()
    return HarmonicProblem(modulation=spec, bc=bc, K=K,
                           basis=build_basis(p), kappa0=kappa0, **kw)


def test_k0_neumann_eigenvalues_are_laplace_resonances():
    # K=0, kappa=1, Neumann: Q(w) = -w^2 M + S, eigenvalues k pi/2 on (-1,1)
    prob = make_problem(bc=NEUMANN, K=0, p=20, kappa0=0.0)
    pen = assemble_quadratic(prob)
    lam = sla.eigvalsh(pen.K0, pen.M2)
    computed = np.sqrt(np.abs(lam[:6]))
    expect = np.arange(6) * np.pi / 2
    assert np.max(np.abs(np.sort(computed) - expect)) < 1e-10


def test_constant_mode_in_kernel():
    for bc, k0 in [(ABSORBING, 0.5), (NEUMANN, 0.0)]:
        prob = make_problem(bc=bc, K=3, p=5, kappa0=k0,
                            spec=preset("one-plus-eps-exp-cos", 1.0))
        pen = assemble_quadratic(prob)
        u0 = np.zeros(prob.size, dtype=complex)
        u0[3 * prob.basis.n] = 1.0  # n=0 harmonic, constant in x
        assert np.linalg.norm(pen(0.0) @ u0) < 1e-12


def test_neumann_k0_hermitian():
    prob = make_problem(bc=NEUMANN, K=3, p=6, kappa0=0.0,
                        spec=preset("one-plus-eps-exp-cos", 1.0))
    K0 = assemble_quadratic(prob).K0
    assert np.max(np.abs(K0 - K0.conj().T)) < 1e-13


def test_block_dimension():
    prob = make_problem(K=2, p=4)
    blk = assemble_block(prob)
    assert blk.A.shape == (2 * 5 * 5, 2 * 5 * 5)


def test_block_quadratic_consistency():
    # random eigenpairs of the block pencil are null pairs of Q(omega)
    prob = make_problem(bc=ABSORBING, K=2, p=5, kappa0=0.5,
                        spec=preset("one-plus-eps-exp-cos", 1.0, eps=0.2))
    blk = assemble_block(prob)
    pen = assemble_quadratic(prob)
    lam, vecs = sla.eig(blk.A)
    rng = np.random.default_rng(0)
    n = prob.size
    for j in rng.choice(lam.size, size=5, replace=False):
        omega = -1j * lam[j]
        u = vecs[:n, j]
        if np.linalg.norm(u) < 1e-8:
            continue
        u = u / np.linalg.norm(u)
        assert np.linalg.norm(pen(omega) @ u) < 1e-8


def test_block_spectrum_k0_neumann():
    # K=0 constant Neumann: block spectrum is {+-k pi/2}
    prob = make_problem(bc=NEUMANN, K=0, p=16, kappa0=0.0)
    blk = assemble_block(prob)
    omegas = -1j * sla.eigvals(blk.A)
    for k in range(5):
        target = k * np.pi / 2
        assert np.min(np.abs(omegas - target)) < 1e-8
        assert np.min(np.abs(omegas + target)) < 1e-8


def test_fasttime_constant_mode_and_neumann_refusal():
    prob = make_problem(bc=ABSORBING, K=2, p=4, kappa0=0.5)
    L0, L1 = assemble_fasttime(prob)
    u0 = np.zeros(prob.size, dtype=complex)
    u0[2 * prob.basis.n] = 1.0
    assert np.linalg.norm(L0 @ u0) < 1e-12
    with pytest.raises(UnsupportedVariantError):
        assemble_fasttime(make_problem(bc=NEUMANN, kappa0=0.0))


def test_fasttime_agrees_with_quadratic_near_zero():
    # first-order reduction matches the full pencil up to O(|omega|^2)
    prob = make_problem(bc=ABSORBING, K=3, p=6, kappa0=0.5,
                        spec=preset("one-plus-eps-exp-cos", 1.0, eps=0.05))
    L0, L1 = assemble_fasttime(prob)
    lam_ft = sla.eigvals(L0, 1j * L1)
    blk = assemble_block(prob)
    omegas = -1j * sla.eigvals(blk.A)
    small = [w for w in omegas if 1e-6 < abs(w) <= 0.1 * prob.omega_mod]
    for w in small:
        gap = np.min(np.abs(lam_ft - w))
        assert gap <= 10.0 * abs(w) ** 2


def test_fasttime_per_harmonic_scalar_oracle():
    # constant kappa decouples; each harmonic block gives a scalar
    # generalized problem whose roots the fast-time pencil must contain
    prob = make_problem(bc=ABSORBING, K=1, p=3, kappa0=0.5)
    L0, L1 = assemble_fasttime(prob)
    ev = sla.eigvals(L0, L1)
    lam_ft = -1j * ev[np.isfinite(ev)]
    basis = prob.basis
    W = prob.omega_mod
    for n in (-1, 0, 1):
        D_n = -1j * n * W
        A = D_n ** 2 * basis.M + basis.S + 0.5 * D_n * basis.B
        Bm = 2 * D_n * basis.M + 0.5 * basis.B
        roots = sla.eigvals(A, Bm)
        roots = -1j * roots[np.isfinite(roots)]
        for r in roots[np.abs(roots) < 1e3]:
            assert np.min(np.abs(lam_ft - r)) < 1e-8


def test_solve_forced_coercive_regime():
    prob = make_problem(bc=ABSORBING, K=3, p=6, kappa0=0.5,
                        spec=preset("one-plus-eps-exp-cos", 1.0))
    omega = 1j * (prob.K + 1) * prob.omega_mod
    rng = np.random.default_rng(2)
    b = HarmonicVector(3, rng.standard_normal((7, prob.basis.n)) + 0j)
    u, cond = solve_forced(prob, omega, b)
    pen = assemble_quadratic(prob)
    res = np.linalg.norm(pen(omega) @ u.flat() - b.flat())
    assert res < 1e-10 * np.linalg.norm(b.flat())
    assert np.isfinite(cond)


def test_solve_forced_inverse_of_forward():
    prob = make_problem(bc=ABSORBING, K=2, p=4, kappa0=0.5,
                        spec=preset("one-plus-eps-exp-cos", 1.0))
    pen = assemble_quadratic(prob)
    rng = np.random.default_rng(3)
    u = rng.standard_normal(prob.size) + 1j * rng.standard_normal(prob.size)
    omega = 0.3 + 0.2j
    b = HarmonicVector.from_flat(2, pen(omega) @ u)
    out, _ = solve_forced(prob, omega, b, pencil=pen)
    assert np.linalg.norm(out.flat() - u) < 1e-10 * np.linalg.norm(u)


def test_solve_forced_near_resonance():
    # approaching an eigenvalue raises the condition estimate ~10x/decade
    prob = make_problem(bc=ABSORBING, K=1, p=4, kappa0=0.5)
    blk = __import__("floquetwaves").assemble_block(prob)
    omegas = -1j * sla.eigvals(blk.A)
    target = omegas[np.argmin(np.abs(omegas - (1.0 - 0.5j)))]
    b = HarmonicVector.zeros(1, prob.basis.n)
    b.data[0, 0] = 1.0
    conds = []
    for d in (1e-1, 1e-2, 1e-3):
        _, cond = solve_forced(prob, target + d, b, cond_limit=1e15)
        conds.append(cond)
    assert conds[1] >= 10 * conds[0] / 1.001
    assert conds[2] >= 10 * conds[1] / 1.001
    with pytest.raises(NearResonanceError):
        solve_forced(prob, target + 1e-9, b, cond_limit=1e9)


def test_residual_form_eigenpair_and_svd_bound():
    prob = make_problem(bc=ABSORBING, K=2, p=4, kappa0=0.5,
                        spec=preset("one-plus-eps-exp-cos", 1.0))
    pen = assemble_quadratic(prob)
    blk = assemble_block(prob)
    lam, vecs = sla.eig(blk.A)
    j = int(np.argmin(np.abs(np.abs(-1j * lam) - 1.0)))
    omega = -1j * lam[j]
    u = vecs[:prob.size, j]
    u = HarmonicVector.from_flat(2, u / np.linalg.norm(u))
    assert residual_form(prob, omega, u, pencil=pen) < 1e-8
    # random unit vector at non-resonant omega: bounded below by sigma_min
    rng = np.random.default_rng(4)
    w = 0.37 + 0.21j
    smin = np.min(np.linalg.svd(pen(w), compute_uv=False))
    for _ in range(5):
        r = rng.standard_normal(prob.size) + 1j * rng.standard_normal(prob.size)
        v = HarmonicVector.from_flat(2, r / np.linalg.norm(r))
        assert residual_form(prob, w, v, pencil=pen) >= smin * (1 - 1e-12)


def test_residual_form_zero_vector():
    prob = make_problem(K=1, p=3)
    with pytest.raises(DimensionMismatchError):
        residual_form(prob, 0.0, HarmonicVector.zeros(1, prob.basis.n))


def test_garding_lower_bound_neumann():
    # Re a(u,u) >= (c/2)||grad u||^2 - C (K+|w|)^2 ||u||^2 at real omega
    spec = preset("one-plus-eps-exp-cos", 1.0, eps=0.2)
    prob = make_problem(bc=NEUMANN, K=3, p=6, kappa0=0.0, spec=spec)
    pen = assemble_quadratic(prob)
    Tk = __import__("floquetwaves").toeplitz_matrix(spec, 3)
    S = prob.basis.S
    grad_gram = np.kron(np.eye(7), S)
    rng = np.random.default_rng(8)
    omega = 0.7
    W = prob.omega_mod
    C = 2.0 * (prob.K * W + abs(omega) + W) ** 2  # computed bound constant
    Q = pen(omega)
    for _ in range(100):
        u = rng.standard_normal(prob.size) + 1j * rng.standard_normal(prob.size)
        lhs = np.real(np.vdot(u, Q @ u))
        grad = np.real(np.vdot(u, grad_gram @ u))
        mass = np.real(np.vdot(u, u))
        assert lhs >= 0.5 * spec.ess_inf * grad - C * mass - 1e-9


def test_invalid_kappa0():
    with pytest.raises((ValueError, PositivityError)):
        make_problem(bc=ABSORBING, kappa0=0.0)


def test_mass_load_shape():
    prob = make_problem(K=2, p=4)
    rng = np.random.default_rng(11)
    coeffs = rng.standard_normal((5, prob.basis.n)) + 0j
    f = mass_load(prob, coeffs)
    assert f.K == 2 and f.nx == prob.basis.n
    # orthonormal basis: M is the identity, so the load equals the data
    assert np.allclose(f.data, coeffs)
