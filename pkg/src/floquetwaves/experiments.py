"""Experiment orchestration: sweeps, validation runs, CSV/JSON artifacts.

Every run writes CSV files with full provenance columns plus a JSON
manifest listing the outputs with SHA-256 hashes.  Runs are
deterministic for a fixed config and seed; reference eigenvalues for
convergence sweeps are cached on disk keyed by a config hash.
"""

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .errors import ModeNotFoundError, FloquetWavesError
from .modulation import ModulationSpec, preset
from .spectral import build_basis, inverse_constant
from .assembly import ABSORBING, NEUMANN, HarmonicProblem, assemble_quadratic
from .eigensolver import solve_spectrum, solve_eigenvalues, match_eigenvalue
from .timedomain import floquet_validation, growth_constant
from .diagnostics import (localization_profile, folding_residual,
                          region_check)
from .oracles import (absorbing_const_resonances, absorbing_length_scaled,
                      neumann_const_resonances, sturm_liouville)


@dataclass
class ExperimentConfig:
    """Parameters shared by all experiment kinds."""

    kind: str = "spectrum"
    kappa_preset: str = "one-plus-eps-exp-cos"
    period: float = 2.0 * np.pi
    eps: float = 0.1
    kappa_value: float = 1.0
    bc: str = ABSORBING
    kappa0: float = 0.5
    K: int = 10
    p: int = 15
    K_list: list = field(default_factory=lambda: list(range(2, 21, 2)))
    p_list: list = field(default_factory=lambda: list(range(2, 21, 2)))
    K_ref: int = 30
    p_ref: int = 40
    eps_grid: list = field(default_factory=lambda: list(np.linspace(0.0, 0.5, 11)))
    n_paths: int = 3
    dt_steps: int = 400  # steps per period
    periods: int = 5
    target_re: float = 0.0
    target_im: float = -0.976
    radius: float = 0.35
    fit_lo: int = 4
    fold_l: int = 1
    outdir: str = "out"
    seed: int = 0

    def __post_init__(self):
        if self.K_ref < max(self.K_list, default=0) or \
                self.p_ref < max(self.p_list, default=0):
            raise ValueError("reference must be at least as fine as every sweep point")
        if not self.K_list or not self.p_list:
            raise ValueError("sweep grids must be nonempty")

    @property
    def target(self):
        return complex(self.target_re, self.target_im)

    def modulation(self):
        return preset(self.kappa_preset, self.period, eps=self.eps,
                      value=self.kappa_value)

    def problem(self, K=None, p=None, bc=None):
        return HarmonicProblem(
            modulation=self.modulation(),
            bc=self.bc if bc is None else bc,
            K=self.K if K is None else K,
            basis=build_basis(self.p if p is None else p),
            kappa0=self.kappa0,
        )

    def digest(self, extra=""):
        payload = json.dumps(asdict(self), sort_keys=True, default=float) + extra
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    @classmethod
    def from_json(cls, path, **overrides):
        data = json.loads(Path(path).read_text())
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_csv(path, fieldnames, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(float(v)) if isinstance(v, float) else v
                        for k, v in r.items()})
    return str(path)


SPECTRUM_FIELDS = ["re_omega", "im_omega", "residual", "K", "p", "bc",
                   "kappa0", "kappa_preset", "eps", "C_inv", "C_kappa_prime"]


def run_spectrum(config, bcs=(ABSORBING, NEUMANN)):
    """Spectra for the requested boundary conditions; one CSV."""
    rows = []
    reports = {}
    for bc in bcs:
        prob = config.problem(bc=bc)
        rep = solve_spectrum(prob)
        reports[bc] = rep
        for r in rep.csv_rows():
            r["kappa_preset"] = config.kappa_preset
            r["eps"] = config.eps
            rows.append(r)
    path = _write_csv(Path(config.outdir) / "spectrum.csv",
                      SPECTRUM_FIELDS, rows)
    return reports, path


def _reference_omega(config, cache_dir):
    """Matched target eigenvalue at (K_ref, p_ref), cached on disk."""
    key = config.digest(extra="reference")
    cache = Path(cache_dir) / f"ref_{key}.json"
    if cache.exists():
        data = json.loads(cache.read_text())
        return complex(data["re"], data["im"])
    prob = config.problem(K=config.K_ref, p=config.p_ref)
    om = solve_eigenvalues(prob)
    dist = np.abs(om - config.target)
    i = int(np.argmin(dist))
    if dist[i] > config.radius:
        raise ModeNotFoundError(
            f"no reference eigenvalue within {config.radius} of "
            f"{config.target} (closest at {dist[i]:.3e})")
    cache.parent.mkdir(parents=True, exist_ok=True)
    cache.write_text(json.dumps({"re": om[i].real, "im": om[i].imag}))
    return complex(om[i])


CONV_FIELDS = ["sweep", "K", "p", "re_omega", "im_omega", "error", "matched",
               "plateau", "bc", "kappa_preset", "eps", "ref_re", "ref_im"]


def run_convergence(config):
    """K-sweep at p_ref and p-sweep at K_ref against the cached reference."""
    cache_dir = Path(config.outdir) / "cache"
    omega_ref = _reference_omega(config, cache_dir)
    rows = []

    def sweep(name, cells):
        for K, p in cells:
            prob = config.problem(K=K, p=p)
            evs = solve_eigenvalues(prob)
            dist = np.abs(evs - omega_ref)
            i = int(np.argmin(dist))
            if dist[i] <= config.radius:
                om, err, matched = complex(evs[i]), float(dist[i]), True
            else:
                om, err, matched = complex(np.nan, np.nan), np.nan, False
            rows.append({
                "sweep": name, "K": K, "p": p,
                "re_omega": om.real, "im_omega": om.imag,
                "error": err, "matched": matched,
                "plateau": bool(matched and err <= 1e-9),
                "bc": config.bc, "kappa_preset": config.kappa_preset,
                "eps": config.eps,
                "ref_re": omega_ref.real, "ref_im": omega_ref.imag,
            })

    sweep("K", [(K, config.p_ref) for K in config.K_list])
    sweep("p", [(config.K_ref, p) for p in config.p_list])
    path = _write_csv(Path(config.outdir) / "convergence.csv",
                      CONV_FIELDS, rows)
    return rows, path


TIME_FIELDS = ["t", "energy", "norm_u", "norm_v", "d_norm", "ref_norm",
               "K", "p", "bc", "kappa_preset", "eps", "dt"]


def run_time_validation(config):
    """CN validation of the tracked mode; per-step CSV trace."""
    prob = config.problem()
    rep = solve_spectrum(prob)
    mode = match_eigenvalue(rep, config.target, config.radius)
    trace = floquet_validation(mode, prob.modulation, prob.basis,
                               bc=prob.bc, kappa0=prob.kappa0,
                               n_periods=config.periods,
                               steps_per_period=config.dt_steps)
    dt = config.period / config.dt_steps
    rows = [{"t": t, "energy": e, "norm_u": nu, "norm_v": nv,
             "d_norm": d, "ref_norm": r,
             "K": config.K, "p": config.p, "bc": config.bc,
             "kappa_preset": config.kappa_preset, "eps": config.eps, "dt": dt}
            for t, e, nu, nv, d, r in zip(trace.times, trace.energies,
                                          trace.norm_u, trace.norm_v,
                                          trace.d_norms, trace.ref_norms)]
    path = _write_csv(Path(config.outdir) / "time_validation.csv",
                      TIME_FIELDS, rows)
    return trace, mode, path


LOC_FIELDS = ["mode_index", "re_omega", "im_omega", "n", "norm", "slope",
              "K", "p", "bc", "kappa_preset", "eps"]


def run_localization(config):
    """Per-harmonic norms and decay slopes of every Brillouin-zone mode."""
    prob = config.problem()
    rep = solve_spectrum(prob)
    rows = []
    profiles = []
    for i, mode in enumerate(rep.modes):
        prof = localization_profile(mode, prob.basis, fit_lo=config.fit_lo)
        profiles.append((mode, prof))
        for n in range(-prob.K, prob.K + 1):
            rows.append({
                "mode_index": i, "re_omega": mode.omega.real,
                "im_omega": mode.omega.imag, "n": n,
                "norm": prof.norm_at(n), "slope": prof.slope,
                "K": config.K, "p": config.p, "bc": config.bc,
                "kappa_preset": config.kappa_preset, "eps": config.eps,
            })
    path = _write_csv(Path(config.outdir) / "localization.csv",
                      LOC_FIELDS, rows)
    return profiles, path


FOLD_FIELDS = ["K", "p", "l", "re_omega", "im_omega", "residual_l",
               "residual_0", "bc", "kappa_preset", "eps"]


def run_folding(config, K_values=(16, 32)):
    """Folding residual of the tracked mode at two truncation levels."""
    rows = []
    for K in K_values:
        prob = config.problem(K=K)
        rep = solve_spectrum(prob)
        mode = match_eigenvalue(rep, config.target, config.radius)
        pencil = assemble_quadratic(prob)
        rows.append({
            "K": K, "p": config.p, "l": config.fold_l,
            "re_omega": mode.omega.real, "im_omega": mode.omega.imag,
            "residual_l": folding_residual(prob, mode, config.fold_l, pencil),
            "residual_0": folding_residual(prob, mode, 0, pencil),
            "bc": config.bc, "kappa_preset": config.kappa_preset,
            "eps": config.eps,
        })
    path = _write_csv(Path(config.outdir) / "folding.csv", FOLD_FIELDS, rows)
    return rows, path


EPS_FIELDS = ["path", "eps", "re_omega", "im_omega", "residual",
              "discontinuity", "K", "p", "bc", "kappa_preset"]


def run_eps_path(config, jump_factor=10.0):
    """Track eigenvalue paths over an amplitude grid.

    kappa_eps(t) = kappa_value + eps * exp(cos(W t)); paths are
    continued by nearest match from the previous grid point and jumps
    larger than jump_factor * (typical increment) are flagged as
    candidate exceptional points.
    """
    grid = sorted(float(e) for e in config.eps_grid)
    if grid[0] < 0 or grid[-1] > 1:
        raise ValueError("eps grid must lie in [0, 1]")
    per = preset("exp-cos", config.period)
    basis = build_basis(config.p)
    rows = []
    paths = None
    prev = None
    for eps in grid:
        spec = ModulationSpec(
            period=config.period,
            sampler=lambda t, e=eps: config.kappa_value + e * per.sample(t),
            name="eps-path", params={"eps": eps})
        prob = HarmonicProblem(modulation=spec, bc=config.bc, K=config.K,
                               basis=basis, kappa0=config.kappa0)
        rep = solve_spectrum(prob)
        om = rep.omegas()
        if paths is None:
            # seed paths at the eigenvalues nearest the unmodulated resonances
            starts = [0.0 + 0.0j]
            scaled = absorbing_length_scaled(config.kappa0, 2.0, config.n_paths,
                                             prob.omega_mod) \
                if config.bc == ABSORBING else \
                neumann_const_resonances(config.kappa_value, 2.0,
                                         config.n_paths, prob.omega_mod)
            for m in scaled.folded:
                if len(starts) >= config.n_paths:
                    break
                if all(abs(m - s) > 1e-9 for s in starts):
                    starts.append(complex(m))
            paths = []
            for j, s in enumerate(starts[:config.n_paths]):
                i = int(np.argmin(np.abs(om - s)))
                paths.append(om[i])
                rows.append({"path": j, "eps": eps, "re_omega": om[i].real,
                             "im_omega": om[i].imag,
                             "residual": rep.modes[i].residual,
                             "discontinuity": False,
                             "K": config.K, "p": config.p, "bc": config.bc,
                             "kappa_preset": "eps-path"})
        else:
            deps = eps - prev
            new_paths = []
            for j, pth in enumerate(paths):
                i = int(np.argmin(np.abs(om - pth)))
                jump = abs(om[i] - pth)
                new_paths.append(om[i])
                rows.append({"path": j, "eps": eps, "re_omega": om[i].real,
                             "im_omega": om[i].imag,
                             "residual": rep.modes[i].residual,
                             "discontinuity": bool(jump > jump_factor * max(deps, 1e-12)),
                             "K": config.K, "p": config.p, "bc": config.bc,
                             "kappa_preset": "eps-path"})
            paths = new_paths
        prev = eps
    path = _write_csv(Path(config.outdir) / "eps_path.csv", EPS_FIELDS, rows)
    return rows, path


ORACLE_FIELDS = ["source", "re_omega", "im_omega", "nearest_computed_re",
                 "nearest_computed_im", "distance", "K", "p", "bc", "kappa0"]


def run_oracle_compare(config):
    """Computed constant-kappa spectrum vs analytic resonance sets."""
    const = ModulationSpec(period=config.period,
                           sampler=lambda t: config.kappa_value
                           + 0.0 * np.asarray(t),
                           name="const", params={"value": config.kappa_value})
    prob = HarmonicProblem(modulation=const, bc=config.bc, K=config.K,
                           basis=build_basis(config.p), kappa0=config.kappa0)
    rep = solve_spectrum(prob)
    om = rep.omegas()
    sets = []
    if config.bc == ABSORBING:
        W = prob.omega_mod
        win = (-W, W, -5.0, 0.5)
        sets.append(("printed", absorbing_const_resonances(config.kappa0, win, W)))
        sets.append(("length-scaled",
                     absorbing_length_scaled(config.kappa0, 2.0, 8, W)))
    else:
        sets.append(("neumann", neumann_const_resonances(
            config.kappa_value, 2.0, 8, prob.omega_mod)))
    rows = []
    for name, rset in sets:
        for m in rset.folded:
            i = int(np.argmin(np.abs(om - m)))
            rows.append({
                "source": name, "re_omega": m.real, "im_omega": m.imag,
                "nearest_computed_re": om[i].real,
                "nearest_computed_im": om[i].imag,
                "distance": float(abs(om[i] - m)),
                "K": config.K, "p": config.p, "bc": config.bc,
                "kappa0": config.kappa0,
            })
    path = _write_csv(Path(config.outdir) / "oracle_compare.csv",
                      ORACLE_FIELDS, rows)
    return rows, path


STURM_FIELDS = ["index", "mu", "kappa_preset", "eps", "K"]


def run_sturm(config):
    """Sturm-Liouville eigenvalues of the configured modulation."""
    result = sturm_liouville(config.modulation(), config.K)
    rows = [{"index": i, "mu": float(np.real(m)),
             "kappa_preset": config.kappa_preset, "eps": config.eps,
             "K": config.K}
            for i, m in enumerate(result.eigenvalues)]
    path = _write_csv(Path(config.outdir) / "sturm.csv", STURM_FIELDS, rows)
    return result, path


RUNNERS = {
    "spectrum": lambda c: run_spectrum(c)[1],
    "converge": lambda c: run_convergence(c)[1],
    "validate-time": lambda c: run_time_validation(c)[2],
    "localize": lambda c: run_localization(c)[1],
    "folding": lambda c: run_folding(c)[1],
    "eps-path": lambda c: run_eps_path(c)[1],
    "oracle-compare": lambda c: run_oracle_compare(c)[1],
    "sturm": lambda c: run_sturm(c)[1],
}


def run_all(config):
    """Execute every experiment; write a manifest with output hashes.

    Returns (manifest dict, hard_failure flag).  Sub-run failures are
    recorded in the manifest instead of aborting the batch.
    """
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    artifacts = []
    hard_failure = False
    for name, runner in RUNNERS.items():
        t0 = time.perf_counter()
        entry = {"experiment": name}
        try:
            out = runner(config)
            entry.update(path=out, sha256=_sha256(out), status="ok",
                         seconds=round(time.perf_counter() - t0, 3))
        except FloquetWavesError as exc:
            entry.update(status="failed", error=str(exc))
            hard_failure = True
        artifacts.append(entry)
    manifest = {
        "config": asdict(config),
        "config_digest": config.digest(),
        "seed": config.seed,
        "artifacts": artifacts,
    }
    mpath = outdir / "manifest.json"
    mpath.write_text(json.dumps(manifest, indent=2, default=float))
    manifest["manifest_path"] = str(mpath)
    return manifest, hard_failure
