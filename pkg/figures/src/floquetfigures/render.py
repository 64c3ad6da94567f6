"""Figure builders: one deterministic image per experiment CSV."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, column, load_manifest, read_csv

log = logging.getLogger("floquetfigures")

# uniform, deterministic styling for every figure
_RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "legend.fontsize": 8,
}

_COLORS = plt.cm.tab10.colors


@dataclass
class FigureSpec:
    """One figure to render: kind, source files, output image path."""

    kind: str
    inputs: dict
    out_path: str
    axis_ranges: dict = field(default_factory=dict)


def _groups(rows, key):
    order, bucket = [], {}
    for r in rows:
        k = r[key]
        if k not in bucket:
            bucket[k] = []
            order.append(k)
        bucket[k].append(r)
    return [(k, bucket[k]) for k in order]


# ---------------------------------------------------------------------------
# builders; each returns a Figure built from already-validated rows


def _spectrum(rows, spec):
    bcs = _groups(rows, "bc") or [("absorbing", []), ("neumann", [])]
    fig, axes = plt.subplots(1, max(len(bcs), 1), squeeze=False,
                             figsize=(4.0 * max(len(bcs), 1), 4.0))
    for ax, (bc, sub) in zip(axes[0], bcs):
        if sub:
            ax.scatter(column(sub, "re_omega"), column(sub, "im_omega"),
                       s=12, color=_COLORS[0], label="eigenvalues")
        if sub and "C_kappa_prime" in sub[0]:
            guide = float(sub[0]["C_kappa_prime"])
            for level in (guide, -guide):
                ax.axhline(level, color=_COLORS[3], linestyle="--",
                           linewidth=1.0, label=None)
            ax.plot([], [], color=_COLORS[3], linestyle="--",
                    label="growth-constant guide")
        else:
            log.warning("spectrum: no growth-constant column for %s; "
                        "guide lines omitted", bc)
        ax.set_title(f"spectrum ({bc})")
        ax.set_xlabel("Re $\\omega$")
        ax.set_ylabel("Im $\\omega$")
        if sub:
            ax.legend(loc="best")
    return fig


def _converge(rows, spec, sweep):
    sub = [r for r in rows if r["sweep"] == sweep]
    fig, ax = plt.subplots()
    if sub:
        x = column(sub, sweep)
        y = column(sub, "error")
        ax.semilogy(x, y, marker="o", color=_COLORS[0], label="error")
        plateau = [(xi, yi) for xi, yi, r in zip(x, y, sub)
                   if r.get("plateau") in ("True", "1", "true")]
        if plateau:
            ax.semilogy(*zip(*plateau), linestyle="none", marker="s",
                        markersize=9, markerfacecolor="none",
                        color=_COLORS[3], label="plateau")
        ax.legend(loc="best")
    ax.set_xlabel(sweep)
    ax.set_ylabel("eigenvalue error")
    ax.set_title(f"convergence in {sweep}")
    return fig


def _time_norms(rows, spec):
    fig, ax = plt.subplots()
    if rows:
        t = column(rows, "t")
        for name, color in (("ref_norm", _COLORS[0]),
                            ("norm_u", _COLORS[1]),
                            ("d_norm", _COLORS[3])):
            ax.semilogy(t, column(rows, name), color=color, label=name)
        ax.legend(loc="best")
    ax.set_xlabel("t")
    ax.set_ylabel("norm")
    ax.set_title("time-domain validation")
    return fig


def _localization(rows, spec):
    fig, ax = plt.subplots()
    for i, (idx, sub) in enumerate(_groups(rows, "mode_index")):
        n = np.array(column(sub, "n"))
        norms = np.array(column(sub, "norm"))
        keep = norms > 0
        if not keep.any():
            continue
        ax.semilogy(n[keep], norms[keep],
                    color=_COLORS[i % len(_COLORS)], alpha=0.8,
                    label=f"mode {idx}" if i < 8 else None)
    ax.set_xlabel("harmonic $n$")
    ax.set_ylabel("$\\|\\hat u_n\\|$")
    ax.set_title("harmonic localization")
    if rows:
        ax.legend(loc="best")
    return fig


def _folding(rows, spec):
    fig, ax = plt.subplots()
    if rows:
        K = column(rows, "K")
        ax.semilogy(K, column(rows, "residual_l"), marker="o",
                    color=_COLORS[0], label="folded residual")
        ax.semilogy(K, column(rows, "residual_0"), marker="s",
                    color=_COLORS[1], label="in-zone residual")
        ax.legend(loc="best")
    ax.set_xlabel("K")
    ax.set_ylabel("residual")
    ax.set_title("folding residual vs truncation")
    return fig


def _eps_path(rows, spec):
    fig, ax = plt.subplots()
    for i, (pid, sub) in enumerate(_groups(rows, "path")):
        ax.plot(column(sub, "re_omega"), column(sub, "im_omega"),
                marker=".", markersize=4,
                color=_COLORS[i % len(_COLORS)], label=f"path {pid}")
    ax.set_xlabel("Re $\\omega$")
    ax.set_ylabel("Im $\\omega$")
    ax.set_title("eigenvalue paths vs modulation amplitude")
    if rows:
        ax.legend(loc="best")
    return fig


def _oracle(rows, spec):
    fig, ax = plt.subplots()
    for i, (src, sub) in enumerate(_groups(rows, "source")):
        ax.scatter(column(sub, "re_omega"), column(sub, "im_omega"),
                   s=40, facecolors="none",
                   edgecolors=_COLORS[i % len(_COLORS)],
                   label=f"analytic ({src})")
        ax.scatter(column(sub, "nearest_computed_re"),
                   column(sub, "nearest_computed_im"),
                   s=10, color=_COLORS[i % len(_COLORS)])
    ax.set_xlabel("Re $\\omega$")
    ax.set_ylabel("Im $\\omega$")
    ax.set_title("analytic resonances vs computed eigenvalues")
    if rows:
        ax.legend(loc="best")
    return fig


def _sturm(rows, spec):
    fig, ax = plt.subplots()
    sub = [r for r in rows if float(r["mu"]) > 0]
    if sub:
        ax.loglog(column(sub, "index"), column(sub, "mu"), marker=".",
                  linestyle="none", color=_COLORS[0])
    ax.set_xlabel("index")
    ax.set_ylabel("$\\mu$")
    ax.set_title("periodic Sturm-Liouville eigenvalues")
    return fig


# kind -> (csv file name, required columns, builder)
FIGURE_KINDS = {
    "spectrum": ("spectrum.csv",
                 ("re_omega", "im_omega", "bc"), _spectrum),
    "converge-K": ("convergence.csv",
                   ("sweep", "K", "p", "error"),
                   lambda rows, spec: _converge(rows, spec, "K")),
    "converge-p": ("convergence.csv",
                   ("sweep", "K", "p", "error"),
                   lambda rows, spec: _converge(rows, spec, "p")),
    "time-norms": ("time_validation.csv",
                   ("t", "ref_norm", "norm_u", "d_norm"), _time_norms),
    "localization": ("localization.csv",
                     ("mode_index", "n", "norm"), _localization),
    "folding": ("folding.csv",
                ("K", "residual_l", "residual_0"), _folding),
    "eps-path": ("eps_path.csv",
                 ("path", "eps", "re_omega", "im_omega"), _eps_path),
    "oracle-compare": ("oracle_compare.csv",
                       ("source", "re_omega", "im_omega",
                        "nearest_computed_re", "nearest_computed_im"),
                       _oracle),
    "sturm": ("sturm.csv", ("index", "mu"), _sturm),
}

# experiment name in the manifest -> figure kinds generated from it
EXPERIMENT_KINDS = {
    "spectrum": ("spectrum",),
    "converge": ("converge-K", "converge-p"),
    "validate-time": ("time-norms",),
    "localize": ("localization",),
    "folding": ("folding",),
    "eps-path": ("eps-path",),
    "oracle-compare": ("oracle-compare",),
    "sturm": ("sturm",),
}


def build_figure(spec):
    """Validate inputs and build the matplotlib Figure (not yet saved)."""
    if spec.kind not in FIGURE_KINDS:
        raise SchemaError(f"unknown figure kind {spec.kind!r}")
    _, required, builder = FIGURE_KINDS[spec.kind]
    rows = read_csv(spec.inputs["csv"], required=required)
    with plt.rc_context(_RC):
        fig = builder(rows, spec)
        if spec.axis_ranges.get("x"):
            fig.axes[0].set_xlim(*spec.axis_ranges["x"])
        if spec.axis_ranges.get("y"):
            fig.axes[0].set_ylim(*spec.axis_ranges["y"])
        fig.tight_layout()
    return fig


def render(spec):
    """Render one figure to ``spec.out_path``; returns the path."""
    fig = build_figure(spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Software": "floquetfigures"})
    plt.close(fig)
    return str(out)


def render_all(manifest_path, outdir):
    """Render every figure available from a run_all manifest.

    Skips (and lists) experiments that are missing or failed; writes an
    index page.  Returns {"images": [...], "missing": [...], "index": path}.
    """
    manifest, base = load_manifest(manifest_path)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    images, missing = [], []
    by_name = {a.get("experiment"): a for a in manifest["artifacts"]}
    for name, kinds in EXPERIMENT_KINDS.items():
        entry = by_name.get(name)
        src = entry.get("path") if entry and entry.get("status") == "ok" \
            else None
        if src is not None and not Path(src).is_absolute():
            src = str(base / src)
        if src is None or not Path(src).exists():
            missing.append(name)
            log.warning("render_all: experiment %r unavailable; skipped", name)
            continue
        for kind in kinds:
            out = outdir / f"{kind}.png"
            images.append(render(FigureSpec(kind=kind, inputs={"csv": src},
                                            out_path=str(out))))
    index = outdir / "index.html"
    items = "\n".join(
        f'<li><a href="{Path(p).name}"><img src="{Path(p).name}" '
        f'width="420"></a></li>' for p in sorted(images))
    missing_html = ("<p>Missing experiments: "
                    + ", ".join(sorted(missing)) + "</p>") if missing else ""
    index.write_text(
        "<!DOCTYPE html>\n<html><head><title>floquetwaves gallery"
        f"</title></head>\n<body><h1>floquetwaves gallery</h1>{missing_html}"
        f"\n<ul>\n{items}\n</ul></body></html>\n")
    return {"images": images, "missing": missing, "index": str(index)}
