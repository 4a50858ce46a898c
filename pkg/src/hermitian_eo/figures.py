"""Report figures rendered to files (headless backend)."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .blocks import block_dimension
from .orbits import enumerate_orbits
from .reports import ReportBundle


def eo_profile_figure(bundle: ReportBundle, path: Path) -> None:
    """Staircase of the final type over 1..g, exact from the fragments."""
    xs, ys = [0], [0]
    pos = level = 0
    for width, step in bundle.eo.fragments:
        pos += width
        level += width if step else 0
        xs.append(pos)
        ys.append(level)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(xs, ys, color="tab:blue", lw=1.5)
    for kv in bundle.eo.key_values:
        ax.axvline(kv, color="gray", ls=":", lw=0.7)
    ax.set_xlabel("index i")
    ax.set_ylabel("final type value")
    ax.set_title(
        f"p={bundle.p}, n={bundle.n}: g={bundle.genus}, "
        f"a={bundle.eo.a_number}, key values {list(bundle.eo.key_values)}"
    )
    ax.set_xlim(0, bundle.genus)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def block_dimension_figure(bundle: ReportBundle, path: Path) -> None:
    """Bar chart of block dimensions, one color per orbit."""
    p, n = bundle.p, bundle.n
    colors = plt.get_cmap("tab10")
    orbit_of = {}
    for k, orbit in enumerate(enumerate_orbits(n)):
        for t in orbit.elements:
            orbit_of[t] = k
    ids = list(range(1, 2**n + 1))
    dims = [block_dimension(t, p, n) for t in ids]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(ids, dims, color=[colors(orbit_of[t] % 10) for t in ids])
    ax.set_xlabel("block id")
    ax.set_ylabel("dimension")
    ax.set_yscale("log" if max(dims) > 50 * min(dims) else "linear")
    ax.set_title(f"p={p}, n={n}: block dimensions by orbit")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def factor_table_csv(bundle: ReportBundle, path: Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["orbit_min", "length", "a_number", "relation", "multiplicity"]
        )
        for factor in bundle.decomposition:
            writer.writerow(
                [
                    factor.orbit[0],
                    factor.dimension,
                    factor.a_number,
                    factor.relation_word,
                    factor.multiplicity,
                ]
            )


def render_report_files(bundle: ReportBundle, outdir: str | Path) -> list[Path]:
    """Write the report figures and the factor table; returns the paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"p{bundle.p}_n{bundle.n}"
    paths = [
        out / f"eo_profile_{stem}.png",
        out / f"block_dims_{stem}.png",
        out / f"factors_{stem}.csv",
    ]
    eo_profile_figure(bundle, paths[0])
    block_dimension_figure(bundle, paths[1])
    factor_table_csv(bundle, paths[2])
    return paths
