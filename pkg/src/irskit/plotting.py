"""Figure rendering for the CLI report paths (PNG next to each CSV)."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def save_design_figure(spec, path):
    """Per-cell phase staircase and solved patch sizes."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    cells = np.arange(spec.n_cells)
    if spec.phases is not None:
        ax1.step(cells, np.degrees(spec.phases), where="mid")
        ax1.set_ylabel("target phase [deg]")
    else:
        ax1.text(0.5, 0.5, "phases not set", ha="center", va="center",
                 transform=ax1.transAxes)
    ax1.grid(True, linestyle=":", linewidth=0.8)
    ax2.bar(cells, np.asarray(spec.patch_sizes) * 1e3, width=0.8)
    ax2.set_xlabel("cell index")
    ax2.set_ylabel("patch size [mm]")
    ax2.grid(True, linestyle=":", linewidth=0.8)
    fig.suptitle(
        f"supercell: P = {spec.period * 1e3:.2f} mm, "
        f"{spec.n_cells} cells @ {spec.frequency / 1e9:.3f} GHz"
    )
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_pattern_figure(pattern, path):
    """Normalized far-field magnitude in dB vs angle, peak marked."""
    theta = np.degrees(pattern.theta_grid)
    mag = np.abs(pattern.amplitude)
    db = 20.0 * np.log10(np.maximum(mag / mag.max(), 1e-8))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(theta, db)
    peak = theta[np.argmax(mag)]
    ax.axvline(peak, color="C3", linestyle="--", linewidth=1.0,
               label=f"peak {peak:.1f} deg")
    ax.set_xlabel("angle from normal [deg]")
    ax.set_ylabel("|E| [dB re peak]")
    ax.set_ylim(-60, 3)
    ax.set_title(
        f"far field @ {pattern.frequency / 1e9:.3f} GHz, "
        f"incidence {math.degrees(pattern.theta_i):.1f} deg"
    )
    ax.grid(True, linestyle=":", linewidth=0.8)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_efficiency_figure(frequencies, ratios, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(np.asarray(frequencies) / 1e9, ratios, marker="o", markersize=3)
    ax.set_xlabel("frequency [GHz]")
    ax.set_ylabel("peak ratio vs PEC")
    ax.set_title("reflection efficiency vs uniform PEC reference")
    ax.grid(True, linestyle=":", linewidth=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_replica_figure(rows, path):
    """Received power vs receiver angle, one trace per frequency."""
    by_freq = {}
    for f, ang, p in rows:
        by_freq.setdefault(f, []).append((math.degrees(ang), p))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for f in sorted(by_freq):
        pts = sorted(by_freq[f])
        ax.plot([a for a, _ in pts], [p for _, p in pts],
                label=f"{f / 1e9:.3f} GHz", linewidth=1.0)
    ax.set_xlabel("receiver angle [deg]")
    ax.set_ylabel("received power [dBm]")
    ax.set_title("angle sweep")
    ax.grid(True, linestyle=":", linewidth=0.8)
    if len(by_freq) <= 8:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_coverage_figure(cmap, scene, path, floor_dbm=-120.0):
    """Heatmap of received power with obstacles, transmitter, and panels."""
    power = np.where(np.isfinite(cmap.power_dbm), cmap.power_dbm, floor_dbm)
    fig, ax = plt.subplots(figsize=(7, 6))
    res = scene.grid_resolution
    extent = (
        cmap.x[0] - res / 2, cmap.x[-1] + res / 2,
        cmap.y[0] - res / 2, cmap.y[-1] + res / 2,
    )
    im = ax.imshow(power, origin="lower", extent=extent, aspect="equal",
                   cmap="viridis", vmin=floor_dbm)
    fig.colorbar(im, ax=ax, label="received power [dBm]")
    for seg in scene.obstacles:
        ax.plot([seg[0][0], seg[1][0]], [seg[0][1], seg[1][1]],
                color="k", linewidth=3)
    ax.plot(*scene.tx_position, marker="^", color="r", markersize=10,
            linestyle="none", label="Tx")
    for panel in scene.panels:
        p0, p1 = panel.endpoints()
        ax.plot([p0[0], p1[0]], [p0[1], p1[1]], color="C1", linewidth=4)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title("coverage map")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
