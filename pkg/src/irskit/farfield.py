"""Physical-optics far field of a reflection-coefficient profile.

The panel is a 1D line aperture along the gradient axis. Each element of
width w_n centered at x_n reradiates with its cell's reflection coefficient
gamma_n, giving the scattered field

    E(theta) = sum_n gamma_n * w_n * sinc(k0 w_n u / 2) * exp(j k0 x_n u),
    u = sin(theta) - sin(theta_i),  sinc(x) = sin(x)/x.

A uniform profile therefore peaks at the specular angle theta = theta_i,
and |E| depends on incidence and observation only through u.
"""

from dataclasses import dataclass

import numpy as np

from .core import wavenumber
from .errors import InvalidInput, UndefinedDirectivity

DEFAULT_GRID_STEP_DEG = 0.1


@dataclass(frozen=True)
class ApertureProfile:
    """Ordered reflection elements: center x (m), width (m), complex gamma."""

    x: np.ndarray
    width: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        w = np.asarray(self.width, dtype=float)
        g = np.asarray(self.gamma, dtype=complex)
        if not (x.size == w.size == g.size) or x.size == 0:
            raise InvalidInput("profile arrays must be non-empty and equal length")
        if np.any(w <= 0.0):
            raise InvalidInput("element widths must be > 0")
        if np.any(np.diff(x) <= 0.0):
            raise InvalidInput("element centers must be strictly increasing")
        # Non-overlap: adjacent edges must not cross.
        if np.any(x[:-1] + w[:-1] / 2 > x[1:] - w[1:] / 2 + 1e-12):
            raise InvalidInput("elements overlap")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "width", w)
        object.__setattr__(self, "gamma", g)

    @property
    def total_width(self):
        return float((self.x[-1] + self.width[-1] / 2) - (self.x[0] - self.width[0] / 2))


@dataclass(frozen=True)
class AperturePattern:
    """Complex far-field amplitude over an angle grid for one incidence."""

    theta_grid: np.ndarray
    amplitude: np.ndarray
    frequency: float
    theta_i: float

    def __post_init__(self):
        t = np.asarray(self.theta_grid, dtype=float)
        a = np.asarray(self.amplitude, dtype=complex)
        if t.size == 0 or t.size != a.size:
            raise InvalidInput("grid and amplitude must be non-empty, equal length")
        if np.any(np.diff(t) <= 0.0):
            raise InvalidInput("theta grid must be strictly increasing")
        object.__setattr__(self, "theta_grid", t)
        object.__setattr__(self, "amplitude", a)


def build_profile(spec, curve, tiles=1):
    """Tile a supercell `tiles` times into an ApertureProfile centered at x = 0.

    Element gammas come from the curve evaluated at the solved patch sizes.
    """
    if tiles < 1:
        raise InvalidInput(f"tiles must be >= 1, got {tiles}")
    n = spec.n_cells * tiles
    x = (np.arange(n) + 0.5) * spec.pitch - tiles * spec.period / 2
    gam_cell = curve.gamma_at(np.asarray(spec.patch_sizes))
    return ApertureProfile(
        x=x, width=np.full(n, spec.pitch), gamma=np.tile(gam_cell, tiles)
    )


def uniform_profile(total_width, gamma=-1.0 + 0.0j, n_elements=1):
    """Uniform-reflection aperture of the given width (PEC plate: gamma = -1)."""
    if total_width <= 0.0:
        raise InvalidInput("aperture width must be > 0")
    w = total_width / n_elements
    x = (np.arange(n_elements) + 0.5) * w - total_width / 2
    return ApertureProfile(x=x, width=np.full(n_elements, w),
                           gamma=np.full(n_elements, gamma, dtype=complex))


def pec_reference(profile):
    """Same element geometry with every gamma replaced by -1."""
    return ApertureProfile(
        x=profile.x, width=profile.width,
        gamma=np.full(profile.x.size, -1.0 + 0.0j),
    )


def _sinc(x):
    # sin(x)/x with sinc(0) = 1; numpy's sinc is normalized by pi.
    return np.sinc(x / np.pi)


def field_vs_u(profile, f_hz, u):
    """Aperture sum evaluated at u = sin(theta) - sin(theta_i)."""
    k0 = wavenumber(f_hz)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    arg = 0.5 * k0 * np.outer(profile.width, u)
    phase = np.exp(1j * k0 * np.outer(profile.x, u))
    return (profile.gamma * profile.width) @ (_sinc(arg) * phase)


def default_theta_grid(step_deg=DEFAULT_GRID_STEP_DEG):
    """Angle grid (rad) spanning [-90, 90] deg at the given step."""
    n = int(round(180.0 / step_deg))
    return np.radians(np.linspace(-90.0, 90.0, n + 1))


def scattered_pattern(profile, theta_i, f_hz, theta_grid=None):
    """Far-field pattern of the profile under incidence theta_i (rad)."""
    if theta_grid is None:
        theta_grid = default_theta_grid()
    theta_grid = np.asarray(theta_grid, dtype=float)
    u = np.sin(theta_grid) - np.sin(theta_i)
    amp = field_vs_u(profile, f_hz, u)
    return AperturePattern(theta_grid, amp, f_hz, theta_i)


def peak_angle(pattern):
    """Grid angle (rad) of maximum |amplitude|; ties resolve to smaller |theta|."""
    mag = np.abs(pattern.amplitude)
    m = mag.max()
    ties = np.flatnonzero(mag >= m * (1.0 - 1e-12))
    best = ties[np.argmin(np.abs(pattern.theta_grid[ties]))]
    return float(pattern.theta_grid[best])


def peak_directivity(pattern):
    """max|E|^2 over the grid-average |E|^2 (line-aperture convention).

    The average is the unweighted mean over the theta grid; returns the
    linear ratio (1.0 for an isotropic pattern).
    """
    p = np.abs(pattern.amplitude) ** 2
    mean = p.mean()
    if mean == 0.0:
        raise UndefinedDirectivity("pattern is identically zero")
    return float(p.max() / mean)


def efficiency_vs_pec(spec, curve, theta_i, frequencies, tiles=1):
    """Anomalous-peak power of the design over the PEC specular peak, per frequency.

    gammas stay fixed at the curve's values (computed at curve.frequency);
    only the aperture sum disperses with frequency, so the beam walks with
    lambda/P across the sweep.
    """
    profile = build_profile(spec, curve, tiles)
    reference = pec_reference(profile)
    ratios = []
    for f in frequencies:
        design = np.abs(scattered_pattern(profile, theta_i, f).amplitude).max()
        pec = np.abs(scattered_pattern(reference, theta_i, f).amplitude).max()
        ratios.append(float((design / pec) ** 2))
    return ratios


def pattern_to_csv(pattern, path):
    """Write "theta_deg, magnitude_db, phase_deg" rows; dB relative to the peak."""
    mag = np.abs(pattern.amplitude)
    ref = mag.max()
    if ref == 0.0:
        ref = 1.0
    db = 20.0 * np.log10(np.maximum(mag / ref, 1e-15))
    ph = np.degrees(np.angle(pattern.amplitude))
    lines = ["theta_deg, magnitude_db, phase_deg"]
    for t, m, p in zip(np.degrees(pattern.theta_grid), db, ph):
        lines.append(f"{t:.4f}, {m:.6f}, {p:.6f}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def efficiency_to_csv(frequencies, ratios, path):
    """Write "freq_ghz, ratio, ratio_db" rows."""
    lines = ["freq_ghz, ratio, ratio_db"]
    for f, r in zip(frequencies, ratios):
        db = 10.0 * np.log10(max(r, 1e-30))
        lines.append(f"{f / 1e9:.6f}, {r:.9f}, {db:.6f}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
