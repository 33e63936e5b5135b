"""Reflection model of a conductive patch over a grounded dielectric stack.

The unit cell is modeled as a homogenized capacitive patch grid in parallel
with the transmission-line input impedance of the grounded substrate:

    Z_s   = Z_grid || Z_slab
    Gamma = (Z_s - eta_inc) / (Z_s + eta_inc)

The grid impedance follows the averaged-field approximation for a periodic
array of square patches; the slab impedance is the standard short-terminated
transmission-line cascade. Externally computed reflection tables can be
loaded in place of the analytical model (load_phase_table).
"""

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

import numpy as np

from .core import C0, ETA0, TWO_PI, wavenumber
from .errors import (
    InterpolationOutOfRange,
    InvalidGeometry,
    InvalidInput,
    PhaseUnreachable,
    TableInvalid,
)

PHASE_TABLE_HEADER = "D_mm, gamma_abs, gamma_phase_deg"


@dataclass(frozen=True)
class Layer:
    """One dielectric layer: thickness (m), relative permittivity, loss tangent."""

    thickness: float
    eps_r: float
    tan_delta: float = 0.0

    def __post_init__(self):
        if self.thickness <= 0.0:
            raise InvalidGeometry(f"layer thickness must be > 0, got {self.thickness}")
        if self.eps_r < 1.0:
            raise InvalidGeometry(f"eps_r must be >= 1, got {self.eps_r}")
        if self.tan_delta < 0.0:
            raise InvalidGeometry(f"tan_delta must be >= 0, got {self.tan_delta}")

    @property
    def eps_complex(self):
        return self.eps_r * (1.0 - 1j * self.tan_delta)


@dataclass(frozen=True)
class LayerStack:
    """Dielectric layers listed top first, terminated by a PEC ground plane."""

    layers: tuple

    def __post_init__(self):
        if not self.layers:
            raise InvalidGeometry("stack needs at least one layer")
        object.__setattr__(self, "layers", tuple(self.layers))

    @property
    def top_eps_r(self):
        return self.layers[0].eps_r

    def lossless(self):
        """Copy of the stack with all loss tangents zeroed."""
        return LayerStack(tuple(Layer(l.thickness, l.eps_r, 0.0) for l in self.layers))


def reference_stack():
    """Grounded stack of the fabricated panel: 0.1 mm printable paper sheet
    (eps_r 2.0, tan_delta 0.05) over a 1.0 mm MDF spacer (eps_r 2.5)."""
    return LayerStack((Layer(0.1e-3, 2.0, 0.05), Layer(1.0e-3, 2.5, 0.0)))


# Published cell dimensions of the fabricated design (meters). The 11 mm
# patch width is the fixed dimension along the gradient axis; the analytical
# grid model uses square patches and does not consume it.
REFERENCE_CELL = {
    "transverse_pitch": 30e-3,
    "gradient_pitch": 12e-3,
    "patch_width": 11e-3,
    "stack_height": 1.1e-3,
}


@dataclass(frozen=True)
class PatchCell:
    """Square conductive patch of side patch_size in a pitch_x-by-pitch_y cell."""

    pitch_x: float
    pitch_y: float
    patch_size: float
    stack: LayerStack

    def __post_init__(self):
        if self.pitch_x <= 0.0 or self.pitch_y <= 0.0:
            raise InvalidGeometry("cell pitches must be > 0")
        if not 0.0 < self.patch_size < min(self.pitch_x, self.pitch_y):
            raise InvalidGeometry(
                f"patch size {self.patch_size} must lie in (0, min pitch "
                f"{min(self.pitch_x, self.pitch_y)})"
            )

    @property
    def gap(self):
        return min(self.pitch_x, self.pitch_y) - self.patch_size


def grid_impedance(cell, f_hz):
    """Sheet impedance (ohm) of the homogenized patch grid at normal incidence.

    Averaged-field model for an array of square patches of period p and gap g:

        Z = -j * eta_eff / (2 * alpha),
        alpha = (k_eff * p / pi) * ln(1 / sin(pi * g / (2 * p)))

    with eta_eff and k_eff taken in the effective half-space permittivity
    (1 + eps_r_top) / 2. Only the real part of the substrate permittivity
    enters the homogenization, so the grid itself is purely reactive; the
    dielectric loss is carried by the slab term.
    """
    if f_hz <= 0.0:
        raise InvalidInput(f"frequency must be positive, got {f_hz}")
    pitch = cell.pitch_y
    gap = pitch - cell.patch_size
    if gap <= 0.0:
        raise InvalidGeometry(f"patch gap must be > 0, got {gap}")
    eps_eff = 0.5 * (1.0 + cell.stack.top_eps_r)
    k_eff = wavenumber(f_hz) * np.sqrt(eps_eff)
    alpha = (k_eff * pitch / np.pi) * np.log(1.0 / np.sin(np.pi * gap / (2.0 * pitch)))
    return -1j * (ETA0 / np.sqrt(eps_eff)) / (2.0 * alpha)


def _layer_kz_and_impedance(layer, f_hz, theta_i, polarization):
    k0 = wavenumber(f_hz)
    kt = k0 * np.sin(theta_i)
    kz = np.sqrt(k0**2 * layer.eps_complex - kt**2 + 0j)
    if polarization == "TE":
        z = k0 * ETA0 / kz
    elif polarization == "TM":
        z = ETA0 * kz / (k0 * layer.eps_complex)
    else:
        raise InvalidInput(f"polarization must be 'TE' or 'TM', got {polarization!r}")
    return kz, z


def incident_wave_impedance(f_hz, theta_i, polarization):
    """Transverse wave impedance (ohm) of free space at incidence theta_i."""
    if polarization == "TE":
        return ETA0 / np.cos(theta_i)
    if polarization == "TM":
        return ETA0 * np.cos(theta_i)
    raise InvalidInput(f"polarization must be 'TE' or 'TM', got {polarization!r}")


def slab_input_impedance(stack, f_hz, theta_i=0.0, polarization="TE"):
    """Input impedance (ohm) looking into the grounded stack from above.

    Short-terminated transmission-line cascade; the tangential wavevector
    k0*sin(theta_i) of the incident free-space wave is conserved through
    the layers. A single lossless layer reduces to j*eta_1*tan(kz*t).
    """
    z = 0.0 + 0.0j
    for layer in reversed(stack.layers):
        kz, zl = _layer_kz_and_impedance(layer, f_hz, theta_i, polarization)
        t = np.tan(kz * layer.thickness)
        z = zl * (z + 1j * zl * t) / (zl + 1j * z * t)
    return z


def bare_slab_reflection(stack, f_hz, theta_i=0.0, polarization="TE"):
    """Reflection coefficient of the grounded stack with no patch grid."""
    z = slab_input_impedance(stack, f_hz, theta_i, polarization)
    eta = incident_wave_impedance(f_hz, theta_i, polarization)
    return (z - eta) / (z + eta)


def reflection_coefficient(cell, f_hz, theta_i=0.0, polarization="TE"):
    """Complex reflection coefficient Gamma of the loaded cell.

    Parallel combination of grid and slab impedances against the incident
    free-space wave impedance. |Gamma| <= 1 for passive stacks.
    """
    zg = grid_impedance(cell, f_hz)
    zs = slab_input_impedance(cell.stack, f_hz, theta_i, polarization)
    zp = zg * zs / (zg + zs)
    eta = incident_wave_impedance(f_hz, theta_i, polarization)
    return (zp - eta) / (zp + eta)


@dataclass(frozen=True)
class PhaseCurve:
    """Sampled reflection vs patch size at one frequency.

    patch_sizes are strictly increasing (meters); gamma holds the complex
    reflection coefficients. phase_unwrapped is anchored at the smallest
    sample and continues without jumps exceeding pi.
    """

    patch_sizes: np.ndarray
    gamma: np.ndarray
    frequency: float
    phase_unwrapped: np.ndarray = field(init=False)

    def __post_init__(self):
        sizes = np.asarray(self.patch_sizes, dtype=float)
        gam = np.asarray(self.gamma, dtype=complex)
        if sizes.size < 2:
            raise InvalidInput("phase curve needs at least 2 samples")
        if sizes.size != gam.size:
            raise InvalidInput("patch_sizes and gamma lengths differ")
        if np.any(np.diff(sizes) <= 0.0):
            raise InvalidInput("patch sizes must be strictly increasing")
        object.__setattr__(self, "patch_sizes", sizes)
        object.__setattr__(self, "gamma", gam)
        object.__setattr__(self, "phase_unwrapped", np.unwrap(np.angle(gam)))

    @property
    def span(self):
        """(lo, hi) of the covered unwrapped phase, radians."""
        ph = self.phase_unwrapped
        return float(ph.min()), float(ph.max())

    def gamma_at(self, patch_size):
        """Reflection coefficient interpolated at a patch size.

        Magnitude and unwrapped phase are each linear in patch size between
        samples, matching the inverse map used by solve_patch_size.
        """
        d = np.asarray(patch_size, dtype=float)
        lo, hi = self.patch_sizes[0], self.patch_sizes[-1]
        if np.any(d < lo) or np.any(d > hi):
            raise InterpolationOutOfRange(
                f"patch size outside sampled range [{lo}, {hi}] m"
            )
        mag = np.interp(d, self.patch_sizes, np.abs(self.gamma))
        ph = np.interp(d, self.patch_sizes, self.phase_unwrapped)
        return mag * np.exp(1j * ph)


def phase_curve(stack, pitch_x, pitch_y, d_min, d_max, n_samples, f_hz,
                log_gap=True, theta_i=0.0, polarization="TE"):
    """Tabulate reflection_coefficient over patch sizes in [d_min, d_max].

    With log_gap=True (default) the sizes are spaced uniformly in the log of
    the remaining gap, which resolves the narrow grid-slab resonance this
    model exhibits at small gaps; endpoints are sampled exactly.
    """
    pitch = min(pitch_x, pitch_y)
    if not 0.0 < d_min < d_max < pitch:
        raise InvalidInput(
            f"need 0 < d_min < d_max < pitch, got ({d_min}, {d_max}, {pitch})"
        )
    if n_samples < 2:
        raise InvalidInput(f"n_samples must be >= 2, got {n_samples}")
    if log_gap:
        gaps = np.geomspace(pitch - d_max, pitch - d_min, n_samples)
        sizes = pitch - gaps[::-1]
        sizes[0], sizes[-1] = d_min, d_max
    else:
        sizes = np.linspace(d_min, d_max, n_samples)
    gam = np.empty(n_samples, dtype=complex)
    for i, d in enumerate(sizes):
        cell = PatchCell(pitch_x, pitch_y, d, stack)
        gam[i] = reflection_coefficient(cell, f_hz, theta_i, polarization)
    return PhaseCurve(sizes, gam, f_hz)


def solve_patch_size(target_phase, curve):
    """Patch size (m) whose interpolated reflection phase matches target_phase.

    The target is matched modulo 2*pi against the curve's unwrapped branch;
    when more than one branch offset falls inside the covered span, the
    smallest patch size wins. Raises PhaseUnreachable with the covered span
    when no offset lands inside it.
    """
    u = curve.phase_unwrapped
    du = np.diff(u)
    if np.all(du > 0.0):
        increasing = True
    elif np.all(du < 0.0):
        increasing = False
    else:
        raise InvalidInput("phase curve is not monotone; cannot invert")
    lo, hi = u.min(), u.max()
    k_min = int(np.ceil((lo - target_phase) / TWO_PI))
    k_max = int(np.floor((hi - target_phase) / TWO_PI))
    if k_min > k_max:
        span_deg = (np.degrees(lo), np.degrees(hi))
        raise PhaseUnreachable(
            f"target phase {np.degrees(target_phase):.2f} deg unreachable; "
            f"covered span {span_deg[0]:.2f}..{span_deg[1]:.2f} deg",
            span_deg=span_deg,
        )
    candidates = [target_phase + TWO_PI * k for k in range(k_min, k_max + 1)]
    if increasing:
        sizes = [np.interp(t, u, curve.patch_sizes) for t in candidates]
    else:
        sizes = [np.interp(t, u[::-1], curve.patch_sizes[::-1]) for t in candidates]
    return float(min(sizes))


def _to_mm_str(d_m):
    # Exact decimal-point shift of the shortest float repr, so that
    # save -> load -> save reproduces the file byte for byte.
    return format((Decimal(repr(float(d_m))) * 1000).normalize(), "f")


def _from_mm_str(text):
    return float(Decimal(text) / 1000)


def save_phase_table(curve, path):
    """Write a curve as the plain-text phase-table format (mm, linear, deg).

    Values use the shortest exact decimal form, so loading and re-exporting
    reproduces the file byte for byte.
    """
    lines = [PHASE_TABLE_HEADER]
    lines.append(f"# frequency_hz = {curve.frequency!r}")
    for d, g in zip(curve.patch_sizes, curve.gamma):
        lines.append(
            f"{_to_mm_str(d)}, {float(abs(g))!r}, "
            f"{float(np.degrees(np.angle(g)))!r}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_phase_table(path, frequency_hz=None):
    """Load a phase-table file into a PhaseCurve.

    Expected format: one header line, optional '#' comment lines (a
    '# frequency_hz = ...' comment carries the frequency), then rows
    "D_mm, gamma_abs, gamma_phase_deg". Raises TableInvalid with the
    offending 1-based row number on parse errors, non-increasing sizes,
    or |gamma| > 1 + 1e-6.
    """
    sizes, gammas = [], []
    with open(path) as fh:
        raw = fh.read().splitlines()
    header_seen = False
    for lineno, line in enumerate(raw, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            body = text.lstrip("#").strip()
            if body.startswith("frequency_hz"):
                try:
                    frequency_hz = float(body.split("=", 1)[1])
                except (IndexError, ValueError):
                    raise TableInvalid(
                        f"bad frequency comment at row {lineno}", row=lineno
                    )
            continue
        if not header_seen:
            header_seen = True
            continue
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise TableInvalid(f"expected 3 columns at row {lineno}", row=lineno)
        try:
            d = _from_mm_str(parts[0])
            mag, ph_deg = float(parts[1]), float(parts[2])
        except (ValueError, InvalidOperation):
            raise TableInvalid(f"non-numeric value at row {lineno}", row=lineno)
        if mag > 1.0 + 1e-6:
            raise TableInvalid(
                f"|gamma| = {mag} exceeds 1 at row {lineno}", row=lineno
            )
        if sizes and d <= sizes[-1]:
            raise TableInvalid(
                f"patch sizes not strictly increasing at row {lineno}", row=lineno
            )
        sizes.append(d)
        gammas.append(mag * np.exp(1j * np.radians(ph_deg)))
    if len(sizes) < 2:
        raise TableInvalid("table needs at least 2 data rows")
    if frequency_hz is None:
        raise TableInvalid(
            "table carries no '# frequency_hz = ...' comment and no frequency "
            "was supplied"
        )
    return PhaseCurve(np.array(sizes), np.array(gammas), frequency_hz)
