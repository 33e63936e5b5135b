"""Supercell synthesis from target reflection angles.

A constant reflection-phase gradient rho = 2*pi/P adds a parallel
wavevector to the reflected wave, steering the +1 order to

    sin(theta_r) = sin(theta_i) + rho/k0 = sin(theta_i) + lambda/P.

Synthesis picks the period for the requested angle, lays out equally
spaced per-cell phase targets over one 2*pi period, and inverts each
target through a unit-cell phase curve.
"""

import json
import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .core import TWO_PI, wavelength, wrap_phase
from .errors import EvanescentOrder, InvalidInput, PhaseUnreachable
from .unitcell import solve_patch_size

# Patch sizes (m) of the fabricated ten-cell design: five distinct sizes,
# mirrored about the supercell center. The mirror arrangement is an
# assumption (the fabricated ordering is not published); swap via
# expand_sizes(..., mapping="paired") for the pairwise-adjacent variant.
REFERENCE_SIZES = (16.4e-3, 19.1e-3, 19.6e-3, 20.1e-3, 21.3e-3)
REFERENCE_PERIOD = 120e-3
REFERENCE_FREQUENCY = 5e9
MIRROR_NOTE = (
    "five fabricated sizes mirrored about the supercell center "
    "(D1..D5, D5..D1); ordering is an assumption, not a published value"
)
PAIRED_NOTE = "five fabricated sizes each assigned to two adjacent cells"


@dataclass(frozen=True)
class SupercellSpec:
    """One gradient period: n_cells cells of width pitch spanning period P.

    phases holds the wrapped per-cell reflection-phase targets (radians) or
    None when unknown (the fabricated reference design publishes sizes only).
    """

    n_cells: int
    pitch: float
    period: float
    phases: tuple
    patch_sizes: tuple
    frequency: float
    mapping_note: str = ""

    def __post_init__(self):
        if self.n_cells < 2:
            raise InvalidInput("a gradient needs at least 2 cells per period")
        if abs(self.period - self.n_cells * self.pitch) > 1e-12:
            raise InvalidInput("period must equal n_cells * pitch")
        if len(self.patch_sizes) != self.n_cells:
            raise InvalidInput("patch_sizes length must equal n_cells")
        if self.phases is not None:
            if len(self.phases) != self.n_cells:
                raise InvalidInput("phases length must equal n_cells")
            phases = tuple(float(p) for p in self.phases)
            steps = [wrap_phase(b - a) for a, b in zip(phases, phases[1:])]
            if any(abs(wrap_phase(s - steps[0])) > 1e-9 for s in steps):
                raise InvalidInput("cell phases must form a constant gradient")
            object.__setattr__(self, "phases", phases)
        object.__setattr__(
            self, "patch_sizes", tuple(float(d) for d in self.patch_sizes)
        )

    @property
    def phase_gradient(self):
        """Phase-gradient magnitude 2*pi/P in rad/m."""
        return TWO_PI / self.period


def period_for_angle(f_hz, theta_r):
    """Gradient period P = lambda/sin(theta_r) steering normal incidence to theta_r."""
    if theta_r <= 0.0:
        raise InvalidInput("specular requires no gradient (theta_r must be > 0)")
    if theta_r >= math.pi / 2:
        raise InvalidInput("reflection angle must be below 90 deg")
    return wavelength(f_hz) / math.sin(theta_r)


def parallel_wavevector_ratio(period, f_hz):
    """Dimensionless added parallel wavevector rho/k0 = lambda/P."""
    if period <= 0.0:
        raise InvalidInput(f"period must be positive, got {period}")
    return wavelength(f_hz) / period


def anomalous_angle(theta_i, period, f_hz):
    """Reflection angle (rad) of the +1 gradient order at incidence theta_i.

    sin(theta_r) = sin(theta_i) + lambda/P. Raises EvanescentOrder when the
    order does not propagate.
    """
    s = math.sin(theta_i) + parallel_wavevector_ratio(period, f_hz)
    if abs(s) > 1.0:
        raise EvanescentOrder(
            f"|sin(theta_i) + lambda/P| = {s:.4f} > 1: no propagating order"
        )
    return math.asin(s)


def phase_profile(n_cells, period):
    """Wrapped cell-center phases Phi_n = wrap(-rho * x_n), x_n = (n+1/2)*P/N.

    Consecutive increments are all exactly -2*pi/n_cells before wrapping.
    """
    if n_cells < 2:
        raise InvalidInput("a gradient needs at least 2 cells per period")
    if period <= 0.0:
        raise InvalidInput(f"period must be positive, got {period}")
    return [wrap_phase(-TWO_PI * (n + 0.5) / n_cells) for n in range(n_cells)]


def design_supercell(f_hz, theta_r, n_cells, phase_source):
    """Synthesize a SupercellSpec steering normal incidence to theta_r.

    The equally spaced phase targets are placed on the curve's unwrapped
    branch with a global offset centered in the feasible window, so a curve
    covering at least 2*pi - 2*pi/n_cells of phase (the gap between targets)
    suffices. Raises PhaseUnreachable with the failing cell index otherwise.
    """
    if n_cells < 2:
        raise InvalidInput("a gradient needs at least 2 cells per period")
    period = period_for_angle(f_hz, theta_r)
    pitch = period / n_cells
    spacing = TWO_PI / n_cells
    lo, hi = phase_source.span
    # Anchor for the first (highest) target so all n sit inside [lo, hi].
    anchor_min = lo + TWO_PI - spacing
    anchor = 0.5 * (anchor_min + hi) if anchor_min <= hi else hi
    targets = [anchor - spacing * n for n in range(n_cells)]
    sizes = []
    for n, t in enumerate(targets):
        try:
            sizes.append(solve_patch_size(t, phase_source))
        except PhaseUnreachable as err:
            raise PhaseUnreachable(
                f"cell {n}: {err}", span_deg=err.span_deg, cell_index=n
            ) from err
    phases = tuple(wrap_phase(t) for t in targets)
    return SupercellSpec(
        n_cells=n_cells,
        pitch=pitch,
        period=period,
        phases=phases,
        patch_sizes=tuple(sizes),
        frequency=f_hz,
        mapping_note="per-cell sizes solved from the phase curve",
    )


def expand_sizes(distinct_sizes, n_cells, mapping="mirror"):
    """Expand the five published sizes to n_cells cells.

    mapping="mirror": D1..D5 then D5..D1 (symmetric about the center).
    mapping="paired": each size on two adjacent cells (D1 D1 D2 D2 ...).
    """
    half = list(distinct_sizes)
    if 2 * len(half) != n_cells:
        raise InvalidInput(
            f"{len(half)} distinct sizes cannot fill {n_cells} cells two ways"
        )
    if mapping == "mirror":
        return tuple(half + half[::-1])
    if mapping == "paired":
        return tuple(d for d in half for _ in range(2))
    raise InvalidInput(f"unknown mapping {mapping!r}")


def reference_design(mapping="mirror"):
    """The fabricated ten-cell design: P = 120 mm at 5 GHz, published sizes.

    Per-cell phases are not published and are left unset.
    """
    sizes = expand_sizes(REFERENCE_SIZES, 10, mapping)
    note = MIRROR_NOTE if mapping == "mirror" else PAIRED_NOTE
    return SupercellSpec(
        n_cells=10,
        pitch=REFERENCE_PERIOD / 10,
        period=REFERENCE_PERIOD,
        phases=None,
        patch_sizes=sizes,
        frequency=REFERENCE_FREQUENCY,
        mapping_note=note,
    )


def _m_to_mm(x):
    # Decimal-point shift keeps published sizes clean (16.4, not 16.400...02).
    return float(Decimal(repr(float(x))) * 1000)


def _mm_to_m(x):
    return float(Decimal(repr(float(x))) / 1000)


def _design_doc(spec):
    return {
        "frequency_hz": spec.frequency,
        "n_cells": spec.n_cells,
        "pitch_mm": _m_to_mm(spec.pitch),
        "period_mm": _m_to_mm(spec.period),
        "phases_deg": (
            None if spec.phases is None else [math.degrees(p) for p in spec.phases]
        ),
        "patch_sizes_mm": [_m_to_mm(d) for d in spec.patch_sizes],
        "mapping_note": spec.mapping_note,
    }


def export_design(spec, path):
    """Write a SupercellSpec as the JSON design document."""
    with open(path, "w") as fh:
        json.dump(_design_doc(spec), fh, indent=2)
        fh.write("\n")


def design_document(spec):
    """The design document as a JSON string (used for mask metadata)."""
    return json.dumps(_design_doc(spec))


def import_design(path):
    """Read a JSON design document back into a SupercellSpec."""
    with open(path) as fh:
        doc = json.load(fh)
    phases = doc.get("phases_deg")
    return SupercellSpec(
        n_cells=int(doc["n_cells"]),
        pitch=_mm_to_m(doc["pitch_mm"]),
        period=_mm_to_m(doc["period_mm"]),
        phases=None if phases is None else tuple(math.radians(p) for p in phases),
        patch_sizes=tuple(_mm_to_m(d) for d in doc["patch_sizes_mm"]),
        frequency=float(doc["frequency_hz"]),
        mapping_note=doc.get("mapping_note", ""),
    )
