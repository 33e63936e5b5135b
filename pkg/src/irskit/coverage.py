"""2D indoor scene simulation: free-space links, shadowing, IRS panels.

Links are single-reflection two-hop budgets: Friis loss on each hop plus a
bistatic scattering gain derived from the panel's far-field pattern,

    P_rx = P_t + G_t + G_r - FSPL(d1) - FSPL(d2) + S(theta_inc, theta_dep),
    S = 10*log10(4*pi*A_eff/lambda^2) + 20*log10(|E(u)| / max|E|),

with u = sin(theta_dep) - sin(theta_inc_model) and the normalization taken
over the panel's full u-range so the gain is reciprocal. Obstacles are
opaque segments; combining of paths is incoherent (power sum).

Angle convention at a panel: signed angles are measured from the panel
normal toward its tangent (normal rotated +90 deg). The pattern incidence
follows the steering law,
theta_inc_model = -(signed angle of the transmitter), so a source on the
normal illuminates the panel at model incidence 0 and the designed beam
leaves on the +tangent side.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import design as design_mod
from . import unitcell
from .core import wavelength
from .errors import InvalidGeometry, InvalidInput
from .farfield import build_profile, field_vs_u, uniform_profile

NO_COVERAGE = float("-inf")
DEFAULT_PANEL_HEIGHT = 0.24  # m, transverse panel dimension for A_eff
# Friis is floored at 0 dB inside the reactive near field (d < lambda/4pi)
# so grid cells arbitrarily close to the transmitter stay bounded by P_t.
_NEAR_FIELD_CLAMP = True


def friis_loss(f_hz, d):
    """Free-space path loss 20*log10(4*pi*d/lambda) in dB, d > 0."""
    if d <= 0.0:
        raise InvalidInput(f"distance must be positive, got {d}")
    return 20.0 * math.log10(4.0 * math.pi * d / wavelength(f_hz))


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _on_segment(p, q, r):
    # r collinear with p-q: is r within the bounding box?
    return (
        min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
        and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
    )


def segments_intersect(a, b, c, d):
    """True if segment a-b and segment c-d share any point (touching counts)."""
    o1 = _orient(a, b, c)
    o2 = _orient(a, b, d)
    o3 = _orient(c, d, a)
    o4 = _orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)) and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


@dataclass
class IrsPanel:
    """Wall-mounted reflecting panel in the 2D scene.

    Built either from a supercell design (spec + curve + tiles) or as a
    uniform reference plate (spec None, gamma -1 over aperture_length).
    """

    center: tuple
    normal: tuple
    tiles: int = 1
    spec: object = None
    curve: object = None
    aperture_length: float = None
    height: float = DEFAULT_PANEL_HEIGHT
    _profile: object = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = np.hypot(n[0], n[1])
        if norm == 0.0:
            raise InvalidGeometry("panel normal must be nonzero")
        self.normal = (float(n[0] / norm), float(n[1] / norm))
        self.center = (float(self.center[0]), float(self.center[1]))
        if self.spec is not None:
            if self.curve is None:
                raise InvalidInput("a designed panel needs a phase curve")
            self.aperture_length = self.tiles * self.spec.period
            self._profile = build_profile(self.spec, self.curve, self.tiles)
        else:
            if self.aperture_length is None or self.aperture_length <= 0.0:
                raise InvalidInput("a uniform panel needs aperture_length > 0")
            self._profile = uniform_profile(self.aperture_length)
        if self.height <= 0.0:
            raise InvalidInput("panel height must be > 0")

    @property
    def tangent(self):
        return (-self.normal[1], self.normal[0])

    def endpoints(self):
        t = self.tangent
        h = self.aperture_length / 2
        c = self.center
        return (
            (c[0] - h * t[0], c[1] - h * t[1]),
            (c[0] + h * t[0], c[1] + h * t[1]),
        )

    def signed_angle(self, point):
        """Angle of a point from the panel normal, positive toward the tangent."""
        dx = (point[0] - self.center[0], point[1] - self.center[1])
        return math.atan2(
            dx[0] * self.tangent[0] + dx[1] * self.tangent[1],
            dx[0] * self.normal[0] + dx[1] * self.normal[1],
        )

    def in_front(self, point):
        dx = (point[0] - self.center[0], point[1] - self.center[1])
        return dx[0] * self.normal[0] + dx[1] * self.normal[1] > 0.0

    def _field_max(self, f_hz):
        key = ("max", f_hz)
        if key not in self._cache:
            u = np.linspace(-2.0, 2.0, 16001)
            self._cache[key] = float(np.abs(field_vs_u(self._profile, f_hz, u)).max())
        return self._cache[key]

    def scattering_gain_db(self, theta_inc, theta_dep, f_hz):
        """Bistatic gain S (dB) for model incidence theta_inc, departure theta_dep."""
        lam = wavelength(f_hz)
        a_eff = self.aperture_length * self.height
        s_ref = 10.0 * math.log10(4.0 * math.pi * a_eff / lam**2)
        u = np.sin(theta_dep) - np.sin(theta_inc)
        e = np.abs(field_vs_u(self._profile, f_hz, u))
        norm = np.maximum(e / self._field_max(f_hz), 1e-30)
        gain = s_ref + 20.0 * np.log10(norm)
        return float(gain[0]) if np.ndim(theta_dep) == 0 else gain


@dataclass(frozen=True)
class LinkResult:
    """Outcome of one link evaluation; power is -inf when blocked."""

    received_power_dbm: float
    path: str
    incidence: float = float("nan")
    departure: float = float("nan")

    @property
    def blocked(self):
        return self.path == "blocked"


@dataclass
class Scene2D:
    """Floor plan: opaque segments, one transmitter, panels, receiver grid."""

    frequency: float
    tx_position: tuple
    tx_power_dbm: float = 14.0
    tx_gain_dbi: float = 0.0
    rx_gain_dbi: float = 0.0
    obstacles: tuple = ()
    panels: tuple = ()
    grid_origin: tuple = (0.0, 0.0)
    grid_extent: tuple = (1.0, 1.0)
    grid_resolution: float = 0.1

    def __post_init__(self):
        if self.frequency <= 0.0:
            raise InvalidInput("scene frequency must be positive")
        if self.grid_resolution <= 0.0:
            raise InvalidInput("grid resolution must be positive")
        self.obstacles = tuple(
            ((float(a[0]), float(a[1])), (float(b[0]), float(b[1])))
            for a, b in self.obstacles
        )
        self.panels = tuple(self.panels)
        for i, panel in enumerate(self.panels):
            p0, p1 = panel.endpoints()
            for seg in self.obstacles:
                if segments_intersect(p0, p1, seg[0], seg[1]):
                    raise InvalidGeometry(f"panel {i} aperture intersects an obstacle")

    def los_visible(self, a, b):
        """True iff the open segment a-b misses every obstacle (touch blocks)."""
        if a == b:
            raise InvalidInput("visibility needs two distinct points")
        for seg in self.obstacles:
            if segments_intersect(a, b, seg[0], seg[1]):
                return False
        return True


def los_visible(scene, a, b):
    return scene.los_visible(tuple(a), tuple(b))


def _distance(a, b):
    return math.hypot(b[0] - a[0], b[1] - a[1])


def _clamped_fspl(f_hz, d):
    if _NEAR_FIELD_CLAMP:
        d = max(d, wavelength(f_hz) / (4.0 * math.pi))
    return friis_loss(f_hz, d)


def panel_link(scene, panel_index, rx):
    """Two-hop link budget through one panel; blocked hops give -inf power."""
    panel = scene.panels[panel_index]
    tx = scene.tx_position
    rx = (float(rx[0]), float(rx[1]))
    c = panel.center
    if not (panel.in_front(tx) and panel.in_front(rx)):
        return LinkResult(NO_COVERAGE, "blocked")
    if not (scene.los_visible(tx, c) and scene.los_visible(c, rx)):
        return LinkResult(NO_COVERAGE, "blocked")
    theta_inc = -panel.signed_angle(tx)
    theta_dep = panel.signed_angle(rx)
    power = (
        scene.tx_power_dbm
        + scene.tx_gain_dbi
        + scene.rx_gain_dbi
        - _clamped_fspl(scene.frequency, _distance(tx, c))
        - _clamped_fspl(scene.frequency, _distance(c, rx))
        + panel.scattering_gain_db(theta_inc, theta_dep, scene.frequency)
    )
    return LinkResult(power, f"via_panel:{panel_index}", theta_inc, theta_dep)


def direct_link(scene, rx):
    """Direct Friis link, or blocked when an obstacle cuts the ray."""
    tx = scene.tx_position
    rx = (float(rx[0]), float(rx[1]))
    if rx != tx and not scene.los_visible(tx, rx):
        return LinkResult(NO_COVERAGE, "blocked")
    power = (
        scene.tx_power_dbm
        + scene.tx_gain_dbi
        + scene.rx_gain_dbi
        - _clamped_fspl(scene.frequency, _distance(tx, rx))
    )
    return LinkResult(power, "direct")


@dataclass(frozen=True)
class CoverageMap:
    """Received power (dBm) on the receiver grid; -inf marks no coverage."""

    x: np.ndarray
    y: np.ndarray
    power_dbm: np.ndarray

    def to_csv(self, path):
        lines = ["x_m, y_m, power_dbm"]
        for j, yv in enumerate(self.y):
            for i, xv in enumerate(self.x):
                p = self.power_dbm[j, i]
                cell = "NOCOV" if not np.isfinite(p) else f"{p:.3f}"
                lines.append(f"{xv:.3f}, {yv:.3f}, {cell}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def grid_centers(scene):
    ox, oy = scene.grid_origin
    ex, ey = scene.grid_extent
    res = scene.grid_resolution
    nx = max(1, int(round(ex / res)))
    ny = max(1, int(round(ey / res)))
    x = ox + (np.arange(nx) + 0.5) * res
    y = oy + (np.arange(ny) + 0.5) * res
    return x, y


def coverage_map(scene):
    """Power-sum of the direct path and every panel path per grid cell."""
    x, y = grid_centers(scene)
    power = np.full((y.size, x.size), NO_COVERAGE)
    for j, yv in enumerate(y):
        for i, xv in enumerate(x):
            rx = (float(xv), float(yv))
            watts = 0.0
            link = direct_link(scene, rx)
            if not link.blocked:
                watts += 10.0 ** (link.received_power_dbm / 10.0)
            for k in range(len(scene.panels)):
                link = panel_link(scene, k, rx)
                if not link.blocked:
                    watts += 10.0 ** (link.received_power_dbm / 10.0)
            if watts > 0.0:
                power[j, i] = 10.0 * math.log10(watts)
    return CoverageMap(x, y, power)


def angle_sweep_replica(panel, s, frequencies, angles, theta_i=0.0,
                        tx_power_dbm=14.0, tx_gain_dbi=0.0, rx_gain_dbi=0.0):
    """Received power vs (frequency, receiver angle) in the chamber geometry.

    The transmitter sits at distance s with model incidence theta_i (on the
    opposite side of the normal from the steered beam); the receiver sweeps
    the listed signed angles at the same distance. No obstacles. Returns rows
    (f_hz, angle_rad, power_dbm).
    """
    if s <= 0.0:
        raise InvalidInput("distance s must be positive")
    rows = []
    for f in frequencies:
        fspl = friis_loss(f, s)
        base = tx_power_dbm + tx_gain_dbi + rx_gain_dbi - 2.0 * fspl
        gain = panel.scattering_gain_db(theta_i, np.asarray(angles, dtype=float), f)
        for ang, g in zip(angles, np.atleast_1d(gain)):
            rows.append((float(f), float(ang), float(base + g)))
    return rows


def replica_to_csv(rows, path):
    """Write "freq_ghz, rx_angle_deg, power_dbm" rows."""
    lines = ["freq_ghz, rx_angle_deg, power_dbm"]
    for f, ang, p in rows:
        lines.append(f"{f / 1e9:.6f}, {math.degrees(ang):.4f}, {p:.6f}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _panel_from_json(entry, base_dir):
    center = tuple(entry["center_m"])
    normal = tuple(entry["normal"])
    height = float(entry.get("height_m", DEFAULT_PANEL_HEIGHT))
    if entry.get("uniform"):
        return IrsPanel(
            center=center, normal=normal,
            aperture_length=float(entry["aperture_m"]), height=height,
        )
    tiles = int(entry.get("tiles", 1))
    spec = design_mod.import_design(str(base_dir / entry["design"]))
    if "phase_table" in entry:
        curve = unitcell.load_phase_table(str(base_dir / entry["phase_table"]))
    else:
        curve = default_curve(spec)
    return IrsPanel(center=center, normal=normal, tiles=tiles,
                    spec=spec, curve=curve, height=height)


def default_curve(spec, stack=None, n_samples=4001, gap_min=1e-9):
    """Analytical phase curve matched to a design's pitch and frequency."""
    if stack is None:
        stack = unitcell.reference_stack()
    return unitcell.phase_curve(
        stack, spec.pitch, spec.pitch,
        d_min=0.2 * spec.pitch, d_max=spec.pitch - gap_min,
        n_samples=n_samples, f_hz=spec.frequency,
    )


def load_scene(path):
    """Build a Scene2D from its JSON document.

    Panels reference design-export files (relative to the scene file) and
    optionally a phase-table file; without one the analytical curve for the
    published stack is used. See README for the schema.
    """
    path = Path(path)
    with open(path) as fh:
        doc = json.load(fh)
    base = path.parent
    tx = doc["tx"]
    panels = tuple(_panel_from_json(e, base) for e in doc.get("panels", []))
    grid = doc["rx_grid"]
    return Scene2D(
        frequency=float(doc["frequency_ghz"]) * 1e9,
        tx_position=tuple(tx["position_m"]),
        tx_power_dbm=float(tx.get("power_dbm", 14.0)),
        tx_gain_dbi=float(tx.get("gain_dbi", 0.0)),
        rx_gain_dbi=float(doc.get("rx_gain_dbi", 0.0)),
        obstacles=tuple(tuple(map(tuple, seg)) for seg in doc.get("obstacles", [])),
        panels=panels,
        grid_origin=tuple(grid["origin_m"]),
        grid_extent=tuple(grid["extent_m"]),
        grid_resolution=float(grid["resolution_m"]),
    )
