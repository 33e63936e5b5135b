"""Fabrication masks: tiled patch layouts emitted as millimeter-unit SVG.

The sheet tiles the supercell cols_periods times along the gradient axis
(x) and rows times along the transverse axis (y). Patches are squares of
the cell's solved size by default; a fixed patch_width overrides the
x-dimension for designs whose resonant length exceeds the gradient pitch,
as in the fabricated panel (11 mm wide, 16.4-21.3 mm tall cells on a
12 mm x 30 mm grid).
"""

import re
from dataclasses import dataclass, field

from .design import design_document
from .errors import LayoutInvalid
from .unitcell import REFERENCE_CELL

SVG_HEADER = '<?xml version="1.0" encoding="UTF-8"?>'
_RECT_RE = re.compile(
    r'<rect x="([^"]+)" y="([^"]+)" width="([^"]+)" height="([^"]+)"'
)


def _fmt_mm(value_m):
    """Millimeters with 0.001 precision and no trailing zeros: 21.3, not 21.300."""
    text = f"{value_m * 1e3:.3f}".rstrip("0").rstrip(".")
    return text if text else "0"


@dataclass(frozen=True)
class PanelLayout:
    """Positioned patches of a tiled supercell on a rectangular sheet.

    patches is a tuple of (center_x, center_y, width_x, width_y) in meters;
    sheet_size is (width, height) in meters.
    """

    rows: int
    cols_periods: int
    spec: object
    transverse_pitch: float
    patch_width: float = None
    patches: tuple = field(init=False)
    sheet_size: tuple = field(init=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols_periods < 1:
            raise LayoutInvalid("rows and cols_periods must be >= 1")
        if self.transverse_pitch <= 0.0:
            raise LayoutInvalid("transverse pitch must be > 0")
        spec = self.spec
        sheet_w = self.cols_periods * spec.period
        sheet_h = self.rows * self.transverse_pitch
        patches = []
        for r in range(self.rows):
            cy = (r + 0.5) * self.transverse_pitch
            for c in range(self.cols_periods):
                for n, size in enumerate(spec.patch_sizes):
                    cx = (c * spec.n_cells + n + 0.5) * spec.pitch
                    wx = size if self.patch_width is None else self.patch_width
                    wy = size
                    if wx >= spec.pitch:
                        raise LayoutInvalid(
                            f"patch width {wx * 1e3:.2f} mm does not fit the "
                            f"{spec.pitch * 1e3:.2f} mm gradient pitch"
                        )
                    if wy >= self.transverse_pitch:
                        raise LayoutInvalid(
                            f"patch size {wy * 1e3:.2f} mm does not fit the "
                            f"{self.transverse_pitch * 1e3:.2f} mm transverse pitch"
                        )
                    if wx <= 0.0 or wy <= 0.0:
                        raise LayoutInvalid("patch dimensions must be > 0")
                    patches.append((cx, cy, wx, wy))
        object.__setattr__(self, "patches", tuple(patches))
        object.__setattr__(self, "sheet_size", (sheet_w, sheet_h))


def layout_panel(spec, rows, cols_periods, transverse_pitch, patch_width=None):
    """Position every patch of the tiled supercell; LayoutInvalid on zero gaps."""
    return PanelLayout(
        rows=rows, cols_periods=cols_periods, spec=spec,
        transverse_pitch=transverse_pitch, patch_width=patch_width,
    )


def reference_layout(spec=None):
    """The fabricated 240 mm x 360 mm sheet: 2 periods by 12 rows of 30 mm,
    with the published fixed patch width along the gradient axis."""
    from .design import reference_design

    if spec is None:
        spec = reference_design()
    return layout_panel(
        spec, rows=12, cols_periods=2,
        transverse_pitch=REFERENCE_CELL["transverse_pitch"],
        patch_width=REFERENCE_CELL["patch_width"],
    )


def export_svg(layout, path):
    """Write the layout as a deterministic millimeter-unit SVG mask.

    One filled rectangle per patch; the design document is embedded verbatim
    in a metadata comment. Identical layouts produce byte-identical files.
    """
    w_mm = _fmt_mm(layout.sheet_size[0])
    h_mm = _fmt_mm(layout.sheet_size[1])
    lines = [
        SVG_HEADER,
        "<!-- patch mask; squares unless a fixed patch width is set; "
        "patch aspect is an assumption, not a published value -->",
        f"<!-- design: {design_document(layout.spec)} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w_mm}mm" '
        f'height="{h_mm}mm" viewBox="0 0 {w_mm} {h_mm}">',
    ]
    for cx, cy, wx, wy in layout.patches:
        lines.append(
            f'<rect x="{_fmt_mm(cx - wx / 2)}" y="{_fmt_mm(cy - wy / 2)}" '
            f'width="{_fmt_mm(wx)}" height="{_fmt_mm(wy)}" fill="black"/>'
        )
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_svg_rects(path):
    """Recover (center_x, center_y, width_x, width_y) in meters from a mask."""
    with open(path) as fh:
        text = fh.read()
    rects = []
    for m in _RECT_RE.finditer(text):
        x, y, w, h = (float(v) * 1e-3 for v in m.groups())
        rects.append((x + w / 2, y + h / 2, w, h))
    return rects
