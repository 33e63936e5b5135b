import math

import numpy as np
import pytest

from irskit.design import design_supercell, period_for_angle, reference_design
from irskit.errors import LayoutInvalid
from irskit.mask import export_svg, layout_panel, parse_svg_rects, reference_layout
from irskit.unitcell import phase_curve, reference_stack

DEG = math.pi / 180.0
F0 = 5e9


def test_reference_layout_sheet_and_count():
    layout = reference_layout()
    w, h = layout.sheet_size
    assert w * 1e3 == pytest.approx(240.0)
    assert h * 1e3 == pytest.approx(360.0)
    assert len(layout.patches) == 240  # 10 cells x 2 periods x 12 rows


def test_single_strip_layout():
    spec = reference_design()
    layout = layout_panel(spec, rows=1, cols_periods=1, transverse_pitch=30e-3,
                          patch_width=11e-3)
    assert len(layout.patches) == spec.n_cells


def test_zero_gap_rejected():
    spec = reference_design()
    with pytest.raises(LayoutInvalid):
        layout_panel(spec, 1, 1, transverse_pitch=30e-3, patch_width=spec.pitch)
    with pytest.raises(LayoutInvalid):
        # 21.3 mm squares cannot tile the 12 mm gradient pitch.
        layout_panel(spec, 1, 1, transverse_pitch=30e-3)
    with pytest.raises(LayoutInvalid):
        layout_panel(spec, 1, 1, transverse_pitch=20e-3, patch_width=11e-3)


def test_solved_design_squares_fit():
    pitch = period_for_angle(F0, 30 * DEG) / 10
    curve = phase_curve(
        reference_stack(), pitch, pitch, 0.2 * pitch, pitch - 1e-9, 2001, F0
    )
    spec = design_supercell(F0, 30 * DEG, 10, curve)
    layout = layout_panel(spec, rows=2, cols_periods=1, transverse_pitch=pitch)
    assert len(layout.patches) == 20


def test_export_is_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    export_svg(reference_layout(), p1)
    export_svg(reference_layout(), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_parse_back_recovers_published_sizes(tmp_path):
    path = tmp_path / "mask.svg"
    export_svg(reference_layout(), path)
    rects = parse_svg_rects(path)
    assert len(rects) == 240
    heights_mm = sorted({round(r[3] * 1e3, 2) for r in rects})
    assert heights_mm == [16.4, 19.1, 19.6, 20.1, 21.3]
    widths_mm = {round(r[2] * 1e3, 2) for r in rects}
    assert widths_mm == {11.0}


def test_parse_back_positions(tmp_path):
    layout = reference_layout()
    path = tmp_path / "mask.svg"
    export_svg(layout, path)
    rects = parse_svg_rects(path)
    got = np.array(sorted((r[0], r[1], r[2], r[3]) for r in rects))
    want = np.array(sorted(layout.patches))
    assert np.max(np.abs(got - want)) < 0.01e-3


def test_size_attribute_formatting(tmp_path):
    path = tmp_path / "mask.svg"
    export_svg(reference_layout(), path)
    text = path.read_text()
    assert 'height="21.3"' in text
    assert 'width="11"' in text


def test_no_two_rectangles_overlap(tmp_path):
    layout = reference_layout()
    rects = [
        (cx - wx / 2, cy - wy / 2, cx + wx / 2, cy + wy / 2)
        for cx, cy, wx, wy in layout.patches
    ]
    rects.sort()
    for i, a in enumerate(rects):
        for b in rects[i + 1 : i + 30]:
            disjoint = (
                a[2] <= b[0] + 1e-12 or b[2] <= a[0] + 1e-12
                or a[3] <= b[1] + 1e-12 or b[3] <= a[1] + 1e-12
            )
            assert disjoint


def test_metadata_embeds_design(tmp_path):
    path = tmp_path / "mask.svg"
    export_svg(reference_layout(), path)
    text = path.read_text()
    assert "design:" in text
    assert '"period_mm": 120' in text
    assert "mirrored about the supercell center" in text
