"""irskit: phase-gradient reflecting-surface design, scattering, and coverage."""

from .core import C0, ETA0, wavelength, wavenumber
from .coverage import (
    IrsPanel,
    LinkResult,
    Scene2D,
    angle_sweep_replica,
    coverage_map,
    default_curve,
    direct_link,
    friis_loss,
    load_scene,
    los_visible,
    panel_link,
)
from .design import (
    SupercellSpec,
    anomalous_angle,
    design_supercell,
    export_design,
    import_design,
    parallel_wavevector_ratio,
    period_for_angle,
    phase_profile,
    reference_design,
)
from .errors import (
    EvanescentOrder,
    InterpolationOutOfRange,
    InvalidGeometry,
    InvalidInput,
    IrskitError,
    LayoutInvalid,
    PhaseUnreachable,
    TableInvalid,
    UndefinedDirectivity,
)
from .farfield import (
    AperturePattern,
    ApertureProfile,
    build_profile,
    efficiency_vs_pec,
    peak_angle,
    peak_directivity,
    pec_reference,
    scattered_pattern,
    uniform_profile,
)
from .mask import PanelLayout, export_svg, layout_panel, parse_svg_rects, reference_layout
from .unitcell import (
    Layer,
    LayerStack,
    PatchCell,
    PhaseCurve,
    grid_impedance,
    load_phase_table,
    phase_curve,
    reference_stack,
    reflection_coefficient,
    save_phase_table,
    slab_input_impedance,
    solve_patch_size,
)

__version__ = "0.1.0"
