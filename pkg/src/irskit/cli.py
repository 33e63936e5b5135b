"""Command-line pipeline: design, pattern, sweep, replica, coverage, mask.

User-facing units are GHz, mm, degrees, and dBm; files are JSON (designs,
scenes), CSV (patterns, sweeps, maps), and SVG (masks). Every command is
deterministic; --plot additionally renders a PNG figure next to each
delimited output. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

import argparse
import math
import sys

import numpy as np

from . import coverage as cov
from . import design as dsg
from . import farfield as ff
from . import mask as msk
from . import unitcell as uc
from .errors import IrskitError

DEFAULT_SAMPLES = 4001
DEFAULT_GAP_MIN_MM = 1e-6  # smallest sampled patch gap, mm


def _curve_for(spec, args):
    """Phase source for a design: a loaded table or the analytical model."""
    table = getattr(args, "phase_table", None)
    if table:
        return uc.load_phase_table(table)
    return cov.default_curve(
        spec,
        n_samples=getattr(args, "samples", DEFAULT_SAMPLES),
        gap_min=getattr(args, "gap_min_mm", DEFAULT_GAP_MIN_MM) * 1e-3,
    )


def _model_curve(f_hz, theta_r, n_cells, samples, gap_min_mm):
    """Analytical phase curve at the pitch implied by (f, theta_r, n_cells)."""
    pitch = dsg.period_for_angle(f_hz, theta_r) / n_cells
    return uc.phase_curve(
        uc.reference_stack(), pitch, pitch,
        d_min=0.2 * pitch, d_max=pitch - gap_min_mm * 1e-3,
        n_samples=samples, f_hz=f_hz,
    )


def _curve_for_new(args, f_hz):
    if getattr(args, "phase_table", None):
        return uc.load_phase_table(args.phase_table)
    return _model_curve(f_hz, math.radians(args.angle_deg), args.cells,
                        args.samples, args.gap_min_mm)


def _png_path(out):
    stem = out.rsplit(".", 1)[0] if "." in out else out
    return stem + ".png"


def cmd_design(args):
    if args.reference_design:
        spec = dsg.reference_design()
    else:
        f_hz = args.freq_ghz * 1e9
        theta_r = math.radians(args.angle_deg)
        curve = _curve_for_new(args, f_hz)
        spec = dsg.design_supercell(f_hz, theta_r, args.cells, curve)
    ratio = dsg.parallel_wavevector_ratio(spec.period, spec.frequency)
    theta_pred = dsg.anomalous_angle(0.0, spec.period, spec.frequency)
    print(f"P = {spec.period * 1e3:.2f} mm")
    print(f"k_parallel/k0 = {ratio:.4f}")
    print(f"theta_r = {math.degrees(theta_pred):.2f} deg")
    dsg.export_design(spec, args.out)
    print(f"wrote {args.out}")
    if args.plot:
        from . import plotting

        plotting.save_design_figure(spec, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")


def cmd_pattern(args):
    spec = dsg.import_design(args.design)
    if args.uniform_reference:
        profile = ff.uniform_profile(args.tiles * spec.period)
    else:
        curve = _curve_for(spec, args)
        profile = ff.build_profile(spec, curve, args.tiles)
    theta_i = math.radians(args.theta_i_deg)
    grid = ff.default_theta_grid(args.grid_step_deg)
    pattern = ff.scattered_pattern(profile, theta_i, spec.frequency, grid)
    peak = ff.peak_angle(pattern)
    d_db = 10.0 * math.log10(ff.peak_directivity(pattern))
    ff.pattern_to_csv(pattern, args.out)
    print(f"peak_deg={math.degrees(peak):.2f}, directivity_db={d_db:.2f}")
    print(f"wrote {args.out}")
    if args.plot:
        from . import plotting

        plotting.save_pattern_figure(pattern, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")


def _parse_band(text):
    lo, _, hi = text.partition(":")
    try:
        lo_ghz, hi_ghz = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must be LO:HI in GHz, got {text!r}")
    if hi_ghz < lo_ghz:
        raise argparse.ArgumentTypeError("band upper edge below lower edge")
    return lo_ghz, hi_ghz


def cmd_sweep(args):
    spec = dsg.import_design(args.design)
    curve = _curve_for(spec, args)
    lo, hi = args.band
    freqs = np.linspace(lo * 1e9, hi * 1e9, args.points)
    ratios = ff.efficiency_vs_pec(
        spec, curve, math.radians(args.theta_i_deg), freqs, args.tiles
    )
    ff.efficiency_to_csv(freqs, ratios, args.out)
    print(f"wrote {args.out}")
    if args.plot:
        from . import plotting

        plotting.save_efficiency_figure(freqs, ratios, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")


def cmd_replica(args):
    if args.design:
        spec = dsg.import_design(args.design)
    else:
        curve = _model_curve(5e9, math.radians(30.0), 10,
                             args.samples, args.gap_min_mm)
        spec = dsg.design_supercell(5e9, math.radians(30.0), 10, curve)
    curve = _curve_for(spec, args)
    if args.uniform_reference:
        panel = cov.IrsPanel(
            center=(0.0, 0.0), normal=(0.0, 1.0),
            aperture_length=args.tiles * spec.period, height=args.height_m,
        )
    else:
        panel = cov.IrsPanel(
            center=(0.0, 0.0), normal=(0.0, 1.0), tiles=args.tiles,
            spec=spec, curve=curve, height=args.height_m,
        )
    lo, hi = args.band
    freqs = np.linspace(lo * 1e9, hi * 1e9, args.points)
    angles = np.radians(np.arange(-90.0, 90.0 + args.angle_step_deg / 2,
                                  args.angle_step_deg))
    rows = cov.angle_sweep_replica(
        panel, args.s, freqs, angles,
        theta_i=math.radians(args.theta_i_deg), tx_power_dbm=args.pt_dbm,
    )
    cov.replica_to_csv(rows, args.out)
    print(f"wrote {args.out}")
    if args.plot:
        from . import plotting

        plotting.save_replica_figure(rows, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")


def cmd_coverage(args):
    scene = cov.load_scene(args.scene)
    cmap = cov.coverage_map(scene)
    cmap.to_csv(args.out)
    print(f"wrote {args.out}")
    if args.plot:
        from . import plotting

        plotting.save_coverage_figure(cmap, scene, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")


def cmd_mask(args):
    if args.reference_design:
        layout = msk.reference_layout()
    else:
        spec = dsg.import_design(args.design)
        patch_width = args.patch_width_mm * 1e-3 if args.patch_width_mm else None
        layout = msk.layout_panel(
            spec, args.rows, args.periods,
            transverse_pitch=args.transverse_pitch_mm * 1e-3,
            patch_width=patch_width,
        )
    msk.export_svg(layout, args.out)
    w, h = layout.sheet_size
    print(f"sheet = {w * 1e3:.1f} mm x {h * 1e3:.1f} mm, "
          f"{len(layout.patches)} patches")
    print(f"wrote {args.out}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="irskit",
        description="Design phase-gradient reflecting surfaces, predict their "
        "far-field scattering, and evaluate indoor NLOS coverage.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="synthesize a supercell design (JSON out)")
    p.add_argument("--freq-ghz", type=float, default=5.0,
                   help="operating frequency in GHz (default 5)")
    p.add_argument("--angle-deg", type=float, default=30.0,
                   help="target reflection angle for normal incidence, degrees")
    p.add_argument("--cells", type=int, default=10,
                   help="unit cells per supercell (default 10)")
    p.add_argument("--reference-design", action="store_true",
                   help="emit the published fabricated design instead")
    p.add_argument("--phase-table", help="phase-table file replacing the model")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help="phase-curve sample count")
    p.add_argument("--gap-min-mm", type=float, default=DEFAULT_GAP_MIN_MM,
                   help="smallest sampled patch gap in mm")
    p.add_argument("--out", default="design.json", help="output design JSON")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("pattern", help="far-field pattern of a design (CSV out)")
    p.add_argument("--design", required=True, help="design JSON from 'design'")
    p.add_argument("--theta-i-deg", type=float, default=0.0,
                   help="incidence angle in degrees (default 0)")
    p.add_argument("--tiles", type=int, default=10,
                   help="supercell repetitions across the panel (default 10)")
    p.add_argument("--grid-step-deg", type=float, default=0.1,
                   help="angle grid step in degrees (default 0.1)")
    p.add_argument("--uniform-reference", action="store_true",
                   help="replace the design with an equal-aperture PEC plate")
    p.add_argument("--phase-table", help="phase-table file replacing the model")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--gap-min-mm", type=float, default=DEFAULT_GAP_MIN_MM)
    p.add_argument("--out", default="pattern.csv", help="output CSV")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("sweep", help="efficiency vs PEC over a band (CSV out)")
    p.add_argument("--design", required=True, help="design JSON from 'design'")
    p.add_argument("--band", type=_parse_band, default=(4.5, 5.5),
                   help="frequency band LO:HI in GHz (default 4.5:5.5)")
    p.add_argument("--points", type=int, default=21, help="band sample count")
    p.add_argument("--theta-i-deg", type=float, default=0.0,
                   help="incidence angle in degrees")
    p.add_argument("--tiles", type=int, default=10)
    p.add_argument("--phase-table", help="phase-table file replacing the model")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--gap-min-mm", type=float, default=DEFAULT_GAP_MIN_MM)
    p.add_argument("--out", default="efficiency.csv", help="output CSV")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "replica",
        help="chamber-style angle sweep: Tx at distance s, Rx over angles (CSV out)",
    )
    p.add_argument("--band", type=_parse_band, default=(5.16, 5.20),
                   help="frequency band LO:HI in GHz (default 5.16:5.20)")
    p.add_argument("--points", type=int, default=5, help="band sample count")
    p.add_argument("--s", type=float, default=1.5,
                   help="Tx and Rx distance from the panel in meters (default 1.5)")
    p.add_argument("--pt-dbm", type=float, default=14.0,
                   help="transmit power in dBm (default 14)")
    p.add_argument("--theta-i-deg", type=float, default=0.0,
                   help="incidence angle in degrees (default 0 = normal)")
    p.add_argument("--angle-step-deg", type=float, default=0.5,
                   help="receiver angle step in degrees")
    p.add_argument("--design", help="design JSON (default: synthesize 5 GHz -> 30 deg)")
    p.add_argument("--uniform-reference", action="store_true",
                   help="sweep an equal-aperture uniform plate instead")
    p.add_argument("--tiles", type=int, default=2,
                   help="supercell repetitions across the panel (default 2)")
    p.add_argument("--height-m", type=float, default=cov.DEFAULT_PANEL_HEIGHT,
                   help="panel transverse height in meters (default 0.24)")
    p.add_argument("--phase-table", help="phase-table file replacing the model")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--gap-min-mm", type=float, default=DEFAULT_GAP_MIN_MM)
    p.add_argument("--out", default="replica.csv", help="output CSV")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure")
    p.set_defaults(func=cmd_replica)

    p = sub.add_parser(
        "coverage",
        help="indoor coverage heatmap (CSV out)",
        description="Evaluate a scene JSON (positions in meters, frequency in "
        "GHz, powers in dBm) and emit a heatmap CSV of received power in dBm.",
    )
    p.add_argument("scene", help="scene JSON (see README for the schema)")
    p.add_argument("--out", default="coverage.csv", help="output CSV")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("mask", help="fabrication mask SVG in millimeters")
    p.add_argument("--design", help="design JSON from 'design'")
    p.add_argument("--reference-design", action="store_true",
                   help="lay out the published fabricated panel")
    p.add_argument("--rows", type=int, default=12,
                   help="transverse rows (default 12)")
    p.add_argument("--periods", type=int, default=2,
                   help="supercell periods along the gradient axis (default 2)")
    p.add_argument("--transverse-pitch-mm", type=float, default=30.0,
                   help="row pitch in mm (default 30)")
    p.add_argument("--patch-width-mm", type=float,
                   help="fixed patch width along the gradient axis, mm "
                   "(default: square patches)")
    p.add_argument("--out", default="mask.svg", help="output SVG")
    p.set_defaults(func=cmd_mask)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "mask" and not args.reference_design and not args.design:
        parser.error("mask needs --design or --reference-design")
    try:
        args.func(args)
    except IrskitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
