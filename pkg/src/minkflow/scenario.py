"""Scenario configs, curve presets and output emission.

Config format: flat UTF-8 text, one `key = value` per line, `#` comments.
Keys (grouped for reading, order free):

    indicatrix = euclidean | circle | fourier        (required)
    indicatrix.radius = FLOAT                        (circle only)
    indicatrix.constant = FLOAT                      (fourier only)
    indicatrix.cos.K = FLOAT   indicatrix.sin.K = FLOAT   (fourier; K even >= 2)
    indicatrix.grid = INT                            (default 4096)

    curve = circle | ellipse | perturbed_isoperimetrix | points_csv   (required)
    curve.points = INT                               (default 256; not with points_csv)
    curve.radius = FLOAT                             (circle)
    curve.a = FLOAT   curve.b = FLOAT                (ellipse)
    curve.scale = FLOAT                              (perturbed_isoperimetrix)
    curve.perturb.cos.K = FLOAT   curve.perturb.sin.K = FLOAT
    curve.path = PATH                                (points_csv)

    p = INT (>= 1, required)     cfl = FLOAT (default 0.1)
    dt_max = FLOAT (default 1.0) t_end = FLOAT (required)
    resample_every = INT (default 20)   monitor_every = INT (default 100)
    stop_kosc = FLOAT (optional)        blowup_kappa_l2 = FLOAT (optional)

    monitor_csv = PATH (required to run)   snapshots_dir = PATH (optional)
    svg_every = INT (optional, in monitor samples)   decimals = INT (default 12)
    seed = INT (default 0, randomized suites only)

The monitor CSV has the fixed header
time,L,A,kappa_bar,total_kappa,kosc,iso_ratio,diss_norm,kappa_l2,convex,dt
with floats in scientific notation at `decimals` digits; snapshot CSVs are
x,y rows in fixed-point at `decimals` digits.  Identical configs produce
byte-identical monitor CSVs.
"""

import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from .curve import CurveState, TWO_PI, centroid, compute_frame, enclosed_area, sigma_integral
from .errors import ConfigError, InvalidInitialCurve
from .flow import FlowParams, run
from .indicatrix import IndicatrixSpec, build_indicatrix, isoperimetrix_point

log = logging.getLogger(__name__)

MONITOR_COLUMNS = ("time", "L", "A", "kappa_bar", "total_kappa", "kosc",
                   "iso_ratio", "diss_norm", "kappa_l2", "convex", "dt")
MONITOR_HEADER = ",".join(MONITOR_COLUMNS)

INDICATRIX_KINDS = ("euclidean", "circle", "fourier")
CURVE_KINDS = ("circle", "ellipse", "perturbed_isoperimetrix", "points_csv")


@dataclass(frozen=True)
class ConfigIssue:
    kind: str    # UnknownKey | MissingRequired | TypeMismatch
    key: str
    line: int    # 0 when no single line applies
    reason: str

    def __str__(self):
        return f"{self.kind}: '{self.key}' (line {self.line}): {self.reason}"


@dataclass(frozen=True)
class ScenarioConfig:
    indicatrix_kind: str
    curve_kind: str
    flow: FlowParams
    indicatrix_radius: float | None = None
    indicatrix_spec: IndicatrixSpec | None = None
    indicatrix_grid: int = 4096
    curve_points: int = 256
    curve_radius: float | None = None
    curve_a: float | None = None
    curve_b: float | None = None
    curve_scale: float | None = None
    curve_perturb_cos: tuple = ()
    curve_perturb_sin: tuple = ()
    curve_path: str | None = None
    monitor_csv: str | None = None
    snapshots_dir: str | None = None
    svg_every: int | None = None
    decimals: int = 12
    seed: int = 0


class _Entries:
    """Raw key/value lines plus issue collection for typed extraction."""

    def __init__(self):
        self.data = {}      # key -> (raw value, line)
        self.issues = []
        self.consumed = set()

    def add(self, key, value, line):
        if key in self.data:
            self.issues.append(ConfigIssue("TypeMismatch", key, line, "duplicate key"))
        self.data[key] = (value, line)

    def take(self, key, kind, convert, required=False, default=None):
        if key not in self.data:
            if required:
                self.issues.append(ConfigIssue("MissingRequired", key, 0, f"{kind} value required"))
            return default
        raw, line = self.data[key]
        self.consumed.add(key)
        try:
            return convert(raw)
        except (ValueError, TypeError):
            self.issues.append(ConfigIssue("TypeMismatch", key, line, f"expected {kind}, got {raw!r}"))
            return default

    def take_float(self, key, required=False, default=None):
        return self.take(key, "a number", float, required, default)

    def take_int(self, key, required=False, default=None):
        def conv(raw):
            val = int(raw, 0)
            return val
        return self.take(key, "an integer", conv, required, default)

    def take_str(self, key, required=False, default=None, choices=None):
        def conv(raw):
            if choices is not None and raw not in choices:
                raise ValueError(raw)
            return raw
        kind = "one of " + "|".join(choices) if choices else "a string"
        return self.take(key, kind, conv, required, default)

    def take_harmonics(self, prefix, even_only):
        """All `prefix.K = amp` pairs, validated and sorted by K."""
        out = []
        for key in sorted(self.data):
            if not key.startswith(prefix + "."):
                continue
            raw, line = self.data[key]
            self.consumed.add(key)
            tail = key[len(prefix) + 1:]
            try:
                k = int(tail)
            except ValueError:
                self.issues.append(ConfigIssue("TypeMismatch", key, line, "harmonic index must be an integer"))
                continue
            if k < 1 or (even_only and (k % 2 != 0 or k < 2)):
                rule = "even and >= 2 (central symmetry)" if even_only else ">= 1"
                self.issues.append(ConfigIssue("TypeMismatch", key, line, f"harmonic index must be {rule}"))
                continue
            try:
                amp = float(raw)
            except ValueError:
                self.issues.append(ConfigIssue("TypeMismatch", key, line, f"expected a number, got {raw!r}"))
                continue
            out.append((k, amp))
        return tuple(out)

    def reject_unknown(self):
        for key, (_, line) in self.data.items():
            if key not in self.consumed:
                self.issues.append(ConfigIssue("UnknownKey", key, line, "not a recognised key"))


def parse_config(text):
    """Parse and fully validate a scenario config; raises ConfigError."""
    entries = _Entries()
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            entries.issues.append(ConfigIssue("TypeMismatch", line.split()[0], lineno,
                                              "expected 'key = value'"))
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        entries.add(key, value, lineno)

    ind_kind = entries.take_str("indicatrix", required=True, choices=INDICATRIX_KINDS)
    ind_radius = entries.take_float("indicatrix.radius")
    ind_constant = entries.take_float("indicatrix.constant")
    ind_cos = entries.take_harmonics("indicatrix.cos", even_only=True)
    ind_sin = entries.take_harmonics("indicatrix.sin", even_only=True)
    ind_grid = entries.take_int("indicatrix.grid", default=4096)

    curve_kind = entries.take_str("curve", required=True, choices=CURVE_KINDS)
    curve_points = entries.take_int("curve.points", default=256)
    curve_radius = entries.take_float("curve.radius")
    curve_a = entries.take_float("curve.a")
    curve_b = entries.take_float("curve.b")
    curve_scale = entries.take_float("curve.scale")
    perturb_cos = entries.take_harmonics("curve.perturb.cos", even_only=False)
    perturb_sin = entries.take_harmonics("curve.perturb.sin", even_only=False)
    curve_path = entries.take_str("curve.path")

    p = entries.take_int("p", required=True)
    cfl = entries.take_float("cfl", default=0.1)
    dt_max = entries.take_float("dt_max", default=1.0)
    t_end = entries.take_float("t_end", required=True)
    resample_every = entries.take_int("resample_every", default=20)
    monitor_every = entries.take_int("monitor_every", default=100)
    stop_kosc = entries.take_float("stop_kosc")
    blowup = entries.take_float("blowup_kappa_l2")

    monitor_csv = entries.take_str("monitor_csv")
    snapshots_dir = entries.take_str("snapshots_dir")
    svg_every = entries.take_int("svg_every")
    decimals = entries.take_int("decimals", default=12)
    seed = entries.take_int("seed", default=0)

    entries.reject_unknown()
    issues = entries.issues

    def line_of(key):
        return entries.data[key][1] if key in entries.data else 0

    def require(cond, key, reason):
        if not cond:
            issues.append(ConfigIssue("MissingRequired", key, line_of(key), reason))

    def forbid(value, key, reason):
        if value is not None and value != ():
            issues.append(ConfigIssue("TypeMismatch", key, line_of(key), reason))

    if ind_kind == "circle":
        require(ind_radius is not None, "indicatrix.radius", "circle indicatrix needs a radius")
        forbid(ind_constant, "indicatrix.constant", "only valid for the fourier indicatrix")
        forbid(ind_cos or None, "indicatrix.cos.*", "only valid for the fourier indicatrix")
        forbid(ind_sin or None, "indicatrix.sin.*", "only valid for the fourier indicatrix")
    elif ind_kind == "fourier":
        require(ind_constant is not None, "indicatrix.constant", "fourier indicatrix needs a constant term")
        forbid(ind_radius, "indicatrix.radius", "only valid for the circle indicatrix")
    elif ind_kind == "euclidean":
        forbid(ind_radius, "indicatrix.radius", "only valid for the circle indicatrix")
        forbid(ind_constant, "indicatrix.constant", "only valid for the fourier indicatrix")
        forbid(ind_cos or None, "indicatrix.cos.*", "only valid for the fourier indicatrix")
        forbid(ind_sin or None, "indicatrix.sin.*", "only valid for the fourier indicatrix")

    if curve_kind == "circle":
        require(curve_radius is not None, "curve.radius", "circle curve needs a radius")
    elif curve_kind == "ellipse":
        require(curve_a is not None, "curve.a", "ellipse needs semi-axis a")
        require(curve_b is not None, "curve.b", "ellipse needs semi-axis b")
    elif curve_kind == "perturbed_isoperimetrix":
        require(curve_scale is not None, "curve.scale", "perturbed_isoperimetrix needs a scale")
    elif curve_kind == "points_csv":
        require(curve_path is not None, "curve.path", "points_csv needs a file path")
        if "curve.points" in entries.data:
            issues.append(ConfigIssue("TypeMismatch", "curve.points", line_of("curve.points"),
                                      "point count comes from the CSV file"))
    if curve_kind != "perturbed_isoperimetrix":
        forbid(perturb_cos or None, "curve.perturb.cos.*", "only valid for perturbed_isoperimetrix")
        forbid(perturb_sin or None, "curve.perturb.sin.*", "only valid for perturbed_isoperimetrix")

    if p is not None and p < 1:
        issues.append(ConfigIssue("TypeMismatch", "p", line_of("p"),
                                  "p must be an integer >= 1 (order 2(p+1) flow)"))
    if cfl is not None and not 0.0 < cfl <= 1.0:
        issues.append(ConfigIssue("TypeMismatch", "cfl", line_of("cfl"), "cfl must be in (0, 1]"))
    if t_end is not None and t_end <= 0.0:
        issues.append(ConfigIssue("TypeMismatch", "t_end", line_of("t_end"), "t_end must be positive"))
    if dt_max is not None and dt_max <= 0.0:
        issues.append(ConfigIssue("TypeMismatch", "dt_max", line_of("dt_max"), "dt_max must be positive"))
    for key, val in (("resample_every", resample_every), ("monitor_every", monitor_every)):
        if val is not None and val < 1:
            issues.append(ConfigIssue("TypeMismatch", key, line_of(key), "must be >= 1"))
    if curve_kind != "points_csv" and curve_points is not None:
        m = curve_points
        if m < 16 or (m & (m - 1)) != 0:
            issues.append(ConfigIssue("TypeMismatch", "curve.points", line_of("curve.points"),
                                      "must be a power of two >= 16"))
    if stop_kosc is not None and stop_kosc < 0.0:
        issues.append(ConfigIssue("TypeMismatch", "stop_kosc", line_of("stop_kosc"),
                                  "must be nonnegative"))
    if blowup is not None and blowup <= 0.0:
        issues.append(ConfigIssue("TypeMismatch", "blowup_kappa_l2", line_of("blowup_kappa_l2"),
                                  "must be positive"))
    if ind_grid is not None and ind_grid < 64:
        issues.append(ConfigIssue("TypeMismatch", "indicatrix.grid", line_of("indicatrix.grid"),
                                  "must be >= 64"))
    if decimals is not None and not 0 <= decimals <= 17:
        issues.append(ConfigIssue("TypeMismatch", "decimals", line_of("decimals"),
                                  "must be between 0 and 17"))
    if svg_every is not None and svg_every < 1:
        issues.append(ConfigIssue("TypeMismatch", "svg_every", line_of("svg_every"), "must be >= 1"))

    if issues:
        raise ConfigError(issues)

    spec = None
    if ind_kind == "fourier":
        spec = IndicatrixSpec(constant_term=ind_constant, cos_coeffs=ind_cos, sin_coeffs=ind_sin)
    flow_params = FlowParams(
        p=p, cfl_constant=cfl, dt_max=dt_max, t_end=t_end,
        resample_every=resample_every, monitor_every=monitor_every,
        stop_kosc=stop_kosc, blowup_kappa_l2=blowup,
    )
    return ScenarioConfig(
        indicatrix_kind=ind_kind, curve_kind=curve_kind, flow=flow_params,
        indicatrix_radius=ind_radius, indicatrix_spec=spec, indicatrix_grid=ind_grid,
        curve_points=curve_points, curve_radius=curve_radius, curve_a=curve_a,
        curve_b=curve_b, curve_scale=curve_scale,
        curve_perturb_cos=perturb_cos, curve_perturb_sin=perturb_sin,
        curve_path=curve_path, monitor_csv=monitor_csv, snapshots_dir=snapshots_dir,
        svg_every=svg_every, decimals=decimals, seed=seed,
    )


def render_config(cfg):
    """Canonical text form; parse_config(render_config(cfg)) round-trips."""
    lines = [f"indicatrix = {cfg.indicatrix_kind}"]
    if cfg.indicatrix_radius is not None:
        lines.append(f"indicatrix.radius = {cfg.indicatrix_radius!r}")
    if cfg.indicatrix_spec is not None:
        lines.append(f"indicatrix.constant = {cfg.indicatrix_spec.constant_term!r}")
        for k, amp in cfg.indicatrix_spec.cos_coeffs:
            lines.append(f"indicatrix.cos.{k} = {amp!r}")
        for k, amp in cfg.indicatrix_spec.sin_coeffs:
            lines.append(f"indicatrix.sin.{k} = {amp!r}")
    lines.append(f"indicatrix.grid = {cfg.indicatrix_grid}")

    lines.append(f"curve = {cfg.curve_kind}")
    if cfg.curve_kind != "points_csv":
        lines.append(f"curve.points = {cfg.curve_points}")
    for name, val in (("radius", cfg.curve_radius), ("a", cfg.curve_a),
                      ("b", cfg.curve_b), ("scale", cfg.curve_scale)):
        if val is not None:
            lines.append(f"curve.{name} = {val!r}")
    for k, amp in cfg.curve_perturb_cos:
        lines.append(f"curve.perturb.cos.{k} = {amp!r}")
    for k, amp in cfg.curve_perturb_sin:
        lines.append(f"curve.perturb.sin.{k} = {amp!r}")
    if cfg.curve_path is not None:
        lines.append(f"curve.path = {cfg.curve_path}")

    fp = cfg.flow
    lines.append(f"p = {fp.p}")
    lines.append(f"cfl = {fp.cfl_constant!r}")
    lines.append(f"dt_max = {fp.dt_max!r}")
    lines.append(f"t_end = {fp.t_end!r}")
    lines.append(f"resample_every = {fp.resample_every}")
    lines.append(f"monitor_every = {fp.monitor_every}")
    if fp.stop_kosc is not None:
        lines.append(f"stop_kosc = {fp.stop_kosc!r}")
    if fp.blowup_kappa_l2 is not None:
        lines.append(f"blowup_kappa_l2 = {fp.blowup_kappa_l2!r}")

    if cfg.monitor_csv is not None:
        lines.append(f"monitor_csv = {cfg.monitor_csv}")
    if cfg.snapshots_dir is not None:
        lines.append(f"snapshots_dir = {cfg.snapshots_dir}")
    if cfg.svg_every is not None:
        lines.append(f"svg_every = {cfg.svg_every}")
    lines.append(f"decimals = {cfg.decimals}")
    lines.append(f"seed = {cfg.seed}")
    return "\n".join(lines) + "\n"


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def build_indicatrix_from_config(cfg):
    if cfg.indicatrix_kind == "euclidean":
        spec = IndicatrixSpec(1.0)
    elif cfg.indicatrix_kind == "circle":
        spec = IndicatrixSpec(cfg.indicatrix_radius)
    else:
        spec = cfg.indicatrix_spec
    return build_indicatrix(spec, cfg.indicatrix_grid)


def build_initial_curve(cfg, ind):
    """Initial CurveState per the config's curve preset.

    The perturbed-isoperimetrix preset samples the scaled isoperimetrix at
    cell-midpoint angles theta_i = 2 pi (i + 1/2) / M (midpoints keep the
    sampling away from isolated zero-speed parameters of borderline-convex
    bodies) and adds the configured Fourier profile along the direction
    n(theta) = (-sin theta, cos theta).  Initial curvature-oscillation and
    isoperimetric-ratio values are logged so the smallness hypotheses can be
    checked.
    """
    kind = cfg.curve_kind
    if kind == "points_csv":
        pts = np.loadtxt(cfg.curve_path, delimiter=",", dtype=float, ndmin=2)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidInitialCurve(f"{cfg.curve_path}: need x,y rows, got shape {pts.shape}")
        state = CurveState(points=pts, time=0.0)
    else:
        m = cfg.curve_points
        if kind == "circle":
            u = TWO_PI * np.arange(m) / m
            pts = cfg.curve_radius * np.column_stack([np.cos(u), np.sin(u)])
        elif kind == "ellipse":
            u = TWO_PI * np.arange(m) / m
            pts = np.column_stack([cfg.curve_a * np.cos(u), cfg.curve_b * np.sin(u)])
        else:
            th = TWO_PI * (np.arange(m) + 0.5) / m
            pts = cfg.curve_scale * isoperimetrix_point(ind, th)
            delta = np.zeros(m)
            for k, amp in cfg.curve_perturb_cos:
                delta += amp * np.cos(k * th)
            for k, amp in cfg.curve_perturb_sin:
                delta += amp * np.sin(k * th)
            pts = pts + delta[:, None] * np.column_stack([-np.sin(th), np.cos(th)])
        state = CurveState(points=pts, time=0.0)

    area = enclosed_area(state)
    if area <= 0.0:
        raise InvalidInitialCurve(f"initial curve has signed area {area:.6g}; "
                                  "need positive (counterclockwise) orientation")
    frame = compute_frame(state, ind)
    length = float(np.mean(frame.w)) * TWO_PI
    total_kappa = sigma_integral(frame.kappa, frame)
    dev = frame.kappa - total_kappa / length
    kosc = length * sigma_integral(dev * dev, frame)
    iso = length * length / (4.0 * area * ind.area_isoperimetrix)
    log.info("initial curve: M=%d kosc=%.6e iso_ratio=%.12f area=%.6f", state.m, kosc, iso, area)
    return state


def format_monitor_row(record, decimals=12):
    def num(v):
        return f"{v:.{decimals}e}"
    return ",".join([
        num(record.time), num(record.L), num(record.A), num(record.kappa_bar),
        num(record.total_kappa), num(record.kosc), num(record.iso_ratio),
        num(record.diss_norm), num(record.kappa_l2),
        "1" if record.convex else "0", num(record.dt_used),
    ])


def emit_monitor_row(record, sink, decimals=12):
    """One CSV row in the fixed column order (no header)."""
    sink.write(format_monitor_row(record, decimals) + "\n")


def emit_snapshot(state_or_points, sink, decimals=12):
    """x,y rows of the curve points, fixed-point at `decimals` digits."""
    pts = state_or_points.points if isinstance(state_or_points, CurveState) else np.asarray(state_or_points)
    for x, y in pts:
        sink.write(f"{x:.{decimals}f},{y:.{decimals}f}\n")


def _svg_path(points, close=True):
    parts = [f"M {points[0][0]:.6f} {points[0][1]:.6f}"]
    parts += [f"L {x:.6f} {y:.6f}" for x, y in points[1:]]
    if close:
        parts.append("Z")
    return " ".join(parts)


def emit_svg(state, ind, sink, record=None, show_reference=True, size=480):
    """SVG frame: the curve, optionally the area-matched reference outline,
    and a text block with length, area and curvature oscillation."""
    pts = state.points
    area = enclosed_area(state)
    ref = None
    if show_reference and area > 0.0:
        lam = math.sqrt(area / ind.area_isoperimetrix)
        th = TWO_PI * np.arange(256) / 256
        ref = lam * isoperimetrix_point(ind, th) + centroid(state)

    allpts = pts if ref is None else np.vstack([pts, ref])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    pad = 0.08 * span

    def to_px(p):
        sx = (p[:, 0] - lo[0] + pad) / (span + 2 * pad) * size
        sy = size - (p[:, 1] - lo[1] + pad) / (span + 2 * pad) * size
        return np.column_stack([sx, sy])

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<path d="{_svg_path(to_px(pts))}" fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    if ref is not None:
        lines.append(
            f'<path d="{_svg_path(to_px(ref))}" fill="none" stroke="red" '
            f'stroke-width="1" stroke-dasharray="4 3"/>'
        )
    if record is not None:
        lines.append(
            f'<text x="8" y="16" font-family="monospace" font-size="12">'
            f't={record.time:.6e} L={record.L:.6e} A={record.A:.6e} kosc={record.kosc:.3e}</text>'
        )
    lines.append("</svg>")
    sink.write("\n".join(lines) + "\n")


class MonitorWriter:
    """One CSV sink per run; writes the fixed header on opening."""

    def __init__(self, path, decimals=12):
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        self.path = path
        self.decimals = decimals
        self._fh = open(path, "w", encoding="utf-8", newline="\n")
        self._fh.write(MONITOR_HEADER + "\n")

    def write(self, record):
        emit_monitor_row(record, self._fh, self.decimals)

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def run_scenario(cfg, base_dir="."):
    """Build everything from a config, run the flow, emit all outputs.

    Returns the Trajectory.  Requires monitor_csv to be set.
    """
    if cfg.monitor_csv is None:
        raise ConfigError([ConfigIssue("MissingRequired", "monitor_csv", 0,
                                       "running a scenario requires a monitor CSV path")])
    ind = build_indicatrix_from_config(cfg)
    state = build_initial_curve(cfg, ind)

    monitor_path = os.path.join(base_dir, cfg.monitor_csv)
    snap_dir = None
    if cfg.snapshots_dir is not None:
        snap_dir = os.path.join(base_dir, cfg.snapshots_dir)
        os.makedirs(snap_dir, exist_ok=True)

    counter = {"i": 0}

    with MonitorWriter(monitor_path, cfg.decimals) as writer:
        def on_sample(record, sample_state):
            idx = counter["i"]
            counter["i"] += 1
            writer.write(record)
            if snap_dir is not None:
                snap_path = os.path.join(snap_dir, f"snapshot_{idx:06d}.csv")
                with open(snap_path, "w", encoding="utf-8", newline="\n") as fh:
                    emit_snapshot(sample_state, fh, cfg.decimals)
                if cfg.svg_every is not None and idx % cfg.svg_every == 0:
                    svg_path = os.path.join(snap_dir, f"frame_{idx:06d}.svg")
                    with open(svg_path, "w", encoding="utf-8", newline="\n") as fh:
                        emit_svg(sample_state, ind, fh, record=record)

        trajectory = run(state, ind, cfg.flow, on_sample=on_sample)
    return trajectory
