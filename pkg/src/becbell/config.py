"""YAML run configuration with unit-bearing keys.

Every physical quantity carries its unit (or the quantity it is a multiple
of) in the key name. ``both`` sets parameters shared by the two nodes;
``node_a``/``node_b`` override them per node, and likewise ``filter`` vs.
``filter_a``/``filter_b``. Unknown keys are rejected with the line they
appear on.

Example::

    both:
      cavity_length_mm: 1.0
      coupling_omega_b_multiple: 0.5
    filter:
      epsilon: 8
    detection:
      efficiency_1: 0.9
      efficiency_2: 0.9
    sweep:
      axes:
        - {name: eta, start: 1.0, stop: 0.2, count: 9}
"""

import hashlib
import json
import math

import yaml

from .bell import BellConfig
from .errors import BecBellError, ConfigError
from .node import AtomicParams, NodeParams
from .pipeline import FilterConfig, PipelineConfig
from .spectral import DEFAULT_TOL
from .sweep import AXES, Axis, SweepSpec

AMU = 1.66053906660e-27
TWO_PI = 2 * math.pi

# config key -> (NodeParams field, factor to SI / internal units)
NODE_KEYS = {
    "cavity_length_mm": ("cavity_length", 1e-3),
    "wavelength_nm": ("wavelength", 1e-9),
    "finesse": ("finesse", 1.0),
    "kappa_per_s": ("kappa", 1.0),
    "drive_kappa_multiple": ("drive_kappa", 1.0),
    "drive_power_mw": ("drive_power", 1e-3),
    "detuning_omega_c_multiple": ("detuning_omega_c", 1.0),
    "recoil_frequency_khz": ("recoil_frequency", TWO_PI * 1e3),
    "collision_recoil_multiple": ("collision_recoil", 1.0),
    "bec_damping_kappa_multiple": ("bec_damping_kappa", 1.0),
    "coupling_omega_b_multiple": ("coupling_omega_b", 1.0),
    "temperature_uk": ("temperature", 1e-6),
}
ATOM_KEYS = {
    "n_atoms": ("n_atoms", None),
    "atom_mass_amu": ("atom_mass", AMU),
    "atomic_detuning_ghz": ("atomic_detuning", TWO_PI * 1e9),
    "g0_mhz": ("g0", TWO_PI * 1e6),
    "scattering_length_nm": ("scattering_length", 1e-9),
    "waist_um": ("waist", 1e-6),
}
FILTER_KEYS = {"center_omega_b_multiple": "center_omega_b", "epsilon": "epsilon"}
DETECTION_KEYS = {"transmissivity": "transmissivity", "efficiency_1": "eta1", "efficiency_2": "eta2"}
SOLVER_KEYS = {"tol", "convention", "measured_mode"}
SWEEP_KEYS = {"preset", "axes", "outputs"}
AXIS_KEYS = {"name", "start", "stop", "count"}
TOP_KEYS = {"both", "node_a", "node_b", "filter", "filter_a", "filter_b", "detection", "solver", "sweep"}

FIGURE_PRESETS = {
    "fig2": ([("epsilon_1", 0.5, 30.0, 50), ("epsilon_2", 0.5, 30.0, 50)], ("discord", "log_negativity")),
    "fig3": ([("eta", 1.0, 0.2, 100)], ("discord", "log_negativity")),
    "fig4": ([("omega_1", -2.0, 0.0, 50), ("omega_2", -2.0, 0.0, 50)], ("discord", "log_negativity")),
    "fig5": ([("collision", 0.0, 20.0, 100)], ("discord", "log_negativity")),
    "fig6": ([("epsilon_1", 0.5, 30.0, 50), ("epsilon_2", 0.5, 30.0, 50)], ("log_negativity", "discord")),
}


def _compose(text, source):
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark else source
        raise ConfigError(f"{where}: invalid YAML: {getattr(exc, 'problem', exc)}") from None
    return node


def _plain(node, path, lines, source):
    """Convert a composed YAML node to Python values, recording key line numbers."""
    if node is None:
        return {}
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = k.value
            sub = f"{path}.{key}" if path else key
            if key in out:
                raise ConfigError(f"{source}:{k.start_mark.line + 1}: duplicate key '{sub}'")
            lines[sub] = k.start_mark.line + 1
            out[key] = _plain(v, sub, lines, source)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_plain(v, f"{path}[{i}]", lines, source) for i, v in enumerate(node.value)]
    return yaml.safe_load(yaml.serialize(node))


class _Ctx:
    def __init__(self, lines, source):
        self.lines = lines
        self.source = source

    def fail(self, path, msg):
        line = self.lines.get(path)
        where = f"{self.source}:{line}" if line else self.source
        raise ConfigError(f"{where}: '{path}': {msg}")

    def section(self, data, path, allowed):
        if data is None:
            return {}
        if not isinstance(data, dict):
            self.fail(path, "expected a mapping")
        for key in data:
            if key not in allowed:
                self.fail(f"{path}.{key}" if path else key, f"unknown key (allowed: {', '.join(sorted(allowed))})")
        return data

    def number(self, value, path, integer=False):
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"expected a number, got {value!r}")
        if integer:
            if int(value) != value:
                self.fail(path, "expected an integer")
            return int(value)
        if not math.isfinite(value):
            self.fail(path, "must be finite")
        return float(value)


def _node(ctx, shared, own, own_path):
    merged = dict(shared)
    merged.update(own)
    kwargs = {}
    for key, value in merged.items():
        path = f"{own_path}.{key}" if key in own else f"both.{key}"
        if key == "atoms":
            atoms = ctx.section(value, path, set(ATOM_KEYS))
            akw = {}
            for akey, avalue in atoms.items():
                field, factor = ATOM_KEYS[akey]
                num = ctx.number(avalue, f"{path}.{akey}", integer=factor is None)
                akw[field] = num if factor is None else num * factor
            try:
                kwargs["atoms"] = AtomicParams(**akw)
            except (TypeError, BecBellError) as exc:
                ctx.fail(path, str(exc))
            continue
        field, factor = NODE_KEYS[key]
        num = ctx.number(value, path)
        kwargs[field] = None if num is None else num * factor
    return NodeParams(**kwargs)


def _filter(ctx, shared, own, own_path):
    merged = dict(shared)
    merged.update(own)
    kwargs = {}
    for key, value in merged.items():
        path = f"{own_path}.{key}" if key in own else f"filter.{key}"
        kwargs[FILTER_KEYS[key]] = ctx.number(value, path)
    filt = FilterConfig(**kwargs)
    if filt.epsilon <= 0:
        ctx.fail(f"{own_path}.epsilon", "epsilon must be positive")
    return filt


def parse_config(data, source="<config>", lines=None):
    """Validate a config mapping and return ``(PipelineConfig, sweep_block)``.

    ``sweep_block`` is the raw (validated) ``sweep`` mapping or None.
    """
    ctx = _Ctx(lines or {}, source)
    data = ctx.section(data, "", TOP_KEYS)
    node_allowed = set(NODE_KEYS) | {"atoms"}
    both = ctx.section(data.get("both"), "both", node_allowed)
    node_a = _node(ctx, both, ctx.section(data.get("node_a"), "node_a", node_allowed), "node_a")
    node_b = _node(ctx, both, ctx.section(data.get("node_b"), "node_b", node_allowed), "node_b")
    fshared = ctx.section(data.get("filter"), "filter", set(FILTER_KEYS))
    filter_a = _filter(ctx, fshared, ctx.section(data.get("filter_a"), "filter_a", set(FILTER_KEYS)), "filter_a")
    filter_b = _filter(ctx, fshared, ctx.section(data.get("filter_b"), "filter_b", set(FILTER_KEYS)), "filter_b")

    det = ctx.section(data.get("detection"), "detection", set(DETECTION_KEYS))
    try:
        bell = BellConfig(**{DETECTION_KEYS[k]: ctx.number(v, f"detection.{k}") for k, v in det.items()})
    except BecBellError as exc:
        ctx.fail("detection", str(exc))

    solver = ctx.section(data.get("solver"), "solver", SOLVER_KEYS)
    tol = ctx.number(solver.get("tol", DEFAULT_TOL), "solver.tol")
    if not tol > 0:
        ctx.fail("solver.tol", "must be positive")
    convention = solver.get("convention", "vacuum_half")
    if convention not in ("vacuum_half", "literal"):
        ctx.fail("solver.convention", "must be 'vacuum_half' or 'literal'")
    measured = solver.get("measured_mode", 1)
    if measured not in (1, 2):
        ctx.fail("solver.measured_mode", "must be 1 or 2")

    cfg = PipelineConfig(node_a, node_b, filter_a, filter_b, bell, tol, convention, measured)
    sweep = data.get("sweep")
    if sweep is not None:
        sweep = ctx.section(sweep, "sweep", SWEEP_KEYS)
        if "preset" in sweep and sweep["preset"] not in FIGURE_PRESETS:
            ctx.fail("sweep.preset", f"unknown preset (choose from {', '.join(FIGURE_PRESETS)})")
        for i, axis in enumerate(sweep.get("axes") or []):
            ctx.section(axis, f"sweep.axes[{i}]", AXIS_KEYS)
            if axis.get("name") not in AXES:
                ctx.fail(f"sweep.axes[{i}].name", f"unknown axis (choose from {', '.join(sorted(AXES))})")
    return cfg, sweep


def load_config(text, source="<config>"):
    """Parse YAML text. Empty input gives the reference parameter set."""
    lines = {}
    data = _plain(_compose(text, source), "", lines, source)
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    return parse_config(data, source, lines)


def sweep_spec(cfg, sweep=None, preset=None, points=None):
    """Build a SweepSpec from a preset name or an explicit ``sweep`` block."""
    sweep = sweep or {}
    preset = preset or sweep.get("preset")
    if preset is not None:
        if preset not in FIGURE_PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        axes, outputs = FIGURE_PRESETS[preset]
        axes = [Axis(n, a, b, points or c) for n, a, b, c in axes]
    elif sweep.get("axes"):
        try:
            axes = [Axis(a["name"], float(a["start"]), float(a["stop"]), int(points or a["count"]))
                    for a in sweep["axes"]]
        except KeyError as exc:
            raise ConfigError(f"sweep axis is missing {exc}") from None
        outputs = ("discord", "log_negativity")
    else:
        raise ConfigError("no sweep requested: pass --preset or add a 'sweep' block")
    if sweep.get("outputs"):
        outputs = tuple(sweep["outputs"])
    try:
        return SweepSpec(cfg, tuple(axes), tuple(outputs))
    except BecBellError as exc:
        raise ConfigError(str(exc)) from None


def _node_dict(p: NodeParams):
    out = {}
    for key, (field, factor) in NODE_KEYS.items():
        value = getattr(p, field)
        out[key] = None if value is None else value / factor
    if p.atoms is not None:
        out["atoms"] = {key: (getattr(p.atoms, f) if fac is None else getattr(p.atoms, f) / fac)
                        for key, (f, fac) in ATOM_KEYS.items()}
    return out


def config_to_dict(cfg: PipelineConfig, spec: SweepSpec = None):
    """Fully resolved, explicit config mapping that :func:`parse_config` accepts."""
    out = {
        "node_a": _node_dict(cfg.node_a),
        "node_b": _node_dict(cfg.node_b),
        "filter_a": {"center_omega_b_multiple": cfg.filter_a.center_omega_b, "epsilon": cfg.filter_a.epsilon},
        "filter_b": {"center_omega_b_multiple": cfg.filter_b.center_omega_b, "epsilon": cfg.filter_b.epsilon},
        "detection": {"transmissivity": cfg.bell.transmissivity, "efficiency_1": cfg.bell.eta1,
                      "efficiency_2": cfg.bell.eta2},
        "solver": {"tol": cfg.tol, "convention": cfg.convention, "measured_mode": cfg.measured_mode},
    }
    if spec is not None:
        out["sweep"] = {
            "axes": [{"name": a.name, "start": a.start, "stop": a.stop, "count": int(a.count)} for a in spec.axes],
            "outputs": list(spec.outputs),
        }
    return out


def canonical_json(mapping):
    return json.dumps(mapping, sort_keys=True, separators=(",", ":"))


def config_hash(mapping):
    return hashlib.sha256(canonical_json(mapping).encode()).hexdigest()
