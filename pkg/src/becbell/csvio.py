"""CSV emission for sweep results.

Floats are written with ``repr`` (shortest round-trip form), lines end in
LF, and metadata goes in leading ``#`` comment lines. Nothing that varies
between runs (timings, worker counts) is written, so identical inputs give
byte-identical files.
"""

import csv
import io
import json

from .config import canonical_json, config_hash

COLUMN_NAMES = {
    "epsilon_1": "epsilon_1",
    "epsilon_2": "epsilon_2",
    "omega_1": "omega_1_over_omega_b",
    "omega_2": "omega_2_over_omega_b",
    "eta": "eta",
    "transmissivity": "transmissivity",
    "collision": "omega_sw_over_omega_r",
    "coupling": "g_over_omega_b",
    "drive": "drive_over_kappa",
}


def _fmt(x):
    return repr(float(x))


def sweep_csv(result, spec, resolved):
    """Render a SweepResult as CSV text. ``resolved`` is the explicit config mapping."""
    buf = io.StringIO()
    buf.write(f"# becbell sweep\n# config_sha256: {config_hash(resolved)}\n")
    buf.write(f"# config: {canonical_json(resolved)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    header = [COLUMN_NAMES[a.name] for a in spec.axes] + list(spec.outputs) + ["stable", "error_code"]
    writer.writerow(header)
    for coords, point in zip(result.coords, result.points):
        row = [_fmt(c) for c in coords]
        for name in spec.outputs:
            row.append("" if point.measures is None else _fmt(getattr(point.measures, name)))
        row += ["true" if point.stable else "false", point.error_code]
        writer.writerow(row)
    return buf.getvalue()


def read_metadata(text):
    """Return the config mapping echoed in a sweep CSV."""
    for line in text.splitlines():
        if line.startswith("# config: "):
            return json.loads(line[len("# config: "):])
    raise ValueError("no config metadata line found")
