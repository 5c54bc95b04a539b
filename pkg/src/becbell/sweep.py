"""Parameter sweeps over one or two knobs of the full pipeline.

Points are indexed in row-major order (first axis outermost) and results are
assembled by index, so the output does not depend on how many workers run
or in which order they finish. Node CMs that several grid points share
(e.g. every point of an (epsilon_1, epsilon_2) grid with the same
epsilon_1) are computed once per sweep.
"""

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (BecBellError, ConventionError, DegenerateMeasurementError, DomainError,
                     NumericalError, StructuralError, UnstableError)
from .pipeline import PipelineConfig, PointResult, combine, compute_node, node_is_stable, node_jobs

# knob name -> function(config, value) -> config
AXES = {
    "epsilon_1": lambda c, v: replace(c, filter_a=replace(c.filter_a, epsilon=v)),
    "epsilon_2": lambda c, v: replace(c, filter_b=replace(c.filter_b, epsilon=v)),
    "omega_1": lambda c, v: replace(c, filter_a=replace(c.filter_a, center_omega_b=v)),
    "omega_2": lambda c, v: replace(c, filter_b=replace(c.filter_b, center_omega_b=v)),
    "eta": lambda c, v: replace(c, bell=replace(c.bell, eta1=v, eta2=v)),
    "transmissivity": lambda c, v: replace(c, bell=replace(c.bell, transmissivity=v)),
    "collision": lambda c, v: _both(c, collision_recoil=v),
    "coupling": lambda c, v: _both(c, coupling_omega_b=v),
    "drive": lambda c, v: _both(c, drive_kappa=v),
}

AXIS_DESCRIPTIONS = {
    "epsilon_1": "|Omega_1| tau_1",
    "epsilon_2": "|Omega_2| tau_2",
    "omega_1": "Omega_1 / omega_B",
    "omega_2": "Omega_2 / omega_B",
    "eta": "detector efficiency eta_1 = eta_2",
    "transmissivity": "beam-splitter transmissivity T",
    "collision": "omega_sw / omega_R (both nodes)",
    "coupling": "G / omega_B (both nodes)",
    "drive": "E_d / kappa (both nodes)",
}

ERROR_CODES = [
    (UnstableError, "unstable"),
    (DegenerateMeasurementError, "degenerate_measurement"),
    (ConventionError, "non_physical"),
    (DomainError, "domain"),
    (NumericalError, "numerical"),
    (StructuralError, "structural"),
    (BecBellError, "error"),
]


def _both(cfg, **changes):
    return replace(cfg, node_a=replace(cfg.node_a, **changes), node_b=replace(cfg.node_b, **changes))


def error_code(exc):
    for cls, code in ERROR_CODES:
        if isinstance(exc, cls):
            return code
    return "error"


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXES:
            raise StructuralError(f"unknown sweep axis {self.name!r}; choose from {sorted(AXES)}")
        if int(self.count) < 2:
            raise StructuralError(f"axis {self.name} needs at least 2 points")

    @property
    def values(self):
        return np.linspace(self.start, self.stop, int(self.count))


@dataclass(frozen=True)
class SweepSpec:
    base: PipelineConfig = field(default_factory=PipelineConfig)
    axes: tuple = ()
    outputs: tuple = ("discord", "log_negativity")

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise StructuralError("a sweep needs one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise StructuralError("sweep axes must be distinct")
        bad = set(self.outputs) - {"discord", "log_negativity"}
        if bad:
            raise StructuralError(f"unknown outputs {sorted(bad)}")

    def points(self):
        """``(coordinates, config)`` per grid point, row-major."""
        for coords in itertools.product(*(a.values for a in self.axes)):
            cfg = self.base
            for axis, value in zip(self.axes, coords):
                cfg = AXES[axis.name](cfg, float(value))
            yield tuple(float(c) for c in coords), cfg


@dataclass
class SweepResult:
    axes: tuple
    coords: list
    points: list  # PointResult per grid point
    metadata: dict

    @property
    def shape(self):
        return tuple(int(a.count) for a in self.axes)

    def surface(self, name):
        """Grid of ``discord``, ``log_negativity``, ``eta_minus``...; failed points are NaN."""
        vals = [getattr(p.measures, name) if p.measures is not None else np.nan for p in self.points]
        return np.array(vals, dtype=float).reshape(self.shape)

    @property
    def failures(self):
        return [(c, p.error_code) for c, p in zip(self.coords, self.points) if p.error_code]


def _node_task(job):
    try:
        return compute_node(job), None
    except BecBellError as exc:
        return None, exc


def _map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _safe_stable(params, convention):
    try:
        return node_is_stable(params, convention)
    except BecBellError:
        return False


def run_sweep(spec: SweepSpec, workers=1) -> SweepResult:
    """Evaluate every grid point; failures are recorded per point, never raised."""
    t0 = time.perf_counter()
    grid = list(spec.points())
    jobs = {}
    point_jobs = []
    for _, cfg in grid:
        pair = node_jobs(cfg)
        for job in pair:
            jobs.setdefault(job, len(jobs))
        point_jobs.append(pair)
    unique = list(jobs)
    node_results = _map(_node_task, unique, workers)

    points = []
    for (coords, cfg), (job_a, job_b) in zip(grid, point_jobs):
        stable = _safe_stable(cfg.node_a, cfg.convention) and _safe_stable(cfg.node_b, cfg.convention)
        (cm_a, err_a), (cm_b, err_b) = node_results[jobs[job_a]], node_results[jobs[job_b]]
        exc = err_a or err_b
        if exc is not None:
            points.append(PointResult(None, stable, error_code(exc), str(exc)))
            continue
        try:
            res, v = combine(cfg, cm_a, cm_b)
        except BecBellError as e:
            points.append(PointResult(None, stable, error_code(e), str(e), node_cms=(cm_a.cm, cm_b.cm)))
            continue
        points.append(PointResult(res, stable, cm_ab=v, node_cms=(cm_a.cm, cm_b.cm)))

    meta = {
        "n_points": len(points),
        "n_node_solves": len(unique),
        "tol": spec.base.tol,
        "wall_time_s": time.perf_counter() - t0,
        "workers": workers,
    }
    return SweepResult(tuple(spec.axes), [c for c, _ in grid], points, meta)
