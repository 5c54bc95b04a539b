"""End-to-end evaluation of one parameter point: nodes -> Bell detection -> measures."""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .bell import BellConfig, assemble_two_node, bell_condition
from .measures import MeasureResult, evaluate
from .node import NodeParams, build_linear_model, derive_node, is_stable
from .spectral import DEFAULT_TOL, FilterSpec, NodeCM, filtered_node_cm


@dataclass(frozen=True)
class FilterConfig:
    """Filter in relative units: center Omega/omega_B and epsilon = |Omega| tau."""

    center_omega_b: float = -1.0
    epsilon: float = 8.0

    def resolve(self, omega_b) -> FilterSpec:
        return FilterSpec.from_epsilon(self.center_omega_b * omega_b, self.epsilon)


@dataclass(frozen=True)
class PipelineConfig:
    node_a: NodeParams = field(default_factory=NodeParams)
    node_b: NodeParams = field(default_factory=NodeParams)
    filter_a: FilterConfig = field(default_factory=FilterConfig)
    filter_b: FilterConfig = field(default_factory=FilterConfig)
    bell: BellConfig = field(default_factory=BellConfig)
    tol: float = DEFAULT_TOL
    convention: str = "vacuum_half"
    measured_mode: int = 1

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class NodeJob:
    """Everything that determines one node CM; hashable so sweeps can reuse results."""

    params: NodeParams
    filt: FilterConfig
    tol: float
    convention: str


@dataclass
class PointResult:
    measures: Optional[MeasureResult]
    stable: bool
    error_code: str = ""
    message: str = ""
    cm_ab: Optional[np.ndarray] = None
    node_cms: tuple = ()


def compute_node(job: NodeJob) -> NodeCM:
    d = derive_node(job.params)
    model = build_linear_model(d, job.convention)
    return filtered_node_cm(model, job.filt.resolve(d.omega_b), tol=job.tol)


def node_is_stable(params: NodeParams, convention="vacuum_half") -> bool:
    return is_stable(build_linear_model(derive_node(params), convention))


def node_jobs(cfg: PipelineConfig):
    return (NodeJob(cfg.node_a, cfg.filter_a, cfg.tol, cfg.convention),
            NodeJob(cfg.node_b, cfg.filter_b, cfg.tol, cfg.convention))


def combine(cfg: PipelineConfig, cm_a: NodeCM, cm_b: NodeCM):
    """Bell-condition two node CMs and evaluate both measures."""
    v = bell_condition(assemble_two_node(cm_a, cm_b), cfg.bell)
    return evaluate(v, cfg.measured_mode), v


def run_point(cfg: PipelineConfig):
    """Evaluate one configuration; exceptions propagate (the sweep engine catches them)."""
    job_a, job_b = node_jobs(cfg)
    cm_a, cm_b = compute_node(job_a), compute_node(job_b)
    res, v = combine(cfg, cm_a, cm_b)
    return PointResult(res, True, cm_ab=v, node_cms=(cm_a.cm, cm_b.cm))
