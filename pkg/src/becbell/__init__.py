"""Steady-state quantum correlations between two remote BEC-cavity nodes
linked by a Bell-like detection of their filtered output fields."""

from .bell import BellConfig, TwoNodeState, assemble_two_node, bell_condition, gamma_matrix, general_dyne_oracle
from .errors import (BecBellError, ConfigError, ConventionError, DegenerateMeasurementError, DomainError,
                     NumericalError, PhysicsError, StructuralError, UnstableError)
from .gaussian import entropy_f, extract_blocks, permute_modes, symplectic_eigenvalues, validate
from .measures import MeasureResult, evaluate, gaussian_discord, log_negativity
from .node import (AtomicParams, DerivedNode, LinearModel, NodeParams, build_linear_model, derive_node,
                   is_stable, steady_state)
from .pipeline import FilterConfig, PipelineConfig, run_point
from .spectral import FilterSpec, NodeCM, filtered_node_cm, lyapunov_steady_cm
from .sweep import Axis, SweepResult, SweepSpec, run_sweep

__version__ = "0.1.0"
