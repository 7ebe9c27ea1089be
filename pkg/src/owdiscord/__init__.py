"""One-way unlocalizable discord and related correlations of small pure states."""

from .correlations import (
    classical_correlation_J,
    concurrence,
    concurrence_of_assistance,
    eoa_numeric,
    eof_numeric_oracle,
    eof_wootters,
    one_way_discord_delta,
    quantum_discord_D,
    unlocalizable_entanglement_Eu,
)
from .entropy import conditional_entropy, interaction_information, mutual_information, von_neumann_entropy
from .families import FamilySpec, build
from .kernels import BACKEND
from .measurement import OptConfig, Povm, optimize_measurement
from .polygamy import (
    PureStateAnalysis,
    deficit_left_tri,
    deficit_quad,
    deficit_right_tri,
    identity_report,
    quad_report,
    quad_upper_bound,
)
from .tensor import DensityMatrix, StateVector, SubsystemLayout, density, partial_trace, tensor

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DensityMatrix",
    "FamilySpec",
    "OptConfig",
    "Povm",
    "PureStateAnalysis",
    "StateVector",
    "SubsystemLayout",
    "build",
    "classical_correlation_J",
    "concurrence",
    "concurrence_of_assistance",
    "conditional_entropy",
    "deficit_left_tri",
    "deficit_quad",
    "deficit_right_tri",
    "density",
    "eoa_numeric",
    "eof_numeric_oracle",
    "eof_wootters",
    "identity_report",
    "interaction_information",
    "mutual_information",
    "one_way_discord_delta",
    "optimize_measurement",
    "partial_trace",
    "quad_report",
    "quad_upper_bound",
    "quantum_discord_D",
    "tensor",
    "unlocalizable_entanglement_Eu",
    "von_neumann_entropy",
]
