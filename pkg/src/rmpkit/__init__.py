"""Numerical toolkit for electrodynamics written in the relativistic magnetic potential (RMP).

Plane-wave amplitudes stand in for fields: the derivative X_a acts as
multiplication by i n_a, with the ict metric (plain dot products, no
conjugation).
"""

__version__ = "0.1.0"

from .errors import (ClusterFailure, ConfigError, DegenerateDirection, NonRegularWavevector,
                     NonSpatialWavevector, RmpkitError, SingularGram, SingularSystem,
                     TemplateMismatch, ZeroTemporalComponent)
from .operator_spaces import SubspaceId, basis, eigendecompose
from .rmp_field import RMP, FourPotential, field_from_four_potential, field_from_rmp
from .tensor_core import WaveVector, boost, random_regular_wavevector, rotation

__all__ = [
    "__version__", "ClusterFailure", "ConfigError", "DegenerateDirection", "NonRegularWavevector",
    "NonSpatialWavevector", "RmpkitError", "SingularGram", "SingularSystem", "TemplateMismatch",
    "ZeroTemporalComponent", "SubspaceId", "basis", "eigendecompose", "RMP", "FourPotential",
    "field_from_four_potential", "field_from_rmp", "WaveVector", "boost",
    "random_regular_wavevector", "rotation",
]
