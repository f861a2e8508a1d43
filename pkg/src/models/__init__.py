from .frame import FramePair, FrameSystem, OperatorMatrix
from .results import (
    AdmissibleSequence,
    CheckResult,
    Classification,
    DiagonalTarget,
    DualVertexSet,
    ErasureOptimality,
    ErasureReport,
    FramePotential,
    LozFactorization,
    OperatorNorm,
    PietschCertificate,
    Pi2Result,
    ReferenceReport,
    SearchReport,
    SmoothnessReport,
)
from .space import LpNorm, PolytopeNorm, ScalarField, SpaceSpec, WeightedLpNorm

__all__ = [
    "AdmissibleSequence",
    "CheckResult",
    "Classification",
    "DiagonalTarget",
    "DualVertexSet",
    "ErasureOptimality",
    "ErasureReport",
    "FramePair",
    "FramePotential",
    "FrameSystem",
    "LozFactorization",
    "LpNorm",
    "OperatorMatrix",
    "OperatorNorm",
    "PietschCertificate",
    "Pi2Result",
    "PolytopeNorm",
    "ReferenceReport",
    "ScalarField",
    "SearchReport",
    "SmoothnessReport",
    "SpaceSpec",
    "WeightedLpNorm",
]
