from .decomposition import (
    DecomposeOptions,
    Decomposition,
    HeadMode,
    IterationRecord,
    PurePowerSet,
    SteroidReport,
    Term,
)
from .linalg import EigResult, LsqResult
from .oracle import OracleReport
from .run import Command, ReportFormat, RunConfig
from .tensor import OrbitTable, SymTensor
