"""Multicollinearity diagnostics that respect dummy regressors and the intercept."""
from ._backend import BACKEND
from .dataset import (
    ColumnRole,
    Dataset,
    DesignMatrix,
    ScalingMode,
    build_design,
    bundled_path,
    infer_roles,
    load_csv,
    load_theil,
    scale,
)
from .diagnose import (
    DiagnosticsReport,
    NotApplicable,
    Verdict,
    VerdictKind,
    diagnose,
    render,
    report_to_dict,
)
from .errors import (
    CollinDiagError,
    ConvergenceError,
    DataError,
    NotApplicableError,
    NumericalError,
    RankDeficiencyError,
)
from .measures import (
    BelsleyTable,
    CorrelationReport,
    SlmReport,
    StewartTable,
    VifTable,
    belsley,
    coefficient_of_variation,
    condition_number,
    correlation_report,
    dummy_cn,
    slm_diagnostics,
    stewart_table,
    vif_table,
)
from .numerics import (
    EigenDecomposition,
    OlsFit,
    crossprod,
    det_spd,
    invert_spd,
    ols,
    sym_eigen,
)
from .thresholds import ThresholdConfig

__version__ = "0.1.0"
