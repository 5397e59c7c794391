"""Variable selection for Gaussian-mixture clustering."""

from ._core import (
    DataError,
    FitFailure,
    amdahl_fit,
    ari,
    bic,
    bic_diff,
    cer,
    class_error,
    fit,
    generate,
    models,
    n_params,
    read_csv,
    select,
    vser,
)

__all__ = [
    "DataError",
    "FitFailure",
    "amdahl_fit",
    "ari",
    "bic",
    "bic_diff",
    "cer",
    "class_error",
    "fit",
    "generate",
    "models",
    "n_params",
    "read_csv",
    "select",
    "vser",
]
