"""Exact q-series and Shapovalov-form checks for conformal embeddings of N=2 minimal models."""
from .embeddings import (
    Decomposition,
    EmbeddingCase,
    central_charge,
    decompose,
    enumerate_diagonal_embeddings,
    product_character,
    verify_table,
)
from .errors import CentralChargeMismatch, DecompositionFailure, StabilizationError
from .nsmodules import (
    ModuleLabel,
    allowed_integer_modules,
    character_C,
    conformal_weight,
    j_weight,
    vacuum_character,
)
from .qseries import QSeries
from .shapovalov import gram_block, isometry_check, quotient_graded_dim, shapovalov_pair

__version__ = "0.1.0"
