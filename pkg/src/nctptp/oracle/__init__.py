"""Brute-force Kripke semantics: finite-model evaluation, exhaustive model
enumeration, a bounded decision procedure, and vectorized sweeps."""

from .decide import DEFAULT_BOUNDS, Verdict, VerdictKind, decide
from .enumerate import (
    DEFAULT_CANDIDATE_CAP,
    OracleSignature,
    count_candidates,
    enumerate_models,
    oracle_signature,
)
from .evaluate import eval_classical, eval_modal
from .models import (
    FRAME_CHECKS,
    KripkeModel,
    OracleError,
    OracleResourceError,
    Structure,
    translate_model,
)

__all__ = [
    "DEFAULT_BOUNDS",
    "DEFAULT_CANDIDATE_CAP",
    "FRAME_CHECKS",
    "KripkeModel",
    "OracleError",
    "OracleResourceError",
    "OracleSignature",
    "Structure",
    "Verdict",
    "VerdictKind",
    "count_candidates",
    "decide",
    "enumerate_models",
    "eval_classical",
    "eval_modal",
    "oracle_signature",
    "translate_model",
]
