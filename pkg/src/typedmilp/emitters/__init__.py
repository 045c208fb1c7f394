"""Deterministic serialization: LP and MPS solver formats for canonical
forms (with a subset parser for round-trips), and the versioned JSON
interchange document for typed models."""

from .document import (
    SCHEMA_VERSION,
    document_to_model,
    expr_from_json,
    expr_to_json,
    model_to_document,
    parse_model,
    write_model,
)
from .lp import emit_lp
from .mps import emit_mps
from .parse import parse_canonical

__all__ = [
    "SCHEMA_VERSION",
    "document_to_model",
    "expr_from_json",
    "expr_to_json",
    "model_to_document",
    "parse_model",
    "write_model",
    "emit_lp",
    "emit_mps",
    "parse_canonical",
]
