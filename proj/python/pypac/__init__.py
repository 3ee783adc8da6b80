"""Probabilistic actual causes in Markov chains."""

from ._pypac import (
    DecodeError,
    Dtmc,
    GuardExceeded,
    QueryError,
    SyntaxError,
    ValidationError,
    abstraction,
    check_cause,
    decode_smt,
    discover,
    export_smt,
    generate,
    load_model,
    oracle_discover,
    parse_model,
    refine,
    subgraphs,
)

__all__ = [
    "DecodeError",
    "Dtmc",
    "GuardExceeded",
    "QueryError",
    "SyntaxError",
    "ValidationError",
    "abstraction",
    "check_cause",
    "decode_smt",
    "discover",
    "export_smt",
    "generate",
    "load_model",
    "oracle_discover",
    "parse_model",
    "refine",
    "subgraphs",
]
