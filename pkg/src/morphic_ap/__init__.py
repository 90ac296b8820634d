"""Decide almost periodicity of pure morphic and automatic sequences."""

from .automatic import DeciderConfig, decide_automatic
from .errors import (
    ConsistencyError,
    InputDomainError,
    MorphicError,
    PreconditionError,
    ResourceLimitError,
    SpecParseError,
    UnsupportedInputError,
)
from .growth import classify_letters
from .oracle import ap_evidence, generate_prefix
from .pure import Decision, Verdict, decide_binary, decide_pure_nonerasing
from .runner import decide
from .specfile import parse_spec, serialize_spec
from .words import Coding, Morphism

__version__ = "0.1.0"

__all__ = [
    "Coding",
    "ConsistencyError",
    "Decision",
    "DeciderConfig",
    "InputDomainError",
    "Morphism",
    "MorphicError",
    "PreconditionError",
    "ResourceLimitError",
    "SpecParseError",
    "UnsupportedInputError",
    "Verdict",
    "ap_evidence",
    "classify_letters",
    "decide",
    "decide_automatic",
    "decide_binary",
    "decide_pure_nonerasing",
    "generate_prefix",
    "parse_spec",
    "serialize_spec",
]
