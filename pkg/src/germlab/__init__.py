"""Exact calculus of contracting germs, Dloussky sequences and their moduli."""

__version__ = "0.1.0"

from .cyclotomic import CyclotomicNumber, approx_complex, field_invert, make_root_of_unity, promote
from .germ import (
    ContractingGerm,
    GermType,
    compose,
    compose_all,
    decompose,
    germ_type,
    make_germ,
    purify,
    validate_germ,
)
from .fgroup import FGNormalForm, fg_to_germ, fg_type, germ_to_fg, make_fg, tau_d
from .blowup import dloussky_sequence, dual_graph, parse_dls, simple_dls

__all__ = [
    "CyclotomicNumber",
    "ContractingGerm",
    "FGNormalForm",
    "GermType",
    "approx_complex",
    "compose",
    "compose_all",
    "decompose",
    "dloussky_sequence",
    "dual_graph",
    "fg_to_germ",
    "fg_type",
    "field_invert",
    "germ_to_fg",
    "germ_type",
    "make_fg",
    "make_germ",
    "make_root_of_unity",
    "parse_dls",
    "promote",
    "purify",
    "simple_dls",
    "tau_d",
    "validate_germ",
]
