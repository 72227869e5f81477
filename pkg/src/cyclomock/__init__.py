"""Exact evaluation of mock theta functions at odd roots of unity."""
from .exactfield import (
    CycloContext,
    CycloElement,
    DivisionByZero,
    abs_square,
    conjugate,
    cyclotomic_poly,
    embed_complex,
    inverse,
    make_context,
)
from .kernel import BACKEND

__version__ = "0.1.0"
