"""Workbench for short LDPC codes: construction, structure, decoding, spectra."""

from .codes import LinearCode
from .errors import BudgetExceeded, CapExceeded, DomainError, LdpcBenchError, ParseError
from .gf2 import BitMatrix

__version__ = "0.1.0"

__all__ = ["BitMatrix", "LinearCode", "LdpcBenchError", "ParseError", "DomainError",
           "BudgetExceeded", "CapExceeded"]
