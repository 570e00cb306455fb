"""Exact construction and certification of a 2^{m+2}-2 class symmetric association scheme over GF(2^m)."""

import logging

from .construct import InvariantViolation, Scheme, build_scheme
from .field import FieldSpec
from .fusion import fusion_run
from .latin import LatinSquare, build_latin
from .spectra import SpectralData, spectral_data
from .verify import VerificationReport, intersection_numbers

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "FieldSpec",
    "InvariantViolation",
    "LatinSquare",
    "Scheme",
    "SpectralData",
    "VerificationReport",
    "build_latin",
    "build_scheme",
    "fusion_run",
    "intersection_numbers",
    "spectral_data",
]
