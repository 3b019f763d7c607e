"""Spectral branch tracking and exceptional-point detection for
pseudo-Hermitian matrix families."""

from ._kreinspec import (
    AmbiguityError,
    Error,
    InvalidInput,
    ToyParams,
    assemble_h4,
    blowup_path,
    char_coeffs,
    dense_eigs,
    dynamo_spectrum,
    jordan_structure,
    poly_roots,
    quartic_discriminant,
    run,
    squire_spectrum,
    triple_root_params,
    two_by_two_eigs,
    version,
)

__version__ = version()

__all__ = [
    "AmbiguityError",
    "Error",
    "InvalidInput",
    "ToyParams",
    "assemble_h4",
    "blowup_path",
    "char_coeffs",
    "dense_eigs",
    "dynamo_spectrum",
    "jordan_structure",
    "poly_roots",
    "quartic_discriminant",
    "run",
    "squire_spectrum",
    "triple_root_params",
    "two_by_two_eigs",
    "version",
]
