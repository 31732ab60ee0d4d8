"""Bound states of short-range hyperbolic potentials via partitioned power series."""

from ._hyperbound import (
    GridConfig,
    MatchResult,
    PotentialSpec,
    detect_termination,
    evaluate_potential,
    find_spectrum,
    numerov_eigenfunction,
    numerov_spectrum,
    parity_split,
    partition_dimension,
    phat_conjugate,
    qmatrix_window,
    secular_determinant,
    wavefunction,
    __version__,
)

__all__ = [
    "GridConfig",
    "MatchResult",
    "PotentialSpec",
    "detect_termination",
    "evaluate_potential",
    "find_spectrum",
    "numerov_eigenfunction",
    "numerov_spectrum",
    "parity_split",
    "partition_dimension",
    "phat_conjugate",
    "qmatrix_window",
    "secular_determinant",
    "wavefunction",
    "__version__",
]
