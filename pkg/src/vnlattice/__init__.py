"""Entropy of quantum states on the phase-space lattice.

Cell-averaged coherent-plane probabilities p(m, n) turn a state into a
genuine discrete distribution over lattice cells of area 2*pi*hbar; this
package computes those probabilities (closed form for coherent states,
certified quadrature otherwise), the resulting lattice entropy, the
continuous Wehrl comparator, and the parameter studies built on top.
"""

from .analysis import (GradientReport, MinimizeResult, ProbeReport,
                       SweepRecord, SweepTable, VerificationReport, ZScanRecord,
                       conjecture_probe, default_probe_family,
                       entropy_of_coherent, gradient_wrt_z, minimize_over_c,
                       scan_z, sweep_c, verify_suite)
from .distribution import (LatticeDistribution, LatticeWindow,
                           averaged_prob_quadrature, build_distribution,
                           closed_form_prob, distribution_document,
                           orthonormality_integral, unaveraged_q)
from .entropy import (REFERENCE_LATTICE_MINIMUM, EntropyResult,
                      lattice_entropy, wehrl_entropy, wehrl_reference)
from .errors import (AnalysisError, DivergenceError, DomainError,
                     PrecisionError, UsageError, VnLatticeError)
from .lattice import (CellPoint, LatticeConfig, LatticeIndex,
                      alpha_of_phase_point, beta_of_cell_point, lattice_point)
from .numerics import (QuadratureRule, entropy_term, erf_interval,
                       gauss_legendre)
from .states import (CoherentParam, DensityMatrix, FockState, StateSpec,
                     coherent_amplitude, fock_expand_coherent, husimi_centroid,
                     husimi_q, load_density_matrix, make_cat_state,
                     parse_state_spec)

__version__ = "0.1.0"

__all__ = [
    "AnalysisError", "CellPoint", "CoherentParam", "DensityMatrix",
    "DivergenceError", "DomainError", "EntropyResult", "FockState",
    "GradientReport", "LatticeConfig", "LatticeDistribution", "LatticeIndex",
    "LatticeWindow", "MinimizeResult", "PrecisionError", "ProbeReport",
    "QuadratureRule", "REFERENCE_LATTICE_MINIMUM", "StateSpec", "SweepRecord",
    "SweepTable", "UsageError", "VerificationReport", "VnLatticeError",
    "ZScanRecord", "alpha_of_phase_point", "averaged_prob_quadrature",
    "beta_of_cell_point", "build_distribution", "closed_form_prob",
    "coherent_amplitude", "conjecture_probe", "default_probe_family",
    "distribution_document", "entropy_of_coherent", "entropy_term",
    "erf_interval", "fock_expand_coherent", "gauss_legendre",
    "gradient_wrt_z", "husimi_centroid", "husimi_q", "lattice_entropy",
    "lattice_point", "load_density_matrix", "make_cat_state",
    "minimize_over_c", "orthonormality_integral", "parse_state_spec",
    "scan_z", "sweep_c", "unaveraged_q", "verify_suite", "wehrl_entropy",
    "wehrl_reference",
]
