"""Alpha spectra, diversity prediction, correlated-subcarrier PEP degree and PEP Monte Carlo."""

from .correlated import (
    CorrelatedPepSpec,
    closed_form_degree,
    correlated_pep_bound,
    correlated_pep_degree,
    smallest_degree_oracle,
    snr_offset,
)
from .diversity import (
    DiversityReport,
    diversity_of,
    full_diversity_condition,
    full_diversity_condition_unequal,
    max_achievable_diversity,
)
from .pep import PepCurve, estimate_slope, pep_expectation_mc
from .spectra import AlphaSpectrum, enumerate_alpha_spectra, event_supports

__all__ = [
    "AlphaSpectrum",
    "CorrelatedPepSpec",
    "DiversityReport",
    "PepCurve",
    "closed_form_degree",
    "correlated_pep_bound",
    "correlated_pep_degree",
    "diversity_of",
    "enumerate_alpha_spectra",
    "estimate_slope",
    "event_supports",
    "full_diversity_condition",
    "full_diversity_condition_unequal",
    "max_achievable_diversity",
    "pep_expectation_mc",
    "smallest_degree_oracle",
    "snr_offset",
]
