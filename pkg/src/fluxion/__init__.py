"""Nonreciprocal transitions in a cyclic four-level atom.

Exact non-Hermitian propagation, adiabatic-elimination closed forms and
Laplace-domain spontaneous-emission spectra for four upper levels a, b, c, d
coupled around a loop by drives whose total phase acts as a synthetic flux.
"""

from .adiabatic import AdiabaticReport, adiabatic_report, analytic_transition, peak_transition
from .dynamics import (
    Trajectory,
    TransitionRecord,
    build_h_eff,
    evolve,
    integrate_lab,
    integrate_rotating,
    propagator,
    sweep_flux,
    transition_probabilities,
)
from .model import SyntheticFlux, SystemParams, total_flux, validate
from .spectrum import (
    Spectrum,
    emission_amplitudes,
    emission_spectrum,
    integrated_spectrum,
    laplace_matrix,
    spectrum_flux_sweep,
    spectrum_time_domain_oracle,
)

__version__ = "0.1.0"
