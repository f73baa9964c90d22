"""Closed-form results of adiabatically eliminating the fast levels c and d.

Valid when ``min(gamma_c, gamma_d)`` dominates every other rate and Rabi
frequency; :attr:`AdiabaticReport.validity` is that ratio (small is good).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import ZeroRabiProduct
from .model import SystemParams, reduce_phase, total_flux, validate

UNIT_MODULUS_TOL = 1e-9
VALIDITY_WARN = 0.1


@dataclass(frozen=True)
class AdiabaticReport:
    gamma_a_eff: float
    gamma_b_eff: float
    delta_a_eff: float
    delta_b_eff: float
    j_ab: complex
    j_ba: complex
    t_m: float
    t_m_a_to_b: float
    t_m_b_to_a: float
    optimal_phis: list[float] = field(default_factory=list)
    validity: float = 0.0

    @property
    def adiabatic_ok(self) -> bool:
        return self.validity <= VALIDITY_WARN


def _lorentz_weights(params: SystemParams) -> tuple[float, float, float, float]:
    p = params
    lc = 4.0 / (4.0 * p.delta_c**2 + p.gamma_c**2)
    ld = 4.0 / (4.0 * p.delta_d**2 + p.gamma_d**2)
    return lc * p.gamma_c, ld * p.gamma_d, lc * p.delta_c, ld * p.delta_d


def effective_rates(params: SystemParams) -> tuple[float, float, float, float]:
    """``(gamma_a_eff, gamma_b_eff, delta_a_eff, delta_b_eff)``."""
    p = params
    wc, wd, sc, sd = _lorentz_weights(p)
    gamma_a_eff = p.gamma_a + wc * p.omega_ca**2 + wd * p.omega_da**2
    gamma_b_eff = p.gamma_b + wc * p.omega_cb**2 + wd * p.omega_db**2
    delta_a_eff = -sc * p.omega_ca**2 - sd * p.omega_da**2
    delta_b_eff = -sc * p.omega_cb**2 - sd * p.omega_db**2
    return gamma_a_eff, gamma_b_eff, delta_a_eff, delta_b_eff


def couplings(params: SystemParams) -> tuple[complex, complex]:
    """Directional effective couplings ``(J_ab, J_ba)``.

    ``J_ab`` drives b -> a (it multiplies B in dA/dt); ``J_ba`` drives a -> b.
    """
    p = params
    phi = total_flux(p).phi
    via_c = p.omega_ca * p.omega_cb / complex(p.gamma_c / 2, p.delta_c)
    via_d = p.omega_da * p.omega_db / complex(p.gamma_d / 2, p.delta_d)
    return via_c * cmath.exp(1j * phi) + via_d, via_c * cmath.exp(-1j * phi) + via_d


def optimal_flux(params: SystemParams) -> list[float]:
    """Flux values at which one of the couplings vanishes.

    Solves ``exp(+-i Phi) = R`` with
    ``R = -(2i delta_c + gamma_c) / (2i delta_d + gamma_d) * (Omega_da Omega_db) / (Omega_ca Omega_cb)``.
    A real solution needs ``|R| = 1`` (to 1e-9); otherwise the list is empty.
    ``+arg R`` nulls ``J_ab`` and ``-arg R`` nulls ``J_ba``; results are sorted.
    """
    p = validate(params)
    product_c = p.omega_ca * p.omega_cb
    if product_c == 0.0:
        raise ZeroRabiProduct("omega_ca * omega_cb = 0: the a-c-b path carries no flux")
    ratio = -(complex(p.gamma_c, 2 * p.delta_c) / complex(p.gamma_d, 2 * p.delta_d)
              * (p.omega_da * p.omega_db) / product_c)
    if abs(abs(ratio) - 1.0) > UNIT_MODULUS_TOL:
        return []
    theta = cmath.phase(ratio)
    phis = {reduce_phase(theta), reduce_phase(-theta)}
    return sorted(phis)


def adiabatic_report(params: SystemParams) -> AdiabaticReport:
    p = validate(params)
    gamma_a_eff, gamma_b_eff, delta_a_eff, delta_b_eff = effective_rates(p)
    j_ab, j_ba = couplings(p)
    try:
        phis = optimal_flux(p)
    except ZeroRabiProduct:
        phis = []
    validity = max(p.gamma_a, p.gamma_b, p.omega_ca, p.omega_cb, p.omega_da, p.omega_db) / min(
        p.gamma_c, p.gamma_d)
    return AdiabaticReport(
        gamma_a_eff=gamma_a_eff,
        gamma_b_eff=gamma_b_eff,
        delta_a_eff=delta_a_eff,
        delta_b_eff=delta_b_eff,
        j_ab=j_ab,
        j_ba=j_ba,
        t_m=2.0 / gamma_b_eff,
        t_m_a_to_b=2.0 / gamma_b_eff,
        t_m_b_to_a=2.0 / gamma_a_eff,
        optimal_phis=phis,
        validity=validity,
    )


Direction = Literal["a_to_b", "b_to_a"]


def analytic_transition(params: SystemParams, t: float, direction: Direction) -> float:
    """Adiabatic approximation ``|J t exp(-(gamma_eff/2 + i delta_eff) t)|**2``.

    ``a_to_b`` uses ``J_ba`` with level b's effective rate; ``b_to_a`` uses
    ``J_ab`` with level a's.
    """
    p = validate(params)
    gamma_a_eff, gamma_b_eff, _, _ = effective_rates(p)
    j_ab, j_ba = couplings(p)
    if direction == "a_to_b":
        j, g = j_ba, gamma_b_eff
    elif direction == "b_to_a":
        j, g = j_ab, gamma_a_eff
    else:
        raise ValueError(f"unknown direction {direction!r}")
    # the detuning only contributes a phase
    return abs(j) ** 2 * t * t * math.exp(-g * t)


def peak_transition(params: SystemParams) -> tuple[float, float, float]:
    """``(t_M, T_ab(t_M), T_ba(t_M))`` from the adiabatic closed forms.

    Each direction is evaluated at its own peak time ``2 / gamma_eff`` where
    the value is ``|(2/e) J / gamma_eff|**2``; ``t_M`` itself is ``2 / gamma_b_eff``.
    """
    r = adiabatic_report(params)
    t_ab_peak = abs(2.0 / math.e * r.j_ab / r.gamma_a_eff) ** 2
    t_ba_peak = abs(2.0 / math.e * r.j_ba / r.gamma_b_eff) ** 2
    return r.t_m, t_ab_peak, t_ba_peak
