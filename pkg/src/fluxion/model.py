"""Physical parameter set of the cyclic four-level system.

Units
-----
Every frequency, rate and detuning is dimensionless, measured in units of a
reference decay rate ``gamma_ref`` (the canonical choice is ``gamma_ref =
gamma_a``). Times are in units of ``1 / gamma_ref``.

Drive frequencies are not stored. A drive between levels ``i`` and ``j``
enters only through its detuning, so the lab-frame frequency can be recovered
as ``nu_ij = omega_ij - delta_ij`` if needed.

The level-to-ground frequencies ``omega_ag .. omega_dg`` are offsets from an
arbitrary origin; only their differences matter.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import ConfigError, NegativeRabi, NonFiniteField, NonPositiveDecay

RABI_FIELDS = ("omega_ca", "omega_cb", "omega_da", "omega_db")
PHASE_FIELDS = ("phi_ca", "phi_cb", "phi_da", "phi_db")
DETUNING_FIELDS = ("delta_c", "delta_d")
DECAY_FIELDS = ("gamma_a", "gamma_b", "gamma_c", "gamma_d")
LEVEL_FIELDS = ("omega_ag", "omega_bg", "omega_cg", "omega_dg")


@dataclass(frozen=True)
class SystemParams:
    """Rabi amplitudes, drive phases, detunings, decay rates and level offsets.

    Defaults are the symmetric parameter set used throughout (decay rates
    1, 1, 100, 100; all Rabi frequencies 10; detunings +50 / -50; zero flux).
    """

    omega_ca: float = 10.0
    omega_cb: float = 10.0
    omega_da: float = 10.0
    omega_db: float = 10.0
    phi_ca: float = 0.0
    phi_cb: float = 0.0
    phi_da: float = 0.0
    phi_db: float = 0.0
    delta_c: float = 50.0
    delta_d: float = -50.0
    gamma_a: float = 1.0
    gamma_b: float = 1.0
    gamma_c: float = 100.0
    gamma_d: float = 100.0
    omega_ag: float = 0.0
    omega_bg: float = 0.0
    omega_cg: float = 0.0
    omega_dg: float = 0.0

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SystemParams":
        """Build from a flat mapping; unknown keys are rejected."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown parameter field(s): {', '.join(unknown)}", unknown[0])
        values = {}
        for key, value in data.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{key} must be a number, got {value!r}", key)
            values[key] = float(value)
        return cls(**values)

    def to_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @property
    def flux(self) -> float:
        return total_flux(self).phi

    def with_flux(self, phi: float) -> "SystemParams":
        """Return a copy whose whole loop phase sits on the a-c link."""
        return dataclasses.replace(self, phi_ca=float(phi), phi_cb=0.0, phi_da=0.0, phi_db=0.0)

    def replace(self, **changes: float) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SyntheticFlux:
    """Total drive phase around the a -> d -> b -> c -> a loop, in (-pi, pi]."""

    phi: float


def reduce_phase(phi: float) -> float:
    """Map an angle onto (-pi, pi]."""
    r = math.remainder(phi, 2.0 * math.pi)
    # remainder() returns values in [-pi, pi]; -pi belongs to the other end
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def validate(params: SystemParams) -> SystemParams:
    """Check the parameter invariants and return ``params`` unchanged.

    Raises
    ------
    NonFiniteField
        Any field is NaN or infinite.
    NonPositiveDecay
        Any decay rate is zero or negative.
    NegativeRabi
        Any Rabi frequency is negative.
    """
    for f in dataclasses.fields(params):
        value = getattr(params, f.name)
        if not math.isfinite(value):
            raise NonFiniteField(f"{f.name} is not finite ({value!r})", f.name)
    for name in DECAY_FIELDS:
        if getattr(params, name) <= 0.0:
            raise NonPositiveDecay(f"{name} must be > 0, got {getattr(params, name)!r}", name)
    for name in RABI_FIELDS:
        if getattr(params, name) < 0.0:
            raise NegativeRabi(f"{name} must be >= 0, got {getattr(params, name)!r}", name)
    return params


def total_flux(params: SystemParams) -> SyntheticFlux:
    """Gauge-invariant sum of the four drive phases, reduced to (-pi, pi]."""
    raw = params.phi_ca + params.phi_db + params.phi_cb + params.phi_da
    return SyntheticFlux(reduce_phase(raw))
