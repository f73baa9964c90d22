"""Amplitude dynamics in the single-excitation sector.

The state is ``Psi = [A, B, C~, D~]`` where ``C~ = exp(-i delta_c t) C`` and
``D~ = exp(-i delta_d t) D`` are the rotating-frame amplitudes of the two
auxiliary levels. It obeys ``i dPsi/dt = H_eff Psi`` with a constant
non-Hermitian ``H_eff``, so the exact solution is ``Psi(t) = U(t) Psi(0)``
with ``U(t) = exp(-i H_eff t)``.

The two RK4 integrators are cross-checks of that exact path only: one in the
rotating frame, one with the explicit time-dependent drive phases.

Transition probabilities follow the ``T_{target,source}`` convention:
``t_ab = |U[0, 1]|**2`` is the probability of going b -> a and
``t_ba = |U[1, 0]|**2`` of going a -> b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from ._parallel import ordered_map
from .errors import StepTooLarge, UnsortedTimes
from .model import SystemParams, total_flux, validate

LEVELS = "abcd"
MAX_STEP_PRODUCT = 0.1
ISOLATION_FLOOR = 1e-300


def basis_state(level: str) -> np.ndarray:
    """Unit amplitude on one of the levels ``a``, ``b``, ``c``, ``d``."""
    psi = np.zeros(4, dtype=complex)
    psi[LEVELS.index(level)] = 1.0
    return psi


def as_state(initial) -> np.ndarray:
    if isinstance(initial, str):
        return basis_state(initial)
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (4,):
        raise ValueError(f"state must have 4 amplitudes, got shape {psi.shape}")
    return psi


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 4): A, B, C~, D~

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    @property
    def norm(self) -> np.ndarray:
        return self.populations.sum(axis=1)


@dataclass(frozen=True)
class TransitionRecord:
    t: float
    t_ab: float
    t_ba: float
    isolation: float


def build_h_eff(params: SystemParams) -> np.ndarray:
    """Effective non-Hermitian Hamiltonian in the ``[A, B, C~, D~]`` basis."""
    p = validate(params)
    phase = np.exp(1j * total_flux(p).phi)
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = -0.5j * p.gamma_a
    h[1, 1] = -0.5j * p.gamma_b
    h[2, 2] = p.delta_c - 0.5j * p.gamma_c
    h[3, 3] = p.delta_d - 0.5j * p.gamma_d
    h[0, 2] = p.omega_ca * phase
    h[2, 0] = p.omega_ca * np.conj(phase)
    h[0, 3] = h[3, 0] = p.omega_da
    h[1, 2] = h[2, 1] = p.omega_cb
    h[1, 3] = h[3, 1] = p.omega_db
    return h


def propagator(params: SystemParams, t: float) -> np.ndarray:
    """``U(t) = exp(-i H_eff t)``."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return linalg.expm(-1j * build_h_eff(params), t)


def _check_times(times) -> np.ndarray:
    ts = np.asarray(times, dtype=float).ravel()
    if ts.size == 0:
        raise UnsortedTimes("time grid is empty")
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise UnsortedTimes("times must be finite and nonnegative")
    if np.any(np.diff(ts) <= 0):
        raise UnsortedTimes("times must be strictly increasing")
    return ts


def evolve(params: SystemParams, initial, times: Sequence[float]) -> Trajectory:
    """Exact propagation of ``initial`` to every requested time."""
    ts = _check_times(times)
    states = linalg.expm_many(-1j * build_h_eff(params), ts) @ as_state(initial)
    return Trajectory(ts, states)


# -- RK4 cross-checks -------------------------------------------------------

def _step_count(h_eff: np.ndarray, t_end: float, dt: float) -> tuple[int, float]:
    if not dt > 0 or t_end < 0:
        raise ValueError("need dt > 0 and t_end >= 0")
    largest = np.abs(h_eff).max()
    if dt * largest > MAX_STEP_PRODUCT:
        raise StepTooLarge(
            f"dt * max|H_eff| = {dt * largest:.3g} exceeds {MAX_STEP_PRODUCT}")
    n = math.ceil(t_end / dt - 1e-9)
    return n, (t_end / n if n else 0.0)


def _rk4(f, y0: np.ndarray, n: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    ys = np.empty((n + 1,) + y0.shape, dtype=complex)
    ys[0] = y0
    y = y0
    for i in range(n):
        t = i * h
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ys[i + 1] = y
    return np.arange(n + 1) * h, ys


def integrate_rotating(params: SystemParams, initial, t_end: float, dt: float) -> Trajectory:
    """Fixed-step RK4 on the constant-coefficient rotating-frame equations.

    The step is shrunk so that an integer number of steps lands on ``t_end``.
    """
    h_eff = build_h_eff(params)
    n, h = _step_count(h_eff, t_end, dt)
    gen = -1j * h_eff
    times, states = _rk4(lambda t, y: gen @ y, as_state(initial), n, h)
    return Trajectory(times, states)


def integrate_lab(params: SystemParams, initial, t_end: float, dt: float) -> Trajectory:
    """Fixed-step RK4 on the lab-frame equations with explicit drive phases.

    The auxiliary amplitudes are carried as ``C``, ``D`` and converted to
    ``C~ = exp(-i delta_c t) C``, ``D~ = exp(-i delta_d t) D`` on output, so the
    result is directly comparable with :func:`evolve`.
    """
    p = validate(params)
    h_eff = build_h_eff(p)
    n, h = _step_count(h_eff, t_end, dt)
    flux = np.exp(1j * total_flux(p).phi)
    ga, gb, gc, gd = p.gamma_a / 2, p.gamma_b / 2, p.gamma_c / 2, p.gamma_d / 2
    dc, dd = p.delta_c, p.delta_d

    def rhs(t, y):
        a, b, c, d = y
        ec = np.exp(-1j * dc * t)
        ed = np.exp(-1j * dd * t)
        return np.array([
            -ga * a - 1j * p.omega_ca * flux * ec * c - 1j * p.omega_da * ed * d,
            -gb * b - 1j * p.omega_cb * ec * c - 1j * p.omega_db * ed * d,
            -gc * c - 1j * p.omega_ca * np.conj(flux) * np.conj(ec) * a
            - 1j * p.omega_cb * np.conj(ec) * b,
            -gd * d - 1j * p.omega_da * np.conj(ed) * a - 1j * p.omega_db * np.conj(ed) * b,
        ])

    times, states = _rk4(rhs, as_state(initial), n, h)
    states[:, 2] *= np.exp(-1j * dc * times)
    states[:, 3] *= np.exp(-1j * dd * times)
    return Trajectory(times, states)


# -- transition probabilities ----------------------------------------------

def _record(u: np.ndarray, t: float) -> TransitionRecord:
    t_ab = float(abs(u[0, 1]) ** 2)
    t_ba = float(abs(u[1, 0]) ** 2)
    isolation = math.inf if t_ba < ISOLATION_FLOOR else t_ab / t_ba
    return TransitionRecord(float(t), t_ab, t_ba, isolation)


def transition_probabilities(params: SystemParams, t: float) -> TransitionRecord:
    """b -> a (``t_ab``) and a -> b (``t_ba``) probabilities and their ratio.

    At ``t = 0`` both probabilities vanish and the isolation is reported as
    ``inf`` (the a -> b probability is below the 1e-300 floor).
    """
    return _record(propagator(params, t), t)


def sweep_flux(params: SystemParams, phis: Sequence[float], t: float) -> list[TransitionRecord]:
    """Transition records at fixed ``t`` for each total flux in ``phis``."""
    validate(params)
    return ordered_map(lambda phi: transition_probabilities(params.with_flux(phi), t), list(phis))
