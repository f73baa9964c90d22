"""Spontaneous-emission spectrum from Laplace-domain amplitudes.

With ``Psi_bar(s) = M(s)^-1 Psi(0)`` and ``M(s) = s I + i H_eff``, the photon
amplitude left in mode ``omega_k`` by level ``i`` is proportional to the
Laplace amplitude of that level evaluated at ``s_i = i (center_i - omega_k)``,
where the line centers are ``omega_ag``, ``omega_bg``, ``omega_cg - delta_c``
and ``omega_dg - delta_d`` (the shifts undo the rotating frame of C~, D~).
With a flat mode density the spectrum is

    S(omega_k) = sum_i gamma_i / (2 pi) * |Psi_bar_i(s_i)|**2

and integrates to the initial norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from ._parallel import ordered_map
from .dynamics import MAX_STEP_PRODUCT, as_state, build_h_eff
from .errors import NotConverged, StepTooLarge, UnsortedGrid
from .model import SystemParams, total_flux, validate

EXCITED_NORM_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    omegas: np.ndarray
    values: np.ndarray
    initial_state: np.ndarray
    flux: float


def laplace_matrix(params: SystemParams, s: complex) -> np.ndarray:
    """The 4x4 matrix ``M(s)`` with ``Psi_bar(s) = M(s)^-1 Psi(0)``."""
    p = validate(params)
    phi = total_flux(p).phi
    s = complex(s)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = s + p.gamma_a / 2
    m[1, 1] = s + p.gamma_b / 2
    m[2, 2] = s + complex(p.gamma_c / 2, p.delta_c)
    m[3, 3] = s + complex(p.gamma_d / 2, p.delta_d)
    m[0, 2] = 1j * (p.omega_ca * np.exp(1j * phi))
    m[2, 0] = 1j * (p.omega_ca * np.conj(np.exp(1j * phi)))
    m[0, 3] = m[3, 0] = 1j * p.omega_da
    m[1, 2] = m[2, 1] = 1j * p.omega_cb
    m[1, 3] = m[3, 1] = 1j * p.omega_db
    return m


def line_centers(params: SystemParams) -> np.ndarray:
    p = params
    return np.array([p.omega_ag, p.omega_bg, p.omega_cg - p.delta_c, p.omega_dg - p.delta_d])


def _amplitudes(params: SystemParams, psi0: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """Laplace amplitudes, shape (len(omegas), 4); column i at its own s_i."""
    ih = 1j * build_h_eff(params)
    eye = np.eye(4, dtype=complex)
    out = np.empty((omegas.size, 4), dtype=complex)
    if not np.any(psi0):
        out[:] = 0.0
        return out
    for i, center in enumerate(line_centers(params)):
        s = 1j * (center - omegas)
        m = s[:, None, None] * eye + ih
        out[:, i] = linalg.solve(m, psi0)[:, i]
    return out


def _weights(params: SystemParams) -> np.ndarray:
    p = params
    return np.array([p.gamma_a, p.gamma_b, p.gamma_c, p.gamma_d]) / (2.0 * math.pi)


def emission_amplitudes(params: SystemParams, initial, omega_k: float):
    """``(A_bar, B_bar, C~_bar, D~_bar)`` each at its own Laplace point.

    The coupling constants ``g_k^i`` are not included; they are folded into
    the decay-rate weights when the spectrum is assembled.
    """
    validate(params)
    amps = _amplitudes(params, as_state(initial), np.array([float(omega_k)]))[0]
    return tuple(complex(a) for a in amps)


def _spectrum_values(params, psi0, omegas: np.ndarray) -> np.ndarray:
    amps = _amplitudes(params, psi0, omegas)
    return (np.abs(amps) ** 2) @ _weights(params)


def _check_grid(omegas) -> np.ndarray:
    w = np.asarray(omegas, dtype=float).ravel()
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise UnsortedGrid("frequency grid must be nonempty and finite")
    if np.any(np.diff(w) <= 0):
        raise UnsortedGrid("frequency grid must be strictly increasing")
    return w


def emission_spectrum(params: SystemParams, initial, omegas: Sequence[float]) -> Spectrum:
    validate(params)
    w = _check_grid(omegas)
    psi0 = as_state(initial)
    return Spectrum(w, _spectrum_values(params, psi0, w), psi0, total_flux(params).phi)


def default_grid(params: SystemParams, lo: float = -50.0, hi: float = 150.0,
                 points: int = 2001) -> np.ndarray:
    """Uniform grid with ``lo`` and ``hi`` given as offsets from ``omega_ag``."""
    if not lo < hi or points < 2:
        raise UnsortedGrid("need lo < hi and at least two points")
    return params.omega_ag + np.linspace(lo, hi, points)


def spectrum_flux_sweep(params: SystemParams, initial, omega_k: float,
                        phis: Sequence[float]) -> list[tuple[float, float]]:
    validate(params)
    psi0 = as_state(initial)
    probe = np.array([float(omega_k)])

    def one(phi):
        return float(phi), float(_spectrum_values(params.with_flux(phi), psi0, probe)[0])

    return ordered_map(one, list(phis))


# -- norm conservation -----------------------------------------------------

def _feature_points(center: float, width: float, lo: float, hi: float) -> np.ndarray:
    """Dense uniform core around ``center`` plus geometrically spaced tails."""
    step = width / 20.0
    core = center + np.arange(-200, 201) * step
    reach = max(abs(lo - center), abs(hi - center))
    if reach > 10.0 * width:
        n_tail = int(math.ceil(math.log(reach / (10.0 * width)) / math.log(1.02))) + 1
        tail = 10.0 * width * 1.02 ** np.arange(1, n_tail + 1)
        core = np.concatenate([center - tail, core, center + tail])
    return core[(core >= lo) & (core <= hi)]


def _merged(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def windowed_integral(params: SystemParams, initial, halfwidth: float) -> float:
    """Trapezoidal integral of S over ``center_i +- halfwidth`` for each line.

    Sampling is refined around every spectral feature: a pole ``lambda`` of
    the resolvent puts a Lorentzian of full width ``-2 Im lambda`` at
    ``center_i + Re lambda`` in term ``i``.
    """
    psi0 = as_state(initial)
    centers = line_centers(params)
    # eigenvalues only steer the sampling density, never the integrand
    poles = np.linalg.eigvals(build_h_eff(params))
    total = 0.0
    for lo, hi in _merged([(c - halfwidth, c + halfwidth) for c in centers]):
        pts = [np.array([lo, hi])]
        for c in centers:
            for lam in poles:
                pts.append(_feature_points(c + lam.real, -2.0 * lam.imag, lo, hi))
        grid = np.unique(np.concatenate(pts))
        total += float(np.trapezoid(_spectrum_values(params, psi0, grid), grid))
    return total


def integrated_spectrum(params: SystemParams, initial, halfwidth: float = 40.0,
                        tol: float = 1e-3, max_doublings: int = 24) -> tuple[float, float]:
    """Integral of S over windows that double in size until it settles.

    Returns ``(integral, final_halfwidth)``. Stops once consecutive windows
    change the integral by less than ``tol``.
    """
    validate(params)
    prev = windowed_integral(params, initial, halfwidth)
    for _ in range(max_doublings):
        halfwidth *= 2.0
        cur = windowed_integral(params, initial, halfwidth)
        if abs(cur - prev) < tol:
            return cur, halfwidth
        prev = cur
    raise NotConverged(f"spectrum integral still changing at halfwidth {halfwidth:g}")


# -- time-domain oracle ----------------------------------------------------

def spectrum_time_domain_oracle(params: SystemParams, initial, omega_k, t_end: float,
                                dt: float):
    """S(omega_k) from direct RK4 integration of the photon amplitudes.

    Integrates the amplitude equations together with
    ``dG_i/dt = -i exp(-i (center_i - omega_k) t) Psi_i(t)`` (coupling
    constant divided out) up to ``t_end`` and assembles
    ``sum_i gamma_i / (2 pi) |G_i(t_end)|**2``. ``omega_k`` may be a scalar or
    an array of probe frequencies.

    The G equations do not feed back on the amplitudes, so the RK4 stage
    values of the amplitudes are computed first and the G increments summed
    in bulk; the arithmetic is the same as one RK4 run on the joint system.

    Raises
    ------
    NotConverged
        The excited-state norm at ``t_end`` is still above 1e-8.
    """
    validate(params)
    h_eff = build_h_eff(params)
    if not dt > 0 or not t_end > 0:
        raise ValueError("need dt > 0 and t_end > 0")
    if dt * np.abs(h_eff).max() > MAX_STEP_PRODUCT:
        raise StepTooLarge(f"dt * max|H_eff| = {dt * np.abs(h_eff).max():.3g} exceeds {MAX_STEP_PRODUCT}")
    n = math.ceil(t_end / dt - 1e-9)
    h = t_end / n
    psi0 = as_state(initial)
    probes = np.atleast_1d(np.asarray(omega_k, dtype=float))

    gen = -1j * h_eff
    eye = np.eye(4, dtype=complex)
    q2 = eye + 0.5 * h * gen
    q3 = eye + 0.5 * h * gen @ q2
    q4 = eye + h * gen @ q3
    step = eye + (h / 6.0) * gen @ (eye + 2.0 * q2 + 2.0 * q3 + q4)

    psi = np.empty((n + 1, 4), dtype=complex)
    psi[0] = psi0
    for i in range(n):
        psi[i + 1] = step @ psi[i]
    excited = float(np.sum(np.abs(psi[-1]) ** 2))
    if excited > EXCITED_NORM_TOL:
        raise NotConverged(f"excited norm {excited:.3e} at t_end={t_end:g} exceeds {EXCITED_NORM_TOL:g}")

    freq = line_centers(params)[None, :] - probes[:, None]  # (probe, level)
    g = np.zeros((probes.size, 4), dtype=complex)
    chunk = 8192
    for start in range(0, n, chunk):
        base = psi[start:min(start + chunk, n)]
        t0 = h * np.arange(start, start + base.shape[0])
        y = (base, base @ q2.T, base @ q3.T, base @ q4.T)
        ts = (t0, t0 + 0.5 * h, t0 + 0.5 * h, t0 + h)
        for coef, yj, tj in zip((1.0, 2.0, 2.0, 1.0), y, ts):
            phase = np.exp(-1j * tj[:, None, None] * freq[None, :, :])
            g += coef * np.einsum("tpl,tl->pl", phase, yj)
    g *= -1j * h / 6.0
    values = (np.abs(g) ** 2) @ _weights(params)
    return float(values[0]) if np.ndim(omega_k) == 0 else values
