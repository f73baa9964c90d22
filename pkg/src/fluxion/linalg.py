"""Dense complex 4x4 linear algebra: matrix exponential and linear solve.

Both routines are written out here instead of delegating to LAPACK so that
their numerical contracts (backward error of the exponential, pivot threshold
of the solver) are explicit and testable.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonFiniteInput, SingularMatrix

DIM = 4
PIVOT_TOL = 1e-14

# Pade coefficients b_0..b_m and backward-error thresholds theta_m for the
# [m/m] approximant of exp (Higham, 2005).
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape[-2:] != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput("matrix has non-finite entries")
    return a


def _pade_uv(a: np.ndarray, m: int):
    b = _PADE[m]
    ident = np.eye(DIM, dtype=complex)
    a2 = a @ a
    if m < 13:
        powers = [ident, a2]
        for _ in range(2, (m + 1) // 2):
            powers.append(powers[-1] @ a2)
        u = sum(b[2 * k + 1] * p for k, p in enumerate(powers))
        v = sum(b[2 * k] * p for k, p in enumerate(powers))
        return a @ u, v
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def _degree_and_squarings(norm: float) -> tuple[int, int]:
    for deg in (3, 5, 7, 9):
        if norm <= _THETA[deg]:
            return deg, 0
    return 13, (max(0, math.ceil(math.log2(norm / _THETA[13]))) if norm > 0 else 0)


def expm(m, scale: float = 1.0) -> np.ndarray:
    """Return ``exp(scale * m)`` for a complex 4x4 matrix.

    Scaling and squaring with a diagonal Pade approximant whose degree
    (3, 5, 7, 9 or 13) is picked from the 1-norm of ``scale * m``; beyond the
    degree-13 threshold the matrix is halved ``s`` times and the result
    squared back.
    """
    if not math.isfinite(scale):
        raise NonFiniteInput(f"scale is not finite ({scale!r})")
    a = _as_matrix(m) * scale
    if a.ndim != 2:
        raise ValueError("expm takes a single matrix")
    return _expm_scaled(a, *_degree_and_squarings(np.abs(a).sum(axis=0).max()))


def _expm_scaled(a: np.ndarray, deg: int, s: int) -> np.ndarray:
    u, v = _pade_uv(a / 2.0**s, deg)
    r = _lu_solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def expm_many(m, scales) -> np.ndarray:
    """``exp(scale * m)`` for every entry of ``scales``, shape (len(scales), 4, 4).

    Same algorithm as :func:`expm`; scales sharing a Pade degree and squaring
    count are evaluated together.
    """
    base = _as_matrix(m)
    if base.ndim != 2:
        raise ValueError("expm_many takes a single matrix")
    ts = np.asarray(scales, dtype=float).ravel()
    if not np.all(np.isfinite(ts)):
        raise NonFiniteInput("scales must be finite")
    scaled = base[None] * ts[:, None, None]
    norms = np.abs(scaled).sum(axis=1).max(axis=1)
    plans = np.array([_degree_and_squarings(float(n)) for n in norms]).reshape(-1, 2)
    out = np.empty((ts.size, DIM, DIM), dtype=complex)
    for deg, s in np.unique(plans, axis=0):
        idx = np.flatnonzero((plans[:, 0] == deg) & (plans[:, 1] == s))
        out[idx] = _expm_scaled(scaled[idx], int(deg), int(s))
    return out


def _lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting, batched over leading axes.

    ``a`` has shape (..., 4, 4) and ``b`` shape (..., 4, k).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    batch = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    a = np.broadcast_to(a, batch + a.shape[-2:]).copy()
    b = np.broadcast_to(b, batch + b.shape[-2:]).copy()

    scale = np.abs(a).max(axis=(-2, -1))
    threshold = PIVOT_TOL * scale
    worst = np.full(batch, np.inf)
    for k in range(DIM):
        col = np.abs(a[..., k:, k])
        p = col.argmax(axis=-1) + k
        pivot_mag = np.take_along_axis(col, (p - k)[..., None], axis=-1)[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            worst = np.minimum(worst, np.where(scale > 0, pivot_mag / scale, 0.0))
        if np.any(pivot_mag <= threshold) or np.any(scale == 0):
            ratio = float(np.min(worst))
            raise SingularMatrix(
                f"pivot {k} below {PIVOT_TOL:g} x max entry (ratio {ratio:.3e})", ratio)
        if np.any(p != k):
            idx = p[..., None]
            row_a = np.take_along_axis(a, idx[..., None], axis=-2)
            row_b = np.take_along_axis(b, idx[..., None], axis=-2)
            cur_a = a[..., k:k + 1, :].copy()
            cur_b = b[..., k:k + 1, :].copy()
            np.put_along_axis(a, idx[..., None], cur_a, axis=-2)
            np.put_along_axis(b, idx[..., None], cur_b, axis=-2)
            a[..., k:k + 1, :] = row_a
            b[..., k:k + 1, :] = row_b
        factors = a[..., k + 1:, k:k + 1] / a[..., k:k + 1, k:k + 1]
        a[..., k + 1:, :] -= factors * a[..., k:k + 1, :]
        b[..., k + 1:, :] -= factors * b[..., k:k + 1, :]

    x = np.empty_like(b)
    for k in range(DIM - 1, -1, -1):
        acc = b[..., k, :] - np.einsum("...j,...jc->...c", a[..., k, k + 1:], x[..., k + 1:, :])
        x[..., k, :] = acc / a[..., k, k][..., None]
    return x


def solve(m, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs`` for complex 4x4 ``m``.

    Leading batch axes are allowed on either argument (shapes ``(..., 4, 4)``
    and ``(..., 4)``), which lets a whole frequency grid be solved at once.

    Raises
    ------
    SingularMatrix
        Some pivot magnitude falls below ``1e-14`` times the largest entry
        magnitude of its matrix.
    """
    a = _as_matrix(m)
    b = np.asarray(rhs, dtype=complex)
    if b.shape[-1:] != (DIM,):
        raise ValueError(f"expected a length-{DIM} right-hand side, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise NonFiniteInput("right-hand side has non-finite entries")
    return _lu_solve(a, b[..., None])[..., 0]


def condition_number(m) -> float:
    """1-norm condition number, via the solver's own inverse."""
    a = _as_matrix(m)
    inv = _lu_solve(a, np.eye(DIM, dtype=complex))
    return float(np.abs(a).sum(axis=0).max() * np.abs(inv).sum(axis=0).max())
