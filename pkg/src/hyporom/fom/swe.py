"""Shallow water equations with bathymetry and Manning friction.

    h_t + q_x = 0
    q_t + (q^2/h + g h^2/2)_x = -g h z_x - g n_b^2 q|q| / h^(7/3)

Two first-order schemes, both exactly well-balanced for water at rest
(u = 0, eta = h + z constant): a PVM-0 flux whose viscosity acts on the
free surface eta, and the HLL flux with per-interface fan coefficients.
Free boundaries replicate (h, q, z) into the ghost cells, which is the
stationary extension of a lake-at-rest edge state.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import (DegenerateWaveFan, NonFiniteState, NonPositiveDepth,
                      UnsupportedSystem)
from ..fluxes import FluxChoice, pvm0_constant
from ..grid import Grid1D

_FAN_TOL = 1e-12


def flat_bottom(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class SweParams:
    g: float = 9.81
    n_b: float = 0.0
    nu: float = 0.9
    bathymetry: Callable = flat_bottom

    def __post_init__(self):
        if self.g <= 0.0:
            raise ValueError("gravity must be positive")
        if self.n_b < 0.0:
            raise ValueError("Manning coefficient must be >= 0")
        if not 0.0 < self.nu <= 1.0:
            raise ValueError("nu must lie in (0, 1]")


@dataclass
class SweState:
    h: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        self.q = np.asarray(self.q, dtype=float)
        if self.h.shape != self.q.shape:
            raise ValueError("h and q must have the same shape")


def lake_at_rest(params: SweParams, grid: Grid1D, eta: float = 0.0) -> SweState:
    """Water-at-rest state with free surface eta over the given bathymetry."""
    z = params.bathymetry(grid.centers)
    h = eta - z
    if np.any(h <= 0.0):
        raise NonPositiveDepth("lake-at-rest surface lies below the bed somewhere")
    return SweState(h=h, q=np.zeros_like(h))


def _check_state(state: SweState) -> None:
    if not (np.all(np.isfinite(state.h)) and np.all(np.isfinite(state.q))):
        raise NonFiniteState("SWE state contains NaN/Inf")
    if np.any(state.h <= 0.0):
        raise NonPositiveDepth("water depth must be positive everywhere")


def swe_max_speed(state: SweState, params: SweParams) -> float:
    _check_state(state)
    u = state.q / state.h
    c = np.sqrt(params.g * state.h)
    return float(np.max(np.abs(u) + c))


def froude_number(state: SweState, params: SweParams) -> np.ndarray:
    """Diagnostic |u|/c per cell; no regime switching anywhere in the schemes."""
    _check_state(state)
    u = state.q / state.h
    return np.abs(u) / np.sqrt(params.g * state.h)


def roe_averages(h_l, h_r, u_l, u_r):
    """Interface Roe averages (h_tilde, u_tilde); accepts scalars or arrays."""
    h_l = np.asarray(h_l, dtype=float)
    h_r = np.asarray(h_r, dtype=float)
    if np.any(h_l <= 0.0) or np.any(h_r <= 0.0):
        raise NonPositiveDepth("Roe average requires positive depths")
    sl = np.sqrt(h_l)
    sr = np.sqrt(h_r)
    h_tilde = 0.5 * (h_l + h_r)
    u_tilde = (sr * np.asarray(u_r) + sl * np.asarray(u_l)) / (sr + sl)
    return h_tilde, u_tilde


def hll_coeffs(s_l, s_r):
    """PVM degree-1 coefficients (alpha0, alpha1) of the HLL fan (S_L, S_R)."""
    s_l = np.asarray(s_l, dtype=float)
    s_r = np.asarray(s_r, dtype=float)
    gap = s_r - s_l
    scale = np.maximum(1.0, np.maximum(np.abs(s_l), np.abs(s_r)))
    if np.any(gap < _FAN_TOL * scale):
        raise DegenerateWaveFan("HLL wave speeds are not separated")
    a0 = (s_r * np.abs(s_l) - s_l * np.abs(s_r)) / gap
    a1 = (np.abs(s_r) - np.abs(s_l)) / gap
    if np.isscalar(s_l) or s_l.ndim == 0:
        return float(a0), float(a1)
    return a0, a1


def davis_speeds(h_l, h_r, u_l, u_r, g):
    """Davis-type fan estimates using the one-sided and Roe speeds."""
    c_l = np.sqrt(g * np.asarray(h_l, dtype=float))
    c_r = np.sqrt(g * np.asarray(h_r, dtype=float))
    h_t, u_t = roe_averages(h_l, h_r, u_l, u_r)
    c_t = np.sqrt(g * h_t)
    s_l = np.minimum(np.asarray(u_l) - c_l, u_t - c_t)
    s_r = np.maximum(np.asarray(u_r) + c_r, u_t + c_t)
    return s_l, s_r


def _padded(state: SweState, params: SweParams, grid: Grid1D):
    """Ghost-replicated h, q, z and derived u (ghosts replicate the edges)."""
    hg = np.concatenate(([state.h[0]], state.h, [state.h[-1]]))
    qg = np.concatenate(([state.q[0]], state.q, [state.q[-1]]))
    z = np.asarray(params.bathymetry(grid.centers), dtype=float)
    zg = np.concatenate(([z[0]], z, [z[-1]]))
    return hg, qg, zg


def interface_roe(state: SweState, params: SweParams, grid: Grid1D):
    """(h_tilde, u_tilde) at all n_cells+1 interfaces, ghosts replicated."""
    _check_state(state)
    hg, qg, _ = _padded(state, params, grid)
    ug = qg / hg
    return roe_averages(hg[:-1], hg[1:], ug[:-1], ug[1:])


def hll_interface_coeffs(state: SweState, params: SweParams, grid: Grid1D):
    """(alpha0, alpha1) at all n_cells+1 interfaces for the current state."""
    _check_state(state)
    hg, qg, _ = _padded(state, params, grid)
    ug = qg / hg
    s_l, s_r = davis_speeds(hg[:-1], hg[1:], ug[:-1], ug[1:], params.g)
    return hll_coeffs(s_l, s_r)


def _friction(state: SweState, params: SweParams, dt: float) -> np.ndarray:
    if params.n_b == 0.0:
        return np.zeros_like(state.q)
    return dt * params.g * params.n_b ** 2 * state.q * np.abs(state.q) \
        / state.h ** (7.0 / 3.0)


def _bed_slope(hg, zg, lam, g):
    # Centered path-conservative source: -(g dt / 4 dx) * sum of side terms.
    h = hg[1:-1]
    z = zg[1:-1]
    side = (hg[2:] + h) * (zg[2:] - z) + (h + hg[:-2]) * (z - zg[:-2])
    return -0.25 * g * lam * side


def swe_lf_step(state: SweState, params: SweParams, grid: Grid1D, dt: float,
                flux: FluxChoice = FluxChoice.MODIFIED_LAX_FRIEDRICHS
                ) -> SweState:
    """PVM-0 EWB step: the h-equation viscosity acts on eta = h + z."""
    if flux is FluxChoice.HLL:
        raise UnsupportedSystem("use swe_hll_step for the HLL flux")
    _check_state(state)
    dx = grid.dx
    lam = dt / dx
    g = params.g
    hg, qg, zg = _padded(state, params, grid)
    etag = hg + zg
    h, q = state.h, state.q

    if flux is FluxChoice.RUSANOV:
        ug = qg / hg
        h_t, u_t = roe_averages(hg[:-1], hg[1:], ug[:-1], ug[1:])
        a0 = np.abs(u_t) + np.sqrt(g * h_t)
    else:
        a0 = np.full(grid.n_cells + 1, pvm0_constant(flux, params.nu, dx, dt))

    eta_jump = etag[1:] - etag[:-1]
    q_jump = qg[1:] - qg[:-1]

    h_new = h - 0.5 * lam * (qg[2:] - qg[:-2]) \
        + 0.5 * lam * (a0[1:] * eta_jump[1:] - a0[:-1] * eta_jump[:-1])

    mom = qg * qg / hg + 0.5 * g * hg * hg
    q_new = q - 0.5 * lam * (mom[2:] - mom[:-2]) \
        + 0.5 * lam * (a0[1:] * q_jump[1:] - a0[:-1] * q_jump[:-1]) \
        + _bed_slope(hg, zg, lam, g) \
        - _friction(state, params, dt)

    out = SweState(h=h_new, q=q_new)
    if not (np.all(np.isfinite(out.h)) and np.all(np.isfinite(out.q))):
        raise NonFiniteState("SWE step produced NaN/Inf")
    if np.any(out.h <= 0.0):
        raise NonPositiveDepth("SWE step produced a non-positive depth")
    return out


def swe_hll_step(state: SweState, params: SweParams, grid: Grid1D,
                 dt: float) -> SweState:
    """HLL EWB step with per-interface fan coefficients."""
    _check_state(state)
    dx = grid.dx
    lam = dt / dx
    g = params.g
    hg, qg, zg = _padded(state, params, grid)
    etag = hg + zg
    h, q = state.h, state.q

    ug = qg / hg
    h_t, u_t = roe_averages(hg[:-1], hg[1:], ug[:-1], ug[1:])
    s_l, s_r = davis_speeds(hg[:-1], hg[1:], ug[:-1], ug[1:], g)
    a0, a1 = hll_coeffs(s_l, s_r)
    # Momentum weight of the degree-1 term applied to the eta jump.
    wgt = -u_t * u_t + g * h_t

    eta_jump = etag[1:] - etag[:-1]
    q_jump = qg[1:] - qg[:-1]

    h_new = h - 0.5 * lam * (qg[2:] - qg[:-2]) \
        + 0.5 * lam * (a0[1:] * eta_jump[1:] - a0[:-1] * eta_jump[:-1]) \
        + 0.5 * lam * (a1[1:] * q_jump[1:] - a1[:-1] * q_jump[:-1])

    mom = qg * qg / hg + 0.5 * g * hg * hg
    q_new = q - 0.5 * lam * (mom[2:] - mom[:-2]) \
        + 0.5 * lam * (a1[1:] * wgt[1:] * eta_jump[1:]
                       - a1[:-1] * wgt[:-1] * eta_jump[:-1]) \
        + 0.5 * lam * (a0[1:] * q_jump[1:] - a0[:-1] * q_jump[:-1]) \
        + lam * (a1[1:] * u_t[1:] * q_jump[1:]
                 - a1[:-1] * u_t[:-1] * q_jump[:-1]) \
        + _bed_slope(hg, zg, lam, g) \
        - _friction(state, params, dt)

    out = SweState(h=h_new, q=q_new)
    if not (np.all(np.isfinite(out.h)) and np.all(np.isfinite(out.q))):
        raise NonFiniteState("SWE step produced NaN/Inf")
    if np.any(out.h <= 0.0):
        raise NonPositiveDepth("SWE step produced a non-positive depth")
    return out
