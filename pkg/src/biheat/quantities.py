"""Monitor quantities, smooth cutoffs, and weighted energies.

Monitors: Q = |Lap u|^2, e = d^4 Q, b = t Q and their higher-order variants
Q_s, e_s, b_s built from the derivative-norm ladder.  The cutoff gamma is a
concrete C-infinity bump equal to 1 on B_rho and 0 outside B_{2rho}, with
its derivative constant c_gamma measured on an oversampled grid and stored
as a certificate (the downstream inequality constants all depend on it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .spectral import Grid, ScalarField, derivative_norms, integrate, iterated_laplacian, make_grid

MONITOR_KINDS = ("Q", "e", "b", "Q_s", "e_s", "b_s")


def dist_to_boundary(x):
    """d(x) = max(1 - |x|, 0): distance to the unit sphere, zero outside."""
    x_arr = np.asarray(x, dtype=float)
    if x_arr.ndim == 2 and x_arr.shape[-1] == 2:
        r = np.sqrt((x_arr**2).sum(axis=-1))
    else:
        r = np.abs(x_arr)
    d = np.maximum(1.0 - r, 0.0)
    return float(d) if np.ndim(x) == 0 else d


@dataclass(frozen=True)
class MonitorField:
    kind: str
    values: ScalarField
    s_order: int | None = None
    time: float | None = None


def _q_s_core(u: ScalarField, s_order: int) -> np.ndarray:
    """(sum_{i=1}^{s} |grad^{s+1-i} u|^{s/(s+1-i)})^{4/s}."""
    acc = np.zeros_like(u.values)
    for i in range(1, s_order + 1):
        order = s_order + 1 - i
        exponent = s_order / order
        acc += derivative_norms(u, order).values ** exponent
    return acc ** (4.0 / s_order)


def monitor(
    u: ScalarField,
    kind: str,
    t: float | None = None,
    s_order: int | None = None,
) -> MonitorField:
    if kind not in MONITOR_KINDS:
        raise ParameterError(f"kind: must be one of {MONITOR_KINDS}, got {kind!r}")
    if kind.endswith("_s"):
        if s_order is None or s_order < 2:
            raise ParameterError(f"s_order: s-kinds need s_order >= 2, got {s_order}")
        core = _q_s_core(u, s_order)
    else:
        if s_order is not None:
            raise ParameterError(f"s_order: only valid for s-kinds, got {s_order}")
        lap = iterated_laplacian(u, 1)
        core = lap.values**2
    if kind in ("b", "b_s"):
        if t is None or t <= 0:
            raise ParameterError(f"t: b-kinds need t > 0, got {t}")
        vals = t * core
    elif kind in ("e", "e_s"):
        d = dist_to_boundary(u.grid.coords())
        vals = d**4 * core
        t = None
    else:
        t = None
        vals = core
    return MonitorField(
        kind=kind,
        values=ScalarField(u.grid, vals, u.time_tag),
        s_order=s_order,
        time=t,
    )


# ---------------------------------------------------------------------------
# cutoff family


def bump_transition(r):
    """C-infinity step phi with phi = 0 for r <= 0 and phi = 1 for r >= 1,
    phi(r) = exp(-1/r) / (exp(-1/r) + exp(-1/(1-r))) in between."""
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty_like(r_arr)
    out[r_arr <= 0.0] = 0.0
    out[r_arr >= 1.0] = 1.0
    mid = (r_arr > 0.0) & (r_arr < 1.0)
    with np.errstate(over="ignore"):
        a = np.exp(-1.0 / r_arr[mid])
        b = np.exp(-1.0 / (1.0 - r_arr[mid]))
    out[mid] = a / (a + b)
    return float(out[0]) if np.ndim(r) == 0 else out


def _gamma_values(grid: Grid, center, rho: float) -> np.ndarray:
    coords = grid.coords()
    if grid.dim == 1:
        r = np.abs(coords - center)
    else:
        c = np.asarray(center, dtype=float)
        r = np.sqrt(((coords - c) ** 2).sum(axis=-1))
    # transition variable runs 1 -> 0 as r runs rho -> 2 rho
    return bump_transition((2.0 * rho - r) / rho)


@dataclass(frozen=True)
class Cutoff:
    rho: float
    s: float
    center: object
    gamma_field: ScalarField
    c_gamma: float
    transition_profile: str = "exp-ratio-bump"


def _measure_c_gamma(rho: float, oversample_points: int = 4096) -> float:
    """max of rho |gamma'| and rho^2 |gamma''| for the radial profile.

    rho |gamma'| = |phi'(tau)| in the transition variable, so the measured
    value is independent of rho and of the grid; we therefore measure on a
    dedicated fine periodic grid in 1-D and differentiate spectrally.
    """
    L = 4.0 * rho
    g = make_grid(1, L, oversample_points)
    gamma = ScalarField(g, _gamma_values(g, 0.0, rho))
    d1 = derivative_norms(gamma, 1).values
    d2 = derivative_norms(gamma, 2).values
    return max(rho * float(d1.max()), rho**2 * float(d2.max()))


def make_cutoff(grid: Grid, center, rho: float, s: float, oversample: int = 8) -> Cutoff:
    if rho <= 0:
        raise ParameterError(f"rho: must be positive, got {rho}")
    if s <= 0:
        raise ParameterError(f"s: must be positive, got {s}")
    if 2.0 * rho > grid.half_width / 2.0:
        raise ParameterError(
            f"rho: support radius 2*rho = {2 * rho} exceeds L/2 = {grid.half_width / 2}"
        )
    gamma = ScalarField(grid, _gamma_values(grid, center, rho))
    measured = _measure_c_gamma(rho, oversample * grid.points_per_axis)
    c_gamma = max(1.0, 1.05 * measured)
    return Cutoff(rho=rho, s=s, center=center, gamma_field=gamma, c_gamma=c_gamma)


def weighted_energy(
    u: ScalarField,
    k: int,
    cutoff: Cutoff | None,
    exponent: float | None = None,
) -> float:
    """E^k_eta(u) = integral (Lap^k u)^2 gamma^exponent (default exponent s).

    cutoff = None means eta identically 1 (full-torus energy, used in tests
    and in the eta-constant limit of the energy identity).
    """
    if k < 0:
        raise ParameterError(f"k: must be >= 0, got {k}")
    lap = iterated_laplacian(u, k)
    if cutoff is None:
        weight = 1.0
    else:
        if cutoff.gamma_field.grid != u.grid:
            raise ParameterError("cutoff and field live on different grids")
        q = cutoff.s if exponent is None else exponent
        if q < 0:
            raise ParameterError(f"exponent: must be >= 0, got {q}")
        weight = cutoff.gamma_field.values**q
    return integrate(ScalarField(u.grid, lap.values**2 * weight, u.time_tag))
