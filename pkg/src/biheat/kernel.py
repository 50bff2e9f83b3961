"""Oscillatory-integral evaluation of the 1-D fourth-order heat kernel.

The kernel is b(x,t) = t^{-1/4} f(x / t^{1/4}) with the even profile

    f(y) = (1/pi) * integral_0^inf exp(-w^4) cos(w y) dw,

normalized so that b has unit mass (its Fourier transform is exp(-w^4 t)
under the convention with the 2*pi in the inverse transform).  The profile,
its derivatives, the cumulative step profile F, and convolution solutions
are all computed by composite Gauss-Legendre panels on [0, W]; the cutoff
W = 6 leaves an integrand tail below exp(-1296).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ParameterError, QuadratureError

#: integration cutoff for the w-integral; exp(-W^4) = exp(-1296) << 1e-14
W_CUTOFF = 6.0

#: Gauss-Legendre nodes per panel
_GL_ORDER = 16

#: minimum nodes per oscillation period 2*pi/|y|
_NODES_PER_PERIOD = 10


def _panel_rule(y_scale: float, lo: float = 0.0, hi: float = W_CUTOFF):
    """Composite GL nodes/weights on [lo, hi] resolving cos(w*y_scale)."""
    periods = (hi - lo) * (abs(y_scale) + 1.0) / (2.0 * math.pi)
    n_panels = max(8, math.ceil(periods * _NODES_PER_PERIOD / _GL_ORDER))
    base_x, base_w = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    weights = (half[:, None] * base_w[None, :]).ravel()
    return nodes, weights


def profile_derivative(y, m: int = 0):
    """m-th derivative of the profile f at y (scalar or array).

    Differentiating under the integral gives
    f^(m)(y) = (1/pi) int_0^W exp(-w^4) w^m cos(w y + m pi/2) dw.
    Absolute quadrature error is far below 1e-10 (GL panels resolve the
    oscillation; the truncated tail is ~exp(-1296)).
    """
    if m < 0:
        raise ParameterError(f"m: derivative order must be >= 0, got {m}")
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    w, wt = _panel_rule(float(np.max(np.abs(y_arr))) if y_arr.size else 0.0)
    damp = np.exp(-(w**4)) * w**m * wt
    vals = np.cos(np.outer(y_arr, w) + m * math.pi / 2.0) @ damp / math.pi
    return float(vals[0]) if np.isscalar(y) or np.ndim(y) == 0 else vals


def profile_f(y):
    """Kernel profile f(y); even, unit mass, sign-changing."""
    return profile_derivative(y, 0)


def kernel_b(x, t: float):
    """Kernel b(x,t) = t^{-1/4} f(x / t^{1/4}); t > 0 required."""
    if t <= 0:
        raise ParameterError(f"t: kernel requires t > 0, got {t}")
    s = t ** (-0.25)
    return s * profile_f(np.asarray(x, dtype=float) * s) if np.ndim(x) else s * profile_f(x * s)


def step_profile_F(xi):
    """Self-similar step profile F(xi) = int_{-inf}^{xi} f(z) dz.

    Swapping the order of integration turns the cumulative integral into
    a single non-singular w-integral:
    F(xi) = 1/2 + (1/pi) int_0^W exp(-w^4) sin(w xi) / w dw.
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    w, wt = _panel_rule(float(np.max(np.abs(xi_arr))) if xi_arr.size else 0.0)
    damp = np.exp(-(w**4)) / w * wt
    vals = 0.5 + np.sin(np.outer(xi_arr, w)) @ damp / math.pi
    return float(vals[0]) if np.ndim(xi) == 0 else vals


@dataclass(frozen=True)
class KernelProfile:
    """Tabulation of f, f', f'', f''', f'''' on [-y_max, y_max]."""

    y_max: float
    node_count: int
    quad_cutoff: float
    interp_order: int
    grid: np.ndarray = field(repr=False)
    tables: tuple = field(repr=False)  # arrays f..f4 on grid
    splines: tuple = field(repr=False)

    def evaluate(self, y, m: int = 0):
        """Interpolated f^(m)(y) inside the table, direct quadrature outside."""
        if not 0 <= m <= 4:
            raise ParameterError(f"m: tabulated orders are 0..4, got {m}")
        y_arr = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty_like(y_arr)
        inside = np.abs(y_arr) <= self.y_max
        if inside.any():
            out[inside] = self.splines[m](y_arr[inside])
        if (~inside).any():
            out[~inside] = profile_derivative(y_arr[~inside], m)
        return float(out[0]) if np.ndim(y) == 0 else out


def build_profile(y_max: float = 30.0, node_count: int = 4001) -> KernelProfile:
    if y_max <= 0:
        raise ParameterError(f"y_max: must be positive, got {y_max}")
    if node_count < 101:
        raise ParameterError(f"node_count: must be >= 101, got {node_count}")
    grid = np.linspace(-y_max, y_max, node_count)
    tables = tuple(profile_derivative(grid, m) for m in range(5))
    # evenness of f is an analytic certainty; a violation means broken quadrature
    if np.max(np.abs(tables[0] - tables[0][::-1])) > 1e-10:
        raise QuadratureError("profile tabulation lost evenness beyond 1e-10")
    splines = tuple(CubicSpline(grid, tab) for tab in tables)
    return KernelProfile(
        y_max=y_max,
        node_count=node_count,
        quad_cutoff=W_CUTOFF,
        interp_order=3,
        grid=grid,
        tables=tables,
        splines=splines,
    )


def decay_report(profile: KernelProfile, m: int):
    """sup |y|^m |f| and |y|^m |f'| over the tabulated range (report only)."""
    if m < 0:
        raise ParameterError(f"m: must be >= 0, got {m}")
    if m > 8:
        raise ParameterError(
            f"m: tabulation accuracy supports m <= 8, got {m}"
        )
    y = np.abs(profile.grid)
    wgt = y**m
    return {
        "m": m,
        "sup_weighted_f": float(np.max(wgt * np.abs(profile.tables[0]))),
        "sup_weighted_f1": float(np.max(wgt * np.abs(profile.tables[1]))),
    }


# ---------------------------------------------------------------------------
# initial-data descriptors for convolution solutions


@dataclass(frozen=True)
class StepData:
    """Indicator of {x > 0}."""


@dataclass(frozen=True)
class ConstantData:
    value: float = 1.0


@dataclass(frozen=True)
class BumpData:
    """Compactly supported smooth data: fn vanishes for |x| > support_radius."""

    fn: object
    support_radius: float
    sup_bound: float

    def __post_init__(self):
        if self.support_radius <= 0:
            raise ParameterError("support_radius: must be positive")
        if not math.isfinite(self.sup_bound):
            raise ParameterError("sup_bound: unbounded data rejected")


def convolve_initial(u0, x, t: float, profile: KernelProfile | None = None):
    """Solution u(x,t) = int u0(x - y) b(y,t) dy for the given descriptor.

    Step data short-circuits to the exact self-similar profile.  Bump data
    is integrated in the similarity variable z = y / t^{1/4}; the tail of
    |f| beyond the tabulation (|f(30)| ~ 1e-10, decaying like
    exp(-c y^{4/3})) keeps the truncation below 1e-8 * sup|u0|.
    """
    if t <= 0:
        raise ParameterError(f"t: convolution requires t > 0, got {t}")
    if isinstance(u0, StepData):
        val = step_profile_F(np.asarray(x, dtype=float) / t**0.25)
        return val
    if isinstance(u0, ConstantData):
        if profile is None:
            profile = build_profile()
        mass = _table_integral(profile, 0)
        out = u0.value * mass * np.ones_like(np.atleast_1d(np.asarray(x, float)))
        return float(out[0]) if np.ndim(x) == 0 else out
    if isinstance(u0, BumpData):
        if profile is None:
            profile = build_profile()
        # panel width 0.25 resolves both the O(1)-scale oscillation of f and
        # the data scale width / t^{1/4} for any width >= 0.05 at t >= 0.1
        base_x, base_w = np.polynomial.legendre.leggauss(_GL_ORDER)
        n_panels = int(8 * profile.y_max)
        edges = np.linspace(-profile.y_max, profile.y_max, n_panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        mid = 0.5 * (edges[1:] + edges[:-1])
        z = (mid[:, None] + half * base_x[None, :]).ravel()
        wt = (half * base_w[None, :] * np.ones((n_panels, 1))).ravel()
        fz = profile.evaluate(z, 0) * wt
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        shifted = x_arr[:, None] - t**0.25 * z[None, :]
        vals = np.asarray(u0.fn(shifted), dtype=float) @ fz
        return float(vals[0]) if np.ndim(x) == 0 else vals
    raise ParameterError(f"u0: unrecognized initial-data descriptor {u0!r}")


def _table_integral(profile: KernelProfile, m: int) -> float:
    """integral of f^(m) over the tabulated range via the spline."""
    return float(profile.splines[m].integrate(-profile.y_max, profile.y_max))


def profile_mass(profile: KernelProfile | None = None) -> float:
    """integral of f over the tabulated range (tail below ~2e-10)."""
    if profile is None:
        profile = build_profile()
    return _table_integral(profile, 0)
