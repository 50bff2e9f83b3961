"""Periodic-box spectral engine for the fourth-order flow du/dt = -(Laplacian)^2 u.

The box is [-L, L)^dim with N points per axis.  Differentiation, quadrature
and time evolution are all performed through the FFT, so evolution is exact
(to rounding) for band-limited data.  Transform convention: forward FFT
unnormalized, inverse carries 1/N^dim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ParameterError, SamplingError


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L, L)^dim; node j sits at -L + j*h."""

    dim: int
    half_width: float
    points_per_axis: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    def axis(self) -> np.ndarray:
        j = np.arange(self.points_per_axis)
        return -self.half_width + j * self.spacing

    def coords(self) -> np.ndarray:
        """Node coordinates: shape (N,) in dim 1, (N, N, 2) in dim 2."""
        x = self.axis()
        if self.dim == 1:
            return x
        X, Y = np.meshgrid(x, x, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers per axis in FFT layout (xi = pi*m/L)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    def laplacian_symbol(self) -> np.ndarray:
        """Fourier symbol of the Laplacian, -|xi|^2, in FFT layout."""
        xi = self.wavenumbers()
        if self.dim == 1:
            return -(xi**2)
        return -(xi[:, None] ** 2 + xi[None, :] ** 2)


@dataclass(frozen=True)
class ScalarField:
    """Real samples of u(., t) on a grid, with an optional time tag."""

    grid: Grid
    values: np.ndarray
    time_tag: float | None = None

    def __post_init__(self):
        shape = (self.grid.points_per_axis,) * self.grid.dim
        if self.values.shape != shape:
            raise ParameterError(
                f"values: expected shape {shape}, got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise SamplingError("values: field contains non-finite entries")


@dataclass(frozen=True)
class FlowTrajectory:
    initial: ScalarField
    times: np.ndarray
    snapshots: list[ScalarField]


def make_grid(dim: int, L: float, N: int) -> Grid:
    if dim not in (1, 2):
        raise ParameterError(f"dim: must be 1 or 2, got {dim}")
    if L <= 0:
        raise ParameterError(f"L: must be positive, got {L}")
    if N < 8:
        raise ParameterError(f"N: must be >= 8, got {N}")
    if N % 2 != 0:
        raise ParameterError(f"N: must be even, got {N}")
    return Grid(dim=dim, half_width=float(L), points_per_axis=int(N))


def sample_field(grid: Grid, eval_fn, time_tag: float | None = None) -> ScalarField:
    """Sample a pointwise function of coordinates onto the grid."""
    if grid.dim == 1:
        x = grid.axis()
        try:
            vals = np.asarray(eval_fn(x), dtype=float)
            if vals.shape != x.shape:
                raise TypeError
        except (TypeError, ValueError):
            vals = np.array([float(eval_fn(xi)) for xi in x])
        bad = ~np.isfinite(vals)
        if bad.any():
            raise SamplingError(f"non-finite sample at x={x[bad][0]!r}")
    else:
        x = grid.axis()
        X, Y = np.meshgrid(x, x, indexing="ij")
        try:
            vals = np.asarray(eval_fn(X, Y), dtype=float)
            if vals.shape != X.shape:
                raise TypeError
        except (TypeError, ValueError):
            vals = np.array([[float(eval_fn(a, b)) for b in x] for a in x])
        bad = ~np.isfinite(vals)
        if bad.any():
            i = np.argwhere(bad)[0]
            raise SamplingError(
                f"non-finite sample at x=({X[tuple(i)]}, {Y[tuple(i)]})"
            )
    return ScalarField(grid=grid, values=vals, time_tag=time_tag)


def _fft(values: np.ndarray) -> np.ndarray:
    return np.fft.fftn(values)


def _ifft(spectrum: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(spectrum).real


def iterated_laplacian(u: ScalarField, k: int) -> ScalarField:
    """Spectral Delta^k u; k = 0 is the identity."""
    if k < 0:
        raise ParameterError(f"k: must be >= 0, got {k}")
    if k == 0:
        return u
    sym = u.grid.laplacian_symbol()
    vals = _ifft(_fft(u.values) * sym**k)
    return ScalarField(u.grid, vals, u.time_tag)


def partial_derivative(u: ScalarField, axis: int = 0, order: int = 1) -> ScalarField:
    """Signed spectral partial derivative d^order u / dx_axis^order."""
    if order < 1:
        raise ParameterError(f"order: must be >= 1, got {order}")
    if not 0 <= axis < u.grid.dim:
        raise ParameterError(f"axis: must be in [0, {u.grid.dim}), got {axis}")
    xi = u.grid.wavenumbers()
    if u.grid.dim == 1:
        mult = (1j * xi) ** order
    elif axis == 0:
        mult = (1j * xi[:, None]) ** order
    else:
        mult = (1j * xi[None, :]) ** order
    vals = _ifft(_fft(u.values) * mult)
    return ScalarField(u.grid, vals, u.time_tag)


def derivative_norms(u: ScalarField, i: int) -> ScalarField:
    """Pointwise norm of the full i-th derivative tensor, |grad^i u|."""
    if i < 1:
        raise ParameterError(f"i: must be >= 1, got {i}")
    spec = _fft(u.values)
    xi = u.grid.wavenumbers()
    if u.grid.dim == 1:
        vals = np.abs(_ifft(spec * (1j * xi) ** i))
    else:
        acc = np.zeros_like(u.values)
        for a in range(i + 1):
            b = i - a
            mult = (1j * xi[:, None]) ** a * (1j * xi[None, :]) ** b
            d = _ifft(spec * mult)
            acc += math.comb(i, a) * d**2
        vals = np.sqrt(acc)
    return ScalarField(u.grid, vals, u.time_tag)


def integrate(u: ScalarField) -> float:
    """Rectangle rule on the torus (spectrally accurate for smooth data)."""
    return float(u.grid.spacing ** u.grid.dim * u.values.sum())


def inner(u: ScalarField, v: ScalarField) -> float:
    if u.grid != v.grid:
        raise ParameterError("inner: fields live on different grids")
    return float(u.grid.spacing ** u.grid.dim * (u.values * v.values).sum())


def evolve(u: ScalarField, t: float) -> ScalarField:
    """Exact Fourier-multiplier evolution by time t: multiply by exp(-|xi|^4 t)."""
    if t < 0:
        raise ParameterError(f"t: backward evolution rejected, got t={t}")
    if t == 0:
        return replace(u, time_tag=0.0)
    sym = u.grid.laplacian_symbol()
    vals = _ifft(_fft(u.values) * np.exp(-(sym**2) * t))
    return ScalarField(u.grid, vals, time_tag=t)


def time_derivative(u: ScalarField) -> ScalarField:
    """du/dt along the flow, i.e. -Delta^2 u, evaluated spectrally."""
    lap2 = iterated_laplacian(u, 2)
    return ScalarField(u.grid, -lap2.values, u.time_tag)


def run_trajectory(u0: ScalarField, times) -> FlowTrajectory:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ParameterError("times: need a non-empty 1-D array")
    if np.any(times < 0):
        raise ParameterError("times: all entries must be >= 0")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ParameterError("times: must be strictly increasing")
    snapshots = [evolve(u0, float(t)) for t in times]
    return FlowTrajectory(initial=u0, times=times, snapshots=snapshots)


def spectral_l2_sq(u: ScalarField) -> float:
    """integral of u^2 computed from the Fourier coefficients (Parseval)."""
    spec = _fft(u.values)
    N = u.grid.points_per_axis ** u.grid.dim
    return float(u.grid.spacing ** u.grid.dim * (np.abs(spec) ** 2).sum() / N)


def write_field_csv(u: ScalarField, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        if u.grid.dim == 1:
            fh.write("x,value\n")
            for x, v in zip(u.grid.axis(), u.values):
                fh.write(f"{float(x)!r},{float(v)!r}\n")
        else:
            fh.write("x,y,value\n")
            ax = u.grid.axis()
            for i, x in enumerate(ax):
                for j, y in enumerate(ax):
                    fh.write(
                        f"{float(x)!r},{float(y)!r},{float(u.values[i, j])!r}\n"
                    )


def read_field_csv(path) -> ScalarField:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if header == ["x", "value"]:
        x = np.array([float(r[0]) for r in rows])
        v = np.array([float(r[1]) for r in rows])
        N = x.size
        L = -x[0]
        grid = make_grid(1, L, N)
        return ScalarField(grid, v)
    if header == ["x", "y", "value"]:
        n = int(round(math.sqrt(len(rows))))
        x = np.array([float(r[0]) for r in rows])
        v = np.array([float(r[2]) for r in rows]).reshape(n, n)
        grid = make_grid(2, -x[0], n)
        return ScalarField(grid, v)
    raise ParameterError(f"unrecognized field CSV header: {header}")
