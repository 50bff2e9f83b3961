"""Numerical verification harness for the fourth-order heat flow.

Checks the localized energy identity, the interpolation inequalities with
their explicitly assembled constants, the Caccioppoli-type differential
inequalities, the interior growth/region bounds, and the uniqueness
experiment.  Every check returns a CheckReport with lhs, rhs, margin,
tolerance and a parameter echo; suites collect reports in a deterministic
order so the emitted artifacts are reproducible byte-for-byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .quantities import Cutoff, dist_to_boundary, make_cutoff, weighted_energy
from .spectral import (
    FlowTrajectory,
    Grid,
    ScalarField,
    evolve,
    inner,
    iterated_laplacian,
    make_grid,
    partial_derivative,
    run_trajectory,
)

# ---------------------------------------------------------------------------
# explicit constants


@dataclass(frozen=True)
class ConstantsTable:
    """All explicit constants of the localized energy inequalities.

    The assembly mirrors the chain of absorption estimates: the weighted
    interpolation constant c_delta0, the two first-layer constants c1, c2
    (with their delta choices recorded), their combination c3, the iterated
    interpolation constant c_hat, and the full-chain constant c4.
    """

    eps: float
    s: float
    n: int
    c_gamma: float
    delta0: float
    k: int
    # Intermediate absorption parameters (recorded for auditability)
    delta1_first: float
    delta2_first: float
    delta3_first: float
    delta1_second: float
    delta2_second: float
    c_delta0: float
    c1: float
    c2: float
    c3: float
    c4: float
    c_hat: float


def interp_constant(delta0: float, s: float, c_gamma: float) -> float:
    """c_delta0 = 2^4 (delta0^{-1} + 2^9 s^4 c_gamma^4)."""
    if delta0 <= 0:
        raise ParameterError(f"delta0: must be positive, got {delta0}")
    return 16.0 * (1.0 / delta0 + 512.0 * s**4 * c_gamma**4)


def _c1(eps: float, s: float, c_gamma: float) -> float:
    """First-layer constant: absorb the mixed term with delta1 = eps/4,
    delta2 = eps^2/(32 c^2 s^2), delta3 = eps^4/(8 c^4 s^2 (16 s^2 + eps^2 (s-2)^2))."""
    delta1 = eps / 4.0
    delta2 = eps**2 / (32.0 * c_gamma**2 * s**2)
    delta3 = eps**4 / (
        8.0 * c_gamma**4 * s**2 * (16.0 * s**2 + eps**2 * (s - 2.0) ** 2)
    )
    cd3 = interp_constant(delta3, s, c_gamma)
    return (c_gamma**2 * s**2 / delta1) * cd3 * (1.0 / (2.0 * delta2) + c_gamma**2 * (s - 2.0) ** 2)


def _c2(eps: float, s: float, c_gamma: float) -> float:
    """Second-layer constant: delta1 = eps/16,
    delta2 = eps^2/(128 c^2 (s^2 + c^2 s^2 (s-1)^2))."""
    delta1 = eps / 16.0
    delta2 = eps**2 / (
        128.0 * c_gamma**2 * (s**2 + c_gamma**2 * s**2 * (s - 1.0) ** 2)
    )
    cd2 = interp_constant(delta2, s, c_gamma)
    return _c1(eps / 2.0, s, c_gamma) + (cd2 / delta1) * (
        c_gamma**2 * s**2 + c_gamma**4 * s**2 * (s - 1.0) ** 2
    )


def iterated_interp_constant(delta_target: float, k: int, s: float, c_gamma: float) -> float:
    """Induction constant c_hat(delta, k, s): base c_hat = 1 at k = 1;
    each step applies the weighted interpolation at delta/2 and recurses at
    the delta making the absorbed coefficient 1/2."""
    if delta_target <= 0:
        raise ParameterError(f"delta: must be positive, got {delta_target}")
    if k < 1:
        raise ParameterError(f"k: must be >= 1, got {k}")
    if k == 1:
        return 1.0
    if s <= 4.0 * k:
        raise ParameterError(f"s > 4k required, got s={s}, k={k}")
    cd = interp_constant(delta_target / 2.0, s, c_gamma)
    return 2.0 * cd * iterated_interp_constant(1.0 / (2.0 * cd), k - 1, s - 4.0, c_gamma)


def cy1_constant(s: float, c_gamma: float) -> float:
    """c3 = 2 (c1(1/4) + c2(1/4)); needs s > 8."""
    if s <= 8.0:
        raise ParameterError(f"s > 8 required, got s={s}")
    return 2.0 * (_c1(0.25, s, c_gamma) + _c2(0.25, s, c_gamma))


def cy2_constant(k: int, s: float, c_gamma: float) -> float:
    """Full-chain constant c4; needs s > 4k (and s > 8 when k >= 2)."""
    if k < 1:
        raise ParameterError(f"k: must be >= 1, got {k}")
    if s <= 4.0 * k:
        raise ParameterError(f"s > 4k required, got s={s}, k={k}")
    if k == 1:
        # single-layer chain: both absorptions at eps = 1/2
        return 4.0 * (c_gamma**2 * s**2 + c_gamma**4 * s**2 * (s - 1.0) ** 2) + (
            16.0 * c_gamma**2 * s**2
        ) * (64.0 * c_gamma**2 * s**2 + c_gamma**2 * (s - 2.0) ** 2)
    c3 = cy1_constant(s, c_gamma)
    return c3 * (
        iterated_interp_constant(1.0 / (2.0 * c3), k, s, c_gamma)
        + iterated_interp_constant(1.0, k - 1, s - 4.0, c_gamma)
    )


def assemble_constants(
    eps: float, s: float, n: int, c_gamma: float, delta0: float, k: int
) -> ConstantsTable:
    if eps <= 0:
        raise ParameterError(f"eps: must be positive, got {eps}")
    if delta0 <= 0:
        raise ParameterError(f"delta0: must be positive, got {delta0}")
    if n not in (1, 2):
        raise ParameterError(f"n: dimension must be 1 or 2, got {n}")
    if c_gamma < 1.0:
        raise ParameterError(f"c_gamma: certificate must be >= 1, got {c_gamma}")
    if k < 1:
        raise ParameterError(f"k: must be >= 1, got {k}")
    if s <= 8.0:
        raise ParameterError(f"s > 8 required, got s={s}")
    if s <= 4.0 * k:
        raise ParameterError(f"s > 4k required for c4, got s={s}, k={k}")

    c_delta0 = interp_constant(delta0, s, c_gamma)
    c1 = _c1(eps, s, c_gamma)
    c2 = _c2(eps, s, c_gamma)
    c3 = cy1_constant(s, c_gamma)
    c4 = cy2_constant(k, s, c_gamma)
    c_hat = (
        1.0
        if k == 1
        else iterated_interp_constant(1.0 / (2.0 * c3), k, s, c_gamma)
    )

    table = ConstantsTable(
        eps=eps,
        s=s,
        n=n,
        c_gamma=c_gamma,
        delta0=delta0,
        k=k,
        delta1_first=eps / 4.0,
        delta2_first=eps**2 / (32.0 * c_gamma**2 * s**2),
        delta3_first=eps**4
        / (8.0 * c_gamma**4 * s**2 * (16.0 * s**2 + eps**2 * (s - 2.0) ** 2)),
        delta1_second=eps / 16.0,
        delta2_second=eps**2
        / (128.0 * c_gamma**2 * (s**2 + c_gamma**2 * s**2 * (s - 1.0) ** 2)),
        c_delta0=c_delta0,
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        c_hat=c_hat,
    )
    for name in ("c_delta0", "c1", "c2", "c3", "c4", "c_hat"):
        v = getattr(table, name)
        if not (math.isfinite(v) and v > 0):
            raise ParameterError(f"{name}: assembled constant not finite positive: {v}")
    return table


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: float
    rhs: float
    tolerance: float
    context: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tolerance

    def as_dict(self) -> dict:
        params = {k: _jsonable(v) for k, v in sorted(self.context.items())}
        seed = params.pop("seed", None)
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "params": params,
            "seed": seed,
        }


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


# ---------------------------------------------------------------------------
# random band-limited fields


def random_band_limited(
    grid: Grid, seed: int, band_limit: int | None = None, amplitude: float = 1.0
) -> ScalarField:
    """Fixed-seed random trigonometric polynomial with modes 1..band_limit
    and N(0,1) coefficients scaled by mode^{-2}.

    The field is a function of (seed, band_limit, L) only, so sampling the
    same draw on a refined grid reproduces the identical continuum field.
    """
    if grid.dim != 1:
        raise ParameterError("random_band_limited: 1-D grids only")
    if band_limit is None:
        band_limit = grid.points_per_axis // 8
    if band_limit < 1 or band_limit > grid.points_per_axis // 2 - 1:
        raise ParameterError(
            f"band_limit: need 1 <= band <= N/2 - 1, got {band_limit}"
        )
    rng = np.random.default_rng(seed)
    m = np.arange(1, band_limit + 1)
    a = rng.standard_normal(band_limit) / m**2
    b = rng.standard_normal(band_limit) / m**2
    x = grid.axis()
    phase = np.outer(x, m) * (math.pi / grid.half_width)
    vals = amplitude * (np.cos(phase) @ a + np.sin(phase) @ b)
    return ScalarField(grid, vals)


# ---------------------------------------------------------------------------
# identity and inequality checks


def _grad_eta(cutoff: Cutoff, exponent: float) -> ScalarField:
    """Signed spectral derivative of eta = gamma^exponent."""
    eta = ScalarField(
        cutoff.gamma_field.grid, cutoff.gamma_field.values**exponent
    )
    return partial_derivative(eta, 0, 1)


def check_lm1(u: ScalarField, cutoff: Cutoff | None, k: int = 1) -> CheckReport:
    """Localized energy identity along the flow:
    d/dt E^k_eta + 2 E^{k+1}_eta
      = -2 int (Lap^{k+1} u)(d Lap^k u)(d eta)
        + 2 int (Lap^k u)(d Lap^{k+1} u)(d eta).

    d/dt E is evaluated analytically through the evolution equation as
    -2 int (Lap^k u)(Lap^{k+2} u) eta; the report's lhs is the relative
    residual |L - R| / max(|L|, |R|) against rhs 0, tolerance 1e-8.
    """
    if k < 0:
        raise ParameterError(f"k: must be >= 0, got {k}")
    grid = u.grid
    if cutoff is not None and cutoff.gamma_field.grid != grid:
        raise ParameterError("check_lm1: field and cutoff on different grids")

    lap_k = iterated_laplacian(u, k)
    lap_k1 = iterated_laplacian(u, k + 1)
    lap_k2 = iterated_laplacian(u, k + 2)

    if cutoff is None:
        eta_vals = np.ones_like(u.values)
        deta_vals = np.zeros_like(u.values)
        s_exp = None
    else:
        s_exp = cutoff.s
        eta_vals = cutoff.gamma_field.values**s_exp
        deta_vals = _grad_eta(cutoff, s_exp).values

    h = grid.spacing ** grid.dim
    dE = -2.0 * h * float((lap_k.values * lap_k2.values * eta_vals).sum())
    E_next = h * float((lap_k1.values**2 * eta_vals).sum())
    left = dE + 2.0 * E_next

    d_lap_k = partial_derivative(lap_k, 0, 1)
    d_lap_k1 = partial_derivative(lap_k1, 0, 1)
    right = h * float(
        (
            -2.0 * lap_k1.values * d_lap_k.values * deta_vals
            + 2.0 * lap_k.values * d_lap_k1.values * deta_vals
        ).sum()
    )

    scale = max(abs(left), abs(right))
    residual = 0.0 if scale == 0.0 else abs(left - right) / scale
    return CheckReport(
        name="energy-identity",
        lhs=residual,
        rhs=0.0,
        tolerance=1e-8,
        context={
            "k": k,
            "left": left,
            "right": right,
            "N": grid.points_per_axis,
            "L": grid.half_width,
            "s": s_exp,
            "rho": None if cutoff is None else cutoff.rho,
        },
    )


def check_interp1(
    u: ScalarField, k: int, s: float, delta0: float, cutoff: Cutoff
) -> CheckReport:
    """Weighted interpolation:
    int (Lap^k u)^2 g^{s-4}
      <= delta0 rho^4 int (Lap^{k+1} u)^2 g^s
         + (c_delta0 / rho^4) int (Lap^{k-1} u)^2 g^{s-8}."""
    if k < 1:
        raise ParameterError(f"k: must be >= 1, got {k}")
    if s <= 8.0:
        raise ParameterError(f"s > 8 required, got s={s}")
    if delta0 <= 0:
        raise ParameterError(f"delta0: must be positive, got {delta0}")
    rho = cutoff.rho
    cd = interp_constant(delta0, s, cutoff.c_gamma)
    lhs = weighted_energy(u, k, cutoff, exponent=s - 4.0)
    rhs = delta0 * rho**4 * weighted_energy(u, k + 1, cutoff, exponent=s) + (
        cd / rho**4
    ) * weighted_energy(u, k - 1, cutoff, exponent=s - 8.0)
    return CheckReport(
        name="weighted-interpolation",
        lhs=lhs,
        rhs=rhs,
        tolerance=1e-8 * max(abs(rhs), abs(lhs)),
        context={
            "k": k,
            "s": s,
            "delta0": delta0,
            "rho": rho,
            "c_gamma": cutoff.c_gamma,
            "c_delta0": cd,
            "N": u.grid.points_per_axis,
            "L": u.grid.half_width,
        },
    )


def check_interp2(
    u: ScalarField, k: int, s: float, delta: float, cutoff: Cutoff
) -> CheckReport:
    """Iterated interpolation down to the first Laplacian:
    int (Lap^k u)^2 g^{s-4}
      <= delta rho^4 int (Lap^{k+1} u)^2 g^s
         + (c_hat / rho^{4k-4}) int (Lap u)^2 g^{s-4k}."""
    if k < 1:
        raise ParameterError(f"k: must be >= 1, got {k}")
    if s <= 4.0 * k:
        raise ParameterError(f"s > 4k required, got s={s}, k={k}")
    if delta <= 0:
        raise ParameterError(f"delta: must be positive, got {delta}")
    rho = cutoff.rho
    c_hat = iterated_interp_constant(delta, k, s, cutoff.c_gamma)
    lhs = weighted_energy(u, k, cutoff, exponent=s - 4.0)
    rhs = delta * rho**4 * weighted_energy(u, k + 1, cutoff, exponent=s) + (
        c_hat / rho ** (4 * k - 4)
    ) * weighted_energy(u, 1, cutoff, exponent=s - 4.0 * k)
    return CheckReport(
        name="iterated-interpolation",
        lhs=lhs,
        rhs=rhs,
        tolerance=1e-8 * max(abs(rhs), abs(lhs)),
        context={
            "k": k,
            "s": s,
            "delta": delta,
            "rho": rho,
            "c_gamma": cutoff.c_gamma,
            "c_hat": c_hat,
            "N": u.grid.points_per_axis,
            "L": u.grid.half_width,
        },
    )


def check_cy(
    u0: ScalarField,
    cutoff: Cutoff,
    k: int,
    s: float,
    variant: str,
    times,
) -> list[CheckReport]:
    """Differential (Caccioppoli-type) inequalities along the flow.

    CY1: d/dt E^k + (3/2) E^{k+1} <= (c3 / rho^8)  int (Lap^{k-1} u)^2 g^{s-8}
    CY2: d/dt E^k +       E^{k+1} <= (c4 / rho^4k) int (Lap u)^2     g^{s-4k}

    d/dt E is analytic via the evolution equation (no time differencing).
    """
    if variant not in ("CY1", "CY2"):
        raise ParameterError(f"variant: must be CY1 or CY2, got {variant!r}")
    if k < 1:
        raise ParameterError(f"k: must be >= 1, got {k}")
    if variant == "CY1" and s <= 8.0:
        raise ParameterError(f"s > 8 required for CY1, got s={s}")
    if variant == "CY2" and s <= 4.0 * k:
        raise ParameterError(f"s > 4k required for CY2, got s={s}, k={k}")
    rho = cutoff.rho
    if variant == "CY1":
        const_name, const_val = "c3", cy1_constant(s, cutoff.c_gamma)
    else:
        const_name, const_val = "c4", cy2_constant(k, s, cutoff.c_gamma)
    reports = []
    for t in np.asarray(times, dtype=float):
        if t < 0:
            raise ParameterError(f"times: must be >= 0, got {t}")
        u = evolve(u0, float(t))
        lap_k = iterated_laplacian(u, k)
        lap_k2 = iterated_laplacian(u, k + 2)
        eta = ScalarField(u.grid, cutoff.gamma_field.values**s)
        dE = -2.0 * inner(
            ScalarField(u.grid, lap_k.values * eta.values), lap_k2
        )
        E_next = weighted_energy(u, k + 1, cutoff, exponent=s)
        if variant == "CY1":
            lhs = dE + 1.5 * E_next
            rhs = (const_val / rho**8) * weighted_energy(
                u, k - 1, cutoff, exponent=s - 8.0
            )
        else:
            lhs = dE + E_next
            rhs = (const_val / rho ** (4 * k)) * weighted_energy(
                u, 1, cutoff, exponent=s - 4.0 * k
            )
        reports.append(
            CheckReport(
                name=f"differential-inequality-{variant}",
                lhs=lhs,
                rhs=rhs,
                tolerance=1e-8 * (1.0 + abs(rhs)),
                context={
                    "k": k,
                    "s": s,
                    "rho": rho,
                    "t": float(t),
                    "c_gamma": cutoff.c_gamma,
                    const_name: const_val,
                    "N": u.grid.points_per_axis,
                    "L": u.grid.half_width,
                },
            )
        )
    return reports


def check_growth(traj: FlowTrajectory, k0: float, tolerance: float = 0.0) -> CheckReport:
    """Interior growth bound t |Lap u|^2 <= k0 over all snapshots and nodes."""
    if not traj.snapshots:
        raise ParameterError("trajectory: must contain at least one snapshot")
    worst = 0.0
    for t, snap in zip(traj.times, traj.snapshots):
        lap = iterated_laplacian(snap, 1)
        worst = max(worst, float(t) * float(np.max(lap.values**2)))
    return CheckReport(
        name="growth-bound",
        lhs=worst,
        rhs=float(k0),
        tolerance=tolerance,
        context={
            "k0": float(k0),
            "num_snapshots": len(traj.snapshots),
            "t_max": float(traj.times[-1]),
        },
    )


def _region_scan(solution, N: float, t_grid, x_grid, value_fn):
    """Max of value_fn(x, t) over {x in B1, d^4(x) >= N t, t <= 1/N}."""
    x = np.asarray(x_grid, dtype=float)
    x = x[np.abs(x) <= 1.0]
    d4 = dist_to_boundary(x) ** 4
    worst = 0.0
    count = 0
    for t in np.asarray(t_grid, dtype=float):
        if t <= 0 or t > 1.0 / N:
            continue
        mask = d4 >= N * t
        if not mask.any():
            continue
        vals = np.abs(np.asarray(value_fn(x[mask], float(t)), dtype=float))
        count += int(mask.sum())
        worst = max(worst, float(vals.max()))
    return worst, count


def check_theorem1_region(solution, N: float, t_grid, x_grid) -> CheckReport:
    """Interior bound e = d^4 |Lap u|^2 <= N on the shrinking region
    {x in B1, d^4(x) >= N t, t <= 1/N}; also bisects for the minimal
    empirical N over the same scan window."""
    if N <= 0:
        raise ParameterError(f"N: must be positive, got {N}")

    def e_fn(xs, t):
        return dist_to_boundary(xs) ** 4 * np.asarray(solution.lap_u(xs, t)) ** 2

    worst, count = _region_scan(solution, N, t_grid, x_grid, e_fn)
    minimal = minimal_region_constant(solution, t_grid, x_grid)
    return CheckReport(
        name="interior-region-bound",
        lhs=worst,
        rhs=float(N),
        tolerance=0.0,
        context={
            "N": float(N),
            "points_scanned": count,
            "minimal_empirical_N": minimal,
        },
    )


def minimal_region_constant(solution, t_grid, x_grid, rel_tol: float = 1e-3) -> float:
    """Smallest N (to rel_tol) for which the region scan passes.

    The pass predicate is monotone in N on a fixed scan window: raising N
    shrinks the region and raises the threshold simultaneously.
    """

    def e_fn(xs, t):
        return dist_to_boundary(xs) ** 4 * np.asarray(solution.lap_u(xs, t)) ** 2

    def passes(N):
        worst, _ = _region_scan(solution, N, t_grid, x_grid, e_fn)
        return worst <= N

    lo, hi = 1e-6, 1e-6
    while not passes(hi):
        hi *= 2.0
        if hi > 1e12:
            raise ParameterError("minimal_region_constant: no passing N below 1e12")
    if passes(lo):
        return lo
    while hi - lo > rel_tol * hi:
        mid = math.sqrt(lo * hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi


def check_main3(solution, k1: float, N: float, region) -> CheckReport:
    """Amplitude bound |u| <= sqrt(k1) + 1 on the shrinking region.

    region = (t_grid, x_grid).  k1 is caller-certified (a bound on the
    initial derivative sums); for discontinuous data the report is
    informational.
    """
    if N <= 0:
        raise ParameterError(f"N: must be positive, got {N}")
    if k1 < 0:
        raise ParameterError(f"k1: must be >= 0, got {k1}")
    t_grid, x_grid = region
    worst, count = _region_scan(
        solution, N, t_grid, x_grid, lambda xs, t: solution.u(xs, t)
    )
    return CheckReport(
        name="amplitude-bound",
        lhs=worst,
        rhs=math.sqrt(k1) + 1.0,
        tolerance=0.0,
        context={"k1": float(k1), "N": float(N), "points_scanned": count},
    )


def uniqueness_experiment(u0: ScalarField, times) -> CheckReport:
    """Two independently coded evolutions of the same data must agree.

    Path A applies the Fourier multiplier for each target time in one shot;
    path B composes incremental multiplier steps.  For band-limited data
    both are exact, so any drift beyond rounding indicates a solver bug.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ParameterError("times: need a non-empty 1-D array")
    if np.any(times <= 0) or (times.size > 1 and np.any(np.diff(times) <= 0)):
        raise ParameterError("times: must be positive and strictly increasing")
    single = run_trajectory(u0, times)
    worst = 0.0
    current = u0
    prev_t = 0.0
    for t, ref in zip(times, single.snapshots):
        current = evolve(current, float(t) - prev_t)
        prev_t = float(t)
        worst = max(worst, float(np.max(np.abs(current.values - ref.values))))
    scale = max(1.0, float(np.max(np.abs(u0.values))))
    return CheckReport(
        name="uniqueness-experiment",
        lhs=worst,
        rhs=1e-13 * scale,
        tolerance=0.0,
        context={
            "num_times": int(times.size),
            "t_max": float(times[-1]),
            "N": u0.grid.points_per_axis,
            "L": u0.grid.half_width,
        },
    )


# ---------------------------------------------------------------------------
# verification suites


class TychonoffSolution:
    """Pointwise adapter exposing the flat series solution to region scans."""

    def __init__(self, params=None):
        from .tychonoff import TychonoffParams

        self.params = params if params is not None else TychonoffParams()

    def u(self, xs, t):
        from .tychonoff import eval_u

        return np.array(
            [eval_u(float(x), float(t), self.params).value for x in np.atleast_1d(xs)]
        )

    def lap_u(self, xs, t):
        from .tychonoff import eval_derivative

        return np.array(
            [
                eval_derivative(float(x), float(t), (0, 2), self.params).value
                for x in np.atleast_1d(xs)
            ]
        )


_CUTOFF_CACHE: dict = {}
_STEP_ANALYSIS = None


def _cached_cutoff(grid: Grid, rho: float, s: float) -> Cutoff:
    key = (grid.dim, grid.half_width, grid.points_per_axis, rho, s)
    if key not in _CUTOFF_CACHE:
        _CUTOFF_CACHE[key] = make_cutoff(grid, 0.0, rho, s)
    return _CUTOFF_CACHE[key]


def _step_analysis():
    global _STEP_ANALYSIS
    if _STEP_ANALYSIS is None:
        from .stepexample import analyze

        _STEP_ANALYSIS = analyze()
    return _STEP_ANALYSIS


def _with_seed(report: CheckReport, seed: int) -> CheckReport:
    ctx = dict(report.context)
    ctx["seed"] = int(seed)
    return CheckReport(report.name, report.lhs, report.rhs, report.tolerance, ctx)


def _refined(report: CheckReport, rebuild) -> CheckReport:
    """Refinement protocol: a failed inequality check re-runs at doubled N
    with the band limit halved relative to the new default; persistent
    failure is flagged as a genuine counterexample candidate with full
    reproduction parameters."""
    if report.passed:
        return report
    second = rebuild()
    ctx = dict(second.context)
    ctx["refined"] = True
    if not second.passed:
        ctx["counterexample_candidate"] = True
        ctx["base_report"] = report.as_dict()
    return CheckReport(second.name, second.lhs, second.rhs, second.tolerance, ctx)


def suite_lm1(seed: int = 0) -> list[CheckReport]:
    grid = make_grid(1, 10.0, 512)
    cutoff = _cached_cutoff(grid, 2.0, 12.0)
    reports = []
    for i in range(50):
        u = random_band_limited(grid, seed + i)
        for k in (0, 1, 2):
            reports.append(_with_seed(check_lm1(u, cutoff, k), seed + i))
    return _ordered(reports)


def suite_interp1(seed: int = 0) -> list[CheckReport]:
    reports = []
    for i in range(100):
        for rho, L, N in ((2.0, 10.0, 512), (4.0, 20.0, 1024)):
            grid = make_grid(1, L, N)
            u = random_band_limited(grid, seed + i)
            for s in (9.0, 12.0):
                cutoff = _cached_cutoff(grid, rho, s)
                for k in (1, 2):
                    for delta0 in (0.1, 1.0):

                        def rebuild(rho=rho, L=L, N=N, i=i, s=s, k=k, d0=delta0):
                            g2 = make_grid(1, L, 2 * N)
                            u2 = random_band_limited(g2, seed + i, band_limit=N // 8)
                            return check_interp1(
                                u2, k, s, d0, _cached_cutoff(g2, rho, s)
                            )

                        rep = _refined(
                            check_interp1(u, k, s, delta0, cutoff), rebuild
                        )
                        reports.append(_with_seed(rep, seed + i))
    return _ordered(reports)


def suite_interp2(seed: int = 0) -> list[CheckReport]:
    grid = make_grid(1, 10.0, 512)
    cutoff = _cached_cutoff(grid, 2.0, 12.0)
    reports = []
    for i in range(100):
        u = random_band_limited(grid, seed + i)

        def rebuild(i=i):
            g2 = make_grid(1, 10.0, 1024)
            u2 = random_band_limited(g2, seed + i, band_limit=64)
            return check_interp2(u2, 2, 12.0, 0.5, _cached_cutoff(g2, 2.0, 12.0))

        rep = _refined(check_interp2(u, 2, 12.0, 0.5, cutoff), rebuild)
        reports.append(_with_seed(rep, seed + i))
    return _ordered(reports)


def _suite_cy(seed: int, variant: str, cases) -> list[CheckReport]:
    grid = make_grid(1, 10.0, 512)
    cutoff = _cached_cutoff(grid, 2.0, 13.0)
    times = (0.0, 0.1, 0.5)
    reports = []
    for i, k in cases:
        u0 = random_band_limited(grid, seed + i)
        for rep in check_cy(u0, cutoff, k, 13.0, variant, times):
            if not rep.passed:

                def rebuild(i=i, k=k, t=rep.context["t"]):
                    g2 = make_grid(1, 10.0, 1024)
                    u2 = random_band_limited(g2, seed + i, band_limit=64)
                    return check_cy(
                        u2, _cached_cutoff(g2, 2.0, 13.0), k, 13.0, variant, (t,)
                    )[0]

                rep = _refined(rep, rebuild)
            reports.append(_with_seed(rep, seed + i))
    return _ordered(reports)


def suite_cy1(seed: int = 0) -> list[CheckReport]:
    return _suite_cy(seed, "CY1", [(i, k) for i in range(10) for k in (1, 2)])


def suite_cy2(seed: int = 0) -> list[CheckReport]:
    return _suite_cy(seed, "CY2", [(i, 1) for i in range(20)])


def suite_growth(seed: int = 0) -> list[CheckReport]:
    from .spectral import sample_field

    reports = []
    # zero data: trivially bounded by any k0 >= 0
    gz = make_grid(1, 10.0, 128)
    zero = ScalarField(gz, np.zeros(128))
    reports.append(
        _with_seed(check_growth(run_trajectory(zero, [0.1, 1.0]), 0.0), seed)
    )
    # eigenfunction data sin(x): t e^{-2t} sin^2 <= max_t t e^{-2t} = 1/(2e)
    ge = make_grid(1, math.pi, 256)
    sin_field = sample_field(ge, np.sin)
    traj = run_trajectory(sin_field, [0.1, 0.3, 0.5, 1.0])
    reports.append(
        _with_seed(
            check_growth(traj, 1.0 / (2.0 * math.e), tolerance=1e-12), seed
        )
    )
    # step solution attains its rate constant exactly (analytic samples)
    a = _step_analysis()
    worst = 0.0
    for s in (0.1, 0.3, 1.0, 3.0):
        x_s = a.xi_star * s**0.25
        uxx = a.profile.evaluate(x_s / s**0.25, 1) / math.sqrt(s)
        worst = max(worst, s * uxx**2)
    reports.append(
        _with_seed(
            CheckReport(
                name="growth-bound",
                lhs=worst,
                rhs=a.k0_star,
                tolerance=1e-9 * a.k0_star,
                context={"data": "step-analytic", "k0": a.k0_star},
            ),
            seed,
        )
    )
    return _ordered(reports)


def suite_theorem1(seed: int = 0) -> list[CheckReport]:
    from .stepexample import StepSolution

    sol = StepSolution(_step_analysis().profile)
    tg = np.geomspace(1e-2, 1.0, 60)
    xg = np.linspace(-1.0, 1.0, 401)
    n_min = minimal_region_constant(sol, tg, xg)
    tg2 = np.geomspace(1e-2, 1.0, 120)
    xg2 = np.linspace(-1.0, 1.0, 801)
    n_min2 = minimal_region_constant(sol, tg2, xg2)
    reports = [
        _with_seed(check_theorem1_region(sol, 2.0 * n_min, tg, xg), seed),
        _with_seed(
            CheckReport(
                name="region-constant-stability",
                lhs=abs(n_min2 - n_min) / n_min,
                rhs=0.05,
                tolerance=0.0,
                context={"N_base": n_min, "N_refined": n_min2},
            ),
            seed,
        ),
    ]
    # flat series solution: region values finite (flatness dominates near t=0)
    ty = TychonoffSolution()
    tg_ty = np.geomspace(0.05, 1.0, 8)
    xg_ty = np.linspace(-1.0, 1.0, 41)
    worst, count = _region_scan(
        ty,
        1.0,
        tg_ty,
        xg_ty,
        lambda xs, t: dist_to_boundary(xs) ** 4 * np.asarray(ty.lap_u(xs, t)) ** 2,
    )
    reports.append(
        _with_seed(
            CheckReport(
                name="flat-solution-region-finite",
                lhs=0.0 if math.isfinite(worst) else math.inf,
                rhs=0.0,
                tolerance=0.0,
                context={"max_e": worst, "points_scanned": count},
            ),
            seed,
        )
    )
    return _ordered(reports)


def suite_uniqueness(seed: int = 0) -> list[CheckReport]:
    grid = make_grid(1, 10.0, 512)
    times = np.array([0.1, 0.2, 0.5, 1.0])
    reports = []
    for i in range(3):
        u0 = random_band_limited(grid, seed + i)
        reports.append(_with_seed(uniqueness_experiment(u0, times), seed + i))
    # a small data perturbation dissipates in integral |Lap .|^2 over time
    diff0 = random_band_limited(grid, seed + 7, amplitude=1e-6)
    e_early = weighted_energy(evolve(diff0, 0.1), 1, None)
    e_late = weighted_energy(evolve(diff0, 0.5), 1, None)
    reports.append(
        _with_seed(
            CheckReport(
                name="difference-dissipation",
                lhs=e_late,
                rhs=e_early,
                tolerance=0.0,
                context={"t_early": 0.1, "t_late": 0.5},
            ),
            seed + 7,
        )
    )
    # the flat series solution shares data with zero at t = 0 yet escapes
    # the growth hypothesis: its monitor t u_xx^2 grows without bound in x
    from .tychonoff import hypothesis_violation_scan

    rows = hypothesis_violation_scan(0.5, [2.0, 3.0])
    ratio = rows[1]["monitor"] / rows[0]["monitor"]
    reports.append(
        _with_seed(
            CheckReport(
                name="hypothesis-violation-growth",
                lhs=10.0,
                rhs=ratio,
                tolerance=0.0,
                context={
                    "t": 0.5,
                    "monitor_at_2": rows[0]["monitor"],
                    "monitor_at_3": rows[1]["monitor"],
                },
            ),
            seed,
        )
    )
    return _ordered(reports)


def _ordered(reports: list[CheckReport]) -> list[CheckReport]:
    """Deterministic collection order keyed by (name, seed, parameters)."""
    import json as _json

    def key(r: CheckReport):
        d = r.as_dict()
        return (d["name"], str(d["seed"]), _json.dumps(d["params"], sort_keys=True))

    return sorted(reports, key=key)


SUITES = {
    "lm1": suite_lm1,
    "interp1": suite_interp1,
    "interp2": suite_interp2,
    "cy1": suite_cy1,
    "cy2": suite_cy2,
    "growth": suite_growth,
    "theorem1": suite_theorem1,
    "uniqueness": suite_uniqueness,
}


def run_suite(name: str, seed: int = 0) -> list[CheckReport]:
    if name == "all":
        out = []
        for key in ("lm1", "interp1", "interp2", "cy1", "cy2", "growth", "theorem1", "uniqueness"):
            out.extend(SUITES[key](seed))
        return out
    if name not in SUITES:
        raise ParameterError(
            f"suite: unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'"
        )
    return SUITES[name](seed)
