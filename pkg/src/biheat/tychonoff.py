"""Non-uniqueness series u(x,t) = sum_j g_j(t) x1^(2jk) for dt u = sigma Lap^k u.

g_0(t) = exp(-t^{-p}) is flat at t = 0; the higher coefficients are
g_j = sigma^j g_0^{(j)}(t) / (2jk)!.  The derivatives g_0^{(j)} come from the
Cauchy integral on the circle of radius rho = t/2 around t, evaluated by the
trapezoid rule (one FFT yields every order at once).  All series terms are
assembled in log space with explicit signs, and every returned value carries
a certified truncation bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, QuadratureError

_M_MAX = 2**16
_J_CAP = 4000


def epsilon0_of(p: float) -> float:
    """Flatness constant for the radius-t/2 contour: cos(p*pi/6)."""
    return math.cos(p * math.pi / 6.0)


def theta0_of(t: float) -> float:
    """Half-opening angle of the contour seen from the origin, arctan(rho /
    sqrt(t^2 - rho^2)) with rho = t/2; equals pi/6 for every t."""
    if t <= 0:
        raise ParameterError(f"t: must be positive, got {t}")
    rho = t / 2.0
    return math.atan(rho / math.sqrt(t * t - rho * rho))


@dataclass(frozen=True)
class TychonoffParams:
    k: int = 2
    p: float = 2.0
    sigma: int = -1
    J: int = 40
    M: int = 1024

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k: must be >= 1, got {self.k}")
        if not 1.0 < self.p < 3.0:
            raise ParameterError(
                f"p: need 1 < p < 3 so that epsilon0 = cos(p*pi/6) > 0, got {self.p}"
            )
        if self.sigma not in (-1, 1):
            raise ParameterError(f"sigma: must be +1 or -1, got {self.sigma}")
        if self.J < 0:
            raise ParameterError(f"J: must be >= 0, got {self.J}")
        if self.M < 64 or self.M % 2:
            raise ParameterError(f"M: must be even and >= 64, got {self.M}")

    @property
    def epsilon0(self) -> float:
        return epsilon0_of(self.p)


@dataclass(frozen=True)
class SeriesValue:
    value: float
    tail_bound: float
    terms_used: int
    warning: str | None = None


def _contour_h(t: float, p: float, M: int) -> np.ndarray:
    """h(z) = exp(-z^{-p}) on the M contour nodes, conjugate-symmetrized."""
    theta = 2.0 * math.pi * np.arange(M // 2 + 1) / M
    z = t + (t / 2.0) * np.exp(1j * theta)
    with np.errstate(under="ignore"):
        h_half = np.exp(-(z ** (-p)))
    h = np.empty(M, dtype=complex)
    h[: M // 2 + 1] = h_half
    h[M // 2 + 1:] = np.conj(h_half[1 : M // 2][::-1])
    return h


def _contour_coeffs_fixed(jmax: int, t: float, p: float, M: int) -> np.ndarray:
    """S_j = (1/M) sum_m h(z_m) e^{-i j theta_m} for j = 0..jmax (complex)."""
    if M <= jmax:
        raise ParameterError(f"M: need M > jmax = {jmax}, got {M}")
    S = np.fft.fft(_contour_h(t, p, M)) / M
    return S[: jmax + 1]


def _contour_coeffs(jmax: int, t: float, p: float, M0: int) -> np.ndarray:
    """Real Taylor-scaled coefficients with automatic node doubling.

    Doubles M until two successive evaluations agree to 1e-10 relative
    (entries at the rounding floor pass on an absolute slack) or M = 2^16.
    """
    M = M0
    while M <= jmax:
        M *= 2
    if M > _M_MAX:
        raise ParameterError(f"jmax = {jmax} needs more than {_M_MAX} contour nodes")
    prev = _contour_coeffs_fixed(jmax, t, p, M).real
    while M < _M_MAX:
        M *= 2
        cur = _contour_coeffs_fixed(jmax, t, p, M).real
        scale = max(1e-300, float(np.max(np.abs(cur))))
        if np.all(np.abs(cur - prev) <= 1e-10 * np.abs(cur) + 1e-13 * scale):
            return cur
        prev = cur
    return prev


def g0_derivative(j: int, t: float, p: float, M: int = 1024) -> float:
    """j-th derivative of g_0(t) = exp(-t^{-p}) by contour quadrature."""
    if t <= 0:
        raise ParameterError(f"t: must be positive, got {t}")
    if j < 0:
        raise ParameterError(f"j: must be >= 0, got {j}")
    if M < 64 or M % 2:
        raise ParameterError(f"M: must be even and >= 64, got {M}")
    S = _contour_coeffs_fixed(j, t, p, M)[j]
    scale = math.exp(math.lgamma(j + 1) - j * math.log(t / 2.0))
    result = scale * S.real
    if scale * abs(S.imag) > 1e-10 * (1.0 + abs(result)):
        raise QuadratureError(
            f"contour quadrature left a non-negligible imaginary part at "
            f"j={j}, t={t}; increase M (got M={M})"
        )
    return result


def g0_log_derivatives(jmax: int, t: float, params: TychonoffParams):
    """(signs, log-magnitudes) of g_0^{(j)}(t) for j = 0..jmax."""
    if t <= 0:
        raise ParameterError(f"t: must be positive, got {t}")
    S = _contour_coeffs(jmax, t, params.p, params.M)
    j = np.arange(jmax + 1)
    with np.errstate(divide="ignore"):
        logmag = (
            np.vectorize(math.lgamma)(j + 1.0)
            - j * math.log(t / 2.0)
            + np.log(np.abs(S))
        )
    return np.sign(S), logmag


def series_coefficient(j: int, t: float, params: TychonoffParams) -> float:
    """g_j(t) = sigma^j g_0^{(j)}(t) / (2jk)!, factorial taken in log space."""
    if j < 0:
        raise ParameterError(f"j: must be >= 0, got {j}")
    signs, logmag = g0_log_derivatives(j, t, params)
    lm = logmag[j] - math.lgamma(2 * j * params.k + 1)
    sgn = float(signs[j]) * (params.sigma**j)
    return sgn * math.exp(lm) if lm > -700 else 0.0


def _term_logs(x1, t, params, time_order, space_order, jmax, coeffs=None):
    """Signed log-magnitude of each series term after term-wise derivatives.

    Term j of (d/dt)^time_order (d/dx)^space_order u is
    sigma^{j+time_order} g0^{(j+time_order)} / (2jk)! * (2jk)!/(e)! * x^e
    with e = 2jk - space_order (terms with e < 0 vanish).
    """
    if coeffs is None:
        coeffs = g0_log_derivatives(jmax + time_order, t, params)
    signs_g, logmag_g = coeffs
    j = np.arange(jmax + 1)
    jj = j + time_order
    e = 2 * j * params.k - space_order
    valid = e >= 0
    j, jj, e = j[valid], jj[valid], e[valid]
    lgam = np.vectorize(math.lgamma)
    logterm = logmag_g[jj] - lgam(e + 1.0)
    # d/dt leaves the sigma^j of g_j untouched (the shift to g0^{(j+1)} has
    # no sign of its own), so the power is j, not j + time_order
    sign = signs_g[jj] * (float(params.sigma) ** j)
    ax = abs(float(x1))
    if ax > 0.0:
        logterm = logterm + e * math.log(ax)
        if x1 < 0:
            sign = sign * np.where(e % 2 == 0, 1.0, -1.0)
    else:
        logterm = np.where(e == 0, logterm, -np.inf)
    return sign, logterm


def _signed_fsum(signs, logterms) -> float:
    vals = [
        s * math.exp(lt)
        for s, lt in zip(signs, logterms)
        if s != 0 and lt > -745 and math.isfinite(lt)
    ]
    for s, lt in zip(signs, logterms):
        if lt > 709:
            raise QuadratureError("series term overflows float range")
    return math.fsum(vals)


def _closed_form_tail(x1, t, params, J) -> tuple[float, bool]:
    """exp(-eps0 (2t)^{-p}) z^{J+1}/(J+1)! / (1 - z/(J+2)) with
    z = 2|x1|^{2k}/t; second entry reports validity (z < J+2)."""
    z = 2.0 * abs(x1) ** (2 * params.k) / t
    if z >= J + 2:
        return math.inf, False
    if z == 0.0:
        return 0.0, True
    log_tail = (
        -params.epsilon0 * (2.0 * t) ** (-params.p)
        + (J + 1) * math.log(z)
        - math.lgamma(J + 2)
        - math.log1p(-z / (J + 2))
    )
    return (math.exp(log_tail) if log_tail < 709 else math.inf), True


def _derivative_tail(x1, t, params, J, time_order, space_order) -> float:
    """Certified remainder for the differentiated series past index J.

    Bounds |g0^{(j+time_order)}| by (j+time_order)! 2^{j+time_order}
    t^{-(j+time_order)} exp(-eps0 (2t)^{-p}) (the contour estimate), sums the
    resulting majorant terms explicitly until they at least halve, then
    completes geometrically.
    """
    c = params.epsilon0 * (2.0 * t) ** (-params.p)
    ax = abs(float(x1))
    log2t = math.log(2.0 / t)
    if ax == 0.0:
        # only a term with exponent 2jk - space_order == 0 survives at the
        # origin; the single candidate is j = space_order / (2k)
        if space_order == 2 * params.k and J < 1:
            jj = 1 + time_order
            return math.exp(-c + math.lgamma(jj + 1) + jj * log2t)
        return 0.0
    total = 0.0
    prev_log = None
    for j in range(J + 1, J + 100001):
        jj = j + time_order
        e = 2 * j * params.k - space_order
        if e < 0:
            continue
        log_b = (
            -c
            + math.lgamma(jj + 1)
            + jj * log2t
            - math.lgamma(e + 1)
            + e * math.log(ax)
        )
        total += math.exp(log_b) if log_b > -745 else 0.0
        if prev_log is not None and log_b <= prev_log - math.log(2.0):
            # terms now at least halve; remaining sum <= last term
            total += math.exp(log_b) if log_b > -745 else 0.0
            return total
        prev_log = log_b
    raise QuadratureError("derivative tail majorant failed to decay")


def _tail_ok(tail: float, value: float, log_floor: float) -> bool:
    if tail <= 1e-10 * abs(value):
        return True
    if tail <= 0.0:
        return True
    return math.isfinite(tail) and math.log(tail) <= log_floor


def eval_u(x1: float, t: float, params: TychonoffParams | None = None) -> SeriesValue:
    """Partial sum over j <= J with the certified remainder; J is raised
    automatically until the remainder formula is valid and small."""
    if params is None:
        params = TychonoffParams()
    if t <= 0:
        raise ParameterError(f"t: must be positive, got {t}")
    z = 2.0 * abs(x1) ** (2 * params.k) / t
    # tail is negligible once it is tiny against the certified sup bound
    # exp(-eps0 (2t)^{-p} + z) -- the natural scale when the value underflows
    log_floor = min(
        -params.epsilon0 * (2.0 * t) ** (-params.p) + z - 37.0, math.log(1e-16)
    )
    J = max(params.J, int(math.ceil(z)) + 2)
    coeffs = None
    while True:
        coeffs = g0_log_derivatives(J, t, params)
        signs, logterms = _term_logs(x1, t, params, 0, 0, J, coeffs)
        value = _signed_fsum(signs, logterms)
        tail, valid = _closed_form_tail(x1, t, params, J)
        if valid and _tail_ok(tail, value, log_floor):
            break
        if J >= _J_CAP:
            break
        J = min(_J_CAP, max(2 * J, J + 32))
    warning = None
    if tail > 0.5 * abs(value) and value != 0.0:
        warning = (
            f"truncation bound {tail:.3e} exceeds half the value "
            f"{value:.3e}; raise J beyond {J}"
        )
    return SeriesValue(value=value, tail_bound=tail, terms_used=J + 1, warning=warning)


def eval_derivative(
    x1: float,
    t: float,
    orders: tuple[int, int],
    params: TychonoffParams | None = None,
    auto_extend: bool = True,
) -> SeriesValue:
    """Term-wise (d/dt)^a (d/dx)^b of the series, a <= 1, b <= 2k.

    The time derivative shifts to g_{j+1} through the coefficient
    recurrence; it is never taken by finite differences.
    """
    if params is None:
        params = TychonoffParams()
    time_order, space_order = orders
    if t <= 0:
        raise ParameterError(f"t: must be positive, got {t}")
    if time_order not in (0, 1):
        raise ParameterError(f"time_order: must be 0 or 1, got {time_order}")
    if not 0 <= space_order <= 2 * params.k:
        raise ParameterError(
            f"space_order: must be in [0, 2k] = [0, {2 * params.k}], got {space_order}"
        )
    z = 2.0 * abs(x1) ** (2 * params.k) / t
    log_floor = min(
        -params.epsilon0 * (2.0 * t) ** (-params.p) + z - 37.0, math.log(1e-16)
    )
    J = params.J
    while True:
        signs, logterms = _term_logs(x1, t, params, time_order, space_order, J)
        value = _signed_fsum(signs, logterms)
        tail = _derivative_tail(x1, t, params, J, time_order, space_order)
        if not auto_extend or _tail_ok(tail, value, log_floor) or J >= _J_CAP:
            break
        J = min(_J_CAP, max(2 * J, J + 32))
    warning = None
    if tail > 0.5 * abs(value) and value != 0.0:
        warning = (
            f"truncation bound {tail:.3e} exceeds half the value "
            f"{value:.3e}; raise J beyond {J}"
        )
    return SeriesValue(value=value, tail_bound=tail, terms_used=J + 1, warning=warning)


def _recurrence_factor(j: int, k: int) -> float:
    """(2jk + 2k)(2jk + 2k - 1) ... (2jk + 1) = (2(j+1)k)! / (2jk)!."""
    out = 1.0
    for i in range(2 * j * k + 1, 2 * (j + 1) * k + 1):
        out *= i
    return out


def truncated_residual_closed_form(x1: float, t: float, params: TychonoffParams | None = None) -> float:
    """(d/dt - sigma Lap^k) of the J-truncated series; telescoping leaves
    exactly sigma * (2Jk+2k)...(2Jk+1) * g_{J+1}(t) * x1^{2Jk}."""
    if params is None:
        params = TychonoffParams()
    J, k = params.J, params.k
    signs, logmag = g0_log_derivatives(J + 1, t, params)
    # the recurrence factor cancels the (2(J+1)k)! of g_{J+1} down to (2Jk)!
    lm = logmag[J + 1] - math.lgamma(2 * J * k + 1)
    sgn = params.sigma * (params.sigma ** (J + 1)) * float(signs[J + 1])
    ax = abs(float(x1))
    if ax == 0.0:
        if J > 0:
            return 0.0
    else:
        lm += 2 * J * k * math.log(ax)
    return sgn * math.exp(lm) if lm > -745 else 0.0


def truncated_residual_direct(x1: float, t: float, params: TychonoffParams | None = None) -> float:
    """(d/dt - sigma Lap^k) of the J-truncated series, both pieces summed
    independently (no telescoping short-cut)."""
    if params is None:
        params = TychonoffParams()
    J = params.J
    coeffs = g0_log_derivatives(J + 1, t, params)
    s_t, l_t = _term_logs(x1, t, params, 1, 0, J, coeffs)
    dt_part = _signed_fsum(s_t, l_t)
    s_x, l_x = _term_logs(x1, t, params, 0, 2 * params.k, J, coeffs)
    lap_part = _signed_fsum(s_x, l_x)
    return dt_part - params.sigma * lap_part


def lemma_bound_margin(j: int, t: float, params: TychonoffParams | None = None) -> float:
    """log of the contour bound j! 2^j t^{-j} exp(-eps0 (2t)^{-p}) minus
    log |g0^{(j)}(t)|; nonnegative when the bound holds."""
    if params is None:
        params = TychonoffParams()
    signs, logmag = g0_log_derivatives(j, t, params)
    log_bound = (
        math.lgamma(j + 1)
        + j * math.log(2.0 / t)
        - params.epsilon0 * (2.0 * t) ** (-params.p)
    )
    return log_bound - float(logmag[j])


def sup_on_interval(d: float, t: float, params: TychonoffParams | None = None, n: int = 201) -> float:
    """max over an n-point scan of |u| on [-d, d]."""
    if params is None:
        params = TychonoffParams()
    xs = np.linspace(-d, d, n)
    return max(abs(eval_u(float(x), t, params).value) for x in xs)


def hypothesis_violation_scan(t: float, x_samples, params: TychonoffParams | None = None):
    """Rows (x1, t |u_xx|^2, tail info): the growth monitor along x.

    Documents that the non-uniqueness solution escapes the bound
    t |Lap u|^2 <= k0 for every k0 as |x1| grows.
    """
    if params is None:
        params = TychonoffParams()
    if t <= 0:
        raise ParameterError(f"t: must be positive, got {t}")
    xs = np.asarray(x_samples, dtype=float)
    if xs.size > 1 and np.any(np.diff(xs) <= 0):
        raise ParameterError("x_samples: must be strictly increasing")
    rows = []
    for x in xs:
        sv = eval_derivative(float(x), t, (0, 2), params)
        rows.append(
            {
                "x1": float(x),
                "monitor": t * sv.value**2,
                "value": sv.value,
                "tail_bound": sv.tail_bound,
                "terms_used": sv.terms_used,
            }
        )
    return rows
