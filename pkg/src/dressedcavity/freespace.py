"""Survival amplitude in the infinite-radius (free-space) limit.

When the cavity radius grows without bound the mode sum for f_00 becomes

    f_00(t) = (4g/pi) * int_0^inf  x^2 e^{-i x t} / [(x^2-w^2)^2 + 4g^2x^2] dx

with w the renormalized atom frequency.  The integrand has a resonance
shoulder of width ~g around w and an oscillatory 1/x^2 tail, so the
quadrature splits [0, inf) at the shoulder points {w-2g, w+2g} and then
integrates half-period by half-period (width pi/t), accelerating the
alternating partial sums by repeated averaging.  In the weak-coupling
regime the real part also has the exact closed form

    Re f_00(t) = e^{-gt} [cos(kappa t) - (g/kappa) sin(kappa t)],

kappa = sqrt(w^2 - g^2), while the imaginary part G(t) stays a quadrature.
"""

from __future__ import annotations

import warnings
from collections import deque

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import ApproximationDomainError, QuadratureError, RegimeError
from .params import REGIME_WEAK, SystemParams

#: default absolute accuracy of the semi-infinite quadratures
DEFAULT_TOL = 1e-8

_MAX_HALF_PERIODS = 128
_EULER_WINDOW = 24


def _spectral_weight(params: SystemParams):
    w2 = params.omega_bar**2
    g2 = params.g**2

    def f(x: float) -> float:
        x2 = x * x
        return x2 / ((x2 - w2) ** 2 + 4.0 * g2 * x2)

    return f


def _shoulders(params: SystemParams) -> tuple[float, ...]:
    """Panel boundaries isolating the resonance peak.

    The base split points sit at omega_bar -+ 2g.  When the resonance is
    much narrower than its position (2g below omega_bar/4) the flanks
    still span several decades, so doubling offsets are inserted until
    they clear the resonance scale; for broad resonances this reduces to
    the two base points.
    """
    w, g = params.omega_bar, params.g
    points = {w - 2.0 * g, w + 2.0 * g}
    offset = 4.0 * g
    while offset < w:
        points.update((w - offset, w + offset))
        offset *= 2.0
    return tuple(sorted(p for p in points if p > 0.0))


def _euler_limit(partial_sums: list[float]) -> float:
    """Limit estimate of alternating partial sums by repeated averaging."""
    arr = np.array(partial_sums[-_EULER_WINDOW:])
    while arr.size > 1:
        arr = 0.5 * (arr[1:] + arr[:-1])
    return float(arr[0])


def _panel(f, a, b, kind, t, epsabs):
    # panel-level error budgeting replaces QUADPACK's warning policy; the
    # oscillatory-weight routine only pays off beyond a few periods per
    # panel, and its reported error carries a coarse roundoff floor, so
    # mildly oscillatory panels use plain adaptive Gauss-Kronrod instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if t * (b - a) <= 20.0:
            trig = np.cos if kind == "cos" else np.sin
            return quad(
                lambda x: f(x) * trig(t * x),
                a, b, epsabs=epsabs, epsrel=1e-12, limit=200,
            )
        return quad(
            f, a, b, weight=kind, wvar=t, epsabs=epsabs, epsrel=1e-12, limit=200
        )


def _fourier_semi_infinite(
    params: SystemParams, t: float, kind: str, tol: float
) -> tuple[float, float]:
    """int_0^inf f(x) * {cos,sin}(x t) dx for the spectral weight f.

    Shoulder panels first, then half-period panels whose alternating
    partial sums are accelerated by repeated averaging; convergence is
    declared once two consecutive accelerated estimates agree within the
    budget.  Returns (value, achieved error estimate) and raises
    QuadratureError when the estimate cannot be brought below ``tol``
    within the panel budget.
    """
    if tol <= 0.0:
        raise QuadratureError("tolerance must be positive", achieved=np.inf)
    f = _spectral_weight(params)
    shoulders = _shoulders(params)
    epsabs = max(tol / 100.0, 1e-13)

    if t == 0.0:
        if kind == "sin":
            return 0.0, 0.0
        # no oscillation: finite head plus an inverted tail that maps the
        # 1/x^2 decay onto a bounded integrand
        cut = max(10.0 * shoulders[-1], 50.0)
        head, e1 = quad(f, 0.0, cut, points=shoulders, epsabs=epsabs,
                        epsrel=1e-12, limit=400)
        tail, e2 = quad(
            lambda u: f(1.0 / u) / (u * u),
            0.0,
            1.0 / cut,
            epsabs=epsabs,
            epsrel=1e-12,
            limit=400,
        )
        est = e1 + e2
        if est > tol:
            raise QuadratureError("non-oscillatory quadrature too inaccurate", est)
        return head + tail, est

    total = 0.0
    head_est = 0.0
    prev = 0.0
    for s in shoulders:
        v, e = _panel(f, prev, s, kind, t, epsabs)
        total += v
        head_est += e
        prev = s

    half = np.pi / t
    running = 0.0
    sums: list[float] = []
    window_est: deque = deque(maxlen=_EULER_WINDOW)
    prev_accel = None
    gap = prev_gap = np.inf
    accel = np.nan
    x = prev
    for j in range(_MAX_HALF_PERIODS):
        v, e = _panel(f, x, x + half, kind, t, epsabs)
        running += v
        window_est.append(e)
        sums.append(running)
        x += half
        if j >= 7:
            accel = _euler_limit(sums)
            if prev_accel is not None:
                prev_gap, gap = gap, abs(accel - prev_accel)
                achieved = head_est + sum(window_est) + gap + prev_gap
                if gap < 0.25 * tol and prev_gap < 0.25 * tol and achieved <= tol:
                    return total + accel, achieved
            prev_accel = accel
    achieved = head_est + sum(window_est) + gap + prev_gap
    raise QuadratureError("oscillatory tail did not converge", achieved)


def freespace_f00_numeric(
    params: SystemParams, t: float, tol: float = DEFAULT_TOL
) -> complex:
    """Free-space f_00(t) by direct quadrature, any coupling regime.

    Real part (4g/pi) * cos transform, imaginary part -(4g/pi) * sin
    transform of the spectral weight, each to absolute accuracy ``tol``.
    """
    if t < 0.0:
        raise ApproximationDomainError("t must be non-negative")
    pref = 4.0 * params.g / np.pi
    re, _ = _fourier_semi_infinite(params, t, "cos", tol=tol / pref)
    im, _ = _fourier_semi_infinite(params, t, "sin", tol=tol / pref)
    return complex(pref * re, -pref * im)


def g_integral(params: SystemParams, t: float, tol: float = DEFAULT_TOL) -> float:
    """Imaginary part of the free-space amplitude,

    G(t) = -(4g/pi) * int_0^inf x^2 sin(x t) / [(x^2-w^2)^2 + 4g^2x^2] dx,

    to absolute accuracy ``tol``.  G(0) = 0 exactly.
    """
    if t < 0.0:
        raise ApproximationDomainError("t must be non-negative")
    pref = 4.0 * params.g / np.pi
    val, _ = _fourier_semi_infinite(params, t, "sin", tol=tol / pref)
    return -pref * val


def freespace_f00_closed(
    params: SystemParams, t: float, tol: float = DEFAULT_TOL
) -> complex:
    """Weak-coupling f_00(t): exact damped-oscillation real part plus i G(t).

    Raises :class:`RegimeError` outside the weak regime; use
    :func:`freespace_f00_numeric` there.
    """
    if params.regime != REGIME_WEAK:
        raise RegimeError(
            "closed form needs g < omega_bar; use freespace_f00_numeric"
        )
    if t < 0.0:
        raise ApproximationDomainError("t must be non-negative")
    kappa = params.kappa
    g = params.g
    re = np.exp(-g * t) * (np.cos(kappa * t) - (g / kappa) * np.sin(kappa * t))
    return complex(re, g_integral(params, t, tol=tol))


def freespace_survival_asymptotic(params: SystemParams, t: float) -> float:
    """Large-time survival probability estimate,

    e^{-2gt} [cos(w t) - (g/w) sin(w t)]^2 + 64 g^2 / (w^8 t^6).

    Undefined at t = 0 because of the t^(-6) term.
    """
    if params.regime != REGIME_WEAK:
        raise RegimeError("asymptotic form needs g < omega_bar")
    if t <= 0.0:
        raise ApproximationDomainError("asymptotic form needs t > 0")
    w = params.omega_bar
    g = params.g
    osc = np.exp(-2.0 * g * t) * (np.cos(w * t) - (g / w) * np.sin(w * t)) ** 2
    return float(osc + 64.0 * g**2 / (w**8 * t**6))
