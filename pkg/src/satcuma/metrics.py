"""System-level performance metrics: outage probability, ergodic rate and
mean SINR/SNR, all built on the adaptive quadrature engine.

Outage comes in two flavours.  The exact form integrates the signal-power
density against the Gaussian interference CDF (a single smooth integral
after the endpoint substitution); the compact form is the closed-form
high-density limit.  Both are clamped to [0, 1]: the truncated-Gaussian
normalization ignores the noise-floor shift of the support, which can push
the raw value marginally above one near and beyond the SINR supremum (the
clamp is recorded in the result warnings).

Noise-only scenarios (U = 1) bypass the Gaussian machinery entirely: the
SINR is then a deterministic rescaling of the signal power and every metric
reduces to a signal-distribution integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import distributions as dist
from .quadrature import QuadratureSpec, integrate
from .scenario import Scenario

WARN_ODD_MU = "odd-mu"
WARN_CLAMPED = "clamped"
WARN_QUAD_LIMIT = "quadrature-limit"

METRIC_SPEC = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-9, max_subdivisions=2000)


@dataclass(frozen=True)
class MetricResult:
    value: float
    est_error: float
    warnings: tuple = ()

    def __post_init__(self):
        if self.est_error < 0:
            raise ValueError("est_error must be non-negative")


def _scenario_warnings(sc: Scenario) -> tuple:
    return (WARN_ODD_MU,) if not sc.antenna.mu_is_even_integer else ()


def sinr_supremum(sc: Scenario) -> float:
    """Largest attainable SINR, 2*Gamma*zeta_u/(Kbar*V^2): maximum signal
    power over the noise floor alone."""
    return sc.zeta_u / (sc.V ** 2 * sc.noise_term)


def mean_signal_power_closed(sc: Scenario) -> float:
    """Closed-form mean of the signal power,
    (zeta/(2 V^2)) * (1 + mu*sin(2*pi/mu)/(2*pi))."""
    mu = sc.mu
    return (sc.zeta_u / (2.0 * sc.V ** 2)) * (1.0 + mu * math.sin(2.0 * math.pi / mu) / (2.0 * math.pi))


def _clamp01(value: float, warnings: tuple) -> tuple:
    if value < 0.0 or value > 1.0:
        return min(max(value, 0.0), 1.0), warnings + (WARN_CLAMPED,)
    return value, warnings


def _z_breakpoints(sc: Scenario) -> tuple:
    """Seed points for integrals over the SINR axis.

    The SINR density concentrates where the interference-plus-noise variable
    sits within a few kappa of its mean, plus the band induced by the signal
    support; both can be a tiny fraction of (0, supremum], so adaptive
    refinement needs them in the initial panelization.
    """
    z_sup = sinr_supremum(sc)
    zeta, V = sc.zeta_u, sc.V
    pts = [z_sup * math.cos(math.pi / sc.mu) ** 2]
    if sc.users.U > 1:
        params = dist.scenario_trunc_gauss(sc)
        m = params.omega + sc.noise_term
        for j in (-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0):
            bt = m + j * params.kappa
            if bt > sc.noise_term:
                pts.append(zeta / (V ** 2 * bt))
    return tuple(p for p in pts if 0.0 < p < z_sup)


def outage_exact(gamma: float, sc: Scenario,
                 spec: QuadratureSpec = METRIC_SPEC) -> MetricResult:
    """Outage probability P(SINR < gamma) from the single-integral form.

    Evaluated in the theta domain of the endpoint substitution
    alpha = (zeta/V^2) cos^2(theta), where the signal density becomes the
    constant mu/pi and the integrand is bounded and smooth.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    dist.require_analytic_density(sc.mu)
    warnings = _scenario_warnings(sc)

    if sc.users.U == 1:
        val = float(dist.signal_cdf(gamma * sc.noise_term, sc.zeta_u, sc.mu, sc.V))
        return MetricResult(value=val, est_error=0.0, warnings=warnings)

    params = dist.scenario_trunc_gauss(sc)
    zeta, V, mu = sc.zeta_u, sc.V, sc.mu
    m = params.omega + sc.noise_term
    kappa = params.kappa
    tmass = params.truncation_mass

    def integrand(theta):
        alpha = zeta * np.cos(theta) ** 2 / V ** 2
        return dist.std_normal_cdf((alpha / gamma - m) / kappa)

    res = integrate(integrand, 0.0, math.pi / mu, spec)
    if not res.converged:
        warnings = warnings + (WARN_QUAD_LIMIT,)
    raw = 1.0 / tmass - (mu / (math.pi * tmass)) * res.value
    val, warnings = _clamp01(raw, warnings)
    return MetricResult(value=val, est_error=(mu / (math.pi * tmass)) * res.est_error,
                        warnings=warnings)


def outage_exact_curve(gammas, sc: Scenario, n_panels: int = 16) -> np.ndarray:
    """Vectorized outage evaluation on a threshold grid.

    Fixed-order composite Gauss-Legendre over the theta domain (the
    integrand is smooth), evaluated for all thresholds at once.  Accuracy is
    far below distribution-fit tolerances; use outage_exact for
    tolerance-controlled single values.
    """
    gammas = np.asarray(gammas, dtype=float)
    if np.any(gammas <= 0):
        raise ValueError("thresholds must be positive")
    dist.require_analytic_density(sc.mu)
    if sc.users.U == 1:
        return np.asarray(dist.signal_cdf(gammas * sc.noise_term, sc.zeta_u, sc.mu, sc.V))

    params = dist.scenario_trunc_gauss(sc)
    zeta, V, mu = sc.zeta_u, sc.V, sc.mu
    m = params.omega + sc.noise_term
    kappa = params.kappa
    tmass = params.truncation_mass

    nodes, weights = np.polynomial.legendre.leggauss(15)
    edges = np.linspace(0.0, math.pi / mu, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    theta = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()

    alpha = zeta * np.cos(theta) ** 2 / V ** 2
    args = (alpha[None, :] / gammas[:, None] - m) / kappa
    integral = dist.std_normal_cdf(args) @ w
    raw = 1.0 / tmass - (mu / (math.pi * tmass)) * integral
    return np.clip(raw, 0.0, 1.0)


def outage_compact(gamma: float, sc: Scenario) -> MetricResult:
    """Closed-form outage for the compact (high-density) regime."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    warnings = _scenario_warnings(sc)
    if sc.users.U == 1:
        # deterministic signal in the compact limit: outage is a step at the supremum
        val = 1.0 if gamma > sinr_supremum(sc) else 0.0
        return MetricResult(value=val, est_error=0.0, warnings=warnings)
    params = dist.scenario_trunc_gauss(sc)
    arg = (sc.zeta_u / (gamma * params.kappa * sc.V ** 2)
           - sc.noise_term / params.kappa - params.omega / params.kappa)
    raw = (1.0 - float(dist.std_normal_cdf(arg))) / params.truncation_mass
    val, warnings = _clamp01(raw, warnings)
    return MetricResult(value=val, est_error=0.0, warnings=warnings)


def outage_exact_double_integral(gamma: float, sc: Scenario,
                                 spec: QuadratureSpec = METRIC_SPEC) -> MetricResult:
    """Outage via direct integration of the SINR density.

    Cross-check route for the single-integral reduction; the two must agree
    within quadrature tolerance.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    warnings = _scenario_warnings(sc)
    upper = min(gamma, sinr_supremum(sc))
    if upper <= 0:
        return MetricResult(0.0, 0.0, warnings)

    def f(z):
        return np.array([dist.sinr_pdf_exact(zz, sc, spec) for zz in np.atleast_1d(z)])

    res = integrate(f, 0.0, upper, spec, breakpoints=_z_breakpoints(sc))
    if not res.converged:
        warnings = warnings + (WARN_QUAD_LIMIT,)
    val, warnings = _clamp01(res.value, warnings)
    return MetricResult(value=val, est_error=res.est_error, warnings=warnings)


def ergodic_rate(sc: Scenario, outage: str = "exact",
                 spec: QuadratureSpec = METRIC_SPEC) -> MetricResult:
    """Network ergodic rate (U*B/ln 2) * integral of (1 - outage(y))/(1+y).

    The integrand is exactly zero beyond the SINR supremum (the clamped
    outage reaches one there for both outage forms), so the upper limit is
    truncated at the supremum.
    """
    if outage not in ("exact", "compact"):
        raise ValueError(f"outage must be 'exact' or 'compact', got {outage!r}")
    warnings = _scenario_warnings(sc)
    z_sup = sinr_supremum(sc)
    U, B = sc.users.U, sc.budget.B

    if sc.users.U == 1:
        def survival(y):
            y = np.atleast_1d(np.asarray(y, dtype=float))
            return 1.0 - np.asarray(
                dist.signal_cdf(y * sc.noise_term, sc.zeta_u, sc.mu, sc.V))
    elif outage == "exact":
        def survival(y):
            vals = []
            for yy in np.atleast_1d(y):
                r = outage_exact(float(yy), sc, spec)
                vals.append(1.0 - r.value)
            return np.asarray(vals)
    else:
        def survival(y):
            return 1.0 - np.asarray(dist.sinr_cdf_compact(np.asarray(y, dtype=float), sc))

    def integrand(y):
        return survival(y) / (1.0 + np.asarray(y, dtype=float))

    res = integrate(integrand, 0.0, z_sup, spec, breakpoints=_z_breakpoints(sc))
    if not res.converged:
        warnings = warnings + (WARN_QUAD_LIMIT,)
    scale = U * B / math.log(2.0)
    return MetricResult(value=scale * res.value, est_error=scale * res.est_error,
                        warnings=warnings)


def mean_sinr(sc: Scenario, spec: QuadratureSpec = METRIC_SPEC) -> float:
    """Mean SINR as the first moment of the SINR density over its support."""
    if sc.users.U == 1:
        return mean_snr(sc, spec)
    z_sup = sinr_supremum(sc)

    def f(z):
        zz = np.atleast_1d(z)
        return np.array([w * dist.sinr_pdf_exact(w, sc, spec) for w in zz])

    return integrate(f, 0.0, z_sup, spec, breakpoints=_z_breakpoints(sc)).value


def mean_snr(sc: Scenario, spec: QuadratureSpec = METRIC_SPEC) -> float:
    """Mean SNR of the noise-only link, (2*Gamma/Kbar) * E[signal power].

    The moment integral runs over the signal density with the endpoint
    substitution; mean_snr_compact gives the closed-form high-density limit.
    """
    zeta, mu, V = sc.zeta_u, sc.mu, sc.V
    sup = dist.signal_support(zeta, mu, V)
    sub = QuadratureSpec(spec.abs_tol, spec.rel_tol, spec.max_subdivisions, "trig-endpoint")

    def f(alpha):
        return np.asarray(alpha) * dist.signal_pdf(alpha, zeta, mu, V)

    res = integrate(f, sup.lo, sup.hi, sub, singular_scale=sup.hi)
    return (2.0 * sc.Gamma / sc.Kbar) * res.value


def mean_snr_compact(sc: Scenario) -> float:
    """Compact-regime mean SNR 4*Gamma*zeta_u*(K-1)/pi^2: the linear
    beamforming-gain law in the port count."""
    return 4.0 * sc.Gamma * sc.zeta_u * (sc.antenna.K - 1) / math.pi ** 2
