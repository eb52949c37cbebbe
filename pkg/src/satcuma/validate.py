"""Oracle-vs-analytic validation suite.

Runs the brute-force Monte-Carlo oracle against every closed form for a
given scenario and reports one pass/fail line per check: compact-form
equivalence, distribution fits (KS), outage agreement, stochastic
dominance, signal/interference independence, and the negative-set residual
bound.

Checks that are only meaningful in a particular regime (the aggregate
interference CLT fit below the massive-access regime, the compact SINR
density at low port density, everything compact-form at odd density) are
reported as informational: their statistics appear in the table but do not
affect the overall verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import core, distributions as dist, metrics, montecarlo as mc
from .scenario import Scenario

# fit tolerances as stated for n = 1e6 trials; below that, each check's
# effective threshold is floored at its own sampling-noise level so that a
# small --trials run stays meaningful without raising false alarms
KS_SIGNAL = 0.01
KS_INTERFERENCE = 0.01
KS_AGGREGATE = 0.02       # meaningful in the massive-access regime (U >= 20)
KS_SINR_COMPACT_MU = 10.0  # density at which the exact-fit bound tightens
KS_SINR_TIGHT = 0.01
KS_SINR_LOOSE = 0.015
KS_COMPACT_PDF = 0.10     # compact-form SINR fit bound at high density
OUTAGE_AGREEMENT = 0.01
INDEPENDENCE_BOUND = 0.01
EQUIVALENCE_REL = 1e-9
FSD_SIGMA = 3.0
EQUIVALENCE_SUBSAMPLE = 20000

_KS_NOISE_MULT = 2.5      # ~99.99% two-sided KS quantile multiplier
_CORR_NOISE_MULT = 4.0    # max over interferers of a null correlation


def _ks_floor(stated: float, n: int) -> float:
    return max(stated, _KS_NOISE_MULT / math.sqrt(n))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    statistic: float
    threshold: float
    note: str = ""
    informational: bool = False


@dataclass
class ValidationReport:
    scenario_label: str
    n_trials: int
    master_seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def render(self) -> str:
        lines = [
            f"validation: {self.scenario_label}  trials={self.n_trials}  seed={self.master_seed}",
            "-" * 78,
            f"{'check':34s} {'result':6s} {'statistic':>12s} {'threshold':>12s}  note",
        ]
        for c in self.checks:
            verdict = "PASS" if c.passed else ("info" if c.informational else "FAIL")
            lines.append(f"{c.name:34s} {verdict:6s} {c.statistic:12.5g} "
                         f"{c.threshold:12.5g}  {c.note}")
        lines.append("-" * 78)
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _scenario_label(sc: Scenario) -> str:
    return (f"K={sc.antenna.K} W={sc.antenna.W} U={sc.users.U} "
            f"mu={sc.antenna.mu} B={sc.budget.B:g}")


def _compact_equivalence(sc: Scenario, psi: np.ndarray) -> tuple:
    """Worst relative deviation between compact and brute-force powers.

    Deviations are normalized by the power scale zeta/V^2 so phase-nulled
    interference (power ~ 0) does not blow up the ratio.  The compact forms
    are called one trial at a time on purpose: this is the surface under
    test.
    """
    cfg = sc.antenna
    zeta = sc.users.zeta
    scale = max(zeta) / cfg.V ** 2
    ks = np.arange(2, cfg.K + 1)
    worst = 0.0
    for row in psi:
        pset_cos = np.cos(core.port_phase(row[0], ks, cfg.mu_float))
        mask = pset_cos > 0.0
        a_brute = zeta[0] * (pset_cos * mask).sum() ** 2
        a_comp = core.signal_power_compact(row[0], zeta[0], cfg)
        worst = max(worst, abs(a_comp - a_brute) / max(a_brute, scale))
        t = 0.75 - row[0] / (2.0 * math.pi)
        for j in range(1, len(row)):
            s = (np.cos(core.port_phase(row[j], ks, cfg.mu_float)) * mask).sum()
            y_brute = zeta[j] * s ** 2
            y_comp = core.interference_power_compact(row[j], zeta[j], t, cfg)
            worst = max(worst, abs(y_comp - y_brute) / max(y_brute, scale))
    return worst


def run_validation(sc: Scenario, n_trials: int, master_seed: int,
                   workers: int = 1, gamma: float = 0.35) -> ValidationReport:
    """Run the full suite; see module docstring for the check list."""
    report = ValidationReport(scenario_label=_scenario_label(sc),
                              n_trials=n_trials, master_seed=master_seed)
    even = sc.antenna.mu_is_even_integer
    mu, V = sc.mu, sc.V
    zeta_u = sc.zeta_u
    batch = mc.run_trials(sc, n_trials, master_seed, workers=workers)

    # 1. compact-form equivalence on a deterministic subsample
    n_sub = min(n_trials, EQUIVALENCE_SUBSAMPLE)
    psi = mc._draw_block(master_seed, 0, n_sub, sc.users.U)
    dev = _compact_equivalence(sc, psi)
    report.checks.append(CheckResult(
        name="compact-form-equivalence", passed=(dev <= EQUIVALENCE_REL) or not even,
        statistic=dev, threshold=EQUIVALENCE_REL,
        note="" if even else "odd density: compact forms only empirically valid",
        informational=not even))

    # 2. activated-port count
    expect = (sc.antenna.K - 1) / 2.0
    frac = float((batch.kbar == expect).mean()) if even else float(np.mean(batch.kbar) / expect)
    report.checks.append(CheckResult(
        name="activated-port-count", passed=(frac == 1.0) if even else True,
        statistic=frac, threshold=1.0,
        note="fraction with (K-1)/2 ports" if even else "mean count / ((K-1)/2)",
        informational=not even))

    # 3-4. per-variable distribution fits
    d_alpha = mc.ks_distance(batch.alpha, lambda a: dist.signal_cdf(a, zeta_u, mu, V))
    thr_a = _ks_floor(KS_SIGNAL, n_trials)
    report.checks.append(CheckResult(
        name="signal-distribution-fit", passed=(d_alpha <= thr_a) or not even,
        statistic=d_alpha, threshold=thr_a, informational=not even))

    if sc.users.U > 1:
        z1 = sc.users.zeta[1]
        d_y = mc.ks_distance(batch.ys[:, 0], lambda y: dist.interference_cdf_per_user(y, z1, V))
        thr_y = _ks_floor(KS_INTERFERENCE, n_trials)
        report.checks.append(CheckResult(
            name="interference-distribution-fit", passed=(d_y <= thr_y) or not even,
            statistic=d_y, threshold=thr_y, informational=not even))

        # 5. aggregate interference CLT fit
        params = dist.scenario_trunc_gauss(sc)
        d_b = mc.ks_distance(batch.beta, lambda b: dist.total_interference_cdf(b, params))
        clt_regime = sc.users.U >= 20
        thr_b = _ks_floor(KS_AGGREGATE, n_trials)
        report.checks.append(CheckResult(
            name="aggregate-interference-fit",
            passed=(d_b <= thr_b) or not (clt_regime and even),
            statistic=d_b, threshold=thr_b,
            note="" if clt_regime else "below massive-access regime",
            informational=not (clt_regime and even)))

        # 6. SINR distribution fit against the exact analytic CDF
        s_sorted = np.sort(batch.sinr)
        zg = np.linspace(max(s_sorted[0] * 0.999, 1e-12), s_sorted[-1] * 1.001, 3000)
        Fg = metrics.outage_exact_curve(zg, sc)
        d_sinr = mc.ks_distance(batch.sinr, lambda z: np.interp(z, zg, Fg))
        thr = _ks_floor(KS_SINR_TIGHT if mu >= KS_SINR_COMPACT_MU
                        else KS_SINR_LOOSE, n_trials)
        report.checks.append(CheckResult(
            name="sinr-distribution-fit", passed=(d_sinr <= thr) or not even,
            statistic=d_sinr, threshold=thr, informational=not even))

        # 7. compact SINR form: expected to fit only at high density
        d_cmp = mc.ks_distance(batch.sinr, lambda z: dist.sinr_cdf_compact(z, sc))
        compact_regime = mu >= KS_SINR_COMPACT_MU
        thr_c = _ks_floor(KS_COMPACT_PDF, n_trials)
        report.checks.append(CheckResult(
            name="sinr-compact-fit",
            passed=(d_cmp <= thr_c) or not (compact_regime and even),
            statistic=d_cmp, threshold=thr_c,
            note="" if compact_regime else "expected-fail below compact regime",
            informational=not (compact_regime and even)))

    # 8. outage agreement at the reference threshold
    emp, ci_lo, ci_hi = mc.empirical_outage(batch, gamma)
    ana = metrics.outage_exact(gamma, sc).value
    diff = abs(ana - emp)
    thr_out = max(OUTAGE_AGREEMENT, 4.0 * math.sqrt(0.25 / n_trials))
    if even:
        ok = diff <= thr_out
        note = f"gamma={gamma:g} empirical CI [{ci_lo:.4f}, {ci_hi:.4f}]"
    else:
        ok = ana >= emp - 3.0 * math.sqrt(max(emp * (1 - emp), 1e-12) / n_trials)
        note = f"gamma={gamma:g} odd density: analytic must not undershoot"
    report.checks.append(CheckResult(
        name="outage-agreement", passed=ok, statistic=diff,
        threshold=thr_out, note=note))

    # 9. first-order stochastic dominance of signal power over interference
    if sc.users.U > 1:
        hi = max(zeta_u, sc.users.zeta[1]) / V ** 2
        thresholds = np.linspace(0.0, hi, 1000)
        Fa = mc.empirical_cdf(batch.alpha, thresholds)
        Fy = mc.empirical_cdf(batch.ys[:, 0], thresholds)
        sigma = np.sqrt(Fa * (1 - Fa) / n_trials + Fy * (1 - Fy) / n_trials)
        margin = float(np.max(Fa - Fy - FSD_SIGMA * sigma))
        report.checks.append(CheckResult(
            name="stochastic-dominance", passed=margin <= 0.0,
            statistic=margin, threshold=0.0,
            note="max(F_signal - F_interference - 3*sigma)"))

        # 10. independence of signal and each interferer power
        worst_corr = max(abs(float(np.corrcoef(batch.alpha, batch.ys[:, j])[0, 1]))
                         for j in range(batch.ys.shape[1]))
        thr_ind = max(INDEPENDENCE_BOUND, _CORR_NOISE_MULT / math.sqrt(n_trials))
        report.checks.append(CheckResult(
            name="signal-interference-independence", passed=worst_corr <= thr_ind,
            statistic=worst_corr, threshold=thr_ind))

    # 11. negative-set residual bound
    n_k2 = min(n_trials, 100000)
    neg = mc.negative_set_trials(sc, n_k2, master_seed)
    bound = core.k2_residual_bound(sc.antenna) * math.sqrt(zeta_u)
    worst_gap = float(np.max(np.abs(neg.amp_neg - neg.amp_pos)))
    report.checks.append(CheckResult(
        name="negative-set-residual", passed=worst_gap <= bound,
        statistic=worst_gap, threshold=bound,
        note=f"over {n_k2} trials"))

    return report
