"""Reference combiners and comparison logic.

MRC and ZF baselines for the identical-angle LoS uplink, the closed-form
beamforming gains of the aggregated-port receiver, and the port-count
thresholds at which it overtakes MRC.

Under identical angles of arrival the multi-antenna channel matrix is
rank one; the ZF pseudo-inverse is computed with a relative singular-value
cutoff, and every trial whose numerical rank falls below the user count is
recorded as a combiner failure (the expected outcome in this geometry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import ceil_t_mu
from .metrics import METRIC_SPEC, MetricResult, ergodic_rate
from .quadrature import QuadratureSpec
from .scenario import Scenario, UserField


@dataclass(frozen=True)
class MrcConfig:
    """Maximum-ratio combiner with M antennas (one RF chain each)."""

    M: int

    def __post_init__(self):
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError(f"M must be an integer >= 1, got {self.M}")


@dataclass(frozen=True)
class GainComparison:
    """Beamforming-gain comparison between the port aggregator and MRC."""

    cuma_gain: float          # 4(K-1)/pi^2
    mrc_gain: float           # M
    delta: tuple              # per-interferer suppression 1 - sin^2(...)
    epsilon: float            # port-density threshold
    min_ports: int

    def __post_init__(self):
        if self.cuma_gain <= 0:
            raise ValueError("cuma_gain must be positive")
        for d in self.delta:
            if not (0.0 <= d <= 1.0):
                raise ValueError(f"delta entries must lie in [0, 1], got {d}")
        if self.min_ports < 2:
            raise ValueError("min_ports must be >= 2")


def mrc_sinr(M: int, zeta_list, Gamma: float, desired: int = 0) -> float:
    """MRC SINR under identical angles: M*zeta_u / (M*sum(zeta_others) + 1/Gamma).

    Signal and interference receive the same array gain M, so MRC only
    suppresses noise in this geometry.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    zs = list(zeta_list)
    zu = zs.pop(desired)
    return M * zu / (M * sum(zs) + 1.0 / Gamma)


def mrc_mean_snr(M: int, zeta_u: float, Gamma: float) -> float:
    """Noise-limited MRC SNR, M*zeta_u*Gamma."""
    return M * zeta_u * Gamma


def cuma_signal_gain(K: int) -> float:
    """Compact-regime beamforming gain 4(K-1)/pi^2 on the desired signal."""
    return 4.0 * (K - 1) / math.pi ** 2


def cuma_beamforming_gains(K: int, psi_tilde_list, t: float, mu: float):
    """Signal and per-interferer power gains in the compact regime.

    The interferer gain is the signal gain scaled by the phase-dependent
    suppression sin^2(psi_tilde - pi/mu + (2*pi/mu)*ceil(t*mu)); it equals
    the signal gain when the interferer phase aligns with the signal's.
    """
    g = cuma_signal_gain(K)
    shift = -math.pi / mu + (2.0 * math.pi / mu) * ceil_t_mu(t, mu)
    gains = tuple(g * math.sin(p + shift) ** 2 for p in psi_tilde_list)
    return g, gains


def interferer_suppression(psi_tilde: float, t: float, mu: float) -> float:
    """Suppression factor delta = 1 - sin^2(psi_tilde - pi/mu + (2*pi/mu)*ceil(t*mu))."""
    shift = -math.pi / mu + (2.0 * math.pi / mu) * ceil_t_mu(t, mu)
    return 1.0 - math.sin(psi_tilde + shift) ** 2


def min_ports_vs_mrc(M: int, Gamma: float, zeta_list, delta_list,
                     epsilon: float, W: int) -> int:
    """Smallest port count K at which the aggregated-port receiver beats
    MRC with M antennas, subject to the density floor mu >= epsilon.

    K must exceed max(ceil((pi^2 M/4) / (M*Gamma*sum(zeta*delta) + 1)),
    ceil(epsilon*W)) by more than one.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    s = sum(z * d for z, d in zip(zeta_list, delta_list))
    gain_term = math.ceil((math.pi ** 2 * M / 4.0) / (M * Gamma * s + 1.0))
    return max(gain_term, math.ceil(epsilon * W)) + 2


def min_ports_noise_limited(M: int, epsilon: float, W: int) -> int:
    """Worst case for the aggregator (interference phase-aligned with the
    signal, delta = 1 with Gamma -> 0): K > max(ceil(pi^2 M/4), ceil(eps W)) + 1."""
    return max(math.ceil(math.pi ** 2 * M / 4.0), math.ceil(epsilon * W)) + 2


def min_ports_interference_limited(epsilon: float, W: int) -> int:
    """Interference-limited regime: the aggregator always wins once the
    density floor is met, K > ceil(eps W) + 1."""
    return math.ceil(epsilon * W) + 2


def gain_comparison(sc: Scenario, M: int, epsilon: float = 7.0) -> GainComparison:
    """Bundle the gain comparison for a scenario's drawn phases."""
    t = sc.derived.t
    delta = tuple(interferer_suppression(p, t, sc.mu) for p in sc.users.psi[1:])
    min_ports = min_ports_vs_mrc(M, sc.Gamma, sc.zeta_interferers, delta,
                                 epsilon, sc.antenna.W)
    return GainComparison(cuma_gain=cuma_signal_gain(sc.antenna.K), mrc_gain=float(M),
                          delta=delta, epsilon=epsilon, min_ports=min_ports)


@dataclass(frozen=True)
class ZfMonteCarlo:
    """Post-combining SINR statistics of the zero-forcing baseline."""

    mean: float
    variance: float
    n_trials: int
    combiner_failures: int
    sv_cutoff: float


def _los_channel(rng, M: int, zeta, psi) -> np.ndarray:
    """Identical-angle LoS channel: common steering vector, per-user phase."""
    steering = np.exp(1j * math.pi * np.arange(M))  # half-wavelength, in-line
    coeff = np.sqrt(np.asarray(zeta)) * np.exp(1j * np.asarray(psi))
    return steering[:, None] * coeff[None, :]


def zf_sinr_mc(M: int, sc: Scenario, trials: int, seed: int,
               sv_cutoff: float = 1e-8, channel_fn=None) -> ZfMonteCarlo:
    """Monte-Carlo zero-forcing SINR for the desired user.

    Per trial the combiner is the desired user's row of the pseudo-inverse
    of the M x U channel matrix, with singular values below
    sv_cutoff * sigma_max discarded.  Trials whose numerical rank is below U
    are counted as combiner failures; their (least-squares) SINR still
    enters the statistics.  channel_fn(rng, M, U) may supply a synthetic
    channel matrix for testing.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    U = sc.users.U
    zeta = np.asarray(sc.users.zeta)
    rng = np.random.Generator(np.random.Philox(key=seed))
    sinrs = np.empty(trials)
    failures = 0
    for i in range(trials):
        if channel_fn is not None:
            H = np.asarray(channel_fn(rng, M, U), dtype=complex)
        else:
            psi = rng.random(U) * 2.0 * math.pi
            H = _los_channel(rng, M, zeta, psi)
        u_, s_, vh = np.linalg.svd(H, full_matrices=False)
        keep = s_ >= sv_cutoff * s_[0]
        if keep.sum() < U:
            failures += 1
        pinv = (vh[keep].conj().T / s_[keep]) @ u_[:, keep].conj().T
        w = pinv[0]  # combiner for the desired user
        gains = np.abs(w @ H) ** 2
        noise = float(np.vdot(w, w).real) / sc.Gamma
        sinrs[i] = gains[0] / (gains[1:].sum() + noise)
    return ZfMonteCarlo(mean=float(sinrs.mean()), variance=float(sinrs.var()),
                        n_trials=trials, combiner_failures=failures,
                        sv_cutoff=sv_cutoff)


def single_user_scenario(sc: Scenario) -> Scenario:
    """Strip a scenario down to its desired user."""
    users = UserField(U=1, zeta=(sc.users.zeta[0],), psi=(sc.users.psi[0],),
                      theta=sc.users.theta, phi=sc.users.phi)
    return replace(sc, users=users)


def ocuma_rate(sc: Scenario, spec: QuadratureSpec = METRIC_SPEC) -> MetricResult:
    """Orthogonal-access rate: one user at a time with the full band.

    Evaluated as the single-user ergodic rate with prefactor B; the input
    scenario's U is ignored apart from selecting the desired user.
    """
    return ergodic_rate(single_user_scenario(sc), outage="exact", spec=spec)
