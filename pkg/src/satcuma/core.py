"""Port activation and instantaneous power/SINR computation.

Two independent routes to the same quantities live here.  The brute-force
route enumerates ports, applies the sign rule and sums channel cosines
explicitly; it is the reference used to validate everything else.  The
compact route evaluates the closed forms for signal and interference power
that hold exactly when the port density mu is an even integer (and remain
empirically accurate at high density for any mu).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .scenario import AntennaConfig

# tolerance for flagging a port at the cos()=0 sign boundary; membership
# itself always uses the strict inequality
COS_BOUNDARY_TOL = 1e-12


class PortSetKind(enum.Enum):
    POSITIVE_INPHASE = "K1"
    NEGATIVE_INPHASE = "K2"


@dataclass(frozen=True)
class PortSet:
    """Activated port indices (port 1 is the reference, never included)."""

    indices: tuple
    kind: PortSetKind

    def __post_init__(self):
        if 1 in self.indices:
            raise ValueError("port 1 is the reference port and cannot be activated")

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class InstantPower:
    """One realization of the normalized in-phase powers and SINR."""

    alpha: float
    y_per_user: tuple
    beta: float
    sinr: float

    def __post_init__(self):
        if self.alpha < 0 or any(y < 0 for y in self.y_per_user):
            raise ValueError("powers must be non-negative")
        if not math.isclose(self.beta, sum(self.y_per_user),
                            rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError("beta must equal the sum of per-user powers")


class WindowBounds(NamedTuple):
    k_low: int
    k_up: int
    degenerate: bool


def port_phase(psi: float, k, mu: float):
    """In-phase channel angle psi + 2*pi*(k-1)/mu at port k."""
    return psi + 2.0 * math.pi * (np.asarray(k) - 1) / mu


def activated_set(psi_u: float, cfg: AntennaConfig, kind: PortSetKind) -> PortSet:
    """Ports in {2..K} whose in-phase channel has the requested sign.

    Ports sitting exactly on the cos() = 0 boundary belong to neither set,
    which keeps the two sets disjoint; under continuous phases this is a
    measure-zero event.
    """
    ks = np.arange(2, cfg.K + 1)
    c = np.cos(port_phase(psi_u, ks, cfg.mu_float))
    if kind is PortSetKind.POSITIVE_INPHASE:
        mask = c > 0.0
    else:
        mask = c < 0.0
    return PortSet(indices=tuple(int(k) for k in ks[mask]), kind=kind)


def ceil_t_mu(t: float, mu: float) -> int:
    """ceil(t*mu), the port-window index common to all compact forms."""
    return int(math.ceil(t * mu))


def window_bounds(psi_u: float, mu) -> WindowBounds:
    """Single-wavelength window of positive-cosine ports.

    k_low = ceil((3/4 - psi/2pi)*mu) + 1 and k_up = floor((5/4 - psi/2pi)*mu) + 1.
    For even mu and non-degenerate psi the window has exactly mu/2 ports
    (k_up = k_low + mu/2 - 1).  The degenerate flag marks the measure-zero
    phases where either bound expression lands on an exact integer; there
    the window gains one boundary port and brute force is authoritative.
    """
    mu = float(mu)
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    t = 0.75 - psi_u / (2.0 * math.pi)
    a = t * mu
    b = (1.25 - psi_u / (2.0 * math.pi)) * mu
    degenerate = (a == math.floor(a)) or (b == math.floor(b))
    k_low = int(math.ceil(a)) + 1
    k_up = int(math.floor(b)) + 1
    return WindowBounds(k_low=k_low, k_up=k_up, degenerate=degenerate)


def signal_amplitude_bruteforce(psi_u: float, zeta_u: float, port_set: PortSet,
                                cfg: AntennaConfig) -> float:
    """Signed aggregated amplitude sqrt(zeta_u) * sum of port cosines."""
    if not port_set.indices:
        return 0.0
    ks = np.asarray(port_set.indices)
    return math.sqrt(zeta_u) * float(np.cos(port_phase(psi_u, ks, cfg.mu_float)).sum())


def signal_power_compact(psi_u: float, zeta_u: float, cfg: AntennaConfig) -> float:
    """Closed-form in-phase signal power of the positive-cosine port set.

    zeta_u * cos^2(-2*pi*t - pi/mu + (2*pi/mu)*ceil(t*mu)) / V^2 with
    t = 3/4 - psi_u/(2*pi) and V = sin(pi/mu)/W.  Exact for even integer mu.
    """
    mu = cfg.mu_float
    t = 0.75 - psi_u / (2.0 * math.pi)
    x = -2.0 * math.pi * t - math.pi / mu + (2.0 * math.pi / mu) * ceil_t_mu(t, mu)
    return zeta_u * math.cos(x) ** 2 / cfg.V ** 2


def interference_power_compact(psi_tilde: float, zeta_tilde: float, t: float,
                               cfg: AntennaConfig) -> float:
    """Closed-form per-interferer power collected on the desired user's set.

    zeta * sin^2(psi_tilde - pi/mu + (2*pi/mu)*ceil(t*mu)) / V^2, where t is
    the desired user's mapped phase.
    """
    mu = cfg.mu_float
    x = psi_tilde - math.pi / mu + (2.0 * math.pi / mu) * ceil_t_mu(t, mu)
    return zeta_tilde * math.sin(x) ** 2 / cfg.V ** 2


def instant_sinr(alpha: float, y_list, kbar: float, gamma: float) -> float:
    """In-phase SINR alpha / (sum(y) + kbar/(2*gamma)).

    An empty activation set (kbar = 0 with no interference) collects
    nothing; the SINR is zero by convention rather than 0/0.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    denom = sum(y_list) + kbar / (2.0 * gamma)
    return alpha / denom if denom > 0.0 else 0.0


def instant_power(psi: tuple, zeta: tuple, cfg: AntennaConfig, gamma: float) -> InstantPower:
    """Full brute-force power record for one phase realization.

    psi[0]/zeta[0] belong to the desired user; the activated set is built
    from the desired phase and reused for every interferer.  The noise term
    uses the realized activated-port count.
    """
    pset = activated_set(psi[0], cfg, PortSetKind.POSITIVE_INPHASE)
    amp = signal_amplitude_bruteforce(psi[0], zeta[0], pset, cfg)
    alpha = amp * amp
    ys = tuple(
        signal_amplitude_bruteforce(psi[u], zeta[u], pset, cfg) ** 2
        for u in range(1, len(psi))
    )
    beta = sum(ys)
    sinr = instant_sinr(alpha, ys, len(pset), gamma)
    return InstantPower(alpha=alpha, y_per_user=ys, beta=beta, sinr=sinr)


def k2_residual_bound(cfg: AntennaConfig) -> float:
    """Amplitude bound |sin(pi*K/mu)| / sin(pi/mu) on the gap between the
    positive-set and negative-set aggregated amplitudes.

    The full-aperture cosine sum over all K-1 ports spans exactly W whole
    wavelengths, so the realized gap is zero up to rounding; this bound is
    the loose guarantee that holds without that observation.
    """
    mu = cfg.mu_float
    return abs(math.sin(math.pi * cfg.K / mu)) / math.sin(math.pi / mu)
