"""Scenario construction: antenna geometry, link budget, user population.

A scenario bundles everything the analysis needs: the fluid-antenna
geometry (port count K, aperture W wavelengths, port density mu), the RF
link budget (power, gain, bandwidth, noise temperature), and the per-user
path-loss coefficients and reference-port phases.  All derived channel
constants (V, t, activated-port count, nominal SNR) are computed once at
build time and the whole bundle is immutable, so scenarios can be shared
freely across threads and processes.

Config files are flat JSON objects.  Recognised keys::

    K            port count (integer >= 2)
    W            aperture scaling factor in wavelengths (integer >= 1)
    U            number of users sharing the band (integer >= 1)
    P_watts      transmit power per user            [default 1.0]
    G_dBi        overall antenna gain in dBi        [default 40.0]
    B_hz         user link bandwidth in Hz          [default 1e7]
    T_kelvin     receiver noise temperature in K    [default 207.0]
    f_c_hz       carrier frequency in Hz            [default 30e9]
    distance_m   ground-to-satellite distance, scalar or list of U
                 per-user values                    [default 1.2e6]
    seed         seed for the reference-port phase draw [default 0]

Unknown keys are a hard error.  dB/dBi conversion happens only here; all
internal math is linear-scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
BOLTZMANN = 1.381e-23  # J/K

WARN_ODD_MU = "odd-mu"

_CONFIG_KEYS = {
    "K", "W", "U", "P_watts", "G_dBi", "B_hz", "T_kelvin", "f_c_hz",
    "distance_m", "seed",
}

_CONFIG_DEFAULTS = {
    "P_watts": 1.0,
    "G_dBi": 40.0,
    "B_hz": 1e7,
    "T_kelvin": 207.0,
    "f_c_hz": 30e9,
    "distance_m": 1.2e6,
    "seed": 0,
}


class ScenarioError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


def db_to_linear(value_db: float) -> float:
    """Convert a dB (or dBi) quantity to linear scale."""
    return 10.0 ** (value_db / 10.0)


def path_loss_coeff(f_c: float, r: float, speed_of_light: float = SPEED_OF_LIGHT) -> float:
    """Free-space path-loss power coefficient (lambda / 4 pi r)^2.

    Monotone decreasing in both carrier frequency and distance.
    """
    if f_c <= 0:
        raise ScenarioError(f"f_c must be positive, got {f_c}")
    if r <= 0:
        raise ScenarioError(f"r must be positive, got {r}")
    lam = speed_of_light / f_c
    return (lam / (4.0 * math.pi * r)) ** 2


@dataclass(frozen=True)
class AntennaConfig:
    """Fluid-antenna geometry: K ports spread over W wavelengths.

    The port density mu = (K-1)/W is stored as an exact rational so the
    evenness check (which gates the analytic compact forms) is exact.
    """

    K: int
    W: int
    mu: Fraction = field(init=False)

    def __post_init__(self):
        if not isinstance(self.K, int) or self.K < 2:
            raise ScenarioError(f"K must be an integer >= 2, got {self.K}")
        if not isinstance(self.W, int) or self.W < 1:
            raise ScenarioError(f"W must be an integer >= 1, got {self.W}")
        object.__setattr__(self, "mu", Fraction(self.K - 1, self.W))

    @property
    def mu_float(self) -> float:
        return float(self.mu)

    @property
    def mu_is_even_integer(self) -> bool:
        # (K-1) mod 2W == 0  <=>  mu is an even integer
        return (self.K - 1) % (2 * self.W) == 0

    @property
    def kbar(self) -> float:
        """Analytic activated-port count (K-1)/2; exact for even mu."""
        return (self.K - 1) / 2.0

    @property
    def V(self) -> float:
        """Signal scaling constant sin(pi/mu)/W."""
        return math.sin(math.pi / self.mu_float) / self.W


@dataclass(frozen=True)
class LinkBudget:
    """RF link budget; all fields linear-scale and strictly positive."""

    P: float = 1.0            # transmit power, W
    G: float = 1e4            # overall antenna gain, linear
    B: float = 1e7            # bandwidth, Hz
    T: float = 207.0          # receiver temperature, K
    c_B: float = BOLTZMANN    # Boltzmann constant, J/K
    f_c: float = 30e9         # carrier frequency, Hz
    sigma_s2: float = 1.0     # symbol power
    speed_of_light: float = SPEED_OF_LIGHT

    def __post_init__(self):
        for name in ("P", "G", "B", "T", "c_B", "f_c", "sigma_s2", "speed_of_light"):
            if getattr(self, name) <= 0:
                raise ScenarioError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def noise_power(self) -> float:
        """Single-sided thermal noise power c_B * T * B."""
        return self.c_B * self.T * self.B

    @property
    def wavelength(self) -> float:
        return self.speed_of_light / self.f_c


def nominal_snr(budget: LinkBudget) -> float:
    """Nominal SNR excluding path loss: P G sigma_s^2 / (c_B T B)."""
    return budget.P * budget.G * budget.sigma_s2 / budget.noise_power


@dataclass(frozen=True)
class UserField:
    """Per-user path-loss coefficients and reference-port phases.

    User 0 is the desired user by convention; the rest interfere.  The
    alignment factor sin(theta)*cos(phi) must equal 1 (ports in line with
    the propagation path), which the default geometry satisfies.
    """

    U: int
    zeta: tuple
    psi: tuple
    theta: float = math.pi / 2.0  # azimuth
    phi: float = 0.0              # elevation

    def __post_init__(self):
        if not isinstance(self.U, int) or self.U < 1:
            raise ScenarioError(f"U must be an integer >= 1, got {self.U}")
        if len(self.zeta) != self.U:
            raise ScenarioError(f"zeta must have U={self.U} entries, got {len(self.zeta)}")
        if len(self.psi) != self.U:
            raise ScenarioError(f"psi must have U={self.U} entries, got {len(self.psi)}")
        for z in self.zeta:
            if z <= 0:
                raise ScenarioError(f"zeta entries must be positive, got {z}")
        for p in self.psi:
            if not (0.0 < p < 2.0 * math.pi):
                raise ScenarioError(f"psi entries must lie in (0, 2*pi), got {p}")
        upsilon = math.sin(self.theta) * math.cos(self.phi)
        if abs(upsilon - 1.0) > 1e-12:
            raise ScenarioError(f"alignment sin(theta)*cos(phi) must equal 1, got {upsilon}")

    @property
    def upsilon(self) -> float:
        return math.sin(self.theta) * math.cos(self.phi)

    @property
    def zeta_u(self) -> float:
        """Path-loss coefficient of the desired user."""
        return self.zeta[0]

    @property
    def zeta_interferers(self) -> tuple:
        return self.zeta[1:]


@dataclass(frozen=True)
class DerivedChannel:
    """Channel constants derived from geometry, budget and the desired phase."""

    V: float       # sin(pi/mu)/W
    t: float       # 3/4 - psi_u/(2*pi)
    Kbar: float    # activated-port count (K-1)/2
    Gamma: float   # nominal SNR

    def __post_init__(self):
        if self.V <= 0:
            raise ScenarioError(f"V must be positive, got {self.V}")
        if not (-0.25 < self.t < 0.75):
            raise ScenarioError(f"t must lie in (-1/4, 3/4), got {self.t}")


@dataclass(frozen=True)
class Scenario:
    """Validated scenario: geometry + budget + users + derived constants."""

    antenna: AntennaConfig
    budget: LinkBudget
    users: UserField
    derived: DerivedChannel
    seed: int = 0
    warnings: tuple = ()

    @property
    def zeta_u(self) -> float:
        return self.users.zeta_u

    @property
    def zeta_interferers(self) -> tuple:
        return self.users.zeta_interferers

    @property
    def mu(self) -> float:
        return self.antenna.mu_float

    @property
    def V(self) -> float:
        return self.derived.V

    @property
    def Kbar(self) -> float:
        return self.derived.Kbar

    @property
    def Gamma(self) -> float:
        return self.derived.Gamma

    @property
    def noise_term(self) -> float:
        """In-phase noise power term Kbar/(2*Gamma) in the SINR denominator."""
        return self.derived.Kbar / (2.0 * self.derived.Gamma)


def _draw_phases(u: int, seed: int) -> tuple:
    """Deterministic reference-port phases, uniform on the open (0, 2*pi)."""
    gen = np.random.Generator(np.random.Philox(key=seed))
    raw = gen.random(u)
    # exact 0 has probability 2^-53; remap so the open-interval invariant holds
    raw[raw == 0.0] = 0.5 ** 53
    return tuple(float(2.0 * math.pi * r) for r in raw)


def build_scenario(source) -> Scenario:
    """Build a validated Scenario from a config mapping or JSON file path.

    Accepts a dict, a path to a JSON file, or a JSON string.  Unknown keys
    raise ScenarioError.  When mu is not an even integer the scenario still
    builds, but carries the odd-mu warning record so consumers can tell the
    guaranteed regime from the empirical one.
    """
    if isinstance(source, (str, bytes)):
        text = source
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError:
            pass
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"config parse failure: {exc}") from exc
    elif isinstance(source, dict):
        cfg = dict(source)
    else:
        raise ScenarioError(f"unsupported config source type {type(source).__name__}")

    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ScenarioError(f"unknown config keys: {sorted(unknown)}")
    for required in ("K", "W", "U"):
        if required not in cfg:
            raise ScenarioError(f"missing required config key: {required}")

    merged = dict(_CONFIG_DEFAULTS)
    merged.update(cfg)

    def _as_int(key):
        v = merged[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v != int(v):
            raise ScenarioError(f"{key} must be an integer, got {v!r}")
        return int(v)

    K, W, U, seed = _as_int("K"), _as_int("W"), _as_int("U"), _as_int("seed")

    antenna = AntennaConfig(K=K, W=W)
    budget = LinkBudget(
        P=float(merged["P_watts"]),
        G=db_to_linear(float(merged["G_dBi"])),
        B=float(merged["B_hz"]),
        T=float(merged["T_kelvin"]),
        f_c=float(merged["f_c_hz"]),
    )

    dist = merged["distance_m"]
    if isinstance(dist, (list, tuple)):
        if len(dist) != U:
            raise ScenarioError(f"distance_m list must have U={U} entries, got {len(dist)}")
        distances = [float(d) for d in dist]
    else:
        distances = [float(dist)] * U
    zeta = tuple(path_loss_coeff(budget.f_c, d, budget.speed_of_light) for d in distances)

    psi = _draw_phases(U, seed)
    users = UserField(U=U, zeta=zeta, psi=psi)

    gamma = nominal_snr(budget)
    t = 0.75 - psi[0] / (2.0 * math.pi)
    derived = DerivedChannel(V=antenna.V, t=t, Kbar=antenna.kbar, Gamma=gamma)

    warnings = () if antenna.mu_is_even_integer else (WARN_ODD_MU,)
    return Scenario(antenna=antenna, budget=budget, users=users,
                    derived=derived, seed=seed, warnings=warnings)


def table_default_config(K: int, W: int, U: int, **overrides) -> dict:
    """Config dict with the standard LEO uplink parameter set.

    30 GHz carrier, 10 MHz bandwidth, 1 W transmit power, 40 dBi gain,
    207 K clear-sky temperature, 1200 km transmission distance.
    """
    cfg = {"K": K, "W": W, "U": U}
    cfg.update(overrides)
    return cfg
