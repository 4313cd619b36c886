"""Four-field drive configuration and interaction Hamiltonians.

All frequencies and rates are expressed in units of the excited-state
coherence decay rate gamma31, times in 1/gamma31, hbar = 1.  The two
field pairs couple |1>-|3> and |2>-|3>; individual phases are locked to
phi1 = phi2 + pi = phi12 and phi3 = phi4 = phi34, so only the pair
phases are free inputs.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NotOdsError, ValidationError

ODS_TOL = 1e-12

# D1 line of 87Rb, for converting dimensionless results to SI.
GAMMA31_RB87_D1 = 36.10e6  # s^-1

RAMP_SHAPES = ("linear", "raised-cosine", "instantaneous")


def to_si_rate(x: float) -> float:
    """Convert a rate in gamma31 units to s^-1 (87Rb D1 reference)."""
    return x * GAMMA31_RB87_D1


def to_si_time(t: float) -> float:
    """Convert a time in 1/gamma31 units to seconds (87Rb D1 reference)."""
    return t / GAMMA31_RB87_D1


@dataclass(frozen=True)
class DriveParams:
    """Rabi frequencies, pair phases and detunings of the four laser fields.

    With ``require_ods`` (the default) the constructor rejects detuning
    combinations that break the oscillating-dark-state conditions: equal
    half-splittings (delta1-delta2)/2 == (delta3-delta4)/2 != 0 and zero
    two-pair detuning offset.  Pass ``require_ods=False`` to build general
    configurations for the evolver; the planner will refuse them.
    """

    omega12: float
    omega34: float
    delta1: float
    delta2: float
    delta3: float
    delta4: float
    phi12: float = 0.0
    phi34: float = 0.0
    require_ods: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.omega12 < 0 or self.omega34 < 0:
            raise ValidationError("Rabi frequencies must be non-negative")
        if self.require_ods and not self.is_ods_valid:
            raise ValidationError(
                "detunings break the ODS conditions: need "
                "(delta1-delta2)/2 == (delta3-delta4)/2 != 0 and "
                "(delta1+delta2) == (delta3+delta4); "
                f"got half-splittings {self.delta}, {self.delta34} "
                f"and offset {self.big_delta_prime}"
            )

    @property
    def delta(self) -> float:
        """Half detuning splitting of the |1>-|3> pair, (delta1-delta2)/2."""
        return (self.delta1 - self.delta2) / 2.0

    @property
    def delta34(self) -> float:
        """Half detuning splitting of the |2>-|3> pair, (delta3-delta4)/2."""
        return (self.delta3 - self.delta4) / 2.0

    @property
    def big_delta(self) -> float:
        """Common detuning of the first pair, (delta1+delta2)/2."""
        return (self.delta1 + self.delta2) / 2.0

    @property
    def big_delta_prime(self) -> float:
        """Two-pair detuning offset, [(delta1+delta2)-(delta3+delta4)]/2."""
        return ((self.delta1 + self.delta2) - (self.delta3 + self.delta4)) / 2.0

    @property
    def delta_phi(self) -> float:
        return self.phi12 - self.phi34

    @property
    def is_ods_valid(self) -> bool:
        return (
            abs(self.delta - self.delta34) <= ODS_TOL
            and abs(self.big_delta_prime) <= ODS_TOL
            and self.delta != 0.0
        )

    @property
    def period(self) -> float:
        """Dark-state rotation period T = 2*pi/|delta|."""
        if self.delta == 0.0:
            raise ValidationError("period undefined: delta = 0")
        return 2.0 * math.pi / abs(self.delta)

    def ensure_ods(self) -> None:
        if not self.is_ods_valid:
            raise NotOdsError(
                "operation requires ODS-valid drive parameters "
                f"(half-splittings {self.delta}, {self.delta34}, "
                f"offset {self.big_delta_prime})"
            )

    @classmethod
    def ods(cls, omega12, omega34, delta, big_delta=0.0, phi12=0.0, phi34=0.0):
        """Build ODS-valid detunings from the half-splitting and common detuning."""
        return cls(
            omega12=omega12,
            omega34=omega34,
            delta1=big_delta + delta,
            delta2=big_delta - delta,
            delta3=big_delta + delta,
            delta4=big_delta - delta,
            phi12=phi12,
            phi34=phi34,
        )

    @classmethod
    def fig2(cls, variant: str = "a", delta_phi: float = 0.0):
        """The three published drive configurations (delta1=delta3=0.3, delta2=delta4=0.2)."""
        omega = {"a": 2.0, "b": 0.2, "c": 0.08}.get(variant)
        if omega is None:
            raise ValidationError(f"unknown variant {variant!r}, expected a, b or c")
        return cls(
            omega12=omega,
            omega34=omega,
            delta1=0.3,
            delta2=0.2,
            delta3=0.3,
            delta4=0.2,
            phi12=delta_phi,
            phi34=0.0,
        )


@dataclass(frozen=True)
class EffectiveFields:
    """Effective couplings P (to |1>) and Q (to |2>) plus the common detunings."""

    p: complex
    q: complex
    big_delta: float
    big_delta_prime: float

    @property
    def coupling_sq(self) -> float:
        """|P|^2 + |Q|^2."""
        return abs(self.p) ** 2 + abs(self.q) ** 2


@dataclass(frozen=True)
class RampSchedule:
    """Shared amplitude envelope of all four fields.

    Upload ramps over [t_on, t_on+tau], plateau until t_off, unload over
    [t_off, t_off+tau].  All four fields share this one envelope, which
    keeps their amplitude ratios (and hence the mixing angle theta) fixed
    during ramps.
    """

    tau: float
    t_on: float = 0.0
    t_off: float = math.inf
    shape: str = "raised-cosine"

    def __post_init__(self):
        if self.shape not in RAMP_SHAPES:
            raise ValidationError(f"unknown ramp shape {self.shape!r}")
        if self.tau < 0:
            raise ValidationError("ramp duration tau must be >= 0")
        if self.shape == "instantaneous" and self.tau != 0.0:
            raise ValidationError("instantaneous schedule requires tau = 0")
        if self.t_off < self.t_on + self.tau:
            raise ValidationError("need t_off >= t_on + tau")

    @classmethod
    def for_params(cls, params: DriveParams, tau_fraction: float = 0.01, **kw):
        """Default schedule: raised-cosine ramps of 0.01 T."""
        return cls(tau=tau_fraction * params.period, **kw)

    def envelope(self, t):
        """Envelope value in [0, 1]; accepts scalars or arrays."""
        if np.ndim(t) == 0:
            return self._scalar_envelope(float(t))
        t = np.asarray(t, dtype=float)
        return np.array([self._scalar_envelope(x) for x in t])

    def _scalar_envelope(self, t: float) -> float:
        if t < self.t_on or t >= self.t_off + self.tau:
            return 0.0
        if self.tau == 0.0:
            return 1.0 if t < self.t_off else 0.0
        if t < self.t_on + self.tau:
            x = (t - self.t_on) / self.tau
        elif t < self.t_off:
            return 1.0
        else:
            x = 1.0 - (t - self.t_off) / self.tau
        if self.shape == "linear":
            return x
        return math.sin(math.pi * x / 2.0) ** 2


def envelope(schedule: RampSchedule, t):
    return schedule.envelope(t)


def effective_fields(params: DriveParams, schedule: RampSchedule, t: float) -> EffectiveFields:
    """Effective couplings P, Q of the rotating-frame Hamiltonian at time t."""
    eps = schedule.envelope(t)
    p = -1j * np.exp(-1j * params.phi12) * eps * params.omega12 * np.sin(params.delta * t)
    q = -np.exp(-1j * params.phi34) * eps * params.omega34 * np.cos(params.delta34 * t)
    return EffectiveFields(complex(p), complex(q), params.big_delta, params.big_delta_prime)


def effective_hamiltonian(params: DriveParams, schedule: RampSchedule, t: float) -> np.ndarray:
    """Rotating-frame Hamiltonian [[0,0,P*],[0,D',Q*],[P,Q,D]] on (|1>,|2>,|3>)."""
    f = effective_fields(params, schedule, t)
    return np.array(
        [
            [0.0, 0.0, np.conj(f.p)],
            [0.0, f.big_delta_prime, np.conj(f.q)],
            [f.p, f.q, f.big_delta],
        ],
        dtype=complex,
    )


def full_hamiltonian(params: DriveParams, schedule: RampSchedule, t: float) -> np.ndarray:
    """Interaction-picture Hamiltonian as the explicit four-field sum.

    H = -1/2 [ O12 e^{-i phi1} e^{i delta1 t} s31 + O12 e^{-i phi2} e^{i delta2 t} s31
             + O34 e^{-i phi3} e^{i delta3 t} s32 + O34 e^{-i phi4} e^{i delta4 t} s32 ] + h.c.
    with phi1 = phi12, phi2 = phi12 - pi, phi3 = phi4 = phi34.
    """
    eps = schedule.envelope(t)
    phi1 = params.phi12
    phi2 = params.phi12 - math.pi
    phi3 = phi4 = params.phi34
    h31 = -0.5 * eps * params.omega12 * (
        np.exp(-1j * phi1) * np.exp(1j * params.delta1 * t)
        + np.exp(-1j * phi2) * np.exp(1j * params.delta2 * t)
    )
    h32 = -0.5 * eps * params.omega34 * (
        np.exp(-1j * phi3) * np.exp(1j * params.delta3 * t)
        + np.exp(-1j * phi4) * np.exp(1j * params.delta4 * t)
    )
    h = np.zeros((3, 3), dtype=complex)
    h[2, 0] = h31
    h[2, 1] = h32
    h[0, 2] = np.conj(h31)
    h[1, 2] = np.conj(h32)
    return h


def with_delta_phi(params: DriveParams, delta_phi: float) -> DriveParams:
    """Copy of params with phi34 adjusted so that phi12 - phi34 = delta_phi."""
    return replace(params, phi34=params.phi12 - delta_phi)
