"""Dimensionless adiabaticity margins and regime classification.

The evolving condition compares the mixing-angle rate |dtheta/dt| with
the dark-bright eigenvalue gaps; the ratio max((rate/gap)^2) is binned
into adiabatic / marginal / violated.  The thresholds quantify the
qualitative "much smaller than" requirement and reproduce the three
published drive regimes.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import drive
from .eigensystem import bright_states

ADIABATIC_MAX = 0.01
VIOLATED_MIN = 1.0

# ramp worst-case search
RAMP_SAMPLES = 256
ENVELOPE_FLOOR = 0.01


@dataclass(frozen=True)
class AdiabaticityReport:
    theta_rate: float
    gap_plus: float
    gap_minus: float
    ratio: float
    regime: str
    sudden_start: bool = False


def classify(ratio: float) -> str:
    if ratio < ADIABATIC_MAX:
        return "adiabatic"
    if ratio < VIOLATED_MIN:
        return "marginal"
    return "violated"


def theta_rate(params: drive.DriveParams, t: float) -> float:
    """Analytic d(theta)/dt; equals delta exactly when omega12 == omega34.

    With a shared envelope the amplitude ratio in tan(theta) is
    envelope-independent, so ramps contribute no extra term.
    """
    params.ensure_ods()
    d = params.delta
    o12, o34 = params.omega12, params.omega34
    denom = (o12 * math.sin(d * t)) ** 2 + (o34 * math.cos(d * t)) ** 2
    if denom == 0.0:
        return 0.0
    return d * o12 * o34 / denom


def _margin_at(params, schedule, t) -> AdiabaticityReport:
    rate = abs(theta_rate(params, t))
    _, _, lam_plus, lam_minus = bright_states(params, schedule, t)
    gap_plus = abs(lam_plus)
    gap_minus = abs(lam_minus)
    gap = min(gap_plus, gap_minus)
    ratio = math.inf if gap == 0.0 else (rate / gap) ** 2
    return AdiabaticityReport(rate, gap_plus, gap_minus, ratio, classify(ratio))


def evolving_margin(params: drive.DriveParams, schedule: drive.RampSchedule, t: float) -> AdiabaticityReport:
    """Evolving adiabatic margin at time t, including the envelope at t."""
    return _margin_at(params, schedule, t)


def ramp_margin(params: drive.DriveParams, schedule: drive.RampSchedule) -> AdiabaticityReport:
    """Worst evolving margin over the upload ramp window.

    Samples the ramp densely and reports the worst ratio among samples
    with envelope >= ENVELOPE_FLOOR; samples below the floor (where the
    ratio diverges as the gap closes) are flagged as a sudden start
    instead of dominating the headline number.  An instantaneous switch
    is reported as violated with infinite ratio; starting exactly in the
    switch-on dark state still costs nothing, which the evolver confirms
    by simulation rather than assumption.
    """
    params.ensure_ods()
    if schedule.tau == 0.0 or schedule.shape == "instantaneous":
        rate = abs(theta_rate(params, schedule.t_on))
        return AdiabaticityReport(rate, 0.0, 0.0, math.inf, "violated", sudden_start=True)
    ts = np.linspace(schedule.t_on, schedule.t_on + schedule.tau, RAMP_SAMPLES)
    worst = None
    sudden = False
    for t in ts:
        if schedule.envelope(t) < ENVELOPE_FLOOR:
            sudden = True
            continue
        rep = _margin_at(params, schedule, t)
        if worst is None or rep.ratio > worst.ratio:
            worst = rep
    if worst is None:
        rate = abs(theta_rate(params, schedule.t_on))
        return AdiabaticityReport(rate, 0.0, 0.0, math.inf, "violated", sudden_start=True)
    return AdiabaticityReport(
        worst.theta_rate, worst.gap_plus, worst.gap_minus, worst.ratio,
        worst.regime, sudden_start=sudden,
    )
