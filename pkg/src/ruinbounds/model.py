"""Levy triplet of a risk process and the checks every analysis relies on.

The process is parameterised the way an insurer writes it down: a premium
drift ``premium`` collected per unit time, a Brownian perturbation with
variance rate ``sigma2``, and raw (uncompensated) jumps from a
:data:`~ruinbounds.jumps.JumpMeasure`.  The mean drift is then

    delta = premium + sum(rate * mean jump size over components),

which is the per-unit-time expectation of the process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

from .jumps import JumpMeasure, TailMoment, as_jump_measure

__all__ = [
    "LevyTriplet",
    "ValidationCheck",
    "ValidationReport",
    "delta",
    "gamma_c",
    "mean_tail_moment",
    "validate",
]


@dataclass(frozen=True)
class LevyTriplet:
    """Immutable description of the risk process ``premium*t + sigma*W_t + jumps``."""

    premium: float
    sigma2: float
    jumps: JumpMeasure = ()

    def __post_init__(self) -> None:
        if not math.isfinite(self.premium):
            raise ValueError(f"premium must be finite, got {self.premium}")
        if not (math.isfinite(self.sigma2) and self.sigma2 >= 0.0):
            raise ValueError(f"sigma2 must be finite and >= 0, got {self.sigma2}")
        object.__setattr__(self, "jumps", as_jump_measure(self.jumps))

    @property
    def delta(self) -> float:
        return delta(self)

    @property
    def gamma_c(self) -> float:
        return gamma_c(self.jumps)

    @property
    def has_negative_jumps(self) -> bool:
        return any(part.has_negative_jumps for part in self.jumps)

    @property
    def is_subordinator(self) -> bool:
        """Non-decreasing process: no diffusion, no negative jumps, drift >= 0."""
        return self.sigma2 == 0.0 and not self.has_negative_jumps and self.premium >= 0.0


def gamma_c(jumps) -> float:
    """Light-tail radius of the negative jump tail; ``inf`` without one.

    For a superposition the radius is the minimum over components.
    """
    jumps = as_jump_measure(jumps)
    return min((part.gamma_c for part in jumps), default=math.inf)


def delta(triplet: LevyTriplet) -> float:
    """Mean drift per unit time; additive over jump components."""
    return triplet.premium + sum(part.rate * part.mean_jump for part in triplet.jumps)


def mean_tail_moment(jumps, gamma: float) -> TailMoment:
    """Exponential moment of the negative tail below -1 at tilt ``gamma``.

    Divergence is reported in the returned tag, never raised, so callers
    can probe the domain boundary safely.
    """
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    jumps = as_jump_measure(jumps)
    total = 0.0
    for part in jumps:
        piece = part.negative_exp_tail(gamma)
        if piece.divergent:
            return TailMoment(math.inf, True)
        total += piece.value
    return TailMoment(total, False)


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: List[ValidationCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[ValidationCheck]:
        return [check for check in self.checks if not check.passed]

    def raise_if_failed(self) -> None:
        if not self.ok:
            lines = "; ".join(f"{c.name}: {c.detail}" for c in self.failures())
            raise ValueError(f"model fails validation: {lines}")


def validate(triplet: LevyTriplet) -> ValidationReport:
    """Run the admissibility checks and return a structured report.

    Never raises: each check carries its own pass/fail flag.  Parametric
    families satisfy the integrability conditions by construction, so the
    values are reported for the record; degeneracy and the light-tail
    radius are the checks that can actually fail.
    """
    checks = []

    small = sum(part.square_small_moment for part in triplet.jumps)
    checks.append(
        ValidationCheck(
            "square_integrable_small_jumps",
            math.isfinite(small),
            f"integral of (x^2 AND 1) over the jump measure = {small!r}",
        )
    )

    large = sum(part.abs_large_moment for part in triplet.jumps)
    checks.append(
        ValidationCheck(
            "integrable_large_jumps",
            math.isfinite(large),
            f"integral of |x| over |x|>=1 = {large!r}",
        )
    )

    radius = gamma_c(triplet.jumps)
    checks.append(
        ValidationCheck(
            "light_negative_tail",
            radius > 0.0,
            f"negative-tail exponential radius = {radius!r}",
        )
    )

    degenerate = triplet.premium == 0.0 and triplet.sigma2 == 0.0 and not triplet.jumps
    checks.append(
        ValidationCheck(
            "non_degenerate",
            not degenerate,
            "process is identically zero" if degenerate else "process is non-zero",
        )
    )

    return ValidationReport(checks)
