"""Four-regime classification of ruin behaviour with certified decay rates.

A non-zero integrable process with a light negative jump tail falls into
exactly one of four regimes, read off the Laplace exponent ``psi`` on
``[0, gamma_c)``:

* ``A`` — almost-sure ruin: ``psi > 0`` throughout, equivalently mean
  drift ``delta <= 0``; the ruin probability is 1 for every capital.
* ``B`` — Lundberg bound: ``psi`` has a root ``gamma0`` in the interior;
  ruin probability is at most ``exp(-gamma0 * u)``.
* ``C`` — never ruin: the process is a subordinator (no diffusion, no
  negative jumps, non-negative linear drift); ruin probability is 0.
* ``D`` — critical exponent: ``gamma_c`` is finite and ``psi`` stays
  negative all the way to it; ruin probability is at most
  ``exp(-gamma_c * u)``.

Convexity of ``psi`` (with ``psi(0) = 0`` and right-derivative
``-delta``) makes the dispatch above exhaustive, and the root in case B
unique.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .laplace import LaplaceExponent
from .model import LevyTriplet, validate

__all__ = [
    "ClassificationError",
    "RootSearchResult",
    "RuinCase",
    "RuinClassification",
    "bound",
    "classify",
    "find_root",
]

DEFAULT_ROOT_TOL = 1e-10

# bracket expansion stops a hair inside a finite domain edge, and at a
# hard cap on an unbounded one
_EDGE_MARGIN = 1.0 - 2.0**-40
_UNBOUNDED_CAP = 2.0**100


class ClassificationError(RuntimeError):
    """Classification could not be settled; diagnostics attached."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class RuinCase(enum.Enum):
    ALMOST_SURE_RUIN = "A"
    LUNDBERG_BOUND = "B"
    NEVER_RUIN = "C"
    CRITICAL_EXPONENT = "D"

    @property
    def letter(self) -> str:
        return self.value


@dataclass(frozen=True)
class RuinClassification:
    """Outcome of the regime dispatch plus the evidence used to reach it.

    ``rate`` is the exponential decay rate of the certified bound: 0 in
    case A (bound 1), the root in case B, ``inf`` in case C (bound 0) and
    the domain edge in case D.
    """

    case: RuinCase
    rate: float
    delta: float
    gamma_c: float
    root_residual: Optional[float] = None
    boundary_limit: Optional[float] = None
    psi_samples: Tuple[Tuple[float, float], ...] = ()
    notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RootSearchResult:
    gamma0: float
    residual: float
    bracket: Tuple[float, float]
    evaluations: int


def find_root(le: LaplaceExponent, tol: float = DEFAULT_ROOT_TOL) -> RootSearchResult:
    """Locate the unique positive zero of ``psi`` by bracketing + bisection.

    Expands a bracket geometrically from ``tol`` (clamping the final probe
    to just inside a finite ``gamma_c``), then bisects until the bracket
    width is below ``tol * max(1, gamma0)``.  Uniqueness follows from
    convexity together with ``psi(0) = 0`` and a negative right-derivative.

    Raises ``ClassificationError`` when no sign change exists in the
    domain (the caller then knows ``psi`` is negative throughout).  The
    residual target ``|psi(gamma0)| <= tol`` is met whenever float64 can
    express it; for extremely steep roots the bisection bottoms out at
    machine resolution and the achieved residual is reported as-is.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if le.delta <= 0.0:
        raise ClassificationError("root search requires positive mean drift")

    cap = le.gamma_c * _EDGE_MARGIN if math.isfinite(le.gamma_c) else _UNBOUNDED_CAP
    evaluations = 0

    def psi(g: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return le.psi(g)

    # expand upward until psi goes positive; the last probe sits on the cap
    lo, flo = 0.0, 0.0
    gamma = min(tol, cap)
    hi = fhi = None
    while True:
        val = psi(gamma)
        if val > 0.0:
            hi, fhi = gamma, val
            break
        lo, flo = gamma, val
        if gamma >= cap:
            break
        gamma = min(2.0 * gamma, cap)
    if hi is None:
        raise ClassificationError(
            "psi has no sign change below gamma_c", diagnostics={"last": (lo, flo)}
        )

    # a positive value at the very first probe means the root hides in
    # (0, tol); shrink the lower edge until psi is negative there
    if lo == 0.0:
        probe = hi / 2.0
        while probe > 0.0 and psi(probe) > 0.0:
            hi = probe
            probe /= 2.0
        if probe <= 0.0:
            raise ClassificationError("could not bracket the root above zero")
        lo = probe

    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket has hit float resolution
        if psi(mid) > 0.0:
            hi = mid
        else:
            lo = mid

    gamma0 = 0.5 * (lo + hi)
    if not lo < gamma0 < hi:
        gamma0 = lo
    residual = abs(le.psi(gamma0))
    return RootSearchResult(gamma0, residual, (lo, hi), evaluations)


def classify(
    triplet: LevyTriplet,
    tol: float = DEFAULT_ROOT_TOL,
    laplace_mode: str = "closed_form",
) -> RuinClassification:
    """Dispatch a validated triplet into its ruin regime.

    Deterministic and pure: identical inputs give identical results.  An
    unresolvable boundary limit raises ``ClassificationError`` instead of
    guessing.
    """
    report = validate(triplet)
    if not report.ok:
        raise ClassificationError(
            "triplet fails validation: "
            + "; ".join(f"{c.name}: {c.detail}" for c in report.failures())
        )

    le = LaplaceExponent(triplet, laplace_mode)
    dlt = le.delta
    gc = le.gamma_c

    if dlt <= 0.0:
        return RuinClassification(RuinCase.ALMOST_SURE_RUIN, 0.0, dlt, gc)

    # subordinators never go down, so they never ruin; this is the exact
    # structural equivalent of "psi < 0 on all of (0, inf)"
    if triplet.is_subordinator:
        return RuinClassification(RuinCase.NEVER_RUIN, math.inf, dlt, gc)

    if math.isfinite(gc):
        limit = le.psi_limit_at_gamma_c()
        if limit.status == "inconclusive":
            raise ClassificationError(
                "limit of psi at gamma_c did not resolve", diagnostics=limit
            )
        if not limit.diverges and limit.value <= 0.0:
            # psi < 0 up to the edge: convexity rules out any interior root
            return RuinClassification(
                RuinCase.CRITICAL_EXPONENT,
                gc,
                dlt,
                gc,
                boundary_limit=limit.value,
                psi_samples=limit.samples,
            )
        root = find_root(le, tol)
        return RuinClassification(
            RuinCase.LUNDBERG_BOUND,
            root.gamma0,
            dlt,
            gc,
            root_residual=root.residual,
            boundary_limit=limit.value,
            psi_samples=limit.samples,
        )

    root = find_root(le, tol)
    return RuinClassification(
        RuinCase.LUNDBERG_BOUND, root.gamma0, dlt, gc, root_residual=root.residual
    )


def bound(classification: RuinClassification, u: float) -> float:
    """Certified upper bound on the ultimate ruin probability at capital ``u``."""
    if u < 0.0 or not math.isfinite(u):
        raise ValueError(f"capital must be finite and >= 0, got {u}")
    case = classification.case
    if case is RuinCase.ALMOST_SURE_RUIN:
        return 1.0
    if case is RuinCase.NEVER_RUIN:
        return 0.0
    return math.exp(-classification.rate * u)
