"""Parametric jump-measure families for light-tailed risk processes.

Every family shipped here is a finite-activity Levy measure: ``rate`` is the
expected number of jumps per unit time and jump sizes follow the normalised
density.  Families expose closed forms (or a rapidly convergent
one-dimensional tail integral) for all moments the analysis layer needs,
plus an exact sampler for Monte Carlo work.

A :data:`JumpMeasure` is a tuple of independent components; the empty tuple
means "no jumps".  Superpositions are handled by summing component
quantities, and the light-tail radius of a sum is the minimum over
components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = [
    "ExponentialNegative",
    "ExponentialPositive",
    "TemperedParetoNegative",
    "JumpComponent",
    "JumpMeasure",
    "NO_JUMPS",
    "TailMoment",
    "as_jump_measure",
]


class TailMoment(NamedTuple):
    """Value of an exponential tail integral, tagged when it diverges.

    ``divergent`` distinguishes analytic divergence from a large finite
    value; ``value`` is ``math.inf`` whenever ``divergent`` is True.
    """

    value: float
    divergent: bool


_GL_NODES, _GL_WEIGHTS = leggauss(32)


def _decaying_tail_integral(a: float, s: float, x0: float, rel_tol: float = 1e-13) -> float:
    """Integral of ``exp(-a*y) * y**(-s)`` over ``[x0, infinity)``.

    Composite 32-node Gauss-Legendre over panels that are at most one
    octave wide and span at most ~6 e-foldings of the exponential factor,
    stopped once an analytic bound on the remaining tail is negligible.
    Requires ``a >= 0``, ``x0 > 0``, and ``s > 1`` when ``a == 0``.
    """
    if a < 0.0:
        raise ValueError(f"exponential tilt must be non-negative, got {a}")
    if a == 0.0:
        if s <= 1.0:
            return math.inf
        return x0 ** (1.0 - s) / (s - 1.0)

    total = 0.0
    lo = x0
    while True:
        width = lo if a * lo <= 6.0 else 6.0 / a
        hi = lo + width
        y = 0.5 * (lo + hi) + 0.5 * width * _GL_NODES
        total += 0.5 * width * float(np.dot(_GL_WEIGHTS, np.exp(-a * y) * y ** (-s)))
        # remaining tail is below exp(-a*hi)*hi^-s times min(1/a, hi/(s-1))
        cap = 1.0 / a if s <= 1.0 else min(1.0 / a, hi / (s - 1.0))
        if math.exp(-a * hi) * hi ** (-s) * cap <= rel_tol * total:
            return total
        lo = hi


def _compensator_core(u: float) -> float:
    """``exp(u) - 1 - u`` without cancellation for small ``|u|``."""
    if abs(u) < 1e-4:
        return 0.5 * u * u * (1.0 + u / 3.0 + u * u / 12.0 + u * u * u / 60.0)
    return math.expm1(u) - u


@dataclass(frozen=True)
class ExponentialNegative:
    """Negative jumps arriving at rate ``beta`` with Exp(``alpha``) sizes.

    Levy density ``beta * alpha * exp(alpha*x)`` on ``x <= 0``.
    """

    beta: float
    alpha: float

    def __post_init__(self) -> None:
        if not self.beta > 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    @property
    def rate(self) -> float:
        return self.beta

    @property
    def mean_jump(self) -> float:
        return -1.0 / self.alpha

    @property
    def has_negative_jumps(self) -> bool:
        return True

    @property
    def gamma_c(self) -> float:
        return self.alpha

    def negative_exp_tail(self, gamma: float) -> TailMoment:
        # integral of e^{-gamma x} over the tail below -1
        if gamma >= self.alpha:
            return TailMoment(math.inf, True)
        d = self.alpha - gamma
        return TailMoment(self.beta * self.alpha * math.exp(-d) / d, False)

    def compensator_integral(self, gamma: float) -> float:
        # beta * gamma^2 / (alpha * (alpha - gamma)) for gamma in [0, alpha)
        return self.beta * gamma * gamma / (self.alpha * (self.alpha - gamma))

    def compensator_derivative(self, gamma: float) -> float:
        d = self.alpha - gamma
        return self.beta * self.alpha * (1.0 / (d * d) - 1.0 / (self.alpha * self.alpha))

    @property
    def square_small_moment(self) -> float:
        # integral of (x^2 ∧ 1) against the density, in closed form
        a = self.alpha
        inner = (2.0 - math.exp(-a) * (a * a + 2.0 * a + 2.0)) / (a * a)
        return self.beta * (inner + math.exp(-a))

    @property
    def abs_large_moment(self) -> float:
        a = self.alpha
        return self.beta * math.exp(-a) * (1.0 + 1.0 / a)

    @property
    def support(self) -> Tuple[float, float]:
        return (-math.inf, 0.0)

    def density(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = self.beta * self.alpha * np.exp(self.alpha * np.minimum(x, 0.0))
        return np.where(x <= 0.0, out, 0.0)

    def log_density(self, x: float) -> float:
        if x > 0.0:
            return -math.inf
        return math.log(self.beta * self.alpha) + self.alpha * x

    def sample_sizes(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return -rng.exponential(1.0 / self.alpha, size=n)


@dataclass(frozen=True)
class ExponentialPositive:
    """Positive jumps arriving at rate ``beta`` with Exp(``alpha``) sizes.

    Levy density ``beta * alpha * exp(-alpha*x)`` on ``x >= 0``.
    """

    beta: float
    alpha: float

    def __post_init__(self) -> None:
        if not self.beta > 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    @property
    def rate(self) -> float:
        return self.beta

    @property
    def mean_jump(self) -> float:
        return 1.0 / self.alpha

    @property
    def has_negative_jumps(self) -> bool:
        return False

    @property
    def gamma_c(self) -> float:
        return math.inf

    def negative_exp_tail(self, gamma: float) -> TailMoment:
        return TailMoment(0.0, False)

    def compensator_integral(self, gamma: float) -> float:
        return self.beta * gamma * gamma / (self.alpha * (self.alpha + gamma))

    def compensator_derivative(self, gamma: float) -> float:
        d = self.alpha + gamma
        return self.beta * self.alpha * (1.0 / (self.alpha * self.alpha) - 1.0 / (d * d))

    @property
    def square_small_moment(self) -> float:
        a = self.alpha
        inner = (2.0 - math.exp(-a) * (a * a + 2.0 * a + 2.0)) / (a * a)
        return self.beta * (inner + math.exp(-a))

    @property
    def abs_large_moment(self) -> float:
        a = self.alpha
        return self.beta * math.exp(-a) * (1.0 + 1.0 / a)

    @property
    def support(self) -> Tuple[float, float]:
        return (0.0, math.inf)

    def density(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = self.beta * self.alpha * np.exp(-self.alpha * np.maximum(x, 0.0))
        return np.where(x >= 0.0, out, 0.0)

    def log_density(self, x: float) -> float:
        if x < 0.0:
            return -math.inf
        return math.log(self.beta * self.alpha) - self.alpha * x

    def sample_sizes(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.exponential(1.0 / self.alpha, size=n)


@dataclass(frozen=True)
class TemperedParetoNegative:
    """Exponentially tempered power-law negative jumps below ``-cutoff``.

    Levy density ``scale * exp(alpha*x) * |x|**(-power)`` on
    ``x <= -cutoff``.  The exponential tail moment stays finite *at* the
    light-tail radius ``alpha`` because ``power >= 2``, which is what makes
    the critical-rate regime reachable.
    """

    scale: float
    alpha: float
    power: float
    cutoff: float

    def __post_init__(self) -> None:
        if not self.scale > 0.0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not self.power >= 2.0:
            raise ValueError(f"power must be >= 2, got {self.power}")
        if not self.cutoff >= 1.0:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")

    def _tail(self, a: float, s: float) -> float:
        return _decaying_tail_integral(a, s, self.cutoff)

    @cached_property
    def _norm(self) -> float:
        # tail integral at the tempering rate itself; gamma-independent
        return self._tail(self.alpha, self.power)

    @cached_property
    def _first_moment_tail(self) -> float:
        return self._tail(self.alpha, self.power - 1.0)

    @property
    def rate(self) -> float:
        return self.scale * self._norm

    @property
    def mean_jump(self) -> float:
        return -self._first_moment_tail / self._norm

    @property
    def has_negative_jumps(self) -> bool:
        return True

    @property
    def gamma_c(self) -> float:
        return self.alpha

    def negative_exp_tail(self, gamma: float) -> TailMoment:
        # support is contained in (-inf, -1] because cutoff >= 1; the
        # integral converges at gamma == alpha since power >= 2
        if gamma > self.alpha:
            return TailMoment(math.inf, True)
        return TailMoment(self.scale * self._tail(self.alpha - gamma, self.power), False)

    def compensator_integral(self, gamma: float) -> float:
        tilted = self._tail(self.alpha - gamma, self.power)
        return self.scale * (tilted - self._norm - gamma * self._first_moment_tail)

    def compensator_derivative(self, gamma: float) -> float:
        p1 = self.power - 1.0
        return self.scale * (self._tail(self.alpha - gamma, p1) - self._first_moment_tail)

    @property
    def square_small_moment(self) -> float:
        # support excludes (-1, 1), so the integrand is identically 1
        return self.rate

    @property
    def abs_large_moment(self) -> float:
        return self.scale * self._first_moment_tail

    @property
    def support(self) -> Tuple[float, float]:
        return (-math.inf, -self.cutoff)

    def density(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = x <= -self.cutoff
        xc = np.where(inside, x, -self.cutoff)
        out = self.scale * np.exp(self.alpha * xc) * np.abs(xc) ** (-self.power)
        return np.where(inside, out, 0.0)

    def log_density(self, x: float) -> float:
        if x > -self.cutoff:
            return -math.inf
        return math.log(self.scale) + self.alpha * x - self.power * math.log(-x)

    def size_quantile_table(self, n_nodes: int = 4096, tail_mass_tol: float = 1e-15):
        """Tabulate the inverse CDF of the jump magnitude for sampling.

        Returns ``(cdf, magnitudes)`` suitable for ``np.interp``: the
        magnitude distribution is truncated where the remaining mass drops
        below ``tail_mass_tol`` of the total, which is far below Monte
        Carlo resolution.
        """
        total = self._tail(self.alpha, self.power)
        y_max = 2.0 * self.cutoff
        while _decaying_tail_integral(self.alpha, self.power, y_max) > tail_mass_tol * total:
            y_max *= 2.0
        grid = np.geomspace(self.cutoff, y_max, n_nodes)
        # per-interval masses by 8-node Gauss-Legendre, vectorised
        nodes, weights = leggauss(8)
        lo, hi = grid[:-1], grid[1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        y = mid[None, :] + half[None, :] * nodes[:, None]
        vals = np.exp(-self.alpha * y) * y ** (-self.power)
        masses = half * np.einsum("i,ij->j", weights, vals)
        cdf = np.concatenate([[0.0], np.cumsum(masses)])
        cdf /= cdf[-1]
        return cdf, grid

    def sample_sizes(self, rng: np.random.Generator, n: int) -> np.ndarray:
        cdf, grid = _cached_quantile_table(self)
        return -np.interp(rng.uniform(size=n), cdf, grid)


_TABLE_CACHE: dict = {}


def _cached_quantile_table(component: TemperedParetoNegative):
    table = _TABLE_CACHE.get(component)
    if table is None:
        table = component.size_quantile_table()
        _TABLE_CACHE[component] = table
    return table


JumpComponent = Union[ExponentialNegative, ExponentialPositive, TemperedParetoNegative]
JumpMeasure = Tuple[JumpComponent, ...]

NO_JUMPS: JumpMeasure = ()

_COMPONENT_TYPES = (ExponentialNegative, ExponentialPositive, TemperedParetoNegative)


def as_jump_measure(jumps) -> JumpMeasure:
    """Coerce ``None``, a single component, or an iterable into a tuple."""
    if jumps is None:
        return NO_JUMPS
    if isinstance(jumps, _COMPONENT_TYPES):
        return (jumps,)
    out = tuple(jumps)
    for part in out:
        if not isinstance(part, _COMPONENT_TYPES):
            raise TypeError(f"not a jump component: {part!r}")
    return out
