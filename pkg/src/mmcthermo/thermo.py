"""Free-energy bookkeeping for building the transmitter's two reservoirs.

Energies come back in units of ``kT`` unless the :class:`EnergyContext`
asks for joules. The receiver consuming a detected molecule is charged
nothing.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import k as BOLTZMANN

from .channel import ChannelParams
from .core_math import DomainError, jensen_gap

DEFAULT_TEMPERATURE = 298.15
DEFAULT_STEPS = 10_000
_CHUNK = 1 << 20


@dataclass(frozen=True)
class EnergyContext:
    """Temperature and unit convention. ``unit`` is ``"kT"`` or ``"joules"``."""

    temperature: float = DEFAULT_TEMPERATURE
    boltzmann_k: float = BOLTZMANN
    unit: str = "kT"

    def __post_init__(self):
        if not self.temperature > 0:
            raise DomainError(f"temperature must be positive, got {self.temperature}")
        if not self.boltzmann_k > 0:
            raise DomainError("boltzmann_k must be positive")
        if self.unit not in ("kT", "joules"):
            raise DomainError(f"unit must be 'kT' or 'joules', got {self.unit!r}")

    @property
    def kT(self):
        """Size of one ``kT`` in the output unit."""
        return 1.0 if self.unit == "kT" else self.boltzmann_k * self.temperature


@dataclass(frozen=True)
class ReservoirPlan:
    """``n`` molecules split as ``m_low`` / ``1 - m_low`` between the reservoirs.

    ``n`` is real-valued here; the simulator rounds it to integer counts.
    """

    n: float
    m_low: float
    c_low: float
    c_high: float

    def __post_init__(self):
        if not self.n >= 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not (0.0 < self.m_low < 1.0):
            raise DomainError(f"m_low must lie in (0, 1), got {self.m_low}")
        ChannelParams(self.c_low, self.c_high)

    @classmethod
    def from_counts(cls, n_low, n_high, c_low, c_high):
        n = n_low + n_high
        return cls(n, n_low / n, c_low, c_high)

    @property
    def channel(self):
        return ChannelParams(self.c_low, self.c_high)

    @property
    def n_low(self):
        return self.m_low * self.n

    @property
    def n_high(self):
        return (1.0 - self.m_low) * self.n

    @property
    def c_mean(self):
        """Container-average mole fraction; always between ``c_low`` and ``c_high``."""
        c = self.c_low + (1.0 - self.m_low) * (self.c_high - self.c_low)
        return min(max(c, self.c_low), self.c_high)


def chemical_potential(ctx, c_low, c_high):
    """Free energy to move one solute molecule from ``c_low`` to ``c_high``."""
    if not (c_low > 0 and c_high > 0):
        raise DomainError("mole fractions must be positive")
    # evaluate one orientation so that swapping the arguments flips the sign exactly
    if c_high >= c_low:
        return ctx.kT * math.log(c_high / c_low)
    return -ctx.kT * math.log(c_low / c_high)


def landauer_energy(ctx, unit="per_nat"):
    if unit == "per_nat":
        return ctx.kT
    if unit == "per_bit":
        return ctx.kT * math.log(2.0)
    raise DomainError(f"unit must be 'per_nat' or 'per_bit', got {unit!r}")


def molecules_moved(plan):
    """Solute molecules carried low -> high to reach the target fractions.

    Both ``n_low (c - c_low)`` and ``n_high (c_high - c)`` count the same
    molecules; a mismatch beyond rounding means the plan is inconsistent.
    """
    c = plan.c_mean
    from_low = plan.n_low * (c - plan.c_low)
    from_high = plan.n_high * (plan.c_high - c)
    if not math.isclose(from_low, from_high, rel_tol=1e-12, abs_tol=1e-12 * plan.n * plan.c_high):
        raise AssertionError(f"moved-molecule counts disagree: {from_low} vs {from_high}")
    # same count, written without the cancellation in c - c_low
    return plan.n * plan.m_low * (1.0 - plan.m_low) * (plan.c_high - plan.c_low)


def creation_energy_closed(ctx, plan):
    """Minimum (quasi-static) free energy to create the reservoirs."""
    return plan.n * ctx.kT * jensen_gap(plan.c_low, plan.c_high, plan.m_low)


def creation_energy_quasistatic(ctx, plan, steps=DEFAULT_STEPS):
    """Left Riemann sum of the move-by-move work, with ``steps`` equal moves.

    Move ``j`` carries ``dm = m / steps`` molecules against the potential
    built up by the ``j`` earlier moves; ``n_low`` and ``n_high`` stay fixed.
    Underestimates :func:`creation_energy_closed` and converges to it at
    rate ``1/steps``. The sum is taken in fixed-size chunks, so the result is
    reproducible for a given ``steps``.
    """
    steps = int(steps)
    if steps < 1:
        raise DomainError("steps must be >= 1")
    m = molecules_moved(plan)
    if m == 0:
        return 0.0
    c, n_low, n_high = plan.c_mean, plan.n_low, plan.n_high
    dm = m / steps
    if c - (steps - 1) * dm / n_low <= 0:
        raise DomainError("low reservoir mole fraction would become non-positive")
    partial = []
    for start in range(0, steps, _CHUNK):
        j = np.arange(start, min(start + _CHUNK, steps), dtype=float)
        moved = j * dm
        terms = np.log1p(moved / (n_high * c)) - np.log1p(-moved / (n_low * c))
        partial.append(float(np.sum(terms)))
    return dm * ctx.kT * math.fsum(partial)
