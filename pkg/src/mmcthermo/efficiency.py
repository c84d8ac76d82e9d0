"""Energy per nat of information, ``G / I``, for matched and mismatched codebooks.

``m_low`` is the share of molecules in the low reservoir, ``p_low`` the
frequency of the symbol drawn from it. When the two differ, one reservoir
runs dry first. The creation energy of the whole container is still charged,
but only the molecules drawn before the run-out carry information.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ChannelParams, mutual_information
from .core_math import DomainError, jensen_gap
from .thermo import EnergyContext, creation_energy_closed

MATCH_TOL = 1e-12

MATCHED = "matched"
LOW_RUNS_OUT = "low_runs_out"
HIGH_RUNS_OUT = "high_runs_out"


class ZeroInformationError(DomainError):
    """The codebook carries no information, so ``G / I`` is undefined."""


@dataclass(frozen=True)
class MatchReport:
    m_low: float
    p_low: float
    g_over_i_kT: float
    g_over_i: float
    regime: str
    usable_molecules: float


@dataclass(frozen=True)
class SweepRow:
    m_low: float
    p_low: float
    g_over_i_kT: float
    regime: str


def open_grid(size):
    """``size`` evenly spaced interior points ``i / (size + 1)`` of (0, 1)."""
    size = int(size)
    if size < 1:
        raise DomainError("grid size must be >= 1")
    return np.arange(1, size + 1, dtype=float) / (size + 1)


def classify(m_low, p_low, tol=MATCH_TOL):
    if abs(m_low - p_low) <= tol:
        return MATCHED
    return LOW_RUNS_OUT if m_low < p_low else HIGH_RUNS_OUT


def _check_informative(c_low, c_high, p_low):
    if not c_low < c_high:
        raise ZeroInformationError(f"c_low == c_high == {c_low}: the channel output ignores the input")
    p = np.asarray(p_low, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise ZeroInformationError("p_low must lie strictly inside (0, 1); an endpoint never sends one symbol")


def _g_over_i_ratio(c_low, c_high, m_low, p_low):
    # small-c measure, kT units; vectorised over m_low and p_low
    m_low = np.asarray(m_low, dtype=float)
    p_low = np.asarray(p_low, dtype=float)
    j_m = jensen_gap(c_low, c_high, m_low)
    j_p = jensen_gap(c_low, c_high, p_low)
    low_out = (p_low / m_low) * j_m / j_p
    high_out = ((1.0 - p_low) / (1.0 - m_low)) * j_m / j_p
    ratio = np.where(m_low < p_low, low_out, high_out)
    return np.where(np.abs(m_low - p_low) <= MATCH_TOL, 1.0, ratio)


def usable_molecules(plan, p_low):
    """Molecules drawn before the first reservoir is exhausted.

    ``min(n_low / p_low, n_high / (1 - p_low))``, and exactly ``n`` for a
    matched codebook.
    """
    if not 0.0 < p_low < 1.0:
        raise DomainError(
            f"p_low={p_low}: one symbol is never sent, so one reservoir is never drawn from"
        )
    if classify(plan.m_low, p_low) == MATCHED:
        return float(plan.n)
    return min(plan.n_low / p_low, plan.n_high / (1.0 - p_low))


def energy_per_nat(ctx, plan, p_low, measure="small_c"):
    """Creation energy per nat that the reservoirs can deliver.

    With the default small-c information measure this is exactly ``kT`` for
    ``m_low == p_low`` and strictly more otherwise. ``measure="exact"``
    divides the same energy by the exact mutual information of the usable
    molecules instead; that variant is for comparison only and can dip
    below ``kT`` when the mole fractions are not small.

    Raises
    ------
    ZeroInformationError
        If ``c_low == c_high`` or ``p_low`` is 0 or 1.
    """
    _check_informative(plan.c_low, plan.c_high, p_low)
    regime = classify(plan.m_low, p_low)
    used = usable_molecules(plan, p_low)
    if measure == "small_c":
        ratio = float(_g_over_i_ratio(plan.c_low, plan.c_high, plan.m_low, p_low))
    elif measure == "exact":
        info = used * mutual_information(ChannelParams(plan.c_low, plan.c_high), p_low)
        ratio = creation_energy_closed(EnergyContext(), plan) / info
    else:
        raise DomainError(f"unknown measure {measure!r}")
    return MatchReport(plan.m_low, p_low, ratio, ratio * ctx.kT, regime, used)


def sweep_g_over_i(ctx, c_low, c_high, m_low_list, p_low_grid):
    """``G / I`` in kT for every ``(m_low, p_low)`` pair, sorted by both keys."""
    ms = sorted(float(m) for m in m_low_list)
    ps = np.sort(np.asarray(p_low_grid, dtype=float))
    for m in ms:
        if not 0.0 < m < 1.0:
            raise DomainError(f"m_low must lie in (0, 1), got {m}")
    _check_informative(c_low, c_high, ps)
    rows = []
    for m in ms:
        ratios = _g_over_i_ratio(c_low, c_high, m, ps)
        rows.extend(SweepRow(m, float(p), float(r), classify(m, p)) for p, r in zip(ps, ratios))
    return rows


@dataclass
class Theorem1Check:
    c_low: float
    c_high: float
    m_low: float
    grid_size: int
    tol: float
    argmin_p_low: float
    min_g_over_i_kT: float
    min_excess_far_kT: float
    passed: bool
    failures: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def verify_theorem1(ctx, c_low, c_high, m_low, grid_size=10_000, tol=1e-3):
    """Sweep ``p_low`` and confirm that ``G / I`` bottoms out at ``kT`` where ``p_low = m_low``.

    Three conditions, each recorded rather than raised: the argmin sits
    within one grid cell of ``m_low``; the minimum is within ``tol`` (kT,
    strict) of 1; every point further than one cell away is strictly above
    1. The returned values are in kT whatever ``ctx`` says.

    Raises
    ------
    ZeroInformationError
        For a degenerate channel, where no instance of the bound exists.
    """
    if grid_size < 100:
        raise DomainError("grid_size must be >= 100")
    if not 0.0 < m_low < 1.0:
        raise DomainError(f"m_low must lie in (0, 1), got {m_low}")
    _check_informative(c_low, c_high, 0.5)
    ps = open_grid(grid_size)
    cell = 1.0 / (grid_size + 1)
    ratios = _g_over_i_ratio(c_low, c_high, m_low, ps)
    k = int(np.argmin(ratios))
    argmin, minimum = float(ps[k]), float(ratios[k])
    far = np.abs(ps - m_low) > cell
    excess_far = float(np.min(ratios[far]) - 1.0) if np.any(far) else float("inf")

    failures = []
    if abs(argmin - m_low) > cell:
        failures.append(f"argmin {argmin} is more than one cell from m_low {m_low}")
    if not abs(minimum - 1.0) < tol:
        failures.append(f"minimum {minimum!r} not within {tol} of 1 kT")
    if not excess_far > 0:
        failures.append(f"G/I <= kT away from m_low (excess {excess_far!r})")
    return Theorem1Check(
        c_low, c_high, m_low, int(grid_size), tol, argmin, minimum, excess_far,
        not failures, failures,
    )


@dataclass
class MonotonicityCheck:
    c_low: float
    c_high: float
    grid_size: int
    decreasing_ok: bool
    increasing_ok: bool
    worst_decreasing_step: float
    worst_increasing_step: float

    @property
    def passed(self):
        return self.decreasing_ok and self.increasing_ok

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def verify_monotonicity(c_low, c_high, grid_size=1000):
    """Finite-difference check that ``J / p`` falls and ``J / (1 - p)`` rises in ``p``.

    ``worst_decreasing_step`` is the largest step of ``J / p`` (must be
    negative); ``worst_increasing_step`` the smallest step of ``J / (1 - p)``
    (must be positive).
    """
    if not 0.0 < c_low < c_high < 1.0:
        raise DomainError("need 0 < c_low < c_high < 1")
    ps = open_grid(grid_size)
    gap = jensen_gap(c_low, c_high, ps)
    d_dec = np.diff(gap / ps)
    d_inc = np.diff(gap / (1.0 - ps))
    worst_dec, worst_inc = float(np.max(d_dec)), float(np.min(d_inc))
    return MonotonicityCheck(
        c_low, c_high, int(grid_size), worst_dec < 0, worst_inc > 0, worst_dec, worst_inc
    )
