"""The minimal molecular communication channel as a binary asymmetric channel.

Input ``x = 0`` draws a molecule from the low reservoir (solute fraction
``c_low``), ``x = 1`` from the high reservoir (``c_high``). Output ``y = 1``
means the molecule was solute. ``p_low`` is always ``Pr(X = 0)``.

All information quantities are per channel use, in nats.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core_math import (
    DomainError,
    _check_unit_interval,
    _out,
    binary_entropy,
    jensen_gap,
    kl_excess,
    partial_entropy,
)

SMALL_C_THRESHOLD = 1e-2


@dataclass(frozen=True)
class ChannelParams:
    """Solute mole fractions of the two reservoirs, ``0 < c_low <= c_high < 1``."""

    c_low: float
    c_high: float
    small_c_threshold: float = SMALL_C_THRESHOLD

    def __post_init__(self):
        for name in ("c_low", "c_high"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise DomainError(f"{name} must lie in (0, 1), got {v}")
        if self.c_low > self.c_high:
            raise DomainError(f"need c_low <= c_high, got {self.c_low} > {self.c_high}")
        if self.small_c_threshold <= 0:
            raise DomainError("small_c_threshold must be positive")

    @property
    def degenerate(self):
        return self.c_low == self.c_high

    @property
    def is_small_c(self):
        return self.c_high <= self.small_c_threshold


def transition_prob(ch, x, y):
    """``p(y | x)`` for bits ``x`` and ``y``."""
    if x not in (0, 1) or y not in (0, 1):
        raise DomainError("x and y must be bits")
    c = ch.c_low if x == 0 else ch.c_high
    return c if y == 1 else 1.0 - c


def transition_matrix(ch):
    """Row-stochastic 2x2 matrix, rows indexed by ``x``, columns by ``y``."""
    return np.array([[1.0 - ch.c_low, ch.c_low], [1.0 - ch.c_high, ch.c_high]])


def output_weight(ch, p_low):
    """``Pr(Y = 1) = p_low c_low + (1 - p_low) c_high``."""
    p_low = _check_unit_interval("p_L", p_low)
    return _out(p_low * ch.c_low + (1.0 - p_low) * ch.c_high)


def mutual_information(ch, p_low):
    """Exact ``I(X;Y) = H(w) - p_low H(c_low) - (1 - p_low) H(c_high)``.

    Computed as the sum of non-negative divergence terms rather than by
    subtracting entropies: the solute part is :func:`jensen_gap` and the
    solvent part the analogous gap on ``1 - c``. Agrees with the entropy
    difference to rounding and stays accurate for tiny or nearly equal
    mole fractions.
    """
    p_low = _check_unit_interval("p_L", p_low)
    a, b = ch.c_low, ch.c_high
    w = p_low * a + (1.0 - p_low) * b
    solvent = (1.0 - w) * (
        p_low * kl_excess((1.0 - p_low) * (b - a) / (1.0 - w))
        + (1.0 - p_low) * kl_excess(p_low * (a - b) / (1.0 - w))
    )
    return _out(jensen_gap(a, b, p_low) + solvent)


def mutual_information_entropies(ch, p_low):
    """Textbook entropy-difference form of :func:`mutual_information`."""
    w = output_weight(ch, p_low)
    return _out(
        binary_entropy(w)
        - p_low * binary_entropy(ch.c_low)
        - (1.0 - np.asarray(p_low)) * binary_entropy(ch.c_high)
    )


def mutual_information_small_c(ch, p_low, strict=False):
    """Small-mole-fraction mutual information per use; the Jensen gap.

    With ``strict=True`` a channel whose ``c_high`` exceeds its
    ``small_c_threshold`` is rejected instead of silently approximated.
    """
    if strict and not ch.is_small_c:
        raise DomainError(
            f"c_high={ch.c_high} exceeds small-c threshold {ch.small_c_threshold}"
        )
    return jensen_gap(ch.c_low, ch.c_high, p_low)


def _mi_slope(ch, p_low):
    a, b = ch.c_low, ch.c_high
    w = p_low * a + (1.0 - p_low) * b
    return (a - b) * (np.log1p(-w) - np.log(w)) - binary_entropy(a) + binary_entropy(b)


def _small_c_slope(ch, p_low):
    a, b = ch.c_low, ch.c_high
    w = p_low * a + (1.0 - p_low) * b
    return partial_entropy(a) - partial_entropy(b) - (np.log(w) + 1.0) * (a - b)


def capacity(ch, approx="exact", tol=1e-12):
    """Maximise the per-use information over ``p_low``.

    Both measures are concave in ``p_low`` with positive slope at 0 and
    negative slope at 1, so the maximiser is the bracketed root of the
    slope.

    Returns
    -------
    (p_star, value) : tuple of float
        For a degenerate channel, ``(0.5, 0.0)``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if approx == "exact":
        slope, measure = _mi_slope, mutual_information
    elif approx == "small_c":
        slope, measure = _small_c_slope, mutual_information_small_c
    else:
        raise DomainError(f"unknown approx {approx!r}")
    if ch.degenerate:
        return 0.5, 0.0
    p_star = brentq(lambda p: slope(ch, p), 0.0, 1.0, xtol=tol, rtol=4 * np.finfo(float).eps)
    return float(p_star), float(measure(ch, p_star))
