"""Scalar building blocks: binary entropy, partial entropy and the Jensen gap.

Everything is in nats. All functions accept floats or numpy arrays and
broadcast; scalar input gives a Python float back.
"""

import numpy as np

__all__ = [
    "DomainError",
    "binary_entropy",
    "binary_entropy_small",
    "partial_entropy",
    "jensen_gap",
    "kl_excess",
]


class DomainError(ValueError):
    """An argument lies outside the domain of the quantity requested."""


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_unit_interval(name, p, lo_open=False, hi_open=False):
    p = np.asarray(p, dtype=float)
    if np.any(np.isnan(p)):
        raise DomainError(f"{name} must not be NaN")
    lo_bad = p <= 0 if lo_open else p < 0
    hi_bad = p >= 1 if hi_open else p > 1
    if np.any(lo_bad | hi_bad):
        lo = "(" if lo_open else "["
        hi = ")" if hi_open else "]"
        raise DomainError(f"{name} must lie in {lo}0, 1{hi}, got {p if p.ndim == 0 else p[lo_bad | hi_bad][0]}")
    return p


def partial_entropy(p):
    """``p log p`` with ``0 log 0 = 0``.

    Non-positive everywhere on [0, 1], minimum ``-1/e`` at ``p = 1/e``.
    """
    p = _check_unit_interval("p", p)
    safe = np.where(p > 0, p, 1.0)
    return _out(np.where(p > 0, p * np.log(safe), 0.0))


def binary_entropy(p):
    """Binary entropy in nats, ``-p log p - (1-p) log(1-p)``.

    The argument is folded onto [0, 1/2] first (``1 - p`` is exact there),
    so the result keeps full relative accuracy for ``p`` near either end.

    Raises
    ------
    DomainError
        If ``p`` is outside [0, 1].
    """
    p = _check_unit_interval("p", p)
    q = np.where(p > 0.5, 1.0 - p, p)
    safe = np.where(q > 0, q, 1.0)
    h = -q * np.log(safe) - (1.0 - q) * np.log1p(-q)
    return _out(np.where(q > 0, h, 0.0))


def binary_entropy_small(p):
    """Small-argument form ``p - p log p`` of the binary entropy.

    Differs from :func:`binary_entropy` by ``p**2 / 2 + O(p**3)``.
    """
    p = np.asarray(p, dtype=float)
    if np.any(np.isnan(p) | (p < 0) | (p >= 1)):
        raise DomainError("p must lie in [0, 1)")
    safe = np.where(p > 0, p, 1.0)
    return _out(np.where(p > 0, p - p * np.log(safe), 0.0))


# |x| below this uses the power series of (1+x)log(1+x) - x
_SERIES_CUTOFF = 0.05
_SERIES_TERMS = 24


def kl_excess(x):
    """``(1 + x) log(1 + x) - x`` for ``x >= -1``, accurate near 0.

    This is the non-negative kernel of every divergence in the package:
    ``a log(a/w) - (a - w) = w * kl_excess(a/w - 1)``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < -1):
        raise DomainError("kl_excess needs x >= -1")
    small = np.abs(x) < _SERIES_CUTOFF
    xs = np.where(small, x, 0.0)
    series = np.zeros_like(xs)
    power = xs * xs
    for k in range(2, _SERIES_TERMS + 2):
        series = series + ((-1) ** k) * power / (k * (k - 1))
        power = power * xs
    xl = np.where(small, 0.0, x)
    onep = 1.0 + xl
    direct = np.where(onep > 0, onep * np.log1p(np.where(onep > 0, xl, 0.0)), 0.0) - xl
    return _out(np.where(small, series, direct))


def _gap_terms(c_low, c_high, p_low):
    w = p_low * c_low + (1.0 - p_low) * c_high
    u = (1.0 - p_low) * (c_low - c_high) / w
    v = p_low * (c_high - c_low) / w
    return w, u, v


def jensen_gap(c_low, c_high, p_low):
    """Convexity gap of ``phi(p) = p log p`` between two mole fractions.

    ``J = p phi(c_low) + (1 - p) phi(c_high) - phi(p c_low + (1 - p) c_high)``

    Evaluated as ``w [p g(u) + (1-p) g(v)]`` with ``g = kl_excess`` and
    ``w`` the mixture, which is free of the cancellation that the direct
    form suffers when ``c_low`` is close to ``c_high`` or both are tiny.
    Equals zero exactly when ``c_low == c_high`` or ``p`` is 0 or 1.

    Parameters
    ----------
    c_low, c_high : float or array
        Mole fractions with ``0 < c_low <= c_high < 1``.
    p_low : float or array
        Weight on ``c_low``, in [0, 1].
    """
    c_low = _check_unit_interval("c_L", c_low, lo_open=True, hi_open=True)
    c_high = _check_unit_interval("c_H", c_high, lo_open=True, hi_open=True)
    p_low = _check_unit_interval("p_L", p_low)
    if np.any(c_low > c_high):
        raise DomainError("need c_L <= c_H")
    w, u, v = _gap_terms(c_low, c_high, p_low)
    return _out(w * (p_low * kl_excess(u) + (1.0 - p_low) * kl_excess(v)))
