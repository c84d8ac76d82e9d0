"""Monte Carlo simulation of the channel with finite integer reservoirs.

Each channel use picks the low reservoir with probability ``p_low``,
removes one molecule from it and reports whether it was solute. In
``"depleting"`` mode the solute probability is the current fraction of
the chosen reservoir. In ``"fixed_fraction"`` mode it stays at the initial
fraction. Either way a reservoir with no molecules left ends the run.

Two engines produce statistically identical records. ``"sequential"``
steps molecule by molecule. ``"batched"`` draws the input sequence in
blocks and then the solute counts in one go: sampling without replacement
from one reservoir gives a hypergeometric count, and a constant fraction
gives a binomial one. The batched engine is the default.
"""

import math
import secrets
from dataclasses import asdict, dataclass

import numpy as np

from .core_math import DomainError

RNG_ALGORITHM = "numpy.PCG64"
DEPLETING = "depleting"
FIXED_FRACTION = "fixed_fraction"
_BLOCK = 1 << 16
# numpy's hypergeometric sampler rejects larger populations
_HYPERGEOM_LIMIT = 10**9


@dataclass
class DiscreteReservoirState:
    total_remaining: int
    solute_remaining: int

    def __post_init__(self):
        if not 0 <= self.solute_remaining <= self.total_remaining:
            raise DomainError(
                f"need 0 <= solute ({self.solute_remaining}) <= total ({self.total_remaining})"
            )

    @property
    def fraction(self):
        if self.total_remaining == 0:
            raise DomainError("empty reservoir has no mole fraction")
        return self.solute_remaining / self.total_remaining

    def draw(self, rng, mode=DEPLETING, fixed_fraction=None):
        """Remove one molecule; return 1 if it was solute."""
        if self.total_remaining == 0:
            raise DomainError("cannot draw from an empty reservoir")
        prob = self.fraction if mode == DEPLETING else fixed_fraction
        y = int(rng.random() < prob)
        self.total_remaining -= 1
        if mode == DEPLETING:
            self.solute_remaining -= y
        else:
            self.solute_remaining = round(self.total_remaining * fixed_fraction)
        return y


@dataclass
class SimulationRecord:
    uses: int
    joint_counts: list
    exhausted: str
    seed: int
    mode: str
    engine: str
    n_low: int
    n_high: int
    solute_low: int
    solute_high: int
    realized_c_low: float
    realized_c_high: float
    p_low: float
    max_uses: object
    depleted_at: object
    final_low: DiscreteReservoirState
    final_high: DiscreteReservoirState
    rng_algorithm: str = RNG_ALGORITHM

    def to_dict(self):
        return asdict(self)


def _make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def _initial(n_low, n_high, c_low, c_high):
    for name, v in (("n_low", n_low), ("n_high", n_high)):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v}")
    for name, v in (("c_low", c_low), ("c_high", c_high)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {v}")
    n_low, n_high = int(n_low), int(n_high)
    return n_low, n_high, round(n_low * c_low), round(n_high * c_high)


def simulate_channel(
    n_low,
    n_high,
    c_low,
    c_high,
    p_low,
    max_uses=None,
    mode=DEPLETING,
    seed=None,
    engine="batched",
):
    """Run the channel until ``max_uses`` or until the chosen reservoir is empty.

    Initial solute counts are ``round(n * c)`` per reservoir. The realised
    fractions are stored on the record, and comparisons should use those.
    ``depleted_at`` is the use count at which the exhausted reservoir gave
    up its last molecule. The run stops on the next attempt to draw from it.

    Parameters
    ----------
    n_low, n_high : int
        Molecules (solute + solvent) in each reservoir.
    c_low, c_high : float
        Requested solute mole fractions, in [0, 1].
    p_low : float
        Probability of sending 0, i.e. drawing from the low reservoir.
    max_uses : int or None
        Use budget; ``None`` runs until a reservoir is exhausted.
    mode : {"depleting", "fixed_fraction"}
    seed : int or None
        64-bit seed; a fresh one is generated and recorded if omitted.
    engine : {"batched", "sequential"}
    """
    n_low, n_high, s_low, s_high = _initial(n_low, n_high, c_low, c_high)
    if not 0.0 <= p_low <= 1.0:
        raise DomainError(f"p_low must lie in [0, 1], got {p_low}")
    if mode not in (DEPLETING, FIXED_FRACTION):
        raise DomainError(f"unknown mode {mode!r}")
    if max_uses is not None and (int(max_uses) != max_uses or max_uses < 1):
        raise DomainError("max_uses must be a positive integer or None")
    if seed is None:
        seed = secrets.randbits(64)
    seed = int(seed)
    rng = _make_rng(seed)
    if engine == "batched":
        run = _run_batched
    elif engine == "sequential":
        run = _run_sequential
    else:
        raise DomainError(f"unknown engine {engine!r}")
    uses, joint, exhausted, depleted_at, final_low, final_high = run(
        rng, n_low, n_high, s_low, s_high, p_low, max_uses, mode
    )
    return SimulationRecord(
        uses=uses,
        joint_counts=joint,
        exhausted=exhausted,
        seed=seed,
        mode=mode,
        engine=engine,
        n_low=n_low,
        n_high=n_high,
        solute_low=s_low,
        solute_high=s_high,
        realized_c_low=s_low / n_low,
        realized_c_high=s_high / n_high,
        p_low=float(p_low),
        max_uses=None if max_uses is None else int(max_uses),
        depleted_at=depleted_at,
        final_low=final_low,
        final_high=final_high,
    )


def _run_sequential(rng, n_low, n_high, s_low, s_high, p_low, max_uses, mode):
    fractions = (s_low / n_low, s_high / n_high)
    states = (DiscreteReservoirState(n_low, s_low), DiscreteReservoirState(n_high, s_high))
    joint = [[0, 0], [0, 0]]
    reached = [None, None]
    uses, exhausted, depleted_at = 0, "none", None
    while max_uses is None or uses < max_uses:
        x = 0 if rng.random() < p_low else 1
        state = states[x]
        if state.total_remaining == 0:
            exhausted = ("low", "high")[x]
            depleted_at = reached[x]
            break
        y = state.draw(rng, mode, fractions[x])
        joint[x][y] += 1
        uses += 1
        if state.total_remaining == 0:
            reached[x] = uses
    return uses, joint, exhausted, depleted_at, states[0], states[1]


def _first_reach(cum, level):
    # cum is non-decreasing; index of the first entry >= level, or None
    if cum.size == 0 or cum[-1] < level:
        return None
    return int(np.argmax(cum >= level))


def _run_batched(rng, n_low, n_high, s_low, s_high, p_low, max_uses, mode):
    zeros = ones = uses = 0
    reached = {0: None, 1: None}
    exhausted = "none"
    while True:
        budget = _BLOCK if max_uses is None else min(_BLOCK, max_uses - uses)
        if budget <= 0:
            break
        is_low = rng.random(budget) < p_low
        cz = zeros + np.cumsum(is_low)
        co = ones + np.cumsum(~is_low)
        over = (is_low & (cz > n_low)) | (~is_low & (co > n_high))
        take = budget
        if over.any():
            take = int(np.argmax(over))
            exhausted = "low" if is_low[take] else "high"
        for x, cum, cap in ((0, cz[:take], n_low), (1, co[:take], n_high)):
            if reached[x] is None:
                i = _first_reach(cum, cap)
                if i is not None:
                    reached[x] = uses + i + 1
        if take:
            zeros, ones = int(cz[take - 1]), int(co[take - 1])
        uses += take
        if exhausted != "none":
            break

    if mode == DEPLETING:
        if max(n_low, n_high) >= _HYPERGEOM_LIMIT:
            raise DomainError("depleting batched engine supports reservoirs below 1e9 molecules")
        y_low = int(rng.hypergeometric(s_low, n_low - s_low, zeros)) if zeros else 0
        y_high = int(rng.hypergeometric(s_high, n_high - s_high, ones)) if ones else 0
        final_low = DiscreteReservoirState(n_low - zeros, s_low - y_low)
        final_high = DiscreteReservoirState(n_high - ones, s_high - y_high)
    else:
        y_low = int(rng.binomial(zeros, s_low / n_low))
        y_high = int(rng.binomial(ones, s_high / n_high))
        final_low = DiscreteReservoirState(n_low - zeros, round((n_low - zeros) * s_low / n_low))
        final_high = DiscreteReservoirState(n_high - ones, round((n_high - ones) * s_high / n_high))

    joint = [[zeros - y_low, y_low], [ones - y_high, y_high]]
    depleted_at = None
    if exhausted != "none":
        depleted_at = reached[0 if exhausted == "low" else 1]
    return uses, joint, exhausted, depleted_at, final_low, final_high


def _joint_pmf(counts):
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total < 1:
        raise DomainError("need at least one channel use")
    return counts / total, total


def empirical_mutual_information(rec_or_counts):
    """Plug-in mutual information (nats) of a 2x2 joint count table.

    Accepts a :class:`SimulationRecord` or the table itself. Biased upward
    by roughly ``1 / (2 * uses)`` for a 2x2 table.
    """
    counts = rec_or_counts.joint_counts if isinstance(rec_or_counts, SimulationRecord) else rec_or_counts
    pxy, _ = _joint_pmf(counts)
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    mask = pxy > 0
    ratio = np.where(mask, pxy, 1.0) / np.where(mask, px * py, 1.0)
    return max(0.0, float(np.sum(np.where(mask, pxy * np.log(ratio), 0.0))))


def mutual_information_standard_error(rec_or_counts):
    """Delta-method standard error of the plug-in estimate.

    ``sqrt(Var[log p(x,y)/(p(x)p(y))] / uses)`` under the empirical law.
    Zero when the table is exactly independent.
    """
    counts = rec_or_counts.joint_counts if isinstance(rec_or_counts, SimulationRecord) else rec_or_counts
    pxy, total = _joint_pmf(counts)
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    mask = pxy > 0
    info = np.where(mask, np.log(np.where(mask, pxy, 1.0) / np.where(mask, px * py, 1.0)), 0.0)
    mean = float(np.sum(pxy * info))
    var = max(0.0, float(np.sum(pxy * info**2)) - mean**2)
    return math.sqrt(var / total)
