"""
S-random bit interleaver.

Convention: interleaved[k] = values[perm[k]]. A permutation is S-random
when any two positions at most S apart are mapped at least S apart.
"""

# Standard library imports
import logging
import math

# Third party imports
import numpy as np

# Local imports
from sisosd.constants import INTERLEAVER_MAX_ATTEMPTS
import sisosd.utils.misc


class Interleaver(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, perm, spread=1):
        perm = np.asarray(perm, dtype=np.int64)
        if perm.ndim != 1 or not np.array_equal(
                np.sort(perm), np.arange(perm.size)):
            raise ValueError("Interleaver permutation is not a bijection")
        self.perm = perm
        self.inverse = np.empty_like(perm)
        self.inverse[perm] = np.arange(perm.size)
        self.spread = int(spread)

    @property
    def n(self):
        return self.perm.size

    def _check_length(self, values):
        if values.shape[0] != self.n:
            raise ValueError(
                f"Got {values.shape[0]} values for an interleaver "
                f"of length {self.n}")

    def interleave(self, values):
        values = np.asarray(values)
        self._check_length(values)
        return values[self.perm]

    def deinterleave(self, values):
        values = np.asarray(values)
        self._check_length(values)
        return values[self.inverse]


def interleave(values, interleaver):
    return interleaver.interleave(values)


def deinterleave(values, interleaver):
    return interleaver.deinterleave(values)


def check_spread(perm, spread):
    perm = np.asarray(perm, dtype=np.int64)
    for distance in range(1, min(spread, perm.size - 1) + 1):
        if np.any(np.abs(perm[distance:] - perm[:-distance]) < spread):
            return False
    return True


def _attempt_s_random(n, spread, rng):
    """One greedy pass; returns the permutation or None on a dead end."""
    remaining = rng.permutation(n)
    perm = np.empty(n, dtype=np.int64)
    for position in range(n):
        recent = perm[max(0, position - spread):position]
        if recent.size:
            allowed = np.all(
                np.abs(remaining[:, np.newaxis] - recent[np.newaxis, :])
                >= spread, axis=1)
            candidates = np.flatnonzero(allowed)
            if not candidates.size:
                return None
            pick = candidates[0]
        else:
            pick = 0
        perm[position] = remaining[pick]
        remaining = np.delete(remaining, pick)
    return perm


def make_s_random(n, spread, rng, max_attempts=INTERLEAVER_MAX_ATTEMPTS):
    """Generate an S-random interleaver, relaxing S if it cannot be met."""
    logger = logging.getLogger(__name__)
    if n < 1:
        raise ValueError(f"Interleaver length must be positive, not {n}")
    if spread < 1:
        raise ValueError(f"Spread must be at least 1, not {spread}")
    if spread > math.floor(math.sqrt(n / 2)):
        logger.warning(
            "Spread %s exceeds sqrt(n / 2) for n = %s; generation may "
            "need to relax it", spread, n)

    while spread >= 1:
        for attempt in range(1, max_attempts + 1):
            perm = _attempt_s_random(n, spread, rng)
            if perm is not None:
                logger.debug(
                    "Built S-random interleaver (n=%s, S=%s) on attempt %s",
                    n, spread, attempt)
                return Interleaver(perm, spread=spread)
        logger.warning(
            "No S-random interleaver with n=%s and S=%s after %s attempts; "
            "retrying with S=%s", n, spread, max_attempts, spread - 1)
        spread -= 1
    raise RuntimeError(
        f"Could not generate an S-random interleaver of length {n}")
