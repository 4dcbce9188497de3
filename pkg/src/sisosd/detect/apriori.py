"""
A-priori metric tables: per-antenna metrics of every bit pattern, sorted.

The a-priori metric of a symbol is the sum of |L^A_b| over the bits that
disagree with the sign of their LLR, with sign(0) taken as +1.
"""

# Third party imports
import numpy as np

# Local imports
import sisosd.utils.misc


def llr_signs(llrs):
    return np.where(np.asarray(llrs) >= 0, 1, -1)


def apriori_increment(llr_row, bits):
    llr_row = np.asarray(llr_row, dtype=np.float64)
    disagree = np.asarray(bits) * llr_signs(llr_row) < 0
    return float(np.sum(np.abs(llr_row[disagree])))


class AprioriTable(sisosd.utils.misc.AutoReprMixin):
    """Metrics of one antenna over all disagreement patterns d.

    Bit b of d is set when bit b of the symbol disagrees with sign(L^A_b);
    ``symbols[d]`` is the symbol index carrying that disagreement pattern.
    """

    def __init__(self, llr_row, constellation):
        self.llrs = np.asarray(llr_row, dtype=np.float64)
        n_bits = constellation.bits_per_symbol
        if self.llrs.shape != (n_bits,):
            raise ValueError(
                f"Expected {n_bits} a-priori LLRs, not {self.llrs.shape}")
        patterns = np.arange(constellation.n_symbols)
        disagreement = (patterns[:, np.newaxis] >> np.arange(n_bits)) & 1
        self.metrics = disagreement @ np.abs(self.llrs)
        self.sorted_order = np.argsort(self.metrics, kind="stable")

        favoured_pattern = int(np.sum(
            (self.llrs < 0).astype(np.int64) << np.arange(n_bits)))
        self.symbols = constellation.mapper[patterns ^ favoured_pattern]
        self.symbol_metrics = np.empty(constellation.n_symbols)
        self.symbol_metrics[self.symbols] = self.metrics
        self.next_ptr = 0

    def reset(self):
        self.next_ptr = 0

    def next_unflagged(self, mask):
        """Head of the sorted list skipping flagged symbols (None if empty)."""
        flags = getattr(mask, "flags", mask)
        while self.next_ptr < self.sorted_order.size:
            symbol = self.symbols[self.sorted_order[self.next_ptr]]
            if not flags[symbol]:
                return int(symbol)
            self.next_ptr += 1
        return None


def build_apriori_tables(l_a, constellation):
    l_a = np.asarray(l_a, dtype=np.float64)
    if l_a.ndim != 2 or not np.all(np.isfinite(l_a)):
        raise ValueError("A-priori LLRs must be a finite M_T x Q matrix")
    return [AprioriTable(llr_row, constellation) for llr_row in l_a]
