"""
Tests for the a-priori metric tables.
"""

# Third party imports
import numpy as np
import numpy.testing
import pytest

# Local imports
from sisosd.detect.apriori import (
    AprioriTable,
    apriori_increment,
    build_apriori_tables,
    )
from sisosd.mimo.constellation import FlagMask


class TestAprioriIncrement:
    def test_zero_llrs(self, qam16):
        for bits in qam16.bits:
            assert apriori_increment(np.zeros(4), bits) == 0

    def test_agreeing_bits(self):
        assert apriori_increment([2.0, -3.0], [1, -1]) == 0

    def test_one_disagreeing_bit(self):
        assert apriori_increment([2.0, -3.0], [-1, -1]) == 2

    def test_zero_llr_counts_as_positive(self):
        assert apriori_increment([0.0, 1.0], [-1, 1]) == 0


class TestAprioriTable:
    def test_pattern_metrics(self, qpsk):
        table = AprioriTable([2.0, -3.0], qpsk)
        numpy.testing.assert_array_equal(table.metrics, [0, 2, 3, 5])

    def test_zero_row_identity_order(self, qam16):
        table = AprioriTable(np.zeros(4), qam16)
        numpy.testing.assert_array_equal(table.metrics, np.zeros(16))
        numpy.testing.assert_array_equal(table.sorted_order, np.arange(16))

    def test_sorted_heads(self, qam16, rng):
        llrs = rng.normal(0, 3, size=4)
        table = AprioriTable(llrs, qam16)
        sorted_metrics = table.metrics[table.sorted_order]
        assert sorted_metrics[0] == 0
        assert sorted_metrics[1] == np.min(np.abs(llrs))
        assert np.all(np.diff(sorted_metrics) >= 0)

    def test_symbol_metrics_match_increment(self, qam16, rng):
        llrs = rng.normal(0, 3, size=4)
        table = AprioriTable(llrs, qam16)
        for symbol in range(qam16.n_symbols):
            assert table.symbol_metrics[symbol] == pytest.approx(
                apriori_increment(llrs, qam16.bits[symbol]), abs=1e-12)

    def test_next_unflagged_skips(self, qpsk):
        table = AprioriTable([2.0, -3.0], qpsk)
        mask = FlagMask(qpsk.n_symbols)
        head = table.next_unflagged(mask)
        assert table.symbol_metrics[head] == 0
        mask.set(head)
        second = table.next_unflagged(mask)
        assert table.symbol_metrics[second] == 2
        for index in range(qpsk.n_symbols):
            mask.set(index)
        assert table.next_unflagged(mask) is None

    def test_non_finite_rejected(self, qpsk):
        with pytest.raises(ValueError):
            build_apriori_tables([[np.inf, 0.0]], qpsk)
