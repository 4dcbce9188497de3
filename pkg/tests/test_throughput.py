"""
Tests for the throughput model and least-effort scheduling.
"""

# Standard library imports
import logging
import math

# Third party imports
import pytest

# Local imports
from sisosd.simulate.throughput import least_effort_schedule, throughput


class Row:
    def __init__(self, snr_db, iteration, fer, cumulative_n_en,
                 l_e_max=math.inf):
        self.snr_db = snr_db
        self.iteration = iteration
        self.l_e_max = l_e_max
        self.fer = fer
        self.cumulative_n_en = cumulative_n_en
        self.theta = throughput(0.5, 4, 4, cumulative_n_en, 250e6)


SYNTHETIC_ROWS = [
    Row(8.0, 1, 0.5, 10.0), Row(8.0, 2, 0.2, 25.0), Row(8.0, 3, 0.005, 40.0),
    Row(9.0, 1, 0.05, 9.0), Row(9.0, 2, 0.008, 20.0), Row(9.0, 3, 0.001, 30.0),
    Row(10.0, 1, 0.009, 8.0), Row(10.0, 2, 0.0, 15.0), Row(10.0, 3, 0.0, 22.0),
    ]


class TestThroughput:
    def test_reference_value(self):
        assert throughput(0.5, 4, 4, 20.0, 250e6) == 1e8

    def test_inverse_in_nodes(self):
        assert throughput(0.5, 2, 2, 4.0, 1e6) == pytest.approx(
            2 * throughput(0.5, 2, 2, 8.0, 1e6))

    @pytest.mark.parametrize("n_en", [0.0, -1.0, math.nan])
    def test_invalid_node_count(self, n_en):
        with pytest.raises(ValueError):
            throughput(0.5, 4, 4, n_en, 250e6)


class TestLeastEffortSchedule:
    def test_cheapest_passing_setting(self):
        schedule = least_effort_schedule(SYNTHETIC_ROWS, 0.01)
        assert [choice.iteration for choice in schedule.choices] == [3, 2, 1]
        assert [choice.cumulative_n_en for choice in schedule.choices] == [
            40.0, 20.0, 8.0]
        assert schedule.choices[2].theta == pytest.approx(
            throughput(0.5, 4, 4, 8.0, 250e6))

    def test_crossovers(self):
        schedule = least_effort_schedule(SYNTHETIC_ROWS, 0.01)
        assert schedule.crossovers == [(9.0, 3, 2), (10.0, 2, 1)]

    def test_operating_points(self):
        schedule = least_effort_schedule(SYNTHETIC_ROWS, 0.01)
        lowest = {point.iteration: point.snr_db
                  for point in schedule.operating_points}
        assert lowest == {1: 10.0, 2: 9.0, 3: 8.0}

    def test_clipping_level_choice(self):
        rows = [Row(10.0, 1, 0.001, 12.0),
                Row(10.0, 1, 0.002, 7.0, l_e_max=0.2),
                Row(10.0, 1, 0.05, 5.0, l_e_max=0.05)]
        choice = least_effort_schedule(rows, 0.01).choices[0]
        assert choice.l_e_max == 0.2
        assert choice.cumulative_n_en == 7.0

    def test_unattained(self, caplog):
        with caplog.at_level(logging.WARNING):
            schedule = least_effort_schedule(SYNTHETIC_ROWS, 1e-4)
        assert not any(choice.attained for choice in schedule.choices)
        assert not schedule.crossovers
        assert "not reached" in caplog.text
        assert any("unattained" in line for line in schedule.summary_lines())

    def test_summary_lines(self):
        lines = least_effort_schedule(SYNTHETIC_ROWS, 0.01).summary_lines()
        assert lines[0] == "target_fer: 0.01"
        assert "crossover snr_db=10: iterations 2 -> 1" in lines

    def test_no_rows(self):
        with pytest.raises(ValueError):
            least_effort_schedule([], 0.01)
