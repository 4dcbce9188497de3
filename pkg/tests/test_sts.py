"""
Tests for the SISO single tree-search detector.
"""

# Standard library imports
import math

# Third party imports
import numpy as np
import numpy.testing
import pytest

# Local imports
from sisosd.constants import ClipMode, EnumMode
from sisosd.detect.oracle import exhaustive_map, metric_table
from sisosd.detect.sts import (
    DetectorConfig,
    SisoStsDetector,
    channel_increment,
    clip,
    merge_orders,
    )


ATOL = 1e-9
ALL_MODES = list(EnumMode)
EXACT_MODES = [EnumMode.HYBRID, EnumMode.FULL_SORT_SE]
NORMALIZED_CLIPPING = [0.05, 0.2, 0.8]


def assert_matches_oracle(result, reference):
    assert result.completed
    numpy.testing.assert_array_equal(result.x_map, reference.x_map)
    assert result.lambda_map == pytest.approx(reference.lambda_map, abs=ATOL)
    numpy.testing.assert_allclose(result.l_e, reference.l_e, rtol=0, atol=ATOL)


def run_and_compare(instance, mode, normalized_l_e_max=math.inf,
                    clip_mode=ClipMode.STRICT):
    l_e_max = normalized_l_e_max / instance.n0
    config = DetectorConfig(
        l_e_max=l_e_max, enum_mode=mode, clip_mode=clip_mode)
    result = SisoStsDetector(instance.constellation, config).detect(
        *instance.args)
    reference = exhaustive_map(
        instance.constellation, *instance.args, l_e_max=l_e_max)
    assert_matches_oracle(result, reference)
    if math.isinf(l_e_max):
        numpy.testing.assert_allclose(
            result.lam_bar, reference.lam_bar, rtol=0, atol=ATOL)
    else:
        assert np.all(np.abs(result.l_e) <= l_e_max)
    return result


# --- Metric helpers --- #

class TestClip:
    @pytest.mark.parametrize(
        "lam_bar, expected", [(10.0, 5.0), (2.0, 2.0), (0.0, 1.0)])
    def test_two_sided_clamp(self, lam_bar, expected):
        assert clip(lam_bar, 3.0, 2.0) == expected

    def test_infinite_level_is_identity(self):
        lam_bar = np.array([np.inf, 4.0])
        numpy.testing.assert_array_equal(clip(lam_bar, 3.0, np.inf), lam_bar)


class TestChannelIncrement:
    def test_exact_fit(self):
        r_row = np.array([0.0, 2.0, 1.0 - 1.0j])
        tail = np.array([0.5j])
        cand = 0.3 - 0.1j
        y_i = r_row[1] * cand + r_row[2] * tail[0]
        assert channel_increment(y_i, r_row, tail, cand, scale=4.0) == (
            pytest.approx(0.0, abs=1e-15))

    def test_identity_row(self):
        delta = 0.2 - 0.1j
        assert channel_increment(
            1.0 + delta, np.array([1.0]), np.array([]), 1.0, scale=1 / 0.5
            ) == pytest.approx(abs(delta) ** 2 / 0.5)

    def test_matches_metric_table(self, make_instance, rng):
        instance = make_instance(rng, 3, 4)
        tail = np.array([5, 9])
        rows = metric_table(instance.constellation, *instance.args, 0, tail)
        tail_points = instance.constellation.points[tail]
        for symbol, m_c, __, __ in rows:
            assert channel_increment(
                instance.y_tilde[0], instance.r[0], tail_points,
                instance.constellation.points[symbol],
                scale=1 / instance.n0) == pytest.approx(m_c, abs=ATOL)


# --- Enumeration --- #

class TestMergeOrders:
    def test_interleaved_trace(self):
        # Symbols 0..3 stand for O1..O4 with M_P(O1) < ... < M_P(O4)
        channel_metrics = np.array([1.5, 3.0, 1.0, 6.0])
        apriori_metrics = np.array([1.0, 0.0, 3.5, 2.0])
        channel_order = [2, 0, 1, 3]
        apriori_order = [1, 0, 3, 2]
        totals = channel_metrics + apriori_metrics
        assert list(np.argsort(totals)) == [0, 1, 2, 3]
        selected = [symbol for symbol, __, __ in merge_orders(
            channel_order, apriori_order, channel_metrics, apriori_metrics)]
        assert selected == [1, 0, 2, 3]

    def test_bound_never_exceeds_remaining(self, rng):
        for __ in range(50):
            channel_metrics = rng.exponential(size=8)
            apriori_metrics = rng.exponential(size=8)
            remaining = set(range(8))
            for symbol, metric, bound in merge_orders(
                    list(np.argsort(channel_metrics, kind="stable")),
                    list(np.argsort(apriori_metrics, kind="stable")),
                    channel_metrics, apriori_metrics, parent=1.5):
                totals = [1.5 + channel_metrics[index]
                          + apriori_metrics[index] for index in remaining]
                assert bound <= min(totals)
                assert metric == pytest.approx(
                    1.5 + channel_metrics[symbol] + apriori_metrics[symbol])
                remaining.remove(symbol)
            assert not remaining


def enumerate_level(detector, state, level):
    calls = []
    while True:
        candidate = detector.hybrid_next(state, level)
        if candidate is None:
            return calls
        calls.append(candidate)


class TestHybridNext:
    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_each_symbol_once(self, mode, make_instance, rng):
        instance = make_instance(rng, 2, 4)
        detector = SisoStsDetector(
            instance.constellation, DetectorConfig(enum_mode=mode))
        state = detector.init_state(*instance.args)
        detector.start_level(state, 1, instance.y_tilde, instance.r)
        symbols = [symbol for symbol, __, __ in
                   enumerate_level(detector, state, 1)]
        assert sorted(symbols) == list(range(16))

    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_bound_sound_below_root(self, mode, make_instance, rng):
        for __ in range(10):
            instance = make_instance(rng, 3, 4, snr_db=8.0)
            const = instance.constellation
            detector = SisoStsDetector(const, DetectorConfig(enum_mode=mode))
            state = detector.init_state(*instance.args)
            root = int(rng.integers(16))
            root_rows = metric_table(const, *instance.args, 2, [])
            state.path_symbols[2] = const.points[root]
            state.path_metrics[2] = root_rows[root][3]
            detector.start_level(state, 1, instance.y_tilde, instance.r)

            rows = metric_table(const, *instance.args, 1, [root])
            totals = {symbol: root_rows[root][3] + m_p
                      for symbol, __, __, m_p in rows}
            for symbol, metric, bound in enumerate_level(detector, state, 1):
                assert bound <= min(totals.values()) + ATOL
                assert metric == pytest.approx(totals.pop(symbol), abs=ATOL)
            assert not totals

    def test_full_sort_is_ascending(self, make_instance, rng):
        instance = make_instance(rng, 2, 6)
        detector = SisoStsDetector(
            instance.constellation,
            DetectorConfig(enum_mode=EnumMode.FULL_SORT_SE))
        state = detector.init_state(*instance.args)
        detector.start_level(state, 1, instance.y_tilde, instance.r)
        metrics = [metric for __, metric, __ in
                   enumerate_level(detector, state, 1)]
        assert np.all(np.diff(metrics) >= 0)

    def test_zero_apriori_follows_channel_order(self, make_instance, rng):
        instance = make_instance(rng, 2, 4)
        instance.l_a[:] = 0
        orders = {}
        for mode in (EnumMode.HYBRID, EnumMode.CHANNEL_ONLY):
            detector = SisoStsDetector(
                instance.constellation, DetectorConfig(enum_mode=mode))
            state = detector.init_state(*instance.args)
            detector.start_level(state, 1, instance.y_tilde, instance.r)
            orders[mode] = enumerate_level(detector, state, 1)
        assert ([symbol for symbol, __, __ in orders[EnumMode.HYBRID]]
                == [symbol for symbol, __, __ in
                    orders[EnumMode.CHANNEL_ONLY]])
        metrics = [metric for __, metric, __ in orders[EnumMode.HYBRID]]
        assert np.all(np.diff(metrics) >= 0)


# --- Pruning and bookkeeping --- #

@pytest.fixture
def small_state(make_instance, rng):
    instance = make_instance(rng, 2, 2)
    detector = SisoStsDetector(instance.constellation)
    return detector, detector.init_state(*instance.args), instance


class TestPruneChecks:
    def test_fresh_search_never_prunes(self, small_state):
        detector, state, __ = small_state
        assert not detector.prune_check_down(state, 0, 1e300)
        assert not detector.prune_check_sibling(state, 1, 1e300)

    def test_dominated_node(self, small_state):
        detector, state, __ = small_state
        state.lambda_map = 1.0
        state.x_map[:] = 1
        state.counter_metrics[:] = 2.0
        detector.refresh_radius(state)
        assert detector.prune_check_down(state, 1, 3.0)
        assert not detector.prune_check_down(state, 1, 1.5)

    def test_sibling_frees_own_level(self, small_state):
        detector, state, __ = small_state
        state.lambda_map = 1.0
        state.x_map[:] = 1
        state.path_bits[1] = state.x_map[1]
        state.counter_metrics[0] = 2.0
        state.counter_metrics[1] = 10.0
        detector.refresh_radius(state)
        assert detector.prune_check_down(state, 1, 5.0)
        assert not detector.prune_check_sibling(state, 1, 5.0)


class TestLeafUpdate:
    def test_first_leaf(self, small_state):
        detector, state, __ = small_state
        bits = np.array([[1, -1], [1, 1]], dtype=np.int8)
        detector.leaf_update(state, 5.0, bits)
        assert state.lambda_map == 5.0
        numpy.testing.assert_array_equal(state.x_map, bits)
        assert np.all(np.isinf(state.lam_bar))

    def test_worse_leaf_one_bit(self, small_state):
        detector, state, instance = small_state
        bits = np.array([[1, -1], [1, 1]], dtype=np.int8)
        detector.leaf_update(state, 5.0, bits)
        other = bits.copy()
        other[0, 1] = 1
        detector.leaf_update(state, 7.0, other)
        expected = np.full((2, 2), np.inf)
        expected[0, 1] = 7.0 - instance.l_a[0, 1] * bits[0, 1]
        numpy.testing.assert_array_equal(state.lam_bar, expected)
        assert state.lambda_map == 5.0

    def test_better_leaf_swaps_roles(self, small_state):
        detector, state, instance = small_state
        bits = np.array([[1, -1], [1, 1]], dtype=np.int8)
        detector.leaf_update(state, 5.0, bits)
        better = np.array([[-1, -1], [1, -1]], dtype=np.int8)
        detector.leaf_update(state, 3.0, better)
        assert state.lambda_map == 3.0
        numpy.testing.assert_array_equal(state.x_map, better)
        flipped = better != bits
        numpy.testing.assert_array_equal(
            state.lam_bar[flipped],
            5.0 - instance.l_a[flipped] * better[flipped])
        assert np.all(np.isinf(state.lam_bar[~flipped]))

    def test_extrinsic_at_clamp_boundary(self, make_instance, rng):
        instance = make_instance(rng, 2, 2)
        detector = SisoStsDetector(
            instance.constellation, DetectorConfig(l_e_max=1.5))
        state = detector.init_state(*instance.args)
        bits = np.ones((2, 2), dtype=np.int8)
        detector.leaf_update(state, 2.0, bits)
        l_e = detector.extrinsic_llrs(state)
        numpy.testing.assert_allclose(l_e, np.full((2, 2), 1.5))


# --- Full detection --- #

class TestDetectExamples:
    def test_single_qpsk_on_symbol(self, qpsk):
        detector = SisoStsDetector(qpsk)
        for symbol in range(4):
            result = detector.detect(
                [qpsk.points[symbol]], [[1.0]], np.zeros((1, 2)), 1.0)
            assert result.lambda_map == pytest.approx(0.0, abs=1e-15)
            numpy.testing.assert_array_equal(
                result.x_map[0], qpsk.bits[symbol])
            numpy.testing.assert_allclose(
                result.l_e[0], 2.0 * qpsk.bits[symbol], atol=1e-12)

    def test_identity_channel_zero_residual(self, qam16, rng):
        symbols = rng.integers(0, 16, size=3)
        y = qam16.points[symbols]
        result = SisoStsDetector(qam16).detect(
            y, np.eye(3), np.zeros((3, 4)), 0.1)
        assert result.lambda_map == pytest.approx(0.0, abs=1e-12)
        numpy.testing.assert_array_equal(result.x_map, qam16.bits[symbols])
        assert np.all(result.l_e * result.x_map > 0)

    def test_transmitted_vector_at_high_snr(self, make_instance, rng):
        instance = make_instance(rng, 4, 4, snr_db=40.0, l_a_sigma=0.0)
        result = SisoStsDetector(instance.constellation).detect(
            *instance.args)
        numpy.testing.assert_array_equal(
            result.x_map, instance.constellation.bits[instance.symbols])


class TestOracleEquivalence:
    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_qpsk_2x2(self, mode, make_instance, rng):
        for __ in range(150):
            run_and_compare(make_instance(rng, 2, 2), mode)

    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_16qam_2x2(self, mode, make_instance, rng):
        for __ in range(40):
            run_and_compare(make_instance(rng, 2, 4, snr_db=6.0), mode)

    @pytest.mark.parametrize("mode", EXACT_MODES)
    def test_16qam_4x4(self, mode, make_instance, rng):
        for __ in range(4):
            run_and_compare(make_instance(rng, 4, 4), mode)

    @pytest.mark.parametrize("mode", EXACT_MODES)
    def test_zero_apriori_plain_qr(self, mode, make_instance, rng):
        for __ in range(50):
            run_and_compare(
                make_instance(rng, 3, 2, l_a_sigma=0.0, sort=False), mode)


class TestClippedEquivalence:
    @pytest.mark.parametrize("clip_mode", list(ClipMode))
    @pytest.mark.parametrize("level", NORMALIZED_CLIPPING)
    def test_qpsk_2x2(self, level, clip_mode, make_instance, rng):
        for __ in range(100):
            run_and_compare(make_instance(rng, 2, 2), EnumMode.HYBRID,
                            normalized_l_e_max=level, clip_mode=clip_mode)

    @pytest.mark.parametrize("level", NORMALIZED_CLIPPING)
    def test_16qam_3x3(self, level, make_instance, rng):
        for __ in range(8):
            run_and_compare(make_instance(rng, 3, 4), EnumMode.FULL_SORT_SE,
                            normalized_l_e_max=level)

    def test_clip_modes_agree(self, make_instance, rng):
        for __ in range(30):
            instance = make_instance(rng, 2, 4)
            results = [
                SisoStsDetector(instance.constellation, DetectorConfig(
                    l_e_max=0.1 / instance.n0, clip_mode=clip_mode)).detect(
                        *instance.args)
                for clip_mode in ClipMode]
            numpy.testing.assert_array_equal(
                results[0].x_map, results[1].x_map)
            numpy.testing.assert_allclose(
                results[0].l_e, results[1].l_e, rtol=0, atol=ATOL)

    def test_clipping_reduces_nodes(self, make_instance):
        totals = []
        for level in (math.inf, 0.8, 0.1):
            rng_level = np.random.default_rng(11)
            totals.append(sum(
                run_and_compare(make_instance(rng_level, 3, 4),
                                EnumMode.HYBRID, normalized_l_e_max=level).n_en
                for __ in range(10)))
        assert totals[0] >= totals[1] >= totals[2]


class TestSearchProperties:
    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_normalized_scale_consistency(self, mode, make_instance, rng):
        n0 = 0.25
        for level in (math.inf, 0.2):
            instance = make_instance(rng, 3, 4)
            args = (instance.y_tilde, instance.r, instance.l_a, n0)
            plain = SisoStsDetector(instance.constellation, DetectorConfig(
                l_e_max=level / n0, enum_mode=mode)).detect(*args)
            normalized = SisoStsDetector(
                instance.constellation, DetectorConfig(
                    l_e_max=level, enum_mode=mode,
                    use_normalized_metrics=True)).detect(*args)
            numpy.testing.assert_array_equal(normalized.x_map, plain.x_map)
            assert normalized.n_en == plain.n_en
            assert normalized.lambda_map == pytest.approx(
                n0 * plain.lambda_map, rel=1e-9)
            numpy.testing.assert_allclose(
                normalized.l_e, n0 * plain.l_e, rtol=1e-9)

    def test_channel_cursor_at_root(self, make_instance, rng):
        instance = make_instance(rng, 3, 2)
        detector = SisoStsDetector(instance.constellation)
        top = instance.y_tilde[2] / instance.r[2, 2]
        for state in detector.search(*instance.args):
            assert state.channel_cursor[2] == pytest.approx(top, abs=1e-12)

    def test_normalized_matches_normalized_oracle(self, make_instance, rng):
        instance = make_instance(rng, 2, 4)
        config = DetectorConfig(l_e_max=0.4, use_normalized_metrics=True)
        result = SisoStsDetector(instance.constellation, config).detect(
            *instance.args)
        reference = exhaustive_map(
            instance.constellation, *instance.args, l_e_max=0.4,
            use_normalized_metrics=True)
        assert_matches_oracle(result, reference)

    @pytest.mark.parametrize("mode", ALL_MODES)
    def test_monotone_state(self, mode, make_instance, rng):
        instance = make_instance(rng, 3, 4, snr_db=6.0)
        detector = SisoStsDetector(
            instance.constellation, DetectorConfig(enum_mode=mode))
        last_lambda = math.inf
        last_counter = None
        n_states = 0
        for state in detector.search(*instance.args):
            assert state.lambda_map <= last_lambda
            if last_counter is not None:
                assert np.all(state.counter_metrics <= last_counter)
            last_lambda = state.lambda_map
            last_counter = state.counter_metrics.copy()
            n_states += 1
        assert n_states == state.n_en


class TestNodeBudget:
    def test_budget_stops_search(self, make_instance, rng):
        instance = make_instance(rng, 4, 4)
        result = SisoStsDetector(
            instance.constellation, DetectorConfig(node_budget=6)).detect(
                *instance.args)
        assert not result.completed
        assert result.n_en == 6

    def test_budget_before_first_leaf(self, make_instance, rng):
        instance = make_instance(rng, 4, 4)
        result = SisoStsDetector(
            instance.constellation, DetectorConfig(node_budget=1)).detect(
                *instance.args)
        assert not result.completed
        assert math.isinf(result.lambda_map)
        numpy.testing.assert_array_equal(result.l_e, np.zeros((4, 4)))

    @pytest.mark.parametrize("mt, q", [(2, 2), (3, 4)])
    def test_exact_budget_completes(self, make_instance, rng, mt, q):
        for __ in range(50):
            instance = make_instance(rng, mt, q)
            full = SisoStsDetector(instance.constellation).detect(
                *instance.args)
            exact = SisoStsDetector(
                instance.constellation,
                DetectorConfig(node_budget=full.n_en)).detect(*instance.args)
            assert exact.completed
            assert exact.n_en == full.n_en
            numpy.testing.assert_array_equal(exact.l_e, full.l_e)
            short = SisoStsDetector(
                instance.constellation,
                DetectorConfig(node_budget=full.n_en - 1)).detect(
                    *instance.args)
            assert not short.completed

    def test_unlimited_budget_completes(self, make_instance, rng):
        instance = make_instance(rng, 2, 2)
        assert SisoStsDetector(instance.constellation).detect(
            *instance.args).completed


class TestInvalidInput:
    def test_nonpositive_clipping(self):
        with pytest.raises(ValueError):
            DetectorConfig(l_e_max=0.0)

    def test_shape_mismatch(self, qpsk):
        with pytest.raises(ValueError):
            SisoStsDetector(qpsk).detect(
                np.zeros(2), np.eye(3), np.zeros((2, 2)), 1.0)

    def test_nonpositive_diagonal(self, qpsk):
        with pytest.raises(ValueError):
            SisoStsDetector(qpsk).detect(
                np.zeros(2), np.diag([1.0, -1.0]), np.zeros((2, 2)), 1.0)

    def test_nonpositive_noise(self, qpsk):
        with pytest.raises(ValueError):
            SisoStsDetector(qpsk).detect(
                np.zeros(1), np.eye(1), np.zeros((1, 2)), 0.0)


@pytest.mark.slow
class TestAcceptance:
    @pytest.mark.parametrize("mode", EXACT_MODES)
    def test_exactness_full_sets(self, mode, make_instance, rng):
        for __ in range(1000):
            run_and_compare(make_instance(rng, 2, 2), mode)
        for __ in range(100):
            run_and_compare(make_instance(rng, 4, 4), mode)

    @pytest.mark.parametrize("level", NORMALIZED_CLIPPING)
    def test_clipped_full_sets(self, level, make_instance, rng):
        for __ in range(1000):
            run_and_compare(make_instance(rng, 2, 2), EnumMode.HYBRID,
                            normalized_l_e_max=level)
        for __ in range(100):
            run_and_compare(make_instance(rng, 4, 4), EnumMode.HYBRID,
                            normalized_l_e_max=level)
