"""
Soft-input soft-output single tree-search (STS) sphere decoder.

The search runs depth first from level M_T - 1 (root) to level 0 (leaves)
of the upper-triangular system y~ = R s + n. Children of a node are
enumerated either by merging the channel-metric (zig-zag) order with the
sorted a-priori order, by fully sorting the partial metrics, or by the
channel order alone. Every examined node is checked once against the
pruning radius, formed from the MAP metric and the counter-hypothesis
metrics still improvable below that node.

Counter-hypotheses are stored in their non-extrinsic form
lambda-bar = Lambda-bar + L^A x^MAP. When a new MAP leaf flips bit (i, b),
the old MAP metric is the best leaf seen so far carrying the old bit, so
it becomes the counter-hypothesis of that bit outright.
"""

# Standard library imports
import logging
import math

# Third party imports
import numpy as np

# Local imports
from sisosd.constants import ClipMode, EnumMode
from sisosd.detect.apriori import build_apriori_tables
from sisosd.mimo.constellation import FlagMask
import sisosd.utils.misc


# --- Configuration and results --- #

class DetectorConfig(sisosd.utils.misc.AutoReprMixin):
    def __init__(
            self,
            l_e_max=math.inf,
            enum_mode=EnumMode.HYBRID,
            use_normalized_metrics=False,
            node_budget=None,
            clip_mode=ClipMode.STRICT,
                ):
        self.l_e_max = float(l_e_max)
        if not self.l_e_max > 0:
            raise ValueError(
                f"Clipping level must be positive, not {self.l_e_max}")
        self.enum_mode = EnumMode(enum_mode)
        self.use_normalized_metrics = bool(use_normalized_metrics)
        if node_budget is not None and node_budget < 1:
            raise ValueError(
                f"Node budget must be at least 1, not {node_budget}")
        self.node_budget = node_budget
        self.clip_mode = ClipMode(clip_mode)

    @property
    def clipped(self):
        return math.isfinite(self.l_e_max)


class DetectionResult(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, l_e, x_map, lambda_map, n_en, completed=True,
                 lam_bar=None):
        self.l_e = l_e
        self.x_map = x_map
        self.lambda_map = lambda_map
        self.n_en = n_en
        self.completed = completed
        self.lam_bar = lam_bar


# --- Metric helpers --- #

def channel_increment(y_i, r_row, tail, cand, scale=1.0):
    """Scaled |y~_i - sum_{j>=i} R_ij s_j|^2 for one candidate symbol."""
    r_row = np.asarray(r_row)
    tail = np.asarray(tail)
    level = r_row.size - tail.size - 1
    residual = y_i - r_row[level] * cand - np.dot(r_row[level + 1:], tail)
    return scale * abs(residual) ** 2


def channel_reference(y_i, r_row, tail):
    """Zig-zag reference point and diagonal gain of one level."""
    r_row = np.asarray(r_row)
    tail = np.asarray(tail)
    level = r_row.size - tail.size - 1
    gain = r_row[level].real
    reference = (y_i - np.dot(r_row[level + 1:], tail)) / gain
    return complex(reference), float(gain)


def clip(lam_bar, lam, l_e_max):
    """Two-sided clamp of counter-hypothesis metrics around lambda."""
    if math.isinf(l_e_max):
        return lam_bar
    return np.maximum(lam - l_e_max, np.minimum(lam + l_e_max, lam_bar))


# --- Candidate selection --- #

def select_candidate(enum_mode, parent, channel_head, apriori_head,
                     channel_metrics, apriori_metrics):
    """Pick between the channel and a-priori heads of one level.

    Returns (symbol, M_P, sibling bound). The bound combines the smallest
    remaining channel and a-priori increments, so no unflagged sibling
    can have a smaller metric.
    """
    symbol = channel_head
    metric = (parent + channel_metrics[channel_head]
              + apriori_metrics[channel_head])
    if enum_mode == EnumMode.HYBRID and apriori_head != channel_head:
        metric_apriori = (parent + channel_metrics[apriori_head]
                          + apriori_metrics[apriori_head])
        # Equal metrics keep the channel head
        if metric_apriori < metric:
            symbol = apriori_head
            metric = metric_apriori
    bound = (parent + channel_metrics[channel_head]
             + apriori_metrics[apriori_head])
    return symbol, float(metric), float(bound)


def merge_orders(channel_order, apriori_order, channel_metrics,
                 apriori_metrics, parent=0.0, enum_mode=EnumMode.HYBRID):
    """Enumerate symbols from two precomputed preference orders.

    Each order is a sequence of symbol indices; flagged symbols are
    skipped at the head of either order.
    """
    flags = FlagMask(len(channel_order))
    channel_ptr = 0
    apriori_ptr = 0
    while not flags.all_set():
        while flags.is_set(channel_order[channel_ptr]):
            channel_ptr += 1
        while flags.is_set(apriori_order[apriori_ptr]):
            apriori_ptr += 1
        candidate = select_candidate(
            enum_mode, parent, channel_order[channel_ptr],
            apriori_order[apriori_ptr], channel_metrics, apriori_metrics)
        flags.set(candidate[0])
        yield candidate


# --- Search state --- #

class LevelState(sisosd.utils.misc.AutoReprMixin):
    """Enumeration state of the children of the current node on a level."""

    def __init__(self, n_symbols):
        self.flags = FlagMask(n_symbols)
        self.channel_metrics = np.zeros(n_symbols)
        self.parent_metric = 0.0
        self.se_order = None
        self.se_ptr = 0


class SearchState(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, mt, constellation, apriori, l_a, channel_scale):
        n_bits = constellation.bits_per_symbol
        self.lambda_map = math.inf
        self.x_map = np.zeros((mt, n_bits), dtype=np.int8)
        self.counter_metrics = np.full((mt, n_bits), math.inf)
        self.radius = np.full((mt, n_bits), math.inf)
        self.l_a = l_a
        self.channel_scale = channel_scale
        # path_metrics[mt] is the (zero) metric above the root
        self.path_metrics = np.zeros(mt + 1)
        self.path_symbols = np.zeros(mt, dtype=np.complex128)
        self.path_indices = np.zeros(mt, dtype=np.int64)
        self.path_bits = np.zeros((mt, n_bits), dtype=np.int8)
        # Zig-zag reference point of each level's current parent
        self.channel_cursor = np.zeros(mt, dtype=np.complex128)
        self.levels = [LevelState(constellation.n_symbols)
                       for __ in range(mt)]
        self.apriori = apriori
        self.n_en = 0
        self.completed = True

    @property
    def lam_bar(self):
        """Extrinsic counter-hypothesis metrics (unclamped below)."""
        return self.counter_metrics - self.l_a * self.x_map


# --- Detector --- #

class SisoStsDetector(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, constellation, config=None):
        self.constellation = constellation
        self.config = DetectorConfig() if config is None else config
        self.logger = logging.getLogger(__name__)

    # Setup

    def _check_inputs(self, y_tilde, r, l_a, n0):
        mt = y_tilde.shape[0]
        if y_tilde.ndim != 1 or r.shape != (mt, mt):
            raise ValueError(
                f"R of shape {r.shape} does not match y~ of shape "
                f"{y_tilde.shape}")
        if l_a.shape != (mt, self.constellation.bits_per_symbol):
            raise ValueError(
                f"A-priori LLRs of shape {l_a.shape} do not match "
                f"{mt} antennas of {self.constellation.bits_per_symbol} bits")
        if not np.all(np.diag(r).real > 0):
            raise ValueError("R must have a positive diagonal")
        if not n0 > 0:
            raise ValueError(f"Noise variance must be positive, not {n0}")

    def init_state(self, y_tilde, r, l_a, n0):
        y_tilde = np.asarray(y_tilde, dtype=np.complex128)
        r = np.asarray(r, dtype=np.complex128)
        l_a = np.asarray(l_a, dtype=np.float64)
        self._check_inputs(y_tilde, r, l_a, n0)
        if self.config.use_normalized_metrics:
            l_a = n0 * l_a
            channel_scale = 1.0
        else:
            channel_scale = 1 / n0
        apriori = build_apriori_tables(l_a, self.constellation)
        return SearchState(
            mt=y_tilde.shape[0],
            constellation=self.constellation,
            apriori=apriori,
            l_a=l_a,
            channel_scale=channel_scale,
            )

    def start_level(self, state, level, y_tilde, r):
        level_state = state.levels[level]
        reference, gain = channel_reference(
            y_tilde[level], r[level], state.path_symbols[level + 1:])
        state.channel_cursor[level] = reference
        level_state.channel_metrics = (
            (state.channel_scale * gain ** 2)
            * self.constellation.squared_distances(reference))
        level_state.parent_metric = state.path_metrics[level + 1]
        level_state.flags.reset()
        state.apriori[level].reset()
        if self.config.enum_mode == EnumMode.FULL_SORT_SE:
            level_state.se_order = np.argsort(
                level_state.parent_metric + level_state.channel_metrics
                + state.apriori[level].symbol_metrics, kind="stable")
            level_state.se_ptr = 0

    # Enumeration

    def hybrid_next(self, state, level):
        """Next child on ``level`` as (symbol, M_P, sibling bound).

        Returns None once every child has been enumerated.
        """
        level_state = state.levels[level]
        if level_state.flags.all_set():
            return None
        parent = level_state.parent_metric
        channel_metrics = level_state.channel_metrics
        apriori_metrics = state.apriori[level].symbol_metrics

        if self.config.enum_mode == EnumMode.FULL_SORT_SE:
            symbol = int(level_state.se_order[level_state.se_ptr])
            level_state.se_ptr += 1
            metric = (parent + channel_metrics[symbol]
                      + apriori_metrics[symbol])
            bound = metric
        else:
            channel_head = self.constellation.zigzag_next(
                state.channel_cursor[level], level_state.flags)
            apriori_head = state.apriori[level].next_unflagged(
                level_state.flags)
            symbol, metric, bound = select_candidate(
                self.config.enum_mode, parent, channel_head, apriori_head,
                channel_metrics, apriori_metrics)

        level_state.flags.set(symbol)
        return symbol, float(metric), float(bound)

    # Pruning

    def _radius_max(self, state, free_rows):
        """Largest metric a leaf below the current path could still improve.

        Rows below ``free_rows`` are unconstrained; the path rows above
        count only where the path bit differs from the MAP bit.
        """
        radius_max = state.lambda_map
        if free_rows:
            radius_max = max(radius_max, state.radius[:free_rows].max())
        differ = state.path_bits[free_rows:] != state.x_map[free_rows:]
        if differ.any():
            radius_max = max(
                radius_max, state.radius[free_rows:][differ].max())
        return radius_max

    def prune_check_down(self, state, level, m_prn):
        if math.isinf(state.lambda_map):
            return False
        return m_prn >= self._radius_max(state, free_rows=level)

    def prune_check_sibling(self, state, level, m_prn):
        if math.isinf(state.lambda_map):
            return False
        return m_prn >= self._radius_max(state, free_rows=level + 1)

    def refresh_radius(self, state):
        if math.isinf(state.lambda_map):
            state.radius[:] = math.inf
            return
        l_e_max = self.config.l_e_max
        if not math.isfinite(l_e_max):
            state.radius[:] = state.counter_metrics
            return
        prior = state.l_a * state.x_map
        lam_bar = state.counter_metrics - prior
        if self.config.clip_mode == ClipMode.STRICT:
            lam_bar = clip(lam_bar, state.lambda_map, l_e_max)
        else:
            lam_bar = np.minimum(lam_bar, state.lambda_map + l_e_max)
        state.radius[:] = lam_bar + prior

    # Leaf handling

    def leaf_update(self, state, metric, bits):
        if metric < state.lambda_map:
            if math.isfinite(state.lambda_map):
                flipped = bits != state.x_map
                state.counter_metrics[flipped] = state.lambda_map
            state.lambda_map = metric
            state.x_map = np.array(bits, dtype=np.int8)
        else:
            differ = bits != state.x_map
            state.counter_metrics[differ] = np.minimum(
                state.counter_metrics[differ], metric)

        if self.config.clipped:
            upper = (state.lambda_map + self.config.l_e_max
                     + state.l_a * state.x_map)
            np.minimum(state.counter_metrics, upper,
                       out=state.counter_metrics)
        self.refresh_radius(state)

    def extrinsic_llrs(self, state):
        if math.isinf(state.lambda_map):
            # Budget ran out before any leaf: no information either way
            return np.zeros_like(state.counter_metrics)
        l_e_max = self.config.l_e_max
        lam_bar = clip(state.lam_bar, state.lambda_map, l_e_max)
        l_e = (lam_bar - state.lambda_map) * state.x_map
        if math.isfinite(l_e_max):
            l_e = np.clip(l_e, -l_e_max, l_e_max)
        return l_e

    # Search

    def _run(self, state, y_tilde, r):
        mt = y_tilde.shape[0]
        points = self.constellation.points
        symbol_bits = self.constellation.bits
        node_budget = self.config.node_budget
        level = mt - 1
        self.start_level(state, level, y_tilde, r)

        while True:
            candidate = self.hybrid_next(state, level)
            if candidate is None:
                level += 1
                if level == mt:
                    return
                continue

            # Only a node that would actually be examined counts as over
            if node_budget is not None and state.n_en >= node_budget:
                state.completed = False
                self.logger.debug(
                    "Node budget of %s exhausted", node_budget)
                return

            symbol, metric, bound = candidate
            state.n_en += 1
            state.path_indices[level] = symbol
            state.path_symbols[level] = points[symbol]
            state.path_bits[level] = symbol_bits[symbol]
            state.path_metrics[level] = metric

            if self.prune_check_sibling(state, level, bound):
                yield state
                level += 1
                if level == mt:
                    return
            elif self.prune_check_down(state, level, metric):
                yield state
            elif level == 0:
                self.leaf_update(state, metric, state.path_bits)
                yield state
            else:
                yield state
                level -= 1
                self.start_level(state, level, y_tilde, r)

    def search(self, y_tilde, r, l_a, n0):
        """Iterate over the search state after every examined node."""
        state = self.init_state(y_tilde, r, l_a, n0)
        yield from self._run(
            state,
            np.asarray(y_tilde, dtype=np.complex128),
            np.asarray(r, dtype=np.complex128),
            )

    def detect(self, y_tilde, r, l_a, n0):
        y_tilde = np.asarray(y_tilde, dtype=np.complex128)
        r = np.asarray(r, dtype=np.complex128)
        state = self.init_state(y_tilde, r, l_a, n0)
        for __ in self._run(state, y_tilde, r):
            pass

        lam_bar = state.lam_bar
        if math.isfinite(state.lambda_map):
            lam_bar = clip(lam_bar, state.lambda_map, self.config.l_e_max)
        return DetectionResult(
            l_e=self.extrinsic_llrs(state),
            x_map=state.x_map.copy(),
            lambda_map=state.lambda_map,
            n_en=state.n_en,
            completed=state.completed,
            lam_bar=lam_bar,
            )


def detect(constellation, y_tilde, r, l_a, n0, config=None):
    return SisoStsDetector(constellation, config=config).detect(
        y_tilde, r, l_a, n0)
