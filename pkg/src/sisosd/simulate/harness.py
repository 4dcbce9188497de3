"""
Monte-Carlo engine of the iterative BICM receiver.

Each frame is encoded, interleaved, mapped and sent over one i.i.d.
Rayleigh channel per symbol vector. The receiver alternates the STS
detector with the max-log BCJR decoder; statistics are kept per SNR,
normalized clipping level and iteration.
"""

# Standard library imports
import logging
import math

# Third party imports
import numpy as np

# Local imports
from sisosd.coding.bcjr import maxlog_bcjr
from sisosd.coding.convcode import DEFAULT_CODE, conv_encode
from sisosd.coding.framing import frame_bits, pin_padding, unframe
from sisosd.coding.interleaver import make_s_random
from sisosd.constants import QrdMode
from sisosd.detect.sts import DetectorConfig, SisoStsDetector
import sisosd.mimo.channel
import sisosd.mimo.constellation
import sisosd.multiprocess.pool
import sisosd.simulate.throughput
import sisosd.utils.misc


# Normal quantile of the two-sided 95% FER interval
CONFIDENCE_Z = 1.96

# Substream tags of the run seed
RNG_TAG_INTERLEAVER = 0
RNG_TAG_FRAME = 1


# --- Helper functions --- #

def build_constellation(cfg):
    mapping = None
    if cfg.mapping_file is not None:
        mapping = sisosd.mimo.constellation.read_mapping_file(
            cfg.mapping_file, cfg.q)
    return sisosd.mimo.constellation.build_qam(cfg.q, mapping=mapping)


def build_interleaver(cfg, code=DEFAULT_CODE):
    rng = np.random.default_rng([cfg.seed, RNG_TAG_INTERLEAVER])
    return make_s_random(
        code.codeword_length(cfg.k_info), cfg.interleaver_spread, rng)


def frame_rng(seed, snr_index, frame_index):
    return np.random.default_rng(
        [seed, RNG_TAG_FRAME, snr_index, frame_index])


# --- Per-frame simulation --- #

class FrameData(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, info_bits, y_tilde, r, perm, layout, n0):
        self.info_bits = info_bits
        self.y_tilde = y_tilde
        self.r = r
        self.perm = perm
        self.layout = layout
        self.n0 = n0

    @property
    def n_vectors(self):
        return self.y_tilde.shape[0]


class IterationOutcome(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, bit_errors, n_en):
        self.bit_errors = int(bit_errors)
        self.n_en = int(n_en)

    @property
    def frame_error(self):
        return self.bit_errors > 0


class FrameSimulator(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, cfg, interleaver, constellation, code=DEFAULT_CODE):
        self.cfg = cfg
        self.interleaver = interleaver
        self.constellation = constellation
        self.code = code
        if interleaver.n != code.codeword_length(cfg.k_info):
            raise ValueError(
                f"Interleaver length {interleaver.n} does not match the "
                f"{code.codeword_length(cfg.k_info)}-bit codeword")
        self.factorize = (sisosd.mimo.channel.sqrd
                          if cfg.qrd_mode == QrdMode.SQRD
                          else sisosd.mimo.channel.qrd)

    def transmit_frame(self, rng, n0):
        cfg = self.cfg
        info_bits = rng.integers(0, 2, size=cfg.k_info, dtype=np.int8)
        coded = conv_encode(info_bits, code=self.code)
        vectors, layout = frame_bits(
            self.interleaver.interleave(coded), cfg.mt, cfg.q)
        symbols = self.constellation.points[
            self.constellation.bits_to_symbols(vectors)].reshape(
                layout.n_vectors, cfg.mt)

        y_tilde = np.empty((layout.n_vectors, cfg.mt), dtype=np.complex128)
        r = np.empty((layout.n_vectors, cfg.mt, cfg.mt),
                     dtype=np.complex128)
        perm = np.empty((layout.n_vectors, cfg.mt), dtype=np.int64)
        for index, symbol_vector in enumerate(symbols):
            h = sisosd.mimo.channel.sample_channel(cfg.mr, cfg.mt, rng)
            y = sisosd.mimo.channel.transmit(
                h, symbol_vector, n0, rng=rng, noiseless=cfg.noiseless)
            qr = self.factorize(h)
            # The detector sees the columns in pivot order
            y_tilde[index] = sisosd.mimo.channel.preprocess(y, qr)
            r[index] = qr.r
            perm[index] = qr.perm
        return FrameData(info_bits, y_tilde, r, perm, layout, n0)

    def make_detector(self, l_e_max_normalized, n0):
        config = DetectorConfig(
            l_e_max=l_e_max_normalized / n0,
            enum_mode=self.cfg.enum_mode,
            clip_mode=self.cfg.clip_mode,
            )
        return SisoStsDetector(self.constellation, config=config)

    def detect_frame(self, detector, frame, l_a):
        """Extrinsic LLRs of every framed bit plus the nodes examined."""
        l_e = np.empty_like(l_a)
        n_en = 0
        for index in range(frame.n_vectors):
            perm = frame.perm[index]
            result = detector.detect(
                frame.y_tilde[index], frame.r[index],
                l_a[index][perm], frame.n0)
            l_e[index][perm] = result.l_e
            n_en += result.n_en
        return l_e, n_en

    def iterations(self, frame, l_e_max_normalized):
        """Yield the detector a-priori LLRs and outcome of each iteration.

        The LLRs are in framed order, shape (n_vectors, mt, q), before the
        per-vector column permutation.
        """
        cfg = self.cfg
        detector = self.make_detector(l_e_max_normalized, frame.n0)
        # The known zero pad bits enter the detector as certain zeros
        l_a = pin_padding(
            np.zeros((frame.n_vectors, cfg.mt, cfg.q)), frame.layout)
        for __ in range(cfg.iterations):
            l_e, n_en = self.detect_frame(detector, frame, l_a)
            coded_llrs = self.interleaver.deinterleave(
                unframe(l_e, frame.layout))
            decoded = maxlog_bcjr(coded_llrs, code=self.code)
            bit_errors = np.count_nonzero(
                decoded.decisions != frame.info_bits)
            yield l_a, IterationOutcome(bit_errors, n_en)
            feedback, __ = frame_bits(
                self.interleaver.interleave(decoded.coded_extrinsic),
                cfg.mt, cfg.q)
            l_a = pin_padding(feedback, frame.layout)

    def receive_frame(self, frame, l_e_max_normalized):
        return [outcome for __, outcome
                in self.iterations(frame, l_e_max_normalized)]

    def simulate_frame(self, snr_index, frame_index):
        """Outcomes per iteration for every clipping level, same frame."""
        cfg = self.cfg
        snr_db = cfg.snr_list[snr_index]
        n0 = sisosd.mimo.channel.noise_variance(
            snr_db, cfg.mt, es=self.constellation.es)
        rng = frame_rng(cfg.seed, snr_index, frame_index)
        frame = self.transmit_frame(rng, n0)
        return [self.receive_frame(frame, level) for level in cfg.l_e_max]


# --- Statistics --- #

class IterationStats(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, snr_db, l_e_max, iteration, n_vectors, k_info):
        self.snr_db = snr_db
        self.l_e_max = l_e_max
        self.iteration = iteration
        self.n_vectors = n_vectors
        self.k_info = k_info
        self.frames = 0
        self.frame_errors = 0
        self.bit_errors = 0
        self.total_n_en = 0
        self.cumulative_n_en = math.nan
        self.theta = math.nan

    def add(self, outcome):
        self.frames += 1
        self.frame_errors += int(outcome.frame_error)
        self.bit_errors += outcome.bit_errors
        self.total_n_en += outcome.n_en

    @property
    def fer(self):
        return self.frame_errors / self.frames if self.frames else math.nan

    @property
    def ber(self):
        if not self.frames:
            return math.nan
        return self.bit_errors / (self.frames * self.k_info)

    @property
    def mean_n_en(self):
        if not self.frames:
            return math.nan
        return self.total_n_en / (self.frames * self.n_vectors)

    @property
    def fer_half_width(self):
        if not self.frames:
            return math.nan
        fer = self.fer
        return CONFIDENCE_Z * math.sqrt(fer * (1 - fer) / self.frames)


class SimStats(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, cfg, rows, interleaver_spread, n_pad):
        self.cfg = cfg
        self.rows = rows
        self.interleaver_spread = interleaver_spread
        self.n_pad = n_pad

    def select(self, snr_db=None, l_e_max=None, iteration=None):
        return [
            row for row in self.rows
            if (snr_db is None or row.snr_db == snr_db)
            and (l_e_max is None or row.l_e_max == l_e_max)
            and (iteration is None or row.iteration == iteration)]

    def schedule(self, target_fer=None):
        if target_fer is None:
            target_fer = self.cfg.target_fer
        return sisosd.simulate.throughput.least_effort_schedule(
            self.rows, target_fer)


def finalize_stats(cfg, level_stats):
    """Fill in the cumulative node counts and throughput of each level."""
    for iteration_stats in level_stats:
        cumulative = 0.0
        for stats in iteration_stats:
            cumulative += stats.mean_n_en
            stats.cumulative_n_en = cumulative
            stats.theta = sisosd.simulate.throughput.throughput(
                cfg.code_rate, cfg.q, cfg.mt, cumulative, cfg.f_clk)


def run_point(cfg, snr_index, frame_source, n_vectors):
    """Simulate one SNR; ``frame_source`` maps frame tasks to outcomes."""
    logger = logging.getLogger(__name__)
    snr_db = cfg.snr_list[snr_index]
    level_stats = [
        [IterationStats(snr_db, level, iteration, n_vectors, cfg.k_info)
         for iteration in range(1, cfg.iterations + 1)]
        for level in cfg.l_e_max]

    tasks = ((snr_index, frame_index) for frame_index in range(cfg.frames))
    for frame_index, frame_outcomes in enumerate(frame_source(tasks)):
        for iteration_stats, outcomes in zip(level_stats, frame_outcomes):
            for stats, outcome in zip(iteration_stats, outcomes):
                stats.add(outcome)
        if cfg.max_frame_errors and all(
                iteration_stats[-1].frame_errors >= cfg.max_frame_errors
                for iteration_stats in level_stats):
            logger.info(
                "Collected %s frame errors at %g dB after %s frames; "
                "stopping point early",
                cfg.max_frame_errors, snr_db, frame_index + 1)
            break

    finalize_stats(cfg, level_stats)
    for iteration_stats in level_stats:
        last = iteration_stats[-1]
        logger.info(
            "SNR %g dB, l_e_max %g: FER %.4g (+/- %.2g) and cumulative "
            "E[N_en] %.4g after %s iterations over %s frames",
            snr_db, last.l_e_max, last.fer, last.fer_half_width,
            last.cumulative_n_en, last.iteration, last.frames)
    return [stats for iteration_stats in level_stats
            for stats in iteration_stats]


def run_simulation(cfg, log_queue=None, log_filter_level=None):
    logger = logging.getLogger(__name__)
    constellation = build_constellation(cfg)
    interleaver = build_interleaver(cfg)
    simulator = FrameSimulator(cfg, interleaver, constellation)
    __, layout = frame_bits(np.zeros(interleaver.n), cfg.mt, cfg.q)
    logger.info(
        "Simulating %s SNR points x %s clipping levels, %s frames of "
        "%s vectors (%s pad bits), interleaver spread %s",
        len(cfg.snr_list), len(cfg.l_e_max), cfg.frames,
        layout.n_vectors, layout.n_pad, interleaver.spread)

    rows = []
    with sisosd.multiprocess.pool.FramePool(
            simulator, workers=cfg.workers, log_queue=log_queue,
            log_filter_level=log_filter_level) as pool:
        for snr_index in range(len(cfg.snr_list)):
            rows.extend(run_point(
                cfg, snr_index, pool.imap, layout.n_vectors))

    return SimStats(cfg, rows, interleaver_spread=interleaver.spread,
                    n_pad=layout.n_pad)
