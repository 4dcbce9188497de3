"""
Exhaustive max-log MAP reference over every transmit vector.

Shares nothing with the tree search but the constellation: metrics are
evaluated directly on whole symbol vectors.
"""

# Standard library imports
import math

# Third party imports
import numpy as np

# Local imports
from sisosd.constants import ORACLE_MAX_BITS
from sisosd.detect.sts import DetectionResult


def _scaled_inputs(l_a, n0, use_normalized_metrics):
    l_a = np.asarray(l_a, dtype=np.float64)
    if use_normalized_metrics:
        return 1.0, n0 * l_a
    return 1 / n0, l_a


def _prior_penalty(bipolar, l_a):
    """Sum of |L^A| over bits whose sign disagrees with their LLR."""
    signs = np.where(l_a >= 0, 1, -1)
    disagree = bipolar * signs < 0
    return np.sum(np.abs(l_a) * disagree, axis=tuple(range(1, l_a.ndim + 1)))


def enumerate_vectors(constellation, mt):
    """Bipolar bits, shape (N, M_T, Q), and symbols, shape (N, M_T)."""
    n_bits = constellation.bits_per_symbol
    total_bits = n_bits * mt
    if total_bits > ORACLE_MAX_BITS:
        raise ValueError(
            f"Exhaustive search over {total_bits} bits exceeds the limit "
            f"of {ORACLE_MAX_BITS}")
    vector_ids = np.arange(2 ** total_bits, dtype=np.int64)
    unipolar = (vector_ids[:, np.newaxis] >> np.arange(total_bits)) & 1
    unipolar = unipolar.reshape(-1, mt, n_bits)
    patterns = unipolar @ (1 << np.arange(n_bits))
    symbols = constellation.points[constellation.mapper[patterns]]
    return (1 - 2 * unipolar).astype(np.int8), symbols


def vector_metrics(constellation, y_tilde, r, l_a, n0,
                   use_normalized_metrics=False):
    """Channel, prior and path metric of every transmit vector."""
    y_tilde = np.asarray(y_tilde, dtype=np.complex128)
    r = np.asarray(r, dtype=np.complex128)
    scale, l_a = _scaled_inputs(l_a, n0, use_normalized_metrics)
    bipolar, symbols = enumerate_vectors(constellation, y_tilde.size)
    residual = y_tilde[np.newaxis, :] - symbols @ r.T
    m_c = scale * np.sum(np.abs(residual) ** 2, axis=1)
    m_a = _prior_penalty(bipolar, l_a)
    return bipolar, m_c, m_a, m_c + m_a


def exhaustive_map(constellation, y_tilde, r, l_a, n0, l_e_max=math.inf,
                   use_normalized_metrics=False):
    __, l_a_scaled = _scaled_inputs(l_a, n0, use_normalized_metrics)
    bipolar, __, __, m_p = vector_metrics(
        constellation, y_tilde, r, l_a, n0,
        use_normalized_metrics=use_normalized_metrics)
    n_vectors, mt, n_bits = bipolar.shape

    best = int(np.argmin(m_p))
    lambda_map = float(m_p[best])
    x_map = bipolar[best].copy()

    counter = np.empty((mt, n_bits))
    for antenna in range(mt):
        for bit in range(n_bits):
            other = bipolar[:, antenna, bit] != x_map[antenna, bit]
            counter[antenna, bit] = m_p[other].min()
    lam_bar = counter - l_a_scaled * x_map
    if math.isfinite(l_e_max):
        lam_bar = np.clip(lam_bar, lambda_map - l_e_max,
                          lambda_map + l_e_max)
    l_e = (lam_bar - lambda_map) * x_map
    if math.isfinite(l_e_max):
        l_e = np.clip(l_e, -l_e_max, l_e_max)

    return DetectionResult(
        l_e=l_e,
        x_map=x_map,
        lambda_map=lambda_map,
        n_en=n_vectors,
        completed=True,
        lam_bar=lam_bar,
        )


def metric_table(constellation, y_tilde, r, l_a, n0, level, tail,
                 use_normalized_metrics=False):
    """Rows of (symbol, M_C, M_A, M_C + M_A) for every child of a node.

    ``tail`` holds the symbol indices already decided on levels above
    ``level``, nearest level first.
    """
    y_tilde = np.asarray(y_tilde, dtype=np.complex128)
    r = np.asarray(r, dtype=np.complex128)
    scale, l_a = _scaled_inputs(l_a, n0, use_normalized_metrics)
    mt = y_tilde.size
    tail = np.asarray(tail, dtype=np.int64)
    if not 0 <= level < mt or tail.size != mt - level - 1:
        raise ValueError(
            f"Level {level} with {tail.size} decided symbols is not a node "
            f"of a {mt}-level tree")
    tail_points = constellation.points[tail]
    table = []
    for symbol in range(constellation.n_symbols):
        residual = (y_tilde[level]
                    - r[level, level] * constellation.points[symbol]
                    - np.sum(r[level, level + 1:] * tail_points))
        m_c = float(scale * abs(residual) ** 2)
        m_a = float(_prior_penalty(
            constellation.bits[symbol][np.newaxis, :], l_a[level])[0])
        table.append((symbol, m_c, m_a, m_c + m_a))
    return table


def telescoped_metric(constellation, y_tilde, r, l_a, n0, symbols,
                      use_normalized_metrics=False):
    """Path metric of one vector summed level by level from the root."""
    symbols = np.asarray(symbols, dtype=np.int64)
    mt = symbols.size
    total = 0.0
    for level in range(mt - 1, -1, -1):
        rows = metric_table(
            constellation, y_tilde, r, l_a, n0, level, symbols[level + 1:],
            use_normalized_metrics=use_normalized_metrics)
        total += rows[int(symbols[level])][3]
    return total
