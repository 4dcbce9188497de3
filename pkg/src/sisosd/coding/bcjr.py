"""
Max-log BCJR decoder for the terminated convolutional code.

Branch metrics use the bipolar convention x = 1 - 2d with positive LLRs
favouring d = 0: gamma = 1/2 sum_k L_k x_k + 1/2 L^A x_u. Both recursions
are pinned to the all-zero state, and the tail steps only admit u = 0.
"""

# Third party imports
import numpy as np

# Local imports
from sisosd.coding.convcode import DEFAULT_CODE
from sisosd.constants import LLR_LIMIT
import sisosd.utils.misc


class BcjrResult(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, coded_extrinsic, decisions, info_llrs):
        self.coded_extrinsic = coded_extrinsic
        self.decisions = decisions
        self.info_llrs = info_llrs


def _llr_difference(metrics_zero, metrics_one):
    with np.errstate(invalid="ignore"):
        llrs = metrics_zero - metrics_one
    return np.nan_to_num(llrs, nan=0.0, posinf=LLR_LIMIT, neginf=-LLR_LIMIT)


def branch_metrics(channel_llrs, apriori_llrs, code=DEFAULT_CODE):
    """Gamma of every (step, state, input), -inf where the input is barred."""
    n_steps = channel_llrs.shape[0]
    k_info = n_steps - code.memory
    bipolar_out = 1 - 2 * code.outputs.astype(np.float64)
    gamma = 0.5 * np.einsum("tk,suk->tsu", channel_llrs, bipolar_out)
    input_signs = np.array([1.0, -1.0])
    gamma[:k_info] += (0.5 * apriori_llrs[:, np.newaxis, np.newaxis]
                       * input_signs[np.newaxis, np.newaxis, :])
    gamma[k_info:, :, 1] = -np.inf
    return gamma


def maxlog_bcjr(channel_llrs, apriori_llrs=None, code=DEFAULT_CODE):
    channel_llrs = np.asarray(channel_llrs, dtype=np.float64).ravel()
    k_info = code.info_length(channel_llrs.size)
    if apriori_llrs is None:
        apriori_llrs = np.zeros(k_info)
    apriori_llrs = np.asarray(apriori_llrs, dtype=np.float64).ravel()
    if apriori_llrs.size != k_info:
        raise ValueError(
            f"Got {apriori_llrs.size} info a-priori LLRs for {k_info} "
            "info bits")

    n_steps = k_info + code.memory
    channel_llrs = channel_llrs.reshape(n_steps, code.n_outputs)
    gamma = branch_metrics(channel_llrs, apriori_llrs, code=code)

    alpha = np.full((n_steps + 1, code.n_states), -np.inf)
    alpha[0, 0] = 0.0
    predecessors = code.predecessors
    entry_input = code.entry_input
    for step in range(n_steps):
        incoming = (alpha[step][predecessors]
                    + gamma[step][predecessors, entry_input[:, np.newaxis]])
        alpha[step + 1] = incoming.max(axis=1)

    beta = np.full((n_steps + 1, code.n_states), -np.inf)
    beta[n_steps, 0] = 0.0
    for step in range(n_steps - 1, -1, -1):
        beta[step] = (gamma[step] + beta[step + 1][code.next_state]).max(
            axis=1)

    # Indexed [step, state, input]
    branches = (alpha[:-1, :, np.newaxis] + gamma
                + beta[1:][:, code.next_state])

    info_llrs = np.clip(_llr_difference(
        branches[:k_info, :, 0].max(axis=1),
        branches[:k_info, :, 1].max(axis=1)), -LLR_LIMIT, LLR_LIMIT)

    posterior = np.empty_like(channel_llrs)
    flat_branches = branches.reshape(n_steps, -1)
    for output in range(code.n_outputs):
        bit_is_one = code.outputs[:, :, output].ravel().astype(bool)
        posterior[:, output] = _llr_difference(
            flat_branches[:, ~bit_is_one].max(axis=1),
            flat_branches[:, bit_is_one].max(axis=1))
    coded_extrinsic = np.clip(
        posterior - channel_llrs, -LLR_LIMIT, LLR_LIMIT).ravel()

    return BcjrResult(
        coded_extrinsic=coded_extrinsic,
        decisions=(info_llrs < 0).astype(np.int8),
        info_llrs=info_llrs,
        )
