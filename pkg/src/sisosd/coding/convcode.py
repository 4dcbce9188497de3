"""
Terminated feedforward convolutional code and its trellis tables.

Register convention: the shift-register window of step t is
w = (u_t << m) | state, with u_t the current input at the most significant
tap and the oldest input at bit 0, m = K - 1. Each octal generator is
matched MSB first against w, so 133 taps u_t, u_{t-2}, u_{t-3}, u_{t-5}
and u_{t-6}. Output bits per step follow the generator order, and the next
state is w >> 1.
"""

# Third party imports
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

# Local imports
from sisosd.constants import CODE_CONSTRAINT_LENGTH, CODE_GENERATORS_OCTAL
import sisosd.utils.misc


def parity(values, n_bits):
    values = np.asarray(values, dtype=np.int64)
    return (((values[..., np.newaxis] >> np.arange(n_bits)) & 1)
            .sum(axis=-1) % 2).astype(np.int8)


class ConvCode(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, constraint_length=CODE_CONSTRAINT_LENGTH,
                 generators=CODE_GENERATORS_OCTAL):
        if constraint_length < 2:
            raise ValueError(
                f"Constraint length must be at least 2, "
                f"not {constraint_length}")
        for generator in generators:
            if not 0 < generator < 2 ** constraint_length:
                raise ValueError(
                    f"Generator {generator:o} does not fit a constraint "
                    f"length of {constraint_length}")
        self.constraint_length = int(constraint_length)
        self.generators = tuple(int(generator) for generator in generators)
        self.memory = self.constraint_length - 1
        self.n_states = 2 ** self.memory
        self.n_outputs = len(self.generators)
        self.rate = 1 / self.n_outputs

        states = np.arange(self.n_states)
        inputs = np.arange(2)
        windows = (inputs[np.newaxis, :] << self.memory) | states[:, np.newaxis]
        # Indexed [state, input]
        self.next_state = windows >> 1
        self.outputs = np.stack(
            [parity(windows & generator, self.constraint_length)
             for generator in self.generators], axis=-1)
        # Every state is entered by exactly one input bit from two states
        self.entry_input = states >> (self.memory - 1)
        low_bits = (states & ((1 << (self.memory - 1)) - 1)) << 1
        self.predecessors = np.stack([low_bits, low_bits | 1], axis=-1)

    @property
    def taps(self):
        return np.stack(
            [(generator >> np.arange(self.constraint_length)) & 1
             for generator in self.generators], axis=-1)

    def codeword_length(self, k_info):
        return self.n_outputs * (k_info + self.memory)

    def info_length(self, n_coded):
        n_steps, remainder = divmod(n_coded, self.n_outputs)
        if remainder or n_steps <= self.memory:
            raise ValueError(
                f"{n_coded} coded bits are not a terminated codeword "
                f"of a rate 1/{self.n_outputs} code with memory "
                f"{self.memory}")
        return n_steps - self.memory


DEFAULT_CODE = ConvCode()


def conv_encode(info_bits, code=DEFAULT_CODE):
    """Encode unipolar info bits into a zero-terminated codeword."""
    info_bits = np.asarray(info_bits, dtype=np.int64).ravel()
    if info_bits.size < 1:
        raise ValueError("At least one info bit is required")
    if np.any((info_bits != 0) & (info_bits != 1)):
        raise ValueError("Info bits must be 0 or 1")
    padded = np.concatenate([
        np.zeros(code.memory, dtype=np.int64),
        info_bits,
        np.zeros(code.memory, dtype=np.int64),
        ])
    # Row t holds u_{t-m} ... u_t, i.e. window bits 0 .. m
    windows = sliding_window_view(padded, code.constraint_length)
    coded = (windows @ code.taps) % 2
    return coded.astype(np.int8).ravel()
