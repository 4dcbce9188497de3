"""
Packing of the interleaved coded stream into M_T x Q bit vectors.

The stream is padded with transmitter-known zero bits up to the next
multiple of M_T Q; the pads are appended at the end.
"""

# Third party imports
import numpy as np

# Local imports
from sisosd.constants import PAD_LLR
import sisosd.utils.misc


class FrameLayout(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, n_payload, mt, q):
        if mt * q < 1:
            raise ValueError(f"Vectors need at least one bit, not {mt * q}")
        self.n_payload = int(n_payload)
        self.mt = int(mt)
        self.q = int(q)
        bits_per_vector = self.mt * self.q
        self.n_vectors = -(-self.n_payload // bits_per_vector)
        self.n_pad = self.n_vectors * bits_per_vector - self.n_payload
        self.pad_positions = np.arange(
            self.n_payload, self.n_payload + self.n_pad)

    @property
    def n_total(self):
        return self.n_payload + self.n_pad


def frame_bits(coded_bits, mt, q):
    """Return the bit vectors, shape (n_vectors, mt, q), and their layout."""
    coded_bits = np.asarray(coded_bits).ravel()
    layout = FrameLayout(coded_bits.size, mt, q)
    padded = np.concatenate(
        [coded_bits, np.zeros(layout.n_pad, dtype=coded_bits.dtype)])
    return padded.reshape(layout.n_vectors, mt, q), layout


def unframe(values, layout):
    values = np.asarray(values).ravel()
    if values.size != layout.n_total:
        raise ValueError(
            f"Got {values.size} values for a layout of {layout.n_total}")
    return values[:layout.n_payload]


def pin_padding(llrs, layout, value=PAD_LLR):
    """Overwrite the LLRs of the known zero pad bits with a large value."""
    llrs = np.array(llrs, dtype=np.float64)
    flat = llrs.reshape(-1)
    flat[layout.pad_positions] = value
    return llrs
