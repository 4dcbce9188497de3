"""
Square QAM constellations with bit mapping, slicing and zig-zag enumeration.

Symbol indices run column-wise over the square grid: index = column * side
+ row, where columns are ordered by ascending real level and rows by
ascending imaginary level. Bit patterns are unipolar integers whose bit b
holds d_{b+1}; the bipolar value of a bit is x = 1 - 2 d, so a positive LLR
favours d = 0.

The default labeling is a per-dimension Gray code: pattern bits
0..Q/2-1 carry the Gray code of the column (real axis) and bits Q/2..Q-1
the Gray code of the row (imaginary axis). Pattern 0 sits at the most
negative corner.
"""

# Standard library imports
import logging
from pathlib import Path

# Third party imports
import numpy as np

# Local imports
import sisosd.utils.misc


SUPPORTED_BITS_PER_SYMBOL = (2, 4, 6)
MAPPING_FILE_TOLERANCE = 1e-6


# --- Helper functions --- #

def gray_code(value):
    return value ^ (value >> 1)


def _validate_mapping(mapping, n_symbols):
    mapping = np.asarray(mapping, dtype=np.int64)
    if mapping.shape != (n_symbols,):
        raise ValueError(
            f"Mapping table must have {n_symbols} entries, "
            f"not {mapping.shape}")
    if not np.array_equal(np.sort(mapping), np.arange(n_symbols)):
        raise ValueError("Mapping table is not a bijection over "
                         f"0..{n_symbols - 1}: {mapping.tolist()}")
    return mapping


def default_gray_mapping(bits_per_symbol):
    """Bit pattern -> symbol index table of the default Gray labeling."""
    half = bits_per_symbol // 2
    side = 2 ** half
    mapping = np.empty(2 ** bits_per_symbol, dtype=np.int64)
    for column in range(side):
        for row in range(side):
            pattern = gray_code(column) | (gray_code(row) << half)
            mapping[pattern] = column * side + row
    return mapping


# --- Flag mask --- #

class FlagMask(sisosd.utils.misc.AutoReprMixin):
    """Per-symbol "already enumerated" flags of one parent expansion."""

    def __init__(self, n_symbols):
        self.flags = np.zeros(n_symbols, dtype=bool)
        self.count = 0

    def set(self, index):
        if not self.flags[index]:
            self.flags[index] = True
            self.count += 1

    def is_set(self, index):
        return bool(self.flags[index])

    def all_set(self):
        return self.count == self.flags.size

    def popcount(self):
        return self.count

    def reset(self):
        self.flags[:] = False
        self.count = 0


# --- Constellation --- #

class Constellation(sisosd.utils.misc.AutoReprMixin):
    """Immutable unit-energy square QAM symbol set."""

    def __init__(self, bits_per_symbol, mapping=None):
        if bits_per_symbol not in SUPPORTED_BITS_PER_SYMBOL:
            raise ValueError(
                f"Bits per symbol must be one of {SUPPORTED_BITS_PER_SYMBOL}, "
                f"not {bits_per_symbol}")
        self.bits_per_symbol = int(bits_per_symbol)
        self.n_symbols = 2 ** self.bits_per_symbol
        self.side = 2 ** (self.bits_per_symbol // 2)

        scale = 1 / np.sqrt(2 * (self.n_symbols - 1) / 3)
        self.scale = scale
        self.pam_levels = (
            2 * np.arange(self.side) - (self.side - 1)) * scale
        indices = np.arange(self.n_symbols)
        self.points = (self.pam_levels[indices // self.side]
                       + 1j * self.pam_levels[indices % self.side])
        self.es = float(np.mean(np.abs(self.points) ** 2))

        if mapping is None:
            mapping = default_gray_mapping(self.bits_per_symbol)
        self.mapper = _validate_mapping(mapping, self.n_symbols)
        self.demapper = np.empty(self.n_symbols, dtype=np.int64)
        self.demapper[self.mapper] = np.arange(self.n_symbols)

        # Bipolar bits of every symbol index, shape (n_symbols, Q)
        bit_weights = np.arange(self.bits_per_symbol)
        unipolar = (self.demapper[:, np.newaxis] >> bit_weights) & 1
        self.bits = (1 - 2 * unipolar).astype(np.int8)

        for array in (self.pam_levels, self.points, self.mapper,
                      self.demapper, self.bits):
            array.setflags(write=False)

    def symbol_bits(self, index):
        """Bipolar bits x_1..x_Q of a symbol index."""
        return self.bits[index]

    def bits_to_symbols(self, bits):
        """Map unipolar bits (groups of Q, d_1 first) to symbol indices."""
        bits = np.asarray(bits, dtype=np.int64).reshape(
            -1, self.bits_per_symbol)
        patterns = bits @ (1 << np.arange(self.bits_per_symbol))
        return self.mapper[patterns]

    def squared_distances(self, z):
        """|z - point|^2 for every symbol, evaluated per dimension."""
        d_real = (z.real - self.pam_levels) ** 2
        d_imag = (z.imag - self.pam_levels) ** 2
        return (d_real[:, np.newaxis] + d_imag[np.newaxis, :]).ravel()

    def _slice_dimension(self, value):
        position = (value / self.scale + self.side - 1) / 2
        # Ties round toward the more negative level
        level = int(np.ceil(position - 0.5))
        return min(max(level, 0), self.side - 1)

    def slice_nearest(self, z):
        column = self._slice_dimension(z.real)
        row = self._slice_dimension(z.imag)
        return column * self.side + row

    def zigzag_next(self, reference, mask):
        """Nearest unmasked symbol to ``reference``, or None if exhausted.

        Each column contributes its real-axis distance plus the minimum
        imaginary-axis distance over its unmasked rows; the best column wins.
        Ties resolve to the smaller symbol index.
        """
        flags = getattr(mask, "flags", mask)
        grid_flags = np.asarray(flags, dtype=bool).reshape(
            self.side, self.side)
        d_real = (reference.real - self.pam_levels) ** 2
        d_imag = (reference.imag - self.pam_levels) ** 2
        column_rows = np.where(grid_flags, np.inf, d_imag[np.newaxis, :])
        best_rows = np.argmin(column_rows, axis=1)
        column_totals = (
            d_real + column_rows[np.arange(self.side), best_rows])
        column = int(np.argmin(column_totals))
        if np.isinf(column_totals[column]):
            return None
        return column * self.side + int(best_rows[column])


def build_qam(bits_per_symbol, mapping=None):
    return Constellation(bits_per_symbol, mapping=mapping)


# --- Mapping files --- #

def read_mapping_file(path, bits_per_symbol):
    """Read an ``index bitpattern re im`` table into a mapping array."""
    logger = logging.getLogger(__name__)
    path = Path(path)
    reference = Constellation(bits_per_symbol)
    n_symbols = reference.n_symbols
    mapping = np.full(n_symbols, -1, dtype=np.int64)
    seen_indices = set()

    with open(path, mode="r", encoding="utf-8") as mapping_file:
        for line_number, line in enumerate(mapping_file, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                index_str, pattern_str, re_str, im_str = line.split()
                index = int(index_str)
                if len(pattern_str) != bits_per_symbol:
                    raise ValueError(
                        f"bit pattern {pattern_str!r} is not "
                        f"{bits_per_symbol} bits long")
                pattern = int(pattern_str, 2)
                point = complex(float(re_str), float(im_str))
            except ValueError as e:
                raise ValueError(
                    f"Malformed line {line_number} in mapping file "
                    f"{path.as_posix()!r}: {e}") from e
            if not 0 <= index < n_symbols or index in seen_indices:
                raise ValueError(
                    f"Invalid or repeated symbol index {index} on line "
                    f"{line_number} of {path.as_posix()!r}")
            if abs(point - reference.points[index]) > MAPPING_FILE_TOLERANCE:
                raise ValueError(
                    f"Point {point} on line {line_number} does not match "
                    f"grid point {reference.points[index]} of index {index}")
            if mapping[pattern] != -1:
                raise ValueError(
                    f"Bit pattern {pattern_str} assigned twice "
                    f"(line {line_number} of {path.as_posix()!r})")
            mapping[pattern] = index
            seen_indices.add(index)

    mapping = _validate_mapping(mapping, n_symbols)
    logger.debug("Read %s-symbol mapping from %r",
                 n_symbols, path.as_posix())
    return mapping


def write_mapping_file(constellation, path):
    path = Path(path)
    width = constellation.bits_per_symbol
    with open(path, mode="w", encoding="utf-8", newline="\n") as out_file:
        out_file.write("# index bitpattern re im\n")
        for index in range(constellation.n_symbols):
            point = constellation.points[index]
            pattern = int(constellation.demapper[index])
            out_file.write(f"{index} {pattern:0{width}b} "
                           f"{float(point.real)!r} {float(point.imag)!r}\n")
