"""
Rayleigh MIMO channel, AWGN transmission and (sorted) QR preprocessing.
"""

# Third party imports
import numpy as np

# Local imports
from sisosd.constants import QR_PIVOT_TOLERANCE
import sisosd.utils.misc


# --- Channel and noise --- #

def complex_gaussian(rng, shape, variance=1.0):
    scale = np.sqrt(variance / 2)
    return scale * (rng.standard_normal(shape)
                    + 1j * rng.standard_normal(shape))


def sample_channel(mr, mt, rng):
    """I.i.d. circular complex Gaussian channel with unit entry variance."""
    if mt < 1 or mr < mt:
        raise ValueError(
            f"Need mr >= mt >= 1, got mr={mr}, mt={mt}")
    return complex_gaussian(rng, (mr, mt))


def transmit(h, s, n0, rng=None, noiseless=False):
    h = np.asarray(h)
    s = np.asarray(s)
    if h.ndim != 2 or s.shape != (h.shape[1],):
        raise ValueError(
            f"Symbol vector of shape {s.shape} does not match "
            f"channel of shape {h.shape}")
    if not n0 > 0:
        raise ValueError(f"Noise variance must be positive, not {n0}")
    y = h @ s
    if noiseless:
        return y
    return y + complex_gaussian(rng, h.shape[0], variance=n0)


def noise_variance(snr_db, mt, es=1.0):
    """N_0 for an SNR defined as M_T * E_s / N_0."""
    return mt * es / 10 ** (snr_db / 10)


# --- QR decomposition --- #

class QrFactors(sisosd.utils.misc.AutoReprMixin):
    """H[:, perm] = q @ r with q orthonormal and r upper triangular."""

    def __init__(self, q, r, perm):
        self.q = q
        self.r = r
        self.perm = np.asarray(perm, dtype=np.int64)

    @property
    def inverse_perm(self):
        inverse = np.empty_like(self.perm)
        inverse[self.perm] = np.arange(self.perm.size)
        return inverse

    def reconstruct(self):
        """The channel in its original column order."""
        return (self.q @ self.r)[:, self.inverse_perm]


def _gram_schmidt(h, sort):
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] < h.shape[1]:
        raise ValueError(
            f"Channel must be a tall (mr >= mt) matrix, not {h.shape}")
    n_cols = h.shape[1]
    q = h.copy()
    r = np.zeros((n_cols, n_cols), dtype=np.complex128)
    perm = np.arange(n_cols)

    for col in range(n_cols):
        if sort:
            # Weakest remaining projection goes next
            norms = np.sum(np.abs(q[:, col:]) ** 2, axis=0)
            pivot = col + int(np.argmin(norms))
            if pivot != col:
                q[:, [col, pivot]] = q[:, [pivot, col]]
                r[:col, [col, pivot]] = r[:col, [pivot, col]]
                perm[[col, pivot]] = perm[[pivot, col]]

        # Reorthogonalization pass against the columns already chosen
        if col:
            correction = q[:, :col].conj().T @ q[:, col]
            q[:, col] -= q[:, :col] @ correction
            r[:col, col] += correction

        diagonal = np.linalg.norm(q[:, col])
        if diagonal < QR_PIVOT_TOLERANCE:
            raise ValueError(
                f"Channel is rank deficient (pivot {diagonal:.3e} "
                f"at step {col})")
        r[col, col] = diagonal
        q[:, col] /= diagonal

        # Project the chosen direction out of the remaining columns
        remaining = slice(col + 1, n_cols)
        r[col, remaining] = q[:, col].conj() @ q[:, remaining]
        q[:, remaining] -= np.outer(q[:, col], r[col, remaining])

    return QrFactors(q=q, r=r, perm=perm)


def qrd(h):
    return _gram_schmidt(h, sort=False)


def sqrd(h):
    return _gram_schmidt(h, sort=True)


def preprocess(y, qr):
    y = np.asarray(y)
    if y.shape != (qr.q.shape[0],):
        raise ValueError(
            f"Received vector of shape {y.shape} does not match "
            f"Q factor of shape {qr.q.shape}")
    return qr.q.conj().T @ y
