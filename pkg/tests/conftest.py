"""
Shared fixtures and options for the sisosd test suite.
"""

# Third party imports
import numpy as np
import pytest

# Local imports
import sisosd.mimo.channel
import sisosd.mimo.constellation
import sisosd.utils.misc


TEST_SEED = 20240611


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False,
        help="Also run the slow Monte-Carlo acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


class DetectionInstance(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, constellation, y_tilde, r, l_a, n0, symbols):
        self.constellation = constellation
        self.y_tilde = y_tilde
        self.r = r
        self.l_a = l_a
        self.n0 = n0
        self.symbols = symbols

    @property
    def args(self):
        return self.y_tilde, self.r, self.l_a, self.n0


def random_instance(rng, mt, q, snr_db=10.0, l_a_sigma=3.0, sort=True):
    constellation = sisosd.mimo.constellation.build_qam(q)
    h = sisosd.mimo.channel.sample_channel(mt, mt, rng)
    symbols = rng.integers(0, constellation.n_symbols, size=mt)
    n0 = sisosd.mimo.channel.noise_variance(snr_db, mt)
    y = sisosd.mimo.channel.transmit(
        h, constellation.points[symbols], n0, rng=rng)
    qr = (sisosd.mimo.channel.sqrd(h) if sort
          else sisosd.mimo.channel.qrd(h))
    y_tilde = sisosd.mimo.channel.preprocess(y, qr)
    l_a = rng.normal(0.0, l_a_sigma, size=(mt, q))
    return DetectionInstance(
        constellation, y_tilde, qr.r, l_a, n0, symbols[qr.perm])


@pytest.fixture
def rng():
    return np.random.default_rng(TEST_SEED)


@pytest.fixture
def make_instance():
    return random_instance


@pytest.fixture(params=[2, 4, 6], ids=["qpsk", "16qam", "64qam"])
def constellation(request):
    return sisosd.mimo.constellation.build_qam(request.param)


@pytest.fixture
def qpsk():
    return sisosd.mimo.constellation.build_qam(2)


@pytest.fixture
def qam16():
    return sisosd.mimo.constellation.build_qam(4)
