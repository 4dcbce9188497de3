"""
Tests for in-order, bounded frame submission of the frame pool.
"""

# Standard library imports
import itertools

# Local imports
from sisosd.multiprocess.pool import TASKS_PER_WORKER, FramePool


class ReadyResult:
    def __init__(self, value):
        self.value = value

    def get(self):
        return self.value


class RecordingPool:
    """Runs nothing; hands back each task as its own result."""

    def __init__(self):
        self.submitted = []

    def apply_async(self, func, args):
        self.submitted.append(args[0])
        return ReadyResult(("frame", args[0]))


class EchoSimulator:
    def simulate_frame(self, snr_index, frame_index):
        return ("frame", (snr_index, frame_index))


def frame_tasks(n_frames, snr_index=0):
    return ((snr_index, frame_index) for frame_index in range(n_frames))


def test_in_process_order():
    with FramePool(EchoSimulator(), workers=1) as pool:
        results = list(pool.imap(frame_tasks(5)))
    assert results == [("frame", (0, index)) for index in range(5)]


def test_window_defaults_to_workers():
    assert FramePool(EchoSimulator(), workers=3).window == 3 * TASKS_PER_WORKER
    assert FramePool(EchoSimulator(), workers=3, window=0).window == 1


def test_submission_bounded_by_window():
    pool = FramePool(EchoSimulator(), workers=3)
    recorder = RecordingPool()
    pool._pool = recorder
    results = list(itertools.islice(pool.imap(frame_tasks(400)), 4))
    assert results == [("frame", (0, index)) for index in range(4)]
    # Stopping after 4 frames leaves only the window in flight
    assert len(recorder.submitted) == 4 + pool.window - 1
    assert recorder.submitted == [(0, index) for index in range(9)]


def test_all_frames_in_order():
    pool = FramePool(EchoSimulator(), workers=2)
    recorder = RecordingPool()
    pool._pool = recorder
    results = list(pool.imap(frame_tasks(10, snr_index=1)))
    assert results == [("frame", (1, index)) for index in range(10)]
    assert len(recorder.submitted) == 10
