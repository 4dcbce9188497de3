"""
Frame-level process pool with in-order results and forwarded logging.
"""

# Standard library imports
import collections
import logging
import multiprocessing
import os

# Local imports
import sisosd.multiprocess.loglistener


# Frames in flight per worker; bounds the work wasted by an early stop
TASKS_PER_WORKER = 2

# Simulator of the current worker process
_WORKER_SIMULATOR = None


# --- Worker functions --- #

def _init_worker(simulator, log_queue, filter_level):
    # pylint: disable=global-statement
    global _WORKER_SIMULATOR
    if log_queue is not None:
        sisosd.multiprocess.loglistener.setup_worker_logger(
            log_queue, filter_level=filter_level)
    _WORKER_SIMULATOR = simulator
    logging.getLogger(__name__).debug(
        "Started frame worker %s", multiprocessing.current_process().name)


def _simulate_frame(task):
    snr_index, frame_index = task
    return _WORKER_SIMULATOR.simulate_frame(snr_index, frame_index)


# --- Pool --- #

class FramePool:
    """Run ``simulator.simulate_frame`` over frame tasks, in task order.

    With one worker everything runs in-process; zero workers means one
    per CPU.
    """

    def __init__(self, simulator, workers=1, log_queue=None,
                 log_filter_level=None, window=None):
        self.simulator = simulator
        self.workers = (os.cpu_count() or 1) if workers == 0 else workers
        self.window = (TASKS_PER_WORKER * self.workers if window is None
                       else max(1, int(window)))
        self.log_queue = log_queue
        self.log_filter_level = log_filter_level
        self.logger = logging.getLogger(__name__)
        self._pool = None
        self._listener = None

    def __enter__(self):
        if self.workers == 1:
            return self
        if self.log_queue is None:
            self.log_queue = multiprocessing.Queue()
            self._listener = sisosd.multiprocess.loglistener.WorkerLogListener(
                self.log_queue)
            self._listener.start()
        if self.log_filter_level is None:
            self.log_filter_level = logging.getLogger().getEffectiveLevel()
        self.logger.info("Starting %s frame worker processes", self.workers)
        self._pool = multiprocessing.Pool(
            processes=self.workers,
            initializer=_init_worker,
            initargs=(self.simulator, self.log_queue, self.log_filter_level),
            )
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if self._pool is not None:
            # Frames past an early stop are not needed
            self._pool.terminate()
            self._pool.join()
            self._pool = None
        if self._listener is not None:
            self._listener.stop()
            self._listener = None
        return False

    def imap(self, tasks):
        if self._pool is None:
            for snr_index, frame_index in tasks:
                yield self.simulator.simulate_frame(snr_index, frame_index)
            return

        # At most ``window`` frames are queued ahead of the consumer
        pending = collections.deque()
        for task in tasks:
            pending.append(self._pool.apply_async(_simulate_frame, (task, )))
            if len(pending) >= self.window:
                yield pending.popleft().get()
        while pending:
            yield pending.popleft().get()
