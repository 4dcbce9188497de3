"""
Log forwarding from frame worker processes to the parent process.
"""

# Standard library imports
import logging
import logging.handlers


def setup_worker_logger(log_queue, filter_level=None):
    """Send every record at or above ``filter_level`` to the parent."""
    root_logger = logging.getLogger()
    root_logger.handlers = [logging.handlers.QueueHandler(log_queue)]
    root_logger.setLevel(logging.DEBUG if filter_level is None
                         else filter_level)


class WorkerLogListener(logging.handlers.QueueListener):
    """Replay worker records through the parent's logger of the same name.

    Records then reach whichever handlers the parent has configured.
    """

    def __init__(self, log_queue):
        super().__init__(log_queue)

    def handle(self, record):
        try:
            logging.getLogger(record.name).handle(record)
        except Exception as e:  # A bad record must not stop the listener
            logging.getLogger(__name__).warning(
                "%s replaying worker log record %r: %s",
                type(e).__name__, record, e)
