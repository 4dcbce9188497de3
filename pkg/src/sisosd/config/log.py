"""
Logging configuration for sisosd; loaded when file logging is requested.
"""

# Local imports
from sisosd.config.confighandlers import CONFIG_HANDLER_LOG


# Logging config dicts
LOG_CONFIGS = CONFIG_HANDLER_LOG.read_configs()
LOG_CONFIG = CONFIG_HANDLER_LOG.render_config(LOG_CONFIGS)
