"""
Rendering of the layered simulation config into a validated SimConfig.
"""

# Standard library imports
import logging

# Local imports
import sisosd.config.confighandlers
import sisosd.simulate.simconfig


def render_sim_config(cli_args=None, config_path=None, environ=None):
    logger = logging.getLogger(__name__)
    handler = sisosd.config.confighandlers.create_sim_config_handler(
        config_path=config_path, logger=logger)
    configs = handler.read_configs(input_data={
        "env_vars": environ,
        "cli_args": {} if cli_args is None else cli_args,
        })
    logger.debug("Sim config hierarchy: %r", configs)
    config = handler.render_config(configs)
    logger.debug("Rendered sim config: %r", config)
    return sisosd.simulate.simconfig.SimConfig.from_config(config)
