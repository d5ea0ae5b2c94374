"""Helper to create logger instance."""
from briefy.a2w.config import LOG_LEVEL
from briefy.a2w.config import LOG_SERVER
from briefy.a2w.config import LOG_SERVER_PORT

import logging
import logstash


def create_logger(name: str, tags: list) -> logging.Logger:
    """Create a new logger.

    :param name: Logger name.
    :param tags: Tags attached to records shipped to the log server.
    :return: Configured logger.
    """
    logger = logging.getLogger(name)
    logger.setLevel(LOG_LEVEL)

    if not logger.handlers:
        cs = logging.StreamHandler()
        cs.setLevel(LOG_LEVEL)
        cs.setFormatter(
            logging.Formatter('%(asctime)s %(levelname)-5.5s [%(name)s] %(message)s')
        )
        logger.addHandler(cs)

        if LOG_SERVER:
            log_handler = logstash.LogstashHandler(
                LOG_SERVER, LOG_SERVER_PORT, version=1, tags=tags
            )
            logger.addHandler(log_handler)
    return logger


training_logger = create_logger(name='briefy.a2w.training', tags=['Training', 'briefy.a2w'])
data_logger = create_logger(name='briefy.a2w.data', tags=['Data', 'briefy.a2w'])
analysis_logger = create_logger(name='briefy.a2w.analysis', tags=['Analysis', 'briefy.a2w'])
cli_logger = create_logger(name='briefy.a2w.cli', tags=['CLI', 'briefy.a2w'])
