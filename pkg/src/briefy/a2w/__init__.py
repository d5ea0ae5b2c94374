"""Briefy A2W: acoustics-to-word CTC models, training and analysis."""
from importlib import metadata

import logging


__version__ = metadata.version('briefy.a2w')

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
