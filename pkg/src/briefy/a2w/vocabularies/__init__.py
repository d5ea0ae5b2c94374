"""Vocabularies used by A2W."""
from briefy.a2w.vocabularies.model import DownsamplePlacement  # noQA
from briefy.a2w.vocabularies.model import ModelMode  # noQA
from briefy.a2w.vocabularies.model import ScoreKind  # noQA
