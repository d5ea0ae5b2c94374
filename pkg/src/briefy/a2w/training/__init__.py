"""Training recipes for word CTC, phoneme CTC and frame classifier models."""
from briefy.a2w.training.config import learning_rate  # noQA
from briefy.a2w.training.config import TrainConfig  # noQA
from briefy.a2w.training.examples import Example  # noQA
from briefy.a2w.training.examples import make_examples  # noQA
from briefy.a2w.training.examples import vocabulary_for  # noQA
from briefy.a2w.training.log import EpochRecord  # noQA
from briefy.a2w.training.log import TrainLog  # noQA
from briefy.a2w.training.loop import decode  # noQA
from briefy.a2w.training.loop import decode_all  # noQA
from briefy.a2w.training.loop import evaluate  # noQA
from briefy.a2w.training.loop import train  # noQA
from briefy.a2w.training.loop import training_perplexity  # noQA
from briefy.a2w.training.transcripts import convert_transcripts_to_phonemes  # noQA
