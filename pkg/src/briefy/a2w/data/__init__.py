"""Corpus types, file formats, splits and the synthetic generator."""
from briefy.a2w.data.io import load_alignments  # noQA
from briefy.a2w.data.io import load_corpus  # noQA
from briefy.a2w.data.io import load_label_table  # noQA
from briefy.a2w.data.io import load_lexicon  # noQA
from briefy.a2w.data.io import load_transcripts  # noQA
from briefy.a2w.data.io import read_features  # noQA
from briefy.a2w.data.io import save_alignments  # noQA
from briefy.a2w.data.io import save_corpus  # noQA
from briefy.a2w.data.io import save_label_table  # noQA
from briefy.a2w.data.io import save_lexicon  # noQA
from briefy.a2w.data.io import write_features  # noQA
from briefy.a2w.data.split import subset  # noQA
from briefy.a2w.data.split import train_dev_split  # noQA
from briefy.a2w.data.synth import generate_synthetic  # noQA
from briefy.a2w.data.synth import sample_durations  # noQA
from briefy.a2w.data.synth import SynthConfig  # noQA
from briefy.a2w.data.synth import SyntheticCorpus  # noQA
from briefy.a2w.data.types import collapse_alignment  # noQA
from briefy.a2w.data.types import Lexicon  # noQA
from briefy.a2w.data.types import SILENCE_LABEL  # noQA
from briefy.a2w.data.types import Utterance  # noQA
