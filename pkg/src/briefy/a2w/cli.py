"""Command line interface: ``a2w synth | train | decode | score | analyze``.

Every option can also be given in a flat ``KEY=value`` config file passed
with ``--config``; keys are the option names in upper case with dashes
replaced by underscores (``VOCAB_SIZE=50``). Flags override the config file,
which overrides the environment and built-in defaults.
"""
from briefy.a2w import __version__
from briefy.a2w.analysis import blank_distance_report
from briefy.a2w.analysis import CLOSE_RANKS
from briefy.a2w.analysis import EmbeddingMatrix
from briefy.a2w.analysis import FAR_RANKS
from briefy.a2w.analysis import frequency_margin_table
from briefy.a2w.analysis import overlap_histograms
from briefy.a2w.analysis import overlap_permutation_test
from briefy.a2w.config import HIDDEN_DIM
from briefy.a2w.config import NUM_LAYERS
from briefy.a2w.config import PHONEME_NUM_LAYERS
from briefy.a2w.config import WORKERS
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.data.io import load_corpus
from briefy.a2w.data.io import load_label_table
from briefy.a2w.data.io import load_lexicon
from briefy.a2w.data.io import load_transcripts
from briefy.a2w.data.io import save_alignments
from briefy.a2w.data.io import save_corpus
from briefy.a2w.data.io import save_label_table
from briefy.a2w.data.io import save_lexicon
from briefy.a2w.data.split import subset
from briefy.a2w.data.split import train_dev_split
from briefy.a2w.data.synth import generate_synthetic
from briefy.a2w.data.synth import SPLITS
from briefy.a2w.data.synth import SynthConfig
from briefy.a2w.errors import A2WError
from briefy.a2w.errors import MalformedRecordError
from briefy.a2w.errors import ValidationError
from briefy.a2w.log import cli_logger as logger
from briefy.a2w.network.model import build_network
from briefy.a2w.network.model import downsample_schedule
from briefy.a2w.network.model import transfer_bottom_layers
from briefy.a2w.network.serialize import load_model
from briefy.a2w.network.serialize import save_model
from briefy.a2w.reports.analysis import BlankHistogramReport
from briefy.a2w.reports.analysis import BlankSummaryReport
from briefy.a2w.reports.analysis import BlankWordMeansReport
from briefy.a2w.reports.analysis import FrequencyMarginReport
from briefy.a2w.reports.analysis import FrequencySummaryReport
from briefy.a2w.reports.analysis import OverlapHistogramReport
from briefy.a2w.reports.analysis import OverlapSummaryReport
from briefy.a2w.reports.scoring import ScoreReport
from briefy.a2w.training.config import TrainConfig
from briefy.a2w.training.examples import Example
from briefy.a2w.training.examples import make_examples
from briefy.a2w.training.examples import vocabulary_for
from briefy.a2w.training.loop import decode_all
from briefy.a2w.training.loop import train
from briefy.a2w.training.transcripts import convert_transcripts_to_phonemes
from briefy.a2w.training.transcripts import words_to_phonemes
from briefy.a2w.vocabularies import DownsamplePlacement
from briefy.a2w.vocabularies import ModelMode
from briefy.a2w.vocabularies import ScoreKind
from dataclasses import fields
from prettyconf.configuration import Configuration
from prettyconf.loaders import EnvFile

import argparse
import numpy as np
import os
import shutil
import typing as t


MODEL_FILE = 'model.a2w'
TRAINLOG_FILE = 'trainlog.ndjson'
HYPOTHESIS_FILE = 'hyp.tsv'
LEXICON_FILE = 'lexicon.tsv'


def int_range(value: t.Union[str, t.Sequence[int]]) -> t.Tuple[int, int]:
    """Parse ``low-high`` (or ``low,high``) into an inclusive integer range."""
    if isinstance(value, str):
        parts = value.replace(',', '-').split('-')
        if len(parts) == 1:
            parts = parts * 2
        if len(parts) != 2:
            raise ValidationError(f'Invalid range {value!r}; expected low-high.')
        value = parts
    try:
        low, high = (int(v) for v in value)
    except ValueError:
        raise ValidationError(f'Invalid range {value!r}; expected low-high.') from None
    return low, high


def optional_str(value: t.Optional[str]) -> t.Optional[str]:
    """Return None for empty values."""
    return value or None


class Settings:
    """Resolve an option from the command line, then the config file, then the default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file = None
        path = getattr(args, 'config', None)
        if path:
            if not os.path.isfile(path):
                raise ValidationError(f'Config file {path} does not exist.')
            self.file = Configuration(loaders=[EnvFile(filename=path)])

    def __call__(self, name: str, cast: t.Callable, default: t.Any = None) -> t.Any:
        """Return the resolved value of an option.

        :param name: Option destination name, e.g. ``vocab_size``.
        :param cast: Conversion applied to file values and defaults.
        :param default: Value used when neither the flag nor the file sets the option.
        """
        value = getattr(self.args, name, None)
        if value is not None:
            return cast(value)
        if self.file is not None:
            value = self.file(name.upper(), default=None)
            if value is not None:
                try:
                    return cast(value)
                except ValueError as exc:
                    raise ValidationError(f'{name.upper()}: {exc}') from None
        return cast(default) if default is not None else None


class Outputs:
    """Track files written under an output directory; remove them on failure."""

    def __init__(self, directory: str):
        self.directory = directory
        self.created_dir = not os.path.isdir(directory)
        self.paths: t.List[str] = []

    def __enter__(self) -> 'Outputs':
        os.makedirs(self.directory, exist_ok=True)
        return self

    def path(self, name: str) -> str:
        """Register and return an output path."""
        path = os.path.join(self.directory, name)
        self.paths.append(path)
        return path

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            return False
        for path in self.paths:
            if os.path.isdir(path):
                shutil.rmtree(path, ignore_errors=True)
            elif os.path.exists(path):
                os.remove(path)
        if self.created_dir and os.path.isdir(self.directory) \
                and not os.listdir(self.directory):
            os.rmdir(self.directory)
        return False


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--config', help='KEY=value file with option defaults')
    parser.add_argument('--seed', type=int, help='random seed (default 0)')
    parser.add_argument('--out-dir', dest='out_dir', help='output directory')


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser."""
    parser = argparse.ArgumentParser(prog='a2w', description=__doc__.splitlines()[0])
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    synth = commands.add_parser('synth', help='generate a synthetic corpus')
    _add_common(synth)
    synth.add_argument('--vocab-size', dest='vocab_size', type=int, help='words (50)')
    synth.add_argument('--num-phonemes', dest='num_phonemes', type=int, help='phonemes (12)')
    synth.add_argument('--feature-dim', dest='feature_dim', type=int, help='feature dim (20)')
    synth.add_argument('--duration-mean', dest='duration_mean', type=float,
                       help='mean phoneme duration in frames (8.16)')
    synth.add_argument('--duration-std', dest='duration_std', type=float,
                       help='phoneme duration std in frames (4.67)')
    synth.add_argument('--pronunciation-length', dest='pronunciation_length',
                       help='phonemes per word, low-high (2-5)')
    synth.add_argument('--noise-scale', dest='noise_scale', type=float, help='noise std (0.3)')
    synth.add_argument('--words-per-utterance', dest='words_per_utterance',
                       help='words per utterance, low-high (3-8)')
    synth.add_argument('--train-size', dest='train_size', type=int, help='utterances (900)')
    synth.add_argument('--dev-size', dest='dev_size', type=int, help='utterances (100)')
    synth.add_argument('--test-size', dest='test_size', type=int, help='utterances (100)')
    synth.add_argument('--silence-prob', dest='silence_prob', type=float,
                       help='probability of silence around words (0.2)')
    synth.add_argument('--zipf-exponent', dest='zipf_exponent', type=float,
                       help='word frequency exponent (1.0)')

    trainer = commands.add_parser('train', help='train a model')
    _add_common(trainer)
    trainer.add_argument('--mode', choices=[m.value for m in ModelMode],
                         help='model type (word-ctc)')
    trainer.add_argument('--train', help='training corpus manifest')
    trainer.add_argument('--dev', help='development corpus manifest; split from --train if absent')
    trainer.add_argument('--split-fraction', dest='split_fraction', type=float,
                         help='training share when splitting --train (0.9)')
    trainer.add_argument('--lexicon', help='lexicon file')
    trainer.add_argument('--train-align', dest='train_align',
                         help='training alignments (frame classifier)')
    trainer.add_argument('--dev-align', dest='dev_align',
                         help='development alignments (frame classifier)')
    trainer.add_argument('--downsample', type=int,
                         help='down-sampling exponent m, factor 2^m (0)')
    trainer.add_argument('--placement', choices=[p.value for p in DownsamplePlacement],
                         help='where halvings go (after-each-layer)')
    trainer.add_argument('--layers', type=int, help=f'LSTM layers ({NUM_LAYERS})')
    trainer.add_argument('--hidden', type=int, help=f'LSTM units per layer ({HIDDEN_DIM})')
    trainer.add_argument('--lookahead', type=int, help='frame classifier lookahead (1)')
    trainer.add_argument('--init-from', dest='init_from', help='model to copy layers from')
    trainer.add_argument('--init-layers', dest='init_layers', type=int,
                         help='bottom layers copied from --init-from (3)')
    trainer.add_argument('--data-fraction', dest='data_fraction', type=float,
                         help='share of the training set used (1.0)')
    trainer.add_argument('--phase1-epochs', dest='phase1_epochs', type=int, help='(20)')
    trainer.add_argument('--phase2-epochs', dest='phase2_epochs', type=int, help='(20)')
    trainer.add_argument('--phase1-lr', dest='phase1_lr', type=float, help='(0.05)')
    trainer.add_argument('--phase2-lr', dest='phase2_lr', type=float, help='(0.0375)')
    trainer.add_argument('--decay', type=float, help='phase 2 decay per epoch (0.75)')
    trainer.add_argument('--clip-norm', dest='clip_norm', type=float, help='(5.0)')

    decoder = commands.add_parser('decode', help='greedy decode a corpus')
    _add_common(decoder)
    decoder.add_argument('--model', help='model file')
    decoder.add_argument('--corpus', help='corpus manifest')

    scorer = commands.add_parser('score', help='score hypotheses against references')
    _add_common(scorer)
    scorer.add_argument('--kind', choices=[k.value for k in ScoreKind], help='(wer)')
    scorer.add_argument('--ref', help='corpus manifest (wer, per) or alignment file (fer)')
    scorer.add_argument('--hyp', help='hypothesis file')
    scorer.add_argument('--lexicon', help='convert word references to phonemes (per)')

    analyzer = commands.add_parser('analyze', help='analyze softmax weight rows')
    _add_common(analyzer)
    analyzer.add_argument('--model', help='CTC model file')
    analyzer.add_argument('--lexicon', help='lexicon file (overlap)')
    analyzer.add_argument('--train', help='training corpus manifest (margin)')
    analyzer.add_argument('--overlap', action='store_true', default=None,
                          help='close vs far pronunciation overlap')
    analyzer.add_argument('--blank', action='store_true', default=None,
                          help='blank distance report')
    analyzer.add_argument('--margin', action='store_true', default=None,
                          help='frequency vs margin table')
    analyzer.add_argument('--close-ranks', dest='close_ranks', help='low-high (1-3)')
    analyzer.add_argument('--far-ranks', dest='far_ranks', help='low-high (48-50)')
    analyzer.add_argument('--neighbors', type=int, help='blank report neighbors (25)')
    analyzer.add_argument('--permutations', type=int, help='permutation test size (9999)')
    return parser


def _flag(value: t.Union[str, bool]) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    return bool(value)


def _required(settings: Settings, name: str) -> str:
    value = settings(name, optional_str)
    if not value:
        raise ValidationError(f'--{name.replace("_", "-")} is required.')
    return value


def run_synth(settings: Settings) -> t.List[str]:
    """Generate and write a synthetic corpus."""
    kwargs = {}
    for field in fields(SynthConfig):
        cast = int_range if field.name in ('pronunciation_length', 'words_per_utterance') \
            else type(field.default)
        kwargs[field.name] = settings(field.name, cast, field.default)
    cfg = SynthConfig(**kwargs)
    corpus = generate_synthetic(cfg)
    out_dir = _required(settings, 'out_dir')
    with Outputs(out_dir) as outputs:
        outputs.path('feats')
        for split in SPLITS:
            save_corpus(corpus.splits[split], outputs.path(f'{split}.tsv'))
            save_alignments(corpus.splits[split], outputs.path(f'{split}.align.tsv'))
        save_lexicon(corpus.lexicon, outputs.path(LEXICON_FILE))
    return outputs.paths


def _alignment_path(settings: Settings, name: str, manifest: str) -> t.Optional[str]:
    path = settings(name, optional_str)
    if path:
        return path
    candidate = f'{manifest[:-4]}.align.tsv' if manifest.endswith('.tsv') else ''
    return candidate if candidate and os.path.isfile(candidate) else None


def run_train(settings: Settings) -> t.List[str]:
    """Train a model and write it with its training log."""
    seed = settings('seed', int, 0)
    mode = ModelMode(settings('mode', str, ModelMode.word_ctc.value))
    lexicon = load_lexicon(_required(settings, 'lexicon'))
    vocabulary = vocabulary_for(mode, lexicon)
    words = Vocabulary(lexicon.words)
    train_path = _required(settings, 'train')
    frame_level = mode is ModelMode.frame_classifier

    train_align = _alignment_path(settings, 'train_align', train_path) if frame_level else None
    train_utts = load_corpus(train_path, words, train_align)
    dev_path = settings('dev', optional_str)
    if dev_path:
        dev_align = _alignment_path(settings, 'dev_align', dev_path) if frame_level else None
        dev_utts = load_corpus(dev_path, words, dev_align)
    else:
        train_utts, dev_utts = train_dev_split(
            train_utts, settings('split_fraction', float, 0.9), seed
        )
    fraction = settings('data_fraction', float, 1.0)
    if fraction < 1.0:
        train_utts = subset(train_utts, fraction, seed)
    if mode is ModelMode.phoneme_ctc:
        train_utts = convert_transcripts_to_phonemes(train_utts, lexicon)
        dev_utts = convert_transcripts_to_phonemes(dev_utts, lexicon)
    train_examples = make_examples(train_utts, mode, vocabulary)
    dev_examples = make_examples(dev_utts, mode, vocabulary)

    default_layers = PHONEME_NUM_LAYERS if mode is ModelMode.phoneme_ctc else NUM_LAYERS
    num_layers = settings('layers', int, default_layers)
    placement = DownsamplePlacement(
        settings('placement', str, DownsamplePlacement.after_each_layer.value)
    )
    net = build_network(
        mode,
        vocabulary,
        input_dim=train_examples[0].features.shape[1],
        hidden_dim=settings('hidden', int, HIDDEN_DIM),
        num_layers=num_layers,
        seed=seed,
        downsampling=downsample_schedule(settings('downsample', int, 0), num_layers, placement),
        lookahead=settings('lookahead', int) if frame_level else None,
    )
    init_from = settings('init_from', optional_str)
    if init_from:
        source = load_model(init_from)
        net = transfer_bottom_layers(source, net, settings('init_layers', int, 3), seed)
        logger.info(f'Initialized bottom layers from {init_from}.')

    cfg = TrainConfig(
        phase1_epochs=settings('phase1_epochs', int, TrainConfig.phase1_epochs),
        phase1_lr=settings('phase1_lr', float, TrainConfig.phase1_lr),
        phase2_epochs=settings('phase2_epochs', int, TrainConfig.phase2_epochs),
        phase2_lr=settings('phase2_lr', float, TrainConfig.phase2_lr),
        decay=settings('decay', float, TrainConfig.decay),
        clip_norm=settings('clip_norm', float, TrainConfig.clip_norm),
        seed=seed,
        mode=mode,
    )
    logger.info(
        f'Training {net!r} on {len(train_examples)} utterances, {len(dev_examples)} for dev.'
    )
    best, log = train(net, train_examples, dev_examples, cfg)
    with Outputs(_required(settings, 'out_dir')) as outputs:
        save_model(best, outputs.path(MODEL_FILE))
        log.write(outputs.path(TRAINLOG_FILE))
    logger.info(f'Best dev {mode.metric.value} {log.best().dev_metric:.2f} '
                f'at epoch {log.best().epoch}.')
    return outputs.paths


def run_decode(settings: Settings) -> t.List[str]:
    """Decode a corpus and write the hypotheses."""
    net = load_model(_required(settings, 'model'))
    utterances = load_corpus(_required(settings, 'corpus'))
    examples = [
        Example(u.id, np.asarray(u.features, dtype=np.float64), np.zeros(0, dtype=np.int64))
        for u in utterances
    ]
    hyps = decode_all(net, examples)
    with Outputs(_required(settings, 'out_dir')) as outputs:
        save_label_table(
            ((ex.id, net.vocabulary.decode(hyp)) for ex, hyp in zip(examples, hyps)),
            outputs.path(HYPOTHESIS_FILE),
        )
    return outputs.paths


def run_score(settings: Settings) -> t.List[str]:
    """Score a hypothesis file and write the report."""
    kind = ScoreKind(settings('kind', str, ScoreKind.wer.value))
    ref_path = _required(settings, 'ref')
    hyp_path = _required(settings, 'hyp')
    refs = load_label_table(ref_path) if kind is ScoreKind.fer else load_transcripts(ref_path)
    lexicon_path = settings('lexicon', optional_str)
    if lexicon_path:
        lexicon = load_lexicon(lexicon_path)
        refs = {k: tuple(words_to_phonemes(v, lexicon)) for k, v in refs.items()}
    hyps = load_label_table(hyp_path)
    pairs = []
    for utt_id, ref in refs.items():
        if utt_id not in hyps:
            raise MalformedRecordError(f'no hypothesis for {utt_id}', path=hyp_path)
        pairs.append((utt_id, ref, hyps[utt_id]))
    report = ScoreReport(kind, pairs)
    with Outputs(_required(settings, 'out_dir')) as outputs:
        path = outputs.path(report.filename)
        report.save(outputs.directory)
    total = report.total
    if total.reference_length:
        logger.info(f'{kind.value.upper()} {100.0 * total.errors / total.reference_length:.2f}% '
                    f'over {len(pairs)} utterances.')
    return [path]


def _fit_ranks(ranks: t.Tuple[int, int], words: int) -> t.Tuple[int, int]:
    """Shift a rank window so that it fits a small vocabulary."""
    low, high = ranks
    if high <= words - 1:
        return ranks
    shift = high - (words - 1)
    fitted = (max(1, low - shift), words - 1)
    logger.warning(f'{words} words cannot reach rank {high}; using ranks {fitted[0]}-{fitted[1]}.')
    return fitted


def run_analyze(settings: Settings) -> t.List[str]:
    """Run the requested embedding analyses and write their tables."""
    overlap = _flag(settings('overlap', str, 'false'))
    blank = _flag(settings('blank', str, 'false'))
    margin = _flag(settings('margin', str, 'false'))
    if not (overlap or blank or margin):
        raise ValidationError('Choose at least one of --overlap, --blank, --margin.')
    emb = EmbeddingMatrix.from_network(load_model(_required(settings, 'model')))
    reports = []
    if overlap:
        lexicon = load_lexicon(_required(settings, 'lexicon'))
        words = len(emb.words)
        close = _fit_ranks(settings('close_ranks', int_range, CLOSE_RANKS), words)
        far = _fit_ranks(settings('far_ranks', int_range, FAR_RANKS), words)
        histograms = overlap_histograms(emb, lexicon, close, far, workers=WORKERS)
        test = overlap_permutation_test(
            histograms.close_values,
            histograms.far_values,
            permutations=settings('permutations', int, 9999),
            seed=settings('seed', int, 0),
        )
        logger.info(f'Close overlap {histograms.close_mean:.3f}, far {histograms.far_mean:.3f}, '
                    f'p={test.p_value:.4f}.')
        reports.extend([OverlapHistogramReport(histograms), OverlapSummaryReport(histograms, test)])
    if blank:
        report = blank_distance_report(emb, k=settings('neighbors', int, 25))
        logger.info(
            f'Blank mean distance {report.blank_mean:.4f}, word median {report.median:.4f}.'
        )
        reports.extend([
            BlankHistogramReport(report), BlankSummaryReport(report), BlankWordMeansReport(report)
        ])
    if margin:
        transcripts = load_transcripts(_required(settings, 'train')).values()
        table = frequency_margin_table(emb, transcripts)
        reports.extend([FrequencyMarginReport(table), FrequencySummaryReport(table)])
    with Outputs(_required(settings, 'out_dir')) as outputs:
        for report in reports:
            outputs.path(report.filename)
            report.save(outputs.directory)
    return outputs.paths


COMMANDS = {
    'synth': run_synth,
    'train': run_train,
    'decode': run_decode,
    'score': run_score,
    'analyze': run_analyze,
}


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    """Run a subcommand and return the process exit code."""
    args = build_parser().parse_args(argv)
    try:
        settings = Settings(args)
        paths = COMMANDS[args.command](settings)
    except A2WError as exc:
        logger.error(f'{type(exc).__name__}: {exc}')
        return exc.exit_code
    except Exception as exc:
        logger.exception(f'{args.command} failed: {exc}')
        return 1
    for path in paths:
        logger.info(f'Wrote {path}.')
    return 0
