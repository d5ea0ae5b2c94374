"""Test the command line interface end to end."""
from briefy.a2w import cli
from briefy.a2w.data.io import load_label_table
from briefy.a2w.data.io import load_lexicon
from briefy.a2w.data.io import load_transcripts
from briefy.a2w.errors import ValidationError
from briefy.a2w.network.serialize import load_model
from briefy.a2w.training.log import TrainLog
from briefy.a2w.vocabularies import ModelMode

import os
import pytest


SYNTH_ARGS = [
    '--vocab-size', '6', '--num-phonemes', '4', '--feature-dim', '5',
    '--duration-mean', '3', '--duration-std', '1', '--pronunciation-length', '1-3',
    '--words-per-utterance', '1-2', '--train-size', '8', '--dev-size', '3',
    '--test-size', '2', '--noise-scale', '0.1', '--seed', '2',
]

TRAIN_ARGS = [
    '--layers', '1', '--hidden', '4', '--phase1-epochs', '1', '--phase2-epochs', '1',
]


@pytest.fixture(scope='module')
def corpus_dir(tmpdir_factory):
    """Synthetic corpus written by the synth command.

    :return: Directory path.
    """
    out_dir = str(tmpdir_factory.mktemp('corpus'))
    assert cli.main(['synth', '--out-dir', out_dir] + SYNTH_ARGS) == 0
    return out_dir


def _train(corpus_dir, out_dir, *extra):
    argv = [
        'train', '--train', os.path.join(corpus_dir, 'train.tsv'),
        '--dev', os.path.join(corpus_dir, 'dev.tsv'),
        '--lexicon', os.path.join(corpus_dir, 'lexicon.tsv'),
        '--out-dir', out_dir,
    ] + TRAIN_ARGS + list(extra)
    return cli.main(argv)


testdata = [
    ('2-5', (2, 5)),
    ('2,5', (2, 5)),
    ('3', (3, 3)),
    ((1, 4), (1, 4)),
]


@pytest.mark.parametrize('value,expected', testdata)
def test_int_range(value, expected):
    """Test int_range."""
    func = cli.int_range

    assert func(value) == expected


@pytest.mark.parametrize('value', ['a-b', '1-2-3', ''])
def test_int_range_invalid(value):
    """Test int_range rejects malformed ranges."""
    func = cli.int_range

    with pytest.raises(ValidationError):
        func(value)


def test_outputs_removes_partial_files(tmpdir):
    """Test outputs registered before a failure are removed."""
    out_dir = str(tmpdir.join('out'))
    with pytest.raises(RuntimeError):
        with cli.Outputs(out_dir) as outputs:
            with open(outputs.path('partial.tsv'), 'w') as fout:
                fout.write('x')
            raise RuntimeError('boom')
    assert not os.path.exists(out_dir)


def test_synth_outputs(corpus_dir):
    """Test the synth command writes manifests, alignments, features and the lexicon."""
    for split in ('train', 'dev', 'test'):
        assert os.path.isfile(os.path.join(corpus_dir, f'{split}.tsv'))
        assert os.path.isfile(os.path.join(corpus_dir, f'{split}.align.tsv'))
    assert len(load_transcripts(os.path.join(corpus_dir, 'train.tsv'))) == 8
    assert len(load_lexicon(os.path.join(corpus_dir, 'lexicon.tsv'))) == 6
    assert len(os.listdir(os.path.join(corpus_dir, 'feats'))) == 13


def test_synth_config_file(tmpdir):
    """Test config file values apply and flags override them."""
    config = tmpdir.join('synth.cfg')
    config.write('VOCAB_SIZE=5\nTRAIN_SIZE=3\nDEV_SIZE=1\nTEST_SIZE=1\n'
                 'NUM_PHONEMES=4\nFEATURE_DIM=3\nWORDS_PER_UTTERANCE=1-2\n')
    out_dir = tmpdir.join('out')
    argv = ['synth', '--config', str(config), '--out-dir', str(out_dir), '--train-size', '2']
    assert cli.main(argv) == 0
    assert len(load_lexicon(str(out_dir.join('lexicon.tsv')))) == 5
    assert len(load_transcripts(str(out_dir.join('train.tsv')))) == 2


def test_synth_deterministic(tmpdir, corpus_dir):
    """Test the same seed writes the same corpus."""
    out_dir = str(tmpdir.join('again'))
    assert cli.main(['synth', '--out-dir', out_dir] + SYNTH_ARGS) == 0
    for name in ('train.tsv', 'train.align.tsv', 'lexicon.tsv'):
        with open(os.path.join(out_dir, name)) as a, open(os.path.join(corpus_dir, name)) as b:
            assert a.read() == b.read()
    feats = sorted(os.listdir(os.path.join(corpus_dir, 'feats')))
    for name in feats:
        with open(os.path.join(out_dir, 'feats', name), 'rb') as a, \
                open(os.path.join(corpus_dir, 'feats', name), 'rb') as b:
            assert a.read() == b.read()


def test_train_decode_score_analyze(tmpdir, corpus_dir):
    """Test a word model through training, decoding, scoring and analysis."""
    model_dir = str(tmpdir.join('model'))
    assert _train(corpus_dir, model_dir) == 0
    net = load_model(os.path.join(model_dir, 'model.a2w'))
    assert net.mode is ModelMode.word_ctc
    log = TrainLog.read(os.path.join(model_dir, 'trainlog.ndjson'))
    assert [r.phase for r in log] == [1, 2]

    decode_dir = str(tmpdir.join('decode'))
    argv = ['decode', '--model', os.path.join(model_dir, 'model.a2w'),
            '--corpus', os.path.join(corpus_dir, 'dev.tsv'), '--out-dir', decode_dir]
    assert cli.main(argv) == 0
    hyps = load_label_table(os.path.join(decode_dir, 'hyp.tsv'))
    assert list(hyps) == ['dev-00000', 'dev-00001', 'dev-00002']

    score_dir = tmpdir.join('score')
    argv = ['score', '--kind', 'wer', '--ref', os.path.join(corpus_dir, 'dev.tsv'),
            '--hyp', os.path.join(decode_dir, 'hyp.tsv'), '--out-dir', str(score_dir)]
    assert cli.main(argv) == 0
    lines = score_dir.join('score.tsv').read().splitlines()
    assert lines[0].split('\t')[0] == 'id'
    assert lines[-1].startswith('TOTAL\twer\t')
    assert float(lines[-1].split('\t')[-1]) == pytest.approx(log.best().dev_metric, abs=0.01)

    analysis_dir = tmpdir.join('analysis')
    argv = ['analyze', '--model', os.path.join(model_dir, 'model.a2w'),
            '--lexicon', os.path.join(corpus_dir, 'lexicon.tsv'),
            '--train', os.path.join(corpus_dir, 'train.tsv'),
            '--overlap', '--blank', '--margin', '--neighbors', '3', '--permutations', '99',
            '--out-dir', str(analysis_dir)]
    assert cli.main(argv) == 0
    for name in ('overlap_histogram.tsv', 'overlap_summary.tsv', 'blank_histogram.tsv',
                 'blank_summary.tsv', 'blank_word_means.tsv', 'frequency_margin.tsv',
                 'frequency_summary.tsv'):
        assert analysis_dir.join(name).check()
    assert len(analysis_dir.join('frequency_margin.tsv').read().splitlines()) == 7


def test_train_downsample_flag(tmpdir):
    """Test --downsample is an exponent spread over the layers."""
    corpus_dir = str(tmpdir.join('corpus'))
    argv = ['synth', '--out-dir', corpus_dir, '--vocab-size', '6', '--num-phonemes', '4',
            '--feature-dim', '5', '--pronunciation-length', '2-3',
            '--words-per-utterance', '1-2', '--train-size', '6', '--dev-size', '2',
            '--test-size', '1', '--seed', '2']
    assert cli.main(argv) == 0
    model_dir = str(tmpdir.join('model'))
    assert _train(corpus_dir, model_dir, '--layers', '2', '--downsample', '2') == 0
    net = load_model(os.path.join(model_dir, 'model.a2w'))
    assert len(net.layers) == 2
    assert net.downsampling == (1, 1)
    assert net.reduction == 4
    assert os.path.exists(os.path.join(model_dir, 'trainlog.ndjson'))


def test_train_split_and_fraction(tmpdir, corpus_dir):
    """Test training without a dev manifest splits the training set."""
    out_dir = str(tmpdir.join('model'))
    argv = [
        'train', '--train', os.path.join(corpus_dir, 'train.tsv'),
        '--lexicon', os.path.join(corpus_dir, 'lexicon.tsv'),
        '--split-fraction', '0.75', '--data-fraction', '0.5', '--out-dir', out_dir,
    ] + TRAIN_ARGS
    assert cli.main(argv) == 0
    assert os.path.isfile(os.path.join(out_dir, 'model.a2w'))


def test_phoneme_pretraining_and_transfer(tmpdir, corpus_dir):
    """Test a phoneme model scored by PER seeds the bottom layer of a word model."""
    phone_dir = str(tmpdir.join('phone'))
    assert _train(corpus_dir, phone_dir, '--mode', 'phoneme-ctc') == 0
    phone_model = os.path.join(phone_dir, 'model.a2w')
    assert load_model(phone_model).mode is ModelMode.phoneme_ctc

    decode_dir = str(tmpdir.join('decode'))
    argv = ['decode', '--model', phone_model, '--corpus', os.path.join(corpus_dir, 'dev.tsv'),
            '--out-dir', decode_dir]
    assert cli.main(argv) == 0
    score_dir = tmpdir.join('score')
    argv = ['score', '--kind', 'per', '--ref', os.path.join(corpus_dir, 'dev.tsv'),
            '--lexicon', os.path.join(corpus_dir, 'lexicon.tsv'),
            '--hyp', os.path.join(decode_dir, 'hyp.tsv'), '--out-dir', str(score_dir)]
    assert cli.main(argv) == 0
    assert score_dir.join('score.tsv').read().splitlines()[-1].startswith('TOTAL\tper\t')

    word_dir = str(tmpdir.join('word'))
    argv = ['--layers', '2', '--init-from', phone_model, '--init-layers', '1']
    assert _train(corpus_dir, word_dir, *argv) == 0
    assert len(load_model(os.path.join(word_dir, 'model.a2w')).layers) == 2


def test_frame_classifier_fer(tmpdir, corpus_dir):
    """Test a frame classifier trained on alignments and scored by FER."""
    model_dir = str(tmpdir.join('model'))
    assert _train(corpus_dir, model_dir, '--mode', 'frame-classifier') == 0
    model_path = os.path.join(model_dir, 'model.a2w')
    assert load_model(model_path).lookahead == 1

    decode_dir = str(tmpdir.join('decode'))
    argv = ['decode', '--model', model_path, '--corpus', os.path.join(corpus_dir, 'dev.tsv'),
            '--out-dir', decode_dir]
    assert cli.main(argv) == 0
    score_dir = tmpdir.join('score')
    argv = ['score', '--kind', 'fer', '--ref', os.path.join(corpus_dir, 'dev.align.tsv'),
            '--hyp', os.path.join(decode_dir, 'hyp.tsv'), '--out-dir', str(score_dir)]
    assert cli.main(argv) == 0
    assert score_dir.join('score.tsv').read().splitlines()[-1].startswith('TOTAL\tfer\t')


def test_exit_codes(tmpdir, corpus_dir):
    """Test errors map to their exit codes and leave no partial outputs."""
    assert cli.main(['synth', '--config', str(tmpdir.join('missing.cfg')),
                     '--out-dir', str(tmpdir)]) == 2

    bad_model = tmpdir.join('bad.a2w')
    bad_model.write_binary(b'NOTAMODEL')
    out_dir = tmpdir.join('decode')
    argv = ['decode', '--model', str(bad_model), '--corpus',
            os.path.join(corpus_dir, 'dev.tsv'), '--out-dir', str(out_dir)]
    assert cli.main(argv) == 7
    assert not out_dir.check()

    lexicon = tmpdir.join('lexicon.tsv')
    lexicon.write('W000\tP00\n')
    argv = ['train', '--train', os.path.join(corpus_dir, 'train.tsv'),
            '--dev', os.path.join(corpus_dir, 'dev.tsv'), '--lexicon', str(lexicon),
            '--out-dir', str(tmpdir.join('model'))] + TRAIN_ARGS
    assert cli.main(argv) == 6
    assert not tmpdir.join('model').check()


def test_exit_code_corrupt_features(tmpdir, corpus_dir):
    """Test a truncated feature file is a data format error."""
    lexicon = os.path.join(corpus_dir, 'lexicon.tsv')
    word = load_lexicon(lexicon).words[0]
    tmpdir.join('feats', 'x.feat').write_binary(b'A2WF', ensure=True)
    manifest = tmpdir.join('broken.tsv')
    manifest.write(f'x\tfeats/x.feat\t{word}\n')
    argv = ['train', '--train', str(manifest), '--lexicon', lexicon,
            '--out-dir', str(tmpdir.join('model'))] + TRAIN_ARGS
    assert cli.main(argv) == 5


def test_exit_code_missing_hypothesis(tmpdir, corpus_dir):
    """Test scoring with a missing hypothesis is a data format error."""
    hyp = tmpdir.join('hyp.tsv')
    hyp.write('dev-00000\tW000\n')
    argv = ['score', '--ref', os.path.join(corpus_dir, 'dev.tsv'), '--hyp', str(hyp),
            '--out-dir', str(tmpdir.join('score'))]
    assert cli.main(argv) == 5
    assert not tmpdir.join('score').check()


def test_analyze_needs_an_analysis(tmpdir):
    """Test analyze without a selected analysis is a usage error."""
    argv = ['analyze', '--model', 'unused.a2w', '--out-dir', str(tmpdir)]
    assert cli.main(argv) == 2
