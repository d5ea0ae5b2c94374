"""Load and save features, corpus manifests, lexicons and alignments.

Feature files (``.feat``) are little-endian binary: the magic ``A2WF``, then
version, T and d as unsigned 32-bit integers, then ``T x d`` float32 values
row-major. Every text file is UTF-8 with one tab-separated record per line
and no header:

* corpus manifest: ``id``, feature path relative to the manifest, transcript;
* lexicon: ``word``, space-separated phonemes; the first line of a word is its
  canonical pronunciation;
* alignment and hypothesis tables: ``id``, space-separated labels.
"""
from briefy.a2w.config import WORKERS
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.data.types import Lexicon
from briefy.a2w.data.types import Utterance
from briefy.a2w.errors import MalformedHeaderError
from briefy.a2w.errors import MalformedRecordError
from briefy.a2w.errors import TruncatedPayloadError
from briefy.a2w.errors import UnknownLabelError
from briefy.a2w.errors import ValidationError
from briefy.a2w.log import data_logger as logger
from briefy.a2w.reports import export_labels
from concurrent.futures import ThreadPoolExecutor as Executor

import numpy as np
import os
import struct
import typing as t


FEAT_MAGIC = b'A2WF'
FEAT_VERSION = 1
FEAT_HEADER = struct.Struct('<4sIII')
FEAT_DTYPE = np.dtype('<f4')


def write_features(path: str, features: np.ndarray):
    """Write a ``T x d`` matrix as a feature file."""
    features = np.asarray(features)
    if features.ndim != 2:
        raise ValidationError(f'Features must be T x d, got shape {features.shape}.')
    frames, dim = features.shape
    with open(path, 'wb') as fout:
        fout.write(FEAT_HEADER.pack(FEAT_MAGIC, FEAT_VERSION, frames, dim))
        fout.write(np.ascontiguousarray(features, dtype=FEAT_DTYPE).tobytes())


def read_features(path: str) -> np.ndarray:
    """Read a feature file.

    :param path: File path.
    :return: ``T x d`` float32 matrix.
    """
    with open(path, 'rb') as fin:
        data = fin.read()
    if len(data) < FEAT_HEADER.size:
        raise MalformedHeaderError(
            f'header needs {FEAT_HEADER.size} bytes, file has {len(data)}',
            path=path, offset=len(data)
        )
    magic, version, frames, dim = FEAT_HEADER.unpack_from(data)
    if magic != FEAT_MAGIC:
        raise MalformedHeaderError(f'bad magic {magic!r}', path=path, offset=0)
    if version != FEAT_VERSION:
        raise MalformedHeaderError(f'unsupported version {version}', path=path, offset=4)
    expected = frames * dim * FEAT_DTYPE.itemsize
    payload = len(data) - FEAT_HEADER.size
    if payload < expected:
        raise TruncatedPayloadError(
            f'payload truncated: header announces {frames}x{dim} '
            f'({expected} bytes), found {payload}',
            path=path, offset=len(data)
        )
    if payload > expected:
        raise MalformedHeaderError(
            f'{payload - expected} bytes beyond the {frames}x{dim} payload',
            path=path, offset=FEAT_HEADER.size + expected
        )
    return np.frombuffer(data, dtype=FEAT_DTYPE, offset=FEAT_HEADER.size).reshape(frames, dim)


def _records(path: str, fields: int) -> t.Iterator[t.Tuple[int, t.List[str]]]:
    """Yield (line number, fields) for every non-empty line."""
    with open(path, encoding='utf-8') as fin:
        for number, line in enumerate(fin, 1):
            line = line.rstrip('\n').rstrip('\r')
            if not line.strip():
                continue
            values = line.split('\t')
            if len(values) != fields:
                raise MalformedRecordError(
                    f'expected {fields} tab-separated fields, found {len(values)}',
                    path=path, line=number
                )
            yield number, values


def _labels(value: str) -> t.Tuple[str, ...]:
    return tuple(value.split())


def save_lexicon(lexicon: Lexicon, path: str):
    """Write a lexicon file."""
    with open(path, 'w', encoding='utf-8') as fout:
        for word, pron in lexicon.items():
            fout.write(f'{word}\t{export_labels(pron)}\n')


def load_lexicon(path: str, inventory: t.Optional[t.Iterable[str]] = None) -> Lexicon:
    """Read a lexicon file.

    :param path: File path.
    :param inventory: Optional phoneme inventory to check pronunciations against.
    :return: The lexicon.
    """
    lexicon = Lexicon(inventory=inventory)
    for number, (word, pron) in _records(path, 2):
        phonemes = _labels(pron)
        if not word or not phonemes:
            raise MalformedRecordError('empty word or pronunciation', path=path, line=number)
        try:
            lexicon.add(word, phonemes)
        except UnknownLabelError as exc:
            raise UnknownLabelError(exc.label, path=path, line=number) from None
    return lexicon


def save_label_table(rows: t.Iterable[t.Tuple[str, t.Sequence[str]]], path: str):
    """Write (id, labels) rows, one per line."""
    with open(path, 'w', encoding='utf-8') as fout:
        for utt_id, labels in rows:
            fout.write(f'{utt_id}\t{export_labels(labels)}\n')


def load_label_table(path: str) -> t.Dict[str, t.Tuple[str, ...]]:
    """Read (id, labels) rows into an ordered map; used for alignments and hypotheses."""
    table = {}
    for number, (utt_id, labels) in _records(path, 2):
        if utt_id in table:
            raise MalformedRecordError(f'duplicate id {utt_id}', path=path, line=number)
        table[utt_id] = _labels(labels)
    return table


def save_corpus(utterances: t.Sequence[Utterance], path: str, feats_dir: str = 'feats'):
    """Write a corpus manifest plus one feature file per utterance.

    :param utterances: Utterances to write.
    :param path: Manifest path.
    :param feats_dir: Feature directory, relative to the manifest's directory.
    """
    root = os.path.dirname(os.path.abspath(path))
    os.makedirs(os.path.join(root, feats_dir), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as fout:
        for utt in utterances:
            relative = os.path.join(feats_dir, f'{utt.id}.feat')
            write_features(os.path.join(root, relative), utt.features)
            fout.write(f'{utt.id}\t{relative}\t{export_labels(utt.transcript)}\n')
    logger.info(f'Wrote {len(utterances)} utterances to {path}.')


def load_corpus(
        path: str,
        vocabulary: t.Optional[Vocabulary] = None,
        alignment_path: t.Optional[str] = None
) -> t.List[Utterance]:
    """Read a corpus manifest and its feature files.

    :param path: Manifest path.
    :param vocabulary: When given, every transcript word must belong to it.
    :param alignment_path: Optional alignment file attached to the utterances.
    :return: Utterances in manifest order.
    """
    root = os.path.dirname(os.path.abspath(path))
    records = []
    seen = set()
    for number, (utt_id, feat_path, transcript) in _records(path, 3):
        if not utt_id or utt_id in seen:
            raise MalformedRecordError(
                f'missing or duplicate id {utt_id!r}', path=path, line=number
            )
        seen.add(utt_id)
        words = _labels(transcript)
        if vocabulary is not None:
            for word in words:
                if word not in vocabulary:
                    raise UnknownLabelError(word, path=path, line=number)
        records.append((utt_id, os.path.join(root, feat_path), words))

    with Executor(max_workers=WORKERS) as executor:
        features = list(executor.map(read_features, [r[1] for r in records]))

    alignments = load_alignments(alignment_path) if alignment_path else {}
    utterances = []
    for (utt_id, feat_path, words), feats in zip(records, features):
        try:
            utterances.append(Utterance(utt_id, feats, words, alignments.get(utt_id)))
        except ValidationError as exc:
            raise MalformedRecordError(str(exc), path=alignment_path) from None
    if alignment_path:
        missing = [u.id for u in utterances if u.alignment is None]
        if missing:
            raise MalformedRecordError(f'no alignment for {missing[0]}', path=alignment_path)
    logger.info(f'Loaded {len(utterances)} utterances from {path}.')
    return utterances


def save_alignments(utterances: t.Iterable[Utterance], path: str):
    """Write the frame alignments of utterances that carry one."""
    save_label_table(((u.id, u.alignment) for u in utterances if u.alignment is not None), path)


def load_alignments(path: str) -> t.Dict[str, t.Tuple[str, ...]]:
    """Read an alignment file into a map from utterance id to frame labels."""
    return load_label_table(path)


def load_transcripts(path: str) -> t.Dict[str, t.Tuple[str, ...]]:
    """Read the transcripts of a corpus manifest without loading features."""
    transcripts = {}
    for number, (utt_id, _, transcript) in _records(path, 3):
        if utt_id in transcripts:
            raise MalformedRecordError(f'duplicate id {utt_id}', path=path, line=number)
        transcripts[utt_id] = _labels(transcript)
    return transcripts
