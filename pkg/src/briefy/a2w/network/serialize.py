"""Single-file model format.

Layout, all integers little-endian unsigned 32-bit::

    magic            8 bytes  b'A2WMODEL'
    version          u32      FORMAT_VERSION
    mode             u32 length + UTF-8 bytes
    layer count      u32
    input dim        u32
    hidden dims      u32 per layer
    down-sampling    u32 per layer
    lookahead        u32
    vocabulary       u32 count, then u32 length + UTF-8 bytes per label
    parameters       float64 little-endian blocks in declaration order

The parameter shapes follow from the header, so the blocks carry no extra
framing.
"""
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.errors import ModelFormatError
from briefy.a2w.errors import ShapeMismatchError
from briefy.a2w.errors import ValidationError
from briefy.a2w.network.lstm import LSTMLayer
from briefy.a2w.network.model import Network
from briefy.a2w.vocabularies import ModelMode

import io
import numpy as np
import struct
import typing as t


MAGIC = b'A2WMODEL'
FORMAT_VERSION = 1

_U32 = struct.Struct('<I')
_F64 = np.dtype('<f8')


def _write_u32(buffer: t.BinaryIO, value: int):
    buffer.write(_U32.pack(value))


def _write_str(buffer: t.BinaryIO, value: str):
    data = value.encode('utf-8')
    _write_u32(buffer, len(data))
    buffer.write(data)


def dumps(net: Network) -> bytes:
    """Serialize a network."""
    buffer = io.BytesIO()
    buffer.write(MAGIC)
    _write_u32(buffer, FORMAT_VERSION)
    _write_str(buffer, net.mode.value)
    _write_u32(buffer, len(net.layers))
    _write_u32(buffer, net.input_dim)
    for layer in net.layers:
        _write_u32(buffer, layer.hidden_dim)
    for count in net.downsampling:
        _write_u32(buffer, count)
    _write_u32(buffer, net.lookahead)
    _write_u32(buffer, len(net.vocabulary))
    for label in net.vocabulary.labels:
        _write_str(buffer, label)
    for param in net.parameters():
        buffer.write(np.ascontiguousarray(param, dtype=_F64).tobytes())
    return buffer.getvalue()


class _Reader:
    """Cursor over the serialized bytes."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise ModelFormatError(
                f'Model truncated at byte {len(self.data)}, needed {end} bytes.'
            )
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def u32(self) -> int:
        return _U32.unpack(self.take(_U32.size))[0]

    def string(self) -> str:
        raw = self.take(self.u32())
        try:
            return raw.decode('utf-8')
        except UnicodeDecodeError:
            raise ModelFormatError(f'Invalid UTF-8 string before byte {self.offset}.') from None

    def array(self, shape: t.Tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape))
        raw = self.take(count * _F64.itemsize)
        return np.frombuffer(raw, dtype=_F64).astype(np.float64).reshape(shape)


def loads(data: bytes) -> Network:
    """Deserialize a network written by dumps."""
    reader = _Reader(data)
    if reader.take(len(MAGIC)) != MAGIC:
        raise ModelFormatError('Not a model file: bad magic.')
    version = reader.u32()
    if version != FORMAT_VERSION:
        raise ModelFormatError(f'Unsupported model format version {version}.')
    try:
        mode = ModelMode(reader.string())
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    num_layers = reader.u32()
    input_dim = reader.u32()
    hidden_dims = [reader.u32() for _ in range(num_layers)]
    downsampling = [reader.u32() for _ in range(num_layers)]
    lookahead = reader.u32()
    try:
        vocabulary = Vocabulary(reader.string() for _ in range(reader.u32()))
    except ValidationError as exc:
        raise ModelFormatError(f'Invalid vocabulary: {exc}') from None

    layers = []
    dim = input_dim
    for hidden in hidden_dims:
        weights = reader.array((4 * hidden, dim + hidden))
        bias = reader.array((4 * hidden,))
        layers.append(LSTMLayer(weights, bias))
        dim = hidden
    output_dim = vocabulary.size if mode.is_ctc else len(vocabulary)
    output_weights = reader.array((output_dim, dim))
    output_bias = reader.array((output_dim,))
    if reader.offset != len(data):
        raise ModelFormatError(f'{len(data) - reader.offset} trailing bytes after parameters.')
    try:
        return Network(
            mode, vocabulary, layers, downsampling, output_weights, output_bias, lookahead
        )
    except (ShapeMismatchError, ValidationError) as exc:
        raise ModelFormatError(f'Inconsistent model header: {exc}') from None


def save_model(net: Network, path: str):
    """Write a network to a file."""
    with open(path, 'wb') as fout:
        fout.write(dumps(net))


def load_model(path: str) -> Network:
    """Read a network from a file."""
    with open(path, 'rb') as fin:
        return loads(fin.read())
