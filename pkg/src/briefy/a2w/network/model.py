"""LSTM stack with inter-layer down-sampling and a softmax output layer."""
from briefy.a2w.ctc.vocabulary import Vocabulary
from briefy.a2w.errors import ShapeMismatchError
from briefy.a2w.errors import StaleTapeError
from briefy.a2w.errors import ValidationError
from briefy.a2w.network.initializers import init_random
from briefy.a2w.network.lstm import LayerTape
from briefy.a2w.network.lstm import lstm_backward
from briefy.a2w.network.lstm import lstm_forward
from briefy.a2w.network.lstm import LSTMLayer
from briefy.a2w.numerics import log_softmax
from briefy.a2w.vocabularies import DownsamplePlacement
from briefy.a2w.vocabularies import ModelMode

import numpy as np
import typing as t


def downsample(h: np.ndarray) -> np.ndarray:
    """Keep frames 1, 3, ..., 2 * floor(T / 2) - 1 (1-based).

    :param h: ``T x dim`` sequence, T >= 2.
    :return: ``floor(T / 2) x dim`` sequence.
    """
    frames = len(h)
    if frames <= 1:
        raise ValidationError(f'Cannot down-sample a sequence of {frames} frame(s).')
    return h[0:2 * (frames // 2):2]


def upsample_gradient(grad: np.ndarray, frames: int) -> np.ndarray:
    """Route a down-sampled gradient back to the kept frames, zeros elsewhere."""
    full = np.zeros((frames,) + grad.shape[1:])
    full[0:2 * (frames // 2):2] = grad
    return full


def downsample_schedule(
        exponent: int,
        num_layers: int,
        placement: DownsamplePlacement = DownsamplePlacement.after_each_layer
) -> t.Tuple[int, ...]:
    """Turn a reduction factor ``2 ** exponent`` into per-position halving counts.

    Entry ``n`` is the number of halvings applied to the input of layer ``n``;
    entry 0 acts on the features. ``after-each-layer`` places one halving after
    each of the lower layers and stacks whatever does not fit before the first
    layer; ``input`` stacks all of them before the first layer.
    """
    if exponent < 0 or num_layers < 1:
        raise ValidationError('Down-sampling exponent must be >= 0 and layers >= 1.')
    counts = [0] * num_layers
    if placement is DownsamplePlacement.input:
        counts[0] = exponent
        return tuple(counts)
    between = min(exponent, num_layers - 1)
    for position in range(1, between + 1):
        counts[position] = 1
    counts[0] = exponent - between
    return tuple(counts)


class Network:
    """Ordered LSTM layers, down-sampling counts and an output layer."""

    def __init__(
            self,
            mode: ModelMode,
            vocabulary: Vocabulary,
            layers: t.Sequence[LSTMLayer],
            downsampling: t.Sequence[int],
            output_weights: np.ndarray,
            output_bias: np.ndarray,
            lookahead: t.Optional[int] = None
    ):
        """Initialize the network.

        :param mode: Model mode.
        :param vocabulary: Output labels; CTC modes add the blank row.
        :param layers: LSTM layers, bottom first.
        :param downsampling: Halvings before each layer.
        :param output_weights: ``C x H`` softmax weights.
        :param output_bias: ``C`` softmax bias.
        :param lookahead: Frames of lookahead; 0 for CTC, 1 by default for frame classifiers.
        """
        self.mode = ModelMode(mode)
        self.vocabulary = vocabulary
        self.layers = list(layers)
        self.downsampling = tuple(int(d) for d in downsampling)
        self.output_weights = np.asarray(output_weights, dtype=np.float64)
        self.output_bias = np.asarray(output_bias, dtype=np.float64)
        if lookahead is None:
            lookahead = 0 if self.mode.is_ctc else 1
        self.lookahead = int(lookahead)
        self.version = 0
        self._validate()

    def _validate(self):
        if not self.layers:
            raise ValidationError('A network needs at least one LSTM layer.')
        if len(self.downsampling) != len(self.layers) or min(self.downsampling) < 0:
            raise ValidationError('One non-negative down-sampling count per layer is required.')
        for lower, upper in zip(self.layers, self.layers[1:]):
            if upper.input_dim != lower.hidden_dim:
                raise ShapeMismatchError(
                    f'Layer input {upper.input_dim} does not match hidden {lower.hidden_dim}.'
                )
        expected = (self.output_dim, self.layers[-1].hidden_dim)
        if self.output_weights.shape != expected or self.output_bias.shape != expected[:1]:
            raise ShapeMismatchError(
                f'Output layer must be {expected}, got {self.output_weights.shape}.'
            )
        if self.mode.is_ctc and self.lookahead != 0:
            raise ValidationError('CTC models have no lookahead.')
        if not self.mode.is_ctc:
            if self.lookahead < 0:
                raise ValidationError('Lookahead must be non-negative.')
            if sum(self.downsampling):
                raise ValidationError('Frame classifiers predict every frame; no down-sampling.')

    @property
    def output_dim(self) -> int:
        """Return the softmax size: V + 1 for CTC modes, V for frame classifiers."""
        return self.vocabulary.size if self.mode.is_ctc else len(self.vocabulary)

    @property
    def input_dim(self) -> int:
        """Return the feature dimension."""
        return self.layers[0].input_dim

    @property
    def reduction(self) -> int:
        """Return the total frame rate reduction 2^m."""
        return 2 ** sum(self.downsampling)

    def parameters(self) -> t.List[np.ndarray]:
        """Parameters in declaration order: each layer's weights and bias, then the output layer."""
        params = []
        for layer in self.layers:
            params.extend(layer.parameters())
        params.extend([self.output_weights, self.output_bias])
        return params

    def apply_update(self, grads: t.Sequence[np.ndarray], lr: float):
        """Take an SGD step in place, invalidating outstanding tapes."""
        params = self.parameters()
        if len(grads) != len(params):
            raise ShapeMismatchError('One gradient per parameter is required.')
        for param, grad in zip(params, grads):
            param -= lr * grad
        self.version += 1

    def copy(self) -> 'Network':
        """Return a deep copy."""
        return Network(
            self.mode,
            self.vocabulary,
            [layer.copy() for layer in self.layers],
            self.downsampling,
            self.output_weights.copy(),
            self.output_bias.copy(),
            self.lookahead,
        )

    def __repr__(self) -> str:
        dims = 'x'.join(str(layer.hidden_dim) for layer in self.layers)
        return f'<Network {self.mode.value} layers={dims} downsampling={self.downsampling}>'


def build_network(
        mode: ModelMode,
        vocabulary: Vocabulary,
        input_dim: int,
        hidden_dim: int,
        num_layers: int,
        seed: int,
        downsampling: t.Optional[t.Sequence[int]] = None,
        lookahead: t.Optional[int] = None
) -> Network:
    """Create a randomly initialized network.

    Layer ``n`` draws from stream ``n`` of the seed and the output layer from
    stream ``num_layers``, so any part can later be re-drawn on its own.
    """
    mode = ModelMode(mode)
    if downsampling is None:
        downsampling = (0,) * num_layers
    layers = []
    dim = input_dim
    for n in range(num_layers):
        layers.append(LSTMLayer.create(dim, hidden_dim, seed, n))
        dim = hidden_dim
    output_dim = vocabulary.size if mode.is_ctc else len(vocabulary)
    weights, bias = _output_layer(output_dim, hidden_dim, seed, num_layers)
    return Network(mode, vocabulary, layers, downsampling, weights, bias, lookahead)


def _output_layer(output_dim: int, hidden_dim: int, seed: int, stream: int):
    weights, = init_random([(output_dim, hidden_dim)], seed, stream)
    return weights, np.zeros(output_dim)


def network_output_length(net: Network, frames: int) -> int:
    """Return the lattice height for ``frames`` input frames."""
    length = frames + net.lookahead
    for count in net.downsampling:
        for _ in range(count):
            if length <= 1:
                raise ValidationError(
                    f'{frames} frames are too short for a reduction of {net.reduction}.'
                )
            length //= 2
    return length - net.lookahead


class ForwardTape:
    """Everything network_backward needs from a forward pass."""

    def __init__(self, net: Network, frames: int):
        self.network_id = id(net)
        self.version = net.version
        self.frames = frames
        self.layer_tapes: t.List[LayerTape] = []
        self.pre_downsample_lengths: t.List[t.List[int]] = []
        self.top_hidden: t.Optional[np.ndarray] = None
        self.log_probs: t.Optional[np.ndarray] = None


def network_forward(net: Network, x: np.ndarray) -> t.Tuple[np.ndarray, ForwardTape]:
    """Run the network over a feature sequence.

    In CTC modes the result is the ``T' x (V + 1)`` lattice with
    ``T' = floor(T / 2^m)``. Frame classifiers pad ``lookahead`` zero frames so
    that row ``t`` of the result is emitted after reading frame ``t + lookahead``
    and holds the class log-probabilities for frame ``t``.

    :param net: The network.
    :param x: ``T x d`` features.
    :return: Log-probabilities and the tape.
    """
    xs = np.asarray(x, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != net.input_dim:
        raise ShapeMismatchError(f'Expected T x {net.input_dim} features, got {xs.shape}.')
    frames = xs.shape[0]
    if frames == 0:
        raise ValidationError('Cannot run the network over an empty sequence.')
    network_output_length(net, frames)

    tape = ForwardTape(net, frames)
    h = xs
    if net.lookahead:
        h = np.vstack([h, np.zeros((net.lookahead, xs.shape[1]))])
    for layer, count in zip(net.layers, net.downsampling):
        lengths = []
        for _ in range(count):
            lengths.append(len(h))
            h = downsample(h)
        tape.pre_downsample_lengths.append(lengths)
        h, layer_tape = lstm_forward(layer, h)
        tape.layer_tapes.append(layer_tape)
    logits = h @ net.output_weights.T + net.output_bias
    log_probs = log_softmax(logits)
    tape.top_hidden = h
    tape.log_probs = log_probs
    return log_probs[net.lookahead:], tape


def network_backward(
        net: Network,
        tape: ForwardTape,
        output_grads: np.ndarray
) -> t.Tuple[t.List[np.ndarray], np.ndarray]:
    """Backpropagate gradients with respect to the output logits.

    :param net: The network the tape was recorded with, unchanged since.
    :param tape: Forward tape.
    :param output_grads: Gradient with respect to the logits, shaped like the forward output.
    :return: Parameter gradients in declaration order and the ``T x d`` input gradient;
             frames dropped by down-sampling receive exactly zero.
    """
    if tape.network_id != id(net) or tape.version != net.version:
        raise StaleTapeError('Tape does not belong to the current network parameters.')
    output_grads = np.asarray(output_grads, dtype=np.float64)
    expected = (tape.log_probs.shape[0] - net.lookahead, net.output_dim)
    if output_grads.shape != expected:
        raise ShapeMismatchError(f'Output gradient must be {expected}, got {output_grads.shape}.')
    full = np.zeros(tape.log_probs.shape)
    full[net.lookahead:] = output_grads

    d_out_weights = full.T @ tape.top_hidden
    d_out_bias = full.sum(axis=0)
    grad = full @ net.output_weights

    layer_grads = []
    for layer, layer_tape, lengths in zip(
            reversed(net.layers), reversed(tape.layer_tapes), reversed(tape.pre_downsample_lengths)
    ):
        param_grads, grad = lstm_backward(layer, layer_tape, grad)
        for length in reversed(lengths):
            grad = upsample_gradient(grad, length)
        layer_grads.append(param_grads)

    grads = []
    for param_grads in reversed(layer_grads):
        grads.extend(param_grads)
    grads.extend([d_out_weights, d_out_bias])
    return grads, grad[:tape.frames]


def predict_frames(net: Network, x: np.ndarray) -> np.ndarray:
    """Return the per-frame argmax labels of a frame classifier."""
    if net.mode.is_ctc:
        raise ValidationError('predict_frames needs a frame classifier.')
    log_probs, _ = network_forward(net, x)
    return np.argmax(log_probs, axis=1)


def transfer_bottom_layers(src: Network, dst: Network, k: int, seed: int) -> Network:
    """Initialize a network from the bottom ``k`` layers of another.

    Layers ``1..k`` are copied from ``src``; the remaining layers and the
    softmax layer are drawn again exactly as build_network draws them for
    ``seed``. With ``k = 0`` the destination is returned unchanged.

    :param src: Pre-trained network (word CTC, phoneme CTC or frame classifier).
    :param dst: Network to initialize.
    :param k: Number of layers to copy, smaller than dst's layer count.
    :param seed: Seed used to re-draw the rest.
    :return: A new network.
    """
    if not 0 <= k < len(dst.layers):
        raise ValidationError(f'k must lie in [0, {len(dst.layers)}), got {k}.')
    if k > len(src.layers):
        raise ShapeMismatchError(f'Source has only {len(src.layers)} layers.')
    for n in range(k):
        if src.layers[n].weights.shape != dst.layers[n].weights.shape:
            raise ShapeMismatchError(
                f'Layer {n + 1}: source {src.layers[n].weights.shape} '
                f'vs destination {dst.layers[n].weights.shape}.'
            )
    if k == 0:
        return dst.copy()

    layers = [layer.copy() for layer in src.layers[:k]]
    for n in range(k, len(dst.layers)):
        layer = dst.layers[n]
        layers.append(LSTMLayer.create(layer.input_dim, layer.hidden_dim, seed, n))
    weights, bias = _output_layer(
        dst.output_dim, dst.layers[-1].hidden_dim, seed, len(dst.layers)
    )
    return Network(
        dst.mode, dst.vocabulary, layers, dst.downsampling, weights, bias, dst.lookahead
    )
