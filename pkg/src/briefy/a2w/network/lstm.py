"""Unidirectional LSTM layer with backpropagation through time.

Sequences are ``T x dim`` arrays, one row per time step. The gate
pre-activations are computed from ``z_t = [x_t, h_{t-1}]`` with a single
``4H x (D + H)`` weight matrix whose row blocks are, in order, the input,
forget, output and cell gates. No peepholes.
"""
from briefy.a2w.errors import ShapeMismatchError
from briefy.a2w.network.initializers import init_random
from briefy.a2w.numerics import sigmoid

import numpy as np
import typing as t


GATES = ('input', 'forget', 'output', 'cell')


class LSTMLayer:
    """One LSTM layer."""

    def __init__(self, weights: np.ndarray, bias: np.ndarray):
        """Initialize the layer from its parameters.

        :param weights: ``4H x (D + H)`` gate weights.
        :param bias: ``4H`` gate biases.
        """
        weights = np.asarray(weights, dtype=np.float64)
        bias = np.asarray(bias, dtype=np.float64)
        rows, cols = weights.shape
        if rows % 4 or bias.shape != (rows,) or cols <= rows // 4:
            raise ShapeMismatchError(
                f'Inconsistent LSTM parameters: weights {weights.shape}, bias {bias.shape}.'
            )
        self.weights = weights
        self.bias = bias

    @classmethod
    def create(cls, input_dim: int, hidden_dim: int, seed: int, *stream: int) -> 'LSTMLayer':
        """Create a randomly initialized layer.

        Weights are uniform in the configured range; the forget gate bias is 1,
        every other bias 0.
        """
        weights, = init_random([(4 * hidden_dim, input_dim + hidden_dim)], seed, *stream)
        bias = np.zeros(4 * hidden_dim)
        bias[hidden_dim:2 * hidden_dim] = 1.0
        return cls(weights, bias)

    @property
    def hidden_dim(self) -> int:
        """Return H."""
        return self.weights.shape[0] // 4

    @property
    def input_dim(self) -> int:
        """Return D."""
        return self.weights.shape[1] - self.hidden_dim

    def gate(self, name: str) -> t.Tuple[np.ndarray, np.ndarray]:
        """Return views on the weights and bias of one gate."""
        h = self.hidden_dim
        i = GATES.index(name)
        return self.weights[i * h:(i + 1) * h], self.bias[i * h:(i + 1) * h]

    def parameters(self) -> t.List[np.ndarray]:
        """Parameters in declaration order."""
        return [self.weights, self.bias]

    def copy(self) -> 'LSTMLayer':
        """Return a deep copy."""
        return LSTMLayer(self.weights.copy(), self.bias.copy())


class LayerTape:
    """Activations of one forward pass kept for backpropagation."""

    def __init__(self, inputs: np.ndarray, hidden: np.ndarray, cells: np.ndarray,
                 gates: np.ndarray):
        self.inputs = inputs
        self.hidden = hidden
        self.cells = cells
        self.gates = gates

    def __len__(self) -> int:
        return len(self.inputs)


def lstm_forward(layer: LSTMLayer, inputs: np.ndarray) -> t.Tuple[np.ndarray, LayerTape]:
    """Run the layer over a sequence from zero initial hidden and cell states.

    :param layer: The layer.
    :param inputs: ``T x D`` input sequence.
    :return: ``T x H`` hidden states and the tape.
    """
    xs = np.asarray(inputs, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != layer.input_dim:
        raise ShapeMismatchError(
            f'LSTM expects T x {layer.input_dim} inputs, got {xs.shape}.'
        )
    frames = xs.shape[0]
    h_dim = layer.hidden_dim
    w_x = layer.weights[:, :layer.input_dim]
    w_h = layer.weights[:, layer.input_dim:]

    # input contribution for every step at once
    pre_x = xs @ w_x.T + layer.bias
    hidden = np.zeros((frames, h_dim))
    cells = np.zeros((frames, h_dim))
    gates = np.zeros((frames, 4 * h_dim))
    h_prev = np.zeros(h_dim)
    c_prev = np.zeros(h_dim)
    for t_ in range(frames):
        a = pre_x[t_] + w_h @ h_prev
        i = sigmoid(a[:h_dim])
        f = sigmoid(a[h_dim:2 * h_dim])
        o = sigmoid(a[2 * h_dim:3 * h_dim])
        g = np.tanh(a[3 * h_dim:])
        c_prev = f * c_prev + i * g
        h_prev = o * np.tanh(c_prev)
        gates[t_] = np.concatenate([i, f, o, g])
        cells[t_] = c_prev
        hidden[t_] = h_prev
    return hidden, LayerTape(xs, hidden, cells, gates)


def lstm_backward(
        layer: LSTMLayer,
        tape: LayerTape,
        grad_hidden: np.ndarray
) -> t.Tuple[t.List[np.ndarray], np.ndarray]:
    """Backpropagate through time.

    :param layer: The layer the tape was recorded with.
    :param tape: Forward tape.
    :param grad_hidden: ``T x H`` gradient of the loss with respect to the hidden states.
    :return: Gradients for ``[weights, bias]`` and the ``T x D`` input gradient.
    """
    h_dim = layer.hidden_dim
    d_in = layer.input_dim
    frames = len(tape)
    grad_hidden = np.asarray(grad_hidden, dtype=np.float64)
    if grad_hidden.shape != (frames, h_dim):
        raise ShapeMismatchError(
            f'Hidden gradient {grad_hidden.shape} does not match tape ({frames}, {h_dim}).'
        )
    d_weights = np.zeros_like(layer.weights)
    d_bias = np.zeros_like(layer.bias)
    d_inputs = np.zeros((frames, d_in))
    dh_next = np.zeros(h_dim)
    dc_next = np.zeros(h_dim)
    for t_ in range(frames - 1, -1, -1):
        gate = tape.gates[t_]
        i = gate[:h_dim]
        f = gate[h_dim:2 * h_dim]
        o = gate[2 * h_dim:3 * h_dim]
        g = gate[3 * h_dim:]
        c = tape.cells[t_]
        c_prev = tape.cells[t_ - 1] if t_ > 0 else np.zeros(h_dim)
        h_prev = tape.hidden[t_ - 1] if t_ > 0 else np.zeros(h_dim)

        dh = grad_hidden[t_] + dh_next
        tanh_c = np.tanh(c)
        do = dh * tanh_c
        dc = dh * o * (1.0 - tanh_c ** 2) + dc_next
        di = dc * g
        dg = dc * i
        df = dc * c_prev
        dc_next = dc * f

        da = np.concatenate([
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            do * o * (1.0 - o),
            dg * (1.0 - g ** 2),
        ])
        z = np.concatenate([tape.inputs[t_], h_prev])
        d_weights += np.outer(da, z)
        d_bias += da
        dz = layer.weights.T @ da
        d_inputs[t_] = dz[:d_in]
        dh_next = dz[d_in:]
    return [d_weights, d_bias], d_inputs
