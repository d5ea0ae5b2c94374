"""LSTM network package."""
from briefy.a2w.network.initializers import init_random  # noQA
from briefy.a2w.network.lstm import lstm_backward  # noQA
from briefy.a2w.network.lstm import lstm_forward  # noQA
from briefy.a2w.network.lstm import LSTMLayer  # noQA
from briefy.a2w.network.model import build_network  # noQA
from briefy.a2w.network.model import downsample  # noQA
from briefy.a2w.network.model import downsample_schedule  # noQA
from briefy.a2w.network.model import ForwardTape  # noQA
from briefy.a2w.network.model import Network  # noQA
from briefy.a2w.network.model import network_backward  # noQA
from briefy.a2w.network.model import network_forward  # noQA
from briefy.a2w.network.model import network_output_length  # noQA
from briefy.a2w.network.model import predict_frames  # noQA
from briefy.a2w.network.model import transfer_bottom_layers  # noQA
from briefy.a2w.network.serialize import load_model  # noQA
from briefy.a2w.network.serialize import save_model  # noQA
