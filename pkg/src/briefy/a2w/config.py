"""Briefy A2W config."""
from prettyconf import config


# Logging
LOG_LEVEL = config('A2W_LOG_LEVEL', default='INFO')
LOG_SERVER = config('A2W_LOG_SERVER', default='')
LOG_SERVER_PORT = config('A2W_LOG_SERVER_PORT', int, default=5543)

# Thread pool used for dev evaluation and analysis queries
WORKERS = config('A2W_WORKERS', int, default=2)

# Largest frame count the brute force pre-image oracle accepts
ORACLE_MAX_FRAMES = config('A2W_ORACLE_MAX_FRAMES', int, default=10)

# Network defaults: 4-layer unidirectional LSTM, 500 units per layer
HIDDEN_DIM = config('A2W_HIDDEN_DIM', int, default=500)
NUM_LAYERS = config('A2W_NUM_LAYERS', int, default=4)
PHONEME_NUM_LAYERS = config('A2W_PHONEME_NUM_LAYERS', int, default=3)

# Parameters are drawn uniformly from [-INIT_SCALE, INIT_SCALE]
INIT_SCALE = config('A2W_INIT_SCALE', float, default=0.05)

# Milliseconds per acoustic frame
FRAME_SHIFT_MS = config('A2W_FRAME_SHIFT_MS', float, default=10.0)
