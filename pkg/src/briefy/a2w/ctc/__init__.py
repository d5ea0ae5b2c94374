"""CTC package."""
from briefy.a2w.ctc.core import collapse  # noQA
from briefy.a2w.ctc.core import ctc_gradient  # noQA
from briefy.a2w.ctc.core import ctc_log_likelihood  # noQA
from briefy.a2w.ctc.core import ctc_loss_and_gradient  # noQA
from briefy.a2w.ctc.core import enumerate_preimage  # noQA
from briefy.a2w.ctc.core import greedy_decode  # noQA
from briefy.a2w.ctc.core import min_frames  # noQA
from briefy.a2w.ctc.vocabulary import BLANK_LABEL  # noQA
from briefy.a2w.ctc.vocabulary import Vocabulary  # noQA
