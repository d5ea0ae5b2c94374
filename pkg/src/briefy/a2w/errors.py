"""Errors raised by briefy.a2w."""
import typing as t


class A2WError(Exception):
    """Base class for all briefy.a2w errors."""

    exit_code = 1
    """Process exit code used by the command line interface."""


class ValidationError(A2WError, ValueError):
    """Invalid argument or violated precondition."""

    exit_code = 2


class OracleBoundError(ValidationError):
    """Brute force enumeration requested above the configured frame bound."""


class InfeasibleTargetError(A2WError):
    """Target label sequence has zero probability for the given frame count."""

    exit_code = 3

    def __init__(self, message: str, utterance_id: t.Optional[str] = None):
        """Initialize the error.

        :param message: Error message.
        :param utterance_id: Utterance the target belongs to, when known.
        """
        super().__init__(message)
        self.utterance_id = utterance_id


class ShapeMismatchError(A2WError, ValueError):
    """Array or layer dimensions do not agree."""

    exit_code = 4


class StaleTapeError(A2WError):
    """A forward tape was used after the network parameters changed."""

    exit_code = 4


class DataFormatError(A2WError):
    """Base class for malformed data files."""

    exit_code = 5

    def __init__(
            self,
            message: str,
            path: str = '',
            line: t.Optional[int] = None,
            offset: t.Optional[int] = None
    ):
        """Initialize the error.

        :param message: Error message.
        :param path: File the error was found in.
        :param line: 1-based line number, for text files.
        :param offset: Byte offset, for binary files.
        """
        location = path
        if line is not None:
            location = f'{path}:{line}'
        elif offset is not None:
            location = f'{path}@{offset}'
        super().__init__(f'{location}: {message}' if location else message)
        self.path = path
        self.line = line
        self.offset = offset


class MalformedHeaderError(DataFormatError):
    """Binary header is missing, short or carries a wrong magic or version."""


class TruncatedPayloadError(DataFormatError):
    """Binary payload is shorter than its header announces."""


class MalformedRecordError(DataFormatError):
    """A text record does not have the expected fields."""


class UnknownLabelError(A2WError, KeyError):
    """A label is not part of the vocabulary or lexicon."""

    exit_code = 6

    def __init__(self, label: str, path: str = '', line: t.Optional[int] = None):
        """Initialize the error.

        :param label: The offending label.
        :param path: File the label was read from, if any.
        :param line: 1-based line number, if any.
        """
        self.label = label
        self.path = path
        self.line = line
        where = f' ({path}:{line})' if path and line is not None else ''
        super().__init__(f"Unknown label '{label}'{where}")

    def __str__(self) -> str:
        """Avoid KeyError quoting the message."""
        return self.args[0]


class ModelFormatError(A2WError):
    """Model file cannot be decoded."""

    exit_code = 7


class TrainingError(A2WError):
    """Training cannot proceed."""

    exit_code = 8
