# app/errors.py


class NoisyRadioError(Exception):
    """Base class for every error raised by the simulator."""


class ConfigurationError(NoisyRadioError):
    """Inputs that cannot be combined: vector lengths, directed inputs to a
    simulator, a protocol that does not fit the network, ..."""


class ParameterError(NoisyRadioError):
    """A generator or model parameter is out of range."""


class ProtocolError(NoisyRadioError):
    def __init__(self, message: str, round_index: int, node: int | None = None):
        super().__init__(f"round {round_index}: {message}")
        self.round_index = round_index
        self.node = node


class NotStaticError(NoisyRadioError):
    """Faultless receive rounds changed with the private inputs."""


class ScheduleMismatchError(NoisyRadioError):
    """A protocol that should be collision-free collided in a faultless run."""


class WindowError(NoisyRadioError):
    """Some virtual round left the [L - Q, L] search window."""


class IncompleteHistoryError(NoisyRadioError):
    """A history or completion table is missing entries."""


class EngineInvariantError(NoisyRadioError):
    """A run that must verify (p = 0) did not."""
