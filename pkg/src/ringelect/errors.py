"""Exception hierarchy shared by the protocol machines, transports and CLI."""


class RingElectError(Exception):
    """Base class for every error raised by ringelect."""


class ConfigurationError(RingElectError, ValueError):
    """A ring or delay configuration is invalid (duplicate IDs, bad sizes...)."""


class UsageError(RingElectError, ValueError):
    """An API was called outside its precondition."""


class ProtocolViolation(RingElectError):
    """A state machine received a message its invariants rule out.

    ``trace`` holds the records leading up to the violation when the error
    surfaces from a transport.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class SafetyViolation(ProtocolViolation):
    """A run completed but did not agree on the maximum ID."""


class LivenessFailure(RingElectError):
    """A run went quiet (or timed out) without electing a leader."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
