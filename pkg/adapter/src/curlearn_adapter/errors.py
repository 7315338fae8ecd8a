"""Errors raised by the adapter's scheduler-session handling."""


class AdapterError(Exception):
    """Base class for adapter failures."""


class SpawnFailure(AdapterError):
    """The scheduler command could not be started."""


class HandshakeMismatch(AdapterError):
    """The scheduler's hello disagrees with the locally loaded manifest."""


class ProtocolViolation(AdapterError):
    """A message broke the strict request/response alternation."""


class SchedulerCrashed(AdapterError):
    """The scheduler process exited or closed its stream mid-session."""
