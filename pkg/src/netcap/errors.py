"""Exception types shared across the toolkit."""


class NetcapError(Exception):
    """Base class for all toolkit-specific errors."""


class EdgeListParseError(NetcapError, ValueError):
    """Malformed edge-list input (bad token, self-loop, duplicate edge)."""


class DisconnectedGraphError(NetcapError, ValueError):
    """Operation needs a connected graph but got one with several components."""


class GenerationError(NetcapError, RuntimeError):
    """A random generator could not satisfy its constraints."""


class BracketError(NetcapError, RuntimeError):
    """A critical-rate search could not bracket the congestion transition."""


class SweepError(NetcapError, RuntimeError):
    """A size sweep failed part-way through; message lists completed sizes."""
