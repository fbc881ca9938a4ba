"""Exception types raised by the transform pipeline."""


class EvwError(Exception):
    """Base class for all errors raised by :mod:`evwt`."""


class InvalidInputError(EvwError, ValueError):
    """Malformed or out-of-contract input (shapes, sizes, parameters, files)."""


class DetectionError(EvwError, RuntimeError):
    """No meaningful spectral modes could be detected."""

    def __init__(self, message, tracks=None):
        super().__init__(message)
        self.tracks = list(tracks) if tracks is not None else []


class FrameError(EvwError, RuntimeError):
    """The filter bank does not satisfy the frame lower bound."""

    def __init__(self, message, bin_index=None, energy=None):
        super().__init__(message)
        self.bin_index = bin_index
        self.energy = energy
