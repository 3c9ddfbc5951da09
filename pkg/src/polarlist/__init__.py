"""Polar-code construction, SCL decoding, distance-spectrum probing and FER simulation."""
from .errors import EmptyConstraintsError, InvalidArgument, ResourceError

__version__ = "0.1.0"
__all__ = ["InvalidArgument", "EmptyConstraintsError", "ResourceError"]
