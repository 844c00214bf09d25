"""Optimal power and time splits for weighted unequal error protection over
a quasi-static Rayleigh fading channel."""

__version__ = "0.1.0"

from .special import DomainError  # noqa: E402
from .params import ChannelParams, SplitSolution, importance_vector, PRESETS  # noqa: E402

__all__ = ["DomainError", "ChannelParams", "SplitSolution", "importance_vector", "PRESETS", "__version__"]
