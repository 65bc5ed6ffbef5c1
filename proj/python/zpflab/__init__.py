"""Zero-point field interference, self-trapped filaments and toroidal closure."""

from ._zpflab import *  # noqa: F401,F403
from ._zpflab import (
    ArgumentError,
    ModelError,
    NoSolutionError,
    ResolutionError,
    SolverError,
    ZpfError,
)

__version__ = "0.1.0"
