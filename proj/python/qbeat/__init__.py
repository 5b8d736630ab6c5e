"""Two-mode field entanglement in a microwave-driven V-type quantum beat laser."""

from ._core import *  # noqa: F401,F403
from ._core import MOMENT_NAMES, ModelParams

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
