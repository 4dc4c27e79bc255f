"""Python surface for the accessibility-reward RL lab."""

from ._core import *  # noqa: F401,F403
from ._core import __all__ as _core_all

__all__ = list(_core_all)
