"""Deferred statistical convergence analysis over probabilistic normed spaces.

Thin re-export of the compiled module; see the project README for usage.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
