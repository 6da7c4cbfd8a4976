"""Reward-guided sampling on analytic diffusion priors.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
