"""Crypto sentiment lexicon, LSTM sentiment classifier and trend evaluation."""

from ._core import *  # noqa: F401,F403
from ._core import Error, commands, run

__all__ = [name for name in dir() if not name.startswith("_")]
