"""Noisy-beep broadcast simulation: Python surface over the C++ core."""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # pragma: no cover - in-tree builds put _core on sys.path
    from _core import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
