"""Optimal scalings of finite frames.

Frames are plain 2-D arrays with one frame vector per column. Solvers return
dictionaries mirroring the CLI's JSON reports.
"""

try:
    from ._framescale import *  # noqa: F401,F403
    from ._framescale import __doc__ as _impl_doc  # noqa: F401
except ImportError:  # development tree: extension built next to the package
    from _framescale import *  # noqa: F401,F403

__version__ = "0.1.0"
