"""Isoperimetric constants, spanning forests and finite relation models."""

try:
    from ._isolab import *  # noqa: F401,F403  (installed package layout)
    from ._isolab import __version__  # noqa: F401
except ImportError:  # in-tree build: extension sits directly on sys.path
    from _isolab import *  # noqa: F401,F403
    from _isolab import __version__  # noqa: F401
