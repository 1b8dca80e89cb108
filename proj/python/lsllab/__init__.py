"""Numerical laboratory for two-dimensional delayed window sums."""

try:
    from lsllab._lsllab import *  # noqa: F401,F403  (installed layout)
    from lsllab._lsllab import __version__  # noqa: F401
except ImportError:  # in-tree layout: extension sits next to the package dir
    from _lsllab import *  # noqa: F401,F403
    from _lsllab import __version__  # noqa: F401
