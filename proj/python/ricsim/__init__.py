"""RICS-assisted vehicular offloading simulator."""

try:
    from ._ricsim import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _ricsim import *  # noqa: F401,F403  (build-tree layout)
