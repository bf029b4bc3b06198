"""LEDBAT fairness simulator: packet-level runs, fluid oracle, metrics."""

try:
    from ._ledbatsim import *  # noqa: F401,F403
    from ._ledbatsim import __doc__ as _core_doc  # noqa: F401
except ImportError:  # development layout: extension on PYTHONPATH, not in package
    from _ledbatsim import *  # noqa: F401,F403
