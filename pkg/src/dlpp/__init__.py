"""dlpp: a simulation and verification lab for dynamical last passage percolation."""

__version__ = "0.1.0"

from .backend import active_backend  # noqa: F401
