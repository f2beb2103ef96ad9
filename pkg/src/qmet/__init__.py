"""Fisher information and optimal measurements for interferometric phase estimation."""
from . import errors, estimate, fisher, linalg, purestate, qubit, spinrep, werner

__version__ = "0.1.0"

__all__ = ["errors", "estimate", "fisher", "linalg", "purestate", "qubit", "spinrep", "werner"]
