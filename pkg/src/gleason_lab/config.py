"""Numerical tolerances shared by every module."""

from dataclasses import dataclass, replace

__all__ = ["Tolerances", "DEFAULT_TOL", "get_tol", "set_tol"]


@dataclass(frozen=True)
class Tolerances:
    construction: float = 1e-10
    comparison: float = 1e-9
    additivity: float = 1e-8

    def scaled(self, factor):
        return replace(
            self,
            construction=self.construction * factor,
            comparison=self.comparison * factor,
            additivity=self.additivity * factor,
        )


DEFAULT_TOL = Tolerances()
_current = DEFAULT_TOL


def get_tol():
    return _current


def set_tol(tol):
    """Replace the process-wide tolerances, returning the previous record."""
    global _current
    previous = _current
    _current = tol
    return previous
