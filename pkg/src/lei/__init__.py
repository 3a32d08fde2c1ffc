"""Display-calculus kernel for LE-logics with interpolant extraction."""

__version__ = "0.1.0"
