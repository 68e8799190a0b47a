"""Multi-objective evolutionary design of SELFIES-encoded molecules."""

__version__ = "0.1.0"
