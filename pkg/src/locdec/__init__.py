"""Constant-time distributed decision with scalar oracles in the LOCAL model."""

__version__ = "0.1.0"
