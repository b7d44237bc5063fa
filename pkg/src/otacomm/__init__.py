"""Behavioral models of OTA-based delta modulators and mu-law companders."""

__version__ = "0.1.0"
