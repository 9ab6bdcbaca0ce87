"""Exact linear-programming bounds for binary LCD codes."""

__version__ = "0.1.0"
