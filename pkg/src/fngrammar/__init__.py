"""Multilingual frame-semantic grammar compiler and surface realizer."""

__version__ = "0.1.0"
