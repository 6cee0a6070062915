"""Censorship prediction for Chinese microblog posts."""

__version__ = "0.1.0"
