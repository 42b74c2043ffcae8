"""Spherical t_eps-design toolkit."""

__version__ = "0.1.0"
