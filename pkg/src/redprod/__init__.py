"""Continuous logic over finite metric structures: reduced products, Horn and
Palyutin fragments, and brute-force preservation checks."""

__version__ = "0.1.0"
