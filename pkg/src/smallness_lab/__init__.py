"""Certificate-producing toolkit for thresholds and covers of increasing set systems."""

__version__ = "0.1.0"
