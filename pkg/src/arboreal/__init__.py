"""Fixed-point densities of arboreal representations and prime scans."""

__version__ = "0.1.0"
