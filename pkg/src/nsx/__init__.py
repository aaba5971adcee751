"""High-precision Pade approximants, minimal-capacity contours and their
Riemann-surface strong-asymptotics data."""

__version__ = "0.1.0"
