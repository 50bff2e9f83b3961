"""Spectral solver, kernel quadrature, and inequality-verification harness
for the fourth-order (biharmonic) heat flow u_t = -Lap^2 u."""

__version__ = "0.1.0"
