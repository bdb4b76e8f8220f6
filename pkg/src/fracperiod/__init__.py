"""Numerics for asymptotically periodic solutions of fractional evolution equations.

The package evaluates Mittag-Leffler and Mainardi functions, discretizes
fractional integrals and Caputo derivatives, solves diagonal fractional
evolution equations mode by mode, and classifies the long-time behaviour of
trajectories against spectral hypotheses.
"""

__version__ = "0.1.0"
