"""Hasse-principle counterexamples among (x^2-ay^2)(z^2-bt^2)(u^2-abw^2) = c."""

__version__ = "0.1.0"
