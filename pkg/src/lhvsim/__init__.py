"""Local hidden-direction and quantum predictions for EPR/Bell coincidence experiments."""

__version__ = "0.1.0"
