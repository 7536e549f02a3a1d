"""Deterministic crop selection and yield prediction pipeline."""

__version__ = "0.1.0"
