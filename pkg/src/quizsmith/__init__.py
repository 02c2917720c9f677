"""Gap-fill multiple-choice question generation for technical knowledge domains."""

__version__ = "0.1.0"
