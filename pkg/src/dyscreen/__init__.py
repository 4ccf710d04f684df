"""Gamified dyslexia screening: test engine, features, model, evaluation, service."""

__version__ = "0.1.0"
