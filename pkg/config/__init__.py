"""Compiled-in configuration defaults."""
