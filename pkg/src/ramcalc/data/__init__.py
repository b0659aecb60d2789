"""Bundled verification artifacts."""
