"""Lets pytest import the top-level `core` and `cli` packages when run from the repo root."""
