"""Shared infrastructure: errors, binary container codec, time sources."""
