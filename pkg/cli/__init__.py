"""Command-line interface for qpgsim."""
