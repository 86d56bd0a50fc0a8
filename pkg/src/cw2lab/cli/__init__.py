"""Command-line parsing and config assembly."""
