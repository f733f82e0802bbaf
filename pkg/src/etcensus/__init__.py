"""Census of connected edge-transitive graphs of small order."""

__version__ = "0.1.0"
