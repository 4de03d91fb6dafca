"""paperloop: closed-loop review engine for AI-authored research content."""

__version__ = "0.1.0"
