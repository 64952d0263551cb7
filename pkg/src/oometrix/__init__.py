"""Object-oriented design metrics over a normalized code model."""

__version__ = "0.1.0"
