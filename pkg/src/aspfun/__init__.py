"""Normal answer set programs with function symbols."""
__version__ = "0.1.0"
