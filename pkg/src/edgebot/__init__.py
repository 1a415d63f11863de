"""edgebot: language-guided robot tasks in a deterministic 2D simulation."""

__version__ = "0.1.0"
