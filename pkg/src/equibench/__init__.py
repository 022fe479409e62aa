"""equibench: demand-weighted utility and equity tracking for benchmark submissions."""

__version__ = "0.1.0"
