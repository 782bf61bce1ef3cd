"""McKay quiver transportation polytopes and their toric moduli data."""

__version__ = "0.1.0"
