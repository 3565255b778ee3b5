"""Two-step flag variety puzzles: structure constants, Pieri rules, gash propagation."""
__version__ = "0.1.0"
