"""Generic Newton points of Iwahori double cosets via the quantum Bruhat graph."""

__version__ = "0.1.0"
