"""ngspread - spectral extremal graph toolkit for Nordhaus-Gaddum sums and signless Laplacian spread."""

__version__ = "1.0.0"
