"""Triangle presentations of Ã_n-groups, their biautomatic structure,
Moussong's hyperbolicity criterion for Coxeter systems, and thinness
probes for finite graphs."""

__version__ = "0.1.0"
