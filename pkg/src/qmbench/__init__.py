"""Numerical workbench for single-particle gauge problems, field quantization,
Fock-space operator algebra, spontaneous decay and multipole radiation."""

__version__ = "0.1.0"
