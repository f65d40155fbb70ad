"""curvedist: coarse curve-graph distances via train-track splitting, and
Nielsen-Thurston classification of mapping classes, with running time
polynomial in surface complexity and input bit-size."""

__version__ = "0.1.0"
