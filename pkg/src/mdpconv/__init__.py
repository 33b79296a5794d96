"""MDP convolutional codes over GF(2^m) and their erasure decoding."""
__version__ = "0.1.0"
