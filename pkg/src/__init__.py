"""
🧮 cohomog7
Integral cohomology of the 7-dimensional cohomogeneity one families L, M, N and O
"""
__version__ = "1.0.0"
