"""
Stationary Surfaces in R^4_1
Weierstrass data, ends, singular points and total curvature
"""

__version__ = "1.0.0"
__author__ = "Geometry Tools Team"
