"""
Test suite for the stationary surface toolkit
"""
