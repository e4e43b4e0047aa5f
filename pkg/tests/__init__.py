"""
Test suite for LiePlateau
"""
