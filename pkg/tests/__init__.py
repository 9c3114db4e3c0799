"""
Test package for coded light-field reconstruction
"""