"""
Integration tests package
"""