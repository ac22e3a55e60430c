"""
Utility Module

Parameter validation and the error hierarchy.
"""
