"""
Tools Module

Facades returning {"success": ...} dictionaries for the command line.
"""
