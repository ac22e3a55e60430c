"""
Service Layer Module

Group models, subgroup lattices, classification, relative generating sets
and closed forms.
"""
