"""Unimodularity of hierarchical-model design matrices."""
