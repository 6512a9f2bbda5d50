"""
Tests for Channel Kappa
"""
