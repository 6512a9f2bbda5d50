"""
Helper tools for Channel Kappa
"""

from .list_builtins import list_builtins

__all__ = ['list_builtins']
