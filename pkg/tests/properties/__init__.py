"""
Population-level property suites
"""
