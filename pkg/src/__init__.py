"""
qspine

Exact quantum invariants of 2-complexes and 4-dimensional thickenings at a
prime root of unity, with Andrews-Curtis fuzzing and identity checks.
"""

__version__ = "1.0.0"
