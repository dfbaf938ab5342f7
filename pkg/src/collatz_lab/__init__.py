"""Exact-arithmetic laboratory for Collatz residue dynamics.

Modules: ``numeric`` (rationals), ``residue`` (progressions and density),
``flow`` (symbolic iteration over affine branches), ``chain`` (two-state
chains), ``trajectory`` (concrete orbits), ``mixing`` (repeated integrals and
the mixing contradiction), ``supernatural`` (Steinitz numbers), ``cli``.
"""

__version__ = "0.1.0"
