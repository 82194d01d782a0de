"""Exact computations for the Cox ring of M_0,6 in the Kapranov model.

Modules: lattice (classes, generators, pairings), restriction (restrictions
and plane-model cones), x_cone (effective cone of X), lifting (section
lifting and rewriting), oracle (interpolation ground truth), cli.
"""

__version__ = "0.1.0"
