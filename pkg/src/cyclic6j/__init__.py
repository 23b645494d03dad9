"""Charged 6j-symbols of cyclic quantum-Borel representations.

Subpackage layout:

* :mod:`cyclic6j.algebra` -- group elements, root coordinates, psi
  coefficients, cyclic modules and the tensor-product intertwiner.
* :mod:`cyclic6j.operators` -- block operators on the multiplicity
  spaces and the grading/charge scalars.
* :mod:`cyclic6j.sixj` -- charged 6j-symbol tensors and their identities.
* :mod:`cyclic6j.triangulation` -- triangulated 3-manifolds with a
  distinguished link, charges and group colorings, and the moves.
* :mod:`cyclic6j.statesum` -- the state-sum invariant built from the
  charged 6j-symbols.
"""
from __future__ import annotations

__version__ = "0.1.0"
