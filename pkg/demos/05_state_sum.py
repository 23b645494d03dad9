"""
The state-sum invariant and its move invariance
===============================================

Computes the invariant K of the boundary-of-the-4-simplex fixture, then
verifies that moves and reorderings change it at most by a power of the
grading scalar qtilde, while gauge transforms leave it exactly fixed.
"""
import numpy as np

from cyclic6j.algebra import RootData
from cyclic6j.fixtures import boundary4simplex_scene
from cyclic6j.statesum import (
    equal_mod_qtilde, invariant_record, qtilde_order, state_sum,
)
from cyclic6j.triangulation import (
    Scene, deform_charge, gauge_transform, pachner_plus, random_gauge,
)

root = RootData(N=3)
scene = boundary4simplex_scene()
T = scene.complex

K0 = state_sum(root, scene)
print(f"K = {K0:.12f}")
print("record:", invariant_record(K0, root))
print(f"qtilde has order {qtilde_order(root)}")

# a positive Pachner move multiplies K by a power of qtilde at most
moved = pachner_plus(scene, 3, 3)
K1 = state_sum(root, moved)
print(f"after pachner+: K' = {K1:.12f}")
print(f"  ratio K'/K = {K1 / K0:.6f}")
print(f"  equal mod qtilde: {equal_mod_qtilde(K1, K0, root)}")

# deforming the charge along an edge is also invisible mod qtilde
c2 = deform_charge(T, scene.link, scene.charge, edge_cls=4)
K2 = state_sum(root, Scene(T, scene.link, scene.coloring, c2))
print(f"after charge deformation: ratio {K2 / K0:.6f}, "
      f"equal mod qtilde: {equal_mod_qtilde(K2, K0, root)}")

# renumbering the vertices permutes the local weights coherently
perm = [4, 2, 0, 3, 1]
sc = Scene(T.with_vertex_ranks(perm), scene.link, scene.coloring,
           scene.charge)
K3 = state_sum(root, sc)
print(f"after vertex reorder {perm}: ratio {K3 / K0:.6f}, "
      f"equal mod qtilde: {equal_mod_qtilde(K3, K0, root)}")

# a gauge transform of the coloring changes nothing at all
rng = np.random.default_rng(5)
recolored = gauge_transform(T, scene.coloring, random_gauge(T, rng))
K4 = state_sum(root, Scene(T, scene.link, recolored, scene.charge))
print(f"after a random gauge: |K'' - K| = {abs(K4 - K0):.2e}")
