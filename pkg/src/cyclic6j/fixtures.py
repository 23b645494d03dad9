"""Canned triangulations for the command line and the test suite.

The workhorse is the boundary of the 4-simplex: five tetrahedra glued
along all ten faces, triangulating the 3-sphere with five vertices, with
the five-cycle through the vertices as Hamiltonian link, a coboundary
edge coloring and a solved charge.
"""
from __future__ import annotations

import numpy as np

from .algebra import GroupElement, group_inv, group_mul
from .triangulation import (
    _EDGE_INDEX, Gluing, Scene, TriComplex, find_charge, is_admissible,
    scene_document,
)

__all__ = ["boundary4simplex_scene", "boundary4simplex_document"]


def boundary4simplex_scene(seed: int = 11) -> Scene:
    """The 3-sphere as the boundary of the 4-simplex, fully dressed.

    Tetrahedron p spans the vertices other than p (in increasing order)
    with orientation (-1)^p, so the five tetrahedra form a cycle.  The
    coloring is a coboundary of a seeded random vertex cochain, which
    makes it a cocycle by construction; the seed default is chosen so
    the coloring is comfortably admissible.
    """
    verts = [tuple(v for v in range(5) if v != p) for p in range(5)]

    def pos(p: int, v: int) -> int:
        return verts[p].index(v)

    orientations = [(-1) ** p for p in range(5)]
    gluings = []
    for p in range(5):
        for q in range(p + 1, 5):
            cmap = tuple((pos(p, wv), pos(q, wv))
                         for wv in range(5) if wv not in (p, q))
            gluings.append(Gluing((p, pos(p, q)), (q, pos(q, p)), cmap))
    T = TriComplex(orientations, gluings)

    link = set()
    for i, j in ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0)):
        p = min(v for v in range(5) if v not in (i, j))
        link.add(T.edge_class(p, _EDGE_INDEX[(pos(p, i), pos(p, j))]))
    link = frozenset(link)

    rng = np.random.default_rng(seed)
    h = []
    for _ in range(T.n_vertices):
        x = float(rng.uniform(0.3, 1.6) * rng.choice([-1.0, 1.0]))
        y = float(rng.uniform(0.6, 1.6))
        h.append(GroupElement(x, y))
    coloring = {}
    for cls in range(T.n_edges):
        lo, hi = T.edge_ends(cls)
        coloring[cls] = group_mul(group_inv(h[lo]), h[hi])
    if not is_admissible(coloring, margin=1e-3):
        raise RuntimeError("fixture seed gives a poorly conditioned coloring")

    charge = find_charge(T, link)
    return Scene(T, link, coloring, charge)


def boundary4simplex_document(seed: int = 11) -> dict:
    return scene_document(boundary4simplex_scene(seed))
