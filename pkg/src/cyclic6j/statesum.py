"""State-sum invariant of a charged, colored, link-carrying triangulation.

Every tetrahedron contributes a charged 6j tensor: the positive one when
its orientation sign matches the parity of sorting its corners by the
global vertex order, the negative one otherwise.  Labels come from the
edge coloring read along the sorted corners, charges from the stored
half-integer charge.  Each interior face receives one check-valued and
one hat-valued leg from its two sides; contracting every face with the
plain index pairing of the dual bases and multiplying by 1/N per link
edge yields a scalar.  The scalar is invariant under the local moves up
to an integer power of the root-of-unity grading scalar, so values are
compared and normalized modulo that power.
"""
from __future__ import annotations

import cmath

import numpy as np

from .algebra import GroupElement, RootData
from .operators import HalfInt, qtilde, q_scalar, assemble_q
from .sixj import LabelSix, Sixj, sixj_neg, sixj_pos
from .triangulation import (
    _EDGE_INDEX, _perm_sign, Charge, Scene, TriComplex, color_of,
    validate_charge,
)

__all__ = [
    "InvariantError", "TypeMismatch", "ZeroValue",
    "tetra_weight", "state_sum",
    "qtilde_order", "equal_mod_qtilde", "canonical_rep", "invariant_record",
]


class InvariantError(ValueError):
    """Base class for state-sum errors."""


class TypeMismatch(InvariantError):
    """A face whose two sides do not pair a check leg with a hat leg."""


class ZeroValue(InvariantError):
    """A vanishing invariant has no canonical representative."""


_q_checked: set[tuple[int, int]] = set()


def _assert_q_scalar(root: RootData) -> None:
    """Guard: the assembled grading operator is the stated scalar.

    Verified once per root on a fixed admissible pair; everything
    downstream normalizes values by powers of this scalar.
    """
    key = (root.N, root.k)
    if key in _q_checked:
        return
    g = GroupElement(0.7, 1.3)
    h = GroupElement(-1.1, 0.8)
    q_op = assemble_q(root, g, h)
    eye = np.eye(root.N)
    if not (np.allclose(q_op.hat_mat, q_scalar(root, "hat") * eye, atol=1e-8)
            and np.allclose(q_op.check_mat, q_scalar(root, "check") * eye,
                            atol=1e-8)):
        raise InvariantError("grading operator is not the expected scalar")
    _q_checked.add(key)


def tetra_weight(root: RootData, T: TriComplex,
                 coloring: dict[int, GroupElement], charge: Charge,
                 t: int, tol: float = 1e-9) -> tuple[Sixj, list[int]]:
    """The 6j tensor of one tetrahedron and the face class of each leg.

    Corners are sorted by the global vertex order into (v1, v2, v3, v4);
    the labels are the colors of v1v2, v2v3, v3v4 and their products, the
    charges sit on v1v2 and v2v3.  Leg p of the positive (negative)
    tensor lies on the face opposite v2, v4, v1, v3 (v3, v1, v4, v2).
    """
    vs = sorted(range(4), key=lambda c: T.vertex_rank[T.vertex_class(t, c)])
    right = T.orientations[t] * _perm_sign(vs) > 0
    i = color_of(T, coloring, t, vs[0], vs[1])
    j = color_of(T, coloring, t, vs[1], vs[2])
    l = color_of(T, coloring, t, vs[2], vs[3])
    lab = LabelSix.from_generators(i, j, l)
    a = HalfInt(charge.doubled[t][_EDGE_INDEX[(vs[0], vs[1])]])
    c = HalfInt(charge.doubled[t][_EDGE_INDEX[(vs[1], vs[2])]])
    if right:
        S = sixj_pos(root, lab, a, c, tol)
        opposite = (vs[1], vs[3], vs[0], vs[2])
    else:
        S = sixj_neg(root, lab, a, c, tol)
        opposite = (vs[2], vs[0], vs[3], vs[1])
    return S, [T.face_class(t, f) for f in opposite]


def _labels_match(p, q, tol: float = 1e-6) -> bool:
    return all(abs(x.x - y.x) <= tol * max(1.0, abs(x.x))
               and abs(x.y - y.y) <= tol * max(1.0, x.y)
               for x, y in zip(p, q))


def _states(scene: Scene):
    # each regular edge color admits a single cyclic module, so the
    # coloring determines the one state of the sum
    yield scene.coloring


def state_sum(root: RootData, scene: Scene, tol: float = 1e-9) -> complex:
    """Contract all tetra weights over the interior faces.

    Requires a coloring and a valid charge on the scene; raises
    :class:`TypeMismatch` if some face fails to pair a check leg with a
    hat leg of equal labels.
    """
    _assert_q_scalar(root)
    if scene.coloring is None:
        raise InvariantError("the scene carries no coloring")
    if scene.charge is None:
        raise InvariantError("the scene carries no charge")
    T = scene.complex
    validate_charge(T, scene.link, scene.charge)
    total = 0.0 + 0.0j
    for state in _states(scene):
        ends: dict[int, list] = {}
        tensors = []
        for t in range(T.n_tets):
            S, face_cls = tetra_weight(root, T, state, scene.charge, t, tol)
            idx = len(tensors)
            tensors.append({"array": S.entries, "legs": list(face_cls)})
            for axis, cls in enumerate(face_cls):
                kind, g, h = S.legs[axis]
                ends.setdefault(cls, []).append((idx, kind, (g, h)))
        for cls, sides in ends.items():
            if len(sides) != 2:
                raise TypeMismatch(f"face class {cls} has {len(sides)} legs")
            (_, k1, l1), (_, k2, l2) = sides
            if {k1, k2} != {"check", "hat"}:
                raise TypeMismatch(f"face class {cls} pairs {k1} with {k2}")
            if not _labels_match(l1, l2):
                raise TypeMismatch(f"face class {cls} pairs unequal labels")
        alive = {i: tb for i, tb in enumerate(tensors)}
        pending = set(ends)
        while pending:
            best = None
            for cls in pending:
                holders = [i for i, tb in alive.items() if cls in tb["legs"]]
                cost = sum(len(alive[i]["legs"]) for i in set(holders))
                if best is None or (cost, cls) < best[:2]:
                    best = (cost, cls, holders)
            _, cls, holders = best
            pending.discard(cls)
            if len(set(holders)) == 1:
                i = holders[0]
                tb = alive[i]
                ax1 = tb["legs"].index(cls)
                ax2 = tb["legs"].index(cls, ax1 + 1)
                tb["array"] = np.trace(tb["array"], axis1=ax1, axis2=ax2)
                tb["legs"] = [x for k, x in enumerate(tb["legs"])
                              if k not in (ax1, ax2)]
            else:
                ia, ib = holders[0], holders[1]
                ta, tb = alive.pop(ia), alive.pop(ib)
                axa = ta["legs"].index(cls)
                axb = tb["legs"].index(cls)
                merged = np.tensordot(ta["array"], tb["array"],
                                      axes=([axa], [axb]))
                legs = [x for k, x in enumerate(ta["legs"]) if k != axa] + \
                    [x for k, x in enumerate(tb["legs"]) if k != axb]
                alive[ia] = {"array": merged, "legs": legs}
        value = 1.0 + 0.0j
        for tb in alive.values():
            if tb["legs"]:
                raise InvariantError("open legs left after contraction")
            value *= complex(tb["array"])
        total += value
    return total * (1.0 / root.N) ** len(scene.link)


def qtilde_order(root: RootData, tol: float = 1e-9) -> int:
    """Multiplicative order of the grading scalar."""
    q = qtilde(root)
    z = q
    for d in range(1, 4 * root.N + 1):
        if abs(z - 1.0) < tol:
            return d
        z *= q
    raise InvariantError("grading scalar is not a root of unity")


def equal_mod_qtilde(z1: complex, z2: complex, root: RootData,
                     tol: float = 1e-7) -> bool:
    """Equality of two invariant values up to a power of the grading scalar."""
    a1, a2 = abs(z1), abs(z2)
    if a1 < tol and a2 < tol:
        return True
    if a1 < tol or a2 < tol:
        return False
    if abs(a1 - a2) > tol * max(a1, a2):
        return False
    q = qtilde(root)
    ratio = z1 / z2
    for _ in range(qtilde_order(root)):
        if abs(ratio - 1.0) < tol:
            return True
        ratio *= q
    return False


def canonical_rep(z: complex, root: RootData) -> tuple[float, float]:
    """Modulus and argument reduced modulo the grading scalar's angle.

    The reduced argument lies in [0, 2 pi / order); a zero value has no
    representative.
    """
    if z == 0:
        raise ZeroValue("cannot normalize a vanishing invariant")
    d = qtilde_order(root)
    step = 2.0 * np.pi / d
    theta = cmath.phase(z) % step
    if theta >= step:
        theta -= step
    return (abs(z), theta)


def invariant_record(z: complex, root: RootData) -> dict:
    """JSON-ready record of an invariant value."""
    r, theta = canonical_rep(z, root)
    return {
        "value": [z.real, z.imag],
        "modulus": r,
        "reduced_arg": theta,
        "qtilde_order": qtilde_order(root),
        "N": root.N,
    }
