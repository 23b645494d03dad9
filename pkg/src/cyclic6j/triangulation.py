"""Quasi-regular triangulations of closed oriented 3-manifolds.

A complex is a list of oriented tetrahedra plus a perfect matching of
their faces; vertex, edge and face classes are derived by union-find
over the gluing maps.  On top of the bare complex live:

* Hamiltonian links (edge sets covering every vertex exactly twice),
* half-integer charges (stored as doubled integers) with per-face sums
  1/2 and global edge sums 1 (plain edge) or 0 (link edge),
* G-colorings: group-valued 1-cocycles on oriented edges, with vertex
  gauges acting on them,
* the local moves connecting any two such triangulations of the same
  pair (manifold, link): Pachner 2<->3 and bubble, with deterministic
  charge transport.

Local index conventions (normative for the JSON format): corners 0..3,
face f is opposite corner f, edges 0..5 enumerate the corner pairs
(0,1),(0,2),(0,3),(1,2),(1,3),(2,3), opposite edge pairs (0,5),(1,4),(2,3).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraError, GroupElement, group_inv, group_mul

__all__ = [
    "TopologyError", "ParseError", "NotClosed", "NotQuasiRegular",
    "NotOrientable", "NotHamiltonian", "NoCharge", "BadCharge", "BadLoop",
    "BadColoring", "MoveNotApplicable", "AdmissibilityFailed",
    "EDGE_CORNERS", "OPPOSITE_EDGE", "FACE_CORNERS",
    "Gluing", "TriComplex", "Charge", "GGauge", "Scene",
    "load_complex", "load_document", "scene_document", "save_document",
    "validate_link", "find_charge", "validate_charge", "deform_charge",
    "charge_class",
    "pachner_plus", "pachner_minus", "bubble_plus", "bubble_minus",
    "gauge_transform", "point_gauge", "random_gauge",
    "is_admissible", "make_admissible", "edge_between", "holonomy",
]


class TopologyError(ValueError):
    """Base class for triangulation errors."""


class ParseError(TopologyError):
    """Malformed triangulation document."""


class NotClosed(TopologyError):
    """A face is unglued or glued more than once."""


class NotQuasiRegular(TopologyError):
    """An edge class with coinciding endpoints."""


class NotOrientable(TopologyError):
    """A gluing fails to reverse the induced face orientation."""


class NotHamiltonian(TopologyError):
    """A vertex not covered exactly twice by the link."""


class NoCharge(TopologyError):
    """The charge system has no integral solution."""


class BadCharge(TopologyError):
    """A charge violating a tetrahedron or edge constraint."""


class BadLoop(TopologyError):
    """A loop that is not a valid chain of face passages."""


class BadColoring(TopologyError):
    """Edge colors violating the face cocycle condition."""


class MoveNotApplicable(TopologyError):
    """The requested move cannot be performed at the given cells."""


class AdmissibilityFailed(TopologyError):
    """No admissible coloring found within the retry budget."""


EDGE_CORNERS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
OPPOSITE_EDGE = (5, 4, 3, 2, 1, 0)
FACE_CORNERS = tuple(tuple(c for c in range(4) if c != f) for f in range(4))
_EDGE_INDEX = {}
for _i, (_a, _b) in enumerate(EDGE_CORNERS):
    _EDGE_INDEX[(_a, _b)] = _i
    _EDGE_INDEX[(_b, _a)] = _i
_PAIR_OF_EDGE = (0, 1, 2, 2, 1, 0)
_PAIR_REPS = (0, 1, 2)  # edge slots representing the three opposite pairs


def _perm_sign(seq) -> int:
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


@dataclass(frozen=True)
class Gluing:
    """A face pairing with an explicit corner bijection.

    ``a`` and ``b`` are (tetrahedron, face) pairs; ``corner_map`` lists
    three (corner of a's tet, corner of b's tet) pairs covering exactly
    the corners on each side of the face.
    """

    a: tuple[int, int]
    b: tuple[int, int]
    corner_map: tuple[tuple[int, int], ...]


class TriComplex:
    """Validated closed oriented quasi-regular triangulation.

    Immutable after construction; all derived classes (vertices, edges,
    faces) are numbered by first appearance in lexicographic
    (tetrahedron, local index) order, so numbering is reproducible.
    """

    def __init__(self, orientations, gluings, vertex_ranks=None):
        self.orientations = tuple(int(o) for o in orientations)
        self.gluings = tuple(gluings)
        n = len(self.orientations)
        if n == 0:
            raise ParseError("empty complex")
        for t, o in enumerate(self.orientations):
            if o not in (1, -1):
                raise ParseError(f"tetrahedron {t}: orientation must be +-1")
        self._build_partners(n)
        self._build_classes(n)
        self._check_orientations()
        self._check_quasi_regular()
        if vertex_ranks is None:
            vertex_ranks = tuple(range(self.n_vertices))
        else:
            vertex_ranks = tuple(int(r) for r in vertex_ranks)
            if sorted(vertex_ranks) != list(range(self.n_vertices)):
                raise ParseError("vertex_ranks must be a permutation")
        self.vertex_rank = vertex_ranks

    # -- construction ------------------------------------------------

    def _build_partners(self, n: int) -> None:
        partner: dict[tuple[int, int], tuple[int, int, dict[int, int]]] = {}
        for g in self.gluings:
            for (t, f) in (g.a, g.b):
                if not (0 <= t < n and 0 <= f < 4):
                    raise ParseError(f"gluing references missing face {(t, f)}")
            if g.a == g.b:
                raise ParseError(f"face {g.a} glued to itself")
            fwd = {i: j for i, j in g.corner_map}
            bwd = {j: i for i, j in g.corner_map}
            if sorted(fwd) != list(FACE_CORNERS[g.a[1]]) \
                    or sorted(bwd) != list(FACE_CORNERS[g.b[1]]):
                raise ParseError(f"gluing {g.a}~{g.b}: corner map is not a "
                                 "bijection of the face corners")
            for side, cmap in ((g.a, fwd), (g.b, bwd)):
                if side in partner:
                    raise NotClosed(f"face {side} glued twice")
                other = g.b if side == g.a else g.a
                partner[side] = (other[0], other[1], cmap)
        for t in range(n):
            for f in range(4):
                if (t, f) not in partner:
                    raise NotClosed(f"face ({t}, {f}) is unglued")
        self._partner = partner

    def _build_classes(self, n: int) -> None:
        vuf = _UnionFind(4 * n)
        euf = _UnionFind(6 * n)
        fuf = _UnionFind(4 * n)
        for g in self.gluings:
            (ta, fa), (tb, fb) = g.a, g.b
            fuf.union(4 * ta + fa, 4 * tb + fb)
            cmap = {i: j for i, j in g.corner_map}
            for ca, cb in cmap.items():
                vuf.union(4 * ta + ca, 4 * tb + cb)
            for ca, cb in itertools.combinations(sorted(cmap), 2):
                ea = _EDGE_INDEX[(ca, cb)]
                eb = _EDGE_INDEX[(cmap[ca], cmap[cb])]
                euf.union(6 * ta + ea, 6 * tb + eb)

        def number(uf, count):
            ids, nxt = {}, 0
            out = []
            for i in range(count):
                r = uf.find(i)
                if r not in ids:
                    ids[r] = nxt
                    nxt += 1
                out.append(ids[r])
            return out, nxt

        vflat, self.n_vertices = number(vuf, 4 * n)
        eflat, self.n_edges = number(euf, 6 * n)
        fflat, self.n_faces = number(fuf, 4 * n)
        self._vc = tuple(tuple(vflat[4 * t:4 * t + 4]) for t in range(n))
        self._ec = tuple(tuple(eflat[6 * t:6 * t + 6]) for t in range(n))
        self._fc = tuple(tuple(fflat[4 * t:4 * t + 4]) for t in range(n))
        self._edge_inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n_edges)]
        for t in range(n):
            for e in range(6):
                self._edge_inc[self._ec[t][e]].append((t, e))
        self._vertex_inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for t in range(n):
            for c in range(4):
                self._vertex_inc[self._vc[t][c]].append((t, c))

    def _check_orientations(self) -> None:
        # the gluing must reverse the boundary orientation of the face
        for g in self.gluings:
            (ta, fa), (tb, fb) = g.a, g.b
            cmap = {i: j for i, j in g.corner_map}
            images = [cmap[c] for c in FACE_CORNERS[fa]]
            want = -self.orientations[ta] * self.orientations[tb] \
                * (-1) ** (fa + fb)
            if _perm_sign(images) != want:
                raise NotOrientable(f"gluing {g.a}~{g.b} does not reverse "
                                    "the face orientation")

    def _check_quasi_regular(self) -> None:
        for t in range(len(self.orientations)):
            for e, (a, b) in enumerate(EDGE_CORNERS):
                if self._vc[t][a] == self._vc[t][b]:
                    raise NotQuasiRegular(f"edge ({t}, {e}) is a loop at "
                                          f"vertex {self._vc[t][a]}")

    # -- accessors ---------------------------------------------------

    @property
    def n_tets(self) -> int:
        return len(self.orientations)

    def vertex_class(self, t: int, corner: int) -> int:
        return self._vc[t][corner]

    def edge_class(self, t: int, e: int) -> int:
        return self._ec[t][e]

    def face_class(self, t: int, f: int) -> int:
        return self._fc[t][f]

    def partner(self, t: int, f: int) -> tuple[int, int, dict[int, int]]:
        return self._partner[(t, f)]

    def edge_incidences(self, cls: int) -> list[tuple[int, int]]:
        return list(self._edge_inc[cls])

    def vertex_incidences(self, cls: int) -> list[tuple[int, int]]:
        return list(self._vertex_inc[cls])

    def edge_ends(self, cls: int) -> tuple[int, int]:
        """Endpoint vertex classes of an edge class, as (low id, high id)."""
        t, e = self._edge_inc[cls][0]
        a, b = EDGE_CORNERS[e]
        u, w = self._vc[t][a], self._vc[t][b]
        return (u, w) if u < w else (w, u)

    def with_vertex_ranks(self, ranks) -> "TriComplex":
        return TriComplex(self.orientations, self.gluings, ranks)


# -- documents -------------------------------------------------------


@dataclass(frozen=True)
class Charge:
    """Half-integer edge charges per tetrahedron, stored doubled."""

    doubled: tuple[tuple[int, ...], ...]

    def value(self, t: int, e: int) -> int:
        return self.doubled[t][e]


@dataclass(frozen=True)
class GGauge:
    """A group element per vertex class."""

    values: tuple[GroupElement, ...]


@dataclass(frozen=True)
class Scene:
    """A complex bundled with its link, coloring and charge."""

    complex: TriComplex
    link: frozenset[int]
    coloring: dict[int, GroupElement] | None = None
    charge: Charge | None = None


def load_complex(doc: dict) -> TriComplex:
    """Build and validate the bare complex of a triangulation document."""
    if not isinstance(doc, dict) or "tetrahedra" not in doc:
        raise ParseError("document must be an object with a 'tetrahedra' list")
    try:
        orientations = [int(t["orientation"]) for t in doc["tetrahedra"]]
        gluings = [
            Gluing((int(g["a"][0]), int(g["a"][1])),
                   (int(g["b"][0]), int(g["b"][1])),
                   tuple((int(i), int(j)) for i, j in g["corner_map"]))
            for g in doc.get("gluings", [])
        ]
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    return TriComplex(orientations, gluings)


def load_document(doc: dict) -> Scene:
    """Load a full document: complex, link, optional coloring and charge."""
    T = load_complex(doc)
    link = frozenset(T.edge_class(int(t), int(e)) for t, e in doc.get("link", []))
    coloring = None
    if "coloring" in doc:
        coloring = {}
        for entry in doc["coloring"]:
            try:
                t, e = (int(v) for v in entry["edge"])
                start = int(entry["from_corner"])
                x, y = (float(v) for v in entry["g"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed coloring entry: {exc}") from exc
            a, b = EDGE_CORNERS[e]
            if start not in (a, b):
                raise ParseError(f"coloring entry for ({t}, {e}): from_corner "
                                 f"{start} is not an endpoint")
            end = b if start == a else a
            try:
                g = GroupElement(x, y)
            except AlgebraError as exc:
                raise ParseError(str(exc)) from exc
            # canonical storage: color of the edge oriented low id -> high id
            if T.vertex_class(t, start) > T.vertex_class(t, end):
                g = group_inv(g)
            cls = T.edge_class(t, e)
            if cls in coloring and not _group_close(coloring[cls], g):
                raise ParseError(f"conflicting colors for edge class {cls}")
            coloring[cls] = g
        missing = set(range(T.n_edges)) - set(coloring)
        if missing:
            raise ParseError(f"coloring misses edge classes {sorted(missing)}")
        _check_cocycle(T, coloring)
    charge = None
    if "charge" in doc:
        vals = [[None] * 6 for _ in range(T.n_tets)]
        for entry in doc["charge"]:
            t, e, d = int(entry["tet"]), int(entry["edge_index"]), int(entry["doubled"])
            if not (0 <= t < T.n_tets and 0 <= e < 6):
                raise ParseError(f"charge entry references missing edge ({t}, {e})")
            for slot in (e, OPPOSITE_EDGE[e]):
                if vals[t][slot] is not None and vals[t][slot] != d:
                    raise ParseError(f"conflicting charge at ({t}, {slot})")
                vals[t][slot] = d
        for t, row in enumerate(vals):
            if any(v is None for v in row):
                raise ParseError(f"charge misses edges of tetrahedron {t}")
        charge = Charge(tuple(tuple(row) for row in vals))
    return Scene(T, link, coloring, charge)


def scene_document(scene: Scene) -> dict:
    """Serialize a scene back to the document format (canonical layout)."""
    T = scene.complex
    doc: dict = {
        "tetrahedra": [{"orientation": o} for o in T.orientations],
        "gluings": [
            {"a": list(g.a), "b": list(g.b),
             "corner_map": [list(p) for p in sorted(g.corner_map)]}
            for g in T.gluings
        ],
    }
    if scene.link:
        reps = []
        for cls in sorted(scene.link):
            reps.append(list(T.edge_incidences(cls)[0]))
        doc["link"] = reps
    if scene.coloring is not None:
        entries = []
        for cls in sorted(scene.coloring):
            t, e = T.edge_incidences(cls)[0]
            a, b = EDGE_CORNERS[e]
            lo, _ = T.edge_ends(cls)
            start = a if T.vertex_class(t, a) == lo else b
            g = scene.coloring[cls]
            entries.append({"edge": [t, e], "from_corner": start,
                            "g": [g.x, g.y]})
        doc["coloring"] = entries
    if scene.charge is not None:
        entries = []
        for t in range(T.n_tets):
            for e in _PAIR_REPS:
                entries.append({"tet": t, "edge_index": e,
                                "doubled": scene.charge.doubled[t][e]})
        doc["charge"] = entries
    return doc


def save_document(scene: Scene, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_document(scene), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _group_close(a: GroupElement, b: GroupElement, tol: float = 1e-10) -> bool:
    return abs(a.x - b.x) <= tol * max(1.0, abs(a.x)) \
        and abs(a.y - b.y) <= tol * max(1.0, abs(a.y))


def _check_cocycle(T: TriComplex, coloring: dict[int, GroupElement],
                   tol: float = 1e-10) -> None:
    for t in range(T.n_tets):
        for f in range(4):
            a, b, c = FACE_CORNERS[f]
            g_ab = color_of(T, coloring, t, a, b)
            g_bc = color_of(T, coloring, t, b, c)
            g_ac = color_of(T, coloring, t, a, c)
            prod = group_mul(g_ab, g_bc)
            if not _group_close(prod, g_ac, tol):
                raise BadColoring(f"face ({t}, {f}): edge colors do not "
                                  "satisfy the cocycle condition")


def color_of(T: TriComplex, coloring: dict[int, GroupElement],
             t: int, c_from: int, c_to: int) -> GroupElement:
    """Color of the oriented edge of a tetrahedron given by two corners."""
    cls = T.edge_class(t, _EDGE_INDEX[(c_from, c_to)])
    g = coloring[cls]
    lo, _ = T.edge_ends(cls)
    if T.vertex_class(t, c_from) == lo:
        return g
    return group_inv(g)


# -- links and charges ----------------------------------------------


def validate_link(T: TriComplex, link: frozenset[int]) -> None:
    """Check the Hamiltonian condition: every vertex on exactly two link edges."""
    degree = [0] * T.n_vertices
    for cls in link:
        if not (0 <= cls < T.n_edges):
            raise NotHamiltonian(f"unknown edge class {cls}")
        u, w = T.edge_ends(cls)
        degree[u] += 1
        degree[w] += 1
    for v, d in enumerate(degree):
        if d != 2:
            raise NotHamiltonian(f"vertex {v} lies on {d} link edges, not 2")


def _edge_target(link: frozenset[int], cls: int) -> int:
    return 0 if cls in link else 2


def _smith_solve(rows: list[list[int]], rhs: list[int],
                 nvars: int) -> tuple[list[int], list[list[int]]] | None:
    """Solve an integer linear system; return (particular, kernel basis).

    Diagonalizes by elementary row and column operations over the
    integers, tracking column operations to map back to the original
    variables.  Returns None when no integral solution exists.
    """
    A = [row[:] for row in rows]
    b = list(rhs)
    m = len(A)
    V = [[1 if i == j else 0 for j in range(nvars)] for i in range(nvars)]

    def row_op(i, k, q):  # row_i -= q * row_k
        A[i] = [x - q * y for x, y in zip(A[i], A[k])]
        b[i] -= q * b[k]

    def col_op(j, k, q):  # col_j -= q * col_k
        for r in range(m):
            A[r][j] -= q * A[r][k]
        for r in range(nvars):
            V[r][j] -= q * V[r][k]

    rank = 0
    for k in range(min(m, nvars)):
        # pick the smallest nonzero pivot at or beyond (k, k)
        best = None
        for i in range(k, m):
            for j in range(k, nvars):
                if A[i][j] != 0 and (best is None
                                     or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[k], A[i] = A[i], A[k]
        b[k], b[i] = b[i], b[k]
        if j != k:
            for r in range(m):
                A[r][k], A[r][j] = A[r][j], A[r][k]
            for r in range(nvars):
                V[r][k], V[r][j] = V[r][j], V[r][k]
        while True:
            dirty = False
            for i in range(k + 1, m):
                if A[i][k]:
                    q = A[i][k] // A[k][k]
                    row_op(i, k, q)
                    if A[i][k]:
                        A[k], A[i] = A[i], A[k]
                        b[k], b[i] = b[i], b[k]
                        dirty = True
            for j in range(k + 1, nvars):
                if A[k][j]:
                    q = A[k][j] // A[k][k]
                    col_op(j, k, q)
                    if A[k][j]:
                        for r in range(m):
                            A[r][k], A[r][j] = A[r][j], A[r][k]
                        for r in range(nvars):
                            V[r][k], V[r][j] = V[r][j], V[r][k]
                        dirty = True
            if not dirty:
                break
        rank += 1
    y = [0] * nvars
    for k in range(rank):
        if b[k] % A[k][k]:
            return None
        y[k] = b[k] // A[k][k]
    for k in range(rank, m):
        if b[k]:
            return None
    x = [sum(V[r][j] * y[j] for j in range(nvars)) for r in range(nvars)]
    kernel = [[V[r][j] for r in range(nvars)] for j in range(rank, nvars)]
    return x, kernel


def _charge_rows(T: TriComplex, link: frozenset[int], tets: list[int],
                 fixed: dict[int, int] | None = None):
    """Rows of the doubled charge system over the pair variables of ``tets``.

    ``fixed`` maps a tetrahedron to known doubled values (6-slot rows) for
    tetrahedra outside ``tets``; their contributions move to the right side.
    """
    var_of = {(t, p): 3 * i + p for i, t in enumerate(tets) for p in range(3)}
    rows, rhs = [], []
    for t in tets:
        row = [0] * (3 * len(tets))
        for p in range(3):
            row[var_of[(t, p)]] = 1
        rows.append(row)
        rhs.append(1)
    touched = sorted({T.edge_class(t, e) for t in tets for e in range(6)})
    for cls in touched:
        row = [0] * (3 * len(tets))
        target = _edge_target(link, cls)
        for (t, e) in T.edge_incidences(cls):
            if (t, _PAIR_OF_EDGE[e]) in var_of:
                row[var_of[(t, _PAIR_OF_EDGE[e])]] += 1
            else:
                target -= fixed[t][e]
        rows.append(row)
        rhs.append(target)
    return rows, rhs, var_of


def find_charge(T: TriComplex, link: frozenset[int]) -> Charge:
    """Solve the global charge system; any integral solution is returned."""
    validate_link(T, link)
    tets = list(range(T.n_tets))
    rows, rhs, _ = _charge_rows(T, link, tets)
    sol = _smith_solve(rows, rhs, 3 * T.n_tets)
    if sol is None:
        raise NoCharge("the charge system has no half-integer solution")
    x, _ = sol
    doubled = tuple(
        tuple(x[3 * t + _PAIR_OF_EDGE[e]] for e in range(6))
        for t in range(T.n_tets)
    )
    charge = Charge(doubled)
    validate_charge(T, link, charge)
    return charge


def validate_charge(T: TriComplex, link: frozenset[int], c: Charge) -> None:
    if len(c.doubled) != T.n_tets or any(len(r) != 6 for r in c.doubled):
        raise BadCharge("charge shape does not match the complex")
    for t, row in enumerate(c.doubled):
        for e in range(6):
            if row[e] != row[OPPOSITE_EDGE[e]]:
                raise BadCharge(f"tetrahedron {t}: opposite edges {e}, "
                                f"{OPPOSITE_EDGE[e]} carry different charges")
        if row[0] + row[1] + row[2] != 1:
            raise BadCharge(f"tetrahedron {t}: face sum is not 1/2")
    for cls in range(T.n_edges):
        total = sum(c.doubled[t][e] for t, e in T.edge_incidences(cls))
        if total != _edge_target(link, cls):
            raise BadCharge(f"edge class {cls}: incidence sum {total}/2, "
                            f"expected {_edge_target(link, cls)}/2")


def _edge_walk(T: TriComplex, t0: int, e0: int):
    """Walk once around an edge in the positive direction.

    Yields one step per incidence: (tet, edge slot, low corner, top corner,
    exit face, third corner of the exit face).  The top corner is the one
    over the higher-ranked endpoint; positivity follows the manifold
    orientation around the edge directed towards that endpoint.
    """
    a, b = EDGE_CORNERS[e0]
    ra = T.vertex_rank[T.vertex_class(t0, a)]
    rb = T.vertex_rank[T.vertex_class(t0, b)]
    p, q = (a, b) if ra < rb else (b, a)
    t, s = t0, e0
    steps = []
    while True:
        c, d = EDGE_CORNERS[OPPOSITE_EDGE[s]]
        if _perm_sign((p, q, c, d)) * T.orientations[t] > 0:
            r_from, r_to = c, d     # rotation carries c towards d
        else:
            r_from, r_to = d, c
        steps.append((t, s, p, q, r_from, r_to))
        t2, _, cmap = T.partner(t, r_from)
        p2, q2 = cmap[p], cmap[q]
        t, s, p, q = t2, _EDGE_INDEX[(p2, q2)], p2, q2
        if (t, s) == (t0, e0):
            break
        if len(steps) > 6 * T.n_tets:
            raise TopologyError("edge walk failed to close")
    if len(steps) != len(T.edge_incidences(T.edge_class(t0, e0))):
        raise TopologyError("edge walk does not cover the edge class")
    return steps


def deform_charge(T: TriComplex, link: frozenset[int], c: Charge,
                  edge_cls: int) -> Charge:
    """Add the elementary deformation of one edge class to a charge.

    Walking around the edge in the positive direction, each crossed face
    contributes +1/2 on the near side and -1/2 on the far side to the
    edge of that face which joins the top endpoint to the equator; the
    deformation preserves every charge constraint and the mod-2 class.
    """
    t0, e0 = T.edge_incidences(edge_cls)[0]
    delta = [[0] * 6 for _ in range(T.n_tets)]

    def bump(t, slot, amount):
        delta[t][slot] += amount
        delta[t][OPPOSITE_EDGE[slot]] += amount

    for (t, s, p, q, r_from, r_to) in _edge_walk(T, t0, e0):
        e_i = _EDGE_INDEX[(q, r_to)]
        bump(t, e_i, +1)
        t2, _, cmap = T.partner(t, r_from)
        bump(t2, _EDGE_INDEX[(cmap[q], cmap[r_to])], -1)
    out = Charge(tuple(
        tuple(c.doubled[t][e] + delta[t][e] for e in range(6))
        for t in range(T.n_tets)
    ))
    validate_charge(T, link, out)
    return out


def charge_class(T: TriComplex, c: Charge,
                 loop: list[tuple[int, int, int]]) -> int:
    """Mod-2 class of a charge on a loop of tetrahedron passages.

    ``loop`` lists (tetrahedron, entering face, departing face); each
    consecutive pair must be glued, and the loop must close up.
    """
    if not loop:
        raise BadLoop("empty loop")
    total = 0
    for idx, (t, f_in, f_out) in enumerate(loop):
        if f_in == f_out:
            raise BadLoop(f"passage {idx} exits through the entering face")
        if not (0 <= t < T.n_tets and 0 <= f_in < 4 and 0 <= f_out < 4):
            raise BadLoop(f"passage {idx} references missing cells")
        t_next, f_next, _ = T.partner(t, f_out)
        want = loop[(idx + 1) % len(loop)]
        if (t_next, f_next) != (want[0], want[1]):
            raise BadLoop(f"passages {idx} and {idx + 1} are not glued")
        common = [c2 for c2 in range(4) if c2 not in (f_in, f_out)]
        total += c.doubled[t][_EDGE_INDEX[tuple(common)]]
    return total % 2


# -- moves -----------------------------------------------------------


def _sorted_tags(T: TriComplex, tag_class: dict, tags, extra_rank=None):
    """Order corner tags by vertex rank (new vertices rank last)."""
    def rank(tag):
        cls = tag_class[tag]
        return T.vertex_rank[cls] if cls is not None else extra_rank
    return tuple(sorted(tags, key=rank))


def _transport_coloring(T_old, coloring, T_new, slot_corr, vertex_corr,
                        new_colors):
    """Carry edge colors across a move.

    ``slot_corr`` maps old (tet, edge) slots to new slots for all
    surviving incidences; ``new_colors`` provides colors for genuinely
    new edge classes, keyed by new slot, oriented low -> high new id.
    """
    if coloring is None:
        return None
    out: dict[int, GroupElement] = {}
    for cls, g in coloring.items():
        for (t, e) in T_old.edge_incidences(cls):
            if (t, e) not in slot_corr:
                continue
            t2, e2 = slot_corr[(t, e)]
            cls2 = T_new.edge_class(t2, e2)
            lo_old, _ = T_old.edge_ends(cls)
            lo_new, _ = T_new.edge_ends(cls2)
            g2 = g if vertex_corr[lo_old] == lo_new else group_inv(g)
            out[cls2] = g2
            break
    for (t2, e2), g in new_colors.items():
        out[T_new.edge_class(t2, e2)] = g
    missing = set(range(T_new.n_edges)) - set(out)
    if missing:
        raise TopologyError(f"coloring transport missed classes {sorted(missing)}")
    _check_cocycle(T_new, out)
    return out


def _transport_charge(T_new, link_new, old_charge, kept_charge_rows,
                      new_tets: list[int]) -> Charge:
    """Charges for the tetrahedra created by a move.

    Solves the local doubled system (tetrahedron sums plus incidence sums
    of every touched edge class, with surviving charges fixed) and picks
    the minimal-norm integral solution, ties broken lexicographically
    over (tetrahedron, edge) doubled values.
    """
    if old_charge is None:
        return None
    if not new_tets:
        return Charge(tuple(tuple(r) for r in kept_charge_rows))
    rows, rhs, _ = _charge_rows(T_new, link_new, new_tets,
                                fixed={t: r for t, r in enumerate(kept_charge_rows)
                                       if r is not None})
    sol = _smith_solve(rows, rhs, 3 * len(new_tets))
    if sol is None:
        raise NoCharge("charge transport system is inconsistent")
    x0, kernel = sol

    def expand(x):
        rows6 = list(list(r) if r is not None else None for r in kept_charge_rows)
        for i, t in enumerate(new_tets):
            rows6[t] = [x[3 * i + _PAIR_OF_EDGE[e]] for e in range(6)]
        return rows6

    best = None
    if kernel and len(kernel) <= 4:
        K = np.array(kernel, dtype=float).T
        lam, *_ = np.linalg.lstsq(K, -np.array(x0, dtype=float), rcond=None)
        grids = [range(int(np.floor(v)) - 1, int(np.ceil(v)) + 2) for v in lam]
        for combo in itertools.product(*grids):
            x = [x0[j] + sum(c * kernel[i][j] for i, c in enumerate(combo))
                 for j in range(len(x0))]
            flat = tuple(v for row in expand(x) for v in row)
            key = (sum(v * v for v in flat), flat)
            if best is None or key < best[0]:
                best = (key, x)
        x0 = best[1]
    out = Charge(tuple(tuple(r) for r in expand(x0)))
    validate_charge(T_new, link_new, out)
    return out


def _remap_gluings(T, removed: set[int], keep_index: dict[int, int],
                   face_map: dict, skip: set) -> list[Gluing]:
    """Re-point old gluings through a move's face replacement map.

    ``face_map`` sends removed (tet, face) sides to (new tet, new face,
    corner translation); gluings entirely interior to the move (listed in
    ``skip``) are dropped.
    """
    out = []
    for g in T.gluings:
        if g.a in skip or g.b in skip:
            continue
        sides = []
        cmaps = []
        for side, direction in ((g.a, 0), (g.b, 1)):
            t, f = side
            if t in removed:
                nt, nf, corner_tr = face_map[side]
                sides.append((nt, nf))
                cmaps.append(corner_tr)
            else:
                sides.append((keep_index[t], f))
                cmaps.append({c: c for c in FACE_CORNERS[f]})
        new_map = tuple(sorted(
            (cmaps[0][i], cmaps[1][j]) for i, j in g.corner_map))
        out.append(Gluing(sides[0], sides[1], new_map))
    return out


def _finish_move(T, scene, removed, new_specs, internal_glues, face_map,
                 skip, link_edit, new_colors_by_tag, tag_old_class,
                 new_vertex_tags=(), extern_glues=()):
    """Assemble the complex after a move and transport link, charge, coloring.

    ``new_specs`` is a list of (corner tags, orientation); tags are shared
    between new tetrahedra and identify corners across the move.
    ``tag_old_class`` maps tags to surviving old vertex classes (None for
    vertices created by the move).  ``extern_glues`` attach faces of kept
    tetrahedra directly to new ones (used when a move unglues a face).
    """
    keep = [t for t in range(T.n_tets) if t not in removed]
    keep_index = {t: i for i, t in enumerate(keep)}
    base = len(keep)
    orientations = [T.orientations[t] for t in keep] + \
        [o for _, o in new_specs]
    tag_pos = []
    for idx, (tags, _) in enumerate(new_specs):
        tag_pos.append({tag: i for i, tag in enumerate(tags)})

    # resolve face_map entries given as (spec index, tag of opposite corner)
    resolved = {}
    for old_side, (spec_idx, opp_tag, tag_of_corner) in face_map.items():
        nt = base + spec_idx
        nf = tag_pos[spec_idx][opp_tag]
        corner_tr = {c: tag_pos[spec_idx][tag_of_corner[c]]
                     for c in FACE_CORNERS[old_side[1]]}
        resolved[old_side] = (nt, nf, corner_tr)

    gluings = _remap_gluings(T, removed, keep_index, resolved, skip)
    for (ia, ta_opp), (ib, tb_opp) in internal_glues:
        ta, tb = base + ia, base + ib
        fa, fb = tag_pos[ia][ta_opp], tag_pos[ib][tb_opp]
        shared = [tag for tag in new_specs[ia][0] if tag != ta_opp]
        cmap = tuple(sorted((tag_pos[ia][tag], tag_pos[ib][tag])
                            for tag in shared))
        gluings.append(Gluing((ta, fa), (tb, fb), cmap))
    for (old_t, old_f), spec_idx, opp_tag, tag_of_corner in extern_glues:
        nt, nf = base + spec_idx, tag_pos[spec_idx][opp_tag]
        cmap = tuple(sorted(
            (c, tag_pos[spec_idx][tag_of_corner[c]])
            for c in FACE_CORNERS[old_f]))
        gluings.append(Gluing((keep_index[old_t], old_f), (nt, nf), cmap))

    T_new = TriComplex(orientations, gluings)

    # vertex rank transport: surviving classes keep their relative order,
    # new vertices rank last in tag order
    vertex_corr = {}
    for t in keep:
        for c2 in range(4):
            vertex_corr[T.vertex_class(t, c2)] = \
                T_new.vertex_class(keep_index[t], c2)
    tag_vertex = {}
    for spec_idx, (tags, _) in enumerate(new_specs):
        for i, tag in enumerate(tags):
            tag_vertex[tag] = T_new.vertex_class(base + spec_idx, i)
            old_cls = tag_old_class.get(tag)
            if old_cls is not None:
                vertex_corr[old_cls] = tag_vertex[tag]
    old_sorted = sorted(vertex_corr, key=lambda v: T.vertex_rank[v])
    ranks = [0] * T_new.n_vertices
    nxt = 0
    for v in old_sorted:
        ranks[vertex_corr[v]] = nxt
        nxt += 1
    for tag in new_vertex_tags:
        ranks[tag_vertex[tag]] = nxt
        nxt += 1
    if nxt != T_new.n_vertices:
        raise TopologyError("vertex bookkeeping failed during the move")
    T_new = T_new.with_vertex_ranks(ranks)

    # slot correspondence for surviving old edges
    slot_corr = {}
    for t in keep:
        for e in range(6):
            slot_corr[(t, e)] = (keep_index[t], e)
    for old_side, (nt, nf, corner_tr) in resolved.items():
        t, f = old_side
        for ca, cb in itertools.combinations(FACE_CORNERS[f], 2):
            slot_corr[(t, _EDGE_INDEX[(ca, cb)])] = \
                (nt, _EDGE_INDEX[(corner_tr[ca], corner_tr[cb])])

    removed_link, added_link_slots = link_edit
    link_new = set()
    for cls in scene.link:
        if cls in removed_link:
            continue
        for (t, e) in T.edge_incidences(cls):
            if (t, e) in slot_corr:
                t2, e2 = slot_corr[(t, e)]
                link_new.add(T_new.edge_class(t2, e2))
                break
        else:
            raise TopologyError(f"link class {cls} lost by the move")
    for spec_idx, tag_a, tag_b in added_link_slots:
        ea = _EDGE_INDEX[(tag_pos[spec_idx][tag_a], tag_pos[spec_idx][tag_b])]
        link_new.add(T_new.edge_class(base + spec_idx, ea))
    link_new = frozenset(link_new)
    validate_link(T_new, link_new)

    new_colors = {}
    for (spec_idx, tag_a, tag_b), g in new_colors_by_tag.items():
        pa, pb = tag_pos[spec_idx][tag_a], tag_pos[spec_idx][tag_b]
        t2 = base + spec_idx
        cls2 = T_new.edge_class(t2, _EDGE_INDEX[(pa, pb)])
        lo, _ = T_new.edge_ends(cls2)
        if T_new.vertex_class(t2, pa) != lo:
            g = group_inv(g)
        new_colors[(t2, _EDGE_INDEX[(pa, pb)])] = g
    coloring_new = _transport_coloring(T, scene.coloring, T_new, slot_corr,
                                       vertex_corr, new_colors)

    kept_rows = [None] * T_new.n_tets
    if scene.charge is not None:
        for t in keep:
            kept_rows[keep_index[t]] = list(scene.charge.doubled[t])
    charge_new = _transport_charge(
        T_new, link_new, scene.charge, kept_rows,
        [base + i for i in range(len(new_specs))])
    return Scene(T_new, link_new, coloring_new, charge_new)


def pachner_plus(scene: Scene, tet: int, face: int) -> Scene:
    """The 2 -> 3 move at a face: replace the two adjacent tetrahedra by
    three around a new interior edge joining the opposite corners."""
    T = scene.complex
    tb, fb, cmap = T.partner(tet, face)
    if tb == tet:
        raise MoveNotApplicable("the face is glued to its own tetrahedron")
    wA = FACE_CORNERS[face]
    if T.vertex_class(tet, face) == T.vertex_class(tb, fb):
        raise MoveNotApplicable("apex vertices coincide; the new edge "
                                "would be a loop")
    # tags: shared face corners named by the first tetrahedron's corners
    w = [("w", c) for c in wA]
    uA, uB = ("uA", face), ("uB", fb)
    tag_class = {("w", c): T.vertex_class(tet, c) for c in wA}
    tag_class[uA] = T.vertex_class(tet, face)
    tag_class[uB] = T.vertex_class(tb, fb)
    o = T.orientations[tet] * _perm_sign((wA[0], face, wA[1], wA[2]))
    o_b = T.orientations[tb] * _perm_sign(
        (cmap[wA[0]], cmap[wA[1]], fb, cmap[wA[2]]))
    if o_b != o:
        raise TopologyError("inconsistent orientations at the glued face")
    raw = [
        ((w[0], uA, w[1], uB), o),   # misses w3
        ((w[0], uA, uB, w[2]), o),   # misses w2
        ((uA, w[1], uB, w[2]), o),   # misses w1
    ]
    specs = []
    for tags, sign in raw:
        s = _sorted_tags(T, tag_class, tags)
        specs.append((s, sign * _perm_sign([tags.index(tag) for tag in s])))
    # external faces: old (tet, corner wA[r]) and its partner-side twin
    # land on the new tetrahedron missing w_r, opposite uB resp. uA
    face_map = {}
    spec_of_missing = {2: 0, 1: 1, 0: 2}
    for r in range(3):
        spec_idx = spec_of_missing[r]
        tag_of = {c: ("w", c) for c in wA if c != wA[r]}
        tag_of[face] = uA
        face_map[(tet, wA[r])] = (spec_idx, uB, tag_of)
        tag_of_b = {cmap[c]: ("w", c) for c in wA if c != wA[r]}
        tag_of_b[fb] = uB
        face_map[(tb, cmap[wA[r]])] = (spec_idx, uA, tag_of_b)
    # interior faces {uA, uB, w_r}: opposite the other two w corners
    internal = [((0, w[1]), (1, w[2])),   # {uA, uB, w1}
                ((0, w[0]), (2, w[2])),   # {uA, uB, w2}
                ((1, w[0]), (2, w[1]))]   # {uA, uB, w3}
    new_colors = {}
    if scene.coloring is not None:
        g = group_mul(color_of(T, scene.coloring, tet, face, wA[0]),
                      color_of(T, scene.coloring, tb, cmap[wA[0]], fb))
        if abs(g.x) < 1e-6 or abs(g.x) / g.y < 1e-6:
            raise AdmissibilityFailed("the induced color of the new edge "
                                      "is out of the regular part")
        new_colors[(0, uA, uB)] = g
    return _finish_move(T, scene, {tet, tb}, specs, internal, face_map,
                        {(tet, face), (tb, fb)}, (set(), []), new_colors,
                        tag_class)


def pachner_minus(scene: Scene, tet: int, edge: int) -> Scene:
    """The 3 -> 2 move at an interior edge of degree three (not in the link)."""
    T = scene.complex
    cls = T.edge_class(tet, edge)
    if cls in scene.link:
        raise MoveNotApplicable("the edge belongs to the link")
    steps = _edge_walk(T, *T.edge_incidences(cls)[0])
    if len(steps) != 3:
        raise MoveNotApplicable(f"edge class {cls} has degree {len(steps)}, "
                                "need exactly 3")
    tets3 = [s[0] for s in steps]
    if len(set(tets3)) != 3:
        raise MoveNotApplicable("the three tetrahedra around the edge "
                                "are not distinct")
    # first step: tet t* covering the sector w_a -> w_b around p -> q
    t0, _, p0, q0, ra0, rb0 = steps[0]
    tag_p, tag_q = ("p",), ("q",)
    # equator tags w_b, w_a, w_c in the model positions w1, w2, w3
    w_cls = [T.vertex_class(steps[0][0], steps[0][5]),   # w_b
             T.vertex_class(steps[0][0], steps[0][4]),   # w_a
             T.vertex_class(steps[1][0], steps[1][5])]   # w_c
    p_cls = T.vertex_class(t0, p0)
    q_cls = T.vertex_class(t0, q0)
    if len({p_cls, q_cls, *w_cls}) != 5:
        raise MoveNotApplicable("equator or apex vertices coincide")
    w_tags = [("w", 0), ("w", 1), ("w", 2)]
    tag_class = {("p",): p_cls, ("q",): q_cls}
    for tag, cls_v in zip(w_tags, w_cls):
        tag_class[tag] = cls_v
    o = T.orientations[t0] * _perm_sign((rb0, p0, ra0, q0))
    raw = [
        ((w_tags[0], tag_p, w_tags[1], w_tags[2]), o),   # apex p
        ((w_tags[0], w_tags[1], tag_q, w_tags[2]), o),   # apex q
    ]
    specs = []
    for tags, sign in raw:
        s = _sorted_tags(T, tag_class, tags)
        specs.append((s, sign * _perm_sign([tags.index(tag) for tag in s])))
    # per walk step i the sector is (w_from -> w_to); the faces of that
    # tetrahedron away from q resp. p survive on the new tetrahedra
    model_w = {}   # vertex class -> w tag
    for tag, cls_v in zip(w_tags, w_cls):
        model_w[cls_v] = tag
    face_map = {}
    skip = set()
    for (t, s, p, q, r_from, r_to) in steps:
        skip.add((t, r_from))
        skip.add(T.partner(t, r_from)[:2])
        tags_of = {}
        for c in range(4):
            if c == p:
                tags_of[c] = tag_p
            elif c == q:
                tags_of[c] = tag_q
            else:
                tags_of[c] = model_w[T.vertex_class(t, c)]
        missing = [tag for tag in w_tags
                   if tag not in (tags_of[r_from], tags_of[r_to])][0]
        face_map[(t, q)] = (0, missing,
                            {c: tags_of[c] for c in FACE_CORNERS[q]})
        face_map[(t, p)] = (1, missing,
                            {c: tags_of[c] for c in FACE_CORNERS[p]})
    internal = [((0, tag_p), (1, tag_q))]
    return _finish_move(T, scene, set(tets3), specs, internal, face_map,
                        skip, (set(), []), {}, tag_class)


def bubble_plus(scene: Scene, tet: int, face: int,
                link_slot: int | None = None) -> Scene:
    """The positive bubble move at a face with a link edge.

    Unglues the face, inserts a two-tetrahedron ball around a new vertex,
    and reroutes the link edge through the new vertex.
    """
    T = scene.complex
    tb, fb, cmap = T.partner(tet, face)
    corners = FACE_CORNERS[face]
    link_slots = [
        _EDGE_INDEX[(a, b)] for a, b in itertools.combinations(corners, 2)
        if T.edge_class(tet, _EDGE_INDEX[(a, b)]) in scene.link
    ]
    if link_slot is None:
        if not link_slots:
            raise MoveNotApplicable("the face has no link edge")
        link_slot = link_slots[0]
    elif link_slot not in link_slots:
        raise MoveNotApplicable(f"edge ({tet}, {link_slot}) is not a link "
                                "edge of the face")
    va, vb = EDGE_CORNERS[link_slot]      # corners of the rerouted edge
    w = {c: ("w", c) for c in corners}
    top = ("new",)
    tag_class = {w[c]: T.vertex_class(tet, c) for c in corners}
    tag_class[top] = None
    s_tags = _sorted_tags(T, tag_class, (w[corners[0]], w[corners[1]],
                                         w[corners[2]], top),
                          extra_rank=T.n_vertices)
    # the new vertex ranks last, so it sits at corner 3 and the face glued
    # back onto (tet, face) is face 3; the parity rule fixes the sign
    images = [s_tags.index(w[c]) for c in corners]
    sign_glued = -_perm_sign(images) * T.orientations[tet] * (-1) ** (face + 3)
    specs = [(s_tags, sign_glued), (s_tags, -sign_glued)]
    extern = [
        ((tet, face), 0, top, {c: w[c] for c in corners}),
        ((tb, fb), 1, top, {cmap[c]: w[c] for c in corners}),
    ]
    internal = [((0, w[c]), (1, w[c])) for c in corners]
    link_removed = {T.edge_class(tet, link_slot)}
    link_added = [(0, w[va], top), (0, w[vb], top)]
    new_colors = {}
    if scene.coloring is not None:
        anchor = corners[0]
        for g_top in _GENERIC_TOPS:
            colors = {}
            ok = True
            for c in corners:
                g = g_top if c == anchor else group_mul(
                    color_of(T, scene.coloring, tet, c, anchor), g_top)
                if abs(g.x) < 1e-6 or abs(g.x) / g.y < 1e-6:
                    ok = False
                    break
                colors[(0, w[c], top)] = g
            if ok:
                new_colors = colors
                break
        else:
            raise AdmissibilityFailed("no admissible color for the new "
                                      "vertex edges")
    return _finish_move(T, scene, set(), specs, internal, {},
                        {(tet, face), (tb, fb)},
                        (link_removed, link_added), new_colors, tag_class,
                        new_vertex_tags=(top,), extern_glues=extern)


_GENERIC_TOPS = tuple(
    GroupElement(x, y) for x, y in
    ((0.6180339887498949, 1.0), (-0.7320508075688772, 1.2),
     (1.4142135623730951, 0.8), (-0.3819660112501051, 1.5),
     (0.2360679774997896, 0.7), (-1.618033988749895, 1.1))
)


def bubble_minus(scene: Scene, vertex: int) -> Scene:
    """The negative bubble move: remove a two-tetrahedron ball around a
    vertex of the link with exactly two incident tetrahedra."""
    T = scene.complex
    inc = T.vertex_incidences(vertex)
    if len(inc) != 2:
        raise MoveNotApplicable(f"vertex {vertex} lies in {len(inc)} "
                                "tetrahedron corners, need exactly 2")
    (t1, c1), (t2, c2) = inc
    if t1 == t2:
        raise MoveNotApplicable("the two corners lie in one tetrahedron")
    for f in range(4):
        if f == c1:
            continue
        if T.partner(t1, f)[0] != t2:
            raise MoveNotApplicable("the ball around the vertex is not "
                                    "two tetrahedra glued along three faces")
    link_at = [cls for cls in scene.link
               if vertex in T.edge_ends(cls)]
    if len(link_at) != 2:
        raise MoveNotApplicable("the vertex does not lie on exactly two "
                                "link edges")
    ends = []
    for cls in link_at:
        u, wv = T.edge_ends(cls)
        ends.append(wv if u == vertex else u)
    if ends[0] == ends[1]:
        raise MoveNotApplicable("the two link edges at the vertex share "
                                "both endpoints")
    # the restored link edge joins the two outer endpoints within t1
    slot_restored = None
    for e, (a, b) in enumerate(EDGE_CORNERS):
        cl = {T.vertex_class(t1, a), T.vertex_class(t1, b)}
        if cl == set(ends):
            slot_restored = e
            break
    if slot_restored is None:
        raise MoveNotApplicable("no edge joining the link endpoints")
    pa, fa, cm_a = T.partner(t1, c1)
    pb, fb, cm_b = T.partner(t2, c2)
    if pa in (t1, t2) or pb in (t1, t2):
        raise MoveNotApplicable("the ball boundary is glued to the ball")
    # compose the corner identification t1 -> t2 through one shared face
    shared = next(f for f in range(4) if f != c1)
    _, _, through = T.partner(t1, shared)
    corr = {c: through[c] for c in range(4) if c not in (c1, shared)}
    # complete over the remaining corner via a second shared face
    shared2 = next(f for f in range(4) if f not in (c1, shared))
    _, _, through2 = T.partner(t1, shared2)
    for c in range(4):
        if c not in (c1, shared2) and c not in corr:
            corr[c] = through2[c]
        elif c in corr and c not in (c1, shared2) \
                and through2[c] != corr[c]:
            raise MoveNotApplicable("inconsistent ball gluings")
    new_map = tuple(sorted(
        (cm_a[c], cm_b[corr[c]]) for c in FACE_CORNERS[c1]))
    keep = [t for t in range(T.n_tets) if t not in (t1, t2)]
    keep_index = {t: i for i, t in enumerate(keep)}
    gluings = []
    handled = set()
    for g in T.gluings:
        if g.a[0] in (t1, t2) or g.b[0] in (t1, t2):
            handled.add(g.a)
            handled.add(g.b)
            continue
        gluings.append(Gluing((keep_index[g.a[0]], g.a[1]),
                              (keep_index[g.b[0]], g.b[1]), g.corner_map))
    gluings.append(Gluing((keep_index[pa], fa), (keep_index[pb], fb), new_map))
    T_new = TriComplex([T.orientations[t] for t in keep], gluings)
    vertex_corr = {}
    for t in keep:
        for c in range(4):
            vertex_corr[T.vertex_class(t, c)] = \
                T_new.vertex_class(keep_index[t], c)
    old_sorted = sorted(vertex_corr, key=lambda v: T.vertex_rank[v])
    ranks = [0] * T_new.n_vertices
    for i, v in enumerate(old_sorted):
        ranks[vertex_corr[v]] = i
    T_new = T_new.with_vertex_ranks(ranks)
    slot_corr = {}
    for t in keep:
        for e in range(6):
            slot_corr[(t, e)] = (keep_index[t], e)
    link_new = set()
    for cls in scene.link:
        if cls in link_at:
            continue
        for (t, e) in T.edge_incidences(cls):
            if (t, e) in slot_corr:
                t2_, e2_ = slot_corr[(t, e)]
                link_new.add(T_new.edge_class(t2_, e2_))
                break
        else:
            raise TopologyError(f"link class {cls} lost by the move")
    t_res, e_res = next(
        (t, e) for (t, e) in T.edge_incidences(T.edge_class(t1, slot_restored))
        if (t, e) in slot_corr)
    rt, re = slot_corr[(t_res, e_res)]
    link_new.add(T_new.edge_class(rt, re))
    link_new = frozenset(link_new)
    validate_link(T_new, link_new)
    coloring_new = _transport_coloring(T, scene.coloring, T_new, slot_corr,
                                       vertex_corr, {})
    charge_new = None
    if scene.charge is not None:
        charge_new = Charge(tuple(tuple(scene.charge.doubled[t]) for t in keep))
        validate_charge(T_new, link_new, charge_new)
    return Scene(T_new, link_new, coloring_new, charge_new)


# -- gauges and admissibility ---------------------------------------


def gauge_transform(T: TriComplex, coloring: dict[int, GroupElement],
                    gauge: GGauge) -> dict[int, GroupElement]:
    """Act on a coloring: conjugate each edge color by the endpoint gauges."""
    out = {}
    for cls, g in coloring.items():
        lo, hi = T.edge_ends(cls)
        out[cls] = group_mul(gauge.values[lo],
                             group_mul(g, group_inv(gauge.values[hi])))
    return out


def point_gauge(T: TriComplex, vertex: int, g: GroupElement) -> GGauge:
    vals = [GroupElement(0.0, 1.0)] * T.n_vertices
    vals[vertex] = g
    return GGauge(tuple(vals))


def random_gauge(T: TriComplex, rng: np.random.Generator) -> GGauge:
    vals = []
    for _ in range(T.n_vertices):
        x = float(rng.uniform(0.2, 1.5) * rng.choice([-1.0, 1.0]))
        y = float(rng.uniform(0.6, 1.6))
        vals.append(GroupElement(x, y))
    return GGauge(tuple(vals))


def is_admissible(coloring: dict[int, GroupElement],
                  margin: float = 1e-6) -> bool:
    """All edge colors (in both orientations) stay in the regular part."""
    for g in coloring.values():
        if abs(g.x) < margin or abs(g.x) / g.y < margin:
            return False
    return True


def make_admissible(T: TriComplex, coloring: dict[int, GroupElement],
                    rng: np.random.Generator, margin: float = 1e-6,
                    budget: int = 100) -> dict[int, GroupElement]:
    """Gauge away bad vertices by random point gauges until admissible."""
    current = dict(coloring)
    for _ in range(budget):
        bad = None
        for cls, g in sorted(current.items()):
            if abs(g.x) < margin or abs(g.x) / g.y < margin:
                bad = T.edge_ends(cls)[0]
                break
        if bad is None:
            return current
        x = float(rng.uniform(0.3, 1.5) * rng.choice([-1.0, 1.0]))
        y = float(rng.uniform(0.6, 1.6))
        current = gauge_transform(T, current,
                                  point_gauge(T, bad, GroupElement(x, y)))
    raise AdmissibilityFailed(f"still inadmissible after {budget} gauges")


def edge_between(T: TriComplex, u: int, w: int) -> int:
    """The unique edge class with endpoint classes {u, w}; errors if not unique."""
    found = [cls for cls in range(T.n_edges)
             if set(T.edge_ends(cls)) == {u, w}]
    if len(found) != 1:
        raise TopologyError(f"{len(found)} edge classes join vertices "
                            f"{u} and {w}")
    return found[0]


def holonomy(T: TriComplex, coloring: dict[int, GroupElement],
             vertices: list[int]) -> GroupElement:
    """Product of edge colors along a closed vertex path (unique edges only)."""
    total = GroupElement(0.0, 1.0)
    n = len(vertices)
    for i in range(n):
        u, w = vertices[i], vertices[(i + 1) % n]
        cls = edge_between(T, u, w)
        g = coloring[cls]
        lo, _ = T.edge_ends(cls)
        total = group_mul(total, g if u == lo else group_inv(g))
    return total
