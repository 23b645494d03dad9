"""Command line interface: verification suites, invariants, moves, reports.

Four verification suites drive the residual identities of the library
modules over a seeded RNG; the remaining subcommands operate on
triangulation documents (JSON).  Exit codes: 0 success, 1 verification
failure, 2 input error.
"""
from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import sys

import numpy as np

from .algebra import (
    AlgebraError, GroupElement, RootData, clock_shift, coords, duality_b,
    duality_d, eps_sign, group_inv, group_mul, intertwiner_S, psi_coeffs,
    psi_coeffs_product, random_admissible_pair, rep_matrices,
)
from .fixtures import boundary4simplex_scene
from .operators import (
    HalfInt, assemble_q, identity_block, op_A, op_A_oracle, op_B, op_B_oracle,
    op_C, op_L, op_R, op_sqrtL, op_word, q_scalar, qtilde,
)
from .sixj import (
    LabelSix, check_charged_inversion, check_charged_pentagon,
    check_symmetry_relations, check_uncharged_symmetries, pentagon_labels,
    sixj_neg, sixj_pos, tbar_tensor, tform_tensor,
)
from .statesum import (
    InvariantError, equal_mod_qtilde, invariant_record, qtilde_order,
    state_sum,
)
from .triangulation import (
    FACE_CORNERS, Scene, TopologyError, _EDGE_INDEX, bubble_minus,
    bubble_plus, deform_charge, find_charge, gauge_transform, is_admissible,
    load_document, make_admissible, pachner_minus, pachner_plus, point_gauge,
    random_gauge, scene_document,
)

__all__ = [
    "main", "run_suite", "suite_algebra", "suite_operators", "suite_sixj",
    "suite_moves", "SUITE_LEVELS",
]

SUITE_LEVELS = ("algebra", "operators", "sixj", "moves")

# default trial counts per level; acceptance runs raise these explicitly
_DEFAULT_TRIALS = {"algebra": 50, "operators": 25, "sixj": 4, "moves": 5}


class _Rows:
    """Accumulates (identity name, worst residual) in first-seen order.

    ``kind`` is "max" for residuals bounded above and "min" for negative
    controls bounded below.
    """

    def __init__(self) -> None:
        self._order: list[str] = []
        self._val: dict[str, float] = {}
        self._bound: dict[str, float] = {}
        self._kind: dict[str, str] = {}

    def rec(self, name: str, value: float, bound: float,
            kind: str = "max") -> None:
        if name not in self._val:
            self._order.append(name)
            self._val[name] = float(value)
            self._bound[name] = float(bound)
            self._kind[name] = kind
            return
        if kind == "max":
            self._val[name] = max(self._val[name], float(value))
        else:
            self._val[name] = min(self._val[name], float(value))

    def rows(self) -> list[tuple[str, float, float, str]]:
        return [(n, self._val[n], self._bound[n], self._kind[n])
                for n in self._order]


def _row_ok(row: tuple[str, float, float, str]) -> bool:
    _, value, bound, kind = row
    return value <= bound if kind == "max" else value >= bound


def _block_diff(f, g) -> float:
    if f.swaps_parts != g.swaps_parts:
        return float("inf")
    return max(float(np.linalg.norm(f.check_mat - g.check_mat)),
               float(np.linalg.norm(f.hat_mat - g.hat_mat)))


def _scalar_split(mat: np.ndarray) -> tuple[complex, float]:
    """Best scalar approximation of a matrix and the off-scalar norm."""
    c = complex(np.trace(mat) / mat.shape[0])
    return c, float(np.linalg.norm(mat - c * np.eye(mat.shape[0])))


def suite_algebra(root: RootData, rng: np.random.Generator, trials: int,
                  tol: float, tol_strict: float) -> list:
    """Coordinate identities, psi oracle, duality zig-zags, intertwiner."""
    N = root.N
    rows = _Rows()
    I_N = np.eye(N)
    X, Y = clock_shift(root)
    E = -np.kron(np.linalg.inv(Y) @ X, Y)

    def psi_of(psis: np.ndarray, M: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(M, dtype=complex)
        P = np.eye(M.shape[0], dtype=complex)
        for m in range(N):
            acc += psis[m] * P
            P = P @ (root.eps * M)
        return acc

    for _ in range(trials):
        g, h = random_admissible_pair(root, rng)
        gh = group_mul(g, h)
        gi = group_inv(g)
        cg, ch, cgh, cgi = (coords(root, e) for e in (g, h, gh, gi))
        rows.rec("u_multiplicative", abs(cgh.u - cg.u * ch.u), tol_strict)
        rows.rec("u_inverse", abs(cgi.u - 1.0 / cg.u), tol_strict)
        rows.rec("v_inverse", abs(cgi.v - eps_sign(root, g) * cg.v / cg.u),
                 tol_strict)

        psis = psi_coeffs(root, g, h)
        rows.rec("psi_product_oracle",
                 float(np.max(np.abs(psis - psi_coeffs_product(root, g, h)))),
                 tol_strict)
        lhs = psi_of(psis, root.omega * E) @ np.linalg.inv(psi_of(psis, E))
        rhs = (cg.v * np.eye(N * N) - cg.u * ch.v * E) / cgh.v
        rows.rec("functional_equation", float(np.linalg.norm(lhs - rhs)), tol)

        S = intertwiner_S(root, g, h)
        Ag, Bg = rep_matrices(root, g)
        Ah, Bh = rep_matrices(root, h)
        Agh, Bgh = rep_matrices(root, gh)
        da = np.kron(Ag, Ah)
        db = np.kron(Ag, Bh) + np.kron(Bg, I_N)
        rows.rec("intertwiner_a",
                 float(np.linalg.norm(da @ S - S @ np.kron(Agh, I_N))), tol)
        rows.rec("intertwiner_b",
                 float(np.linalg.norm(db @ S - S @ np.kron(Bgh, I_N))), tol)

        d_g = duality_d(root, g).reshape(1, -1)
        d_gi = duality_d(root, gi).reshape(1, -1)
        b_g = duality_b(root, g).reshape(-1, 1)
        b_gi = duality_b(root, gi).reshape(-1, 1)
        left = np.kron(I_N, d_gi) @ np.kron(b_g, I_N)
        right = np.kron(d_g, I_N) @ np.kron(I_N, b_gi)
        rows.rec("zigzag_left", float(np.linalg.norm(left - I_N)), tol_strict)
        rows.rec("zigzag_right", float(np.linalg.norm(right - I_N)), tol_strict)
    return rows.rows()


def suite_operators(root: RootData, rng: np.random.Generator, trials: int,
                    tol: float, tol_strict: float) -> list:
    """Block-operator relations: involutions, closed forms, roots, scalars."""
    rows = _Rows()
    for _ in range(trials):
        g, h = random_admissible_pair(root, rng)
        ident = identity_block(root, g, h)
        rows.rec("A_involution",
                 _block_diff(op_word(root, g, h, "A A"), ident), tol)
        rows.rec("B_involution",
                 _block_diff(op_word(root, g, h, "B B"), ident), tol)
        rows.rec("A_vs_oracle",
                 _block_diff(op_A(root, g, h), op_A_oracle(root, g, h)), tol)
        rows.rec("B_vs_oracle",
                 _block_diff(op_B(root, g, h), op_B_oracle(root, g, h)), tol)
        rows.rec("L_from_AstarA",
                 _block_diff(op_word(root, g, h, "A* A"), op_L(root, g, h)),
                 tol)
        rows.rec("R_from_BstarB",
                 _block_diff(op_word(root, g, h, "B* B"), op_R(root, g, h)),
                 tol)
        rows.rec("C_identity", _block_diff(op_C(root, g, h), ident), tol)
        rows.rec("sqrtR_squared",
                 _block_diff(op_word(root, g, h, "sqrtR sqrtR"),
                             op_R(root, g, h)), tol)
        rows.rec("sqrtL_squared",
                 _block_diff(op_word(root, g, h, "sqrtL sqrtL"),
                             op_L(root, g, h)), tol)
        rows.rec("sqrtL_conjugation",
                 _block_diff(op_word(root, g, h, "B A sqrtR^-1 A B"),
                             op_sqrtL(root, g, h)), tol)
        rows.rec("ALA_inverts_L",
                 _block_diff(op_word(root, g, h, "A L A"),
                             op_word(root, g, h, "L^-1")), tol)
        rows.rec("BRB_inverts_R",
                 _block_diff(op_word(root, g, h, "B R B"),
                             op_word(root, g, h, "R^-1")), tol)
        rows.rec("ARA_flips_R",
                 _block_diff(op_word(root, g, h, "A R A"),
                             op_word(root, g, h, "L^-1 R")), tol)
        rows.rec("BLB_flips_L",
                 _block_diff(op_word(root, g, h, "B L B"),
                             op_word(root, g, h, "R^-1 L")), tol)

        Q = assemble_q(root, g, h)
        c_chk, off_chk = _scalar_split(Q.check_mat)
        c_hat, off_hat = _scalar_split(Q.hat_mat)
        rows.rec("q_block_scalar", max(off_chk, off_hat), tol_strict)
        rows.rec("q_check_value", abs(c_chk - q_scalar(root, "check")),
                 tol_strict)
        rows.rec("q_hat_value", abs(c_hat - q_scalar(root, "hat")), tol_strict)
    return rows.rows()


def _random_group_element(rng: np.random.Generator) -> GroupElement:
    x = float(rng.uniform(0.1, 2.0) * rng.choice([-1.0, 1.0]))
    y = float(rng.uniform(0.5, 2.0))
    return GroupElement(x, y)


def _random_label_six(root: RootData, rng: np.random.Generator,
                      margin: float = 0.05) -> LabelSix:
    for _ in range(5000):
        i, j, l = (_random_group_element(rng) for _ in range(3))
        k = group_mul(i, j)
        elems = [i, j, l, k, group_mul(j, l), group_mul(k, l)]
        if min(abs(e.x) for e in elems) < margin:
            continue
        try:
            lab = LabelSix.from_generators(i, j, l)
            tform_tensor(root, lab)
            tbar_tensor(root, lab)
            return lab
        except AlgebraError:
            continue
    raise RuntimeError("no admissible six-tuple of labels found")


def _random_pentagon(root: RootData, rng: np.random.Generator,
                     margin: float = 0.05) -> dict[str, GroupElement]:
    for _ in range(5000):
        jd = pentagon_labels(*(_random_group_element(rng) for _ in range(4)))
        if min(abs(e.x) for e in jd.values()) < margin:
            continue
        try:
            for g1, g2, g3 in (("j1", "j2", "j3"), ("j1", "j", "j4"),
                               ("j2", "j3", "j4"), ("j1", "j2", "j8"),
                               ("j5", "j3", "j4")):
                tform_tensor(
                    root, LabelSix.from_generators(jd[g1], jd[g2], jd[g3]))
            return jd
        except AlgebraError:
            continue
    raise RuntimeError("no admissible pentagon labels found")


def suite_sixj(root: RootData, rng: np.random.Generator, trials: int,
               tol: float, tol_strict: float) -> list:
    """Charged pentagon, inversions, symmetry relations, negative controls."""
    rows = _Rows()
    control_floor = 1e-3
    for trial in range(trials):
        jd = _random_pentagon(root, rng)
        a0, a2, a4, c0, c4 = (int(v) for v in rng.integers(-2, 3, size=5))
        a = tuple(HalfInt(v) for v in
                  (a0, a0 + a2, a2, a2 + a4, a4))
        c = tuple(HalfInt(v) for v in
                  (c0, c0 + a4, c0 + a4 + a0 + c4, a0 + c4, c4))
        rows.rec("pentagon_charged",
                 check_charged_pentagon(root, jd, a, c), tol)
        if trial == 0:
            zero = tuple(HalfInt(0) for _ in range(5))
            rows.rec("pentagon_zero_charge",
                     check_charged_pentagon(root, jd, zero, zero), tol)
            bad_c = c[:2] + (HalfInt(c[2].doubled + 1),) + c[3:]
            rows.rec("control_pentagon_bad_charge",
                     check_charged_pentagon(root, jd, a, bad_c,
                                            skip_constraint_check=True),
                     control_floor, kind="min")

        lab = _random_label_six(root, rng)
        da, dc = (int(v) for v in rng.integers(-3, 4, size=2))
        r1, r2 = check_charged_inversion(root, lab, HalfInt(da), HalfInt(dc))
        rows.rec("inversion_first", r1, tol)
        rows.rec("inversion_second", r2, tol)

        db = int(rng.integers(-3, 4))
        s01, s12, s23 = check_symmetry_relations(
            root, lab, HalfInt(da), HalfInt(db), HalfInt(1 - da - db))
        rows.rec("symmetry_charged_01", s01, tol)
        rows.rec("symmetry_charged_12", s12, tol)
        rows.rec("symmetry_charged_23", s23, tol)

        u01, u12, u23 = check_uncharged_symmetries(root, lab)
        rows.rec("symmetry_uncharged_01", u01, tol)
        rows.rec("symmetry_uncharged_12", u12, tol)
        rows.rec("symmetry_uncharged_23", u23, tol)

        if trial == 0:
            # contraction at non-opposite charges must miss the identity
            pos = sixj_pos(root, lab, HalfInt(1), HalfInt(0)).entries
            neg = sixj_neg(root, lab, HalfInt(-1), HalfInt(1)).entries
            target = np.einsum("ad,bg->abgd", np.eye(root.N), np.eye(root.N))
            got = np.einsum("abnm,mngd->abgd", pos, neg, optimize=True)
            rows.rec("control_inversion_mismatch",
                     float(np.linalg.norm(got - target)),
                     control_floor, kind="min")
    return rows.rows()


def _mod_qtilde_residual(z1: complex, z2: complex,
                         root: RootData) -> tuple[float, int]:
    """Distance from ``z1`` to the qtilde-orbit of ``z2`` and the witness power."""
    best, best_k = abs(z1 - z2), 0
    w = z2
    q = qtilde(root)
    for k in range(1, qtilde_order(root)):
        w *= q
        d = abs(z1 - w)
        if d < best:
            best, best_k = d, k
    return best, best_k


def suite_moves(root: RootData, rng: np.random.Generator, trials: int,
                tol: float, tol_strict: float) -> list:
    """Move and symmetry invariance of the state sum on the shipped fixture."""
    rows = _Rows()
    scene = boundary4simplex_scene()
    T = scene.complex
    K0 = state_sum(root, scene)
    rows.rec("fixture_value_nonzero", abs(K0), 1e-12, kind="min")

    sc = pachner_plus(scene, 0, 0)
    K = state_sum(root, sc)
    rows.rec("pachner_plus_mod_qtilde",
             _mod_qtilde_residual(K, K0, root)[0], tol)

    # collapse the central edge of the freshly added triple
    T2 = sc.complex
    new_tets = {T2.n_tets - 3, T2.n_tets - 2, T2.n_tets - 1}
    central = next(cls for cls in range(T2.n_edges)
                   if {t for t, _ in T2.edge_incidences(cls)} == new_tets)
    t_at, e_at = T2.edge_incidences(central)[0]
    back = pachner_minus(sc, t_at, e_at)
    rows.rec("pachner_roundtrip_mod_qtilde",
             _mod_qtilde_residual(state_sum(root, back), K0, root)[0], tol)

    non_link = next(cls for cls in range(T.n_edges) if cls not in scene.link)
    t_at, e_at = T.edge_incidences(non_link)[0]
    rows.rec("pachner_minus_mod_qtilde",
             _mod_qtilde_residual(
                 state_sum(root, pachner_minus(scene, t_at, e_at)),
                 K0, root)[0], tol)

    tf = next((t, f) for t in range(T.n_tets) for f in range(4)
              if any(T.edge_class(t, _EDGE_INDEX[(a, b)]) in scene.link
                     for a, b in itertools.combinations(FACE_CORNERS[f], 2)))
    blown = bubble_plus(scene, *tf)
    rows.rec("bubble_plus_mod_qtilde",
             _mod_qtilde_residual(state_sum(root, blown), K0, root)[0], tol)
    new_v = max(range(blown.complex.n_vertices),
                key=lambda v: blown.complex.vertex_rank[v])
    rows.rec("bubble_roundtrip_exact",
             abs(state_sum(root, bubble_minus(blown, new_v)) - K0), tol_strict)

    worst = 0.0
    for cls in range(T.n_edges):
        c2 = deform_charge(T, scene.link, scene.charge, cls)
        K = state_sum(root, Scene(T, scene.link, scene.coloring, c2))
        worst = max(worst, _mod_qtilde_residual(K, K0, root)[0])
    rows.rec("charge_deform_mod_qtilde", worst, tol)

    worst = 0.0
    for _ in range(min(trials, 5)):
        perm = [int(v) for v in rng.permutation(T.n_vertices)]
        sc = Scene(T.with_vertex_ranks(perm), scene.link,
                   scene.coloring, scene.charge)
        worst = max(worst, _mod_qtilde_residual(state_sum(root, sc),
                                                K0, root)[0])
    rows.rec("vertex_reorder_mod_qtilde", worst, tol)

    worst = 0.0
    for _ in range(2):
        gauged = gauge_transform(T, scene.coloring, random_gauge(T, rng))
        K = state_sum(root, Scene(T, scene.link, gauged, scene.charge))
        worst = max(worst, abs(K - K0))
    rows.rec("gauge_exact", worst, tol)
    return rows.rows()


_SUITES = {"algebra": suite_algebra, "operators": suite_operators,
           "sixj": suite_sixj, "moves": suite_moves}


def run_suite(level: str, N: int, seed: int, trials: int | None,
              tol: float, tol_strict: float) -> tuple[list, bool]:
    """Runs one verification suite; returns (rows, all_ok)."""
    root = RootData(N)
    rng = np.random.default_rng(seed)
    if trials is None:
        trials = _DEFAULT_TRIALS[level]
    rows = _SUITES[level](root, rng, trials, tol, tol_strict)
    return rows, all(_row_ok(r) for r in rows)


def _print_rows(rows: list) -> None:
    for name, value, bound, kind in rows:
        flag = "ok  " if _row_ok((name, value, bound, kind)) else "FAIL"
        rel = "<=" if kind == "max" else "> "
        print(f"{flag} {name:32s} {value:11.3e}  {rel} {bound:.1e}")


def cmd_verify(args: argparse.Namespace) -> int:
    rows, ok = run_suite(args.level, args.N, args.seed, args.trials,
                         args.tol, args.tol_strict)
    trials = args.trials if args.trials is not None \
        else _DEFAULT_TRIALS[args.level]
    print(f"verify level={args.level} N={args.N} seed={args.seed} "
          f"trials={trials} tol={args.tol:.1e} tol_strict={args.tol_strict:.1e}")
    _print_rows(rows)
    if ok:
        print(f"PASS {len(rows)} identities")
        return 0
    bad = [r[0] for r in rows if not _row_ok(r)]
    print(f"FAIL {len(bad)}/{len(rows)}: " + ", ".join(bad))
    return 1


def _read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit_document(scene: Scene, out: str | None) -> None:
    text = json.dumps(scene_document(scene), sort_keys=True, indent=1)
    if out is None or out == "-":
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _prepare_scene(args: argparse.Namespace) -> Scene:
    scene = load_document(_read_json(args.file))
    if scene.coloring is None:
        raise TopologyError("document has no coloring")
    if not is_admissible(scene.coloring):
        if not getattr(args, "make_admissible", False):
            raise TopologyError(
                "coloring is not admissible (rerun with --make-admissible)")
        rng = np.random.default_rng(args.seed)
        fixed = make_admissible(scene.complex, scene.coloring, rng)
        scene = dataclasses.replace(scene, coloring=fixed)
    if scene.charge is None:
        if not getattr(args, "find_charge", False):
            raise TopologyError(
                "document has no charge (rerun with --find-charge)")
        scene = dataclasses.replace(
            scene, charge=find_charge(scene.complex, scene.link))
    return scene


def cmd_invariant(args: argparse.Namespace) -> int:
    root = RootData(args.N, args.k_root)
    scene = _prepare_scene(args)
    value = state_sum(root, scene)
    print(json.dumps(invariant_record(value, root), sort_keys=True))
    if args.baseline is None:
        return 0
    base = _read_json(args.baseline)
    z_base = complex(base["value"][0], base["value"][1])
    if equal_mod_qtilde(value, z_base, root, tol=args.tol):
        _, k = _mod_qtilde_residual(value, z_base, root)
        print(f"baseline: equal mod qtilde, k={k}")
        return 0
    print("baseline: NOT equal mod qtilde")
    return 1


def _parse_target(raw: str, want: int, label: str) -> tuple[int, ...]:
    parts = raw.split(",")
    if len(parts) != want:
        raise TopologyError(
            f"--target for {label} needs {want} comma-separated integers")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise TopologyError(f"bad --target {raw!r}") from exc


def _check_cell(value: int, limit: int, label: str) -> None:
    if not 0 <= value < limit:
        raise TopologyError(f"{label} {value} out of range [0, {limit})")


def cmd_move(args: argparse.Namespace) -> int:
    scene = load_document(_read_json(args.file))
    T = scene.complex
    if args.kind == "pachner+":
        t, f = _parse_target(args.target, 2, "pachner+ (tet,face)")
        _check_cell(t, T.n_tets, "tet")
        _check_cell(f, 4, "face")
        moved = pachner_plus(scene, t, f)
    elif args.kind == "pachner-":
        t, e = _parse_target(args.target, 2, "pachner- (tet,edge)")
        _check_cell(t, T.n_tets, "tet")
        _check_cell(e, 6, "edge")
        moved = pachner_minus(scene, t, e)
    elif args.kind == "bubble+":
        parts = args.target.split(",")
        if len(parts) == 3:
            t, f, slot = _parse_target(args.target, 3,
                                       "bubble+ (tet,face,slot)")
        else:
            t, f = _parse_target(args.target, 2, "bubble+ (tet,face)")
            slot = None
        _check_cell(t, T.n_tets, "tet")
        _check_cell(f, 4, "face")
        moved = bubble_plus(scene, t, f, slot)
    else:
        (v,) = _parse_target(args.target, 1, "bubble- (vertex)")
        _check_cell(v, T.n_vertices, "vertex")
        moved = bubble_minus(scene, v)
    load_document(scene_document(moved))  # output must revalidate
    _emit_document(moved, args.out)
    return 0


def cmd_find_charge(args: argparse.Namespace) -> int:
    scene = load_document(_read_json(args.file))
    charge = find_charge(scene.complex, scene.link)
    _emit_document(dataclasses.replace(scene, charge=charge), args.out)
    return 0


def cmd_gauge(args: argparse.Namespace) -> int:
    scene = load_document(_read_json(args.file))
    if scene.coloring is None:
        raise TopologyError("document has no coloring to gauge")
    T = scene.complex
    if args.vertex is not None:
        if args.x is None or args.y is None:
            raise TopologyError("point gauge needs --x and --y")
        gauge = point_gauge(T, args.vertex, GroupElement(args.x, args.y))
    else:
        gauge = random_gauge(T, np.random.default_rng(args.seed))
    recolored = gauge_transform(T, scene.coloring, gauge)
    _emit_document(dataclasses.replace(scene, coloring=recolored), args.out)
    return 0


def cmd_canonical(args: argparse.Namespace) -> int:
    doc = _read_json(args.file)
    if "value" in doc:
        root = RootData(int(doc.get("N", args.N)), args.k_root)
        value = complex(doc["value"][0], doc["value"][1])
    else:
        root = RootData(args.N, args.k_root)
        scene = _prepare_scene(
            argparse.Namespace(file=args.file, seed=args.seed,
                               make_admissible=False, find_charge=False))
        value = state_sum(root, scene)
    print(json.dumps(invariant_record(value, root), sort_keys=True))
    return 0


def _add_common(p: argparse.ArgumentParser, n_default: int = 3) -> None:
    p.add_argument("--N", type=int, default=n_default,
                   help=f"root order, odd and >= 3 (default {n_default})")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="residual tolerance (default 1e-8)")
    p.add_argument("--tol-strict", type=float, default=1e-10,
                   help="strict residual tolerance (default 1e-10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclic6j",
        description="Charged 6j-symbol verification suites and the "
                    "state-sum invariant of triangulated 3-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a residual verification suite")
    p.add_argument("--level", required=True, choices=SUITE_LEVELS)
    p.add_argument("--trials", type=int, default=None,
                   help="random draws per identity (level-dependent default)")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invariant",
                       help="compute the invariant of a triangulation document")
    p.add_argument("file", help="triangulation JSON ('-' for stdin)")
    p.add_argument("--k-root", type=int, default=1,
                   help="primitive-root exponent k (default 1)")
    p.add_argument("--baseline",
                   help="result JSON to compare against, mod qtilde powers")
    p.add_argument("--make-admissible", action="store_true",
                   help="gauge away inadmissible edge colors first")
    p.add_argument("--find-charge", action="store_true",
                   help="solve for a charge if the document has none")
    _add_common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("move", help="apply a move to a triangulation document")
    p.add_argument("file")
    p.add_argument("--kind", required=True,
                   choices=("pachner+", "pachner-", "bubble+", "bubble-"))
    p.add_argument("--target", required=True,
                   help="cells: 'tet,face' / 'tet,edge' / 'vertex'")
    p.add_argument("--out", help="output path (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("find-charge",
                       help="solve the charge system and emit the document")
    p.add_argument("file")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_find_charge)

    p = sub.add_parser("gauge", help="apply a gauge transform to the coloring")
    p.add_argument("file")
    p.add_argument("--vertex", type=int,
                   help="vertex class for a point gauge (else a random gauge)")
    p.add_argument("--x", type=float, help="point gauge element, x part")
    p.add_argument("--y", type=float, help="point gauge element, y part")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("canonical",
                       help="canonical representative of an invariant value")
    p.add_argument("file", help="result JSON or triangulation JSON")
    p.add_argument("--k-root", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_canonical)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.N < 3 or args.N % 2 == 0:
        parser.error(f"--N must be odd and >= 3, got {args.N}")
    try:
        return args.func(args)
    except (TopologyError, AlgebraError, InvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON input ({exc})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
