"""Cyclic representations of the quantum Borel algebra at an odd root of unity.

The algebra in question is generated by an invertible element ``a`` and an
element ``b`` with ``ab = w ba`` for a primitive N-th root of unity ``w``
(N odd), with coproduct ``a -> a (x) a`` and ``b -> a (x) b + b (x) 1``.
Its N-dimensional cyclic modules are parametrised by elements of the
``ax+b`` group, i.e. pairs ``(x, y)`` with ``y > 0``, acting through the
clock and shift matrices.  This module provides

* the group arithmetic and the admissibility predicate,
* N-th root coordinates ``(u, v)`` of a group element,
* the ``phi`` phase factors and the ``psi`` coefficient sequence,
* clock/shift matrices, Gauss-sum operators and the tensor-product
  intertwiner ``S`` between ``V_g (x) V_h`` and ``N`` copies of ``V_{gh}``,
* rigid duality pairings and copairings.

Everything is plain numpy; matrices are complex128 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "AlgebraError", "ZeroX", "Resonance", "NearOne", "BadOperands",
    "RootData", "GroupElement", "Coords",
    "group_mul", "group_inv", "in_I", "pair_admissible",
    "coords", "phi", "phi_bar", "psi_coeffs", "psi_coeffs_product",
    "psi_scalar", "nu",
    "clock_shift", "gauss_L", "rep_matrices", "intertwiner_S",
    "duality_d", "duality_b",
    "random_element", "random_admissible_pair",
]


class AlgebraError(ValueError):
    """Base class for domain errors raised by this package."""


class ZeroX(AlgebraError):
    """Group element lies outside the regular part (x coordinate is zero)."""


class Resonance(AlgebraError):
    """A psi denominator is too close to zero for a stable evaluation."""


class NearOne(AlgebraError):
    """Argument of ``nu`` is too close to 1 for a stable evaluation."""


class BadOperands(AlgebraError):
    """Operands violate a precondition of a Gauss-sum construction."""


@dataclass(frozen=True)
class RootData:
    """Root-of-unity context: order ``N`` and primitive root ``w = exp(2 pi i k / N)``.

    ``N`` must be odd and at least 3, ``k`` coprime to ``N``.  The sign
    ``eps`` entering the root-branch convention and the phi factors is
    fixed at -1; that is the only consistent choice for odd ``N`` and is
    therefore not a parameter.
    """

    N: int
    k: int = 1

    def __post_init__(self) -> None:
        if self.N < 3 or self.N % 2 == 0:
            raise BadOperands(f"N must be odd and >= 3, got {self.N}")
        if np.gcd(self.k, self.N) != 1:
            raise BadOperands(f"k must be coprime to N, got k={self.k}, N={self.N}")

    @property
    def eps(self) -> int:
        return -1

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi * self.k / self.N))

    def omega_pow(self, m: int) -> complex:
        """``w**m`` evaluated at the reduced exponent, avoiding drift for large m."""
        return complex(np.exp(2j * np.pi * self.k * (m % self.N) / self.N))

    @property
    def half(self) -> int:
        """The residue (N+1)/2, i.e. the inverse of 2 mod N."""
        return (self.N + 1) // 2


@dataclass(frozen=True)
class GroupElement:
    """Element ``(x, y)`` of the ax+b group, ``y > 0``.

    The product is ``(x, y)(x', y') = (x + y x', y y')`` and the unit is
    ``(0, 1)``.
    """

    x: float
    y: float = 1.0

    def __post_init__(self) -> None:
        if not self.y > 0:
            raise BadOperands(f"group element needs y > 0, got y={self.y}")


UNIT = GroupElement(0.0, 1.0)


def group_mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.x + g.y * h.x, g.y * h.y)


def group_inv(g: GroupElement) -> GroupElement:
    return GroupElement(-g.x / g.y, 1.0 / g.y)


def in_I(g: GroupElement) -> bool:
    """True if ``g`` lies in the regular part (x coordinate nonzero)."""
    return g.x != 0.0


def pair_admissible(g: GroupElement, h: GroupElement) -> bool:
    """True if ``g``, ``h`` and ``gh`` all lie in the regular part."""
    return in_I(g) and in_I(h) and in_I(group_mul(g, h))


@dataclass(frozen=True)
class Coords:
    """N-th root coordinates of a group element.

    ``u = y**(1/N)`` is always positive.  ``v`` is the real N-th root of
    ``x`` on the branch that sends negative ``x`` to a negative root
    (for odd N the real N-th root is unique, and equals
    ``eps * |x|**(1/N)`` for ``x < 0`` with ``eps = -1``).  ``eps_exp``
    records which component of the regular part the element lies in:
    +1 for ``x > 0`` and -1 for ``x < 0``.
    """

    u: float
    v: float
    eps_exp: int


def coords(root: RootData, g: GroupElement) -> Coords:
    if g.x == 0.0:
        raise ZeroX(f"no root coordinates on the singular line, got {g}")
    u = g.y ** (1.0 / root.N)
    if g.x > 0:
        return Coords(u, g.x ** (1.0 / root.N), +1)
    return Coords(u, root.eps * (-g.x) ** (1.0 / root.N), -1)


def eps_sign(root: RootData, g: GroupElement) -> int:
    """The sign ``eps**(+-1)`` attached to ``g`` by its component; -1 for eps=-1."""
    return root.eps ** coords(root, g).eps_exp


def phi(root: RootData, g: GroupElement, m: int) -> complex:
    """Phase factor ``(-eps_g)**m * w**(m(m-1)/2)``, well defined mod N for odd N."""
    s = -eps_sign(root, g)
    expo = (m * (m - 1)) // 2
    return float(s) ** m * root.omega_pow(expo)


def phi_bar(root: RootData, g: GroupElement, m: int) -> complex:
    return 1.0 / phi(root, g, m)


def psi_coeffs(root: RootData, g: GroupElement, h: GroupElement,
               tol: float = 1e-12) -> np.ndarray:
    """Coefficient sequence ``psi_0..psi_{N-1}`` of the pair ``(g, h)``.

    Defined by ``psi_0 = 1`` and the first-order recursion

        psi_m / psi_{m-1} = u_g v_h / (eps * (v_g - v_{gh} w**m)).

    Raises :class:`Resonance` when a denominator magnitude falls below
    ``tol`` (for admissible pairs exact vanishing would force ``x_h = 0``,
    so this only guards near-degenerate input).
    """
    cg = coords(root, g)
    ch = coords(root, h)
    cgh = coords(root, group_mul(g, h))
    out = np.empty(root.N, dtype=complex)
    out[0] = 1.0
    num = cg.u * ch.v / root.eps
    for m in range(1, root.N):
        den = cg.v - cgh.v * root.omega_pow(m)
        if abs(den) < tol:
            raise Resonance(f"psi denominator {abs(den):.3e} below {tol:.1e} at m={m}")
        out[m] = out[m - 1] * num / den
    return out


def psi_coeffs_product(root: RootData, g: GroupElement, h: GroupElement) -> np.ndarray:
    """Closed product form of the psi sequence, used as an independent oracle.

    ``psi_m = (y/z)**m / poch(w x / z, m)`` with ``x = v_{gh}``,
    ``y = u_g v_h / eps``, ``z = v_g`` and
    ``poch(t, m) = prod_{j<m} (1 - t w**j)``.
    """
    cg = coords(root, g)
    ch = coords(root, h)
    cgh = coords(root, group_mul(g, h))
    x, y, z = cgh.v, cg.u * ch.v / root.eps, cg.v
    out = np.empty(root.N, dtype=complex)
    ratio = y / z
    t = root.omega * x / z
    poch = 1.0 + 0.0j
    for m in range(root.N):
        out[m] = ratio ** m / poch
        poch *= 1.0 - t * root.omega_pow(m)
    return out


def psi_scalar(root: RootData, g: GroupElement, h: GroupElement, z: complex) -> complex:
    """``Psi_{g,h}`` evaluated at a scalar argument: ``sum_m psi_m (eps z)**m``."""
    psis = psi_coeffs(root, g, h)
    acc = 0.0 + 0.0j
    t = 1.0 + 0.0j
    for m in range(root.N):
        acc += psis[m] * t
        t *= root.eps * z
    return acc


def nu(root: RootData, x: complex, tol: float = 1e-12) -> complex:
    """The averaged geometric sum ``(1 - x**N) / (N (1 - x))``."""
    if abs(1.0 - x) < tol:
        raise NearOne(f"nu argument within {tol:.1e} of 1")
    return (1.0 - x ** root.N) / (root.N * (1.0 - x))


@lru_cache(maxsize=None)
def _clock_shift_cached(N: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    w = np.exp(2j * np.pi * k * np.arange(N) / N)
    X = np.diag(w)
    Y = np.zeros((N, N), dtype=complex)
    for i in range(N):
        Y[(i + 1) % N, i] = 1.0
    return X, Y


def clock_shift(root: RootData) -> tuple[np.ndarray, np.ndarray]:
    """Clock matrix ``X e_i = w**i e_i`` and shift matrix ``Y e_i = e_{i+1}``."""
    X, Y = _clock_shift_cached(root.N, root.k)
    return X.copy(), Y.copy()


def gauss_L(root: RootData, U: np.ndarray, V: np.ndarray,
            tol: float = 1e-9) -> np.ndarray:
    """Gauss-sum operator ``(1/N) sum_{i,j} w**(ij) U**i V**j``.

    Requires ``U**N = V**N = Id`` and ``UV = VU``; raises
    :class:`BadOperands` otherwise.
    """
    n = U.shape[0]
    eye = np.eye(n)
    if U.shape != V.shape or U.shape[0] != U.shape[1]:
        raise BadOperands("gauss_L needs square operands of equal shape")
    if np.linalg.norm(np.linalg.matrix_power(U, root.N) - eye) > tol \
            or np.linalg.norm(np.linalg.matrix_power(V, root.N) - eye) > tol:
        raise BadOperands("gauss_L operands must have order dividing N")
    if np.linalg.norm(U @ V - V @ U) > tol:
        raise BadOperands("gauss_L operands must commute")
    Ui = [np.linalg.matrix_power(U, i) for i in range(root.N)]
    Vj = [np.linalg.matrix_power(V, j) for j in range(root.N)]
    out = np.zeros_like(U, dtype=complex)
    for i in range(root.N):
        acc = np.zeros_like(U, dtype=complex)
        for j in range(root.N):
            acc += root.omega_pow(i * j) * Vj[j]
        out += Ui[i] @ acc
    return out / root.N


def rep_matrices(root: RootData, g: GroupElement) -> tuple[np.ndarray, np.ndarray]:
    """Action of the generators on ``V_g``: ``a -> u_g X`` and ``b -> v_g Y``."""
    c = coords(root, g)
    X, Y = clock_shift(root)
    return c.u * X, c.v * Y


def intertwiner_S(root: RootData, g: GroupElement, h: GroupElement) -> np.ndarray:
    """The ``N**2 x N**2`` intertwiner identifying ``V_{gh} (x) C^N`` with ``V_g (x) V_h``.

    ``S = Psi(E) . L(Y (x) 1, 1 (x) X)`` with ``E = -(Y^-1 X) (x) Y`` and
    ``Psi(E) = sum_m psi_m (eps E)**m``.  Columns are indexed by
    ``(module index of V_{gh}, multiplicity index)`` in row-major order,
    rows by ``(V_g index, V_h index)``.
    """
    X, Y = clock_shift(root)
    eyeN = np.eye(root.N)
    E = -np.kron(np.linalg.inv(Y) @ X, Y)
    psis = psi_coeffs(root, g, h)
    acc = np.zeros((root.N ** 2, root.N ** 2), dtype=complex)
    Epow = np.eye(root.N ** 2, dtype=complex)
    for m in range(root.N):
        acc += psis[m] * Epow
        Epow = Epow @ (root.eps * E)
    return acc @ gauss_L(root, np.kron(Y, eyeN), np.kron(eyeN, X))


def duality_d(root: RootData, g: GroupElement) -> np.ndarray:
    """Evaluation ``d_g: V_g (x) V_{g^-1} -> C`` as a row vector of length N**2.

    ``d_g(w_i (x) w_j) = phi(g, i)`` when ``i + j = 0 mod N`` and 0 otherwise.
    """
    N = root.N
    row = np.zeros(N * N, dtype=complex)
    for i in range(N):
        row[i * N + ((-i) % N)] = phi(root, g, i)
    return row


def duality_b(root: RootData, g: GroupElement) -> np.ndarray:
    """Coevaluation ``b_g: C -> V_g (x) V_{g^-1}`` as a column vector of length N**2.

    ``b_g(1) = sum_i phi_bar(g^-1, -i) w_i (x) w_{-i}``.
    """
    N = root.N
    gi = group_inv(g)
    col = np.zeros(N * N, dtype=complex)
    for i in range(N):
        col[i * N + ((-i) % N)] = phi_bar(root, gi, -i)
    return col


def random_element(rng: np.random.Generator) -> GroupElement:
    """Draw ``x`` uniform on [-2,-0.1] union [0.1,2] and ``y`` uniform on [0.5,2]."""
    x = rng.uniform(0.1, 2.0) * (1 if rng.random() < 0.5 else -1)
    y = rng.uniform(0.5, 2.0)
    return GroupElement(x, y)


def random_admissible_pair(root: RootData, rng: np.random.Generator,
                           min_x: float = 0.05,
                           max_tries: int = 1000) -> tuple[GroupElement, GroupElement]:
    """Rejection-sample an admissible pair, avoiding near-singular products.

    Rejects draws whose product has ``|x| < min_x`` and draws for which the
    psi recursion reports a resonance.
    """
    for _ in range(max_tries):
        g = random_element(rng)
        h = random_element(rng)
        gh = group_mul(g, h)
        if abs(gh.x) < min_x:
            continue
        try:
            psi_coeffs(root, g, h, tol=1e-6)
        except Resonance:
            continue
        return g, h
    raise AlgebraError("failed to draw an admissible pair within the retry budget")
