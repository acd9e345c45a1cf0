"""Affine geometry of the lightlike leaves.

A leaf carries coordinates ``(v, x_1, ..., x_n)`` where ``v`` runs along the
parallel field ``V`` and the degenerate metric is

    h = -dx_1^2 + dx_2^2 + ... + dx_n^2        (radical R V).

The structural group consists of affine maps whose linear part is

    [[1, b^T],
     [0, A  ]]        with A in O(1, n-1),

so ``V`` is fixed and ``h`` preserved.  In dimension two (``n = 1`` plus the
``v`` direction collapsed) the relevant quotient is Minkowski space
``Mink^{1,1}`` acted on by boosts and translations; we use null coordinates
``u = x + y`` and ``w = x - y``, in which a boost of rapidity ``t`` acts as
``(u, w) -> (e^t u, e^-t w)``.  The lightlike foliation is the family of
``u``-levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .numtheory import DENOMINATOR_BOUND, discrete_subgroup_of_plane

__all__ = [
    "LeafAffineMap",
    "MinkQuotientAction",
    "leaf_metric",
    "boost",
    "leaf_map",
    "heisenberg_unipotent",
    "apply_leaf_map",
    "compose",
    "inverse",
    "preserves_leaf_structure",
    "quad_form_orbit",
    "classify_invariant_open",
    "to_null",
    "from_null",
]

TOL = 1e-10


def leaf_metric(n: int) -> np.ndarray:
    """``diag(0, -1, 1, ..., 1)`` on ``(v, x_1, ..., x_n)``."""
    return np.diag([0.0, -1.0] + [1.0] * (n - 1))


@dataclass(frozen=True, eq=False)
class LeafAffineMap:
    """``x -> linear @ x + translation`` on ``R^{n+1}``."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.linear, dtype=float)
        t = np.asarray(self.translation, dtype=float).reshape(-1)
        if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] != t.shape[0]:
            raise ValueError("linear part must be square and match the translation")
        object.__setattr__(self, "linear", L)
        object.__setattr__(self, "translation", t)

    @property
    def n(self) -> int:
        return self.linear.shape[0] - 1

    def __call__(self, x):
        return apply_leaf_map(self, x)

    def __matmul__(self, other: "LeafAffineMap") -> "LeafAffineMap":
        return compose(self, other)


def boost(theta: float) -> np.ndarray:
    """The 2x2 boost ``[[cosh, sinh], [sinh, cosh]]``."""
    c, s = math.cosh(theta), math.sinh(theta)
    return np.array([[c, s], [s, c]])


def leaf_map(A, b=None, translation=None) -> LeafAffineMap:
    """Assemble ``[[1, b^T], [0, A]]`` with the given translation."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    L = np.eye(n + 1)
    L[0, 1:] = b
    L[1:, 1:] = A
    t = np.zeros(n + 1) if translation is None else translation
    return LeafAffineMap(L, t)


def heisenberg_unipotent(b, translation=None) -> LeafAffineMap:
    """The unipotent map ``(v, x) -> (v + b.x, x)`` (plus translation)."""
    b = np.asarray(b, dtype=float)
    return leaf_map(np.eye(len(b)), b, translation)


def apply_leaf_map(m: LeafAffineMap, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != m.linear.shape[0]:
        raise ValueError("point dimension does not match the map")
    return x @ m.linear.T + m.translation


def compose(m1: LeafAffineMap, m2: LeafAffineMap) -> LeafAffineMap:
    """``m1 ∘ m2``."""
    return LeafAffineMap(m1.linear @ m2.linear, m1.linear @ m2.translation + m1.translation)


def inverse(m: LeafAffineMap) -> LeafAffineMap:
    Li = np.linalg.inv(m.linear)
    return LeafAffineMap(Li, -Li @ m.translation)


def preserves_leaf_structure(m: LeafAffineMap, tol: float = TOL) -> tuple[bool, dict]:
    """Membership in the leaf structural group.

    Checks ``linear^T h linear = h`` and ``linear e_v = e_v`` (the parallel
    direction is fixed, leaving the first row free).
    """
    h = leaf_metric(m.n)
    r_metric = float(np.max(np.abs(m.linear.T @ h @ m.linear - h)))
    e0 = np.zeros(m.n + 1)
    e0[0] = 1.0
    r_field = float(np.max(np.abs(m.linear[:, 0] - e0)))
    ok = r_metric < tol and r_field < tol
    return ok, {"metric": r_metric, "parallel_field": r_field}


# ---------------------------------------------------------------------------
# Minkowski plane quotients
# ---------------------------------------------------------------------------


def quad_form_orbit(map_group: Sequence[float], x) -> float:
    """``x^2 - y^2``, the boost-invariant quadratic form.

    ``map_group`` lists boost rapidities; the value is returned after
    checking invariance along each of them.
    """
    x = np.asarray(x, dtype=float)
    f = float(x[0] ** 2 - x[1] ** 2)
    for th in map_group:
        y = boost(th) @ x
        fy = float(y[0] ** 2 - y[1] ** 2)
        if abs(fy - f) > 1e-9 * max(1.0, abs(f), float(x @ x) * math.cosh(2 * th)):
            raise ArithmeticError("quadratic form not invariant along the boost")
    return f


def to_null(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.stack([p[..., 0] + p[..., 1], p[..., 0] - p[..., 1]], axis=-1)


def from_null(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return np.stack([(q[..., 0] + q[..., 1]) / 2, (q[..., 0] - q[..., 1]) / 2], axis=-1)


@dataclass
class MinkQuotientAction:
    """Generators ``p -> boost(t) p + v`` on ``Mink^{1,1}`` (coordinates ``(x, y)``)."""

    generators: list = field(default_factory=list)

    def __post_init__(self):
        self.generators = [(float(t), np.asarray(v, dtype=float)) for t, v in self.generators]

    def null_generators(self) -> list[tuple[float, np.ndarray]]:
        """The same maps in ``(u, w)``: ``(u, w) -> (e^t u + b_u, e^-t w + b_w)``."""
        return [(t, to_null(v)) for t, v in self.generators]

    def apply(self, i: int, p) -> np.ndarray:
        t, v = self.generators[i]
        return np.asarray(p, dtype=float) @ boost(t).T + v

    def preserves_foliation(self, tol: float = 1e-12) -> bool:
        """Each generator maps ``u``-levels to ``u``-levels."""
        for t, _ in self.generators:
            M = boost(t)
            # d u' / d w must vanish: u' depends on (x + y) only
            du = np.array([1.0, 1.0]) @ M
            if abs(du[0] - du[1]) > tol * max(1.0, abs(du[0])):
                return False
        return True


def _null_translation_part(gens: list[tuple[float, np.ndarray]]) -> list[np.ndarray]:
    """Translations in the group, found from generators, commutators and conjugates."""

    def mul(g, h):
        return g[0] + h[0], g[1] + np.array([math.exp(g[0]), math.exp(-g[0])]) * h[1]

    def inv(g):
        return -g[0], -np.array([math.exp(-g[0]), math.exp(g[0])]) * g[1]

    W = [v for t, v in gens if abs(t) <= 1e-12]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = mul(mul(gens[i], gens[j]), mul(inv(gens[i]), inv(gens[j])))
            W.append(c[1])
    base = list(W)
    for t, _ in gens:
        if abs(t) > 1e-12:
            for k in (1, -1, 2, -2):
                W += [np.array([math.exp(k * t), math.exp(-k * t)]) * w for w in base]
    return [w for w in W if np.linalg.norm(w) > 1e-12]


def classify_invariant_open(action: MinkQuotientAction, seed_point, bound: int = DENOMINATOR_BOUND,
                            tol: float = 1e-9) -> tuple[str, dict]:
    """The smallest invariant open set through ``seed_point``, up to closure.

    In null coordinates the generators induce affine maps ``u -> e^t u + b``
    on the leaf space ``R = Mink / L``.  If these share a fixed point ``c``
    the orbit of ``u(seed)`` stays in one of the open rays bounded by ``c``,
    giving a half plane bounded by the lightlike line ``u = c``; otherwise
    the orbit is dense in ``R`` and the answer is the whole plane.

    Requires a boost generator and a non-discrete translation subgroup,
    otherwise the verdict is ``inconclusive`` with a reason.
    """
    gens = action.null_generators()
    info: dict = {}
    if not any(abs(t) > 1e-12 for t, _ in gens):
        info["reason"] = "no generator with nontrivial SO°(1,1) part"
        return "inconclusive", info
    W = _null_translation_part(gens)
    discrete, rank = discrete_subgroup_of_plane(W, bound, tol) if W else (True, 0)
    info["translation_rank"] = rank
    if discrete:
        info["reason"] = "translation subgroup is discrete"
        return "inconclusive", info
    if not action.preserves_foliation():
        info["reason"] = "lightlike foliation not preserved"
        return "inconclusive", info
    u0 = float(to_null(seed_point)[0])
    c = None
    fixed = True
    for t, v in gens:
        b = float(v[0])
        if abs(t) <= 1e-12:
            if abs(b) > tol:
                fixed = False
                break
            continue
        ci = b / (1.0 - math.exp(t))
        if c is None:
            c = ci
        elif abs(ci - c) > tol * max(1.0, abs(c)):
            fixed = False
            break
    if not fixed:
        info["reason"] = "induced affine maps on the leaf space have no common fixed point"
        return "full_minkowski", info
    info["boundary_u"] = c
    if abs(u0 - c) <= tol * max(1.0, abs(c)):
        info["reason"] = "seed lies on the invariant lightlike line"
        return "inconclusive", info
    info["side"] = "u > c" if u0 > c else "u < c"
    return "half_minkowski", info
