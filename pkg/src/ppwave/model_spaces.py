"""Homogeneous pp-wave model spaces ``X = G / A^+``.

The transvection group is ``G = R L ⋉ Heis_{2n+1}`` with ``L`` acting on
``a = a^+ ⊕ a^-`` by the derivation ``D`` (which swaps ``a^+`` and ``a^-``)
and with center ``R V``.  The isotropy of the base point ``o`` is the abelian
group ``A^+ = exp(a^+)``.

Points are stored through the canonical section

    sigma(l, a, v) = exp(l L) exp(a) exp(v V),      a in a^-,

so a :class:`ModelPoint` is the coordinate triple ``(l, a, v)``.  In these
coordinates the metric reads

    g = 2 dl dv - omega(a, D a) dl^2 + B(da, da),   B(x, y) = omega(D^{-1} x, y),

and the parallel null field is ``V = d/dv``.  ``l`` is the leaf function.

Tangent vectors are given by their components in ``g^- = R L ⊕ a^- ⊕ R V``,
ordered ``(L, a^-_1, ..., a^-_n, V)``, and are read at ``p`` through
``sigma(p)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ._exact import as_array, as_fraction_array, is_exact
from .groups import IsomElement, OscElement, SemidirectGroup, ambient_group
from .lie_core import (
    BilinearForm,
    LieAlgebra,
    SymmetricTriple,
    TransvectionReport,
    analyze_symmetric_triple,
    derivation_elliptic,
    derivation_hyperbolic,
    heis_omega,
    transvection_algebra,
    transvection_form,
    transvection_involution,
)

__all__ = [
    "ModelSpace",
    "ModelPoint",
    "TangentVector",
    "LeafData",
    "model_space",
    "act",
    "metric_at",
    "geodesic",
    "geodesic_trace",
    "geodesic_velocity",
    "body_metric",
    "leaf_function",
    "leaf_data",
    "curvature_triple",
    "stabilizer_heis",
    "p_s",
    "embed_osc",
    "isometry_differential",
    "OSC_X",
    "OSC_Y",
]

#: images of the oscillator generators X and Y in a = span(a1..a4) for X_H;
#: they are eigenvectors of L_{1,0} for +1 and -1 with omega(X, Y) = 1
OSC_X = np.array([0.5, 0.5, -0.5, 0.5])
OSC_Y = np.array([0.5, -0.5, 0.5, 0.5])


@dataclass(frozen=True, eq=False)
class ModelPoint:
    """Coset ``sigma(l, a, v) A^+``."""

    ell: float
    a: np.ndarray
    v: float

    def __post_init__(self):
        object.__setattr__(self, "ell", float(self.ell))
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(-1))
        object.__setattr__(self, "v", float(self.v))

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([[self.ell], self.a, [self.v]])

    @classmethod
    def from_coords(cls, x) -> "ModelPoint":
        x = np.asarray(x, dtype=float)
        return cls(x[0], x[1:-1], x[-1])

    def allclose(self, other: "ModelPoint", tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.coords - other.coords)) < tol)


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: ModelPoint
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))


@dataclass(frozen=True, eq=False)
class LeafData:
    """Value of the leaf function and the degenerate metric on the leaf.

    ``h`` is written in the leaf coordinates ``(v, a^-_1, ..., a^-_n)``; its
    radical is the ``v`` axis, i.e. ``R V``.
    """

    leaf_value: float
    h: np.ndarray


@dataclass(eq=False)
class ModelSpace:
    """A transvection model with its group, algebra and metric data.

    Attributes
    ----------
    flavor : {"H", "E", "generic"}
    n : int
        Half-dimension of ``a``; ``dim X = n + 2`` and the signature is
        ``(2, n)``.
    D : ndarray
        ``ad_L`` on ``a`` in a basis ``(a^+_1..a^+_n, a^-_1..a^-_n)``.
    omega : ndarray
        Symplectic form on ``a`` in the same basis.
    triple, V :
        The symmetric triple and center vector the model was built from.
    algebra_L, algebra_a_minus :
        Coordinates of ``L`` and of the ``a^-`` basis in ``triple.algebra``.
    """

    flavor: str
    n: int
    D: np.ndarray
    omega: np.ndarray
    triple: SymmetricTriple
    V: np.ndarray
    algebra_L: np.ndarray
    algebra_a_minus: np.ndarray
    report: TransvectionReport | None = None
    group: SemidirectGroup = field(init=False)

    def __post_init__(self):
        self.group = SemidirectGroup([np.asarray(self.D, dtype=float)], self.omega)
        self._Df = np.asarray(self.D, dtype=float)
        self._J = np.asarray(self.omega, dtype=float)
        Ba = np.linalg.inv(self._Df).T @ self._J
        self._B_minus = 0.5 * (Ba + Ba.T)[self.n :, self.n :]

    @property
    def dim(self) -> int:
        return self.n + 2

    @property
    def isotropy(self) -> np.ndarray:
        """Basis of ``a^+`` (rows) in the ``a`` coordinates."""
        return np.eye(2 * self.n)[: self.n]

    # -- section and reduction ------------------------------------------------

    def embed_minus(self, a) -> np.ndarray:
        return np.concatenate([np.zeros(self.n), np.asarray(a, dtype=float)])

    def section(self, p: ModelPoint):
        """Group element ``sigma(p)`` as ``(c, xi, z)``."""
        return (
            np.array([p.ell]),
            self.group.rho([p.ell]) @ self.embed_minus(p.a),
            p.v,
        )

    def reduce(self, g) -> tuple[ModelPoint, np.ndarray]:
        """Write ``g = sigma(p) exp(b)`` with ``b in a^+``; returns ``(p, b)``."""
        c, xi, z = g
        ell = float(np.asarray(c, dtype=float)[0])
        eta = self.group.rho([-ell]) @ np.asarray(xi, dtype=float)
        plus, minus = eta[: self.n], eta[self.n :]
        v = float(z) - 0.5 * self.embed_minus(minus) @ self._J @ np.concatenate(
            [plus, np.zeros(self.n)]
        )
        return ModelPoint(ell, minus, v), plus

    def base_point(self) -> ModelPoint:
        return ModelPoint(0.0, np.zeros(self.n), 0.0)

    def omega_aDa(self, a) -> float:
        x = self.embed_minus(a)
        return float(x @ self._J @ self._Df @ x)

    def body_to_coords(self, p: ModelPoint, u) -> np.ndarray:
        """Coordinate velocity of ``t -> sigma(p) exp(t X) o`` at ``t = 0``."""
        u = np.asarray(u, dtype=float)
        lam, alpha, mu = u[0], u[1:-1], u[-1]
        return np.concatenate([[lam], alpha, [mu + 0.5 * lam * self.omega_aDa(p.a)]])

    def coords_to_body(self, p: ModelPoint, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lam = x[0]
        return np.concatenate([[lam], x[1:-1], [x[-1] - 0.5 * lam * self.omega_aDa(p.a)]])

    def _rho_apply(self, x: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Rows ``rho(x_j) Y_j`` for a batch of parameters ``x``."""
        if not hasattr(self, "_eig"):
            vals, vecs = np.linalg.eig(self._Df)
            self._eig = (vals, vecs, np.linalg.inv(vecs)) if np.linalg.cond(vecs) < 1e8 else None
        if self._eig is None:
            return np.array([self.group.rho([xj]) @ yj for xj, yj in zip(x, Y)])
        vals, vecs, inv = self._eig
        W = (Y @ inv.T) * np.exp(np.outer(x, vals))
        return np.real(W @ vecs.T)

    def act_many(self, g, P: np.ndarray) -> np.ndarray:
        """Vectorized :func:`act` on an ``(N, dim)`` array of coordinates."""
        c, xi, z, t = self.group_element(g)
        P = np.atleast_2d(np.asarray(P, dtype=float))
        ell, a, v = P[:, 0], P[:, 1:-1], P[:, -1]
        n = self.n
        A = np.hstack([np.zeros((len(P), n)), a])
        if t != 0:
            K = ambient_group(self.flavor).rho([0.0, t])
            A = A @ K.T
        ell2 = ell + c[0]
        RA = self._rho_apply(ell2, A)
        xi_tot = xi[None, :] + RA
        z_tot = z + v + 0.5 * (RA @ (self._J.T @ xi))
        eta = self._rho_apply(-ell2, xi_tot)
        plus, minus = eta[:, :n], eta[:, n:]
        Jpm = self._J[n:, :n]
        v2 = z_tot - 0.5 * np.einsum("ij,jk,ik->i", minus, Jpm, plus)
        return np.column_stack([ell2, minus, v2])

    def group_element(self, g):
        """Normalize an accepted isometry to a ``(c, xi, z)`` triple of this model."""
        if isinstance(g, OscElement):
            g = embed_osc(g)
        if isinstance(g, IsomElement):
            if self.flavor != g.flavor:
                raise ValueError(f"element of flavor {g.flavor} acting on model {self.flavor}")
            # the SO°(1,1) factor commutes with L and preserves a^+, so it is
            # absorbed by the isotropy after the reduction below
            return np.array([float(g.s)]), g.xi.astype(float), float(g.z), float(g.t)
        c, xi, z = g
        return np.asarray(c, dtype=float).reshape(1), np.asarray(xi, dtype=float), float(z), 0.0


def _preset(flavor: str) -> ModelSpace:
    Lfun = derivation_hyperbolic if flavor == "H" else derivation_elliptic
    D = Lfun(1, 0)
    alg = transvection_algebra(D)
    triple = SymmetricTriple(alg, transvection_form(D), transvection_involution(2))
    V = alg.basis("z")
    return ModelSpace(
        flavor=flavor,
        n=2,
        D=D,
        omega=heis_omega(2, exact=True),
        triple=triple,
        V=V,
        algebra_L=alg.basis("L"),
        algebra_a_minus=np.array([alg.basis("a3"), alg.basis("a4")], dtype=object),
    )


def _generic(triple: SymmetricTriple, V) -> ModelSpace:
    rep = analyze_symmetric_triple(triple, V)
    if not rep.passed:
        failing = [c.name for c in rep.verdicts.checks if not c.passed]
        raise ValueError(f"triple does not define a pp-wave transvection model: {failing}")
    n = len(rep.a_minus)
    if len(rep.a_plus) != n:
        raise ValueError("a^+ and a^- must have equal dimension")
    return ModelSpace(
        flavor="generic",
        n=n,
        D=rep.D,
        omega=rep.omega,
        triple=triple,
        V=rep.V,
        algebra_L=rep.L,
        algebra_a_minus=rep.a_minus,
        report=rep,
    )


def _load_generic(path: str | Path) -> ModelSpace:
    data = json.loads(Path(path).read_text())
    alg = LieAlgebra.from_json(data["algebra"])
    form = BilinearForm(as_fraction_array([[str(x) for x in row] for row in data["form"]]))
    inv = as_fraction_array([[str(x) for x in row] for row in data["involution"]])
    V = as_fraction_array([str(x) for x in data["V"]])
    return _generic(SymmetricTriple(alg, form, inv), V)


_PRESETS: dict[str, ModelSpace] = {}


def model_space(name="X_H", V=None) -> ModelSpace:
    """``"X_H"``, ``"X_E"``, ``"generic:<file>"`` or a :class:`SymmetricTriple` with ``V``."""
    if isinstance(name, SymmetricTriple):
        if V is None:
            raise ValueError("a center vector V is required for a generic model")
        return _generic(name, V)
    if name in ("X_H", "X_E"):
        if name not in _PRESETS:
            _PRESETS[name] = _preset(name[-1])
        return _PRESETS[name]
    if isinstance(name, str) and name.startswith("generic:"):
        return _load_generic(name.split(":", 1)[1])
    raise ValueError(f"unknown model {name!r}")


# ---------------------------------------------------------------------------
# action, metric, geodesics
# ---------------------------------------------------------------------------


def embed_osc(g: OscElement) -> IsomElement:
    """The homomorphism ``Osc_s -> G_H``: ``T -> L_{1,0}``, ``X``, ``Y`` -> eigenvectors."""
    xi = float(g.x) * OSC_X + float(g.y) * OSC_Y
    return IsomElement(float(g.tau), 0.0, xi, float(g.z), "H")


def act(model: ModelSpace, g, p: ModelPoint) -> ModelPoint:
    """Left action followed by reduction to the canonical section.

    ``g`` may be an :class:`IsomElement` of the model's flavor, an
    :class:`OscElement` (for ``X_H``) or a raw ``(c, xi, z)`` triple of the
    transvection group.
    """
    c, xi, z, t = model.group_element(g)
    if t != 0:
        G = ambient_group(model.flavor)
        s = model.section(p)
        prod = G.mul((np.array([c[0], t]), xi, z), (np.array([s[0][0], 0.0]), s[1], s[2]))
        prod = (prod[0][:1].astype(float), prod[1], prod[2])
    else:
        prod = model.group.mul((c, xi, z), model.section(p))
    q, _ = model.reduce(prod)
    return q


def isometry_differential(model: ModelSpace, g, p: ModelPoint, h: float = 1e-4) -> np.ndarray:
    """Jacobian of ``x -> act(g, x)`` at ``p`` by a fourth-order central stencil."""
    x0 = p.coords
    d = len(x0)
    pts = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        pts.extend([x0 + 2 * e, x0 + e, x0 - e, x0 - 2 * e])
    img = model.act_many(g, np.array(pts)).reshape(d, 4, d)
    jac = (-img[:, 0] + 8 * img[:, 1] - 8 * img[:, 2] + img[:, 3]) / (12 * h)
    return jac.T


def metric_at(model: ModelSpace, p: ModelPoint) -> np.ndarray:
    """Metric matrix in the coordinates ``(l, a^-_1..a^-_n, v)``."""
    d = model.dim
    g = np.zeros((d, d))
    g[0, -1] = g[-1, 0] = 1.0
    g[0, 0] = -model.omega_aDa(p.a)
    g[1:-1, 1:-1] = model._B_minus
    return g


def body_metric(model: ModelSpace) -> np.ndarray:
    """The form on ``g^-`` in the basis ``(L, a^-, V)``."""
    return metric_at(model, model.base_point())


def _as_components(p: ModelPoint, u) -> np.ndarray:
    if isinstance(u, TangentVector):
        return u.components
    return np.asarray(u, dtype=float)


def _geodesic_state(model: ModelSpace, p: ModelPoint, u, t: float):
    u = _as_components(p, u)
    lam, alpha, mu = u[0], model.embed_minus(u[1:-1]), u[-1]
    h = model.group.one_param([lam], alpha, mu, t)
    return model.reduce(model.group.mul(model.section(p), h))


def geodesic(model: ModelSpace, p: ModelPoint, u, t: float) -> ModelPoint:
    """``sigma(p) exp(t X_u) o`` for ``u`` in ``g^-`` components."""
    q, _ = _geodesic_state(model, p, u, t)
    return q


def geodesic_velocity(model: ModelSpace, p: ModelPoint, u, t: float) -> tuple[ModelPoint, np.ndarray]:
    """Point and coordinate velocity of the geodesic at time ``t``.

    If ``sigma(p) exp(tX) = sigma(q) exp(b)`` with ``b in a^+`` then the body
    velocity at ``q`` is the ``g^-`` part of ``Ad(exp b) X``, namely
    ``(lam, alpha - lam D b, mu + omega(b, alpha) - lam/2 omega(b, D b))``.
    """
    u = _as_components(p, u)
    q, b = _geodesic_state(model, p, u, t)
    n = model.n
    lam, alpha, mu = u[0], model.embed_minus(u[1:-1]), u[-1]
    bb = np.concatenate([b, np.zeros(n)])
    J, D = model._J, model._Df
    new_alpha = alpha - lam * (D @ bb)
    new_mu = mu + bb @ J @ alpha - 0.5 * lam * (bb @ J @ (D @ bb))
    body = np.concatenate([[lam], new_alpha[n:], [new_mu]])
    return q, model.body_to_coords(q, body)


def geodesic_trace(model: ModelSpace, p: ModelPoint, u, ts) -> np.ndarray:
    """Rows ``(t, l, a^-..., v, speed)`` sampled at the times ``ts``."""
    rows = []
    for t in ts:
        q, vel = geodesic_velocity(model, p, u, float(t))
        speed = vel @ metric_at(model, q) @ vel
        rows.append(np.concatenate([[t], q.coords, [speed]]))
    return np.array(rows)


# ---------------------------------------------------------------------------
# leaves and curvature
# ---------------------------------------------------------------------------


def leaf_function(p: ModelPoint) -> float:
    """The submersion ``f`` with ``df = g(V, .)``: the ``l`` coordinate."""
    return p.ell


def leaf_data(model: ModelSpace, p: ModelPoint) -> LeafData:
    n = model.n
    h = np.zeros((n + 1, n + 1))
    h[1:, 1:] = model._B_minus
    return LeafData(p.ell, h)


def _to_algebra(model: ModelSpace, u) -> np.ndarray:
    """``g^-`` components ``(L, a^-..., V)`` to algebra coordinates."""
    exact = is_exact(u) and model.triple.algebra.exact
    u = as_array(u, exact)
    basis = [model.algebra_L] + list(model.algebra_a_minus) + [model.V]
    basis = [as_array(b, exact) for b in basis]
    return sum((ui * b for ui, b in zip(u, basis)), start=as_array(np.zeros(len(basis[0]), dtype=int), exact))


def _from_algebra(model: ModelSpace, x) -> np.ndarray:
    exact = is_exact(x)
    basis = [model.algebra_L] + list(model.algebra_a_minus) + [model.V]
    B = model.triple.form.matrix
    # pair against the dual basis: <L, V> = 1, a^- orthogonal to L and V
    if exact:
        Bx = as_array(B, True) @ as_array(x, True)
        M = np.array([[as_array(bi, True) @ as_array(B, True) @ as_array(bj, True)
                       for bj in basis] for bi in basis], dtype=object)
        from ._exact import from_sympy, to_sympy

        rhs = np.array([as_array(bi, True) @ Bx for bi in basis], dtype=object)
        return from_sympy(to_sympy(M).solve(to_sympy(rhs))).ravel()
    basis = np.array(basis, dtype=float)
    x = np.asarray(x, dtype=float)
    coef, *_ = np.linalg.lstsq(basis.T, x, rcond=None)
    return coef


def curvature_triple(model: ModelSpace, x, y, z) -> np.ndarray:
    """``R(x, y) z = -[[x, y], z]`` for ``x, y, z`` in ``g^-`` components."""
    alg = model.triple.algebra
    X, Y, Z = (_to_algebra(model, w) for w in (x, y, z))
    r = -alg.bracket(alg.bracket(X, Y), Z)
    return _from_algebra(model, r)


# ---------------------------------------------------------------------------
# flavor-E stabilizers
# ---------------------------------------------------------------------------


def p_s(model: ModelSpace, s: float) -> ModelPoint:
    """The point ``exp(s L) o = (s, 0, 0)``."""
    return ModelPoint(s, np.zeros(model.n), 0.0)


def stabilizer_heis(s: float, model: ModelSpace | str = "X_E") -> tuple[np.ndarray, np.ndarray]:
    """Spanning vectors of ``Stab_{Heis_5}(p_s)`` for ``X_E``."""
    name = model if isinstance(model, str) else ("X_" + model.flavor)
    if name != "X_E":
        raise NotImplementedError("not implemented for flavor H")
    c, sn = np.cos(s), np.sin(s)
    return np.array([c, 0.0, sn, 0.0]), np.array([0.0, c, 0.0, -sn])
