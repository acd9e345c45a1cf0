"""Group arithmetic for Heisenberg groups and their solvable extensions.

Every group here is a semidirect product ``R^k ⋉_rho Heis_{2n+1}`` written in
exponential coordinates ``(c, xi, z)``:

    (c1, xi1, z1) (c2, xi2, z2)
        = (c1 + c2, xi1 + rho(c1) xi2, z1 + z2 + 1/2 omega(xi1, rho(c1) xi2))

with ``rho(c) = expm(sum_i c_i D_i)`` for commuting symplectic derivations
``D_i``.  Three instances are exposed with named coordinates:

* the Heisenberg group itself (``k = 0``; :class:`HeisElement`),
* the ambient isometry group ``(R x SO°(1,1)) ⋉ Heis_5`` in flavor H or E,
  with ``D_1 = L_{1,0}`` and ``D_2 = L_{0,1}`` (:class:`IsomElement`),
* the hyperbolic oscillator group ``Osc_s = R ⋉ Heis_3`` acting by
  ``diag(e^tau, e^-tau)`` (:class:`OscElement`).

The SO°(1,1) coordinate ``t`` is the additive Lie-algebra parameter of
``L_{0,t}``, not the boost factor ``e^t``.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from ._exact import as_array, is_exact
from .lie_core import (
    EIG_TOL,
    derivation_elliptic,
    derivation_hyperbolic,
    heis_omega,
)

__all__ = [
    "HeisElement",
    "IsomElement",
    "OscElement",
    "OneParamSubgroup",
    "SemidirectGroup",
    "heis_mul",
    "heis_inv",
    "heis_commutator",
    "heis_homothety",
    "rho",
    "ambient_group",
    "ambient_mul",
    "ambient_inv",
    "ambient_commutator",
    "osc_group",
    "osc_mul",
    "osc_inv",
    "normalize_hyperbolic",
    "one_param",
    "project",
    "expm_derivation",
]

FLAVORS = ("H", "E")


# ---------------------------------------------------------------------------
# matrix exponentials
# ---------------------------------------------------------------------------


def _simple_spectrum(vals: np.ndarray) -> bool:
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) < EIG_TOL * (1 + abs(vals[i])):
                return False
    return True


def expm_derivation(A) -> np.ndarray:
    """``expm(A)`` for a real matrix, by eigen-decomposition when possible.

    With simple spectrum ``A = V diag(lam) V^{-1}`` is exponentiated
    entry-wise; otherwise scipy's scaling-and-squaring Padé routine is used.
    The zero matrix maps to an exact identity.
    """
    A = np.asarray(A, dtype=float)
    if not A.any():
        return np.eye(A.shape[0])
    if not (A - np.diag(np.diag(A))).any():
        return np.diag(np.exp(np.diag(A)))
    vals, vecs = np.linalg.eig(A)
    if _simple_spectrum(vals):
        out = (vecs * np.exp(vals)) @ np.linalg.inv(vecs)
        return np.real(out) if np.isrealobj(A) else out
    return scipy.linalg.expm(A)


def _series(x: np.ndarray, shift: int) -> np.ndarray:
    """``sum_k x^k / (k + shift)!`` truncated after 12 terms (for ``|x| < 0.1``)."""
    acc = np.zeros_like(x)
    for k in reversed(range(12)):
        acc = acc * x + 1.0 / math.factorial(k + shift)
    return acc


def _phi1(x: np.ndarray) -> np.ndarray:
    """``(e^x - 1) / x``, by Taylor series near zero."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 0.1
    out[small] = _series(x[small], 1)
    xl = x[~small]
    out[~small] = np.expm1(xl) / xl
    return out


def _phi2(x: np.ndarray) -> np.ndarray:
    """``(e^x - 1 - x) / x^2``, by Taylor series near zero."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 0.1
    out[small] = _series(x[small], 2)
    xl = x[~small]
    out[~small] = (np.expm1(xl) - xl) / xl**2
    return out


def _flow_integrals(A: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``R = e^{tA}``, ``F = int_0^t e^{uA} du`` and ``G = int_0^t (t-u) e^{uA} du``.

    Uses the eigenbasis of ``A`` when it is well conditioned and the block
    exponential ``expm([[A, I, 0], [0, 0, I], [0, 0, 0]] t)`` otherwise.
    """
    m = A.shape[0]
    if not A.any():
        return np.eye(m), t * np.eye(m), 0.5 * t * t * np.eye(m)
    vals, vecs = np.linalg.eig(A)
    if np.linalg.cond(vecs) < 1e8:
        inv = np.linalg.inv(vecs)
        x = t * vals

        def conj(d):
            return np.real((vecs * d) @ inv)

        return conj(np.exp(x)), conj(t * _phi1(x)), conj(t * t * _phi2(x))
    I, Z = np.eye(m), np.zeros((m, m))
    M = np.block([[A, I, Z], [Z, Z, I], [Z, Z, Z]])
    E = scipy.linalg.expm(M * t)
    return E[:m, :m], E[:m, m : 2 * m], E[:m, 2 * m :]


# ---------------------------------------------------------------------------
# generic semidirect product
# ---------------------------------------------------------------------------


class SemidirectGroup:
    """``R^k ⋉ Heis_{2n+1}`` for commuting symplectic derivations ``D_i``.

    Elements are triples ``(c, xi, z)`` of numpy arrays / scalars.  When the
    ``R^k`` part of the left factor vanishes and all inputs are rational the
    product is computed in exact arithmetic.
    """

    def __init__(self, derivations: Sequence[np.ndarray], omega=None):
        derivations = [np.asarray(D, dtype=float) for D in derivations]
        m = derivations[0].shape[0] if derivations else np.asarray(omega).shape[0]
        self.derivations = derivations
        self.k = len(derivations)
        self.m = m
        self.omega = heis_omega(m // 2, exact=True) if omega is None else np.asarray(omega)
        self._omega_f = np.asarray(self.omega, dtype=float)

    # -- structure ----------------------------------------------------------

    def generator(self, c) -> np.ndarray:
        """``A(c) = sum_i c_i D_i``."""
        A = np.zeros((self.m, self.m))
        for ci, D in zip(np.asarray(c, dtype=float), self.derivations):
            A = A + ci * D
        return A

    def rho(self, c) -> np.ndarray:
        return expm_derivation(self.generator(c))

    def omega_form(self, x, y):
        if is_exact(x) and is_exact(y) and is_exact(self.omega):
            return as_array(x, True) @ as_array(self.omega, True) @ as_array(y, True)
        return np.asarray(x, dtype=float) @ self._omega_f @ np.asarray(y, dtype=float)

    # -- group law ------------------------------------------------------------

    def identity(self):
        return np.zeros(self.k), np.zeros(self.m), 0.0

    def _act(self, c, xi):
        """``rho(c) xi`` with an exact shortcut for ``c = 0``."""
        c_arr = np.asarray(c, dtype=object)
        if all(x == 0 for x in c_arr.flat):
            if is_exact(xi):
                return as_array(xi, True)
            return np.asarray(xi, dtype=float)
        return self.rho(c) @ np.asarray(xi, dtype=float)

    def mul(self, g, h):
        c1, x1, z1 = g
        c2, x2, z2 = h
        if len(x1) != self.m or len(x2) != self.m:
            raise ValueError("Heisenberg parts have mismatched dimension")
        rx2 = self._act(c1, x2)
        exact = is_exact(x1) and is_exact(rx2) and is_exact([z1, z2])
        x1 = as_array(x1, exact)
        c = np.asarray(c1, dtype=object if is_exact(c1) and is_exact(c2) else float) + np.asarray(
            c2, dtype=object if is_exact(c1) and is_exact(c2) else float
        )
        w = self.omega_form(x1, rx2)
        half = Fraction(1, 2) if exact else 0.5
        return c, x1 + rx2, z1 + z2 + half * w

    def inv(self, g):
        c, xi, z = g
        cneg = -np.asarray(c, dtype=object if is_exact(c) else float)
        return cneg, -self._act(cneg, xi), -z

    def commutator(self, g, h):
        """``g h g^{-1} h^{-1}``."""
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    # -- one-parameter subgroups -------------------------------------------------

    def one_param(self, c, alpha, mu, t: float):
        """``exp(t X)`` for ``X = (c, alpha, mu)`` in the Lie algebra.

        The left-invariant flow ``g' = g X`` integrates to
        ``(c t, F(t) alpha, mu t + 1/2 omega(alpha, G(t) alpha))`` where
        ``F = int_0^t e^{uA}`` and ``G = int_0^t (t-u) e^{uA}``; the second
        formula uses that ``A = A(c)`` preserves ``omega``.
        """
        c = np.asarray(c, dtype=float)
        alpha = np.asarray(alpha, dtype=float)
        _, F, G = _flow_integrals(self.generator(c), t)
        return c * t, F @ alpha, float(mu) * t + 0.5 * alpha @ self._omega_f @ (G @ alpha)

    def _rk4_one_param(self, c, alpha, mu, t: float, h: float = 1e-3):
        """Fixed-step RK4 integration of ``g' = g X`` from the identity.

        Test oracle only.  The state is ``(R, xi, z)`` with ``R = rho(c(t))``
        integrated alongside, so no closed-form exponential is used.
        """
        A = self.generator(c)
        alpha = np.asarray(alpha, dtype=float)
        J = self._omega_f
        nsteps = max(1, int(round(abs(t) / h)))
        dt = t / nsteps

        def rhs(R, xi, z):
            v = R @ alpha
            return R @ A, v, mu + 0.5 * xi @ J @ v

        R, xi, z = np.eye(self.m), np.zeros(self.m), 0.0
        for _ in range(nsteps):
            k1 = rhs(R, xi, z)
            k2 = rhs(R + 0.5 * dt * k1[0], xi + 0.5 * dt * k1[1], z + 0.5 * dt * k1[2])
            k3 = rhs(R + 0.5 * dt * k2[0], xi + 0.5 * dt * k2[1], z + 0.5 * dt * k2[2])
            k4 = rhs(R + dt * k3[0], xi + dt * k3[1], z + dt * k3[2])
            R = R + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            xi = xi + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            z = z + dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        return np.asarray(c, dtype=float) * t, xi, z


# ---------------------------------------------------------------------------
# Heisenberg group
# ---------------------------------------------------------------------------


def _num(x):
    """Keep ints/Fractions exact, everything else becomes float."""
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    return float(x)


def _vec(xi) -> np.ndarray:
    return as_array(xi, is_exact(xi))


@dataclass(frozen=True, eq=False)
class HeisElement:
    """``exp(xi + z 𝔷)`` in ``Heis_{2n+1}``."""

    xi: np.ndarray
    z: float | Fraction = 0

    def __post_init__(self):
        object.__setattr__(self, "xi", _vec(self.xi))
        object.__setattr__(self, "z", _num(self.z))

    @property
    def n(self) -> int:
        return len(self.xi) // 2

    @classmethod
    def identity(cls, n: int = 2) -> "HeisElement":
        return cls(np.array([Fraction(0)] * (2 * n), dtype=object), Fraction(0))

    def allclose(self, other: "HeisElement", tol: float = 1e-10) -> bool:
        return bool(
            np.allclose(self.xi.astype(float), other.xi.astype(float), atol=tol, rtol=0)
            and abs(float(self.z) - float(other.z)) < tol
        )

    def __eq__(self, other):
        if not isinstance(other, HeisElement):
            return NotImplemented
        return bool(np.all(self.xi == other.xi)) and self.z == other.z

    def __mul__(self, other):
        return heis_mul(self, other)


def _heis_group(n: int) -> SemidirectGroup:
    return SemidirectGroup([], heis_omega(n, exact=True))


def heis_mul(g: HeisElement, h: HeisElement) -> HeisElement:
    """``(xi1 + xi2, z1 + z2 + 1/2 omega(xi1, xi2))``."""
    if len(g.xi) != len(h.xi):
        raise ValueError("Heisenberg elements of different dimension")
    _, xi, z = _heis_group(g.n).mul(((), g.xi, g.z), ((), h.xi, h.z))
    return HeisElement(xi, z)


def heis_inv(g: HeisElement) -> HeisElement:
    return HeisElement(-g.xi, -g.z)


def heis_commutator(g: HeisElement, h: HeisElement) -> HeisElement:
    return heis_mul(heis_mul(g, h), heis_mul(heis_inv(g), heis_inv(h)))


def heis_homothety(lam) -> Callable[[HeisElement], HeisElement]:
    """The automorphism ``(xi, z) -> (lam xi, lam^2 z)``."""
    if lam == 0:
        raise ValueError("homothety factor must be nonzero")
    lam = _num(lam)

    def psi(g: HeisElement) -> HeisElement:
        return HeisElement(g.xi * lam, g.z * lam * lam)

    return psi


# ---------------------------------------------------------------------------
# ambient isometry groups
# ---------------------------------------------------------------------------


def _check_flavor(flavor: str) -> str:
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be 'H' or 'E', got {flavor!r}")
    return flavor


_AMBIENT: dict[str, SemidirectGroup] = {}


def ambient_group(flavor: str) -> SemidirectGroup:
    """``(R x SO°(1,1)) ⋉ Heis_5`` with ``D_1 = L_{1,0}``, ``D_2 = L_{0,1}``."""
    _check_flavor(flavor)
    if flavor not in _AMBIENT:
        L = derivation_hyperbolic if flavor == "H" else derivation_elliptic
        _AMBIENT[flavor] = SemidirectGroup(
            [L(1.0, 0.0), L(0.0, 1.0)], heis_omega(2, exact=True)
        )
    return _AMBIENT[flavor]


def rho(s: float, t: float, flavor: str = "H") -> np.ndarray:
    """``expm(L_{s,t})`` for the chosen flavor, as a 4x4 float matrix."""
    return ambient_group(flavor).rho([s, t])


@dataclass(frozen=True, eq=False)
class IsomElement:
    """``(s, t, xi, z)``: ``exp(s L_{1,0} + t L_{0,1})`` times ``exp(xi + z 𝔷)``.

    Concretely the product ``(s1,t1,h1)(s2,t2,h2) = (s1+s2, t1+t2,
    h1 rho(s1,t1)(h2))``.
    """

    s: float | Fraction = 0
    t: float | Fraction = 0
    xi: np.ndarray = None
    z: float | Fraction = 0
    flavor: str = "H"

    def __post_init__(self):
        _check_flavor(self.flavor)
        xi = np.array([Fraction(0)] * 4, dtype=object) if self.xi is None else self.xi
        xi = _vec(xi)
        if xi.shape != (4,):
            raise ValueError("ambient Heisenberg part must have 4 components")
        object.__setattr__(self, "xi", xi)
        for name in ("s", "t", "z"):
            object.__setattr__(self, name, _num(getattr(self, name)))

    @property
    def h(self) -> HeisElement:
        return HeisElement(self.xi, self.z)

    def as_triple(self):
        return np.array([self.s, self.t], dtype=object), self.xi, self.z

    @classmethod
    def from_triple(cls, triple, flavor: str) -> "IsomElement":
        c, xi, z = triple
        return cls(c[0], c[1], xi, z, flavor)

    @classmethod
    def identity(cls, flavor: str = "H") -> "IsomElement":
        return cls(0, 0, None, 0, flavor)

    def __mul__(self, other):
        return ambient_mul(self, other)

    def allclose(self, other: "IsomElement", tol: float = 1e-10) -> bool:
        return bool(
            self.flavor == other.flavor
            and abs(float(self.s) - float(other.s)) < tol
            and abs(float(self.t) - float(other.t)) < tol
            and np.allclose(self.xi.astype(float), other.xi.astype(float), atol=tol, rtol=0)
            and abs(float(self.z) - float(other.z)) < tol
        )

    def to_json(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) and x.denominator != 1 else (
                int(x) if isinstance(x, Fraction) else float(x)
            )

        return {
            "s": enc(self.s),
            "t": enc(self.t),
            "xi": [enc(x) for x in self.xi],
            "z": enc(self.z),
            "flavor": self.flavor,
        }

    @classmethod
    def from_json(cls, d: dict) -> "IsomElement":
        def dec(x):
            return Fraction(x) if isinstance(x, (str, int)) else float(x)

        return cls(dec(d.get("s", 0)), dec(d.get("t", 0)), [dec(x) for x in d["xi"]],
                   dec(d.get("z", 0)), d.get("flavor", "H"))


def ambient_mul(g: IsomElement, h: IsomElement) -> IsomElement:
    if g.flavor != h.flavor:
        raise ValueError(f"flavor mismatch: {g.flavor} vs {h.flavor}")
    return IsomElement.from_triple(ambient_group(g.flavor).mul(g.as_triple(), h.as_triple()), g.flavor)


def ambient_inv(g: IsomElement) -> IsomElement:
    return IsomElement.from_triple(ambient_group(g.flavor).inv(g.as_triple()), g.flavor)


def ambient_commutator(g: IsomElement, h: IsomElement) -> IsomElement:
    return ambient_mul(ambient_mul(g, h), ambient_mul(ambient_inv(g), ambient_inv(h)))


def normalize_hyperbolic(gamma: IsomElement) -> tuple[IsomElement, IsomElement]:
    """Conjugate ``gamma = (0, t0, a0, z0)`` to kill its Heisenberg ``xi``-part.

    With ``alpha = (0, 0, a1, 0)`` the conjugate ``alpha gamma alpha^{-1}``
    has ``xi``-part ``a1 + a0 - rho(0, t0) a1``; ``a1`` solves
    ``(I - rho(0, t0)) a1 = -a0``.
    """
    if gamma.s != 0:
        raise ValueError("normalize_hyperbolic expects an element with s = 0")
    if gamma.t == 0:
        raise ValueError("non-hyperbolic, cannot normalize: t0 = 0")
    if not gamma.xi.astype(float).any():
        ident = IsomElement.identity(gamma.flavor)
        return ident, gamma
    R = rho(0.0, float(gamma.t), gamma.flavor)
    M = np.eye(4) - R
    if np.linalg.cond(M) > 1e12:
        raise ValueError("non-hyperbolic, cannot normalize: I - rho(0, t0) is singular")
    a1 = np.linalg.solve(M, -gamma.xi.astype(float))
    alpha = IsomElement(0, 0, a1, 0, gamma.flavor)
    return alpha, ambient_mul(ambient_mul(alpha, gamma), ambient_inv(alpha))


def project(gamma: IsomElement, which: str):
    """``p1 -> s``, ``p2 -> (s, t)`` and ``q -> t``."""
    if which == "p1":
        return gamma.s
    if which == "p2":
        return gamma.s, gamma.t
    if which == "q":
        return gamma.t
    raise ValueError(f"unknown projection {which!r}")


# ---------------------------------------------------------------------------
# hyperbolic oscillator group
# ---------------------------------------------------------------------------

_OSC = SemidirectGroup([np.diag([1.0, -1.0])], heis_omega(1, exact=True))


def osc_group() -> SemidirectGroup:
    """``Osc_s`` with ``[T, X] = X``, ``[T, Y] = -Y``, ``[X, Y] = Z``."""
    return _OSC


@dataclass(frozen=True, eq=False)
class OscElement:
    """``(tau, x, y, z)`` in ``Osc_s``; ``tau`` acts on ``(x, y)`` by ``diag(e^tau, e^-tau)``."""

    tau: float | Fraction = 0
    x: float | Fraction = 0
    y: float | Fraction = 0
    z: float | Fraction = 0

    def __post_init__(self):
        for name in ("tau", "x", "y", "z"):
            object.__setattr__(self, name, _num(getattr(self, name)))

    def as_triple(self):
        return np.array([self.tau], dtype=object), _vec([self.x, self.y]), self.z

    @classmethod
    def from_triple(cls, triple) -> "OscElement":
        c, xi, z = triple
        return cls(c[0], xi[0], xi[1], z)

    def __mul__(self, other):
        return osc_mul(self, other)

    def vector(self) -> np.ndarray:
        return np.array([float(self.tau), float(self.x), float(self.y), float(self.z)])

    def allclose(self, other: "OscElement", tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.vector() - other.vector())) < tol)

    def to_json(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else float(v))
                for k, v in zip(("tau", "x", "y", "z"), (self.tau, self.x, self.y, self.z))}

    @classmethod
    def from_json(cls, d: dict) -> "OscElement":
        def dec(x):
            return Fraction(x) if isinstance(x, (str, int)) else float(x)

        return cls(*(dec(d.get(k, 0)) for k in ("tau", "x", "y", "z")))


def osc_mul(g: OscElement, h: OscElement) -> OscElement:
    if isinstance(g.tau, float):
        # float fast path of the same law: rho(tau) = diag(e^tau, e^-tau)
        e = math.exp(g.tau)
        x2, y2 = e * float(h.x), float(h.y) / e
        return OscElement(g.tau + float(h.tau), float(g.x) + x2, float(g.y) + y2,
                          float(g.z) + float(h.z) + 0.5 * (float(g.x) * y2 - float(g.y) * x2))
    return OscElement.from_triple(_OSC.mul(g.as_triple(), h.as_triple()))


def osc_inv(g: OscElement) -> OscElement:
    return OscElement.from_triple(_OSC.inv(g.as_triple()))


# ---------------------------------------------------------------------------
# one-parameter subgroups
# ---------------------------------------------------------------------------


def one_param(xi, t: float, group: str = "osc_s"):
    """``exp(t xi)`` in ``osc_s``, ``ambient-H`` or ``ambient-E``.

    ``xi`` is ``(T, X, Y, Z)`` for ``osc_s`` and ``(s, t, a1..a4, z)`` for the
    ambient groups.
    """
    xi = np.asarray(xi, dtype=float)
    if group == "osc_s":
        if xi.shape != (4,):
            raise ValueError("osc_s vector has 4 components (T, X, Y, Z)")
        return OscElement.from_triple(_OSC.one_param(xi[:1], xi[1:3], xi[3], t))
    if group in ("ambient-H", "ambient-E"):
        if xi.shape != (7,):
            raise ValueError("ambient vector has 7 components (s, t, a1..a4, z)")
        flavor = group[-1]
        c, x, z = ambient_group(flavor).one_param(xi[:2], xi[2:6], xi[6], t)
        return IsomElement(c[0], c[1], x, z, flavor)
    raise ValueError(f"unknown group {group!r}")


@dataclass(frozen=True, eq=False)
class OneParamSubgroup:
    """``t -> exp(t xi)`` in one of the named groups."""

    xi: np.ndarray
    group: str = "osc_s"

    def __call__(self, t: float):
        return one_param(self.xi, t, self.group)
