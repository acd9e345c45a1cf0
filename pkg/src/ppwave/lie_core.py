"""Finite-dimensional Lie algebras given by structure constants.

Two arithmetic modes are supported throughout.  Structure constants, forms and
derivations built from ints/Fractions are handled exactly (object arrays of
``Fraction``); anything containing floats is handled in float64 with an
explicit tolerance.  Eigen-analysis is always floating point.

Conventions
-----------
* ``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
* A matrix ``D`` acts on coordinate columns: ``D e_j = sum_i D[i, j] e_i``.
* ``heisenberg(n)`` has basis ``(z, a1, ..., a2n)`` with ``[a_i, a_{n+i}] = z``;
  for n = 2 this is ``[a1, a3] = [a2, a4] = z``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._exact import (
    as_array,
    as_fraction_array,
    exact_nullspace,
    from_sympy,
    is_exact,
    max_abs,
    rank,
    to_sympy,
)
from .reports import VerificationReport

__all__ = [
    "LieAlgebra",
    "BilinearForm",
    "SymmetricTriple",
    "TransvectionReport",
    "InvariantPlane",
    "DegenerateSpectrumError",
    "DegeneratePairingError",
    "bracket",
    "check_jacobi",
    "is_derivation",
    "is_ad_invariant",
    "is_inner",
    "eigen_spectrum",
    "eigenvector_table",
    "invariant_planes",
    "plane_to_subalgebra",
    "preserves_symplectic",
    "analyze_symmetric_triple",
    "heisenberg",
    "heis_omega",
    "osc_s",
    "osc_form",
    "osc_involution",
    "derivation_hyperbolic",
    "derivation_elliptic",
    "extend_by_zero",
    "transvection_algebra",
    "transvection_form",
    "transvection_involution",
]

DEFAULT_TOL = 1e-10
EIG_TOL = 1e-9


class DegenerateSpectrumError(ValueError):
    """Raised when an operation needs pairwise distinct eigenvalues."""


class DegeneratePairingError(ValueError):
    """No vector of the tangent space pairs nontrivially with V."""


# ---------------------------------------------------------------------------
# algebra and forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Algebra with basis labels and a three-index structure-constant array."""

    structure_constants: np.ndarray
    basis_labels: tuple[str, ...] = ()

    def __post_init__(self):
        c = self.structure_constants
        exact = is_exact(c)
        c = as_array(c, exact)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ValueError(f"structure constants must be (d, d, d), got {c.shape}")
        object.__setattr__(self, "structure_constants", c)
        labels = tuple(self.basis_labels) or tuple(f"e{i}" for i in range(c.shape[0]))
        if len(labels) != c.shape[0]:
            raise ValueError("one label per basis vector required")
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    @property
    def exact(self) -> bool:
        return self.structure_constants.dtype == object

    def basis(self, label: str | int) -> np.ndarray:
        i = label if isinstance(label, int) else self.basis_labels.index(label)
        e = self.zero()
        e[i] = Fraction(1) if self.exact else 1.0
        return e

    def zero(self) -> np.ndarray:
        if self.exact:
            return np.array([Fraction(0)] * self.dim, dtype=object)
        return np.zeros(self.dim)

    def vector(self, coeffs: dict[str, object]) -> np.ndarray:
        v = self.zero()
        for lab, c in coeffs.items():
            v[self.basis_labels.index(lab)] += Fraction(c) if self.exact else float(c)
        return v

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad_x`` in the basis."""
        x = self._coerce(x)
        return np.einsum("i,ijk->kj", x, self.structure_constants)

    def bracket(self, x, y) -> np.ndarray:
        return bracket(self, x, y)

    def _coerce(self, x) -> np.ndarray:
        exact = self.exact and is_exact(x)
        v = as_array(x, exact)
        if v.shape != (self.dim,):
            raise ValueError(f"vector of length {self.dim} expected, got shape {v.shape}")
        if self.exact and not exact:
            return v.astype(float)
        return v

    # -- JSON ---------------------------------------------------------------

    @classmethod
    def from_json(cls, data: dict | str) -> "LieAlgebra":
        """Load ``{"dim", "labels", "brackets": [{"i", "j", "coeffs"}]}``.

        Pairs that are not listed are zero; for every listed ``(i, j)`` whose
        mirror ``(j, i)`` is absent the antisymmetric entry is filled in.
        Listed mirrors are kept verbatim so inconsistent files stay detectable.
        """
        if isinstance(data, str):
            data = json.loads(data)
        d = int(data["dim"])
        labels = data.get("labels") or [f"e{i}" for i in range(d)]
        c = np.array([[[Fraction(0)] * d for _ in range(d)] for _ in range(d)], dtype=object)
        seen = set()
        for entry in data.get("brackets", []):
            i, j = int(entry["i"]), int(entry["j"])
            if not (0 <= i < d and 0 <= j < d):
                raise ValueError(f"bracket index out of range: {(i, j)}")
            seen.add((i, j))
            for k, val in entry["coeffs"].items():
                c[i, j, int(k)] = Fraction(str(val))
        for i, j in seen:
            if (j, i) not in seen:
                c[j, i, :] = -c[i, j, :]
        return cls(c, tuple(labels))

    def to_json(self) -> dict:
        brackets = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                coeffs = {
                    str(k): str(self.structure_constants[i, j, k])
                    for k in range(self.dim)
                    if self.structure_constants[i, j, k] != 0
                }
                if coeffs:
                    brackets.append({"i": i, "j": j, "coeffs": coeffs})
        return {"dim": self.dim, "labels": list(self.basis_labels), "brackets": brackets}


def signature(matrix, tol: float = 1e-9) -> tuple[int, int]:
    """(number of negative, number of positive) eigenvalues."""
    if is_exact(matrix):
        m = to_sympy(as_fraction_array(matrix))
        # Sylvester: inertia from an exact LDL^T is awkward in sympy; eigenvalues
        # of a rational symmetric matrix are real and sympy computes them exactly.
        ev = [complex(e.evalf()) for e, mult in m.eigenvals().items() for _ in range(mult)]
        vals = np.array([e.real for e in ev])
    else:
        vals = np.linalg.eigvalsh(np.asarray(matrix, dtype=float))
    scale = max(1.0, float(np.max(np.abs(vals)))) if len(vals) else 1.0
    return int(np.sum(vals < -tol * scale)), int(np.sum(vals > tol * scale))


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Symmetric bilinear form with its signature ``(negative, positive)``."""

    matrix: np.ndarray
    signature: tuple[int, int] = field(default=None)

    def __post_init__(self):
        m = as_array(self.matrix, is_exact(self.matrix))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("form must be square")
        if max_abs(m - m.T) > 0:
            raise ValueError("form must be symmetric")
        object.__setattr__(self, "matrix", m)
        if self.signature is None:
            object.__setattr__(self, "signature", signature(m))

    def __call__(self, x, y):
        return np.asarray(x) @ self.matrix @ np.asarray(y)


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    """``[x, y] = sum_ij x_i y_j c[i, j, :]``."""
    x, y = alg._coerce(x), alg._coerce(y)
    return np.einsum("i,j,ijk->k", x, y, alg.structure_constants)


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------


def _ok(residual: float, exact: bool, tol: float) -> bool:
    return residual == 0 if exact else residual < tol


def check_jacobi(alg: LieAlgebra, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Antisymmetry and Jacobi identity over all basis triples.

    The witness of a failing check is the label tuple with largest residual.
    """
    c = alg.structure_constants
    report = VerificationReport("jacobi")
    anti = c + np.transpose(c, (1, 0, 2))
    worst, wit = 0.0, None
    for i in range(alg.dim):
        for j in range(alg.dim):
            r = max_abs(anti[i, j])
            if r > worst:
                worst, wit = r, (alg.basis_labels[i], alg.basis_labels[j])
    report.add("antisymmetry", _ok(worst, alg.exact, tol), worst, wit)

    # J[i,j,k,:] = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
    t = np.einsum("ijm,mkn->ijkn", c, c)
    jac = t + np.transpose(t, (2, 0, 1, 3)) + np.transpose(t, (1, 2, 0, 3))
    worst, wit = 0.0, None
    for idx in np.ndindex(*jac.shape[:3]):
        r = max_abs(jac[idx])
        if r > worst:
            worst, wit = r, tuple(alg.basis_labels[i] for i in idx)
    report.add("jacobi", _ok(worst, alg.exact, tol), worst, wit)
    return report


def is_derivation(alg: LieAlgebra, D, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Leibniz rule ``D[x, y] = [Dx, y] + [x, Dy]`` on all basis pairs."""
    exact = alg.exact and is_exact(D)
    D = as_array(D, exact)
    c = alg.structure_constants if exact else alg.structure_constants.astype(float)
    if D.shape != (alg.dim, alg.dim):
        raise ValueError("derivation has the wrong size")
    lhs = np.einsum("ijm,km->ijk", c, D)
    rhs = np.einsum("mi,mjk->ijk", D, c) + np.einsum("mj,imk->ijk", D, c)
    res = max_abs(lhs - rhs)
    return _ok(res, exact, tol), res


def is_ad_invariant(alg: LieAlgebra, B, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """``<[x, y], z> + <y, [x, z]> = 0`` for all basis triples."""
    B = B.matrix if isinstance(B, BilinearForm) else B
    exact = alg.exact and is_exact(B)
    B = as_array(B, exact)
    c = alg.structure_constants if exact else alg.structure_constants.astype(float)
    # <[e_i,e_j],e_k> = c[i,j,m] B[m,k]
    t = np.einsum("ijm,mk->ijk", c, B)
    res = max_abs(t + np.transpose(t, (0, 2, 1)))
    return _ok(res, exact, tol), res


def is_inner(alg: LieAlgebra, D, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """A vector ``x`` with ``ad_x = D``, or ``None`` if ``D`` is outer.

    The witness is only defined modulo the center; free parameters are set
    to zero.
    """
    exact = alg.exact and is_exact(D)
    D = as_array(D, exact)
    d = alg.dim
    c = alg.structure_constants
    # (ad_x)[k, j] = sum_i x_i c[i, j, k]; unknowns x_i, equations indexed (k, j)
    A = np.transpose(c, (2, 1, 0)).reshape(d * d, d)
    b = D.reshape(d * d)
    if exact:
        import sympy as sp

        try:
            sol, params = to_sympy(A).gauss_jordan_solve(to_sympy(b))
        except ValueError:
            return None
        sol = sol.subs({p: 0 for p in params})
        return from_sympy(sol).ravel()
    A = A.astype(float)
    x, *_ = np.linalg.lstsq(A, b.astype(float), rcond=None)
    res = np.max(np.abs(A @ x - b)) if b.size else 0.0
    return x if res < tol * max(1.0, np.max(np.abs(b), initial=0.0)) else None


def preserves_symplectic(D, omega, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """``omega D + D^T omega = 0``."""
    exact = is_exact(D) and is_exact(omega)
    D, omega = as_array(D, exact), as_array(omega, exact)
    res = max_abs(omega @ D + D.T @ omega)
    return _ok(res, exact, tol), res


# ---------------------------------------------------------------------------
# eigen-structure
# ---------------------------------------------------------------------------


def _float(D) -> np.ndarray:
    return np.asarray(np.asarray(D, dtype=object).astype(float), dtype=float)


def _sort_key(lam: complex):
    return (round(lam.real, 9), round(lam.imag, 9))


def eigen_spectrum(D) -> list[complex]:
    """Eigenvalues with multiplicity, sorted by (real, imaginary) part."""
    vals = np.linalg.eigvals(_float(D))
    return sorted((complex(v) for v in vals), key=_sort_key)


def _same(l1: complex, l2: complex) -> bool:
    return abs(l1 - l2) < EIG_TOL * (1 + abs(l1))


def _require_simple(vals: Sequence[complex]) -> None:
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if _same(vals[i], vals[j]):
                raise DegenerateSpectrumError(
                    f"degenerate spectrum: eigenvalue {vals[i]:.6g} repeated"
                )


def eigenvector_table(D) -> tuple[list[complex], np.ndarray]:
    """Sorted eigenvalues and matching unit eigenvectors (as columns)."""
    vals, vecs = np.linalg.eig(_float(D))
    order = sorted(range(len(vals)), key=lambda i: _sort_key(complex(vals[i])))
    vals = [complex(vals[i]) for i in order]
    vecs = vecs[:, order]
    if all(abs(v.imag) < EIG_TOL for v in vals):
        vecs = np.real(vecs)
        vecs /= np.linalg.norm(vecs, axis=0)
    return vals, vecs


@dataclass(frozen=True)
class InvariantPlane:
    vectors: tuple[np.ndarray, np.ndarray]
    eigenvalues: tuple[complex, complex]

    @property
    def trace(self) -> float:
        return float(sum(self.eigenvalues).real)


def invariant_planes(D, unimodular_only: bool = False, tol: float = 1e-9) -> list[InvariantPlane]:
    """All ``D``-invariant real 2-planes of a matrix with simple spectrum.

    With simple spectrum every invariant plane is spanned by two real
    eigenvectors or by the real and imaginary parts of one complex
    eigenvector.  Raises :class:`DegenerateSpectrumError` otherwise, since
    repeated eigenvalues give continuous families.
    """
    vals, vecs = np.linalg.eig(_float(D))
    vals = [complex(v) for v in vals]
    _require_simple(vals)
    real = [i for i, v in enumerate(vals) if abs(v.imag) <= EIG_TOL * (1 + abs(v))]
    upper = [i for i, v in enumerate(vals) if v.imag > EIG_TOL * (1 + abs(v))]
    planes = []
    for a in range(len(real)):
        for b in range(a + 1, len(real)):
            i, j = real[a], real[b]
            planes.append(
                InvariantPlane(
                    (np.real(vecs[:, i]), np.real(vecs[:, j])),
                    (complex(vals[i].real), complex(vals[j].real)),
                )
            )
    for i in upper:
        v = vecs[:, i]
        planes.append(InvariantPlane((np.real(v), np.imag(v)), (vals[i], vals[i].conjugate())))
    if unimodular_only:
        planes = [p for p in planes if abs(p.trace) < tol]
    return planes


def heis_omega(n: int = 2, exact: bool = True) -> np.ndarray:
    """Symplectic form on ``heis_{2n+1}/z``: ``omega(a_i, a_{n+i}) = 1``."""
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    J = np.array([[zero] * (2 * n) for _ in range(2 * n)], dtype=object if exact else float)
    for i in range(n):
        J[i, n + i] = one
        J[n + i, i] = -one
    return J


def plane_to_subalgebra(plane, omega=None, tol: float = 1e-9) -> str:
    """Classify the lift of a plane in ``heis/z`` as ``"heisenberg"`` or ``"abelian"``.

    The lift ``span(v1, v2, z)`` is a Heisenberg algebra exactly when
    ``omega(v1, v2) != 0``.
    """
    v1, v2 = plane.vectors if isinstance(plane, InvariantPlane) else plane
    if omega is None:
        omega = heis_omega(len(v1) // 2, exact=is_exact(v1) and is_exact(v2))
    exact = is_exact(v1) and is_exact(v2) and is_exact(omega)
    if exact:
        w = as_fraction_array(v1) @ as_fraction_array(omega) @ as_fraction_array(v2)
        return "heisenberg" if w != 0 else "abelian"
    v1, v2 = np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)
    w = v1 @ np.asarray(omega, dtype=float) @ v2
    scale = np.linalg.norm(v1) * np.linalg.norm(v2)
    return "heisenberg" if abs(w) > tol * scale else "abelian"


# ---------------------------------------------------------------------------
# factories
# ---------------------------------------------------------------------------


def _zeros3(d: int) -> np.ndarray:
    return np.array([[[Fraction(0)] * d for _ in range(d)] for _ in range(d)], dtype=object)


def heisenberg(n: int = 2) -> LieAlgebra:
    """``heis_{2n+1}`` with basis ``(z, a1, ..., a2n)``."""
    d = 2 * n + 1
    c = _zeros3(d)
    for i in range(n):
        c[1 + i, 1 + n + i, 0] = Fraction(1)
        c[1 + n + i, 1 + i, 0] = Fraction(-1)
    return LieAlgebra(c, ("z",) + tuple(f"a{i + 1}" for i in range(2 * n)))


def osc_s() -> LieAlgebra:
    """Hyperbolic oscillator algebra: ``[T,X]=X, [T,Y]=-Y, [X,Y]=Z``."""
    c = _zeros3(4)
    T, X, Y, Z = range(4)
    for i, j, k, v in [(T, X, X, 1), (T, Y, Y, -1), (X, Y, Z, 1)]:
        c[i, j, k] = Fraction(v)
        c[j, i, k] = Fraction(-v)
    return LieAlgebra(c, ("T", "X", "Y", "Z"))


def osc_form() -> BilinearForm:
    """Bi-invariant form ``<T,Z> = <X,Y> = 1`` of signature (2, 2)."""
    m = np.array([[Fraction(0)] * 4 for _ in range(4)], dtype=object)
    m[0, 3] = m[3, 0] = m[1, 2] = m[2, 1] = Fraction(1)
    return BilinearForm(m)


def osc_involution() -> np.ndarray:
    """``T -> -T, Z -> -Z, X <-> Y``.

    This is an automorphism preserving ``osc_form`` whose minus space
    contains ``L = T`` and ``V = Z``; the fixed part is ``span(X + Y)``.
    """
    F0, F1 = Fraction(0), Fraction(1)
    return np.array(
        [[-F1, F0, F0, F0], [F0, F0, F1, F0], [F0, F1, F0, F0], [F0, F0, F0, -F1]],
        dtype=object,
    )


def _as_num(x, exact: bool):
    return Fraction(x) if exact else float(x)


def derivation_hyperbolic(s=1, t=0) -> np.ndarray:
    """The 4x4 block of ``L^H_{s,t}`` on ``(a1, a2, a3, a4)``."""
    exact = is_exact([s, t])
    s, t = _as_num(s, exact), _as_num(t, exact)
    z = _as_num(0, exact)
    return np.array(
        [[z, t, -s, z], [t, z, z, s], [-s, z, z, -t], [z, s, -t, z]],
        dtype=object if exact else float,
    )


def derivation_elliptic(s=1, t=0) -> np.ndarray:
    """The 4x4 block of ``L^E_{s,t}`` on ``(a1, a2, a3, a4)``."""
    exact = is_exact([s, t])
    s, t = _as_num(s, exact), _as_num(t, exact)
    z = _as_num(0, exact)
    return np.array(
        [[z, t, -s, z], [t, z, z, s], [s, z, z, -t], [z, -s, -t, z]],
        dtype=object if exact else float,
    )


def extend_by_zero(D) -> np.ndarray:
    """Extend a block on ``(a1..a2n)`` to ``heis_{2n+1}`` killing the center."""
    exact = is_exact(D)
    D = as_array(D, exact)
    m = D.shape[0]
    out = np.array([[_as_num(0, exact)] * (m + 1) for _ in range(m + 1)], dtype=D.dtype)
    out[1:, 1:] = D
    return out


def transvection_algebra(D, omega=None) -> LieAlgebra:
    """``R L (semidirect) heis_{2n+1}`` with basis ``(L, z, a1, ..., a2n)``.

    ``[L, a_j] = sum_i D[i, j] a_i`` and ``[a_i, a_j] = omega[i, j] z``.
    """
    exact = is_exact(D) and (omega is None or is_exact(omega))
    D = as_array(D, exact)
    m = D.shape[0]
    if m % 2:
        raise ValueError("derivation block must act on an even-dimensional space")
    omega = heis_omega(m // 2, exact) if omega is None else as_array(omega, exact)
    d = m + 2
    c = _zeros3(d) if exact else np.zeros((d, d, d))
    for j in range(m):
        for i in range(m):
            c[0, 2 + j, 2 + i] = D[i, j]
            c[2 + j, 0, 2 + i] = -D[i, j]
        for i in range(m):
            c[2 + i, 2 + j, 1] = omega[i, j]
    labels = ("L", "z") + tuple(f"a{i + 1}" for i in range(m))
    return LieAlgebra(c, labels)


def transvection_form(D, omega=None) -> BilinearForm:
    """Ad-invariant form: ``<L, z> = 1`` and ``<x, y> = omega(D^{-1} x, y)`` on ``a``."""
    exact = is_exact(D) and (omega is None or is_exact(omega))
    D = as_array(D, exact)
    m = D.shape[0]
    omega = heis_omega(m // 2, exact) if omega is None else as_array(omega, exact)
    if exact:
        Dinv = from_sympy(to_sympy(D).inv())
    else:
        Dinv = np.linalg.inv(D)
    Ba = Dinv.T @ omega
    if not exact:
        Ba = 0.5 * (Ba + Ba.T)
    d = m + 2
    B = np.array([[_as_num(0, exact)] * d for _ in range(d)], dtype=object if exact else float)
    B[0, 1] = B[1, 0] = _as_num(1, exact)
    B[2:, 2:] = Ba
    return BilinearForm(B)


def transvection_involution(n: int, exact: bool = True) -> np.ndarray:
    """``-1`` on ``L``, ``z`` and ``a_{n+1..2n}``; ``+1`` on ``a_{1..n}``."""
    diag = [-1, -1] + [1] * n + [-1] * n
    out = np.diag([_as_num(x, exact) for x in diag])
    return out.astype(object) if exact else out.astype(float)


# ---------------------------------------------------------------------------
# symmetric triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymmetricTriple:
    algebra: LieAlgebra
    form: BilinearForm
    involution: np.ndarray

    def __post_init__(self):
        exact = self.algebra.exact and is_exact(self.involution)
        object.__setattr__(self, "involution", as_array(self.involution, exact))

    @property
    def exact(self) -> bool:
        return (
            self.algebra.exact
            and self.form.matrix.dtype == object
            and self.involution.dtype == object
        )

    def axioms(self, tol: float = DEFAULT_TOL) -> VerificationReport:
        """Involutive automorphism preserving an ad-invariant form."""
        rep = VerificationReport("triple_axioms")
        T, B, alg = self.involution, self.form.matrix, self.algebra
        ident = np.eye(alg.dim, dtype=int).astype(T.dtype)
        r = max_abs(T @ T - ident)
        rep.add("involutive", _ok(r, self.exact, tol), r)
        c = alg.structure_constants
        lhs = np.einsum("ijm,km->ijk", c, T)
        rhs = np.einsum("ai,bj,abk->ijk", T, T, c)
        r = max_abs(lhs - rhs)
        rep.add("automorphism", _ok(r, self.exact, tol), r)
        r = max_abs(T.T @ B @ T - B)
        rep.add("form_invariant", _ok(r, self.exact, tol), r)
        ok, r = is_ad_invariant(alg, B, tol)
        rep.add("form_ad_invariant", ok, r)
        return rep


@dataclass
class TransvectionReport:
    plus_space: np.ndarray
    minus_space: np.ndarray
    V: np.ndarray | None = None
    L: np.ndarray | None = None
    a_plus: np.ndarray | None = None
    a_minus: np.ndarray | None = None
    omega: np.ndarray | None = None
    verdicts: VerificationReport = field(default_factory=lambda: VerificationReport("appendix"))
    empty_tangent_space: bool = False
    #: ``ad_L`` on ``a`` in the basis ``a_plus`` followed by ``a_minus``
    D: np.ndarray | None = None

    @property
    def passed(self) -> bool:
        return (not self.empty_tangent_space) and self.verdicts.passed and bool(self.verdicts.checks)


APPENDIX_IDENTITIES = (
    "g_minus_bracket_in_g_plus",
    "a_minus_abelian",
    "a_plus_abelian",
    "a_minus_a_plus_in_RV",
    "heisenberg_bracket",
    "omega_nondegenerate",
    "flat_leaves",
    "L_non_inner",
)


def _span_basis(rows, exact: bool, tol: float = 1e-9) -> np.ndarray:
    """Row basis of the span of ``rows``."""
    rows = np.asarray(rows, dtype=object if exact else float)
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    if exact:
        m = to_sympy(rows)
        rref, piv = m.T.rref()
        return np.array([rows[i] for i in piv], dtype=object)
    u, sv, vt = np.linalg.svd(rows)
    r = int(np.sum(sv > tol * max(1.0, sv[0])))
    return vt[:r]


def _nullspace(mat, exact: bool, tol: float = 1e-9) -> np.ndarray:
    if exact:
        return exact_nullspace(mat)
    mat = np.asarray(mat, dtype=float)
    u, sv, vt = np.linalg.svd(mat)
    r = int(np.sum(sv > tol * max(1.0, sv[0] if sv.size else 1.0)))
    return vt[r:]


def _coords(basis_rows: np.ndarray, vec: np.ndarray, exact: bool) -> np.ndarray:
    """Coordinates of ``vec`` in a row basis (assumes membership)."""
    if exact:
        sol, params = to_sympy(basis_rows).T.gauss_jordan_solve(to_sympy(vec))
        return from_sympy(sol.subs({p: 0 for p in params})).ravel()
    x, *_ = np.linalg.lstsq(np.asarray(basis_rows, float).T, np.asarray(vec, float), rcond=None)
    return x


def analyze_symmetric_triple(
    triple: SymmetricTriple, V_candidate, tol: float = DEFAULT_TOL
) -> TransvectionReport:
    """Decompose a symmetric triple and verify the pp-wave transvection identities.

    Computes the eigenspaces of the involution, a lightlike ``L`` in the
    minus space with ``<L, V> = 1``, the transversal ``a = span(L, V)^perp``
    and its splitting, then checks each identity listed in
    ``APPENDIX_IDENTITIES`` with its residual.
    """
    alg, B, T = triple.algebra, triple.form.matrix, triple.involution
    exact = triple.exact and is_exact(V_candidate)
    if not exact:
        B, T = B.astype(float), T.astype(float)
    c = alg.structure_constants if exact else alg.structure_constants.astype(float)
    d = alg.dim
    ident = np.eye(d, dtype=int).astype(object if exact else float)
    if exact:
        ident = as_fraction_array(ident)
    plus = _nullspace(T - ident, exact)
    minus = _nullspace(T + ident, exact)
    report = TransvectionReport(plus, minus)
    if len(minus) == 0:
        report.empty_tangent_space = True
        report.verdicts.add("nonempty_tangent_space", False, 0.0, "g_minus = 0")
        return report

    V = as_array(V_candidate, exact)
    br = lambda x, y: np.einsum("i,j,ijk->k", x, y, c)  # noqa: E731
    form = lambda x, y: x @ B @ y  # noqa: E731
    central = max_abs(np.einsum("i,ijk->jk", V, c))
    if not _ok(central, exact, tol):
        raise ValueError(f"V candidate is not central (residual {central})")
    if not _ok(abs(form(V, V)), exact, tol):
        raise ValueError("V candidate is not isotropic")
    if not _ok(max_abs(T @ V + V), exact, tol):
        raise ValueError("V candidate is not anti-invariant under the involution")

    pair = [form(m, V) for m in minus]
    k = next((i for i, p in enumerate(pair) if not _ok(abs(p), exact, tol)), None)
    if k is None:
        raise DegeneratePairingError("degenerate pairing: <g_minus, V> = 0")
    L = minus[k] / pair[k]
    L = L - (form(L, L) / 2) * V

    a_plus = _span_basis(plus, exact)
    # a^- = g^- ∩ span(L, V)^perp, expressed through coordinates on g^-
    Mm = np.array([[form(m, L), form(m, V)] for m in minus], dtype=object if exact else float).T
    coeffs = _nullspace(Mm, exact)
    a_minus = (
        np.array([cf @ minus for cf in coeffs], dtype=object if exact else float)
        if len(coeffs)
        else np.empty((0, d), dtype=object if exact else float)
    )
    a_plus = np.array([p for p in a_plus], dtype=object if exact else float).reshape(-1, d)
    report.V, report.L, report.a_plus, report.a_minus = V, L, a_plus, a_minus
    a_basis = np.vstack([a_plus, a_minus]) if (len(a_plus) + len(a_minus)) else np.empty((0, d))

    v = report.verdicts

    def worst(vals):
        vals = list(vals)
        if not vals:
            return 0.0, None
        r, w = max(vals, key=lambda p: p[0])
        return r, (w if r else None)

    # [g^-, g^-] ⊆ g^+
    r, w = worst(
        (max_abs((b - T @ b) / 2), (i, j))
        for i, x in enumerate(minus) for j, y in enumerate(minus) for b in [br(x, y)]
    )
    v.add("g_minus_bracket_in_g_plus", _ok(r, exact, tol), r, w)

    r, w = worst((max_abs(br(x, y)), (i, j)) for i, x in enumerate(a_minus) for j, y in enumerate(a_minus))
    v.add("a_minus_abelian", _ok(r, exact, tol), r, w)
    r, w = worst((max_abs(br(x, y)), (i, j)) for i, x in enumerate(a_plus) for j, y in enumerate(a_plus))
    v.add("a_plus_abelian", _ok(r, exact, tol), r, w)

    def off_V(b):
        return max_abs(b - form(b, L) * V)

    r, w = worst((off_V(br(x, y)), (i, j)) for i, x in enumerate(a_minus) for j, y in enumerate(a_plus))
    v.add("a_minus_a_plus_in_RV", _ok(r, exact, tol), r, w)

    na = len(a_basis)
    om = np.array(
        [[form(br(L, x), y) for y in a_basis] for x in a_basis], dtype=object if exact else float
    ).reshape(na, na)
    report.omega = om
    r, w = worst(
        (max_abs(br(a_basis[i], a_basis[j]) - om[i, j] * V), (i, j))
        for i in range(na) for j in range(na)
    )
    v.add("heisenberg_bracket", _ok(r, exact, tol), r, w)

    if na:
        det = to_sympy(om).det() if exact else np.linalg.det(om.astype(float))
        det = Fraction(int(det.p), int(det.q)) if exact else float(det)
        nondeg = det != 0 if exact else abs(det) > tol
    else:
        det, nondeg = 0, False
    v.add("omega_nondegenerate", nondeg, 0.0 if nondeg else 1.0, {"det": det})

    r, w = worst(
        (max_abs(br(br(x, y), zz)), (i, j, k))
        for i, x in enumerate(a_minus) for j, y in enumerate(a_minus) for k, zz in enumerate(a_minus)
    )
    v.add("flat_leaves", _ok(r, exact, tol), r, w)

    # ad_L restricted to the ideal V^perp = RV + a, tested for innerness there
    n_basis = np.vstack([V.reshape(1, d), a_basis])
    m = len(n_basis)
    sub_c = np.empty((m, m, m), dtype=object if exact else float)
    res_closed = 0.0
    for i in range(m):
        for j in range(m):
            b = br(n_basis[i], n_basis[j])
            x = _coords(n_basis, b, exact)
            res_closed = max(res_closed, max_abs(x @ n_basis - b))
            sub_c[i, j] = x
    Dn = np.array([_coords(n_basis, br(L, e), exact) for e in n_basis], dtype=sub_c.dtype).T
    sub = LieAlgebra(sub_c, ("V",) + tuple(f"A{i}" for i in range(na)))
    wit = is_inner(sub, Dn, tol)
    v.add("L_non_inner", wit is None and _ok(res_closed, exact, tol), res_closed,
          None if wit is None else list(wit))
    report.D = np.array([_coords(a_basis, br(L, e), exact) for e in a_basis],
                         dtype=object if exact else float).T.reshape(na, na)
    return report
