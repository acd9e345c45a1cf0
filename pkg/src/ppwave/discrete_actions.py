"""Discrete subgroups of the isometry groups and their actions on the models.

Contents
--------
* :class:`HolonomySpec` holds a finite generating set.
* :func:`proper_criterion_exact` is the determinant criterion for properness
  of ``R L x S_0`` on ``X_E``.
* :func:`properness_sampler` is a word-ball return-count heuristic.
* :func:`build_osc_lattice` constructs lattices ``Z ⋉_A Heis_3(Z)`` of ``Osc_s``.
* :func:`classify_sol_subgroup` sorts finitely generated subgroups of ``Sol``.
* :func:`commutator_center_test`, :func:`leaf_density_test` and
  :func:`syndetic_hull_nilpotent` cover the remaining group-theoretic tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from ._exact import as_array, as_fraction_array, from_sympy, is_exact, numeric_rank, to_sympy
from .groups import (
    HeisElement,
    IsomElement,
    OscElement,
    ambient_commutator,
    ambient_inv,
    ambient_mul,
    heis_commutator,
    osc_inv,
    osc_mul,
)
from .lie_core import heis_omega, heisenberg, osc_s
from .model_spaces import ModelSpace, stabilizer_heis
from .numtheory import (
    DENOMINATOR_BOUND,
    discrete_subgroup_of_line,
    discrete_subgroup_of_plane,
    rational_approx,
)
from .reports import VerificationReport, _jsonable

__all__ = [
    "HolonomySpec",
    "LatticeCertificate",
    "PropernessReport",
    "SolVerdict",
    "proper_criterion_exact",
    "properness_sampler",
    "build_osc_lattice",
    "classify_sol_subgroup",
    "commutator_center_test",
    "leaf_density_test",
    "syndetic_hull_nilpotent",
    "simple_transitivity_check",
    "load_generators",
    "save_generators",
]

Element = Union[IsomElement, OscElement, HeisElement]


# ---------------------------------------------------------------------------
# generator sets
# ---------------------------------------------------------------------------


def _mul(g, h):
    if isinstance(g, IsomElement):
        return ambient_mul(g, h)
    if isinstance(g, OscElement):
        return osc_mul(g, h)
    return g * h


def _inv(g):
    if isinstance(g, IsomElement):
        return ambient_inv(g)
    if isinstance(g, OscElement):
        return osc_inv(g)
    return HeisElement(-g.xi, -g.z)


def _comm(g, h):
    if isinstance(g, IsomElement):
        return ambient_commutator(g, h)
    if isinstance(g, HeisElement):
        return heis_commutator(g, h)
    return _mul(_mul(g, h), _mul(_inv(g), _inv(h)))


def _vector(g) -> np.ndarray:
    """Flat float coordinates used for hashing and comparisons."""
    if isinstance(g, IsomElement):
        return np.concatenate([[float(g.s), float(g.t)], g.xi.astype(float), [float(g.z)]])
    if isinstance(g, OscElement):
        return g.vector()
    return np.concatenate([g.xi.astype(float), [float(g.z)]])


def _split(g) -> tuple[np.ndarray, np.ndarray, float]:
    """``(solvable part, Heisenberg xi, z)`` as floats."""
    v = _vector(g)
    if isinstance(g, IsomElement):
        return v[:2], v[2:6], v[6]
    if isinstance(g, OscElement):
        return v[:1], v[1:3], v[3]
    return np.zeros(0), v[:-1], v[-1]


def _identity_like(g):
    if isinstance(g, IsomElement):
        return IsomElement.identity(g.flavor)
    if isinstance(g, OscElement):
        return OscElement()
    return HeisElement.identity(g.n)


@dataclass
class HolonomySpec:
    """A finite generating set of a (hoped to be) discrete group."""

    generators: list
    label: str = ""
    model: str | None = None

    def __post_init__(self):
        kinds = {type(g) for g in self.generators}
        if len(kinds) > 1:
            raise ValueError("generators must all be of one element type")

    def symmetric(self) -> list:
        out = []
        for g in self.generators:
            out.append(g)
            out.append(_inv(g))
        return out

    def heis_part(self) -> list:
        """Generators with trivial solvable part (a sub-filter of ``Gamma_0``)."""
        return [g for g in self.generators if not np.any(_split(g)[0])]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "model": self.model,
            "generators": [g.to_json() for g in self.generators],
        }


def _element_from_json(d: dict):
    if "tau" in d:
        return OscElement.from_json(d)
    if "xi" in d and ("flavor" in d or "s" in d or "t" in d):
        return IsomElement.from_json(d)
    if "xi" in d:
        dec = (lambda x: Fraction(x) if isinstance(x, (str, int)) else float(x))
        return HeisElement([dec(x) for x in d["xi"]], dec(d.get("z", 0)))
    raise ValueError(f"unrecognized group element {d!r}")


def load_generators(path: str | Path | dict) -> HolonomySpec:
    """Read ``{"label", "model", "generators": [...]}`` or a bare list of elements."""
    data = path if isinstance(path, (dict, list)) else json.loads(Path(path).read_text())
    if isinstance(data, list):
        data = {"generators": data}
    gens = [_element_from_json(d) for d in data.get("generators", [])]
    return HolonomySpec(gens, data.get("label", ""), data.get("model"))


def save_generators(spec: HolonomySpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec.to_json(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# exact properness criterion on X_E
# ---------------------------------------------------------------------------


@dataclass
class PropernessReport:
    """Outcome of a properness test.

    ``mode`` is ``"exact-criterion"`` or ``"sampling"``.  In exact mode
    ``proper`` is a certified verdict and ``witness`` a root ``s`` with a
    stabilizer vector when the criterion fails.  In sampling mode
    ``return_counts[r]`` counts group elements of word length at most
    ``r + 1`` moving some sample of the box back into the box.
    """

    mode: str
    proper: bool | None
    witness: dict | None = None
    return_counts: list[int] = field(default_factory=list)
    margin: float | None = None
    details: dict = field(default_factory=dict)
    verdicts: VerificationReport = field(default_factory=lambda: VerificationReport("properness"))

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "mode": self.mode,
            "proper": self.proper,
            "witness": _jsonable(self.witness),
            "return_counts": list(self.return_counts),
            "margin": _jsonable(self.margin),
            "details": _jsonable(self.details),
            "checks": self.verdicts.to_dict()["checks"],
            "passed": self.verdicts.passed,
        }


def _quotient_plane(S0_basis) -> tuple[np.ndarray, bool]:
    """Two vectors of ``a`` spanning ``S_0 / z`` (basis order ``(z, a1..a4)``)."""
    exact = is_exact(S0_basis)
    B = as_array(S0_basis, exact)
    if B.ndim != 2 or B.shape[1] != 5:
        raise ValueError("S0 basis vectors must have 5 components (z, a1, a2, a3, a4)")
    z = as_array([1, 0, 0, 0, 0], exact)
    if exact:
        r_with = to_sympy(np.vstack([B, z])).rank()
        r_without = to_sympy(B).rank()
    else:
        r_with = numeric_rank(np.vstack([B, z]))
        r_without = numeric_rank(B)
    if r_with != r_without:
        raise ValueError("S0 must contain the center z")
    if r_without != 3:
        raise ValueError(f"S0 must be 3-dimensional, got rank {r_without}")
    Q = B[:, 1:]
    if exact:
        m = to_sympy(Q)
        _, piv = m.T.rref()
        U = np.array([Q[i] for i in piv], dtype=object)
    else:
        _, sv, vt = np.linalg.svd(Q.astype(float))
        U = vt[:2]
    if len(U) != 2:
        raise ValueError("S0 / z must be 2-dimensional")
    return U, exact


def _det4(cols) -> float:
    return float(np.linalg.det(np.column_stack(cols)))


def _trig_coefficients(U, exact: bool):
    """``det[u1, u2, w1(s), w2(s)] = c0 + c1 cos 2s + c2 sin 2s`` on ``X_E``."""

    def det_at(c, sn):
        w1 = [c, 0, sn, 0]
        w2 = [0, c, 0, -sn]
        M = np.column_stack([U[0], U[1], w1, w2])
        if exact:
            d = to_sympy(as_fraction_array(M)).det()
            return Fraction(int(d.p), int(d.q))
        return float(np.linalg.det(M.astype(float)))

    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    alpha = det_at(one, zero)
    gamma = det_at(zero, one)
    beta = det_at(one, one) - alpha - gamma
    half = Fraction(1, 2) if exact else 0.5
    return (alpha + gamma) * half, (alpha - gamma) * half, beta * half


def proper_criterion_exact(S0_basis, model="X_E", grid: int = 10_000) -> PropernessReport:
    """Decide ``S_0 ∩ Stab_{Heis_5}(p_s) = 0`` for every real ``s``.

    The determinant ``det[u1, u2, w1(s), w2(s)]`` is the trigonometric
    polynomial ``c0 + c1 cos 2s + c2 sin 2s``.  It has no real root exactly
    when ``|c0| > R = hypot(c1, c2)``; this inequality is the certificate and
    is decided in rational arithmetic for rational input.  The report also
    samples ``|det|`` on a ``grid``-point mesh of ``[0, 2 pi)`` and combines
    it with the derivative bound ``2R``.  When a root exists the witness is
    the root ``s`` and a vector ``alpha w1 + beta w2`` lying in ``S_0``.
    """
    name = model if isinstance(model, str) else "X_" + model.flavor
    if name != "X_E":
        raise NotImplementedError("the exact criterion is implemented for X_E only")
    U, exact = _quotient_plane(S0_basis)
    c0, c1, c2 = _trig_coefficients(U, exact)
    R2 = c1 * c1 + c2 * c2
    proper = c0 * c0 > R2
    R = math.sqrt(float(R2))
    s_grid = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    dets = float(c0) + float(c1) * np.cos(2 * s_grid) + float(c2) * np.sin(2 * s_grid)
    grid_min = float(np.min(np.abs(dets)))
    h = 2 * np.pi / grid
    lower = grid_min - 2 * R * h / 2
    rep = PropernessReport("exact-criterion", bool(proper), margin=grid_min)
    rep.details = {
        "c0": c0, "c1": c1, "c2": c2,
        "grid_points": grid,
        "grid_min_abs_det": grid_min,
        "certified_lower_bound": lower,
        "exact_arithmetic": exact,
    }
    rep.verdicts.add("no_real_root", bool(proper), 0.0 if proper else abs(float(c0)) - R,
                     None if proper else "root exists")
    if not proper:
        rep.witness = _root_witness(U, float(c0), float(c1), float(c2))
    return rep


def _root_witness(U, c0: float, c1: float, c2: float) -> dict:
    R = math.hypot(c1, c2)
    if R == 0:
        s = 0.0  # determinant identically zero
    else:
        phi = math.atan2(c2, c1)
        s = 0.5 * (phi + math.acos(max(-1.0, min(1.0, -c0 / R))))
    w1, w2 = stabilizer_heis(s, "X_E")
    M = np.column_stack([np.asarray(U[0], float), np.asarray(U[1], float), w1, w2])
    _, sv, vt = np.linalg.svd(M)
    x = vt[-1]
    alpha, beta = x[2], x[3]
    nrm = math.hypot(alpha, beta)
    alpha, beta = alpha / nrm, beta / nrm
    vec = alpha * w1 + beta * w2
    # distance of the stabilizer vector from span(u1, u2)
    Uf = np.column_stack([np.asarray(U[0], float), np.asarray(U[1], float)])
    coef, *_ = np.linalg.lstsq(Uf, vec, rcond=None)
    return {
        "s": s,
        "alpha": alpha,
        "beta": beta,
        "vector": vec,
        "det": c0 + c1 * math.cos(2 * s) + c2 * math.sin(2 * s),
        "span_residual": float(np.max(np.abs(Uf @ coef - vec))),
    }


def simple_transitivity_check(S0_basis, model: ModelSpace, n_samples: int = 50,
                              seed: int = 0) -> VerificationReport:
    """Orbit map ``(l, x1, x2, z) -> exp(l L) exp(x1 u1 + x2 u2 + z 𝔷) o``.

    At sampled targets, solve for the preimage and confirm that acting with
    it reproduces the target (surjectivity and injectivity of the orbit map
    at those points).  The residual is the worst round-trip error.
    """
    U, _ = _quotient_plane(S0_basis)
    U = np.array(U, dtype=float)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("simple_transitivity")
    worst, min_det = 0.0, np.inf
    n = model.n
    for _ in range(n_samples):
        q = rng.uniform(-3, 3, model.dim)
        ell, a, v = q[0], q[1:-1], q[-1]
        # (rho(-l) (x1 u1 + x2 u2))^- = a
        M = (model.group.rho([-ell]) @ U.T)[n:, :]
        d = abs(np.linalg.det(M))
        min_det = min(min_det, d)
        if d < 1e-12:
            worst = np.inf
            continue
        x = np.linalg.solve(M, a)
        xi = U.T @ x
        eta = model.group.rho([-ell]) @ xi
        zc = v + 0.5 * model.embed_minus(eta[n:]) @ model._J @ np.concatenate([eta[:n], np.zeros(n)])
        img = model.act_many((np.array([ell]), xi, zc), np.zeros((1, model.dim)))[0]
        worst = max(worst, float(np.max(np.abs(img - q))))
    rep.add("orbit_map_bijective", bool(worst < 1e-9), worst, {"min_abs_det": min_det})
    return rep


# ---------------------------------------------------------------------------
# sampling heuristic
# ---------------------------------------------------------------------------


def _box_samples(dim: int, radius: float, per_axis: int) -> np.ndarray:
    axis = np.linspace(-radius, radius, per_axis)
    return np.array(list(product(axis, repeat=dim)))


def properness_sampler(spec: HolonomySpec, model: ModelSpace, box_radius: float = 1.0,
                       word_radius: int = 6, per_axis: int = 5, tol: float = 1e-9,
                       max_elements: int = 2_000_000) -> PropernessReport:
    """Count elements of the word ball that return the box ``K`` to itself.

    Breadth-first enumeration over reduced words in the symmetric generating
    set.  Elements are deduplicated by rounding their coordinates to
    ``tol``.  ``K = [-r, r]^dim`` is represented by a grid of
    ``per_axis^dim`` points including the corners; ``g`` is counted when it
    maps some grid point into ``K``.  The verdict is ``stable`` when the last
    three counts agree; a non-identity element fixing a grid point raises the
    freeness flag.
    """
    if not spec.generators:
        raise ValueError("generator list is empty")
    if word_radius > 12:
        raise ValueError("word_radius is limited to 12")
    gens = spec.symmetric()
    K = _box_samples(model.dim, box_radius, per_axis)
    one = _identity_like(gens[0])

    def key(g):
        return tuple(np.round(_vector(g) / tol).astype(np.int64))

    def returns(g) -> tuple[bool, bool]:
        # the leaf coordinate is translated by the R-part, so large shifts
        # cannot bring the box back
        shift = _split(g)[0]
        if len(shift) and abs(shift[0]) > 2 * box_radius + 1e-9:
            return False, False
        img = model.act_many(g, K)
        inside = np.all(np.abs(img) <= box_radius + 1e-9, axis=1)
        fixed = np.all(np.abs(img - K) < 1e-9, axis=1)
        return bool(inside.any()), bool(fixed.any())

    seen = {key(one)}
    frontier = [(one, -1)]
    returning = 1  # the identity
    counts = []
    fixer = None
    for _ in range(word_radius):
        nxt = []
        for g, last in frontier:
            for i, s in enumerate(gens):
                if last >= 0 and i == (last ^ 1):
                    continue  # immediate backtrack
                h = _mul(g, s)
                k = key(h)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((h, i))
                back, fixed = returns(h)
                if back:
                    returning += 1
                if fixed and fixer is None:
                    fixer = h
        frontier = nxt
        counts.append(returning)
        if len(seen) > max_elements:
            break
    stable = len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]
    rep = PropernessReport("sampling", None, return_counts=counts)
    rep.details = {
        "box_radius": box_radius,
        "word_radius": word_radius,
        "grid_points": len(K),
        "elements_enumerated": len(seen),
        "stable": stable,
        "free": fixer is None,
    }
    rep.verdicts.add("return_counts_stable", stable, 0.0, counts)
    rep.verdicts.add("free", fixer is None, 0.0, None if fixer is None else _vector(fixer))
    if fixer is not None:
        rep.witness = {"fixing_element": _vector(fixer)}
    return rep


# ---------------------------------------------------------------------------
# oscillator lattices
# ---------------------------------------------------------------------------


@dataclass
class LatticeCertificate:
    hull_basis: np.ndarray
    generator_logs: np.ndarray
    verdicts: VerificationReport
    monodromy: np.ndarray | None = None
    conjugator: np.ndarray | None = None

    @property
    def passed(self) -> bool:
        return self.verdicts.passed

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "hull_basis": _jsonable(self.hull_basis),
            "generator_logs": _jsonable(self.generator_logs),
            "monodromy": _jsonable(self.monodromy),
            "conjugator": _jsonable(self.conjugator),
            "passed": self.passed,
            "checks": self.verdicts.to_dict()["checks"],
        }


def _osc_log(g: OscElement) -> np.ndarray:
    """``log`` in ``osc_s`` coordinates ``(T, X, Y, Z)``.

    Inverts the closed-form exponential: with ``tau != 0`` the ``(x, y)``
    part is ``F(1) alpha`` for ``F = diag(phi1(tau), phi1(-tau))`` and the
    center coordinate picks up ``1/2 omega(alpha, G(1) alpha)``.
    """
    from .groups import _flow_integrals, osc_group

    tau = float(g.tau)
    A = osc_group().generator([tau])
    _, F, G = _flow_integrals(A, 1.0)
    alpha = np.linalg.solve(F, np.array([float(g.x), float(g.y)]))
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    mu = float(g.z) - 0.5 * alpha @ J @ (G @ alpha)
    return np.array([tau, alpha[0], alpha[1], mu])


def _bracket_closure(alg, vectors: np.ndarray, exact: bool, tol: float = 1e-9) -> np.ndarray:
    """Smallest subalgebra containing ``vectors`` (row basis)."""
    from .lie_core import _span_basis

    basis = _span_basis(vectors, exact, tol) if len(vectors) else np.empty((0, alg.dim))
    while True:
        new = [alg.bracket(x, y) for x in basis for y in basis]
        cand = np.vstack([basis] + [np.asarray(v).reshape(1, -1) for v in new]) if new else basis
        nb = _span_basis(cand, exact, tol)
        if len(nb) == len(basis):
            return basis
        basis = nb


def build_osc_lattice(A) -> tuple[HolonomySpec, LatticeCertificate]:
    """The lattice ``<gamma_hat> ⋉ Heis_3(Z)`` of ``Osc_s`` with monodromy ``A``.

    ``A`` must lie in ``SL(2, Z)`` with trace ``> 2``.  With ``P`` the
    determinant-one matrix whose inverse's columns are eigenvectors of ``A``
    (for ``lam > 1`` then ``1/lam``), the generators are
    ``gamma_hat = (log lam, 0, 0, 0)`` and ``g_i = (0, P e_i, 0)``.  Since
    ``diag(lam, 1/lam) P = P A``, conjugation by ``gamma_hat`` acts on the
    Heisenberg lattice through ``A``.

    The intersection with ``Heis_3`` is ``{exp(a u1 + b u2 + c z)}`` with
    ``(a, b)`` integral and ``c in Z/2``: conjugating ``g1`` by
    ``gamma_hat^-1`` gives ``exp(u1 - u2)`` while ``g1 g2^-1`` is
    ``exp(u1 - u2 - z/2)``, so ``exp(z/2)`` belongs to the group.
    """
    A = np.asarray(A)
    if A.shape != (2, 2) or not np.all(np.equal(np.mod(A, 1), 0)):
        raise ValueError("monodromy must be a 2x2 integer matrix")
    A = A.astype(np.int64)
    det = int(round(np.linalg.det(A)))
    tr = int(A[0, 0] + A[1, 1])
    if det != 1:
        raise ValueError(f"monodromy must have determinant 1, got {det}")
    if abs(tr) <= 2:
        kind = "parabolic" if abs(tr) == 2 else "elliptic"
        raise ValueError(f"non-hyperbolic monodromy ({kind}, trace {tr})")
    if tr < -2:
        raise ValueError(
            "monodromy with trace < -2 has negative eigenvalues and is not a time-one map of Osc_s"
        )
    Af = A.astype(float)
    vals, vecs = np.linalg.eig(Af)
    order = np.argsort(-vals.real)
    lam = float(vals[order[0]].real)
    E = np.real(vecs[:, order])
    P = np.linalg.inv(E)
    if np.linalg.det(P) < 0:
        P[1] *= -1
    P /= math.sqrt(np.linalg.det(P))
    tau = math.log(lam)
    gamma_hat = OscElement(tau, 0.0, 0.0, 0.0)
    g1 = OscElement(0.0, P[0, 0], P[1, 0], 0.0)
    g2 = OscElement(0.0, P[0, 1], P[1, 1], 0.0)
    spec = HolonomySpec([gamma_hat, g1, g2], label=f"osc lattice A={A.tolist()}", model="X_H")

    rep = VerificationReport("osc_lattice")
    rep.add("monodromy_in_SL2Z", True, 0.0)
    rep.add("hyperbolic", True, 0.0, {"trace": tr, "lambda": lam})
    diag = np.diag([lam, 1.0 / lam])
    r = float(np.max(np.abs(diag @ P - P @ Af)))
    rep.add("conjugation_diagonalizes", r < 1e-10, r)

    Pinv = np.linalg.inv(P)
    worst, wit = 0.0, None
    for g in (g1, g2):
        for h in (gamma_hat, osc_inv(gamma_hat)):
            c = osc_mul(osc_mul(h, g), osc_inv(h))
            m = Pinv @ np.array([float(c.x), float(c.y)])
            err = max(float(np.max(np.abs(m - np.round(m)))), abs(float(c.tau)),
                      abs(2 * float(c.z) - round(2 * float(c.z))))
            if err > worst:
                worst, wit = err, c.vector()
    rep.add("normalizes_heis_lattice", worst < 1e-9, worst, wit)

    cm = osc_mul(osc_mul(g1, g2), osc_mul(osc_inv(g1), osc_inv(g2)))
    r = float(np.max(np.abs(cm.vector() - np.array([0, 0, 0, 1.0]))))
    rep.add("commutator_is_unit_center", r < 1e-10, r, cm.vector())

    logs = np.array([_osc_log(g) for g in spec.generators])
    alg = osc_s()
    hull = _bracket_closure(alg, logs, exact=False)
    rep.add("hull_is_osc_s", len(hull) == 4, 0.0, {"hull_dim": len(hull)})
    cert = LatticeCertificate(hull, logs, rep, monodromy=A, conjugator=P)
    return spec, cert


# ---------------------------------------------------------------------------
# Sol subgroups
# ---------------------------------------------------------------------------

SolVerdict = str  # "lattice" | "dense_translations" | "affine_line" | "abelian" | "inconclusive"


def _sol_mul(g, h):
    t1, v1 = g
    t2, v2 = h
    return t1 + t2, v1 + np.array([math.exp(t1), math.exp(-t1)]) * v2


def _sol_inv(g):
    t, v = g
    return -t, -np.array([math.exp(-t), math.exp(t)]) * v


def _sol_comm(g, h):
    return _sol_mul(_sol_mul(g, h), _sol_mul(_sol_inv(g), _sol_inv(h)))


def _sol_pow(g, k: int):
    out = (0.0, np.zeros(2))
    base = g if k >= 0 else _sol_inv(g)
    for _ in range(abs(k)):
        out = _sol_mul(out, base)
    return out


def classify_sol_subgroup(generators: Sequence, bound: int = DENOMINATOR_BOUND,
                          tol: float = 1e-9) -> tuple[SolVerdict, dict]:
    """Sort ``Lambda = <generators>`` in ``Sol = R ⋉ R^2`` into the Sol cases.

    Multiplication is ``(t1, v1)(t2, v2) = (t1 + t2, v1 + diag(e^t1, e^-t1) v2)``.
    ``Lambda_0 = Lambda ∩ R^2`` is approximated by the pure translations, all
    commutators, their conjugates by the hyperbolic generators (powers up to
    2) and the words ``g_i^q g_j^-p`` for generators with ``t_i / t_j = p/q``.
    The order of decisions is

    1. ``Lambda_0`` not discrete: ``affine_line`` if a hyperbolic generator
       exists and a single translation conjugates everything onto one
       eigenline, otherwise ``dense_translations``;
    2. discrete and abelian: ``abelian``;
    3. discrete of rank 2 with discrete ``t``-projection: ``lattice``;
    4. anything else: ``inconclusive``.

    Returns the verdict and a dictionary of intermediate data.
    """
    gens = [(float(t), np.asarray(v, dtype=float)) for t, v in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    if len(gens) > 6:
        raise ValueError("at most 6 generators are supported")
    eps = 1e-12
    hyper = [g for g in gens if abs(g[0]) > eps]
    trans = [g[1] for g in gens if abs(g[0]) <= eps]
    W = list(trans)
    comms = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = _sol_comm(gens[i], gens[j])
            comms.append(c[1])
            for k in range(len(gens)):
                comms.append(_sol_comm(c, gens[k])[1])
    W += comms
    for i in range(len(hyper)):
        for j in range(i + 1, len(hyper)):
            q = rational_approx(hyper[i][0] / hyper[j][0], bound)
            if q is not None and q.denominator <= 1000 and abs(q.numerator) <= 1000:
                w = _sol_mul(_sol_pow(hyper[i], q.denominator), _sol_pow(hyper[j], -q.numerator))
                W.append(w[1])
    base = list(W)
    for g in hyper:
        for k in (1, 2):
            for sgn in (1, -1):
                e = np.array([math.exp(sgn * k * g[0]), math.exp(-sgn * k * g[0])])
                W += [e * w for w in base]
    W = [w for w in W if np.linalg.norm(w) > tol]
    discrete, rank = discrete_subgroup_of_plane(W, bound, tol)
    rescaled = discrete and rank == 1 and bool(hyper)
    if rescaled:
        # a hyperbolic element rescales the line of Lambda_0 by e^{+-t} != 1,
        # so Lambda_0 contains arbitrarily short vectors (e.g. Z[1/2])
        discrete = False
    t_discrete = discrete_subgroup_of_line([g[0] for g in gens], bound)
    abelian = all(
        np.linalg.norm(_sol_comm(gens[i], gens[j])[1]) <= tol
        for i in range(len(gens)) for j in range(i + 1, len(gens))
    )
    info = {
        "translations_found": len(W),
        "lambda0_discrete": discrete,
        "lambda0_rank": rank,
        "line_rescaled_by_hyperbolic": rescaled,
        "t_projection_discrete": t_discrete,
        "has_hyperbolic": bool(hyper),
        "abelian": abelian,
    }
    if not discrete:
        if hyper:
            line = _eigenline_conjugator(gens, W, tol)
            if line is not None:
                info["eigenline"] = line[0]
                info["conjugator"] = line[1]
                return "affine_line", info
        return "dense_translations", info
    if abelian:
        return "abelian", info
    if rank == 2 and t_discrete and hyper:
        return "lattice", info
    return "inconclusive", info


def _eigenline_conjugator(gens, W, tol):
    """A translation ``w`` conjugating every generator onto one eigen-axis.

    Conjugation by ``(0, w)`` sends ``(t, v)`` to ``(t, v + (I - B(t)) w)``.
    For the axis ``e_1`` the second coordinates must vanish, which fixes
    ``w_2`` from any hyperbolic generator; translations are unchanged by
    conjugation and must already lie on the axis.
    """
    for axis in (0, 1):
        other = 1 - axis
        if any(abs(w[other]) > tol * max(1.0, np.linalg.norm(w)) for w in W):
            continue
        w_o = None
        ok = True
        for t, v in gens:
            b = math.exp(-t) if other == 1 else math.exp(t)
            if abs(t) <= 1e-12:
                if abs(v[other]) > tol:
                    ok = False
                    break
                continue
            cand = -v[other] / (1 - b)
            if w_o is None:
                w_o = cand
            elif abs(cand - w_o) > tol * max(1.0, abs(w_o)):
                ok = False
                break
        if ok:
            w = np.zeros(2)
            w[other] = 0.0 if w_o is None else w_o
            return ("e1" if axis == 0 else "e2"), w
    return None


# ---------------------------------------------------------------------------
# parallel flow, leaves, hulls
# ---------------------------------------------------------------------------


def _is_central_nontrivial(g, tol: float = 1e-9) -> bool:
    solv, xi, z = _split(g)
    return bool(np.all(np.abs(solv) < tol) and np.all(np.abs(xi) < tol) and abs(z) > tol)


def commutator_center_test(spec: HolonomySpec, tol: float = 1e-9):
    """First nontrivial element of ``[Gamma, Gamma] ∩ Z`` among short commutators.

    Tries ``[g_i, g_j]`` for generators and their inverses, then the nested
    ``[[g_i, g_j], g_k]``.  Returns ``None`` if none is central.
    """
    gens = spec.symmetric()
    level1 = []
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            c = _comm(g, h)
            if _is_central_nontrivial(c, tol):
                return c
            level1.append(c)
    for c in level1:
        for h in gens:
            d = _comm(c, h)
            if _is_central_nontrivial(d, tol):
                return d
    return None


def leaf_density_test(spec: HolonomySpec, bound: int = DENOMINATOR_BOUND) -> str:
    """Whether ``p_1(Gamma)`` is closed or dense in ``R``.

    ``closed`` when all pairwise ratios of nonzero ``s``-components are
    rational with denominator at most ``bound``; ``dense`` when some ratio's
    continued fraction runs past the bound.
    """
    svals = [float(_split(g)[0][0]) if len(_split(g)[0]) else 0.0 for g in spec.generators]
    nz = [s for s in svals if abs(s) > 1e-12]
    if not nz:
        return "closed"
    finite = all(np.isfinite(nz))
    if not finite:
        return "inconclusive"
    return "closed" if discrete_subgroup_of_line(nz, bound) else "dense"


def syndetic_hull_nilpotent(gens: Sequence[HeisElement], tol: float = 1e-9) -> np.ndarray:
    """Lie algebra of the syndetic hull of ``<gens>`` in ``Heis_{2n+1}``.

    In exponential coordinates ``log(xi, z) = xi + z 𝔷``; the hull algebra is
    the span of these logarithms closed under bracket.  Rows of the result
    are in the basis ``(z, a1, ..., a2n)``; arithmetic is exact for rational
    input.
    """
    gens = list(gens)
    if not gens:
        return np.empty((0, 0))
    n = gens[0].n
    alg = heisenberg(n)
    exact = all(g.xi.dtype == object and isinstance(g.z, Fraction) for g in gens)
    rows = []
    for g in gens:
        row = [g.z] + list(g.xi)
        rows.append(row)
    logs = as_array(np.array(rows, dtype=object), exact)
    if not exact:
        alg = type(alg)(alg.structure_constants.astype(float), alg.basis_labels)
    return _bracket_closure(alg, logs, exact, tol)
