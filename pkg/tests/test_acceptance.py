"""Acceptance suite: one test per criterion, each printing a PASS or FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _corpus import CORPUS  # noqa: E402
from _oracles import geodesic_oracle  # noqa: E402
from ppwave import discrete_actions as da  # noqa: E402
from ppwave import groups as gr  # noqa: E402
from ppwave import lie_core as lc  # noqa: E402
from ppwave import model_spaces as ms  # noqa: E402

RESULTS: list[str] = []


def report(name: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _match(got, want) -> float:
    rest = [complex(v) for v in got]
    worst = 0.0
    for w in want:
        i = min(range(len(rest)), key=lambda k: abs(rest[k] - w))
        worst = max(worst, abs(rest.pop(i) - w))
    return worst


# ---------------------------------------------------------------------------


def criterion_appendix() -> bool:
    triple = lc.SymmetricTriple(lc.osc_s(), lc.osc_form(), lc.osc_involution())
    start = time.perf_counter()
    rep = lc.analyze_symmetric_triple(triple, lc.osc_s().basis("Z"))
    elapsed = time.perf_counter() - start
    checks = [rep.verdicts[name] for name in lc.APPENDIX_IDENTITIES]
    exact = triple.algebra.exact
    ok = exact and all(c.status == "pass" and c.residual == 0 for c in checks) and elapsed < 1.0
    failed = [c.name for c in checks if c.status != "pass" or c.residual != 0]
    return report("appendix identities on osc_s", ok,
                  f"{len(checks) - len(failed)}/8 exact, rational={exact}, {elapsed:.3f}s"
                  + (f", failing {failed}" if failed else ""))


def criterion_spectra() -> bool:
    rng = np.random.default_rng(0)
    worst_h = worst_e = 0.0
    for _ in range(100):
        s, t = rng.uniform(-5, 5, 2)
        worst_h = max(worst_h, _match(lc.eigen_spectrum(lc.derivation_hyperbolic(s, t)),
                                      [a * s + b * t for a in (1, -1) for b in (1, -1)]))
        worst_e = max(worst_e, _match(lc.eigen_spectrum(lc.derivation_elliptic(s, t)),
                                      [a * t + b * 1j * s for a in (1, -1) for b in (1, -1)]))
    table = np.array([[1, -1, -1, 1], [-1, 1, -1, 1], [1, 1, -1, -1], [1, 1, 1, 1]], dtype=float)
    worst_col = 0.0
    for t in rng.uniform(-3, 3, 10):
        D = lc.derivation_hyperbolic(1.0, t).astype(float)
        vals, vecs = lc.eigenvector_table(D)
        for col in table.T:
            lam = (col @ D @ col) / (col @ col)
            i = int(np.argmin([abs(v - lam) for v in vals]))
            v = np.real(vecs[:, i])
            worst_col = max(worst_col, float(np.max(np.abs(v - (v @ col) / (col @ col) * col))),
                            float(np.max(np.abs(D @ col - lam * col))))
    ok = worst_h < 1e-10 and worst_e < 1e-10 and worst_col < 1e-10
    return report("derivation spectra", ok,
                  f"H {worst_h:.1e}, E {worst_e:.1e}, eigenvector table {worst_col:.1e} (tol 1e-10)")


def criterion_planes() -> bool:
    rng = np.random.default_rng(1)
    bad_e, bad_h, n = 0, 0, 0
    while n < 50:
        s, t = rng.uniform(-5, 5, 2)
        if abs(s * t) < 1e-3:
            continue
        try:
            planes_e = lc.invariant_planes(lc.derivation_elliptic(s, t), unimodular_only=True)
            planes_h = lc.invariant_planes(lc.derivation_hyperbolic(s, t), unimodular_only=True)
        except lc.DegenerateSpectrumError:
            continue
        n += 1
        bad_e += bool(planes_e)
        kinds = [lc.plane_to_subalgebra(p) for p in planes_h]
        bad_h += kinds != ["heisenberg", "heisenberg"]
    return report("invariant-plane dichotomy", bad_e == 0 and bad_h == 0,
                  f"{n} samples, elliptic with planes {bad_e}, hyperbolic misfits {bad_h}")


def criterion_symplectic() -> bool:
    omega = lc.heis_omega(2)
    worst = Fraction(0)
    # L_{s,t} = s L_{1,0} + t L_{0,1}, so the basis cases and linearity decide it
    linear = True
    rng = np.random.default_rng(2)
    for Lfun in (lc.derivation_hyperbolic, lc.derivation_elliptic):
        for s, t in [(1, 0), (0, 1)] + [(Fraction(int(a), int(b)), Fraction(int(c), int(d)))
                                        for a, b, c, d in zip(rng.integers(-9, 10, 30), rng.integers(1, 9, 30),
                                                              rng.integers(-9, 10, 30), rng.integers(1, 9, 30))]:
            D = Lfun(s, t)
            R = omega @ D + D.T @ omega
            worst = max(worst, max(abs(x) for x in R.flat))
            linear &= bool(np.all(D == s * Lfun(1, 0) + t * Lfun(0, 1)))
    ok = worst == 0 and linear
    return report("symplectic derivations", ok, f"max |omega L + L^T omega| = {worst} (exact), linear={linear}")


def criterion_geodesics() -> bool:
    model = ms.model_space("X_H")
    rng = np.random.default_rng(3)
    ts = np.linspace(-10, 10, 201)
    start = time.perf_counter()
    worst, worst_speed = 0.0, 0.0
    for _ in range(20):
        x = rng.uniform(-1, 1, 4)
        u = rng.uniform(-1, 1, 4)
        u[0] *= 0.3
        p = ms.ModelPoint.from_coords(x)
        trace = ms.geodesic_trace(model, p, u, ts)
        ref = geodesic_oracle("H", x, model.body_to_coords(p, u), ts)
        worst = max(worst, float(np.max(np.abs(trace[:, 1:5] - ref))))
        worst_speed = max(worst_speed, float(np.ptp(trace[:, -1])))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and worst_speed < 1e-8 and elapsed < 30
    return report("geodesic oracle agreement", ok,
                  f"sup error {worst:.1e} (tol 1e-6), speed drift {worst_speed:.1e} (tol 1e-8), {elapsed:.1f}s")


def _s0(*vectors):
    rows = [[Fraction(0)] + [Fraction(x) for x in v] for v in vectors]
    rows.append([Fraction(1)] + [Fraction(0)] * 4)
    return np.array(rows, dtype=object)


def criterion_properness() -> bool:
    families = {
        "T4 <a1+a4, a2+a4, z>": _s0([1, 0, 0, 1], [0, 1, 0, 1]),
        "Heis3 <a1+a3+a4, a2+2a3+a4, z>": _s0([1, 0, 1, 1], [0, 1, 2, 1]),
    }
    parts, ok = [], True
    for name, basis in families.items():
        rep = da.proper_criterion_exact(basis, grid=10_000)
        good = rep.proper is True and rep.margin > 1e-3
        ok &= good
        parts.append(f"{name}: proper={rep.proper}, margin={rep.margin:.2e}")
    sol = da.proper_criterion_exact(_s0([1, 0, 1, 0], [0, 1, 0, 1]))
    w = sol.witness or {}
    s, a, b = w.get("s", math.nan), w.get("alpha", 0.0), w.get("beta", 0.0)
    e1 = abs(a * math.cos(s) - a * math.sin(s))
    e2 = abs(b * math.cos(s) + b * math.sin(s))
    sol_ok = sol.proper is False and (a, b) != (0.0, 0.0) and e1 < 1e-10 and e2 < 1e-10
    ok &= sol_ok
    parts.append(f"Sol witness s={s:.6f} residuals {e1:.1e}, {e2:.1e}")
    return report("proper-action certificates", ok, "; ".join(parts))


def criterion_lattice() -> bool:
    start = time.perf_counter()
    spec, cert = da.build_osc_lattice([[2, 1], [1, 1]])
    rep = da.properness_sampler(spec, ms.model_space("X_H"), box_radius=0.5, word_radius=8)
    counts = rep.return_counts
    window = counts[3:8]  # word radii 4..8
    plateau = window[-1]
    first = next(i for i, c in enumerate(window) if c == plateau)
    stable = all(c == plateau for c in window[first:]) and len(window) - first >= 3
    central = da.commutator_center_test(spec)
    elapsed = time.perf_counter() - start
    ok = cert.passed and stable and rep.details["free"] and central is not None and elapsed < 60
    return report("oscillator lattice pipeline", ok,
                  f"certificate={cert.passed}, counts r=4..8 {window} (plateau from r={4 + first}), "
                  f"central={None if central is None else float(central.z)}, {elapsed:.1f}s")


def criterion_normalization() -> bool:
    rng = np.random.default_rng(4)
    worst_formula, worst_zero = 0.0, 0.0
    for _ in range(50):
        flavor = "H" if rng.random() < 0.5 else "E"
        t0 = rng.uniform(0.1, 2.0) * rng.choice([-1, 1])
        a0 = rng.normal(size=4)
        gamma = gr.IsomElement(0, t0, a0, rng.normal(), flavor)
        alpha, conj = gr.normalize_hyperbolic(gamma)
        a1 = alpha.xi.astype(float)
        predicted = a1 + a0 - gr.rho(0.0, t0, flavor) @ a1
        scale = max(1.0, float(np.max(np.abs(a1))))
        worst_formula = max(worst_formula, float(np.max(np.abs(conj.xi.astype(float) - predicted))) / scale)
        worst_zero = max(worst_zero, float(np.max(np.abs(conj.xi.astype(float)))) / scale)
    ok = worst_formula < 1e-12 and worst_zero < 1e-12
    return report("conjugation normalization", ok,
                  f"formula residual {worst_formula:.1e}, solved part {worst_zero:.1e} (relative, 50 samples)")


def criterion_leaves() -> bool:
    rng = np.random.default_rng(5)
    worst = 0.0
    for flavor in ("H", "E"):
        model = ms.model_space("X_" + flavor)
        for _ in range(20):
            g = gr.IsomElement(*rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 4), rng.uniform(-1, 1), flavor)
            P = rng.uniform(-3, 3, (100, 4))
            f = np.array([ms.leaf_function(ms.ModelPoint.from_coords(x)) for x in P])
            fk = np.array([ms.leaf_function(ms.act(model, g, ms.ModelPoint.from_coords(x))) for x in P])
            worst = max(worst, float(np.ptp(fk - f)))
    flat_ok, nonflat = True, True
    for flavor in ("H", "E"):
        model = ms.model_space("X_" + flavor)
        basis = [[Fraction(int(i == k)) for i in range(4)] for k in range(4)]
        leaf = basis[1:]
        flat_ok &= all(all(c == 0 for c in ms.curvature_triple(model, x, y, z))
                       for x in leaf for y in leaf for z in leaf)
        nonflat &= any(any(c != 0 for c in ms.curvature_triple(model, x, y, z))
                       for x in basis for y in basis for z in basis)
    ok = worst < 1e-10 and flat_ok and nonflat
    return report("leaf structure", ok,
                  f"translation spread {worst:.1e} (tol 1e-10), flat on a^- + RV={flat_ok}, non-flat={nonflat}")


def criterion_sol() -> bool:
    wrong = []
    for name, (want, gens) in CORPUS.items():
        got, _ = da.classify_sol_subgroup(gens)
        if got != want:
            wrong.append(f"{name}: {got}")
    kinds = [w for w, _ in CORPUS.values()]
    detail = (f"{len(CORPUS)} groups ({kinds.count('lattice')} lattice, {kinds.count('dense_translations')} dense, "
              f"{kinds.count('affine_line')} affine), misclassified {len(wrong)}")
    return report("Sol classifier corpus", not wrong and len(CORPUS) == 12,
                  detail + (f": {wrong}" if wrong else ""))


CRITERIA = [
    criterion_appendix,
    criterion_spectra,
    criterion_planes,
    criterion_symplectic,
    criterion_geodesics,
    criterion_properness,
    criterion_lattice,
    criterion_normalization,
    criterion_leaves,
    criterion_sol,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__.removeprefix("criterion_") for c in CRITERIA])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
