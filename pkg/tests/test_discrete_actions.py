"""Properness criteria, lattices, Sol classification and hulls."""

import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _corpus import CORPUS, MONODROMIES
from ppwave import discrete_actions as da
from ppwave import groups as gr
from ppwave import lie_core as lc
from ppwave import model_spaces as ms

F = Fraction
Z_ROW = [1, 0, 0, 0, 0]


def s0(*vectors):
    return np.array([[F(0)] + [F(x) for x in v] for v in vectors] + [[F(x) for x in Z_ROW]], dtype=object)


TORI_LITERAL = s0([1, 0, 0, 1], [0, 1, 0, 1])
TORI_ABELIAN = s0([1, 0, 0, -1], [0, 1, -1, 0])
HEIS3 = s0([1, 0, 1, 1], [0, 1, 2, 1])
SOL = s0([1, 0, 1, 0], [0, 1, 0, 1])


# -- exact criterion ------------------------------------------------------------


@pytest.mark.parametrize("basis", [TORI_ABELIAN, HEIS3], ids=["abelian", "heis3"])
def test_proper_families(basis):
    rep = da.proper_criterion_exact(basis)
    assert rep.proper is True and rep.mode == "exact-criterion"
    assert rep.margin > 1e-3
    assert rep.details["certified_lower_bound"] > 0
    assert rep.witness is None


def test_heis3_family_is_not_abelian_and_abelian_family_is():
    assert lc.plane_to_subalgebra([[1, 0, 1, 1], [0, 1, 2, 1]]) == "heisenberg"
    assert lc.plane_to_subalgebra([[1, 0, 0, -1], [0, 1, -1, 0]]) == "abelian"


def test_trig_coefficients_are_exact_rationals():
    rep = da.proper_criterion_exact(TORI_LITERAL)
    c = (rep.details["c0"], rep.details["c1"], rep.details["c2"])
    assert c == (F(-1, 2), F(1, 2), F(-1, 2))


def test_literal_tori_span_meets_a_stabilizer():
    # c0^2 = 1/4 < c1^2 + c2^2 = 1/2: a root exists
    rep = da.proper_criterion_exact(TORI_LITERAL)
    assert rep.proper is False
    w = rep.witness
    vec = np.array(w["vector"])
    U = TORI_LITERAL[:2, 1:].astype(float)
    coef, *_ = np.linalg.lstsq(U.T, vec, rcond=None)
    assert np.max(np.abs(U.T @ coef - vec)) < 1e-10
    w1, w2 = ms.stabilizer_heis(w["s"])
    assert np.max(np.abs(w["alpha"] * w1 + w["beta"] * w2 - vec)) < 1e-12


def test_sol_witness_solves_both_equations():
    rep = da.proper_criterion_exact(SOL)
    assert rep.proper is False
    s, a, b = rep.witness["s"], rep.witness["alpha"], rep.witness["beta"]
    assert (a, b) != (0.0, 0.0)
    assert abs(a * math.cos(s) - a * math.sin(s)) < 1e-10
    assert abs(b * math.cos(s) + b * math.sin(s)) < 1e-10


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_criterion_agrees_with_grid(entries):
    u1, u2 = entries[:4], entries[4:]
    if np.linalg.matrix_rank(np.array([u1, u2], float)) < 2:
        return
    rep = da.proper_criterion_exact(s0(u1, u2))
    c0, c1, c2 = (float(rep.details[k]) for k in ("c0", "c1", "c2"))
    s = np.linspace(0, 2 * np.pi, 4001)
    dets = []
    for si in s:
        M = np.column_stack([u1, u2, [math.cos(si), 0, math.sin(si), 0], [0, math.cos(si), 0, -math.sin(si)]])
        dets.append(np.linalg.det(M))
    assert np.allclose(dets, c0 + c1 * np.cos(2 * s) + c2 * np.sin(2 * s), atol=1e-9)
    if rep.proper:
        assert min(abs(d) for d in dets) > 0
    else:
        assert rep.witness is not None and abs(rep.witness["det"]) < 1e-9


def test_criterion_input_validation():
    with pytest.raises(ValueError, match="center"):
        da.proper_criterion_exact(np.array([[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]], dtype=object))
    with pytest.raises(ValueError):
        da.proper_criterion_exact(s0([1, 0, 0, 0]))
    with pytest.raises(NotImplementedError):
        da.proper_criterion_exact(HEIS3, model="X_H")


@pytest.mark.parametrize("basis", [TORI_ABELIAN, HEIS3])
def test_simple_transitivity_on_X_E(basis):
    rep = da.simple_transitivity_check(basis, ms.model_space("X_E"))
    assert rep.passed


# -- sampling heuristic -------------------------------------------------------------


def test_sampler_on_central_translations_stabilises():
    spec = da.HolonomySpec([gr.IsomElement(0, 0, None, 1.0, "E")])
    rep = da.properness_sampler(spec, ms.model_space("X_E"), box_radius=2.0, word_radius=6)
    counts = rep.return_counts
    assert counts[-1] == counts[-2] == counts[-3] == 9
    assert rep.verdicts.passed


def test_sampler_flags_fixed_points():
    boost = gr.IsomElement(0, 0.5, None, 0, "H")
    rep = da.properness_sampler(da.HolonomySpec([boost]), ms.model_space("X_H"), box_radius=0.5, word_radius=3)
    assert rep.details["free"] is False
    assert rep.witness is not None


def test_sampler_rejects_bad_input():
    m = ms.model_space("X_H")
    with pytest.raises(ValueError):
        da.properness_sampler(da.HolonomySpec([]), m)
    with pytest.raises(ValueError):
        da.properness_sampler(da.HolonomySpec([gr.IsomElement.identity("H")]), m, word_radius=13)


# -- oscillator lattices ---------------------------------------------------------------


@pytest.mark.parametrize("A", MONODROMIES)
def test_osc_lattice_certificates(A):
    spec, cert = da.build_osc_lattice(A)
    assert cert.passed, [c.name for c in cert.verdicts.checks if not c.passed]
    assert len(spec.generators) == 3


def test_osc_lattice_sampler_and_flow():
    spec, _ = da.build_osc_lattice([[2, 1], [1, 1]])
    rep = da.properness_sampler(spec, ms.model_space("X_H"), box_radius=0.5, word_radius=8)
    counts = rep.return_counts
    assert counts == [7, 31, 79, 133, 155, 155, 155, 155]
    assert rep.details["stable"]
    assert rep.details["free"]
    c = da.commutator_center_test(spec)
    assert c is not None and abs(float(c.z)) > 0.5


def _power(g, k):
    out = gr.OscElement(0.0, 0.0, 0.0, 0.0)
    step = g if k >= 0 else gr.osc_inv(g)
    for _ in range(abs(k)):
        out = out * step
    return out


def test_osc_lattice_plateau_matches_normal_form_enumeration():
    # every element is gamma_hat^k g1^a g2^b exp(c z) with c in Z/2; count
    # those returning the box directly, without words
    spec, _ = da.build_osc_lattice([[2, 1], [1, 1]])
    gh, g1, g2 = spec.generators
    m = ms.model_space("X_H")
    K = np.array(list(itertools.product(np.linspace(-0.5, 0.5, 5), repeat=4)))
    count = 0
    for k in range(-2, 3):
        for a in range(-4, 5):
            for b in range(-4, 5):
                base = _power(gh, k) * _power(g1, a) * _power(g2, b)
                for c2 in range(-6, 7):
                    g = base * gr.OscElement(0.0, 0.0, 0.0, c2 / 2)
                    img = m.act_many(g, K)
                    count += bool(np.all(np.abs(img) <= 0.5 + 1e-9, axis=1).any())
    assert count == 155


def test_osc_lattice_contains_half_center():
    spec, _ = da.build_osc_lattice([[2, 1], [1, 1]])
    gh, g1, g2 = spec.generators
    h = gr.osc_inv(gh) * g1 * gh * gr.osc_inv(g1 * gr.osc_inv(g2))
    assert h.allclose(gr.OscElement(0.0, 0.0, 0.0, 0.5), 1e-12)


@pytest.mark.parametrize("A, msg", [([[2, 0], [0, 1]], "determinant"), ([[1, 1], [0, 1]], "parabolic"),
                                    ([[0, -1], [1, 0]], "elliptic"), ([[-2, 1], [-1, 0]], "parabolic"),
                                    ([[-3, 1], [-1, 0]], "trace"), ([[1.5, 0], [0, 1]], "integer")])
def test_osc_lattice_rejects(A, msg):
    with pytest.raises(ValueError, match=msg):
        da.build_osc_lattice(A)


# -- Sol classification ---------------------------------------------------------------


@pytest.mark.parametrize("name", list(CORPUS))
def test_sol_corpus(name):
    want, gens = CORPUS[name]
    verdict, info = da.classify_sol_subgroup(gens)
    assert verdict == want, info


def test_sol_abelian_and_errors():
    assert da.classify_sol_subgroup([(0.0, [1.0, 0.0]), (0.0, [0.0, 1.0])])[0] == "abelian"
    with pytest.raises(ValueError):
        da.classify_sol_subgroup([])


# -- parallel flow, leaves, hulls ---------------------------------------------------------


def test_commutator_center_cases():
    abelian = da.HolonomySpec([gr.HeisElement([1, 0, 0, 0]), gr.HeisElement([0, 1, 0, 0])])
    assert da.commutator_center_test(abelian) is None
    single = da.HolonomySpec([gr.HeisElement([1, 0, 0, 0])])
    assert da.commutator_center_test(single) is None
    heis = da.HolonomySpec([gr.HeisElement([1, 0, 0, 0]), gr.HeisElement([0, 0, 1, 0])])
    c = da.commutator_center_test(heis)
    assert c is not None and c.z == 1


def test_leaf_density():
    def spec(*ss):
        return da.HolonomySpec([gr.IsomElement(s, 0, None, 0, "H") for s in ss])

    assert da.leaf_density_test(spec(1.0, math.sqrt(2))) == "dense"
    assert da.leaf_density_test(spec(1.0, 0.5, 0.25)) == "closed"
    assert da.leaf_density_test(spec(0.0)) == "closed"


def test_syndetic_hull():
    gens = [gr.HeisElement([1, 0, 0, 0]), gr.HeisElement([0, 0, 1, 0])]
    hull = da.syndetic_hull_nilpotent(gens)
    assert hull.shape == (3, 5)
    assert np.linalg.matrix_rank(np.vstack([hull.astype(float), Z_ROW])) == 3
    ab = da.syndetic_hull_nilpotent([gr.HeisElement([1, 0, 0, -1]), gr.HeisElement([0, 1, -1, 0])])
    assert ab.shape[0] == 2


def test_generator_files_roundtrip(tmp_path, data_dir):
    spec = da.load_generators(data_dir / "heis3_family.json")
    assert spec.model == "X_E" and len(spec.generators) == 4
    out = tmp_path / "g.json"
    da.save_generators(spec, out)
    back = da.load_generators(out)
    for g, h in zip(spec.generators, back.generators):
        assert g.allclose(h, 1e-15)
    assert json.loads(out.read_text())["label"] == spec.label


def test_mixed_generator_types_rejected():
    with pytest.raises(ValueError):
        da.HolonomySpec([gr.HeisElement([1, 0, 0, 0]), gr.OscElement(1.0)])
    with pytest.raises(ValueError):
        da.load_generators([{"foo": 1}])
