"""Group laws, one-parameter subgroups and conjugation normalisation."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import one_param_oracle
from ppwave import groups as gr
from ppwave import lie_core as lc

small = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False)
vec4 = st.lists(small, min_size=4, max_size=4)
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def isom(draw_vals, flavor):
    s, t, a1, a2, a3, a4, z = draw_vals
    return gr.IsomElement(s, t, [a1, a2, a3, a4], z, flavor)


elements = st.lists(small, min_size=7, max_size=7)
flavors = st.sampled_from(["H", "E"])


@given(small, small, flavors)
def test_rho_is_symplectic(s, t, flavor):
    R = gr.rho(s, t, flavor)
    J = lc.heis_omega(2, exact=False)
    assert np.max(np.abs(R.T @ J @ R - J)) < 1e-12 * max(1.0, np.max(np.abs(R)) ** 2)


@given(small, small, small, small, flavors)
def test_rho_is_a_homomorphism(s1, t1, s2, t2, flavor):
    lhs = gr.rho(s1 + s2, t1 + t2, flavor)
    rhs = gr.rho(s1, t1, flavor) @ gr.rho(s2, t2, flavor)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(lhs)))


def test_expm_matches_series_for_a_nilpotent_shift():
    N = np.diag([1.0, 1.0, 1.0], k=1)
    E = gr.expm_derivation(N)
    assert np.allclose(E, np.eye(4) + N + N @ N / 2 + N @ N @ N / 6, atol=1e-14)


@given(elements, elements, elements, flavors)
def test_ambient_law_is_associative(a, b, c, flavor):
    g, h, k = isom(a, flavor), isom(b, flavor), isom(c, flavor)
    assert ((g * h) * k).allclose(g * (h * k), 1e-10)


@given(elements, flavors)
def test_ambient_inverse(a, flavor):
    g = isom(a, flavor)
    e = gr.IsomElement.identity(flavor)
    assert (g * gr.ambient_inv(g)).allclose(e, 1e-10)
    assert (gr.ambient_inv(g) * g).allclose(e, 1e-10)


def test_flavor_mismatch_raises():
    with pytest.raises(ValueError):
        gr.IsomElement.identity("H") * gr.IsomElement.identity("E")


@given(st.lists(fractions, min_size=5, max_size=5), st.lists(fractions, min_size=5, max_size=5))
def test_heisenberg_law_is_exact(u, w):
    g = gr.HeisElement(u[:4], u[4])
    h = gr.HeisElement(w[:4], w[4])
    c = gr.heis_commutator(g, h)
    assert all(x == 0 for x in c.xi)
    # [g, h] = exp(omega(xi_g, xi_h) z)
    om = lc.heis_omega(2)
    assert c.z == np.array(u[:4], dtype=object) @ om @ np.array(w[:4], dtype=object)
    assert isinstance(c.z, Fraction)
    assert gr.heis_mul(g, gr.heis_inv(g)) == gr.HeisElement.identity(2)


@given(st.lists(fractions, min_size=5, max_size=5), st.lists(fractions, min_size=5, max_size=5),
       fractions.filter(lambda x: x != 0))
def test_homothety_is_an_automorphism(u, w, lam):
    psi = gr.heis_homothety(lam)
    g, h = gr.HeisElement(u[:4], u[4]), gr.HeisElement(w[:4], w[4])
    assert psi(g * h) == psi(g) * psi(h)


def test_homothety_rejects_zero():
    with pytest.raises(ValueError):
        gr.heis_homothety(0)


# -- one-parameter subgroups ---------------------------------------------------


@pytest.mark.parametrize("group", ["ambient-H", "ambient-E"])
@pytest.mark.parametrize("t", [-3.0, 0.7, 2.0])
def test_one_param_matches_ode_oracle(group, t):
    rng = np.random.default_rng(5)
    xi = rng.uniform(-1, 1, 7)
    g = gr.one_param(xi, t, group)
    G = gr.ambient_group(group[-1])
    A = G.generator(xi[:2])
    ell, x, z = one_param_oracle(A, np.asarray(lc.heis_omega(2), float), 1.0, xi[2:6], xi[6], t)
    # the oracle integrates the one-dimensional subgroup generated by A
    assert abs(float(g.s) - xi[0] * t) < 1e-12 and abs(float(g.t) - xi[1] * t) < 1e-12
    assert np.max(np.abs(g.xi.astype(float) - x)) < 1e-9
    assert abs(float(g.z) - z) < 1e-9


def test_one_param_matches_rk4():
    G = gr.ambient_group("H")
    rng = np.random.default_rng(3)
    for t in (-10.0, 4.0):
        c, a, mu = rng.uniform(-0.5, 0.5, 2), rng.uniform(-1, 1, 4), 0.3
        closed = G.one_param(c, a, mu, t)
        rk = G._rk4_one_param(c, a, mu, t)
        scale = max(1.0, np.max(np.abs(closed[1])), abs(closed[2]))
        assert np.max(np.abs(closed[1] - rk[1])) < 1e-9 * scale
        assert abs(closed[2] - rk[2]) < 1e-9 * scale


@given(st.lists(small, min_size=4, max_size=4), small, small)
def test_osc_one_param_is_a_homomorphism(xi, t1, t2):
    f = gr.OneParamSubgroup(np.array(xi), "osc_s")
    assert (f(t1) * f(t2)).allclose(f(t1 + t2), 1e-10)


@given(elements, small, small)
def test_ambient_one_param_is_a_homomorphism(xi, t1, t2):
    f = gr.OneParamSubgroup(np.array(xi), "ambient-E")
    assert (f(t1) * f(t2)).allclose(f(t1 + t2), 1e-9)


def test_one_param_near_zero_generator_uses_series():
    xi = np.array([1e-9, 0, 0.3, -0.2, 0.5, 0.1, 0.4])
    g = gr.one_param(xi, 2.0, "ambient-H")
    h = gr.one_param(np.r_[0.0, xi[1:]], 2.0, "ambient-H")
    assert np.max(np.abs(g.xi.astype(float) - h.xi.astype(float))) < 1e-7


def test_one_param_rejects_wrong_sizes():
    with pytest.raises(ValueError):
        gr.one_param([1, 2, 3], 1.0, "osc_s")
    with pytest.raises(ValueError):
        gr.one_param([1, 2, 3, 4], 1.0, "ambient-H")
    with pytest.raises(ValueError):
        gr.one_param([1, 2, 3, 4], 1.0, "sl2")


# -- oscillator group ------------------------------------------------------------


@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_osc_fast_path_agrees_with_generic_law(a, b):
    g, h = gr.OscElement(*a), gr.OscElement(*b)
    generic = gr.OscElement.from_triple(gr.osc_group().mul(g.as_triple(), h.as_triple()))
    assert gr.osc_mul(g, h).allclose(generic, 1e-13)


def test_osc_commutator_of_unit_translations():
    X, Y = gr.OscElement(0.0, 1.0, 0.0, 0.0), gr.OscElement(0.0, 0.0, 1.0, 0.0)
    c = X * Y * gr.osc_inv(X) * gr.osc_inv(Y)
    assert c.allclose(gr.OscElement(0.0, 0.0, 0.0, 1.0), 1e-14)


def test_json_roundtrips_keep_exact_values():
    g = gr.IsomElement(Fraction(1, 3), 0, [1, Fraction(-2, 5), 0, 0], Fraction(7, 2), "E")
    back = gr.IsomElement.from_json(g.to_json())
    assert back.s == Fraction(1, 3) and back.z == Fraction(7, 2) and back.flavor == "E"
    o = gr.OscElement(Fraction(1, 2), 1, 2, 3)
    assert gr.OscElement.from_json(o.to_json()).tau == Fraction(1, 2)


# -- normalisation of hyperbolic elements --------------------------------------


@given(st.floats(min_value=0.05, max_value=2.0), st.sampled_from([-1, 1]), vec4, small, flavors)
def test_normalize_hyperbolic(t0, sign, a0, z0, flavor):
    gamma = gr.IsomElement(0, sign * t0, a0, z0, flavor)
    alpha, conj = gr.normalize_hyperbolic(gamma)
    a1 = alpha.xi.astype(float)
    R = gr.rho(0.0, sign * t0, flavor)
    # the conjugate has xi-part a1 + a0 - rho(t0) a1, which the solved a1 kills
    predicted = a1 + np.asarray(a0) - R @ a1
    assert np.max(np.abs(conj.xi.astype(float) - predicted)) < 1e-12 * max(1.0, np.max(np.abs(a1)))
    assert np.max(np.abs(conj.xi.astype(float))) < 1e-9 * max(1.0, np.max(np.abs(a1)))
    assert float(conj.t) == pytest.approx(sign * t0) and conj.s == 0


@given(vec4, vec4, st.floats(min_value=0.1, max_value=2.0))
def test_conjugation_formula_for_arbitrary_a1(a0, a1, t0):
    gamma = gr.IsomElement(0, t0, a0, 0.0, "H")
    alpha = gr.IsomElement(0, 0, a1, 0, "H")
    conj = alpha * gamma * gr.ambient_inv(alpha)
    want = np.asarray(a1) + np.asarray(a0) - gr.rho(0.0, t0, "H") @ np.asarray(a1)
    assert np.max(np.abs(conj.xi.astype(float) - want)) < 1e-12


def test_normalize_rejects_non_hyperbolic():
    with pytest.raises(ValueError, match="non-hyperbolic"):
        gr.normalize_hyperbolic(gr.IsomElement(0, 0, [1, 0, 0, 0], 0, "H"))
    with pytest.raises(ValueError):
        gr.normalize_hyperbolic(gr.IsomElement(1, 1, [1, 0, 0, 0], 0, "H"))


def test_normalize_trivial_heis_part():
    gamma = gr.IsomElement(0, 0.5, None, 2.0, "H")
    alpha, conj = gr.normalize_hyperbolic(gamma)
    assert alpha.allclose(gr.IsomElement.identity("H")) and conj is gamma


def test_projections():
    g = gr.IsomElement(1.5, -0.5, [1, 2, 3, 4], 0, "H")
    assert gr.project(g, "p1") == 1.5
    assert gr.project(g, "p2") == (1.5, -0.5)
    assert gr.project(g, "q") == -0.5
    with pytest.raises(ValueError):
        gr.project(g, "p3")
