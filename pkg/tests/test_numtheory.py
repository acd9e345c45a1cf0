"""Rational approximation and discreteness of finitely generated subgroups."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppwave import numtheory as nt


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000))
def test_rationals_are_recovered(q):
    assert nt.rational_approx(float(q)) == q


@pytest.mark.parametrize("x", [math.sqrt(2), math.sqrt(3), math.pi, math.e, (1 + math.sqrt(5)) / 2])
def test_irrationals_run_past_the_bound(x):
    assert nt.rational_approx(x) is None


def test_bound_is_respected():
    assert nt.rational_approx(1 / 1_000_003) is None
    assert nt.rational_approx(1 / 999_983) == Fraction(1, 999_983)


def test_line_subgroups():
    assert nt.discrete_subgroup_of_line([1.0, 0.5, 2.5])
    assert not nt.discrete_subgroup_of_line([1.0, math.sqrt(2)])
    assert nt.discrete_subgroup_of_line([])
    assert nt.discrete_subgroup_of_line([0.0, 0.0])


def test_plane_subgroups():
    assert nt.discrete_subgroup_of_plane([[1, 0], [0, 1], [2, 3]]) == (True, 2)
    assert nt.discrete_subgroup_of_plane([[1, 0], [0, 1], [math.sqrt(2), 0]]) == (False, 2)
    assert nt.discrete_subgroup_of_plane([[1, 1], [2, 2]]) == (True, 1)
    assert nt.discrete_subgroup_of_plane([[1, 1], [math.pi, math.pi]]) == (False, 1)
    assert nt.discrete_subgroup_of_plane([]) == (True, 0)
