"""Rational-dependence tests for finitely generated subgroups of R and R^2.

Floats only approximate reals, so "rational" here means: approximated by
``p/q`` with ``q <= bound`` to within ``tol`` (relative).  A ratio whose
continued-fraction convergents exceed the bound without ever matching is
reported irrational.  The tolerance has to sit well below ``1 / bound^2``:
every real has convergents with ``q <= 10^6`` that are within about
``10^-12``, so a looser tolerance would call every float rational.  Both the leaf-density test and the translation-part
tests of the leaf classifier use these helpers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

DENOMINATOR_BOUND = 10**6
REL_TOL = 1e-13


def rational_approx(x: float, bound: int = DENOMINATOR_BOUND, tol: float = REL_TOL) -> Fraction | None:
    """Best ``p/q`` with ``q <= bound`` matching ``x`` to ``tol``, else ``None``.

    Walks the continued-fraction convergents of ``x`` and stops at the first
    one within tolerance.
    """
    x = float(x)
    if not np.isfinite(x):
        return None
    scale = tol * max(1.0, abs(x))
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    r = x
    for _ in range(64):
        a = int(np.floor(r))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > bound:
            return None
        if abs(x - h1 / k1) <= scale:
            return Fraction(h1, k1)
        frac = r - a
        if frac <= 0:
            return Fraction(h1, k1)
        r = 1.0 / frac
    return None


def is_rational_ratio(x: float, y: float, bound: int = DENOMINATOR_BOUND) -> bool:
    return rational_approx(x / y, bound) is not None


def _nonzero(values: Sequence[float], tol: float = 1e-12) -> list[float]:
    vals = [float(v) for v in values]
    scale = max([abs(v) for v in vals], default=0.0)
    return [v for v in vals if abs(v) > tol * max(1.0, scale)]


def discrete_subgroup_of_line(values: Sequence[float], bound: int = DENOMINATOR_BOUND) -> bool:
    """True iff ``<values>`` is (numerically) a discrete subgroup of ``R``."""
    vals = _nonzero(values)
    if not vals:
        return True
    ref = vals[0]
    return all(is_rational_ratio(v, ref, bound) for v in vals[1:])


def discrete_subgroup_of_plane(vectors: Sequence[Sequence[float]], bound: int = DENOMINATOR_BOUND,
                               tol: float = 1e-9) -> tuple[bool, int]:
    """Discreteness and rank of the subgroup of ``R^2`` generated by ``vectors``.

    Picks a maximal independent pair among the generators and requires every
    other generator to have rational coordinates with respect to it.  For a
    collinear set the question reduces to :func:`discrete_subgroup_of_line`.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    scale = max([np.linalg.norm(v) for v in vecs], default=0.0)
    vecs = [v for v in vecs if np.linalg.norm(v) > 1e-12 * max(1.0, scale)]
    if not vecs:
        return True, 0
    first = vecs[0]
    pair = None
    for v in vecs[1:]:
        cross = first[0] * v[1] - first[1] * v[0]
        if abs(cross) > tol * np.linalg.norm(first) * np.linalg.norm(v):
            pair = (first, v)
            break
    if pair is None:
        direction = first / np.linalg.norm(first)
        return discrete_subgroup_of_line([v @ direction for v in vecs], bound), 1
    basis = np.column_stack(pair)
    for v in vecs:
        coeffs = np.linalg.solve(basis, v)
        for c in coeffs:
            if abs(c) > 1e-12 and rational_approx(c, bound) is None:
                return False, 2
    return True, 2
