"""Helpers shared by the exact (rational) and floating-point code paths."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np
import sympy as sp


def is_exact_scalar(x) -> bool:
    return isinstance(x, (Rational, sp.Rational)) and not isinstance(x, bool)


def is_exact(arr) -> bool:
    """True if every entry of ``arr`` is an int/Fraction (no floats)."""
    a = np.asarray(arr, dtype=object)
    return all(is_exact_scalar(x) for x in a.flat)


def as_fraction_array(arr) -> np.ndarray:
    """Object array of Fractions. Floats are rejected rather than rounded."""
    a = np.asarray(arr, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        if isinstance(x, Fraction):
            out[idx] = x
        elif isinstance(x, sp.Rational):
            out[idx] = Fraction(int(x.p), int(x.q))
        elif isinstance(x, Rational):
            out[idx] = Fraction(x)
        elif isinstance(x, str):
            out[idx] = Fraction(x)
        else:
            raise TypeError(f"entry {x!r} at {idx} is not rational")
    return out


def as_array(arr, exact: bool) -> np.ndarray:
    return as_fraction_array(arr) if exact else np.asarray(arr, dtype=float)


def max_abs(arr) -> float:
    """Max absolute entry as a float (exact zero stays 0.0)."""
    a = np.asarray(arr, dtype=object).ravel()
    if a.size == 0:
        return 0.0
    return float(max(abs(x) for x in a))


def to_sympy(arr) -> sp.Matrix:
    a = np.asarray(arr, dtype=object)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return sp.Matrix(
        a.shape[0], a.shape[1],
        lambda i, j: sp.Rational(a[i, j].numerator, a[i, j].denominator)
        if isinstance(a[i, j], Fraction) else sp.nsimplify(a[i, j]),
    )


def from_sympy(m: sp.Matrix) -> np.ndarray:
    return as_fraction_array(np.array(m.tolist(), dtype=object))


def exact_nullspace(mat) -> np.ndarray:
    """Rational basis of the kernel, as rows of an object array."""
    m = to_sympy(as_fraction_array(mat))
    basis = m.nullspace()
    if not basis:
        return np.empty((0, m.shape[1]), dtype=object)
    return np.array([from_sympy(v).ravel() for v in basis], dtype=object)


def exact_rank(mat) -> int:
    a = as_fraction_array(mat)
    if a.size == 0:
        return 0
    return to_sympy(a).rank()


def numeric_rank(mat, tol: float = 1e-9) -> int:
    a = np.asarray(mat, dtype=float)
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def rank(mat, tol: float = 1e-9) -> int:
    return exact_rank(mat) if is_exact(mat) else numeric_rank(mat, tol)
