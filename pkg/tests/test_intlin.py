"""Exact linear algebra kernel tests.

The Smith form is checked against an independent oracle (gcds of k x k
minors give the determinantal divisors, whose ratios are the invariant
factors); solvability is checked against brute-force enumeration of
small integer combinations.
"""

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homkit import _pyred
from homkit.intlin import (
    GF,
    QQ,
    ZZ,
    Matrix,
    det,
    echelon,
    invariant_factors,
    kernel_basis,
    lattice_basis,
    lattice_contains,
    lattice_eq,
    lattice_intersect,
    rank,
    saturate,
    snf,
    solve_in_image,
    solve_matrix,
)

small = st.integers(min_value=-9, max_value=9)


def mats(max_dim=4, entries=small):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(entries, min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def oracle_invariant_factors(rows):
    """Invariant factors via determinantal divisors d_k = gcd(k-minors)."""
    m, n = len(rows), len(rows[0])
    divisors = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rsel in itertools.combinations(range(m), k):
            for csel in itertools.combinations(range(n), k):
                sub = [[Fraction(rows[i][j]) for j in csel] for i in rsel]
                g = math.gcd(g, int(_frac_det(sub)))
        if g == 0:
            break
        divisors.append(g)
    factors = []
    prev = 1
    for d in divisors:
        factors.append(d // prev)
        prev = d
    return factors


def _frac_det(a):
    n = len(a)
    a = [row[:] for row in a]
    sign = 1
    acc = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), -1)
        if piv < 0:
            return Fraction(0)
        if piv != c:
            a[piv], a[c] = a[c], a[piv]
            sign = -sign
        acc *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            for j in range(c, n):
                a[i][j] -= f * a[c][j]
    return sign * acc


def test_snf_spec_cases():
    assert snf(Matrix.from_rows([[2, 0], [0, 3]])).diagonal() == (1, 6)
    assert snf(Matrix.from_rows([[0]])).diagonal() == (0,)
    assert snf(Matrix.identity(3)).diagonal() == (1, 1, 1)


@settings(max_examples=150, deadline=None)
@given(mats())
def test_snf_properties(rows):
    m = Matrix.from_rows(rows)
    s = snf(m)
    assert s.U * m * s.V == s.D
    assert abs(det(s.U)) == 1
    assert abs(det(s.V)) == 1
    diag = [d for d in s.diagonal() if d]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    for i in range(s.D.rows):
        for j in range(s.D.cols):
            if i != j:
                assert s.D.entries[i][j] == 0
    assert list(invariant_factors(m)) == oracle_invariant_factors(rows)


@settings(max_examples=100, deadline=None)
@given(mats(max_dim=3, entries=st.integers(-4, 4)))
def test_solve_matches_bruteforce(rows):
    m = Matrix.from_rows(rows)
    n = m.cols
    reachable = set()
    for coeffs in itertools.product(range(-3, 4), repeat=n):
        v = tuple(
            sum(c * rows[i][j] for j, c in enumerate(coeffs)) for i in range(m.rows)
        )
        reachable.add(v)
    for v in reachable:
        x = solve_in_image(m, v)
        assert x is not None
        assert m * x == Matrix.column(list(v))
    # a vector reported solvable must verify exactly
    probe = tuple(random.Random(repr(rows)).randrange(-5, 6) for _ in range(m.rows))
    x = solve_in_image(m, probe)
    if x is not None:
        assert m * x == Matrix.column(list(probe))


def test_solve_spec_cases():
    assert solve_in_image(Matrix.from_rows([[2]]), [4]).to_lists() == [[2]]
    assert solve_in_image(Matrix.from_rows([[2]]), [3]) is None
    x = solve_in_image(Matrix.from_rows([[1, 1], [0, 2]]), [0, 2])
    assert x.to_lists() == [[-1], [1]]


@settings(max_examples=100, deadline=None)
@given(mats())
def test_kernel_basis(rows):
    m = Matrix.from_rows(rows)
    k = kernel_basis(m)
    assert (m * k).is_zero()
    assert rank(k) == k.cols
    # completeness against brute force on small vectors
    if m.cols <= 3:
        for coeffs in itertools.product(range(-2, 3), repeat=m.cols):
            v = Matrix.column(list(coeffs))
            if (m * v).is_zero():
                assert lattice_contains(k, coeffs)


@settings(max_examples=100, deadline=None)
@given(mats())
def test_saturate_properties(rows):
    l = Matrix.from_rows(rows)
    s = saturate(l)
    # extensive: every column of l lies in the saturation
    assert solve_matrix(s, lattice_basis(l)) is not None or l.is_zero()
    # idempotent
    assert lattice_eq(saturate(s), s) or s.cols == 0
    # quotient torsion-free: all invariant factors of the basis are 1
    assert all(d == 1 for d in invariant_factors(s))


def test_saturate_spec_cases():
    assert saturate(Matrix.from_rows([[2]])).to_lists() == [[1]]
    assert lattice_eq(saturate(Matrix.identity(2)), Matrix.identity(2))
    got = saturate(Matrix.from_rows([[2], [2]]))
    assert lattice_eq(got, Matrix.from_rows([[1], [1]]))


def test_hnf_structure():
    m = Matrix.from_rows([[4, 6], [0, 2]])
    h, u = echelon(m)
    assert m * u == h
    assert abs(det(u)) == 1
    assert lattice_eq(h, m)


@settings(max_examples=60, deadline=None)
@given(mats())
def test_backends_agree(rows):
    fast_h, fast_u = echelon(Matrix.from_rows(rows))
    py_h, py_u = _pyred.hnf_with_transform([list(r) for r in rows])
    assert fast_h.to_lists() == py_h
    assert fast_u.to_lists() == py_u
    pu, pd, pv = _pyred.snf_with_transforms([list(r) for r in rows])
    s = snf(Matrix.from_rows(rows))
    assert s.D.to_lists() == pd
    assert s.U.to_lists() == pu
    assert s.V.to_lists() == pv


def test_lattice_intersect():
    a = Matrix.from_rows([[2], [0]])
    b = Matrix.from_rows([[3], [0]])
    got = lattice_intersect(a, b)
    assert lattice_eq(got, Matrix.from_rows([[6], [0]]))


def test_field_backends():
    m = Matrix.from_rows([[1, 2], [2, 4]], ring=QQ)
    assert rank(m) == 1
    k = kernel_basis(m)
    assert k.cols == 1 and (m * k).is_zero()
    x = solve_in_image(m, Matrix.column([1, 2], ring=QQ))
    assert m * x == Matrix.column([1, 2], ring=QQ)
    f5 = GF(5)
    m5 = Matrix.from_rows([[2, 1], [1, 4]], ring=f5)
    assert det(m5) == (2 * 4 - 1) % 5
    assert rank(m5) == 2
    x5 = solve_in_image(m5, Matrix.column([1, 0], ring=f5))
    assert m5 * x5 == Matrix.column([1, 0], ring=f5)
    with pytest.raises(Exception):
        snf(m)


def test_empty_shapes():
    e = Matrix.from_rows([], cols=3)
    assert kernel_basis(e).cols == 3
    z = Matrix.zeros(3, 0)
    assert kernel_basis(z).cols == 0
    assert solve_in_image(z, [0, 0, 0]).cols == 1
    assert solve_in_image(z, [1, 0, 0]) is None
    assert snf(e).D.rows == 0
