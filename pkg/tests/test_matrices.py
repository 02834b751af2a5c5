"""Exact linear algebra, checked against numpy and brute-force oracles."""

import random

import numpy as np
import pytest

from slocc2mn.scalars import GaussianRational, ZERO, ONE
from slocc2mn.polynomials import Poly, poly_gcd
from slocc2mn.matrices import (
    Matrix,
    Pencil,
    certified_nullspace,
    poly_matrix_det,
    primitive_vector,
    matrix_from_vec,
    vec_of_matrix,
    stack_vectorized,
)


def random_matrix(rng, rows, cols, imag=True, span=6):
    return Matrix.from_entries(
        rows,
        cols,
        lambda i, j: GaussianRational(
            rng.randint(-span, span), rng.randint(-2, 2) if imag else 0
        ),
    )


def laplace_det(rows):
    """Independent cofactor-expansion oracle for polynomial determinants."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = Poly()
    sign = 1
    for j in range(n):
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = rows[0][j] * laplace_det(minor)
        acc = acc + term if sign > 0 else acc - term
        sign = -sign
    return acc


def test_rank_matches_numpy():
    rng = random.Random(20)
    for _ in range(60):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert m.rank() == np.linalg.matrix_rank(m.to_complex(), tol=1e-9)


def test_rank_of_constructed_low_rank():
    rng = random.Random(21)
    for _ in range(30):
        a = random_matrix(rng, 4, 2)
        b = random_matrix(rng, 2, 5)
        assert (a @ b).rank() <= 2


def test_rref_contract():
    rng = random.Random(22)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        r, pivots, t = m.rref()
        assert t @ m == r
        assert t.is_invertible()
        assert len(pivots) == m.rank()
        for i, pc in enumerate(pivots):
            assert r[i, pc] == ONE
            for other in range(m.rows):
                if other != i:
                    assert r[other, pc].is_zero()


def test_nullspace_annihilates_and_spans():
    rng = random.Random(23)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        basis = m.nullspace()
        assert len(basis) == m.cols - m.rank()
        for v in basis:
            assert all(e.is_zero() for e in m.apply_vector(v))
        if basis:
            assert Matrix(basis).rank() == len(basis)


def test_certified_nullspace_equals_plain_nullspace():
    rng = random.Random(24)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(2, 6), rng.randint(2, 6))
        fast = certified_nullspace(m)
        slow = m.nullspace()
        assert len(fast) == len(slow)
        for v in fast:
            assert all(e.is_zero() for e in m.apply_vector(v))
        if fast:
            # same span: stacking both bases does not increase the rank
            assert stack_vectorized(
                [matrix_from_vec(v, 1, m.cols) for v in fast + slow]
            ).rank() == len(slow)


def test_det_matches_numpy_and_multiplicativity():
    rng = random.Random(25)
    for _ in range(40):
        a = random_matrix(rng, 3, 3)
        b = random_matrix(rng, 3, 3)
        assert abs(complex(a.det()) - np.linalg.det(a.to_complex())) < 1e-6
        assert (a @ b).det() == a.det() * b.det()


def test_inverse():
    rng = random.Random(26)
    found = 0
    while found < 20:
        m = random_matrix(rng, 3, 3)
        if m.det().is_zero():
            continue
        found += 1
        assert m.inverse() @ m == Matrix.identity(3)
    with pytest.raises(ValueError):
        Matrix.zero(2, 2).inverse()


def test_primitive_vector_scales_to_coprime_integers():
    v = primitive_vector(
        [GaussianRational(1, 0) / 2, GaussianRational(3, 0) / 2, ZERO]
    )
    assert list(v) == [GaussianRational(1), GaussianRational(3), ZERO]


def test_vec_reshape_round_trip():
    rng = random.Random(27)
    m = random_matrix(rng, 3, 4)
    assert matrix_from_vec(vec_of_matrix(m), 3, 4) == m


def test_poly_matrix_det_matches_laplace():
    rng = random.Random(28)
    for _ in range(25):
        n = rng.randint(1, 4)
        rows = [
            [
                Poly.linear(
                    GaussianRational(rng.randint(-3, 3)),
                    GaussianRational(rng.randint(-3, 3)),
                )
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        assert poly_matrix_det(rows) == laplace_det(rows)


def test_poly_matrix_det_zero_row():
    rows = [[Poly(), Poly()], [Poly.constant(ONE), Poly.constant(ONE)]]
    assert poly_matrix_det(rows).is_zero()


def test_pencil_generic_rank_matches_numeric_sampling():
    rng = random.Random(29)
    for _ in range(20):
        a = random_matrix(rng, 3, 4, imag=False)
        b = random_matrix(rng, 3, 4, imag=False)
        pen = Pencil(a, b)
        g = pen.generic_rank()
        numeric = max(
            np.linalg.matrix_rank(
                a.to_complex() + t * b.to_complex(), tol=1e-9
            )
            for t in (0.7238411, -1.912303, 3.51431)
        )
        assert g == numeric


def test_pencil_minor_gcd_divides_root_multiple():
    rng = random.Random(30)
    for _ in range(15):
        a = random_matrix(rng, 3, 5, imag=False, span=3)
        b = random_matrix(rng, 3, 5, imag=False, span=3)
        pen = Pencil(a, b)
        for k in (2, 3):
            g = pen.minor_gcd(k)
            cand = pen.minor_root_multiple(k)
            if g.is_zero():
                assert cand.is_zero() or cand.degree >= 0
                continue
            if cand.is_zero():
                continue
            # the true minor gcd divides the candidate multiple, so every
            # genuine rank-drop parameter survives the compression
            assert (cand % poly_gcd(cand, g)).is_zero()
            assert poly_gcd(cand, g).degree == g.degree


def test_pencil_rank_profile_diagonal_example():
    # diag(1 + t, 2 + t): rank drops to 1 at t = -1 and t = -2
    a = Matrix([[ONE, ZERO], [ZERO, GaussianRational(2)]])
    b = Matrix.identity(2)
    prof = Pencil(a, b).rank_profile()
    assert prof.generic_rank == 2
    assert prof.rank_multiset() == (1, 1)
    params = sorted(complex(p.parameter).real for p in prof.exceptional)
    assert params == [-2.0, -1.0]


def test_pencil_rank_profile_with_infinity_drop():
    # a invertible, b rank one: rank drops at the infinite parameter
    a = Matrix.identity(2)
    b = Matrix([[ONE, ZERO], [ZERO, ZERO]])
    prof = Pencil(a, b).rank_profile()
    assert prof.generic_rank == 2
    assert any(p.location == "infinity" and p.rank == 1 for p in prof.exceptional)
