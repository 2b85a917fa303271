import math

import pytest
from hypothesis import given, strategies as st

from kummer.errors import InputError
from kummer.matrices import (
    IntMatrix,
    MatrixEquationSystem,
    hermite_column_form,
    hstack,
    kernel_lattice,
    lattice_intersection,
    preimage_lattice,
    smith_normal_form,
    solve_integer_system,
    solve_linear_explain,
    solve_modular,
)

from oracles import brute_solve_mod, minors_gcd_diagonal, naive_det

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.integers(-10, 10), min_size=r * c,
                           max_size=r * c).map(
            lambda data: IntMatrix(r, c, tuple(data)))))


@given(small_matrices)
def test_smith_recomposition_and_chain(mat):
    dec = smith_normal_form(mat)
    assert (dec.U @ mat) @ dec.V == dec.S
    assert dec.U @ dec.U_inv == IntMatrix.identity(mat.rows)
    assert dec.V @ dec.V_inv == IntMatrix.identity(mat.cols)
    diag = dec.diagonal
    for a, b in zip(diag, diag[1:]):
        if a != 0:
            assert b % a == 0
        else:
            assert b == 0
    assert all(d >= 0 for d in diag)


@given(small_matrices)
def test_smith_diagonal_matches_minors_gcd(mat):
    dec = smith_normal_form(mat)
    assert list(dec.diagonal) == minors_gcd_diagonal(mat)


@given(small_matrices)
def test_unimodular_transforms(mat):
    dec = smith_normal_form(mat)
    assert naive_det(dec.U) in (1, -1)
    assert naive_det(dec.V) in (1, -1)


@given(small_matrices)
def test_hermite_membership_and_idempotence(mat):
    hnf = hermite_column_form(mat)
    again = hermite_column_form(hnf.matrix)
    assert again.matrix == hnf.matrix
    for j in range(mat.cols):
        assert hnf.contains(mat.col(j))


def test_hermite_detects_non_membership():
    lat = hermite_column_form(IntMatrix.from_rows([[2, 0], [0, 4]]))
    assert lat.contains((2, 4))
    assert not lat.contains((1, 0))
    assert not lat.contains((0, 2))


@given(small_matrices)
def test_kernel_lattice_annihilates(mat):
    ker = kernel_lattice(mat)
    for j in range(ker.cols):
        assert mat.apply(ker.col(j)) == (0,) * mat.rows


def test_preimage_lattice_is_congruence_kernel():
    mat = IntMatrix.from_rows([[1, 1]])
    rel = IntMatrix.from_rows([[4]])
    lat = preimage_lattice(mat, rel)
    for j in range(lat.cols):
        assert mat.apply(lat.col(j))[0] % 4 == 0


def test_lattice_intersection_small():
    a = hermite_column_form(IntMatrix.from_rows([[2, 0], [0, 3]])).matrix
    b = hermite_column_form(IntMatrix.from_rows([[3, 0], [0, 2]])).matrix
    inter = hermite_column_form(lattice_intersection(a, b)).matrix
    expected = hermite_column_form(IntMatrix.from_rows([[6, 0], [0, 6]])).matrix
    assert inter == expected


@given(st.integers(2, 8), st.data())
def test_solve_modular_agrees_with_brute_force(m, data):
    rows = data.draw(st.integers(1, 3))
    cols = data.draw(st.integers(1, 3))
    mat = IntMatrix(rows, cols, tuple(
        data.draw(st.integers(-6, 6)) for _ in range(rows * cols)))
    rhs = tuple(data.draw(st.integers(-6, 6)) for _ in range(rows))
    got = solve_modular(mat, rhs, m)
    expected = brute_solve_mod(mat, rhs, m)
    assert (got is not None) == expected
    if got is not None:
        for i in range(rows):
            lhs = sum(mat[i, j] * got[j] for j in range(cols))
            assert lhs % m == rhs[i] % m


def test_solve_linear_explain_witness():
    mat = IntMatrix.from_rows([[2, 0], [0, 2]])
    sol, witness = solve_linear_explain(mat, (1, 0))
    assert sol is None and witness is not None
    assert witness.divisor % 2 == 0 or witness.divisor == 2


def test_solve_integer_system_with_relations():
    mat = IntMatrix.from_rows([[3]])
    sol = solve_integer_system(mat, (1,), IntMatrix.from_rows([[4]]))
    assert sol is not None
    assert (3 * sol[0]) % 4 == 1


def test_equation_system_sylvester_coefficients():
    # X must satisfy 2X = I mod 5: X = 3
    sys = MatrixEquationSystem()
    sys.add_unknown("X", 1, 1)
    sys.add_equation([(IntMatrix.from_rows([[2]]), "X", None)],
                     IntMatrix.identity(1))
    sol = sys.solve(mod=5)
    assert sol is not None
    assert (2 * sol["X"][0, 0]) % 5 == 1


def test_equation_system_two_sided():
    # L X R = I over Z with L = [[2]], R = [[3]] has no integer solution
    sys = MatrixEquationSystem()
    sys.add_unknown("X", 1, 1)
    sys.add_equation([(IntMatrix.from_rows([[2]]), "X",
                       IntMatrix.from_rows([[3]]))],
                     IntMatrix.identity(1))
    assert sys.solve() is None
    assert sys.last_witness is not None


def test_matrix_shape_guards():
    with pytest.raises(InputError):
        IntMatrix(2, 2, (1, 2, 3))
    a = IntMatrix.identity(2)
    b = IntMatrix.from_rows([[1, 2, 3]])
    with pytest.raises(InputError):
        a @ IntMatrix.identity(3)
    assert (a @ hstack(IntMatrix.column((1, 0)), IntMatrix.column((0, 1)))
            == IntMatrix.identity(2))
    assert b.transpose().shape == (3, 1)
