"""Exact integer linear algebra: frozen examples and randomized cross-checks."""

from __future__ import annotations

import random

import pytest

import oracle
from monofloer.intlinalg import (
    AbelianGroupInvariants,
    ContainmentError,
    QuotientPresentation,
    SparseIntMatrix,
    column_space_basis,
    cokernel_invariants,
    kernel_basis,
    lattice_contains,
    lattice_equal,
    preimage_lattice,
    smith_normal_form,
    solve,
    subquotient_invariants,
)


def M(dense, cols=None):
    return SparseIntMatrix.from_dense(dense, cols=cols)


def check_snf(mat):
    res = smith_normal_form(mat)
    u, s, v = res.U.to_dense(), res.S.to_dense(), res.V.to_dense()
    assert oracle.dense_mul(oracle.dense_mul(u, mat.to_dense()), v) == s
    assert abs(oracle.dense_det(u)) == 1
    assert abs(oracle.dense_det(v)) == 1
    diag = res.diagonal()
    assert all(d > 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    # off-diagonal entries of S vanish
    for (i, j, _) in res.S.entries:
        assert i == j
    return res


def test_snf_zero_one_by_one():
    res = check_snf(M([[0]]))
    assert res.S.to_dense() == [[0]]
    assert res.U.to_dense() == [[1]]
    assert res.V.to_dense() == [[1]]


def test_snf_frozen_two_by_two():
    res = check_snf(M([[2, 4], [6, 8]]))
    assert res.diagonal() == [2, 4]


def test_snf_identity():
    res = check_snf(SparseIntMatrix.identity(3))
    assert res.S == SparseIntMatrix.identity(3)


def test_snf_empty_shapes():
    for rows, cols in [(0, 0), (0, 3), (3, 0)]:
        res = smith_normal_form(SparseIntMatrix.zero(rows, cols))
        assert res.S.rows == rows and res.S.cols == cols
        assert res.U == SparseIntMatrix.identity(rows)
        assert res.V == SparseIntMatrix.identity(cols)
        assert res.diagonal() == []


def test_cokernel_examples():
    assert cokernel_invariants(SparseIntMatrix.zero(2, 3)) == AbelianGroupInvariants(2, ())
    assert cokernel_invariants(M([[2]])) == AbelianGroupInvariants(0, (2,))
    assert cokernel_invariants(M([[1, 0], [0, 3]])) == AbelianGroupInvariants(0, (3,))


def test_kernel_examples():
    k = kernel_basis(M([[1, 1]]))
    assert (k.rows, k.cols) == (2, 1)
    col = [k.to_dense()[0][0], k.to_dense()[1][0]]
    assert col in ([1, -1], [-1, 1])

    k = kernel_basis(SparseIntMatrix.identity(2))
    assert (k.rows, k.cols) == (2, 0)

    k = kernel_basis(SparseIntMatrix.zero(1, 2))
    assert (k.rows, k.cols) == (2, 2)
    assert oracle.dense_invariant_factors(k.to_dense()) == [1, 1]


def test_subquotient_examples():
    assert subquotient_invariants(SparseIntMatrix.identity(2), M([[1], [-1]])) == \
        AbelianGroupInvariants(1, ())
    assert subquotient_invariants(SparseIntMatrix.identity(1), M([[2]])) == \
        AbelianGroupInvariants(0, (2,))
    assert subquotient_invariants(SparseIntMatrix.identity(3), SparseIntMatrix.identity(3)) == \
        AbelianGroupInvariants(0, ())
    assert subquotient_invariants(SparseIntMatrix.zero(4, 0), SparseIntMatrix.zero(4, 0)) == \
        AbelianGroupInvariants(0, ())


def test_subquotient_containment_error():
    z = M([[2], [0]])
    b = M([[1], [0]])
    with pytest.raises(ContainmentError):
        subquotient_invariants(z, b)


def test_solve_basic():
    m = M([[2, 0], [0, 3]])
    assert solve(m, [4, 3]) == [2, 1]
    assert solve(m, [1, 0]) is None
    assert solve(SparseIntMatrix.zero(2, 0), [0, 0]) == []
    assert solve(SparseIntMatrix.zero(2, 0), [1, 0]) is None


def _random_matrix(rng, max_dim=8, bound=5):
    rows = rng.randrange(0, max_dim + 1)
    cols = rng.randrange(0, max_dim + 1)
    dense = [[rng.randrange(-bound, bound + 1) for _ in range(cols)] for _ in range(rows)]
    return M(dense, cols=cols)


def test_snf_random_against_oracle():
    rng = random.Random(1201)
    for _ in range(60):
        mat = _random_matrix(rng)
        res = check_snf(mat)
        assert res.diagonal() == oracle.dense_invariant_factors(mat.to_dense())


def test_cokernel_invariance_under_permutation_and_signs():
    rng = random.Random(1202)
    for _ in range(40):
        mat = _random_matrix(rng, max_dim=6)
        base = cokernel_invariants(mat)
        dense = mat.to_dense()
        rng.shuffle(dense)
        dense = [[-v for v in row] if rng.random() < 0.5 else list(row)
                 for row in dense]
        if dense and dense[0]:
            perm = list(range(len(dense[0])))
            rng.shuffle(perm)
            dense = [[row[j] for j in perm] for row in dense]
        assert cokernel_invariants(M(dense, cols=mat.cols)) == base


def test_kernel_rank_nullity_random():
    rng = random.Random(1203)
    for _ in range(40):
        mat = _random_matrix(rng)
        ker = kernel_basis(mat)
        rank = len(oracle.dense_invariant_factors(mat.to_dense()))
        assert ker.cols == mat.cols - rank
        prod = oracle.dense_mul(mat.to_dense(), ker.to_dense())
        assert all(all(v == 0 for v in row) for row in prod)
        # primitive basis: the kernel generators span a direct summand
        assert oracle.dense_invariant_factors(ker.to_dense()) == [1] * ker.cols


def test_subquotient_vs_oracle_random():
    rng = random.Random(1204)
    for _ in range(40):
        outer = _random_matrix(rng, max_dim=6)
        z = kernel_basis(outer)
        cols_x = rng.randrange(0, 5)
        x_dense = [[rng.randrange(-3, 4) for _ in range(cols_x)]
                   for _ in range(z.cols)]
        x = M(x_dense, cols=cols_x)
        b = z.mul(x)
        got = subquotient_invariants(z, b)
        factors = oracle.dense_invariant_factors(x.to_dense())
        expect = AbelianGroupInvariants(z.cols - len(factors),
                                        tuple(f for f in factors if f > 1))
        assert got == expect


def test_column_space_basis():
    mat = M([[2, 4, 0], [0, 0, 0]])
    basis = column_space_basis(mat)
    assert basis.cols == 1
    assert lattice_equal(basis, M([[2], [0]]))

    rng = random.Random(1205)
    for _ in range(30):
        mat = _random_matrix(rng, max_dim=6)
        basis = column_space_basis(mat)
        assert lattice_equal(basis, mat)
        assert basis.cols == len(oracle.dense_invariant_factors(mat.to_dense()))


def test_preimage_lattice():
    got = preimage_lattice(M([[2]]), M([[4]]))
    assert lattice_equal(got, M([[2]]))
    # full preimage when the constraint is vacuous
    got = preimage_lattice(SparseIntMatrix.zero(1, 2), SparseIntMatrix.zero(1, 0))
    assert lattice_equal(got, SparseIntMatrix.identity(2))
    # random consistency: every generated column satisfies the constraint
    rng = random.Random(1206)
    for _ in range(30):
        m = _random_matrix(rng, max_dim=5, bound=3)
        g = M([[rng.randrange(-3, 4) for _ in range(2)] for _ in range(m.rows)],
              cols=2)
        pre = preimage_lattice(m, g)
        image = m.mul(pre)
        assert lattice_contains(g, image)


def test_lattice_contains():
    a = M([[2, 0], [0, 2]])
    assert lattice_contains(a, M([[4], [2]]))
    assert not lattice_contains(a, M([[1], [0]]))
    assert lattice_equal(M([[1, 0], [0, 1]]), M([[1, 1], [0, 1]]))


def test_invariants_canonical_form():
    assert AbelianGroupInvariants.from_parts(1, [2, 3]) == AbelianGroupInvariants(1, (6,))
    assert AbelianGroupInvariants.from_parts(0, [2, 2]) == AbelianGroupInvariants(0, (2, 2))
    assert AbelianGroupInvariants.from_parts(0, [4, 6]) == AbelianGroupInvariants(0, (2, 12))
    assert AbelianGroupInvariants.from_parts(2, [1, 1]) == AbelianGroupInvariants(2, ())
    got = AbelianGroupInvariants(1, (2,)).direct_sum(AbelianGroupInvariants(0, (3,)))
    assert got == AbelianGroupInvariants(1, (6,))
    assert AbelianGroupInvariants(0, ()).is_trivial
    assert not AbelianGroupInvariants(0, (2,)).is_trivial


def test_invariants_reject_bad_chain():
    with pytest.raises(ValueError):
        AbelianGroupInvariants(0, (3, 2))
    with pytest.raises(ValueError):
        AbelianGroupInvariants(0, (1,))
    with pytest.raises(ValueError):
        AbelianGroupInvariants(-1, ())


def test_quotient_presentation():
    pres = QuotientPresentation(SparseIntMatrix.identity(2), M([[2, 0], [0, 0]], cols=2))
    assert pres.invariants == AbelianGroupInvariants(1, (2,))
    orders = sorted(g.order for g in pres.generators)
    assert orders == [0, 2]
    assert pres.is_zero_class([2, 0])
    assert not pres.is_zero_class([1, 0])
    assert not pres.is_zero_class([0, 1])
    # coordinates are canonical: the torsion coordinate is reduced mod 2
    a = pres.coordinate_of([1, 0])
    b = pres.coordinate_of([3, 0])
    assert a == b

    narrow = QuotientPresentation(M([[1], [0]]), SparseIntMatrix.zero(2, 0))
    with pytest.raises(ContainmentError):
        narrow.coordinate_of([0, 1])


def test_quotient_presentation_rejects_dependent_basis():
    with pytest.raises(ValueError):
        QuotientPresentation(M([[1, 1], [1, 1]]), SparseIntMatrix.zero(2, 0))
