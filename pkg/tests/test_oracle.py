import dataclasses
import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dmst.algebra import SuperAlgebra
from dmst.errors import DegreeTooLargeError
from dmst.gf import gf
from dmst.groups import GroupMatrix, SubgroupSpec, generators
from dmst.invariants import basis_family
from dmst.oracle import fixed_dim, fixed_space, graded_monomials, hilbert_table, linalg_for, steinberg_table, verify_free_basis
from dmst.series import closed_form, expand


# -- linear algebra against exhaustive search ------------------------------------------

def brute_kernel_size(F, M):
    rows, cols = M.shape
    count = 0
    for v in itertools.product(range(F.q), repeat=cols):
        ok = True
        for r in range(rows):
            acc = 0
            for c in range(cols):
                acc = F.add(acc, F.mul(int(M[r, c]), v[c]))
            if acc:
                ok = False
                break
        count += ok
    return count


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([2, 3, 4, 5, 9]),
    st.integers(1, 3),
    st.integers(1, 3),
    st.integers(0, 2**32 - 1),
)
def test_nullspace_matches_exhaustive_count(q, rows, cols, seed):
    F = gf(q)
    la = linalg_for(F)
    rng = np.random.default_rng(seed)
    M = la.array(rng.integers(0, q, size=(rows, cols)))
    N = la.nullspace(M)
    assert q ** N.shape[1] == brute_kernel_size(F, M)
    assert not la.matmul(M, N).any()
    assert la.rank(M) + N.shape[1] == cols


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 8, 9, 25]), st.integers(0, 2**32 - 1))
def test_matmul_matches_scalar_loop(q, seed):
    F = gf(q)
    la = linalg_for(F)
    rng = np.random.default_rng(seed)
    A = la.array(rng.integers(0, q, size=(3, 4)))
    B = la.array(rng.integers(0, q, size=(4, 2)))
    C = la.matmul(A, B)
    for i in range(3):
        for j in range(2):
            acc = 0
            for k in range(4):
                acc = F.add(acc, F.mul(int(A[i, k]), int(B[k, j])))
            assert C[i, j] == acc


# -- monomials and single cells -----------------------------------------------------------

def test_graded_monomials():
    assert [m.x for m in graded_monomials(2, (1, 0))] == [(1, 0), (0, 1)]
    assert [(m.x, m.y) for m in graded_monomials(2, (0, 2))] == [((0, 0), (1, 2))]
    assert len(graded_monomials(3, (2, 1))) == 18


def test_fixed_dim_examples():
    F2, F3 = gf(2), gf(3)
    assert fixed_dim(SubgroupSpec.GL(F2, 2), 0, (3, 0)) == 1
    assert fixed_dim(SubgroupSpec.U(F2, 2), 0, (2, 0)) == 2
    assert fixed_dim(SubgroupSpec.GL(F3, 1), 1, (1, 1)) == 0


def test_degree_bound():
    with pytest.raises(DegreeTooLargeError):
        fixed_dim(SubgroupSpec.GL(gf(2), 3), 0, (30, 1), bound=100)


def test_fixed_space_vectors_are_invariant():
    F = gf(3)
    spec = SubgroupSpec.P(F, (1, 1))
    A = SuperAlgebra(F, 2)
    from dmst.groups import act

    monos, W = fixed_space(spec, 1, (4, 1))
    for c in range(W.shape[1]):
        f = A.zero()
        for pos in np.flatnonzero(W[:, c]):
            f = f + A.monomial(monos[pos].x, monos[pos].y, int(W[pos, c]))
        for g in generators(spec):
            assert act(g, f, 1) == f


# -- tables -------------------------------------------------------------------------------

def test_hilbert_table_examples():
    table = hilbert_table(SubgroupSpec.GL(gf(3), 1), 1, 3)
    assert table.nonzero() == {(1, 0): 1, (0, 1): 1, (3, 0): 1, (2, 1): 1}
    gl = hilbert_table(SubgroupSpec.GL(gf(2), 2), 0, 6)
    assert [gl[(i, 0)] for i in range(7)] == [1, 0, 1, 1, 1, 1, 2]
    u = hilbert_table(SubgroupSpec.U(gf(2), 2), 0, 4)
    assert [u[(i, 0)] for i in range(5)] == [1, 1, 2, 2, 3]


@pytest.mark.parametrize("q,n,T", [(2, 3, 10), (3, 3, 10), (4, 2, 20)])
def test_dickson_row(q, n, T):
    table = hilbert_table(SubgroupSpec.GL(gf(q), n), 0, T)
    expected = expand(closed_form("DicksonGL", q, n=n), T)
    assert all(table[(i, 0)] == expected[(i, 0)] for i in range(T + 1))


def test_steinberg_examples():
    F2 = gf(2)
    st2 = steinberg_table(2, F2, 0, 7)
    assert [st2[(i, 0)] for i in range(8)] == [0, 1, 1, 1, 2, 2, 2, 3]
    assert st2[(0, 0)] == 0
    F3 = gf(3)
    assert steinberg_table(1, F3, 1, 6) == hilbert_table(SubgroupSpec.GL(F3, 1), 1, 6)
    assert steinberg_table(3, F2, 0, 4)[(0, 0)] == 0


@pytest.mark.parametrize(
    "spec,k",
    [
        (SubgroupSpec.GL(gf(3), 2), 0),
        (SubgroupSpec.GL(gf(3), 2), 1),
        (SubgroupSpec.SL(gf(3), 2), 0),
        (SubgroupSpec.K(gf(3), (1, 2)), 1),
        (SubgroupSpec.P(gf(4), (1, 1)), 2),
        (SubgroupSpec.U(gf(3), 3), 0),
        (SubgroupSpec.GL(gf(2), 3), 0),
    ],
)
def test_torus_and_all_elements_do_not_change_results(spec, k):
    T = 7 if spec.n == 2 else 4
    base = hilbert_table(spec, k, T, torus=False)
    assert hilbert_table(spec, k, T, torus=True) == base
    assert hilbert_table(spec, k, T, all_elements=True) == base
    if k == 0:
        assert base[(0, 0)] == 1


def test_redundant_generators_do_not_change_dims():
    F = gf(3)
    spec = SubgroupSpec.P(F, (1, 1))
    gens = list(generators(spec))
    extra = gens + [g @ h for g in gens for h in gens] + [GroupMatrix.identity(F, 2)]
    for bidegree in [(2, 0), (4, 1), (5, 2)]:
        assert fixed_dim(spec, 1, bidegree, group=extra) == fixed_dim(spec, 1, bidegree)


def test_table_serialization():
    table = hilbert_table(SubgroupSpec.GL(gf(3), 1), 1, 2)
    lines = table.to_csv().splitlines()
    assert lines[0] == "tDeg,sDeg,dim" and len(lines) == 1 + 3 * 2
    doc = json.loads(table.to_json())
    assert doc["q"] == 3 and doc["k"] == 1 and doc["T"] == 2
    assert [0, 1, 1] in doc["dims"]


# -- free bases ---------------------------------------------------------------------------

def test_verify_examples():
    F2 = gf(2)
    A = SuperAlgebra(F2, 2)
    report = verify_free_basis(basis_family(A, "PI", (1, 1), 0), SubgroupSpec.P(F2, (1, 1)), 0, 6)
    assert report.passed
    report = verify_free_basis(basis_family(A, "MuiU"), SubgroupSpec.U(F2, 2), 0, 6)
    assert report.passed


def test_duplicated_generator_breaks_independence():
    F2 = gf(2)
    A = SuperAlgebra(F2, 2)
    fam = basis_family(A, "PI", (1, 1), 0)
    bad = dataclasses.replace(fam, generators=fam.generators + [fam.generators[1]])
    report = verify_free_basis(bad, SubgroupSpec.P(F2, (1, 1)), 0, 6)
    assert not report.independent and report.fixed
    assert report.failure["check"] == "independent"
    assert json.loads(report.to_json())["checks"]["independent"] is False


def test_missing_generator_breaks_spanning():
    F3 = gf(3)
    A = SuperAlgebra(F3, 2)
    fam = basis_family(A, "PI", (2,), 1)
    short = dataclasses.replace(fam, generators=fam.generators[:-1])
    report = verify_free_basis(short, SubgroupSpec.P(F3, (2,)), 1, 10)
    assert report.independent and not report.spanning
    assert report.failure["witness"]


def test_wrong_twist_breaks_invariance():
    F3 = gf(3)
    A = SuperAlgebra(F3, 2)
    fam = basis_family(A, "PI", (2,), 1)
    report = verify_free_basis(fam, SubgroupSpec.P(F3, (2,)), 0, 4)
    assert not report.fixed
