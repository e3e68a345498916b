import itertools
import json
import random

import pytest

from dmst.algebra import SuperAlgebra, substitute
from dmst.errors import BadIndexListError, IndexOutOfRangeError, TwistOutOfRangeError
from dmst.gf import gf
from dmst.groups import Composition, GroupMatrix, SubgroupSpec, act, generators
from dmst.invariants import (
    basis_family,
    dickson_L,
    dickson_Q,
    dickson_V,
    dickson_V_from_Q,
    dickson_VL,
    mui_M,
    parabolic_gens,
    parabolic_q,
    parabolic_theta,
    parabolic_v,
    parabolic_v_product,
)
from dmst.series import compositions


def alg(q, n):
    return SuperAlgebra(gf(q), n)


def test_dickson_vl_examples():
    A = alg(2, 2)
    V1, L1 = dickson_VL(A, 1)
    assert V1 == A.x(1) and L1 == A.x(1)
    V2, _ = dickson_VL(A, 2)
    assert V2 == A.parse("x2^2 + x1*x2")
    B = alg(3, 2)
    assert dickson_VL(B, 2)[1] == B.parse("x1*x2^3 - x1^3*x2")


def test_dickson_q_examples():
    for q in (2, 3, 4):
        A = alg(q, 2)
        assert dickson_Q(A, 1, 0) == A.x(1) ** (q - 1)
        assert dickson_Q(A, 2, 2) == 1
        assert dickson_Q(A, 2, -1) == 0
    A = alg(2, 2)
    expected = A.parse("x1^2 + x1*x2 + x2^2")
    assert dickson_Q(A, 2, 1) == expected
    assert dickson_Q(A, 2, 1, "recursion") == expected


def test_index_errors():
    A = alg(3, 2)
    with pytest.raises(IndexOutOfRangeError):
        dickson_V(A, 3)
    with pytest.raises(BadIndexListError):
        mui_M(A, 2, (1, 0))
    with pytest.raises(BadIndexListError):
        mui_M(A, 2, (2,))
    with pytest.raises(IndexOutOfRangeError):
        parabolic_gens(A, Composition((1, 1)), 3, 1)


def test_mui_examples():
    for q in (2, 3, 5):
        A = alg(q, 2)
        y1, y2 = A.ys()
        x1, x2 = A.xs()
        assert mui_M(alg(q, 1), 1, (0,)) == alg(q, 1).y(1)
        assert mui_M(A, 2, (0,)) == y1 * x2**q - y2 * x1**q
        assert mui_M(A, 2, (0, 1)) == y1 * y2
        assert mui_M(A, 2, (0,)) * mui_M(A, 2, (1,)) == -(y1 * y2 * dickson_L(A, 2))
        assert mui_M(A, 2, ()) == dickson_L(A, 2)
        assert mui_M(A, 0, ()) == 1


def test_mui_full_exterior_block_when_j_reaches_p():
    # j = 3 >= p = 2 and 3: the normalized determinant still equals y1 y2 y3
    for q in (2, 3):
        A = alg(q, 3)
        assert mui_M(A, 3, (0, 1, 2)) == A.y(1) * A.y(2) * A.y(3)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_quotient_equals_recursion_and_vm(q):
    A = alg(q, 4)
    for m in range(1, 5):
        for k in range(m + 1):
            assert dickson_Q(A, m, k, "quotient") == dickson_Q(A, m, k, "recursion")
        assert dickson_V_from_Q(A, m) == dickson_V(A, m)
        assert dickson_L(A, m, "product") == dickson_L(A, m, "determinant")


def lemma_product_holds(A, m):
    L = dickson_L(A, m)
    for j in range(1, m + 1):
        for b in itertools.combinations(range(m), j):
            lhs = A.one()
            for bi in b:
                lhs = lhs * mui_M(A, m, (bi,))
            rhs = mui_M(A, m, b) * L ** (j - 1)
            if (j * (j - 1) // 2) % 2:
                rhs = -rhs
            if lhs != rhs:
                return False
    return True


def substitution_lemma_holds(A, m):
    images = [A.x(a) if a != m else A.zero() for a in range(1, A.n + 1)]
    for j in range(1, m + 1):
        for head in itertools.combinations(range(m - 1), j - 1):
            lhs = substitute(mui_M(A, m, head + (m - 1,)), images, A.ys())
            rhs = mui_M(A, m - 1, head) * A.y(m)
            if (m + j) % 2:
                rhs = -rhs
            if lhs != rhs:
                return False
    return True


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9])
def test_mui_product_lemma(q):
    top = 3 if q <= 4 else 2
    A = alg(q, top)
    for m in range(1, top + 1):
        assert lemma_product_holds(A, m)


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9])
def test_mui_substitution_lemma(q):
    top = 3 if q <= 4 else 2
    A = alg(q, top)
    for m in range(1, top + 1):
        assert substitution_lemma_holds(A, m)


def random_gl(F, n, rng):
    while True:
        try:
            return GroupMatrix(F, [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)])
        except ValueError:
            pass


@pytest.mark.parametrize("q", [3, 4, 5])
def test_mui_equivariance(q):
    rng = random.Random(q)
    F = gf(q)
    A = SuperAlgebra(F, 3)
    for _ in range(5):
        for m in (1, 2, 3):
            block = random_gl(F, m, rng)
            rows = [list(r) + [0] * (3 - m) for r in block.entries] + [
                [0] * m + [int(a == c) for c in range(m, 3)] for a in range(m, 3)
            ]
            g = GroupMatrix(F, rows)
            for b in [(), (0,), (m - 1,), tuple(range(m))]:
                M = mui_M(A, m, b)
                assert act(g, M) == M.scale(g.det())


@pytest.mark.parametrize("q,parts", [(2, (1, 1)), (3, (1, 1)), (2, (1, 2)), (2, (2, 1)), (3, (1, 2)), (2, (1, 1, 1))])
def test_vij_expansion_matches_product(q, parts):
    I = Composition(parts)
    A = alg(q, I.n)
    for i in range(1, I.length + 1):
        for j in range(1, parts[i - 1] + 1):
            assert parabolic_v(A, I, i, j) == parabolic_v_product(A, I, i, j)


def test_parabolic_examples():
    A = alg(2, 2)
    I = Composition((1, 1))
    v, theta, qs = parabolic_gens(A, I, 2, 1)
    assert v == A.parse("x2^2 + x1*x2")
    B = alg(3, 3)
    single = Composition((3,))
    assert parabolic_theta(B, single, 1) == dickson_L(B, 3)
    for k in range(3):
        assert parabolic_q(B, single, 1, k) == dickson_Q(B, 3, k)
    assert parabolic_v(B, single, 1, 2) == B.x(2)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 3), (4, 2)])
def test_theta_degrees_and_equivariance(q, n):
    F = gf(q)
    A = SuperAlgebra(F, n)
    rng = random.Random(7)
    for I in compositions(n):
        prod = A.one()
        for i in range(1, I.length + 1):
            prod = prod * parabolic_theta(A, I, i)
            assert prod.bidegree() == ((q ** I.partial_sums[i] - 1) // (q - 1), 0)
        spec = SubgroupSpec.P(F, I)
        for g in generators(spec) + [rng.choice(generators(spec))]:
            for i in range(1, I.length + 1):
                theta = parabolic_theta(A, I, i)
                assert act(g, theta) == theta.scale(g.block(I, i).det())


def families(q, n):
    F = gf(q)
    yield "MuiGL", None, 0, SubgroupSpec.GL(F, n)
    yield "MuiSL", None, 0, SubgroupSpec.SL(F, n)
    yield "MuiU", None, 0, SubgroupSpec.U(F, n)
    for I in compositions(n):
        yield "KI", I, 0, SubgroupSpec.K(F, I)
        for k in range(q - 1):
            yield "PI", I, k, SubgroupSpec.P(F, I)


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (8, 2), (9, 2)])
def test_family_generators_are_invariant(q, n):
    A = alg(q, n)
    for label, I, k, spec in families(q, n):
        fam = basis_family(A, label, I, k)
        assert len(fam) == 2**n
        for el, bd, _ in fam.generators:
            assert el.is_homogeneous() and el.bidegree() == bd
        for g in generators(spec):
            for el, _, name in fam.generators:
                assert act(g, el, k) == el, (label, I, k, name)


def test_family_examples():
    A = alg(3, 2)
    fam = basis_family(A, "PI", (2,), 0)
    assert len(fam) == 4
    top = basis_family(A, "PI", (1, 1), 1)
    lead, bd, _ = top.generators[0]
    assert lead == parabolic_theta(A, Composition((1, 1)), 1) * parabolic_theta(A, Composition((1, 1)), 2)
    assert bd == ((3**2 - 1) // 2, 0)
    assert basis_family(alg(2, 3), "MuiU").base_degrees == [1, 2, 4]
    with pytest.raises(TwistOutOfRangeError):
        basis_family(A, "PI", (2,), 2)


def test_pi_full_block_matches_mui_gl():
    A = alg(3, 2)
    pi = basis_family(A, "PI", (2,), 0)
    gl = basis_family(A, "MuiGL")
    assert [el for el, _, _ in pi.generators] == [el for el, _, _ in gl.generators]
    assert sorted(pi.base_degrees) == sorted(gl.base_degrees)


def test_family_json():
    fam = basis_family(alg(2, 2), "PI", (1, 1), 0)
    doc = json.loads(fam.to_json())
    assert doc["label"] == "PI" and doc["I"] == [1, 1] and doc["k"] == 0
    assert doc["baseDegrees"] == [1, 2]
    assert {"bidegree": [0, 1], "element": "y1", "name": "M_{1;0}"} in doc["generators"]
