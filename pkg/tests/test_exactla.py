from __future__ import annotations

import itertools

import pytest

from altform.errors import DimensionMismatch
from altform.exactla import (Matrix, Subspace, f2span_contains, f2span_dim, f2span_equal,
                             image_span, rref_kernel, semilinear_kernel, solve, subspace_ops)

from conftest import GF2, GF4, QT, QT2, random_ratfunc


def test_kernel_examples():
    assert rref_kernel(Matrix.identity(GF2, 3)).dim == 0
    assert rref_kernel(Matrix.zeros(GF2, 2, 3)).dim == 3
    t = QT.var("t")
    K = rref_kernel(Matrix(QT, [[QT.one, t], [t, t * t]]))
    assert K == Subspace(QT, 2, [(t, QT.one)])


def test_image_span_examples():
    o, z = GF2.one, GF2.zero
    assert image_span(GF2, [(o, z), (o, z)]).dim == 1
    assert image_span(GF2, [], 2).dim == 0
    t = QT.var("t")
    assert image_span(QT, [(QT.one, t), (t, t * t), (QT.zero, QT.one)]).dim == 2


def test_subspace_ops_examples():
    o, z = GF2.one, GF2.zero
    V = Subspace(GF2, 2, [(o, o)])
    assert subspace_ops(V, V, "intersect") == V
    assert (Subspace(GF2, 2, [(o, z)]) & Subspace(GF2, 2, [(z, o)])).dim == 0
    t = QT.var("t")
    a = Subspace(QT, 2, [(QT.one, t)])
    b = Subspace(QT, 2, [(QT.one, t), (QT.zero, QT.one)])
    assert a.intersect(b) == a
    assert subspace_ops(b, a, "contains") is True
    assert subspace_ops(a, b, "contains") is False
    assert subspace_ops(a, b, "sum") == b
    assert subspace_ops(b, b, "equal") is True


def test_subspace_canonical_basis(rng):
    vs = [tuple(random_ratfunc(rng, QT2) for _ in range(4)) for _ in range(3)]
    A = Subspace(QT2, 4, vs)
    shuffled = [vs[2], vs[0] + tuple(), vs[1]]
    B = Subspace(QT2, 4, [tuple(x + y for x, y in zip(shuffled[0], shuffled[1]))] + shuffled[1:])
    assert A == B
    assert A.basis == B.basis


def test_subspace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Subspace(GF2, 2) & Subspace(GF2, 3)


def _random_matrix(rng, F, r, c):
    if F is QT:
        return Matrix(F, [[random_ratfunc(rng, F, max_exp=2) if rng.random() < 0.6 else F.zero
                           for _ in range(c)] for _ in range(r)])
    return Matrix(F, [[F.element(rng.randrange(F.order)) for _ in range(c)] for _ in range(r)])


@pytest.mark.parametrize("F", [GF2, GF4, QT])
def test_rank_nullity_and_kernel_property(F, rng):
    for _ in range(20):
        r, c = rng.randrange(1, 5), rng.randrange(1, 5)
        M = _random_matrix(rng, F, r, c)
        K = rref_kernel(M)
        assert M.rank() + K.dim == c
        for x in K.basis:
            assert all(not y for y in M.apply(x))


def _brute_semilinear_kernel(F, images):
    k, d = len(images), len(images[0])
    sols = []
    for lam in itertools.product(F.elements(), repeat=k):
        acc = [F.zero] * d
        for l, u in zip(lam, images):
            for i in range(d):
                acc[i] = acc[i] + l.square() * u[i]
        if all(not a for a in acc):
            sols.append(lam)
    return sols


@pytest.mark.parametrize("F", [GF2, GF4])
def test_semilinear_kernel_matches_enumeration(F, rng):
    for _ in range(30):
        k, d = rng.randrange(1, 5), rng.randrange(1, 4)
        images = [tuple(F.element(rng.randrange(F.order)) for _ in range(d)) for _ in range(k)]
        K = semilinear_kernel(F, images)
        brute = _brute_semilinear_kernel(F, images)
        assert len(brute) == F.order ** K.dim
        assert all(v in K for v in brute)


def test_semilinear_kernel_over_gf2_is_linear_kernel(rng):
    for _ in range(10):
        M = _random_matrix(rng, GF2, 3, 4)
        images = M.columns()
        assert semilinear_kernel(GF2, images) == rref_kernel(M)


def test_semilinear_kernel_examples():
    t = QT.var("t")
    assert semilinear_kernel(QT, [(QT.one,), (t,)]).dim == 0
    K = semilinear_kernel(QT, [(QT.one,), (QT.one,)])
    assert K == Subspace(QT, 2, [(QT.one, QT.one)])


def test_semilinear_kernel_solutions_scale(rng):
    F = QT2
    for _ in range(10):
        base = [random_ratfunc(rng, F, nonzero=True) for _ in range(3)]
        # force a dependency: last image is a square combination of the others
        c = [random_ratfunc(rng, F) for _ in range(2)]
        images = [(b,) for b in base[:2]] + [(c[0].square() * base[0] + c[1].square() * base[1],)]
        K = semilinear_kernel(F, images)
        assert K.dim >= 1
        for lam in K.basis:
            for _ in range(10):
                s = random_ratfunc(rng, F, nonzero=True)
                acc = F.zero
                for l, u in zip(lam, images):
                    acc = acc + (s * l).square() * u[0]
                assert not acc


def test_f2span_dim_examples():
    t = QT.var("t")
    assert f2span_dim(QT, [QT.one, t]) == 2
    assert f2span_dim(QT, [QT.one, QT.one]) == 1
    t1, t2 = QT2.gens()
    assert f2span_dim(QT2, [QT2.one, t1, t2, t1 * t2]) == 4
    assert f2span_dim(QT, [QT.one, t, t + 1]) == 2
    assert f2span_dim(GF4, [GF4.one, GF4.gen]) == 1


def test_f2span_invariant_under_square_scaling(rng):
    for _ in range(20):
        vals = [random_ratfunc(rng, QT2) for _ in range(4)]
        c = random_ratfunc(rng, QT2, nonzero=True)
        assert f2span_dim(QT2, [c.square() * v for v in vals]) == f2span_dim(QT2, vals)


def test_f2span_membership_and_equality():
    t = QT.var("t")
    assert f2span_contains(QT, [QT.one, t], t ** 3 + 1)
    assert not f2span_contains(QT, [QT.one], t)
    assert f2span_equal(QT, [QT.one, t], [t + 1, t * t])


def test_subspace_equality_is_an_equivalence(rng):
    spaces = []
    for _ in range(6):
        vs = [tuple(GF4.element(rng.randrange(4)) for _ in range(3)) for _ in range(2)]
        spaces.append(Subspace(GF4, 3, vs))
    for a, b, c in itertools.product(spaces, repeat=3):
        assert a == a
        assert (a == b) == (b == a)
        if a == b and b == c:
            assert a == c


def test_solve():
    t = QT.var("t")
    cols = [(QT.one, t), (QT.zero, QT.one)]
    x = solve(QT, cols, (QT.one, QT.zero))
    assert x == (QT.one, t)
    assert solve(QT, [(QT.one, t)], (QT.zero, QT.one)) is None


def test_matrix_algebra(rng):
    A = _random_matrix(rng, QT, 3, 3)
    B = _random_matrix(rng, QT, 3, 3)
    assert (A @ B).transpose() == B.transpose() @ A.transpose()
    assert A @ Matrix.identity(QT, 3) == A
