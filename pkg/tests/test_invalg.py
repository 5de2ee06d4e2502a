from __future__ import annotations

import random

import pytest

from altform.errors import (DimensionMismatch, FieldMismatch, InvalidInvolution, NotAUnit,
                            NotOrthogonal, ParseError)
from altform.forms import BilinDiagForm
from altform.harness import random_unit, direct_nonsym_instance
from altform.invalg import (alt_sym, conjugate, from_matrix_entries, generated_subalgebra,
                            centralizer, embed_leaf, leaf_factors, matrix_entries,
                            mk_matrix_involution, mk_quaternion_involution,
                            parse_quaternion_element, split_isotropy, tensor, tensor_all)

from conftest import GF2, GF4, QT, QT2, random_ratfunc


def quat(F, a, b, u):
    return mk_quaternion_involution(F, a, b, u)


def test_matrix_sigma_formula():
    t = QT.var("t")
    A = mk_matrix_involution(QT, 2, [QT.one, t])
    E12 = A.basis(1)
    # sigma(E_12) = (u_2 / u_1) E_21
    assert A.sigma(E12) == A.scale(t, A.basis(2))
    x = tuple(random_ratfunc(random.Random(3), QT) for _ in range(4))
    assert A.sigma(A.sigma(x)) == x


def test_matrix_rejects_bad_diagonal():
    with pytest.raises(InvalidInvolution):
        mk_matrix_involution(QT, 2, [QT.one, QT.zero])
    with pytest.raises(DimensionMismatch):
        mk_matrix_involution(QT, 2, [QT.one])
    with pytest.raises(FieldMismatch):
        mk_matrix_involution(QT, 1, [QT2.one])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_alt_sym_dimensions_matrix(n):
    t = QT.var("t")
    A = mk_matrix_involution(QT, n, [t ** k for k in range(n)])
    sp = alt_sym(A)
    assert sp.alt.dim == n * (n - 1) // 2
    assert sp.sym.dim == n * (n + 1) // 2
    assert A.is_orthogonal()
    assert sp.alt <= sp.sym


def test_quaternion_alt_is_line_through_j():
    t1, t2 = QT2.gens()
    o, z = QT2.one, QT2.zero
    Q = quat(QT2, t1, t2, (z, z, o, z))
    assert Q.spaces.alt.dim == 1
    assert (z, z, o, z) in Q.spaces.alt
    assert Q.spaces.sym.dim == 3


def test_quaternion_relations():
    t1, t2 = QT2.gens()
    o, z = QT2.one, QT2.zero
    Q = quat(QT2, t1, t2, (z, z, o, z))
    i, j, ij = Q.basis(1), Q.basis(2), Q.basis(3)
    assert Q.mul(i, i) == Q.add(i, Q.scalar(t1))
    assert Q.mul(j, j) == Q.scalar(t2)
    assert Q.mul(j, i) == Q.add(ij, j)
    assert Q.mul(i, j) == ij


def test_canonical_involution_is_symplectic():
    o, z = QT.one, QT.zero
    t = QT.var("t")
    with pytest.raises(NotOrthogonal):
        quat(QT, t, t + 1, (o, z, z, z))


def test_quaternion_accepts_split_parameters():
    o, z = GF2.one, GF2.zero
    Q = quat(GF2, z, o, (z, z, o, z))
    assert Q.is_orthogonal()


def test_quaternion_rejects_u_not_fixed_by_gamma():
    o, z = QT.one, QT.zero
    t = QT.var("t")
    with pytest.raises(InvalidInvolution):
        quat(QT, t, t + 1, (z, o, z, z))


def test_parse_quaternion_element():
    t = QT.var("t")
    assert parse_quaternion_element(QT, "j+ij") == (QT.zero, QT.zero, QT.one, QT.one)
    assert parse_quaternion_element(QT, "t*j + (t+1)*ij") == (QT.zero, QT.zero, t, t + 1)
    assert parse_quaternion_element(QT, "1 + t + i") == (t + 1, QT.one, QT.zero, QT.zero)
    with pytest.raises(ParseError):
        parse_quaternion_element(QT, "j + ")


def test_tensor_dimensions_and_orthogonality():
    t1, t2 = QT2.gens()
    o, z = QT2.one, QT2.zero
    Q = quat(QT2, t1, t2, (z, z, o, z))
    M = mk_matrix_involution(QT2, 2, [o, t1])
    T = tensor(Q, M)
    assert T.dim == 16
    assert T.is_orthogonal()
    assert T.spaces.alt.dim == 6
    assert len(leaf_factors(T)) == 2
    T3 = tensor_all([M, M, M])
    assert T3.dim == 64
    assert T3.spaces.alt.dim == 28


def test_tensor_is_kronecker():
    t1, t2 = QT2.gens()
    A = mk_matrix_involution(QT2, 2, [QT2.one, t1])
    B = mk_matrix_involution(QT2, 2, [QT2.one, t2])
    T = tensor(A, B)
    x = embed_leaf(T, 0, A.basis(1))
    y = embed_leaf(T, 1, B.basis(2))
    assert T.mul(x, y) == T.mul(y, x)
    assert T.sigma(x) == embed_leaf(T, 0, A.sigma(A.basis(1)))


def test_split_isotropy_examples():
    t = QT.var("t")
    aniso, x = split_isotropy(mk_matrix_involution(QT, 2, [QT.one, t]))
    assert not aniso and x is None
    A = mk_matrix_involution(QT, 2, [QT.one, t * t])
    iso, x = split_isotropy(A)
    assert iso and any(x) and not any(A.mul(A.sigma(x), x))
    inst, _ = direct_nonsym_instance()
    assert split_isotropy(inst.algebra) == (False, None)


def test_split_isotropy_on_tensor():
    t1, t2 = QT2.gens()
    o = QT2.one
    T = tensor(mk_matrix_involution(QT2, 2, [o, t1]), mk_matrix_involution(QT2, 2, [o, t1]))
    iso, x = split_isotropy(T)
    assert iso and not any(T.mul(T.sigma(x), x))
    T2 = tensor(mk_matrix_involution(QT2, 2, [o, t1]), mk_matrix_involution(QT2, 2, [o, t2]))
    assert split_isotropy(T2)[0] is False


def test_split_isotropy_matches_adjoint_form(rng):
    # sigma is adjoint to the diagonal form with Gram matrix u^-1, so isotropy of
    # sigma is isotropy of that form
    for _ in range(20):
        n = rng.randrange(2, 4)
        u = [random_ratfunc(rng, QT2, nonzero=True) for _ in range(n)]
        A = mk_matrix_involution(QT2, n, u)
        form_iso = BilinDiagForm([c.inv() for c in u]).isotropic_vector() is not None
        assert split_isotropy(A)[0] == form_iso


def test_matrix_entries_round_trip():
    inst, X = direct_nonsym_instance()
    A = inst.algebra
    assert matrix_entries(A, from_matrix_entries(A, X)) == X


def test_conjugate_by_one_is_identity():
    t = QT.var("t")
    A = mk_matrix_involution(QT, 2, [QT.one, t])
    B = conjugate(A, A.one)
    assert B.invol == A.invol


def test_conjugate_by_diagonal():
    t = QT.var("t")
    A = mk_matrix_involution(QT, 2, [QT.one, QT.one])
    g = from_matrix_entries(A, [[QT.one, QT.zero], [QT.zero, t]])
    B = conjugate(A, g)
    assert B.invol == mk_matrix_involution(QT, 2, [QT.one, t * t]).invol


def test_conjugate_is_isomorphism(rng):
    t1, t2 = QT2.gens()
    o, z = QT2.one, QT2.zero
    A = tensor(quat(QT2, t1, t2, (z, z, o, z)), mk_matrix_involution(QT2, 2, [o, t2]))
    g = random_unit(rng, A)
    B = conjugate(A, g)
    B.validate(full=True)
    g_inv = A.inverse(g)
    for _ in range(3):
        x = tuple(random_ratfunc(rng, QT2, max_exp=1, max_terms=1) if rng.random() < 0.3 else z
                  for _ in range(A.dim))
        gx = A.mul(A.mul(g, x), g_inv)
        assert B.sigma(gx) == A.mul(A.mul(g, A.sigma(x)), g_inv)


def test_conjugate_requires_unit():
    A = mk_matrix_involution(QT, 2, [QT.one, QT.one])
    with pytest.raises(NotAUnit):
        conjugate(A, A.basis(0))


def test_inverse_and_units():
    t = QT.var("t")
    A = mk_matrix_involution(QT, 2, [QT.one, t])
    g = from_matrix_entries(A, [[QT.one, t], [QT.zero, t]])
    assert A.mul(g, A.inverse(g)) == A.one
    assert A.inverse(A.basis(0)) is None


def test_generated_subalgebra_and_centralizer():
    o, z = GF4.one, GF4.zero
    A = mk_matrix_involution(GF4, 2, [o, o])
    E11 = A.basis(0)
    S = generated_subalgebra(A, [E11])
    assert S.dim == 2
    assert centralizer(A, [E11]) == S
    assert centralizer(A, []).dim == 4


def test_sigma_is_anti_automorphism(rng):
    t1, t2 = QT2.gens()
    o, z = QT2.one, QT2.zero
    Q = quat(QT2, t1, t2, (z, z, o, o))
    for _ in range(10):
        x = tuple(random_ratfunc(rng, QT2) for _ in range(4))
        y = tuple(random_ratfunc(rng, QT2) for _ in range(4))
        assert Q.sigma(Q.mul(x, y)) == Q.mul(Q.sigma(y), Q.sigma(x))


def _instances():
    t1, t2 = QT2.gens()
    o, z = QT2.one, QT2.zero
    return [mk_matrix_involution(QT2, 3, [o, t1, t2]),
            mk_matrix_involution(GF4, 3, [GF4.one, GF4.gen, GF4.one]),
            quat(QT2, t1, t2, (z, z, o, o)),
            tensor(quat(QT2, t1, t2, (z, z, o, z)), mk_matrix_involution(QT2, 2, [o, t2]))]


def _random_vector(rng, F, d, density=0.5):
    if F is GF4:
        return tuple(F.element(rng.randrange(4)) for _ in range(d))
    return tuple(random_ratfunc(rng, F, max_exp=1, max_terms=2) if rng.random() < density else F.zero
                 for _ in range(d))


def test_alt_plus_sym_dimensions():
    for A in _instances():
        sp = A.spaces
        assert sp.alt.dim + sp.sym.dim == A.dim
        assert sp.alt <= sp.sym


def test_sandwich_preserves_alt(rng):
    # sigma(y) x y stays in Alt for x in Alt
    for A in _instances():
        alt = A.spaces.alt
        for _ in range(15):
            z = _random_vector(rng, A.field, A.dim, 0.3)
            x = A.add(z, A.sigma(z))
            y = _random_vector(rng, A.field, A.dim, 0.3)
            assert A.mul(A.mul(A.sigma(y), x), y) in alt


def test_split_form_identity(rng):
    # for x in S: b(x v, x v) = q_sigma(x) b(v, v), b the diagonal form with Gram u^-1
    from altform.alternator import alternator_subalgebra, alternator_value

    t1, t2 = QT2.gens()
    o = QT2.one
    for u in ([o, t1, t2], [o, o, t1], [o, t1, t2, t1 * t2]):
        A = mk_matrix_involution(QT2, len(u), u)
        b = BilinDiagForm([c.inv() for c in u])
        data = alternator_subalgebra(A)
        n = len(u)
        for _ in range(10):
            x = A.zero
            for f in data.s_basis.basis:
                x = A.add(x, A.scale(random_ratfunc(rng, QT2, max_exp=1, max_terms=2), f))
            q = alternator_value(A, x)
            X = matrix_entries(A, x)
            v = _random_vector(rng, QT2, n, 1.0)
            xv = tuple(sum((X[i][j] * v[j] for j in range(n)), QT2.zero) for i in range(n))
            assert b(xv, xv) == q * b(v, v)
