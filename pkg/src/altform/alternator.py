"""The alternator subalgebra S(A, sigma) and the alternator form q_sigma.

``S = {x : sigma(x) x in F + Alt}``; for x in S, ``q_sigma(x)`` is the
scalar with ``sigma(x) x + q_sigma(x) in Alt``.  The map
``x -> sigma(x) x mod (F + Alt)`` is additive (cross terms
``sigma(x) y + sigma(sigma(x) y)`` lie in Alt) and satisfies
``f(l x) = l^2 f(x)``, so S is the kernel of a Frobenius-semilinear map
and is computed with :func:`altform.exactla.semilinear_kernel`.
Because q_sigma is additive on S, every basis of S diagonalizes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Sequence

from .errors import NotOrthogonal, PhiConstructionFailed, UnsupportedProvenance
from .exactla import Subspace, f2span_dim, semilinear_kernel
from .field2 import FieldElement
from .forms import PfisterForm, TSQForm, pfister_expand
from .invalg import (ConjugateProvenance, InvolutionAlgebra, MatrixProvenance,
                     QuaternionProvenance, TensorProvenance, centralizer,
                     embed_leaf, leaf_factors)

Element = tuple


@dataclass(frozen=True)
class AlternatorData:
    s_basis: Subspace
    q_coeffs: tuple
    s_prime_basis: Subspace
    q_prime_coeffs: tuple

    @property
    def dim(self) -> int:
        return self.s_basis.dim

    @property
    def q_form(self) -> TSQForm:
        return TSQForm(self.q_coeffs, self.s_basis.field)

    @property
    def q_prime_form(self) -> TSQForm:
        return TSQForm(self.q_prime_coeffs, self.s_basis.field)


def _require_orthogonal(A: InvolutionAlgebra) -> None:
    if not A.is_orthogonal():
        raise NotOrthogonal("1 lies in Alt(A, sigma)")


def _quotient_images(A: InvolutionAlgebra, W: Subspace) -> list[tuple]:
    """sigma(e_i) e_i reduced modulo W, restricted to non-pivot coordinates."""
    free = [c for c in range(A.dim) if c not in set(W.pivots)]
    images = []
    for i in range(A.dim):
        e = A.basis(i)
        r = W.reduce(A.mul(A.invol[i], e))
        images.append(tuple(r[c] for c in free))
    return images


def alternator_value(A: InvolutionAlgebra, x: Element) -> FieldElement | None:
    """q_sigma(x), or None when x is not in S(A, sigma)."""
    alt = A.spaces.alt
    r = alt.reduce(A.mul(A.sigma(x), x))
    if not any(r):
        return A.field.zero
    one_r = alt.reduce(A.unit)
    p = next(i for i, c in enumerate(one_r) if c)
    c = r[p] / one_r[p]
    if any(a != c * b for a, b in zip(r, one_r)):
        return None
    return c


def alternator_subalgebra(A: InvolutionAlgebra) -> AlternatorData:
    """Compute S(A, sigma), q_sigma on its basis, and S' = S cap Alt with q'."""
    _require_orthogonal(A)
    alt = A.spaces.alt
    W = Subspace(A.field, A.dim, list(alt.basis) + [A.unit])
    S = semilinear_kernel(A.field, _quotient_images(A, W))
    q = []
    for f in S.basis:
        v = alternator_value(A, f)
        if v is None:
            raise AssertionError("computed S-basis vector fails the defining membership")
        q.append(v)
    Sp = S.intersect(alt)
    qp = [alternator_value(A, f) for f in Sp.basis]
    return AlternatorData(S, tuple(q), Sp, tuple(qp))


def psi_kernel(A: InvolutionAlgebra) -> Subspace:
    """``{x : sigma(x) x in Alt}``; zero exactly when sigma is direct."""
    _require_orthogonal(A)
    return semilinear_kernel(A.field, _quotient_images(A, A.spaces.alt))


def is_direct(A: InvolutionAlgebra) -> bool:
    return psi_kernel(A).dim == 0


def q_is_anisotropic(data: AlternatorData) -> bool:
    """q_sigma is anisotropic iff its diagonal coefficients are F^2-independent."""
    return f2span_dim(data.s_basis.field, data.q_coeffs) == len(data.q_coeffs)


def split_fast_membership(u_diag: Sequence[FieldElement], x: Sequence[Sequence[FieldElement]],
                          lam: FieldElement) -> bool:
    """Membership ``x in S`` with ``q_sigma(x) = lam`` for ``Int(diag(u)) o t``.

    Checks ``sum_k x_ki^2 / u_k = lam / u_i`` for every column i.
    """
    n = len(u_diag)
    inv = [a.inv() for a in u_diag]
    for i in range(n):
        acc = lam * inv[i]
        for k in range(n):
            if x[k][i]:
                acc = acc + inv[k] * x[k][i].square()
        if acc:
            return False
    return True


def split_fast_value(u_diag: Sequence[FieldElement],
                     x: Sequence[Sequence[FieldElement]]) -> FieldElement | None:
    """q_sigma(x) read off the column equations, or None when x is not in S.

    Column 0 determines the only candidate ``lam``; the remaining columns
    are then checked by :func:`split_fast_membership`.
    """
    acc = u_diag[0].field.zero
    for k in range(len(u_diag)):
        if x[k][0]:
            acc = acc + x[k][0].square() / u_diag[k]
    lam = acc * u_diag[0]
    return lam if split_fast_membership(u_diag, x, lam) else None


# ---------------------------------------------------------------------------
# field test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldVerdict:
    verdict: str                   # "field" | "not_field" | "inconclusive"
    reason: str = ""
    witness: tuple | None = dc_field(default=None, compare=False)
    squares_scalar: bool = False   # every basis vector squares into F

    @property
    def conclusive(self) -> bool:
        return self.verdict != "inconclusive"

    @property
    def is_field(self) -> bool:
        return self.verdict == "field"


def _combine(A: InvolutionAlgebra, coeffs: Sequence[FieldElement], basis: Sequence[Element]) -> Element:
    x = A.zero
    for c, f in zip(coeffs, basis):
        if c:
            x = A.add(x, A.scale(c, f))
    return x


def field_test(A: InvolutionAlgebra, basis: Sequence[Element]) -> FieldVerdict:
    """Decide whether the subalgebra with the given basis is a field.

    Noncommutative -> not a field.  If every basis square is a scalar,
    squaring is a semilinear map into F and the subalgebra is a field iff
    that map has zero kernel.  Otherwise look for nilpotents through the
    preimages of the iterated squaring map; none found -> inconclusive.
    """
    basis = list(basis)
    F = A.field
    for i, j in combinations(range(len(basis)), 2):
        c = A.commutator(basis[i], basis[j])
        if any(c):
            return FieldVerdict("not_field", "noncommutative", (i, j))
    squares = [A.mul(f, f) for f in basis]
    scal = [A.is_scalar(s) for s in squares]
    if all(s is not None for s in scal):
        ker = semilinear_kernel(F, [(s,) for s in scal])
        if ker.dim == 0:
            return FieldVerdict("field", squares_scalar=True)
        return FieldVerdict("not_field", "nilpotent", _combine(A, ker.basis[0], basis), squares_scalar=True)
    sub = Subspace(F, A.dim, basis)
    eb = sub.basis
    sq = [sub.coordinates(A.mul(f, f)) for f in eb]
    if any(c is None for c in sq):
        return FieldVerdict("not_field", "not closed under multiplication")
    # nilradical = union of the preimages V_{k+1} = Sq^-1(V_k), V_0 = 0
    V = Subspace(F, sub.dim)
    while True:
        piv = set(V.pivots)
        free = [c for c in range(sub.dim) if c not in piv]
        images = []
        for c in sq:
            r = V.reduce(c)
            images.append(tuple(r[k] for k in free))
        nxt = semilinear_kernel(F, images)
        if nxt.dim == V.dim:
            break
        V = nxt
    if V.dim:
        return FieldVerdict("not_field", "nilpotent", _combine(A, V.basis[0], eb))
    return FieldVerdict("inconclusive", "reduced commutative, squares outside F")


def s_field_test(data: AlternatorData, A: InvolutionAlgebra) -> FieldVerdict:
    return field_test(A, data.s_basis.basis)


# ---------------------------------------------------------------------------
# alternating generators and the Pfister invariant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiData:
    generators: tuple
    alphas: tuple
    pf: PfisterForm
    products: tuple       # subset products, subset T encoded in binary (T = 0 gives 1)
    phi_space: Subspace

    @property
    def n(self) -> int:
        return len(self.generators)


def _subset_products(A: InvolutionAlgebra, gens: Sequence[Element]) -> list[Element]:
    prods = [A.unit]
    for v in gens:
        prods = prods + [A.mul(p, v) for p in prods]
    return prods


def _leaf_generator(L: InvolutionAlgebra) -> tuple[Element, FieldElement]:
    alt = L.spaces.alt
    if alt.dim != 1:
        raise PhiConstructionFailed("alt_dim", f"factor has dim Alt = {alt.dim}, expected 1")
    w = alt.basis[0]
    alpha = L.is_scalar(L.mul(w, w))
    if alpha is None or not alpha:
        raise PhiConstructionFailed("square", "alternating factor element does not square to F^x")
    return w, alpha


def _pfister_slots_of_diagonal(u: Sequence[FieldElement]) -> list[FieldElement] | None:
    n = len(u)
    m = n.bit_length() - 1
    if n < 2 or n != 1 << m or not u[0].is_one():
        return None
    slots = [u[1 << i] for i in range(m)]
    if any(not s for s in slots):
        return None
    if pfister_expand(PfisterForm(slots)).coeffs != tuple(u):
        return None
    return slots


def _raw_generators(A: InvolutionAlgebra) -> list[Element]:
    prov = A.provenance
    if isinstance(prov, ConjugateProvenance):
        base = prov.base
        g = prov.g
        g_inv = A.inverse(g)
        return [A.mul(A.mul(g, v), g_inv) for v in _raw_generators(base)]
    if isinstance(prov, MatrixProvenance) and prov.n > 2:
        slots = _pfister_slots_of_diagonal(prov.u_diag)
        if slots is None:
            raise UnsupportedProvenance("matrix instance is not Pfister-diagonal")
        N = prov.n
        F = A.field
        gens = []
        for i, a in enumerate(slots):
            # Kronecker factor at index bit i is [[0, 1], [a, 0]], identity elsewhere
            x = [F.zero] * A.dim
            for r in range(N):
                x[r * N + (r ^ (1 << i))] = a if (r >> i) & 1 else F.one
            gens.append(tuple(x))
        return gens
    if not isinstance(prov, (TensorProvenance, QuaternionProvenance, MatrixProvenance)):
        raise UnsupportedProvenance("phi needs tensor, quaternion or 2x2 matrix provenance")
    leaves = leaf_factors(A)
    gens = []
    for idx, L in enumerate(leaves):
        if isinstance(L.provenance, MatrixProvenance):
            if L.provenance.n != 2:
                raise UnsupportedProvenance("matrix tensor factors must be 2x2")
        elif not isinstance(L.provenance, QuaternionProvenance):
            raise UnsupportedProvenance("tensor factors must be quaternion algebras")
        w, _ = _leaf_generator(L)
        gens.append(embed_leaf(A, idx, w))
    return gens


def phi_and_pfister(A: InvolutionAlgebra) -> PhiData:
    """Alternating generators of Phi(A, sigma) and Pf(A, sigma) = <<v_i^2>>.

    Every structural property of the generators is verified; a failure
    raises :class:`PhiConstructionFailed` naming the check.
    """
    _require_orthogonal(A)
    gens = _raw_generators(A)
    n = len(gens)
    alphas = []
    for i, v in enumerate(gens):
        a = A.is_scalar(A.mul(v, v))
        if a is None or not a:
            raise PhiConstructionFailed("square", f"generator {i} does not square to F^x")
        alphas.append(a)
    for i, j in combinations(range(n), 2):
        if any(A.commutator(gens[i], gens[j])):
            raise PhiConstructionFailed("commute", f"generators {i} and {j}")
    prods = _subset_products(A, gens)
    alt = A.spaces.alt
    for T in range(1, 1 << n):
        if prods[T] not in alt:
            raise PhiConstructionFailed("alternating", f"product for subset {T:b} not in Alt")
    phi = Subspace(A.field, A.dim, prods)
    if phi.dim != 1 << n:
        raise PhiConstructionFailed("dimension", f"span of products has dim {phi.dim}")
    cent = centralizer(A, gens)
    if cent.dim != 1 << n:
        raise PhiConstructionFailed("self_centralizing", f"centralizer has dim {cent.dim}")
    return PhiData(tuple(gens), tuple(alphas), PfisterForm(alphas, A.field), tuple(prods), phi)
