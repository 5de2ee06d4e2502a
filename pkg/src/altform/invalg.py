"""Finite-dimensional algebras with involution, given by structure constants.

An element is a tuple of coordinates on the algebra basis.  The
multiplication table stores, for each ordered pair of basis vectors, the
sparse list of ``(k, c)`` with ``e_i e_j = sum(c e_k)``; ``c is None``
stands for the coefficient 1.  The involution is stored by the images of
the basis vectors.

Constructors: ``mk_matrix_involution`` (M_n(F) with Int(u) o t for a
diagonal u), ``mk_quaternion_involution`` (the algebra [a, b) with
Int(u) o gamma), ``tensor`` and ``conjugate``.  Each records how the
algebra was built in ``provenance``; several later computations need it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

from .errors import (DimensionMismatch, FieldMismatch, InvalidInvolution,
                     NotAUnit, NotOrthogonal, UnsupportedProvenance)
from .exactla import Subspace, kernel_of_rows, solve
from .field2 import Field, FieldElement
from .forms import BilinDiagForm

Element = tuple


@dataclass(frozen=True)
class MatrixProvenance:
    n: int
    u_diag: tuple


@dataclass(frozen=True)
class QuaternionProvenance:
    a: FieldElement
    b: FieldElement
    u: tuple


@dataclass(frozen=True)
class TensorProvenance:
    left: "InvolutionAlgebra"
    right: "InvolutionAlgebra"


@dataclass(frozen=True)
class ConjugateProvenance:
    base: "InvolutionAlgebra"
    g: tuple


@dataclass(frozen=True)
class ScalarProvenance:
    pass


Provenance = Union[MatrixProvenance, QuaternionProvenance, TensorProvenance,
                   ConjugateProvenance, ScalarProvenance]


@dataclass(frozen=True)
class AltSymSpaces:
    alt: Subspace
    sym: Subspace


class InvolutionAlgebra:
    """Associative unital algebra with an involution of the first kind."""

    def __init__(self, field: Field, table, unit: Sequence[FieldElement],
                 invol: Sequence[Sequence[FieldElement]], provenance: Provenance):
        self.field = field
        self.dim = len(unit)
        self.table = table
        self.unit = tuple(unit)
        self.invol = tuple(tuple(c) for c in invol)
        self.provenance = provenance
        if len(self.invol) != self.dim or len(table) != self.dim:
            raise DimensionMismatch("structure data has inconsistent dimensions")

    # -- elements ----------------------------------------------------------

    @property
    def zero(self) -> Element:
        return (self.field.zero,) * self.dim

    @property
    def one(self) -> Element:
        return self.unit

    def basis(self, i: int) -> Element:
        z, o = self.field.zero, self.field.one
        return tuple(o if k == i else z for k in range(self.dim))

    def scalar(self, c: FieldElement) -> Element:
        return tuple(c * x if x else x for x in self.unit)

    def add(self, x: Element, y: Element) -> Element:
        return tuple(a + b for a, b in zip(x, y))

    def scale(self, c: FieldElement, x: Element) -> Element:
        return tuple(c * a if a else a for a in x)

    def mul(self, x: Element, y: Element) -> Element:
        acc: dict[int, FieldElement] = {}
        ys = [(j, b) for j, b in enumerate(y) if b]
        table = self.table
        for i, a in enumerate(x):
            if not a:
                continue
            row = table[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j]:
                    v = ab if c is None else ab * c
                    old = acc.get(k)
                    acc[k] = v if old is None else old + v
        z = self.field.zero
        return tuple(acc.get(k, z) for k in range(self.dim))

    def sigma(self, x: Element) -> Element:
        z = self.field.zero
        acc = [z] * self.dim
        for j, a in enumerate(x):
            if not a:
                continue
            for k, c in enumerate(self.invol[j]):
                if c:
                    acc[k] = acc[k] + a * c
        return tuple(acc)

    def commutator(self, x: Element, y: Element) -> Element:
        return self.add(self.mul(x, y), self.mul(y, x))

    def left_columns(self, x: Element) -> list[Element]:
        """Columns of left multiplication by ``x``."""
        return [self.mul(x, self.basis(j)) for j in range(self.dim)]

    def inverse(self, x: Element) -> Element | None:
        y = solve(self.field, self.left_columns(x), self.unit)
        if y is None:
            return None
        # left inverse is two-sided in a finite-dimensional algebra
        return y

    def is_unit(self, x: Element) -> bool:
        return self.inverse(x) is not None

    def is_scalar(self, x: Element) -> FieldElement | None:
        """``c`` if ``x = c * 1``, else None."""
        p = next(i for i, u in enumerate(self.unit) if u)
        c = x[p] / self.unit[p]
        return c if self.scalar(c) == tuple(x) else None

    # -- validation -------------------------------------------------------

    def validate(self, full: bool = True) -> None:
        """Check the algebra-with-involution axioms on basis elements.

        ``full=False`` skips associativity and anti-multiplicativity,
        which hold automatically for tensor products of validated factors.
        """
        d = self.dim
        e = [self.basis(i) for i in range(d)]
        for i in range(d):
            if self.mul(self.unit, e[i]) != e[i] or self.mul(e[i], self.unit) != e[i]:
                raise InvalidInvolution(f"unit law fails on basis vector {i}")
            if self.sigma(self.invol[i]) != e[i]:
                raise InvalidInvolution(f"sigma^2 != id on basis vector {i}")
        if self.sigma(self.unit) != self.unit:
            raise InvalidInvolution("sigma does not fix 1")
        if not full:
            return
        prods = [[self.mul(e[i], e[j]) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if self.mul(prods[i][j], e[k]) != self.mul(e[i], prods[j][k]):
                        raise InvalidInvolution(f"associativity fails on ({i}, {j}, {k})")
        for i in range(d):
            for j in range(d):
                if self.sigma(prods[i][j]) != self.mul(self.invol[j], self.invol[i]):
                    raise InvalidInvolution(f"sigma not anti-multiplicative on ({i}, {j})")

    # -- Alt / Sym --------------------------------------------------------

    @cached_property
    def spaces(self) -> AltSymSpaces:
        return alt_sym(self)

    def is_orthogonal(self) -> bool:
        return is_orthogonal(self)

    def __repr__(self) -> str:
        return f"InvolutionAlgebra(dim={self.dim}, {type(self.provenance).__name__})"


def _matrix_index(n: int, i: int, j: int) -> int:
    return i * n + j


def mk_matrix_involution(field: Field, n: int, u_diag: Sequence[FieldElement],
                         validate: bool = True) -> InvolutionAlgebra:
    """M_n(F) on the matrix units with ``sigma(x) = u x^t u^-1``, u diagonal."""
    if len(u_diag) != n:
        raise DimensionMismatch(f"u_diag has {len(u_diag)} entries, expected {n}")
    u = tuple(u_diag)
    for c in u:
        if c.field != field:
            raise FieldMismatch("u_diag entries from another field")
        if not c:
            raise InvalidInvolution("diagonal entries of u must be nonzero")
    d = n * n
    table = [[() for _ in range(d)] for _ in range(d)]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                # E_ij E_jl = E_il
                table[_matrix_index(n, i, j)][_matrix_index(n, j, l)] = ((_matrix_index(n, i, l), None),)
    z, o = field.zero, field.one
    unit = [z] * d
    for i in range(n):
        unit[_matrix_index(n, i, i)] = o
    invol = []
    for i in range(n):
        for j in range(n):
            col = [z] * d
            # u E_ji u^-1 = (u_j / u_i) E_ji
            col[_matrix_index(n, j, i)] = u[j] / u[i]
            invol.append(col)
    A = InvolutionAlgebra(field, table, unit, invol, MatrixProvenance(n, u))
    if validate:
        A.validate()
    return A


QUATERNION_BASIS = ("1", "i", "j", "ij")


def _quaternion_algebra_table(field: Field, a: FieldElement, b: FieldElement):
    """Structure constants of [a, b): i^2 = i + a, j^2 = b, ji = ij + j."""
    o = None

    def terms(*pairs):
        return tuple((k, c) for k, c in pairs if c is None or c)

    t = [[()] * 4 for _ in range(4)]
    for x in range(4):
        t[0][x] = ((x, o),)
        t[x][0] = ((x, o),)
    t[1][1] = terms((0, a), (1, o))
    t[1][2] = terms((3, o))
    t[1][3] = terms((2, a), (3, o))
    t[2][1] = terms((2, o), (3, o))
    t[2][2] = terms((0, b))
    t[2][3] = terms((0, b), (1, b))
    t[3][1] = terms((2, a))
    t[3][2] = terms((1, b))
    t[3][3] = terms((0, a * b))
    return t


def mk_quaternion_involution(field: Field, a: FieldElement, b: FieldElement,
                             u: Sequence[FieldElement], validate: bool = True) -> InvolutionAlgebra:
    """[a, b) on the basis (1, i, j, ij) with ``sigma = Int(u) o gamma``.

    ``u`` is given by its coordinates; it must be fixed by the canonical
    involution gamma and invertible, and the result must be orthogonal.
    """
    if not b:
        raise InvalidInvolution("b must be nonzero")
    u = tuple(u)
    if len(u) != 4:
        raise DimensionMismatch("quaternion elements have 4 coordinates")
    z, o = field.zero, field.one
    table = _quaternion_algebra_table(field, a, b)
    gamma_cols = [(o, z, z, z), (o, o, z, z), (z, z, o, z), (z, z, z, o)]
    Q0 = InvolutionAlgebra(field, table, (o, z, z, z), gamma_cols, ScalarProvenance())
    if Q0.sigma(u) != u:
        raise InvalidInvolution("u is not fixed by the canonical involution")
    u_inv = Q0.inverse(u)
    if u_inv is None:
        raise InvalidInvolution("u is not invertible")
    invol = []
    for k in range(4):
        invol.append(Q0.mul(Q0.mul(u, gamma_cols[k]), u_inv))
    Q = InvolutionAlgebra(field, table, (o, z, z, z), invol, QuaternionProvenance(a, b, u))
    if validate:
        Q.validate()
    if not Q.is_orthogonal():
        raise NotOrthogonal("Int(u) o gamma is symplectic for this u")
    return Q


def scalar_algebra(field: Field) -> InvolutionAlgebra:
    """F itself, with the identity involution."""
    o = field.one
    return InvolutionAlgebra(field, [[((0, None),)]], (o,), [(o,)], ScalarProvenance())


def _kron(x: Sequence[FieldElement], y: Sequence[FieldElement]) -> Element:
    z = x[0].field.zero if x else None
    return tuple((a * b if a and b else z) for a in x for b in y)


def tensor(lhs: InvolutionAlgebra, rhs: InvolutionAlgebra) -> InvolutionAlgebra:
    """A (x) B on the basis e_i (x) f_j (index i * dim B + j), sigma_A (x) sigma_B."""
    if lhs.field != rhs.field:
        raise FieldMismatch("tensor factors over different fields")
    dA, dB = lhs.dim, rhs.dim
    d = dA * dB
    table = [[() for _ in range(d)] for _ in range(d)]
    for i1 in range(dA):
        for i2 in range(dA):
            ta = lhs.table[i1][i2]
            if not ta:
                continue
            for j1 in range(dB):
                row = table[i1 * dB + j1]
                for j2 in range(dB):
                    tb = rhs.table[j1][j2]
                    if not tb:
                        continue
                    entry = []
                    for k1, c1 in ta:
                        for k2, c2 in tb:
                            if c1 is None:
                                c = c2
                            elif c2 is None:
                                c = c1
                            else:
                                c = c1 * c2
                            entry.append((k1 * dB + k2, c))
                    row[i2 * dB + j2] = tuple(entry)
    unit = _kron(lhs.unit, rhs.unit)
    invol = [_kron(lhs.invol[i], rhs.invol[j]) for i in range(dA) for j in range(dB)]
    T = InvolutionAlgebra(lhs.field, table, unit, invol, TensorProvenance(lhs, rhs))
    T.validate(full=False)
    return T


def tensor_all(factors: Sequence[InvolutionAlgebra]) -> InvolutionAlgebra:
    """Left-nested tensor product of one or more factors."""
    if not factors:
        raise ValueError("need at least one factor")
    A = factors[0]
    for B in factors[1:]:
        A = tensor(A, B)
    return A


def conjugate(A: InvolutionAlgebra, g: Element, validate: bool = True) -> InvolutionAlgebra:
    """Same algebra with ``sigma' = Int(g) o sigma o Int(g^-1)``.

    ``x -> g x g^-1`` is then an isomorphism (A, sigma) -> (A, sigma').
    """
    g = tuple(g)
    g_inv = A.inverse(g)
    if g_inv is None:
        raise NotAUnit("g is not invertible")
    invol = []
    for k in range(A.dim):
        e = A.basis(k)
        inner = A.mul(A.mul(g_inv, e), g)
        invol.append(A.mul(A.mul(g, A.sigma(inner)), g_inv))
    B = InvolutionAlgebra(A.field, A.table, A.unit, invol, ConjugateProvenance(A, g))
    if validate:
        B.validate(full=False)
    return B


def alt_sym(A: InvolutionAlgebra) -> AltSymSpaces:
    """Alt = image of x -> x + sigma(x); Sym = its kernel."""
    cols = [A.add(A.basis(j), A.invol[j]) for j in range(A.dim)]
    alt = Subspace(A.field, A.dim, cols)
    rows = []
    for i in range(A.dim):
        rows.append({j: c[i] for j, c in enumerate(cols) if c[i]})
    sym = kernel_of_rows(A.field, rows, A.dim)
    return AltSymSpaces(alt, sym)


def is_orthogonal(A: InvolutionAlgebra) -> bool:
    return A.unit not in A.spaces.alt


# -- split instances --------------------------------------------------------

def leaf_factors(A: InvolutionAlgebra) -> list[InvolutionAlgebra]:
    """Leaves of the tensor tree, left to right; a non-tensor algebra is its own leaf."""
    if isinstance(A.provenance, TensorProvenance):
        return leaf_factors(A.provenance.left) + leaf_factors(A.provenance.right)
    return [A]


def embed_leaf(A: InvolutionAlgebra, leaf: int, x: Element) -> Element:
    """Image of ``x`` in leaf ``leaf`` under 1 (x) ... (x) x (x) ... (x) 1."""
    leaves = leaf_factors(A)
    v = None
    for idx, L in enumerate(leaves):
        w = tuple(x) if idx == leaf else L.unit
        v = w if v is None else _kron(v, w)
    return v


def _split_data(A: InvolutionAlgebra):
    """(N, u, index map) when A is M_N(F) with diagonal Int(u) o t, up to
    the Kronecker identification of a tensor of such algebras."""
    leaves = leaf_factors(A)
    if not all(isinstance(L.provenance, MatrixProvenance) for L in leaves):
        raise UnsupportedProvenance("split isotropy needs matrix factors")
    if isinstance(A.provenance, MatrixProvenance):
        n = A.provenance.n
        return n, A.provenance.u_diag, lambda a, b: a * n + b
    ns = [L.provenance.n for L in leaves]
    u = (A.field.one,)
    for L in leaves:
        u = _kron(u, L.provenance.u_diag)
    N = len(u)

    def index(a: int, b: int) -> int:
        # mixed radix: split a, b into per-leaf digits, then nest leaf indices
        digits = []
        for n in reversed(ns):
            digits.append((a % n, b % n))
            a //= n
            b //= n
        idx = 0
        for n, (ai, bi) in zip(ns, reversed(digits)):
            idx = idx * n * n + ai * n + bi
        return idx

    return N, u, index


def split_isotropy(A: InvolutionAlgebra) -> tuple[bool, Element | None]:
    """Decide isotropy of a split diagonal instance through its adjoint form.

    Returns ``(True, x)`` with ``x != 0`` and ``sigma(x) x = 0`` verified in
    ``A``, or ``(False, None)``.
    """
    N, u, index = _split_data(A)
    v = BilinDiagForm(u).isotropic_vector()
    if v is None:
        return False, None
    # sigma is adjoint to b(x, y) = sum x_i y_i / u_i; w = u v is b-isotropic,
    # and x = w (u^-1 w)^t = w v^t is the rank-one map y -> b(w, y) w.
    w = [ui * vi for ui, vi in zip(u, v)]
    z = A.field.zero
    x = [z] * A.dim
    for a in range(N):
        for b in range(N):
            if w[a] and v[b]:
                x[index(a, b)] = w[a] * v[b]
    x = tuple(x)
    if not any(x) or any(A.mul(A.sigma(x), x)):
        raise AssertionError("split isotropy witness failed verification")
    return True, x


def matrix_entries(A: InvolutionAlgebra, x: Element) -> list[list[FieldElement]]:
    """x as an N x N matrix (split instances only)."""
    N, _, index = _split_data(A)
    return [[x[index(a, b)] for b in range(N)] for a in range(N)]


def from_matrix_entries(A: InvolutionAlgebra, m: Sequence[Sequence[FieldElement]]) -> Element:
    N, _, index = _split_data(A)
    z = A.field.zero
    x = [z] * A.dim
    for a in range(N):
        for b in range(N):
            x[index(a, b)] = m[a][b]
    return tuple(x)


def split_form_coeffs(A: InvolutionAlgebra) -> tuple:
    """Diagonal u of a split instance (Kronecker product over leaves)."""
    return _split_data(A)[1]


def generated_subalgebra(A: InvolutionAlgebra, gens: Sequence[Element]) -> Subspace:
    """Subalgebra generated by ``gens`` (with 1), by closing under products."""
    S = Subspace(A.field, A.dim, [A.unit] + list(gens))
    while True:
        basis = list(S.basis)
        new = basis + [A.mul(x, y) for x in basis for y in basis]
        T = Subspace(A.field, A.dim, new)
        if T.dim == S.dim:
            return S
        S = T


def centralizer(A: InvolutionAlgebra, elems: Sequence[Element]) -> Subspace:
    """``{x : x v = v x for all v in elems}``."""
    rows = []
    cols_per = []
    for v in elems:
        cols_per.append([A.commutator(A.basis(j), v) for j in range(A.dim)])
    for cols in cols_per:
        for i in range(A.dim):
            r = {j: c[i] for j, c in enumerate(cols) if c[i]}
            if r:
                rows.append(r)
    return kernel_of_rows(A.field, rows, A.dim)


def parse_quaternion_element(field: Field, text: str) -> Element:
    """Parse ``"j+ij"``, ``"t*j + (t+1)*ij"``, ``"1 + j"`` into coordinates.

    Basis tokens ``1``, ``i``, ``j``, ``ij`` may carry a coefficient joined
    with ``*``; a term without a basis token is a scalar.
    """
    from .errors import ParseError

    z = field.zero
    coords = [z, z, z, z]
    depth = 0
    terms, start = [], 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "+" and depth == 0:
            terms.append((text[start:pos], start))
            start = pos + 1
    terms.append((text[start:], start))
    names = {"i": 1, "j": 2, "ij": 3}
    for term, offset in terms:
        s = term.strip()
        if not s:
            raise ParseError(f"empty term in quaternion element {text!r}", column=offset + 1)
        coeff_text, _, last = s.rpartition("*")
        last = last.strip()
        if last in names:
            coeff = field.parse(coeff_text) if coeff_text.strip() else field.one
            coords[names[last]] = coords[names[last]] + coeff
        else:
            try:
                coords[0] = coords[0] + field.parse(s)
            except ParseError as exc:
                raise ParseError(f"{exc} (quaternion term {s!r})", column=offset + 1) from exc
    return tuple(coords)
