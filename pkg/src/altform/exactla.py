"""Dense exact linear algebra over the fields of :mod:`altform.field2`.

Vectors are tuples of field elements.  Elimination works on sparse row
dicts internally (most systems produced by the algebra code are sparse)
and always returns reduced row echelon data, so two subspaces are equal
exactly when their stored bases are equal.

``semilinear_kernel`` solves ``sum(l_i**2 * u_i) = 0`` by Frobenius
descent: every coordinate of every ``u_i`` is expanded over a basis of F
over F^2, which turns the semilinear condition into an F-linear system in
the unknowns ``l_i``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch
from .field2 import Field, FieldElement

Vector = tuple

__all__ = [
    "Matrix",
    "Subspace",
    "rref",
    "rref_kernel",
    "kernel_of_rows",
    "image_span",
    "semilinear_kernel",
    "f2span_dim",
    "f2span_contains",
    "f2span_equal",
    "solve",
    "subspace_ops",
]


class Matrix:
    """Row-major matrix over a single field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence[FieldElement]], cols: int | None = None):
        self.field = field
        self.data = tuple(tuple(r) for r in data)
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        for r in self.data:
            if len(r) != cols:
                raise DimensionMismatch("ragged matrix")
            for x in r:
                if x.field is not field and x.field != field:
                    raise FieldMismatch("matrix entries from different fields")

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, field: Field, entries: Sequence[FieldElement]) -> "Matrix":
        n = len(entries)
        z = field.zero
        return cls(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence[FieldElement]], nrows: int) -> "Matrix":
        return cls(field, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matrix) and self.data == other.data and self.cols == other.cols

    def __hash__(self) -> int:
        return hash(self.data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other, same_shape=True)
        return Matrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        z = self.field.zero
        out = []
        ocols = other.transpose().data
        for r in self.data:
            row = []
            for c in ocols:
                acc = z
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(self.field, out, other.cols)

    def scale(self, c: FieldElement) -> "Matrix":
        return Matrix(self.field, [[c * a for a in r] for r in self.data], self.cols)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self.data)] if self.rows else [], self.rows)

    def apply(self, v: Sequence[FieldElement]) -> Vector:
        z = self.field.zero
        out = []
        for r in self.data:
            acc = z
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def columns(self) -> list[Vector]:
        return [tuple(r[j] for r in self.data) for j in range(self.cols)]

    def rank(self) -> int:
        return len(rref(self.field, self.data, self.cols)[1])

    def flat(self) -> Vector:
        return tuple(x for r in self.data for x in r)

    def _check(self, other: "Matrix", same_shape: bool = False) -> None:
        if other.field != self.field:
            raise FieldMismatch("matrices over different fields")
        if same_shape and (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.data) + "]"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def _sparse(row: Sequence[FieldElement]) -> dict[int, FieldElement]:
    return {j: x for j, x in enumerate(row) if x}


def _axpy(target: dict[int, FieldElement], c: FieldElement, src: dict[int, FieldElement]) -> None:
    """target += c * src, in place, dropping cancelled entries."""
    for j, x in src.items():
        y = target.get(j)
        v = c * x if y is None else y + c * x
        if v:
            target[j] = v
        elif y is not None:
            del target[j]


class _Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, field: Field):
        self.field = field
        self.pivots: dict[int, dict[int, FieldElement]] = {}

    def reduce(self, row: dict[int, FieldElement]) -> dict[int, FieldElement]:
        row = dict(row)
        for c in sorted(set(row) & self.pivots.keys()):
            x = row.get(c)
            if x:
                _axpy(row, x, self.pivots[c])
        return row

    def add(self, row: dict[int, FieldElement]) -> int | None:
        """Insert a row; returns the new pivot column or None if dependent."""
        row = self.reduce(row)
        if not row:
            return None
        c = min(row)
        inv = row[c].inv()
        if not inv.is_one():
            row = {j: inv * x for j, x in row.items()}
        for p, prow in self.pivots.items():
            x = prow.get(c)
            if x:
                _axpy(prow, x, row)
        self.pivots[c] = row
        return c

    def rows(self, ncols: int) -> tuple[list[Vector], list[int]]:
        z = self.field.zero
        piv = sorted(self.pivots)
        out = []
        for c in piv:
            r = self.pivots[c]
            out.append(tuple(r.get(j, z) for j in range(ncols)))
        return out, piv


def rref(field: Field, rows: Iterable[Sequence[FieldElement]], ncols: int) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form: ``(nonzero rows, pivot columns)``."""
    ech = _Echelon(field)
    for r in rows:
        if len(r) != ncols:
            raise DimensionMismatch("row length mismatch")
        ech.add(_sparse(r))
    return ech.rows(ncols)


def _kernel_from_pivots(field: Field, pivots: dict[int, dict[int, FieldElement]], ncols: int) -> list[Vector]:
    z, o = field.zero, field.one
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [z] * ncols
        v[f] = o
        for p, prow in pivots.items():
            x = prow.get(f)
            if x:
                v[p] = x  # -x in characteristic two
        basis.append(tuple(v))
    return basis


def kernel_of_rows(field: Field, rows: Iterable[dict[int, FieldElement] | Sequence[FieldElement]],
                   ncols: int) -> "Subspace":
    """Kernel of the matrix with the given rows (dense or sparse dicts)."""
    ech = _Echelon(field)
    for r in rows:
        ech.add(r if isinstance(r, dict) else _sparse(r))
    return Subspace(field, ncols, _kernel_from_pivots(field, ech.pivots, ncols), _reduced=False)


def rref_kernel(M: Matrix) -> "Subspace":
    """``{x : M x = 0}``."""
    return kernel_of_rows(M.field, M.data, M.cols)


class Subspace:
    """Subspace of F^n with a canonical (reduced echelon) basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots", "_ech")

    def __init__(self, field: Field, ambient_dim: int, vectors: Iterable[Sequence[FieldElement]] = (),
                 _reduced: bool = False):
        self.field = field
        self.ambient_dim = ambient_dim
        ech = _Echelon(field)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in F^{ambient_dim}")
            ech.add(_sparse(v))
        self._ech = ech
        self.basis, self.pivots = ech.rows(ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim}")

    def reduce(self, v: Sequence[FieldElement]) -> Vector:
        """Normal form of ``v`` modulo the subspace (zero at every pivot)."""
        z = self.field.zero
        r = self._ech.reduce(_sparse(v))
        return tuple(r.get(j, z) for j in range(self.ambient_dim))

    def coordinates(self, v: Sequence[FieldElement]) -> list[FieldElement] | None:
        """Coefficients of ``v`` on ``basis``, or None if ``v`` is outside."""
        if any(self.reduce(v)):
            return None
        return [v[p] for p in self.pivots]

    def __contains__(self, v: Sequence[FieldElement]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        return not self._ech.reduce(_sparse(v))

    def contains(self, v: Sequence[FieldElement]) -> bool:
        return v in self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        self._check(other)
        return self.pivots == other.pivots and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, tuple(self.basis)))

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(v in other for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of ``[A | B]`` acting on coefficient pairs."""
        self._check(other)
        a, b = self.basis, other.basis
        if not a or not b:
            return Subspace(self.field, self.ambient_dim)
        ncols = len(a) + len(b)
        rows = []
        for i in range(self.ambient_dim):
            row = {}
            for j, v in enumerate(a):
                if v[i]:
                    row[j] = v[i]
            for j, v in enumerate(b):
                if v[i]:
                    row[len(a) + j] = v[i]
            rows.append(row)
        ker = kernel_of_rows(self.field, rows, ncols)
        z = self.field.zero
        out = []
        for k in ker.basis:
            acc = [z] * self.ambient_dim
            for j, v in enumerate(a):
                c = k[j]
                if c:
                    acc = [x + c * y for x, y in zip(acc, v)]
            out.append(acc)
        return Subspace(self.field, self.ambient_dim, out)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_ops(a: Subspace, b: Subspace, op: str):
    """Dispatch helper: ``op`` in {'intersect', 'sum', 'contains', 'equal'}.

    For 'contains' the answer is whether ``b`` is a subspace of ``a``.
    """
    if op == "intersect":
        return a.intersect(b)
    if op == "sum":
        return a + b
    if op == "contains":
        return b <= a
    if op == "equal":
        return a == b
    raise ValueError(f"unknown subspace op {op!r}")


def image_span(field: Field, vectors: Sequence[Sequence[FieldElement]], ambient_dim: int | None = None) -> Subspace:
    """Span of ``vectors``; ``dim`` of the result is the rank."""
    if ambient_dim is None:
        if not vectors:
            raise DimensionMismatch("ambient dimension needed for an empty span")
        ambient_dim = len(vectors[0])
    return Subspace(field, ambient_dim, vectors)


# ---------------------------------------------------------------------------
# Frobenius descent
# ---------------------------------------------------------------------------

def _descent_rows(field: Field, images: Sequence[Sequence[FieldElement]]) -> list[dict[int, FieldElement]]:
    if not images:
        return []
    d = len(images[0])
    nb = field.frob_degree
    rows: list[dict[int, FieldElement]] = []
    for c in range(d):
        block = [dict() for _ in range(nb)]
        for i, u in enumerate(images):
            if len(u) != d:
                raise DimensionMismatch("images of different lengths")
            x = u[c]
            if not x:
                continue
            if x.field is not field and x.field != field:
                raise FieldMismatch("images mix fields")
            for e, w in enumerate(x.frob_decompose()):
                if w:
                    block[e][i] = w
        rows.extend(r for r in block if r)
    return rows


def semilinear_kernel(field: Field, images: Sequence[Sequence[FieldElement]]) -> Subspace:
    """``{l in F^k : sum(l_i**2 * images[i]) = 0}``.

    The solution set is an F-subspace; it is the kernel of the F-linear
    system obtained by expanding every image coordinate over
    ``field.frob_basis()``.
    """
    k = len(images)
    return kernel_of_rows(field, _descent_rows(field, images), k)


def _descent_vectors(values: Sequence[FieldElement]) -> list[dict[int, FieldElement]]:
    return [{e: w for e, w in enumerate(v.frob_decompose()) if w} for v in values if v]


def f2span_dim(field: Field, values: Sequence[FieldElement]) -> int:
    """Dimension over F^2 of the F^2-span of ``values``."""
    ech = _Echelon(field)
    n = 0
    for r in _descent_vectors(values):
        if ech.add(r) is not None:
            n += 1
    return n


def f2span_contains(field: Field, values: Sequence[FieldElement], x: FieldElement) -> bool:
    """Whether ``x`` lies in the F^2-span of ``values``."""
    ech = _Echelon(field)
    for r in _descent_vectors(values):
        ech.add(r)
    if not x:
        return True
    return not ech.reduce(_descent_vectors([x])[0])


def f2span_equal(field: Field, a: Sequence[FieldElement], b: Sequence[FieldElement]) -> bool:
    da = f2span_dim(field, a)
    return da == f2span_dim(field, b) == f2span_dim(field, list(a) + list(b))


def solve(field: Field, columns: Sequence[Sequence[FieldElement]], rhs: Sequence[FieldElement]) -> Vector | None:
    """One solution ``x`` of ``sum(x_j * columns[j]) = rhs``, or None."""
    ncols = len(columns)
    rows = []
    for i in range(len(rhs)):
        row = {j: c[i] for j, c in enumerate(columns) if c[i]}
        if rhs[i]:
            row[ncols] = rhs[i]
        rows.append(row)
    ech = _Echelon(field)
    for r in rows:
        ech.add(r)
    if ncols in ech.pivots:
        return None
    z = field.zero
    x = [z] * ncols
    for p, prow in ech.pivots.items():
        v = prow.get(ncols)
        if v:
            x[p] = v
    return tuple(x)
