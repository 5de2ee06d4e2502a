"""Diagonal bilinear forms, bilinear Pfister forms and totally singular
quadratic forms in characteristic two.

Every decision here reduces to F^2-span computations: the value set of
``<a_1, ..., a_n>`` on the diagonal (bilinear case) or of
``a_1 x_1^2 + ... + a_n x_n^2`` (quadratic case) is the F^2-span of the
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, FieldMismatch, InvalidForm
from .exactla import f2span_dim, f2span_equal, semilinear_kernel
from .field2 import Field, FieldElement


def _common_field(coeffs: Sequence[FieldElement], field: Field | None) -> Field:
    if field is None:
        if not coeffs:
            raise InvalidForm("empty form needs an explicit field")
        field = coeffs[0].field
    for c in coeffs:
        if c.field != field:
            raise FieldMismatch("form coefficients from different fields")
    return field


@dataclass(frozen=True)
class BilinDiagForm:
    """The diagonal symmetric bilinear form ``sum(a_i x_i y_i)``."""

    coeffs: tuple
    field: Field

    def __init__(self, coeffs: Sequence[FieldElement], field: Field | None = None):
        object.__setattr__(self, "field", _common_field(coeffs, field))
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, v: Sequence[FieldElement], w: Sequence[FieldElement]) -> FieldElement:
        acc = self.field.zero
        for a, x, y in zip(self.coeffs, v, w):
            acc = acc + a * x * y
        return acc

    def value_span_dim(self) -> int:
        """dim over F^2 of Q(b)."""
        return f2span_dim(self.field, self.coeffs)

    def isotropic_vector(self) -> tuple | None:
        """A nonzero ``v`` with ``b(v, v) = 0``, or None if anisotropic."""
        ker = semilinear_kernel(self.field, [(a,) for a in self.coeffs])
        return ker.basis[0] if ker.dim else None

    def __str__(self) -> str:
        return "<" + ", ".join(str(c) for c in self.coeffs) + ">"


@dataclass(frozen=True)
class PfisterForm:
    """``<<a_1, ..., a_n>>`` = tensor product of the ``<1, a_i>``."""

    slots: tuple
    field: Field

    def __init__(self, slots: Sequence[FieldElement], field: Field | None = None):
        f = _common_field(slots, field)
        if any(not s for s in slots):
            raise InvalidForm("Pfister slots must be nonzero")
        object.__setattr__(self, "field", f)
        object.__setattr__(self, "slots", tuple(slots))

    @property
    def n(self) -> int:
        return len(self.slots)

    def __str__(self) -> str:
        return "<<" + ", ".join(str(s) for s in self.slots) + ">>"


@dataclass(frozen=True)
class TSQForm:
    """Totally singular quadratic form ``sum(a_i x_i^2)``; zeros allowed."""

    coeffs: tuple
    field: Field

    def __init__(self, coeffs: Sequence[FieldElement], field: Field | None = None):
        object.__setattr__(self, "field", _common_field(coeffs, field))
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, v: Sequence[FieldElement]) -> FieldElement:
        acc = self.field.zero
        for a, x in zip(self.coeffs, v):
            if a and x:
                acc = acc + a * x.square()
        return acc

    def __or__(self, other: "TSQForm") -> "TSQForm":
        """Orthogonal sum."""
        return TSQForm(self.coeffs + other.coeffs, self.field)

    def is_anisotropic(self) -> bool:
        return f2span_dim(self.field, self.coeffs) == self.dim

    def __str__(self) -> str:
        return "<" + ", ".join(str(c) for c in self.coeffs) + ">_q"


def pfister_expand(p: PfisterForm) -> BilinDiagForm:
    """Subset products of the slots, subset T encoded in binary (bit i = slot i)."""
    out = [p.field.one]
    for s in p.slots:
        out = out + [x * s for x in out]
    return BilinDiagForm(out, p.field)


def pure_subform(p: PfisterForm) -> BilinDiagForm:
    return BilinDiagForm(pfister_expand(p).coeffs[1:], p.field)


def pfister_is_anisotropic(p: PfisterForm) -> bool:
    return f2span_dim(p.field, pfister_expand(p).coeffs) == 1 << p.n


def bilin_diag_is_isotropic(b: BilinDiagForm) -> bool:
    return b.isotropic_vector() is not None


def tsq_isometric(q1: TSQForm, q2: TSQForm) -> bool:
    """Equal dimension and equal F^2-span of coefficients."""
    if q1.field != q2.field:
        raise FieldMismatch("forms over different fields")
    return q1.dim == q2.dim and f2span_equal(q1.field, q1.coeffs, q2.coeffs)


def transpose_profile(field: Field, n: int) -> TSQForm:
    """``<1> _|_ (n^2 - n) x <0>``."""
    return TSQForm([field.one] + [field.zero] * (n * n - n), field)


def tsq_matches_transpose_profile(q: TSQForm, n: int) -> bool:
    return tsq_isometric(q, transpose_profile(q.field, n))


def pfister_isometric(p1: PfisterForm, p2: PfisterForm) -> bool:
    """Isometry test for bilinear n-fold Pfister forms.

    Isotropic pairs compare Q(b) (F^2-span of the expansion).  Anisotropic
    pairs compare the F^2-spans of the pure subforms: equal Q(b) alone does
    not separate <<t>> from <<t+1>>, whose determinants differ by the
    non-square t(t+1).
    """
    if p1.n != p2.n:
        raise DimensionMismatch(f"{p1.n}-fold vs {p2.n}-fold Pfister form")
    if p1.field != p2.field:
        raise FieldMismatch("forms over different fields")
    e1, e2 = pfister_expand(p1).coeffs, pfister_expand(p2).coeffs
    if not f2span_equal(p1.field, e1, e2):
        return False
    if not pfister_is_anisotropic(p1):
        return True
    return f2span_equal(p1.field, e1[1:], e2[1:])
