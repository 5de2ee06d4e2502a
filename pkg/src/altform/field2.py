"""Exact arithmetic in fields of characteristic two.

Two kinds of field are supported:

* ``GF2k`` -- the finite field GF(2^k), k <= 16, elements stored as ints
  whose bits are coordinates in the power basis of ``g`` modulo an
  irreducible polynomial.
* ``RationalFunctionField`` -- GF(2)(t1, ..., tm), m <= 4, elements stored
  as reduced fractions of ``Poly2`` polynomials.

Polynomials over GF(2) are FLINT ``nmod_mpoly`` values modulo 2; all
polynomial arithmetic, exact division and gcd run there.

Besides the field operations, every field exposes a basis over its
subfield of squares (``frob_basis``) and every element can be written in
it with square coefficients (``frob_decompose``).  That decomposition is
what turns Frobenius-semilinear problems into linear ones.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Sequence

import flint
from flint.utils.flint_exceptions import DomainError as _FlintDomainError

from .errors import DivisionByZero, FieldMismatch, InvalidField, ParseError

__all__ = [
    "Poly2",
    "poly_gcd",
    "Field",
    "GF2k",
    "RationalFunctionField",
    "FieldElement",
    "GFElement",
    "RatFunc",
    "frob_basis",
    "frob_decompose",
    "is_square",
    "field_from_descriptor",
]

# Irreducible moduli (little-endian bit i = coefficient of x^i).
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
}

_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9]*\Z")


# ---------------------------------------------------------------------------
# polynomials over GF(2)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _ctx(nvars: int):
    return flint.nmod_mpoly_ctx.get(tuple(f"x{k}" for k in range(nvars)), modulus=2)


class Poly2:
    """Polynomial over GF(2) in ``nvars`` variables.

    Wraps a FLINT ``nmod_mpoly`` modulo 2; monomials are exponent tuples.
    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "p", "_hash")

    def __init__(self, nvars: int, p=None):
        self.nvars = nvars
        self.p = _ctx(nvars).from_dict({}) if p is None else p
        self._hash = None

    @classmethod
    def from_exponents(cls, nvars: int, monomials: Iterable[Sequence[int]]) -> "Poly2":
        """Sum of the given monomials (repeated monomials cancel in pairs)."""
        acc: dict[tuple, int] = {}
        for e in monomials:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError("exponent vector has wrong length")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            acc[e] = acc.get(e, 0) ^ 1
        return cls(nvars, _ctx(nvars).from_dict({e: 1 for e, c in acc.items() if c}))

    @classmethod
    def zero(cls, nvars: int) -> "Poly2":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "Poly2":
        return cls(nvars, _ctx(nvars).constant(1))

    @classmethod
    def var(cls, nvars: int, k: int) -> "Poly2":
        return cls(nvars, _ctx(nvars).gens()[k])

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int]) -> "Poly2":
        return cls.from_exponents(nvars, [exps])

    @property
    def terms(self) -> frozenset:
        """The monomials with coefficient 1, as exponent tuples."""
        return frozenset(self.p.monoms())

    def __bool__(self) -> bool:
        return not self.p.is_zero()

    def is_one(self) -> bool:
        return self.p.is_one()

    def __len__(self) -> int:
        return len(self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.nvars == other.nvars and self.p == other.p

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.terms))
        return self._hash

    def __add__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.nvars, self.p + other.p)

    __sub__ = __add__

    def __mul__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.nvars, self.p * other.p)

    def square(self) -> "Poly2":
        return Poly2(self.nvars, self.p * self.p)

    def __pow__(self, e: int) -> "Poly2":
        if e < 0:
            raise ValueError("negative exponent")
        return Poly2(self.nvars, self.p ** e)

    def shift(self, exps: Sequence[int]) -> "Poly2":
        """Multiply by the monomial with exponent vector ``exps``."""
        return self * Poly2.monomial(self.nvars, exps)

    def degree(self, k: int) -> int:
        if not self:
            return -1
        return self.p.degrees()[k]

    def total_degree(self) -> int:
        if not self:
            return -1
        return self.p.total_degree()

    def variables(self) -> set[int]:
        if not self:
            return set()
        return {k for k, d in enumerate(self.p.degrees()) if d > 0}

    def exponents(self) -> list[tuple[int, ...]]:
        return list(self.p.monoms())

    def sorted_terms(self) -> list[tuple[int, ...]]:
        """Monomials in printing order: total degree descending, then
        lexicographic descending with the last variable most significant."""
        return sorted(self.p.monoms(), key=lambda e: (sum(e), e[::-1]), reverse=True)

    def divexact(self, other: "Poly2") -> "Poly2":
        """Exact quotient; raises ``ValueError`` when ``other`` does not divide."""
        if not other:
            raise DivisionByZero("polynomial division by zero")
        try:
            return Poly2(self.nvars, self.p / other.p)
        except _FlintDomainError as exc:
            raise ValueError("inexact polynomial division") from exc

    def divmod(self, other: "Poly2") -> tuple["Poly2", "Poly2"]:
        """Division with remainder (FLINT's multivariate division)."""
        if not other:
            raise DivisionByZero("polynomial division by zero")
        q, r = divmod(self.p, other.p)
        return Poly2(self.nvars, q), Poly2(self.nvars, r)

    def format(self, names: Sequence[str]) -> str:
        if not self:
            return "0"
        parts = []
        for e in self.sorted_terms():
            factors = []
            for k, d in enumerate(e):
                if d == 1:
                    factors.append(names[k])
                elif d > 1:
                    factors.append(f"{names[k]}^{d}")
            parts.append("*".join(factors) or "1")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Poly2({self.format([f't{k + 1}' for k in range(self.nvars)])})"


def poly_gcd(p: Poly2, q: Poly2) -> Poly2:
    """Greatest common divisor over GF(2); ``gcd(p, 0) = p``."""
    if not p:
        return q
    if not q:
        return p
    if p.is_one() or q.is_one():
        return Poly2.one(p.nvars)
    return Poly2(p.nvars, p.p.gcd(q.p))


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class Field:
    """Common interface of the supported fields."""

    kind: str

    @property
    def zero(self) -> "FieldElement":
        raise NotImplementedError

    @property
    def one(self) -> "FieldElement":
        raise NotImplementedError

    def from_int(self, n: int) -> "FieldElement":
        return self.one if n % 2 else self.zero

    def frob_basis(self) -> list["FieldElement"]:
        raise NotImplementedError

    @property
    def frob_degree(self) -> int:
        """[F : F^2]."""
        return len(self.frob_basis())

    def parse(self, text: str) -> "FieldElement":
        return _Parser(self, text).parse()

    def descriptor(self) -> dict:
        raise NotImplementedError


def _gf2_polymod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _is_irreducible(modulus: int) -> bool:
    k = modulus.bit_length() - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if _gf2_polymod(modulus, f) == 0:
                return False
    return True


class GF2k(Field):
    """GF(2^k) with an explicit irreducible modulus.

    ``modulus`` is a little-endian bit list (``[1, 1, 0, 0, 1]`` is
    1 + x + x^4) or an int with the same bit layout.  The generator is
    printed and parsed as ``g``.
    """

    kind = "gf2k"

    def __init__(self, k: int, modulus: Sequence[int] | int | None = None):
        if not isinstance(k, int) or k < 1 or k > 16:
            raise InvalidField(f"GF(2^k) needs 1 <= k <= 16, got {k!r}")
        if modulus is None:
            if k not in DEFAULT_MODULI:
                raise InvalidField(f"no default modulus for k={k}; pass one explicitly")
            mod = DEFAULT_MODULI[k]
        elif isinstance(modulus, int):
            mod = modulus
        else:
            bits = list(modulus)
            if any(b not in (0, 1) for b in bits):
                raise InvalidField("modulus bits must be 0 or 1")
            mod = sum(b << i for i, b in enumerate(bits))
        if mod.bit_length() - 1 != k:
            raise InvalidField(f"modulus has degree {mod.bit_length() - 1}, expected {k}")
        if not _is_irreducible(mod):
            raise InvalidField("modulus is reducible over GF(2)")
        self.k = k
        self.modulus = mod
        self.order = 1 << k
        self._zero = GFElement(self, 0)
        self._one = GFElement(self, 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF2k) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(("gf2k", self.modulus))

    def __repr__(self) -> str:
        return f"GF2k({self.k}, modulus={self.modulus:#b})"

    @property
    def zero(self) -> "GFElement":
        return self._zero

    @property
    def one(self) -> "GFElement":
        return self._one

    @property
    def gen(self) -> "GFElement":
        return self.element(_gf2_polymod(2, self.modulus))

    def element(self, value: int) -> "GFElement":
        if not 0 <= value < self.order:
            raise ValueError("value out of range")
        return GFElement(self, value)

    def elements(self) -> list["GFElement"]:
        return [GFElement(self, v) for v in range(self.order)]

    def _mul(self, a: int, b: int) -> int:
        r = 0
        top = 1 << self.k
        mod = self.modulus
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def frob_basis(self) -> list["GFElement"]:
        return [self._one]

    @property
    def frob_degree(self) -> int:
        return 1

    def names(self) -> list[str]:
        return ["g"]

    def descriptor(self) -> dict:
        return {"kind": "gf2k", "k": self.k,
                "modulus": [(self.modulus >> i) & 1 for i in range(self.k + 1)]}


class RationalFunctionField(Field):
    """GF(2)(t1, ..., tm) for 1 <= m <= 4 named variables."""

    kind = "ratfunc"

    def __init__(self, names: Sequence[str]):
        names = list(names)
        if not 1 <= len(names) <= 4:
            raise InvalidField("rational function fields need 1 to 4 variables")
        for nm in names:
            if not isinstance(nm, str) or not _NAME_RE.match(nm):
                raise InvalidField(f"bad variable name {nm!r}")
        if len(set(names)) != len(names):
            raise InvalidField("variable names must be distinct")
        self.names = tuple(names)
        self.nvars = len(names)
        self._pzero = Poly2.zero(self.nvars)
        self._pone = Poly2.one(self.nvars)
        self._zero = RatFunc(self, self._pzero, self._pone)
        self._one = RatFunc(self, self._pone, self._pone)
        m = self.nvars
        # parity pattern -> index of t^eps in frob_basis (first variable most significant)
        self._parity_index = {}
        for idx in range(1 << m):
            eps = tuple((idx >> (m - 1 - i)) & 1 for i in range(m))
            self._parity_index[eps] = idx
        self._basis = [self.poly(Poly2.monomial(m, eps))
                       for eps, _ in sorted(self._parity_index.items(), key=lambda kv: kv[1])]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalFunctionField) and self.names == other.names

    def __hash__(self) -> int:
        return hash(("ratfunc", self.names))

    def __repr__(self) -> str:
        return f"RationalFunctionField({list(self.names)})"

    @property
    def zero(self) -> "RatFunc":
        return self._zero

    @property
    def one(self) -> "RatFunc":
        return self._one

    def var(self, name_or_index: str | int) -> "RatFunc":
        k = self.names.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return self.poly(Poly2.var(self.nvars, k))

    def gens(self) -> list["RatFunc"]:
        return [self.var(k) for k in range(self.nvars)]

    def poly(self, p: Poly2) -> "RatFunc":
        return RatFunc(self, p, self._pone)

    def fraction(self, num: Poly2, den: Poly2) -> "RatFunc":
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return self._zero
        if den.is_one():
            return RatFunc(self, num, den)
        g = poly_gcd(num, den)
        if not g.is_one():
            num, den = num.divexact(g), den.divexact(g)
        return RatFunc(self, num, den)

    def frob_basis(self) -> list["RatFunc"]:
        return list(self._basis)

    @property
    def frob_degree(self) -> int:
        return 1 << self.nvars

    def descriptor(self) -> dict:
        return {"kind": "ratfunc", "vars": list(self.names)}


def field_from_descriptor(desc: dict) -> Field:
    """Build a field from its JSON descriptor."""
    kind = desc.get("kind")
    if kind == "gf2k":
        return GF2k(desc.get("k"), desc.get("modulus"))
    if kind == "ratfunc":
        return RationalFunctionField(desc.get("vars") or [])
    raise InvalidField(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class FieldElement:
    """Base class; concrete elements are ``GFElement`` and ``RatFunc``."""

    __slots__ = ("field",)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __sub__(self, other):
        return self + other

    def __rsub__(self, other):
        return self + other

    def __radd__(self, other):
        return self + other

    def __rmul__(self, other):
        return self * other

    def __neg__(self):
        return self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def is_zero(self) -> bool:
        return not self

    def is_one(self) -> bool:
        return self == self.field.one

    def __repr__(self) -> str:
        return f"<{self.field.kind} {self}>"


class GFElement(FieldElement):
    __slots__ = ("value",)

    def __init__(self, field: GF2k, value: int):
        self.field = field
        self.value = value

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GFElement):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == other % 2
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("gf", self.field.modulus, self.value))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GFElement(self.field, self.value ^ other.value)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GFElement(self.field, self.field._mul(self.value, other.value))

    def square(self) -> "GFElement":
        return GFElement(self.field, self.field._mul(self.value, self.value))

    def inv(self) -> "GFElement":
        if not self.value:
            raise DivisionByZero("inverse of zero")
        return self ** (self.field.order - 2) if self.field.order > 2 else self

    def sqrt(self) -> "GFElement":
        # Frobenius applied k-1 times
        r = self
        for _ in range(self.field.k - 1):
            r = r.square()
        return r

    def is_square(self) -> bool:
        return True

    def frob_decompose(self) -> list["GFElement"]:
        return [self.sqrt()]

    def __str__(self) -> str:
        if not self.value:
            return "0"
        parts = []
        for e in range(self.field.k - 1, -1, -1):
            if (self.value >> e) & 1:
                parts.append("1" if e == 0 else ("g" if e == 1 else f"g^{e}"))
        return "+".join(parts)


def _all_even(p: Poly2) -> bool:
    return all(d % 2 == 0 for e in p.p.monoms() for d in e)


def _halve(p: Poly2) -> Poly2:
    return Poly2(p.nvars, _ctx(p.nvars).from_dict({tuple(d >> 1 for d in e): 1 for e in p.p.monoms()}))


class RatFunc(FieldElement):
    """Reduced fraction ``num/den`` of GF(2) polynomials."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, field: RationalFunctionField, num: Poly2, den: Poly2):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFunc):
            return (self.num == other.num and self.den == other.den
                    and self.field == other.field)
        if isinstance(other, int):
            return self == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if not other.num:
            return self
        if not self.num:
            return other
        na, da, nb, db = self.num, self.den, other.num, other.den
        if da == db:
            if da.is_one():
                return RatFunc(F, na + nb, da)
            return F.fraction(na + nb, da)
        g = poly_gcd(da, db)
        if g.is_one():
            return RatFunc(F, na * db + nb * da, da * db)
        s = da.divexact(g)
        t = na * db.divexact(g) + nb * s
        if not t:
            return F.zero
        g2 = poly_gcd(t, g)
        if g2.is_one():
            return RatFunc(F, t, s * db)
        return RatFunc(F, t.divexact(g2), s * db.divexact(g2))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if not self.num or not other.num:
            return F.zero
        na, da, nb, db = self.num, self.den, other.num, other.den
        if da.is_one() and db.is_one():
            return RatFunc(F, na * nb, da)
        g1 = poly_gcd(na, db)
        g2 = poly_gcd(nb, da)
        if not g1.is_one():
            na, db = na.divexact(g1), db.divexact(g1)
        if not g2.is_one():
            nb, da = nb.divexact(g2), da.divexact(g2)
        return RatFunc(F, na * nb, da * db)

    def square(self) -> "RatFunc":
        return RatFunc(self.field, self.num.square(), self.den.square())

    def inv(self) -> "RatFunc":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.field, self.den, self.num)

    def is_square(self) -> bool:
        # a reduced fraction is a square iff numerator and denominator are
        return _all_even(self.num) and _all_even(self.den)

    def sqrt(self) -> "RatFunc":
        if not self.is_square():
            raise ValueError(f"{self} is not a square")
        return RatFunc(self.field,
                       _halve(self.num), _halve(self.den))

    def frob_decompose(self) -> list["RatFunc"]:
        # v = (num * den) / den^2; split num * den by exponent parity
        F = self.field
        n = F.nvars
        pq = (self.num * self.den).p.to_dict()
        buckets: list[dict] = [{} for _ in range(1 << n)]
        index = F._parity_index
        for e in pq:
            par = tuple(d & 1 for d in e)
            buckets[index[par]][tuple(d >> 1 for d in e)] = 1
        ctx = _ctx(n)
        return [F.fraction(Poly2(n, ctx.from_dict(b)), self.den) if b else F.zero for b in buckets]

    def __str__(self) -> str:
        names = self.field.names
        if not self.num:
            return "0"
        ns = self.num.format(names)
        if self.den.is_one():
            return ns
        ds = self.den.format(names)
        if len(self.num) > 1:
            ns = f"({ns})"
        if len(self.den) > 1 or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"


# module-level spellings of the element methods

def frob_basis(F: Field) -> list[FieldElement]:
    """Basis of F over its subfield of squares."""
    return F.frob_basis()


def frob_decompose(v: FieldElement) -> list[FieldElement]:
    """Coefficients ``w`` with ``v = sum(b[e] * w[e]**2)`` over ``frob_basis``."""
    return v.frob_decompose()


def is_square(v: FieldElement) -> tuple[bool, FieldElement | None]:
    """``(True, root)`` if ``v`` is a square, else ``(False, None)``."""
    if v.is_square():
        return True, v.sqrt()
    return False, None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[a-zA-Z][a-zA-Z0-9]*)|(?P<op>[-+*/^()]))")


class _Parser:
    """Recursive-descent parser for the element grammar.

    expr   := term ('+' term)*
    term   := power (('*' | '/') power)*
    power  := atom ('^' digits)?
    atom   := digits | name | '(' expr ')'
    """

    def __init__(self, field: Field, text: str):
        self.field = field
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r} in {text!r}", column=pos + 1)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0
        if isinstance(field, GF2k):
            self.vars = {"g": field.gen}
        else:
            self.vars = {nm: field.var(k) for k, nm in enumerate(field.names)}

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _error(self, msg: str):
        tok = self._peek()
        col = tok[2] + 1 if tok else len(self.text) + 1
        raise ParseError(f"{msg} in {self.text!r}", column=col)

    def parse(self) -> FieldElement:
        if not self.tokens:
            self._error("empty element")
        v = self._expr()
        if self._peek() is not None:
            self._error("trailing input")
        return v

    def _expr(self):
        v = self._term()
        while (tok := self._peek()) and tok[0] == "op" and tok[1] == "+":
            self.i += 1
            v = v + self._term()
        return v

    def _term(self):
        v = self._power()
        while (tok := self._peek()) and tok[0] == "op" and tok[1] in "*/":
            self.i += 1
            rhs = self._power()
            if tok[1] == "*":
                v = v * rhs
            else:
                if not rhs:
                    self._error("division by zero")
                v = v / rhs
        return v

    def _power(self):
        v = self._atom()
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.i += 1
            tok = self._peek()
            if not tok or tok[0] != "num":
                self._error("expected exponent")
            self.i += 1
            v = v ** int(tok[1])
        return v

    def _atom(self):
        tok = self._peek()
        if tok is None:
            self._error("unexpected end of input")
        kind, val, _ = tok
        if kind == "num":
            self.i += 1
            return self.field.from_int(int(val))
        if kind == "name":
            if val not in self.vars:
                self._error(f"unknown variable {val!r}")
            self.i += 1
            return self.vars[val]
        if val == "(":
            self.i += 1
            v = self._expr()
            tok = self._peek()
            if not tok or tok[1] != ")":
                self._error("expected ')'")
            self.i += 1
            return v
        self._error(f"unexpected {val!r}")
