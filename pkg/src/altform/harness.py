"""Verification suites, regression fixtures, seeded instance generators and
the JSON instance/report formats used by the command line.

Every suite returns a fragment ``{"verdict": "pass" | "fail" | "skipped", ...}``.
A failing fragment always carries a ``witness`` (element coordinates or
coefficient lists as strings); a skipped one carries a ``reason``.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from typing import Any, Sequence

from .alternator import (AlternatorData, FieldVerdict, PhiData, alternator_subalgebra,
                         alternator_value, field_test, phi_and_pfister, psi_kernel,
                         q_is_anisotropic, s_field_test)
from .errors import (AltformError, InvalidInvolution, NotOrthogonal, ParseError,
                     PhiConstructionFailed, UnsupportedProvenance)
from .exactla import f2span_contains, f2span_dim, f2span_equal
from .field2 import (Field, FieldElement, GF2k, RatFunc, RationalFunctionField,
                     field_from_descriptor)
from .forms import (PfisterForm, pfister_expand, pfister_is_anisotropic, pfister_isometric,
                    tsq_isometric, tsq_matches_transpose_profile)
from .invalg import (InvolutionAlgebra, MatrixProvenance, conjugate, from_matrix_entries,
                     mk_matrix_involution, mk_quaternion_involution,
                     parse_quaternion_element, split_isotropy, tensor_all)

Element = tuple

# full associativity checks are cubic in the dimension; larger matrix
# algebras are correct by construction and only get the cheap checks
FULL_VALIDATION_MAX_DIM = 16


# ---------------------------------------------------------------------------
# instances and the input format
# ---------------------------------------------------------------------------

@dataclass
class Instance:
    instance_id: str
    field: Field
    algebra: InvolutionAlgebra
    spec: dict | None = None      # JSON description, None for derived instances


def _locate(text: str | None, needle: Any, inner_column: int | None = None) -> tuple[int | None, int | None]:
    """1-based (line, column) of the first JSON literal ``needle`` in ``text``."""
    if text is None:
        return None, None
    lit = json.dumps(needle)
    pos = text.find(lit)
    if pos < 0:
        return None, None
    if inner_column is not None:
        pos += inner_column          # skip the opening quote, then 1-based column
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Builder:
    """Turns a decoded instance document into an algebra, reporting errors
    at the position of the offending value in the source text."""

    def __init__(self, text: str | None):
        self.text = text

    def fail(self, message: str, needle: Any = None, inner_column: int | None = None):
        line, col = _locate(self.text, needle, inner_column) if needle is not None else (None, None)
        if line is None:
            line, col = 1, 1
        raise ParseError(message, line, col)

    def require(self, obj: dict, key: str, kind: type, where: str):
        if not isinstance(obj, dict):
            self.fail(f"{where}: expected an object")
        if key not in obj:
            self.fail(f"{where}: missing key {key!r}")
        val = obj[key]
        if not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
            self.fail(f"{where}.{key}: expected {kind.__name__}", key)
        return val

    def element(self, F: Field, text: Any, where: str) -> FieldElement:
        if not isinstance(text, str):
            self.fail(f"{where}: field elements are written as strings", text)
        try:
            return F.parse(text)
        except ParseError as exc:
            self.fail(f"{where}: {exc.message}", text, exc.column)
        except ZeroDivisionError:
            self.fail(f"{where}: division by zero in {text!r}", text)

    def field(self, desc: Any) -> Field:
        if not isinstance(desc, dict):
            self.fail("field: expected an object", "field")
        try:
            return field_from_descriptor(desc)
        except (AltformError, TypeError, ValueError) as exc:
            self.fail(f"field: {exc}", "field")

    def algebra(self, F: Field, spec: Any, where: str) -> InvolutionAlgebra:
        kind = self.require(spec, "kind", str, where)
        try:
            if kind == "matrix":
                n = self.require(spec, "n", int, where)
                u = self.require(spec, "u_diag", list, where)
                if n < 1 or len(u) != n:
                    self.fail(f"{where}: u_diag must have n = {n} entries", "u_diag")
                coeffs = [self.element(F, c, f"{where}.u_diag[{k}]") for k, c in enumerate(u)]
                A = mk_matrix_involution(F, n, coeffs, validate=False)
                A.validate(full=A.dim <= FULL_VALIDATION_MAX_DIM)
                if not A.is_orthogonal():
                    raise NotOrthogonal("involution is symplectic")
                return A
            if kind == "quaternion":
                a = self.element(F, self.require(spec, "a", str, where), f"{where}.a")
                b = self.element(F, self.require(spec, "b", str, where), f"{where}.b")
                u_text = self.require(spec, "u", str, where)
                try:
                    u = parse_quaternion_element(F, u_text)
                except ParseError as exc:
                    self.fail(f"{where}.u: {exc.message} in {u_text!r}", u_text, exc.column)
                return mk_quaternion_involution(F, a, b, u)
            if kind == "tensor":
                factors = self.require(spec, "factors", list, where)
                if not factors:
                    self.fail(f"{where}: tensor needs at least one factor", "factors")
                algs = [self.algebra(F, f, f"{where}.factors[{k}]") for k, f in enumerate(factors)]
                return tensor_all(algs)
        except ParseError:
            raise
        except (InvalidInvolution, NotOrthogonal) as exc:
            self.fail(f"{where}: {exc}", kind)
        self.fail(f"{where}: unknown algebra kind {kind!r}", kind)


def build_instance(doc: dict, instance_id: str | None = None, text: str | None = None) -> Instance:
    """Instance from a decoded document ``{"field": ..., "algebra": ...}``."""
    b = _Builder(text)
    if not isinstance(doc, dict):
        b.fail("instance: expected a JSON object")
    F = b.field(b.require(doc, "field", dict, "instance"))
    A = b.algebra(F, b.require(doc, "algebra", dict, "instance"), "algebra")
    iid = instance_id or doc.get("id") or "instance"
    return Instance(str(iid), F, A, {"field": F.descriptor(), "algebra": doc["algebra"]})


def parse_instance(text: str, instance_id: str | None = None) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return build_instance(doc, instance_id, text)


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_instance(text, None if '"id"' in text else stem)


# ---------------------------------------------------------------------------
# invariants and reports
# ---------------------------------------------------------------------------

@dataclass
class Invariants:
    data: AlternatorData
    direct: bool
    psi_witness: Element | None
    s_field: FieldVerdict
    phi: PhiData | None
    phi_error: str | None


def fmt(x: Sequence[FieldElement]) -> list[str]:
    return [str(c) for c in x]


def compute_invariants(A: InvolutionAlgebra) -> Invariants:
    data = alternator_subalgebra(A)
    ker = psi_kernel(A)
    sf = s_field_test(data, A)
    phi, err = None, None
    try:
        phi = phi_and_pfister(A)
    except UnsupportedProvenance as exc:
        err = f"not decomposable: {exc}"
    except PhiConstructionFailed as exc:
        err = f"construction failed: {exc}"
    return Invariants(data, ker.dim == 0, ker.basis[0] if ker.dim else None, sf, phi, err)


def _pass() -> dict:
    return {"verdict": "pass"}


def _fail(witness: Any) -> dict:
    return {"verdict": "fail", "witness": witness}


def _skip(reason: str) -> dict:
    return {"verdict": "skipped", "reason": reason}


def suite_theorem_direct(A: InvolutionAlgebra, inv: Invariants | None = None) -> dict:
    """Directness, anisotropy of q_sigma and the field property of S agree,
    and S-basis vectors square into F when they hold."""
    inv = inv or compute_invariants(A)
    conds = {"direct": inv.direct, "q_anisotropic": q_is_anisotropic(inv.data)}
    if inv.s_field.conclusive:
        conds["s_field"] = inv.s_field.is_field
    if len(set(conds.values())) > 1:
        w = {"conditions": conds}
        if inv.psi_witness is not None:
            w["psi_kernel_element"] = fmt(inv.psi_witness)
        w["q_sigma"] = fmt(inv.data.q_coeffs)
        return _fail(w)
    if all(conds.values()):
        for x in inv.data.s_basis.basis:
            if A.is_scalar(A.mul(x, x)) is None:
                return _fail({"square_not_scalar": fmt(x)})
    out = _pass()
    if not inv.s_field.conclusive:
        out["note"] = "field test inconclusive"
    return out


def _isotropic_conditions(A: InvolutionAlgebra, inv: Invariants) -> dict:
    if inv.phi is None:
        raise UnsupportedProvenance(inv.phi_error or "not totally decomposable")
    conds: dict[str, Any] = {}
    try:
        conds["1_anisotropic"] = not split_isotropy(A)[0]
    except UnsupportedProvenance:
        conds["1_anisotropic"] = "skipped"
    conds["2_direct"] = inv.direct
    conds["3_pf_anisotropic"] = pfister_is_anisotropic(inv.phi.pf)
    conds["4_q_anisotropic"] = q_is_anisotropic(inv.data)
    phi_field = field_test(A, inv.phi.phi_space.basis)
    conds["5_phi_field"] = phi_field.is_field if phi_field.conclusive else "skipped"
    conds["6_s_field"] = inv.s_field.is_field if inv.s_field.conclusive else "skipped"
    conds["7_phi_equals_s"] = inv.phi.phi_space == inv.data.s_basis
    sym = A.spaces.sym
    conds["8_s_in_sym"] = all(x in sym for x in inv.data.s_basis.basis)
    return conds


def suite_theorem_isotropic(A: InvolutionAlgebra, inv: Invariants | None = None) -> dict:
    """Conditions (1)-(8) for totally decomposable instances agree.

    Condition (1) is only evaluated on split instances; raises
    UnsupportedProvenance for instances without alternating generators.
    """
    inv = inv or compute_invariants(A)
    conds = _isotropic_conditions(A, inv)
    evaluated = {k: v for k, v in conds.items() if v != "skipped"}
    if len(set(evaluated.values())) > 1:
        w: dict[str, Any] = {"conditions": conds, "pf_slots": fmt(inv.phi.pf.slots),
                             "q_sigma": fmt(inv.data.q_coeffs)}
        if inv.psi_witness is not None:
            w["psi_kernel_element"] = fmt(inv.psi_witness)
        return _fail(w)
    out = _pass()
    out["value"] = next(iter(evaluated.values()))
    skipped = sorted(k for k, v in conds.items() if v == "skipped")
    if skipped:
        out["skipped"] = skipped
    return out


def suite_prop_qp(A: InvolutionAlgebra, inv: Invariants | None = None) -> dict:
    """F^2-span of the q_sigma coefficients equals Q(Pf)."""
    inv = inv or compute_invariants(A)
    if inv.phi is None:
        raise UnsupportedProvenance(inv.phi_error or "not totally decomposable")
    return compare_spans(A.field, inv.data.q_coeffs, pfister_expand(inv.phi.pf).coeffs)


def compare_spans(F: Field, a: Sequence[FieldElement], b: Sequence[FieldElement]) -> dict:
    """Mutual membership of F^2-spans; the witness is a coefficient outside the other span."""
    for c in a:
        if not f2span_contains(F, b, c):
            return _fail({"outside_pf_span": str(c)})
    for c in b:
        if not f2span_contains(F, a, c):
            return _fail({"outside_q_span": str(c)})
    return _pass()


def suite_theorem_tran(A: InvolutionAlgebra, inv: Invariants | None = None) -> dict:
    """q_sigma matches the transpose profile exactly when u is a scalar
    multiple of a sum of squares entrywise (one F^2-class)."""
    prov = A.provenance
    if not isinstance(prov, MatrixProvenance):
        return _skip("needs a matrix instance")
    inv = inv or compute_invariants(A)
    predicted = tsq_matches_transpose_profile(inv.data.q_form, prov.n)
    expected = f2span_dim(A.field, prov.u_diag) == 1
    if predicted != expected:
        return _fail({"u_diag": fmt(prov.u_diag), "q_sigma": fmt(inv.data.q_coeffs),
                      "profile_match": predicted, "expected": expected})
    out = _pass()
    out["value"] = expected
    return out


def suite_classification(A: InvolutionAlgebra, B: InvolutionAlgebra, conjugate_pair: bool = False,
                         inv_a: Invariants | None = None, inv_b: Invariants | None = None) -> dict:
    """Compare two involutions on isomorphic algebras.

    (a) conjugate pairs have isometric q_sigma and q'_sigma;
    (b) anisotropic pairs: q' isometry agrees with Pf isometry;
    (c) isotropic pairs: q_sigma isometry implies Pf isometry.
    Pairs with one isotropic and one anisotropic involution only get (a).
    """
    inv_a = inv_a or compute_invariants(A)
    inv_b = inv_b or compute_invariants(B)
    if inv_a.phi is None or inv_b.phi is None:
        raise UnsupportedProvenance("classification needs totally decomposable instances")
    qa, qb = inv_a.data.q_form, inv_b.data.q_form
    pa, pb = inv_a.phi.pf, inv_b.phi.pf
    q_iso = tsq_isometric(qa, qb)
    qp_iso = tsq_isometric(inv_a.data.q_prime_form, inv_b.data.q_prime_form)
    pf_iso = pfister_isometric(pa, pb)
    an_a, an_b = pfister_is_anisotropic(pa), pfister_is_anisotropic(pb)
    aniso = an_a and an_b
    iso = not an_a and not an_b
    facts = {"q_isometric": q_iso, "q_prime_isometric": qp_iso, "pf_isometric": pf_iso,
             "anisotropic_pair": aniso, "isotropic_pair": iso}
    witness = {"facts": facts, "pf": [fmt(pa.slots), fmt(pb.slots)],
               "q_prime": [fmt(inv_a.data.q_prime_coeffs), fmt(inv_b.data.q_prime_coeffs)]}
    checks = {}
    checks["a_conjugate"] = (q_iso and qp_iso) if conjugate_pair else "skipped"
    checks["b_anisotropic"] = (qp_iso == pf_iso) if aniso else "skipped"
    checks["c_isotropic"] = ((not q_iso) or pf_iso) if iso else "skipped"
    if any(v is False for v in checks.values()):
        witness["checks"] = checks
        return _fail(witness)
    out = _pass()
    out.update(facts)
    out["checks"] = checks
    return out


def instance_report(inst: Instance, suites: Sequence[str] = ("direct", "isotropic", "qp", "tran")) -> dict:
    """CheckReport for one instance: invariants plus the requested suites."""
    A = inst.algebra
    inv = compute_invariants(A)
    report: dict[str, Any] = {
        "instance_id": inst.instance_id,
        "dim_S": inv.data.dim,
        "q_sigma": fmt(inv.data.q_coeffs),
        "q_prime": fmt(inv.data.q_prime_coeffs),
        "direct": inv.direct,
        "s_field": inv.s_field.verdict,
        "q_anisotropic": q_is_anisotropic(inv.data),
        "pf_slots": fmt(inv.phi.pf.slots) if inv.phi else None,
        "pf_anisotropic": pfister_is_anisotropic(inv.phi.pf) if inv.phi else None,
        "suites": {},
    }
    runners = {"direct": ("theorem_direct", suite_theorem_direct),
               "isotropic": ("theorem_isotropic", suite_theorem_isotropic),
               "qp": ("prop_qp", suite_prop_qp),
               "tran": ("theorem_tran", suite_theorem_tran)}
    for key in suites:
        name, fn = runners[key]
        try:
            report["suites"][name] = fn(A, inv)
        except UnsupportedProvenance as exc:
            report["suites"][name] = _skip(str(exc))
    return report


def report_failed(report: dict) -> bool:
    """True if any suite verdict anywhere in the (nested) report is a fail."""
    if isinstance(report, dict):
        if report.get("verdict") == "fail":
            return True
        return any(report_failed(v) for v in report.values())
    if isinstance(report, list):
        return any(report_failed(v) for v in report)
    return False


def dumps_report(report: Any) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# regression fixtures
# ---------------------------------------------------------------------------

def direct_nonsym_instance() -> tuple[Instance, list[list[FieldElement]]]:
    """M_4 over GF(2)(a, b) with u = diag(1, a, b, ab + 1) and the explicit
    matrix x with q_sigma(x) = 1/b."""
    F = RationalFunctionField(["a", "b"])
    a, b = F.gens()
    o, z = F.one, F.zero
    u = [o, a, b, a * b + o]
    A = mk_matrix_involution(F, 4, u)
    x = [[z, (a * b).inv(), b.inv(), z],
         [z, z, z, a / (o + a * b)],
         [o, z, z, (o + a * b).inv()],
         [z, o + (a * b).inv(), z, z]]
    spec = {"field": F.descriptor(),
            "algebra": {"kind": "matrix", "n": 4, "u_diag": fmt(u)}}
    return Instance("direct_nonsym", F, A, spec), x


def fixture_direct_nonsym() -> dict:
    inst, X = direct_nonsym_instance()
    A = inst.algebra
    F = A.field
    x = from_matrix_entries(A, X)
    data = alternator_subalgebra(A)
    witness = {"x": [fmt(r) for r in X]}
    if x not in data.s_basis:
        return _fail(dict(witness, problem="x not in S"))
    q = alternator_value(A, x)
    if q != F.var("b").inv():
        return _fail(dict(witness, problem="q_sigma(x) != 1/b", q=str(q)))
    if x in A.spaces.sym:
        return _fail(dict(witness, problem="x in Sym"))
    ker = psi_kernel(A)
    if ker.dim:
        return _fail({"psi_kernel_element": fmt(ker.basis[0]), "problem": "not direct"})
    return _pass()


def fixture_generic_diagonal() -> dict:
    F = RationalFunctionField(["t1", "t2", "t3"])
    A = mk_matrix_involution(F, 3, F.gens())
    data = alternator_subalgebra(A)
    if data.dim != 1 or not f2span_equal(F, data.q_coeffs, [F.one]):
        return _fail({"dim_S": data.dim, "q_sigma": fmt(data.q_coeffs)})
    return _pass()


def transpose_fields() -> list[Field]:
    return [GF2k(1), RationalFunctionField(["t"])]


def fixture_transpose(F: Field, n: int) -> dict:
    A = mk_matrix_involution(F, n, [F.one] * n)
    data = alternator_subalgebra(A)
    ok = data.dim == n * n - n + 1 and tsq_matches_transpose_profile(data.q_form, n)
    if not ok:
        return _fail({"dim_S": data.dim, "q_sigma": fmt(data.q_coeffs)})
    return _pass()


def regression_fixtures() -> dict:
    out = {"direct_nonsym": fixture_direct_nonsym(), "generic_diagonal_n3": fixture_generic_diagonal()}
    for F in transpose_fields():
        tag = "gf2" if isinstance(F, GF2k) else "gf2t"
        for n in (2, 3, 4):
            out[f"transpose_{tag}_n{n}"] = fixture_transpose(F, n)
    return out


# ---------------------------------------------------------------------------
# seeded generators
# ---------------------------------------------------------------------------

FIELD_POOL: tuple[dict, ...] = (
    {"kind": "gf2k", "k": 1},
    {"kind": "gf2k", "k": 2},
    {"kind": "ratfunc", "vars": ["t"]},
    {"kind": "ratfunc", "vars": ["t1", "t2"]},
    {"kind": "ratfunc", "vars": ["t1", "t2", "t3"]},
)


def _field(desc: dict) -> Field:
    return field_from_descriptor(desc)


def random_element(rng: random.Random, F: Field) -> FieldElement:
    """A nonzero element of small degree.

    Rational-function elements are products of at most two atoms ``t`` or
    ``t + 1`` times an optional square of a linear polynomial, so total
    degree stays at most 4 and F^2-dependencies among samples are common.
    """
    if isinstance(F, GF2k):
        return F.element(rng.randrange(1, 1 << F.k))
    gens = F.gens()
    atoms = gens + [g + F.one for g in gens]
    v = F.one
    for _ in range(rng.randrange(3)):
        v = v * rng.choice(atoms)
    if rng.random() < 0.3:
        s = rng.choice(gens) + (F.one if rng.random() < 0.5 else F.zero)
        v = v * s.square()
    return v


def _atom(rng: random.Random, F: Field) -> FieldElement:
    """1, a generator, or a generator plus 1; keeps involution data small
    so that eliminations over 64-dimensional tensors stay fast."""
    if isinstance(F, GF2k):
        return random_element(rng, F)
    g = rng.choice(F.gens())
    return rng.choice([F.one, g, g + F.one])


def split_spec(rng: random.Random, n_max: int = 4) -> dict:
    fdesc = rng.choice(FIELD_POOL)
    F = _field(fdesc)
    n = rng.randrange(2, n_max + 1)
    mode = rng.random()
    if mode < 0.15:
        c = random_element(rng, F)
        u = [c] * n
    else:
        u = [random_element(rng, F) for _ in range(n)]
    return {"field": fdesc, "algebra": {"kind": "matrix", "n": n, "u_diag": fmt(u)}}


def quaternion_element_str(coords: Sequence[FieldElement]) -> str:
    """Inverse of :func:`parse_quaternion_element` on the basis (1, i, j, ij)."""
    terms = []
    for c, name in zip(coords, ("", "i", "j", "ij")):
        if c:
            terms.append(f"({c})" + (f"*{name}" if name else ""))
    return "+".join(terms) or "0"


def _quaternion_factor(rng: random.Random, F: Field, a: FieldElement | None = None,
                       b: FieldElement | None = None) -> dict:
    a = a if a is not None else (random_element(rng, F) if rng.random() < 0.9 else F.zero)
    b = b if b is not None else random_element(rng, F)
    while True:
        c0 = _atom(rng, F) if rng.random() < 0.5 else F.zero
        c1 = _atom(rng, F) if rng.random() < 0.7 else F.zero
        c2 = _atom(rng, F) if (rng.random() < 0.5 or not c1) else F.zero
        spec = {"kind": "quaternion", "a": str(a), "b": str(b),
                "u": quaternion_element_str((c0, F.zero, c1, c2))}
        try:
            mk_quaternion_involution(F, a, b, parse_quaternion_element(F, spec["u"]), validate=False)
        except (InvalidInvolution, NotOrthogonal):
            continue
        return spec


def _m2_factor(rng: random.Random, F: Field) -> dict:
    return {"kind": "matrix", "n": 2, "u_diag": ["1", str(random_element(rng, F))]}


def decomposable_spec(rng: random.Random, max_factors: int = 3) -> dict:
    """Totally decomposable instance: Pfister-diagonal matrix, tensor of
    2x2 matrix factors, tensor of quaternion factors, or a mix."""
    fdesc = rng.choice(FIELD_POOL[1:] if rng.random() < 0.9 else FIELD_POOL[:2])
    F = _field(fdesc)
    m = rng.choices(range(1, max_factors + 1), weights=[4, 4, 2][:max_factors])[0]
    shape = rng.choice(["pfister_matrix", "matrix_tensor", "quaternion_tensor", "mixed"])
    if shape == "pfister_matrix":
        slots = [random_element(rng, F) for _ in range(m)]
        u = pfister_expand(PfisterForm(slots, F)).coeffs
        alg = {"kind": "matrix", "n": 1 << m, "u_diag": fmt(u)}
    else:
        factors = []
        for k in range(m):
            quat = shape == "quaternion_tensor" or (shape == "mixed" and (k % 2 == 0))
            factors.append(_quaternion_factor(rng, F) if quat else _m2_factor(rng, F))
        alg = factors[0] if m == 1 else {"kind": "tensor", "factors": factors}
    return {"field": fdesc, "algebra": alg}


def generate_split_instances(seed: int, count: int, n_max: int = 4) -> list[Instance]:
    rng = random.Random(seed)
    return [build_instance(split_spec(rng, n_max), f"split-{seed}-{k:04d}") for k in range(count)]


def generate_decomposable_instances(seed: int, count: int, max_factors: int = 3) -> list[Instance]:
    rng = random.Random(seed)
    return [build_instance(decomposable_spec(rng, max_factors), f"decomp-{seed}-{k:04d}")
            for k in range(count)]


UNIT_INVERSE_MAX_DEGREE = 6
CONJUGATE_MAX_DEGREE = 12


def _degree(c: FieldElement) -> int:
    """Total degree of numerator plus denominator; 0 over finite fields."""
    if isinstance(c, RatFunc):
        return c.num.total_degree() + c.den.total_degree()
    return 0


def random_unit(rng: random.Random, A: InvolutionAlgebra,
                max_degree: int = UNIT_INVERSE_MAX_DEGREE) -> Element:
    """1 plus a sparse random element, retried until it is invertible with
    an inverse of bounded degree.

    The bound keeps the conjugated involution's structure data small; a
    unit whose inverse has large denominators makes every later
    elimination over the conjugate slow without testing anything new.
    """
    F = A.field
    while True:
        x = list(A.unit)
        for _ in range(rng.randrange(1, 4)):
            k = rng.randrange(A.dim)
            x[k] = x[k] + (random_element(rng, F) if rng.random() < 0.5 else F.one)
        x = tuple(x)
        inv = A.inverse(x)
        if inv is not None and max(_degree(c) for c in inv) <= max_degree:
            return x


def _variant_slots(rng: random.Random, F: Field, slots: list[FieldElement]) -> list[FieldElement]:
    """Slots of a Pfister form isometric to <<slots>> (square rescaling,
    a -> a*b substitution, reordering)."""
    out = list(slots)
    op = rng.randrange(3)
    if op == 0:
        k = rng.randrange(len(out))
        out[k] = out[k] * random_element(rng, F).square()
    elif op == 1 and len(out) >= 2:
        i, j = rng.sample(range(len(out)), 2)
        out[j] = out[j] * out[i]
    else:
        rng.shuffle(out)
    return out


def pair_spec(rng: random.Random) -> tuple[dict, dict]:
    """Two involutions on the same algebra, isometric by construction about
    half of the time.

    At most two factors (dimension 16): pairs are classified twice over, and
    64-dimensional pairs cost tens of seconds each without exercising any
    comparison that smaller pairs miss.
    """
    fdesc = rng.choice(FIELD_POOL[2:])
    F = _field(fdesc)
    m = rng.choice([1, 2])
    shape = rng.choice(["pfister_matrix", "pfister_matrix", "quaternion_tensor", "matrix_tensor"])
    related = rng.random() < 0.5
    if shape == "pfister_matrix":
        s1 = [random_element(rng, F) for _ in range(m)]
        s2 = _variant_slots(rng, F, s1) if related else [random_element(rng, F) for _ in range(m)]
        algs = [{"kind": "matrix", "n": 1 << m,
                 "u_diag": fmt(pfister_expand(PfisterForm(s, F)).coeffs)} for s in (s1, s2)]
    elif shape == "matrix_tensor":
        s1 = [random_element(rng, F) for _ in range(m)]
        s2 = _variant_slots(rng, F, s1) if related and m == 1 else [random_element(rng, F) for _ in range(m)]
        algs = []
        for s in (s1, s2):
            fs = [{"kind": "matrix", "n": 2, "u_diag": ["1", str(c)]} for c in s]
            algs.append(fs[0] if m == 1 else {"kind": "tensor", "factors": fs})
    else:
        f1, f2 = [], []
        for _ in range(m):
            q = _quaternion_factor(rng, F)
            a, b = F.parse(q["a"]), F.parse(q["b"])
            if related:
                c = random_element(rng, F)
                u = parse_quaternion_element(F, q["u"])
                q2 = dict(q, u=quaternion_element_str([c * x for x in u]))
            else:
                q2 = _quaternion_factor(rng, F, a, b)
            f1.append(q)
            f2.append(q2)
        algs = [f[0] if m == 1 else {"kind": "tensor", "factors": f} for f in (f1, f2)]
    return ({"field": fdesc, "algebra": algs[0]}, {"field": fdesc, "algebra": algs[1]})


def _light_conjugate(rng: random.Random, A: InvolutionAlgebra) -> InvolutionAlgebra:
    """Conjugate of A by a random unit, resampled until the new involution's
    structure constants have degree at most CONJUGATE_MAX_DEGREE."""
    while True:
        B = conjugate(A, random_unit(rng, A), validate=False)
        if max(_degree(c) for col in B.invol for c in col) <= CONJUGATE_MAX_DEGREE:
            B.validate(full=False)
            return B


def generate_pairs(seed: int, count: int, conjugate_every: int = 3) -> list[tuple[Instance, Instance, bool]]:
    """Pairs (A, A', is_conjugate_pair); every ``conjugate_every``-th pair is
    A together with a random conjugate of A."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        iid = f"pair-{seed}-{k:04d}"
        if conjugate_every and k % conjugate_every == 0:
            while True:
                spec = decomposable_spec(rng, max_factors=2)
                inst = build_instance(spec, iid + "a")
                if inst.algebra.dim <= 16:
                    break
            B = _light_conjugate(rng, inst.algebra)
            out.append((inst, Instance(iid + "b", inst.field, B, None), True))
        else:
            s1, s2 = pair_spec(rng)
            out.append((build_instance(s1, iid + "a"), build_instance(s2, iid + "b"), False))
    return out


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

def run_selftest(seed: int, n_split: int = 24, n_decomposable: int = 12, n_pairs: int = 9) -> dict:
    """Fixtures plus seeded randomized suites; the result depends only on
    the arguments."""
    split = [instance_report(i, ("direct", "tran"))
             for i in generate_split_instances(seed, n_split)]
    decomp = [instance_report(i, ("direct", "isotropic", "qp"))
              for i in generate_decomposable_instances(seed + 1, n_decomposable)]
    pairs = []
    for a, b, conj in generate_pairs(seed + 2, n_pairs):
        frag = suite_classification(a.algebra, b.algebra, conjugate_pair=conj)
        pairs.append({"instance_id": a.instance_id[:-1], "conjugate": conj, "classification": frag})
    report = {
        "seed": seed,
        "fixtures": regression_fixtures(),
        "split": sorted(split, key=lambda r: r["instance_id"]),
        "decomposable": sorted(decomp, key=lambda r: r["instance_id"]),
        "pairs": sorted(pairs, key=lambda r: r["instance_id"]),
    }
    report["all_pass"] = not report_failed(report)
    return report
