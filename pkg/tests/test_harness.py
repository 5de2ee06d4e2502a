from __future__ import annotations

import json

import pytest

from altform.errors import ParseError
from altform.harness import (compare_spans, compute_invariants, dumps_report, generate_pairs,
                             generate_decomposable_instances, generate_split_instances,
                             instance_report, parse_instance, regression_fixtures, report_failed,
                             run_selftest, suite_classification, suite_prop_qp,
                             suite_theorem_direct, suite_theorem_isotropic, suite_theorem_tran)
from altform.invalg import conjugate, mk_matrix_involution

from conftest import QT, QT2


def doc(field, algebra):
    return json.dumps({"field": field, "algebra": algebra})


T_FIELD = {"kind": "ratfunc", "vars": ["t"]}
T2_FIELD = {"kind": "ratfunc", "vars": ["t1", "t2"]}


def test_parse_matrix_instance():
    inst = parse_instance(doc(T_FIELD, {"kind": "matrix", "n": 2, "u_diag": ["1", "t"]}), "m")
    assert inst.instance_id == "m"
    assert inst.algebra.dim == 4
    r = instance_report(inst)
    assert r["dim_S"] == 2 and r["q_sigma"] == ["1", "t"] and r["direct"] is True
    assert r["pf_slots"] == ["t"]
    assert not report_failed(r)


def test_parse_quaternion_tensor_instance():
    text = doc(T2_FIELD, {"kind": "tensor", "factors": [
        {"kind": "quaternion", "a": "t1", "b": "t2", "u": "j"},
        {"kind": "matrix", "n": 2, "u_diag": ["1", "t1"]}]})
    inst = parse_instance(text)
    assert inst.algebra.dim == 16
    r = instance_report(inst)
    assert len(r["pf_slots"]) == 2
    assert not report_failed(r)


def test_id_from_document():
    d = json.loads(doc(T_FIELD, {"kind": "matrix", "n": 1, "u_diag": ["1"]}))
    d["id"] = "named"
    assert parse_instance(json.dumps(d)).instance_id == "named"


@pytest.mark.parametrize("text,line,column", [
    ('{"field": {"kind": "ratfunc", "vars": ["t"]},\n "algebra": {"kind": "matrix", "n": 2,\n'
     '  "u_diag": ["1", "t+*2"]}}', 3, 22),
    ('{"field": {"kind": "ratfunc", "vars": ["t"]},\n "algebra": {"kind": "matrix" "n": 2}}', 2, 31),
])
def test_parse_errors_are_located(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert (exc.value.line, exc.value.column) == (line, column)


@pytest.mark.parametrize("algebra", [
    {"kind": "matrix", "n": 2, "u_diag": ["1", "0"]},
    {"kind": "matrix", "n": 2, "u_diag": ["1"]},
    {"kind": "quaternion", "a": "t", "b": "t+1", "u": "1"},
    {"kind": "cube"},
    {"kind": "tensor", "factors": []},
])
def test_invalid_instances_raise_parse_error(algebra):
    with pytest.raises(ParseError):
        parse_instance(doc(T_FIELD, algebra))


def test_invalid_field_raises_parse_error():
    with pytest.raises(ParseError):
        parse_instance(doc({"kind": "ratfunc", "vars": []}, {"kind": "matrix", "n": 1, "u_diag": ["1"]}))


def test_regression_fixtures_pass():
    fx = regression_fixtures()
    assert set(fx) >= {"direct_nonsym", "generic_diagonal_n3", "transpose_gf2_n4", "transpose_gf2t_n2"}
    assert all(v["verdict"] == "pass" for v in fx.values())


def test_compare_spans_negative_control():
    t = QT.var("t")
    assert compare_spans(QT, [QT.one, t], [t + 1, t * t])["verdict"] == "pass"
    bad = compare_spans(QT, [QT.one, t], [QT.one, t * t * t * t])
    assert bad["verdict"] == "fail" and bad["witness"] == {"outside_pf_span": "t"}


def test_suites_on_known_instances():
    t1, t2 = QT2.gens()
    o = QT2.one
    A = mk_matrix_involution(QT2, 2, [o, t1])
    assert suite_theorem_direct(A)["verdict"] == "pass"
    iso = suite_theorem_isotropic(A)
    assert iso["verdict"] == "pass" and iso["value"] is True
    assert suite_prop_qp(A)["verdict"] == "pass"
    tran = suite_theorem_tran(A)
    assert tran["verdict"] == "pass" and tran["value"] is False
    B = mk_matrix_involution(QT2, 2, [o, t1 * t1])
    assert suite_theorem_isotropic(B)["value"] is False
    assert suite_theorem_tran(B)["value"] is True


def test_classification_suite():
    t1, t2 = QT2.gens()
    o = QT2.one
    A = mk_matrix_involution(QT2, 2, [o, t1])
    g = A.add(A.one, A.basis(1))
    r = suite_classification(A, conjugate(A, g), conjugate_pair=True)
    assert r["verdict"] == "pass" and r["checks"]["a_conjugate"] is True
    r = suite_classification(A, mk_matrix_involution(QT2, 2, [o, t2]))
    assert r["verdict"] == "pass"
    assert r["pf_isometric"] is False and r["q_prime_isometric"] is False


def test_generators_are_deterministic():
    a = [i.spec for i in generate_split_instances(4, 10)]
    b = [i.spec for i in generate_split_instances(4, 10)]
    assert a == b
    assert a != [i.spec for i in generate_split_instances(5, 10)]
    d1 = [i.spec for i in generate_decomposable_instances(4, 5)]
    assert d1 == [i.spec for i in generate_decomposable_instances(4, 5)]


def test_generated_specs_reparse():
    for inst in generate_split_instances(9, 5) + generate_decomposable_instances(9, 3):
        again = parse_instance(json.dumps(inst.spec))
        assert again.algebra.invol == inst.algebra.invol


def test_pairs_share_field_and_dimension():
    for a, b, conj in generate_pairs(2, 6):
        assert a.field == b.field and a.algebra.dim == b.algebra.dim
        if conj:
            inv_a, inv_b = compute_invariants(a.algebra), compute_invariants(b.algebra)
            assert suite_classification(a.algebra, b.algebra, True, inv_a, inv_b)["verdict"] == "pass"


def test_report_json_round_trip():
    inst = parse_instance(doc(T_FIELD, {"kind": "matrix", "n": 3, "u_diag": ["1", "t", "t+1"]}))
    r = instance_report(inst)
    text = dumps_report(r)
    assert json.loads(text) == r
    assert text.endswith("\n")


def test_report_failed_detects_nested_fail():
    assert report_failed({"a": {"b": [{"verdict": "fail"}]}})
    assert not report_failed({"a": {"verdict": "pass"}, "b": {"verdict": "skipped"}})


def test_small_selftest_is_deterministic():
    a = dumps_report(run_selftest(7, n_split=4, n_decomposable=2, n_pairs=3))
    b = dumps_report(run_selftest(7, n_split=4, n_decomposable=2, n_pairs=3))
    assert a == b
    assert json.loads(a)["all_pass"] is True
