import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spreclone import finite_monoid as fm
from spreclone import formats
from spreclone import galois as G
from spreclone import signed_ops as so
from spreclone.errors import ArityMismatch

from strategies import MONOIDS, s_relation, signed_op

Z2 = fm.builtin("z2")


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_op_round_trip(data):
    m = MONOIDS[data.draw(st.sampled_from(sorted(MONOIDS)))]
    k = data.draw(st.sampled_from([2, 3]))
    f = data.draw(signed_op(m, k, 2))
    text = json.dumps(formats.op_to_json(f, m))
    assert formats.op_from_json(json.loads(text), m) == f


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_rel_round_trip(data):
    m = MONOIDS[data.draw(st.sampled_from(sorted(MONOIDS)))]
    rho = data.draw(s_relation(m, 2, 3))
    text = json.dumps(formats.rel_to_json(rho, m))
    assert formats.rel_from_json(json.loads(text), m) == rho


def test_op_record_uses_names(neg_minus):
    obj = formats.op_to_json(neg_minus, Z2)
    assert obj == {"domain_size": 2, "arity": 1, "signum": ["-"], "values": [1, 0]}


def test_missing_parts_are_empty():
    rho = formats.rel_from_json({"domain_size": 2, "arity": 1, "parts": {"+": [[0]]}}, Z2)
    assert rho.parts == (1, 0)


def test_bad_records():
    with pytest.raises(formats.FormatError):
        formats.op_from_json({"arity": 1}, Z2)
    with pytest.raises(ArityMismatch):
        formats.op_from_json({"domain_size": 2, "arity": 2, "signum": ["+"], "values": [0, 1]}, Z2)
    with pytest.raises(formats.FormatError):
        formats.rel_from_json({"domain_size": 2, "arity": 1, "parts": [[0]]}, Z2)


def test_certificate_json(neg_minus, neg_plus):
    ok, cert = G.membership(neg_plus, [neg_minus], Z2, certificate=True)
    obj = formats.to_jsonable(cert, Z2)
    assert set(obj) == {"violated_s", "columns", "image"}
    json.dumps(obj)


def test_fragment_dump_header():
    ops = [so.identity(2, 0)]
    out = formats.fragment_dump(ops, Z2, {"op_arity": 1}, (1,))
    assert out["header"] == {"caps": {"op_arity": 1}, "saturated_arities": [1]}
    assert out["members"][0]["signum"] == ["+"]


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(formats.FormatError):
        formats.load_json(bad)
    with pytest.raises(formats.FormatError):
        formats.load_json(tmp_path / "missing.json")
