import json
import subprocess
import sys

import pytest

from spreclone import cli
from spreclone import finite_monoid as fm
from spreclone import formats
from spreclone import relations as R
from spreclone import signed_ops as so

Z2 = fm.builtin("z2")


@pytest.fixture
def files(tmp_path, neg_minus, neg_plus, leq_geq):
    out = {}
    items = {"not_minus": formats.op_to_json(neg_minus, Z2),
             "not_plus": formats.op_to_json(neg_plus, Z2),
             "and": formats.op_to_json(so.from_function(2, (0, 0), lambda x, y: x & y), Z2),
             "leq_geq": formats.rel_to_json(leq_geq, Z2),
             "small": formats.rel_to_json(R.s_relation(2, [[(0, 1)], []], 2), Z2)}
    for name, obj in items.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(obj))
        out[name] = str(path)
    return out


def call(capsys, *argv):
    code = cli.run([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_preserved(capsys, files):
    code, out, _ = call(capsys, "check", "--op", files["not_minus"], "--rel", files["leq_geq"])
    assert code == 0 and json.loads(out) == {"preserved": True}
    code, out, _ = call(capsys, "check", "--op", files["not_minus"], "--rel", files["leq_geq"],
                        "--format", "text")
    assert out.strip() == "preserved"


def test_check_witness(capsys, files):
    code, out, _ = call(capsys, "check", "--op", files["not_plus"], "--rel", files["leq_geq"])
    assert code == 1 and "witness" in json.loads(out)


def test_member_certificate(capsys, files):
    code, out, _ = call(capsys, "member", "--gen", files["not_minus"], "--op", files["not_plus"])
    obj = json.loads(out)
    assert code == 1 and obj["member"] is False and "certificate" in obj
    code, out, _ = call(capsys, "member", "--gen", files["not_minus"], "--op", files["not_minus"])
    assert code == 0


def test_chi(capsys):
    code, out, _ = call(capsys, "chi", "--monoid", "z2", "--signum", "+,-")
    obj = json.loads(out)
    assert code == 0 and obj["arity"] == 4
    assert obj["parts"] == {"+": [[0, 0, 1, 1]], "-": [[0, 1, 0, 1]]}


def test_gamma(capsys, files):
    code, out, _ = call(capsys, "gamma", "--gen", files["not_minus"], "--rel", files["small"])
    rho = formats.rel_from_json(json.loads(out), Z2)
    assert code == 0 and rho.arity == 2
    assert (1, 0) in rho.part(1)


def test_spol_round_trip(capsys, files):
    code, out, _ = call(capsys, "spol", "--rel", files["leq_geq"], "--op-cap", 1)
    obj = json.loads(out)
    assert code == 0 and obj["header"]["caps"]
    ops = [formats.op_from_json(x, Z2) for x in obj["members"]]
    assert len(ops) == 6
    again = formats.fragment_dump(ops, Z2, obj["header"]["caps"])
    assert again["members"] == obj["members"]


def test_sinv_round_trip(capsys, files):
    code, out, _ = call(capsys, "sinv", "--gen", files["not_minus"], "--rel-cap", 1)
    obj = json.loads(out)
    rels = [formats.rel_from_json(x, Z2) for x in obj["members"]]
    assert code == 0 and rels and all(r.arity == 1 for r in rels)


def test_generators(capsys, files):
    code, out, _ = call(capsys, "gen-preclone", "--gen", files["not_minus"], "--op-cap", 2)
    obj = json.loads(out)
    assert code == 0 and obj["header"]["saturated_arities"] == [1, 2]
    code, out, _ = call(capsys, "gen-preclone", "--gen", files["not_minus"], "--op-cap", 2,
                        "--method", "primitive", "--slack", 0)
    assert code == 0
    code, out, _ = call(capsys, "gen-relclone", "--rel", files["leq_geq"], "--rel-cap", 2)
    assert code == 0 and json.loads(out)["members"]


def test_diagonals(capsys):
    code, out, _ = call(capsys, "diagonals", "--arity", 2)
    assert code == 0 and len(json.loads(out)["members"]) == 3


def test_verify(capsys, files):
    code, out, _ = call(capsys, "verify-thm1", "--gen", files["not_minus"])
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = call(capsys, "verify-thm1", "--random", 2, "--seed", 3)
    assert code == 0 and len(json.loads(out)["runs"]) == 2
    code, out, _ = call(capsys, "verify-thm2", "--rel", files["leq_geq"], "--op-caps", "1,2")
    assert code == 0


def test_lattice_commands(capsys, files):
    code, out, _ = call(capsys, "sheffer", "--random", 3)
    assert code == 0 and json.loads(out)["checked"] == 75
    code, out, _ = call(capsys, "relgen", "--k", 3, "--op-cap", 1)
    assert code == 0
    code, out, _ = call(capsys, "minimal", "--op-cap", 1)
    assert code == 0 and json.loads(out)["classes"]
    code, out, _ = call(capsys, "maximal", "--op-cap", 2, "--format", "text")
    assert code == 0 and "stated count 9" in out
    code, out, _ = call(capsys, "embed", "psi", "--gen", files["and"])
    assert code == 0 and json.loads(out)["fragment_size"] > 0
    code, out, _ = call(capsys, "embed", "phi")
    assert code == 0
    code, out, _ = call(capsys, "orbit", "--gen", files["and"], "--pi", "0,1", "--pi", "1,0")
    assert code == 0 and len(json.loads(out)["orbit"]) == 2


def test_dual(capsys, files, leq_geq):
    code, out, _ = call(capsys, "dual", "--rel", files["leq_geq"], "--pi", "1,0")
    rho = formats.rel_from_json(json.loads(out), Z2)
    assert code == 0 and rho == R.pi_dual(leq_geq, (1, 0))
    code, out, _ = call(capsys, "dual", "--op", files["and"], "--h=+,-")
    assert code == 0
    code, _, err = call(capsys, "dual", "--op", files["and"], "--h=-,+")
    assert code == 2 and "automorphism" in err


def test_usage_errors(capsys, files, tmp_path):
    assert call(capsys, "dual")[0] == 2
    assert call(capsys, "check", "--op", tmp_path / "none.json", "--rel", files["small"])[0] == 2
    assert call(capsys, "chi", "--signum", "+,x")[0] == 2
    assert call(capsys, "spol", "--rel", files["leq_geq"], "--op-cap", 0)[0] == 2
    assert call(capsys, "check", "--monoid", "nope", "--op", files["and"], "--rel", files["small"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.run(["no-such-command"])
    assert exc.value.code == 2


def test_cap_errors(capsys):
    code, _, err = call(capsys, "relgen", "--k", 2)
    assert code == 2
    code, _, err = call(capsys, "sinv", "--rel-cap", 21)
    assert code == 2 and "requires" in err and "configured" in err


def test_monoid_file(capsys, tmp_path, files):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(Z2.to_json()))
    code, out, _ = call(capsys, "check", "--monoid", path, "--op", files["not_minus"],
                        "--rel", files["leq_geq"])
    assert code == 0


def test_deterministic(capsys, files):
    argv = ["verify-thm1", "--random", 2, "--seed", 5]
    first = call(capsys, *argv)[1]
    assert call(capsys, *argv)[1] == first
    argv = ["maximal", "--op-cap", 2]
    assert call(capsys, *argv)[1] == call(capsys, *argv)[1]


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "spreclone", "check", "--op", files["not_minus"],
                          "--rel", files["leq_geq"], "--format", "text"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "preserved"
