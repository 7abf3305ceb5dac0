import json

import numpy as np
import pytest

from tensorcrit import DenseTensor, random_tensor, write_tensor_file
from tensorcrit.cli import main


def write(tmp_path, name, array):
    path = tmp_path / name
    write_tensor_file(DenseTensor(array), path)
    return str(path)


@pytest.fixture
def cubic_file(tmp_path):
    data = np.zeros((2, 2, 2))
    data[0, 0, 0] = 1.0
    data[1, 1, 1] = 1.0
    return write(tmp_path, "cubic.json", data)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timings(text):
    doc = json.loads(text)
    doc.pop("timings", None)
    return json.dumps(doc, sort_keys=True)


# --- gen --------------------------------------------------------------------


def test_gen_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["gen", "--shape", "2,2,2", "--seed", "7", "-o", str(a)]) == 0
    assert main(["gen", "--shape", "2,2,2", "--seed", "7", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_symmetric_needs_square(capsys):
    code, _, err = run(capsys, ["gen", "--shape", "2,3", "--symmetric"])
    assert code == 2
    assert "square" in err


def test_gen_symmetric_output_is_symmetric(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["gen", "--shape", "3,3,3", "--symmetric", "--seed", "1", "-o", str(out)]) == 0
    from tensorcrit import max_asymmetry, read_tensor_file

    assert max_asymmetry(read_tensor_file(out)) == 0.0


# --- eval -------------------------------------------------------------------


def test_eval_identity(tmp_path, capsys):
    t = write(tmp_path, "eye.json", np.eye(2))
    e1 = write(tmp_path, "e1.json", np.array([1.0, 0.0]))
    code, out, _ = run(capsys, ["eval", t, e1, e1])
    assert code == 0
    assert out.strip() == "1.0000000000000000e+00"


def test_eval_all_ones(tmp_path, capsys):
    t = write(tmp_path, "ones.json", np.ones((2, 2, 2)))
    v = write(tmp_path, "v.json", np.array([1.0, 1.0]))
    code, out, _ = run(capsys, ["eval", t, v, v, v])
    assert code == 0
    assert float(out) == 8.0


def test_eval_wrong_length_vector(tmp_path, capsys):
    t = write(tmp_path, "eye.json", np.eye(2))
    v = write(tmp_path, "v3.json", np.array([1.0, 0.0, 0.0]))
    code, _, err = run(capsys, ["eval", t, v, v])
    assert code == 2


# --- eig --------------------------------------------------------------------


def test_eig_cubic_audit(cubic_file, capsys):
    code, out, _ = run(capsys, ["eig", cubic_file, "--symmetric", "--audit", "--restarts", "40"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert len(doc["pairs"]) == 6
    assert doc["morse"]["consistent"] is True
    assert doc["morse"]["counts"] == {"0": 3, "1": 3}
    values = sorted(round(p["value"], 9) for p in doc["pairs"])
    r = round(2 ** -0.5, 9)
    assert values == [-1.0, -1.0, -r, r, 1.0, 1.0]


def test_eig_identity_degenerate(tmp_path, capsys):
    t = write(tmp_path, "eye.json", np.eye(2))
    code, _, err = run(capsys, ["eig", t, "--symmetric", "--restarts", "30"])
    assert code == 4
    assert "degenerate" in err


def test_eig_matrix_values(tmp_path, capsys):
    t = write(tmp_path, "diag.json", np.diag([1.0, 2.0]))
    code, out, _ = run(capsys, ["eig", t, "--symmetric", "--restarts", "24"])
    assert code == 0
    doc = json.loads(out)
    assert sorted(round(p["value"], 9) for p in doc["pairs"]) == [1.0, 1.0, 2.0, 2.0]


def test_eig_audit_with_mode_is_usage_error(cubic_file):
    with pytest.raises(SystemExit) as exc:
        main(["eig", cubic_file, "--mode", "1", "--audit"])
    assert exc.value.code == 2


def test_eig_rejects_rectangular(tmp_path, capsys):
    t = write(tmp_path, "rect.json", np.ones((2, 3)))
    code, _, _ = run(capsys, ["eig", t, "--symmetric"])
    assert code == 2


def test_eig_audit_violation_exit_code(tmp_path, capsys):
    T = random_tensor((3, 3, 3), 70005, symmetric=True)
    path = tmp_path / "t.json"
    write_tensor_file(T, path)
    code, out, _ = run(
        capsys,
        ["eig", str(path), "--symmetric", "--audit", "--restarts", "1", "--seed", "0"],
    )
    assert code == 3
    doc = json.loads(out)
    assert doc["morse"]["consistent"] is False


def test_eig_mode_run(tmp_path, capsys):
    t = write(tmp_path, "tri.json", np.array([[2.0, 1.0], [0.0, 3.0]]))
    code, out, _ = run(capsys, ["eig", t, "--mode", "2", "--restarts", "24"])
    assert code == 0
    doc = json.loads(out)
    assert sorted(set(round(p["value"], 8) for p in doc["pairs"])) == [2.0, 3.0]
    assert all(p["mode"] == 2 for p in doc["pairs"])


# --- svd --------------------------------------------------------------------


def test_svd_diag_matrix(tmp_path, capsys):
    t = write(tmp_path, "d.json", np.diag([3.0, 1.0]))
    code, out, _ = run(capsys, ["svd", t, "--restarts", "24"])
    assert code == 0
    doc = json.loads(out)
    sigmas = sorted(set(round(t["sigma"], 9) for t in doc["tuples"]))
    assert sigmas == [1.0, 3.0]


def test_svd_rank_one_flags_zero_sigma(tmp_path, capsys):
    t = write(tmp_path, "ones.json", np.ones((2, 2)))
    code, out, _ = run(capsys, ["svd", t, "--restarts", "24"])
    assert code == 0
    doc = json.loads(out)
    flags = {round(t["sigma"], 6): t["degenerate"] for t in doc["tuples"]}
    assert flags[2.0] is False
    assert flags[0.0] is True


def test_svd_order_three_all_ones(tmp_path, capsys):
    t = write(tmp_path, "ones3.json", np.ones((2, 2, 2)))
    code, out, _ = run(capsys, ["svd", t, "--restarts", "24"])
    assert code == 0
    doc = json.loads(out)
    top = doc["tuples"][0]
    assert top["sigma"] == pytest.approx(2 ** 1.5, abs=1e-9)
    for v in top["vectors"]:
        np.testing.assert_allclose(np.abs(v), [2 ** -0.5] * 2, atol=1e-9)


# --- check ------------------------------------------------------------------


def test_check_symmetric_tensor(tmp_path, capsys):
    T = random_tensor((3, 3, 3), 3, symmetric=True)
    path = tmp_path / "t.json"
    write_tensor_file(T, path)
    code, out, _ = run(capsys, ["check", str(path)])
    assert code == 0
    assert "euler-homogeneity: pass" in out
    assert "FAIL" not in out


def test_check_asymmetric_skips_euler(tmp_path, capsys):
    t = write(tmp_path, "a.json", np.array([[0.0, 1.0], [0.0, 0.0]]))
    code, out, _ = run(capsys, ["check", t])
    assert code == 0
    assert "euler-homogeneity: skipped" in out


def test_check_overflowing_entries_fail(tmp_path, capsys):
    t = write(tmp_path, "big.json", np.full((2, 2, 2), 1e300))
    code, out, _ = run(capsys, ["check", t])
    assert code == 1
    assert "FAIL" in out


def test_check_nonfinite_file_rejected(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"shape": [2], "entries": [Infinity, 1.0]}')
    code, _, err = run(capsys, ["check", str(path)])
    assert code == 2


def test_garbage_file_rejected(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("not a tensor")
    code, _, err = run(capsys, ["eig", str(path), "--symmetric"])
    assert code == 2


# --- report determinism ------------------------------------------------------


def test_eig_report_deterministic(cubic_file, capsys):
    args = ["eig", cubic_file, "--symmetric", "--audit", "--restarts", "40", "--seed", "3"]
    _, out1, _ = run(capsys, args)
    _, out2, _ = run(capsys, args)
    assert strip_timings(out1) == strip_timings(out2)


def test_svd_report_deterministic(tmp_path, capsys):
    t = write(tmp_path, "r.json", random_tensor((2, 3), 5).data)
    args = ["svd", t, "--restarts", "24", "--seed", "1"]
    _, out1, _ = run(capsys, args)
    _, out2, _ = run(capsys, args)
    assert strip_timings(out1) == strip_timings(out2)


def test_restarts_env_override(cubic_file, capsys, monkeypatch):
    monkeypatch.setenv("TENSORCRIT_RESTARTS", "17")
    code, out, _ = run(capsys, ["eig", cubic_file, "--symmetric"])
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["restarts"] == 17
    assert doc["config"]["restarts_from_env"] is True
    # explicit flag wins over the environment
    code, out, _ = run(capsys, ["eig", cubic_file, "--symmetric", "--restarts", "21"])
    doc = json.loads(out)
    assert doc["config"]["restarts"] == 21
    assert doc["config"]["restarts_from_env"] is False
