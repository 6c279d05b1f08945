import json

import pytest
from click.testing import CliRunner

from hallq.auditor import CERT_IDS
from hallq.cli import main
from hallq.fixtures import fixture_text


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workdir(tmp_path):
    """A directory with quiver files and small module JSON files."""
    for name in ("l1", "l2", "l3", "kronecker", "zigzag_a4", "q8"):
        (tmp_path / f"{name}.quiver").write_text(fixture_text(name))
    (tmp_path / "broken.quiver").write_text("vertex 1\n")
    one = {"quiver": "l1", "p": 2, "dims": {"1": 1}, "maps": {}}
    (tmp_path / "one.json").write_text(json.dumps(one))
    p1 = {"quiver": "l2", "p": 2, "dims": {"1": 1, "2": 1},
          "maps": {"a": [[1]]}}
    (tmp_path / "p1.json").write_text(json.dumps(p1))
    ss = {"quiver": "l2", "p": 2, "dims": {"1": 1, "2": 1},
          "maps": {"a": [[0]]}}
    (tmp_path / "ss.json").write_text(json.dumps(ss))
    return tmp_path


def test_classify_chain(runner, workdir):
    res = runner.invoke(main, ["classify", str(workdir / "l3.quiver")])
    assert res.exit_code == 0
    assert "L(3)" in res.output
    assert "ideal_all_r=true" in res.output


def test_classify_kronecker(runner, workdir):
    res = runner.invoke(main, ["classify", str(workdir / "kronecker.quiver")])
    assert res.exit_code == 0
    assert "ideal_all_r=false subring_r1=false subring_all_r=false" in res.output


def test_parse_error_exit_code(runner, workdir):
    res = runner.invoke(main, ["classify", str(workdir / "broken.quiver")])
    assert res.exit_code == 2
    assert "parse error" in res.output


def test_missing_file_exit_code(runner, workdir):
    res = runner.invoke(main, ["classify", str(workdir / "nope.quiver")])
    assert res.exit_code == 2


def test_product_plain_and_twisted(runner, workdir):
    args = ["product", str(workdir / "l1.quiver"),
            str(workdir / "one.json"), str(workdir / "one.json")]
    res = runner.invoke(main, args)
    assert res.exit_code == 0
    assert "3 [dim 2]" in res.output      # gaussian_binomial(2, 1, 2)
    res_tw = runner.invoke(main, args + ["--twisted"])
    assert res_tw.exit_code == 0
    assert "3v^1 [dim 2]" in res_tw.output


def test_product_json_output(runner, workdir):
    res = runner.invoke(main, ["product", str(workdir / "l2.quiver"),
                               str(workdir / "ss.json"),
                               str(workdir / "ss.json"),
                               "--format", "json"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["terms"]
    # deterministic: a second run renders identical JSON
    res2 = runner.invoke(main, ["product", str(workdir / "l2.quiver"),
                                str(workdir / "ss.json"),
                                str(workdir / "ss.json"),
                                "--format", "json"])
    assert res2.output == res.output


def test_check_pass_and_fail(runner, workdir):
    ok = runner.invoke(main, ["check", str(workdir / "l3.quiver"),
                              "--mode", "subring", "--r", "1",
                              "--max-dim", "4"])
    assert ok.exit_code == 0
    assert ok.output.startswith("PASS")
    bad = runner.invoke(main, ["check", str(workdir / "kronecker.quiver"),
                               "--mode", "subring", "--r", "1",
                               "--max-dim", "5"])
    assert bad.exit_code == 1
    assert bad.output.startswith("FAIL")
    assert "violating class" in bad.output


def test_check_capacity_exit_code(runner, workdir, monkeypatch):
    monkeypatch.setenv("HALL_AUDIT_CAP", "10")
    res = runner.invoke(main, ["check", str(workdir / "kronecker.quiver"),
                               "--max-dim", "5"])
    assert res.exit_code == 3
    assert "capacity exceeded" in res.output


def test_bad_cap_value(runner, workdir, monkeypatch):
    monkeypatch.setenv("HALL_AUDIT_CAP", "zero")
    res = runner.invoke(main, ["check", str(workdir / "l2.quiver")])
    assert res.exit_code == 2


def test_decompose(runner, workdir):
    res = runner.invoke(main, ["decompose", str(workdir / "l2.quiver"),
                               str(workdir / "ss.json")])
    assert res.exit_code == 0
    assert "s = 2" in res.output
    res2 = runner.invoke(main, ["decompose", str(workdir / "l2.quiver"),
                                str(workdir / "p1.json")])
    assert "s = 1" in res2.output


def test_invariants(runner, workdir):
    res = runner.invoke(main, ["invariants", str(workdir / "l2.quiver"),
                               str(workdir / "p1.json")])
    assert res.exit_code == 0
    assert "nilpotent = true" in res.output
    assert "uniserial = true" in res.output
    assert "dim End = 1" in res.output


def test_enumerate(runner, workdir):
    res = runner.invoke(main, ["enumerate", str(workdir / "q8.quiver"),
                               "--dim", "2", "--nilpotent"])
    assert res.exit_code == 0
    count = int(res.output.split()[0])
    assert count >= 2
    res2 = runner.invoke(main, ["enumerate", str(workdir / "l2.quiver"),
                                "--dim", "1,1", "--indecomposable"])
    assert res2.output.startswith("1 classes")
    bad = runner.invoke(main, ["enumerate", str(workdir / "l2.quiver"),
                               "--dim", "1"])
    assert bad.exit_code == 2


@pytest.mark.parametrize("cert_id", CERT_IDS)
def test_certify_command(runner, cert_id):
    res = runner.invoke(main, ["certify", cert_id])
    assert res.exit_code == 0
    assert f"certificate {cert_id}" in res.output


def test_certify_reports_local_endomorphisms(runner):
    res = runner.invoke(main, ["certify", "2.6"])
    assert "End dim = 4, local: yes" in res.output
    res7 = runner.invoke(main, ["certify", "2.7"])
    assert "End dim = 6, local: yes" in res7.output


def test_out_file(runner, workdir, tmp_path):
    target = tmp_path / "report.json"
    res = runner.invoke(main, ["check", str(workdir / "l2.quiver"),
                               "--max-dim", "3", "--format", "json",
                               "--out", str(target)])
    assert res.exit_code == 0
    data = json.loads(target.read_text())
    assert data["verdict"] == "PASS"
