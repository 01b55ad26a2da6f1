import io
import json
import subprocess
import sys

import pytest

from boxzeta.cli import run


def call(*argv, cache=None):
    out, err = io.StringIO(), io.StringIO()
    args = list(argv) + (["--cache-dir", str(cache)] if cache else ["--no-cache"])
    code = run(args, out, err)
    return code, out.getvalue(), err.getvalue()


def test_ap(tmp_path):
    code, out, _ = call("ap", "--form", "f32", "--prime", "13")
    assert code == 0 and out.strip() == "6"


def test_count_brute(tmp_path):
    code, out, _ = call("count", "--variety", "surface", "--prime", "3", "--brute", "--format", "json",
                        cache=tmp_path)
    assert code == 0
    assert json.loads(out) == {"variety": "surface", "p": 3, "degree": 1, "count": 24, "method": "brute"}


@pytest.mark.parametrize("argv,expected", [
    (("count", "--variety", "curve-x", "--prime", "3", "--degree", "2"), "24"),
    (("count", "--variety", "singular", "--prime", "5"), "48"),
    (("gpair", "--prime", "11"), "{-6i, 6i}"),
])
def test_simple_commands(argv, expected):
    code, out, _ = call(*argv)
    assert code == 0
    assert out.strip().startswith(expected)


def test_bad_prime():
    code, _, err = call("ap", "--form", "f32", "--prime", "2")
    assert code == 1 and "bad prime excluded" in err
    code, _, err = call("count", "--variety", "surface", "--prime", "2")
    assert code == 1 and "bad prime excluded" in err


def test_usage_errors():
    assert call("verify", "--bogus")[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("qexp", "--form", "f32", "--limit", "0")[0] == 1


def test_verify_exit_codes(tmp_path):
    code, out, _ = call("verify", "--pmax", "97", cache=tmp_path)
    assert code == 0 and "identity holds" in out
    code, out, _ = call("verify", "--pmax", "97", "--h16-inert", "minus2p", cache=tmp_path)
    assert code == 2


def test_verify_fit_json_byte_identical_cold_and_warm(tmp_path):
    for cmd in (("verify", "--pmax", "97"), ("fit", "--pmax", "97")):
        cold = call(*cmd, "--format", "json", cache=tmp_path / cmd[0])[1]
        warm = call(*cmd, "--format", "json", cache=tmp_path / cmd[0])[1]
        nocache = call(*cmd, "--format", "json")[1]
        parallel = call(*cmd, "--format", "json", "--jobs", "2")[1]
        assert cold == warm == nocache == parallel
        doc = json.loads(cold)
        assert doc["success"] is True
        assert doc["multiplicities"] == {"h16": 3, "h32": 1, "h8": 3, "trivial": 10,
                                         "chi_m4": 2, "chi_m8": 1, "chi_8": 3}


def test_fit_failure_reports_solution():
    code, out, _ = call("fit", "--h16-inert", "minus2p", "--format", "json")
    assert code == 2
    doc = json.loads(out)
    assert doc["error"] == "InadmissibleSolution"
    assert doc["solution"] == [3, 1, 3, 13, -1, 1, 3]


def test_qexp_formats():
    code, out, _ = call("qexp", "--form", "g64_pair", "--limit", "33", "--format", "json")
    doc = json.loads(out)
    assert doc["coefficients"]["2"] == "excluded"
    assert doc["coefficients"]["9"] == [[-1, 0], [-1, 0]]
    assert doc["coefficients"]["33"] is None
    code, out, _ = call("qexp", "--form", "f32", "--limit", "5", "--format", "csv")
    assert out.splitlines() == ["n,a_n", "1,1", "2,excluded", "3,0", "4,excluded", "5,-2"]


def test_euler():
    code, out, _ = call("euler", "--preset", "sbar", "--pmax", "5", "--format", "json")
    doc = json.loads(out)
    assert doc["degree"] == 30
    assert [f["p"] for f in doc["factors"]] == [3, 5]
    assert doc["factors"][0]["coeffs"][1] == -14
    code, out, _ = call("euler", "--preset", "s-paper", "--pmax", "3")
    assert "degree 78" in out


def test_table(tmp_path):
    code, out, _ = call("table", "--pmax", "11", "--csv", str(tmp_path / "x.csv"))
    assert code == 0 and out.startswith("# index-2 data excluded")
    assert (tmp_path / "x.csv").read_text() == out


def test_report_banner():
    code, out, _ = call("report", "--pmax", "97")
    assert code == 0
    assert "(34, 26, 1, 3)" in out and "(46, 14, 1, 3)" in out
    assert "DISCREPANCY" in out
    code, out, _ = call("report", "--pmax", "97", "--format", "json")
    doc = json.loads(out)
    assert doc["l_degrees"] == {"sbar": 30, "s-paper": 78, "s-perm": 78}
    assert doc["exceptional_discrepancy"]["splits_differ"] is True


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "boxzeta", "ap", "--form", "f64", "--prime", "13",
                           "--no-cache"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "-6"


def test_env_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BOXZETA_CACHE", str(tmp_path / "envcache"))
    out, err = io.StringIO(), io.StringIO()
    assert run(["verify", "--pmax", "11"], out, err) == 0
    assert (tmp_path / "envcache" / "surface.json").exists()
