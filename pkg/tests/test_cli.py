import json
import shutil
import subprocess
import sys

import pytest

from maxcurve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def strip_timing(report):
    r = dict(report)
    r.pop("timing")
    return r


def test_semigroup_example(capsys):
    code, rep, _ = run(capsys, "semigroup", "--gens", "3,5", "--check", "symmetric")
    assert code == 0
    assert rep["results"]["gaps"] == [1, 2, 4, 7] and rep["results"]["genus"] == 4 and rep["results"]["symmetric"]
    assert set(rep) == {"command", "curve", "results", "timing", "version"}


def test_semigroup_check_fails_with_exit_1(capsys):
    code, rep, _ = run(capsys, "semigroup", "--gens", "3,4,5", "--check", "symmetric")
    assert code == 1 and rep["results"]["symmetric"] is False


def test_certify_maximal_example(capsys):
    code, rep, _ = run(capsys, "certify-maximal", "--family", "artin_schreier", "--q", "5", "--m", "3")
    assert code == 0
    assert (rep["results"]["count"], rep["results"]["expected"], rep["results"]["maximal"]) == (66, 66, True)
    assert rep["curve"]["family"] == "artin_schreier"


def test_certify_non_maximal_exits_1(capsys):
    spec = json.dumps({"family": "generic_plane", "p": 5, "k": 2, "poly": [[0, 2, 1], [3, 0, 4], [1, 0, 4]]})  # y^2 = x^3 + x, ordinary
    code, rep, _ = run(capsys, "certify-maximal", "--spec", spec)
    assert code == 1 and rep["results"]["maximal"] is False


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "certify-maximal", "--family", "artin_schreier", "--q", "5", "--m", "4")[0] == 2
    assert run(capsys, "certify-maximal")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "normal-form", "--a1", "0", "--aq", "1", "--m", "3", "--q", "5")[0] == 2
    assert run(capsys, "count-points", "--spec", "{not json")[0] == 2
    code, rep, err = run(capsys, "lpoly", "--counts", "99", "--ell", "9", "--genus", "1")
    assert code == 2 and rep is None and "Weil" in err


def test_spec_file(tmp_path, capsys):
    path = tmp_path / "curve.json"
    path.write_text(json.dumps({"family": "hermitian", "q": 3}))
    code, rep, _ = run(capsys, "count-points", "--spec", str(path))
    assert code == 0 and rep["results"]["count"] == 28


def test_count_points_with_points_and_smoothness(capsys):
    code, rep, _ = run(capsys, "count-points", "--family", "hermitian", "--q", "2", "--points", "--smoothness")
    res = rep["results"]
    assert res["count"] == 9 and len(res["points"]) == 9 and res["singular_points"] == []
    assert res["points"][-1].get("infinity") == 0


def test_ree_count(capsys):
    code, rep, _ = run(capsys, "count-points", "--family", "ree", "--s", "0", "--ext", "6")
    assert code == 0 and rep["results"]["count"] == 1540 and rep["results"]["matches"] == ["common"]


def test_lpoly(capsys):
    code, rep, _ = run(capsys, "lpoly", "--family", "suzuki", "--s", "0", "--target-q", "4")
    assert rep["results"]["L"] == [1, 2, 2] and rep["results"]["maximal_over_target"]
    code, rep, _ = run(capsys, "lpoly", "--counts", "9", "--ell", "4", "--genus", "1")
    assert rep["results"]["L"] == [1, 4, 4]


def test_bounds(capsys):
    code, rep, _ = run(capsys, "bounds", "--q", "5", "--g", "4", "--n", "2", "--m1", "3")
    assert rep["results"]["values"]["castelnuovo"]["two_g_bound"] == 8
    assert rep["results"]["scholium"]["state"] == "conclusion"


def test_orders(capsys):
    code, rep, _ = run(capsys, "orders", "--family", "artin_schreier", "--q", "5", "--m", "3", "--point", "inf")
    assert rep["results"]["at_point"]["orders"] == [0, 1, 3, 6]
    code, rep, _ = run(capsys, "orders", "--family", "artin_schreier", "--q", "5", "--m", "3", "--generic")
    assert rep["results"]["generic"]["orders"] == [0, 1, 2, 5]
    code, rep, err = run(capsys, "orders", "--family", "artin_schreier", "--q", "5", "--m", "3", "--point", "1,1")
    assert code == 2 and "not on the curve" in err


def test_sv_divisors_threads_independent(capsys):
    base = ["sv-divisors", "--family", "artin_schreier", "--q", "5", "--m", "3"]
    _, one, _ = run(capsys, "--threads", "1", *base)
    _, four, _ = run(capsys, "--threads", "4", *base)
    assert one["results"] == four["results"]
    assert one["results"]["degR"] == 72 == one["results"]["degR_pointwise"]


def test_verify_cor12(capsys):
    code, rep, _ = run(capsys, "verify-cor12", "--family", "hermitian", "--q", "3")
    assert code == 0 and rep["results"]["holds"] and rep["results"]["sampled"] >= 20


def test_classify_points(capsys):
    code, rep, _ = run(capsys, "classify-points", "--family", "artin_schreier", "--q", "5", "--m", "3")
    t = rep["results"]["types"]
    assert (t["T1"], t["T2"], t["w2"]) == (60, 6, 2)
    assert rep["results"]["star_star"]["m_candidates"] == [3]


def test_normal_form(capsys):
    code, rep, _ = run(capsys, "normal-form", "--a1", "1", "--aq", "1", "--m", "3", "--q", "5")
    assert code == 0 and rep["results"]["identity_verified"] and rep["results"]["congruence_holds"]


def test_theorem31(capsys):
    code, rep, _ = run(capsys, "theorem31", "--q", "5")
    assert code == 0 and rep["results"]["all_hold"] and rep["results"]["count"] == 66


def test_example16_cli(capsys):
    code, rep, _ = run(capsys, "example16")
    res = rep["results"]
    assert code == 0
    assert (res["count"], res["degR"], res["nonrational_dw_points"]) == (118, 164, 40)


def test_reports_are_deterministic(capsys):
    argv = ["classify-points", "--family", "artin_schreier", "--q", "3", "--m", "2"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)


def test_console_script():
    exe = shutil.which("maxcurve")
    cmd = [exe] if exe else [sys.executable, "-m", "maxcurve.cli"]
    proc = subprocess.run(cmd + ["semigroup", "--gens", "2,5"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["gaps"] == [1, 3]
    proc = subprocess.run(cmd + ["bounds"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""
