"""End-to-end command line behaviour, including exit codes and replay."""

import json
import os
import subprocess
import sys

CLI = [sys.executable, "-m", "twistedzhu.cli"]


def run_cli(*args, **kw):
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          **kw)


def test_usage_errors_exit_64():
    assert run_cli().returncode == 64
    assert run_cli("verify").returncode == 64
    assert run_cli("verify", "no-such-check").returncode == 64
    assert run_cli("verify", "thm-twisted-zhu", "--n", "x/y").returncode == 64
    assert run_cli("verify", "thm-twisted-zhu", "--T", "1",
                   "--g1", "neg").returncode == 64
    assert run_cli("verify", "thm-twisted-zhu", "--voa", "virasoro",
                   "--g1", "neg").returncode == 64
    assert run_cli("certify", "/no/such/file.json").returncode == 64


def test_zhu_basis_prints_weights_and_representatives():
    res = run_cli("zhu-basis", "--T", "2", "--g1", "neg", "--n", "1/2",
                  "--cutoff", "4", "--slack", "2")
    assert res.returncode == 0
    assert "weight 0: dim 1" in res.stdout
    assert "a[-1]a[-1]|1>" in res.stdout


def test_bimodule_dims_prints_both_quotients():
    res = run_cli("bimodule-dims", "--T", "2", "--g1", "neg", "--n", "1/2",
                  "--m", "0", "--cutoff", "4", "--slack", "2")
    assert res.returncode == 0
    assert "W/O-dagger" in res.stdout and "W/O-prime" in res.stdout


def test_verify_writes_report_and_exits_zero(tmp_path):
    report_path = str(tmp_path / "report.json")
    res = run_cli("verify", "prop-two-right-actions", "--T", "2", "--g1",
                  "neg", "--n", "1/2", "--m", "0", "--weight-cap", "2",
                  "--report", report_path)
    assert res.returncode == 0
    assert "prop-two-right-actions: pass" in res.stdout
    with open(report_path, encoding="utf-8") as fh:
        report = json.load(fh)
    assert report["status"] == "pass"
    assert report["params"]["g1"] == "neg"


def test_verify_reports_identical_across_processes(tmp_path):
    paths = [str(tmp_path / f"r{i}.json") for i in (1, 2)]
    for p in paths:
        res = run_cli("verify", "congruence-relation", "--T", "2", "--g1",
                      "neg", "--n", "1/2", "--m", "0", "--weight-cap", "2",
                      "--report", p)
        assert res.returncode == 0
    blobs = []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            data = json.load(fh)
        data.pop("timing_ms")
        blobs.append(json.dumps(data, sort_keys=True))
    assert blobs[0] == blobs[1]


def test_certify_round_trip_in_fresh_process(tmp_path):
    cert_dir = str(tmp_path / "certs")
    res = run_cli("verify", "dj-conjecture", "--T", "2", "--g1", "neg",
                  "--n", "1/2", "--m", "0", "--param-cap", "1",
                  "--weight-cap", "2", "--cert-dir", cert_dir)
    assert res.returncode == 0
    files = [os.path.join(cert_dir, f) for f in sorted(os.listdir(cert_dir))]
    assert len(files) == 1 and files[0].endswith("dj-conjecture-n1_2-m0.json")
    res2 = run_cli("certify", files[0])
    assert res2.returncode == 0
    assert "failed=0" in res2.stdout

    # a perturbed coefficient must be rejected with a located failure
    with open(files[0], encoding="utf-8") as fh:
        env = json.load(fh)
    for cert in env["certificates"]:
        if cert["terms"]:
            num, den = cert["terms"][0]["coefficient"]["poly"][0]
            cert["terms"][0]["coefficient"]["poly"][0] = \
                [str(int(num) + 1), den]
            break
    bad_path = str(tmp_path / "mutated.json")
    with open(bad_path, "w", encoding="utf-8") as fh:
        json.dump(env, fh)
    res3 = run_cli("certify", bad_path)
    assert res3.returncode == 1
    assert "mismatch" in res3.stdout
    assert "first failure" in res3.stdout


def test_certificate_files_are_deterministic(tmp_path):
    dirs = [str(tmp_path / d) for d in ("a", "b")]
    for d in dirs:
        res = run_cli("verify", "dj-conjecture", "--T", "2", "--g1", "neg",
                      "--n", "1/2", "--m", "0", "--param-cap", "1",
                      "--weight-cap", "2", "--cert-dir", d)
        assert res.returncode == 0
    names = [sorted(os.listdir(d)) for d in dirs]
    assert names[0] == names[1]
    for name in names[0]:
        with open(os.path.join(dirs[0], name), "rb") as fh:
            blob_a = fh.read()
        with open(os.path.join(dirs[1], name), "rb") as fh:
            blob_b = fh.read()
        assert blob_a == blob_b
