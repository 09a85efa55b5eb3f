import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from treedens.cli import run

DATA = Path(__file__).parent / "data"


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_estimate_csv_shape(capsys):
    code, out, err = _capture(
        capsys,
        [
            "estimate", "--family", "harmonic-zipf", "--k", "8", "--n", "100",
            "--estimator", "greedy-binary", "--seed", "1",
        ],
    )
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0] == "x,value"
    assert len(lines) == 9


def test_estimate_json_record(capsys):
    code, out, _ = _capture(
        capsys,
        [
            "estimate", "--family", "harmonic-zipf", "--k", "64", "--n", "1000",
            "--estimator", "greedy-binary", "--seed", "7", "--format", "json",
        ],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["tree"]["arity"] == 2
    assert payload["estimate"]["domain_k"] == 64
    assert 0.9 < payload["mass"] <= 1.0 + 1e-9
    assert {p["kind"] for p in payload["estimate"]["pieces"]} == {"constant"}


def test_estimate_byte_identical_reruns(tmp_path):
    argv = [
        "estimate", "--family", "harmonic-zipf", "--k", "64", "--n", "1000",
        "--estimator", "greedy-binary", "--seed", "7",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_estimate_idealized_seed_independent(capsys):
    outs = []
    for seed in ("7", "99"):
        code, out, _ = _capture(
            capsys,
            [
                "estimate", "--family", "harmonic-zipf", "--k", "64", "--n", "1000",
                "--estimator", "idealized-binary", "--seed", seed, "--format", "json",
            ],
        )
        assert code == 0
        outs.append(json.loads(out))
    assert outs[0]["tree"] == outs[1]["tree"]
    assert outs[0]["estimate"] == outs[1]["estimate"]


def test_simulate_golden_file(tmp_path):
    out = tmp_path / "risk.csv"
    code = run(
        [
            "simulate", "--estimator", "greedy-binary+monotonize",
            "--family", "harmonic-zipf", "--k", "64",
            "--n-grid", "100,400,1600", "--reps", "20", "--seed", "1",
            "--out", str(out),
        ]
    )
    assert code == 0
    assert out.read_bytes() == (DATA / "simulate_golden.csv").read_bytes()


def test_simulate_single_n(capsys):
    code, out, _ = _capture(
        capsys,
        [
            "simulate", "--estimator", "oracle", "--family", "uniform",
            "--k", "4", "--n", "50", "--reps", "3", "--seed", "0",
        ],
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,k,mean_tv,std_error,reps,seed"
    assert lines[1].startswith("50,4,0.0,")


def test_simulate_threads_flag(capsys):
    argv = [
        "simulate", "--estimator", "greedy-binary", "--family", "harmonic-zipf",
        "--k", "16", "--n", "200", "--reps", "8", "--seed", "5",
    ]
    _, out1, _ = _capture(capsys, argv + ["--threads", "1"])
    _, out8, _ = _capture(capsys, argv + ["--threads", "8"])
    assert out1 == out8


def test_rates_output(capsys):
    code, out, _ = _capture(capsys, ["rates", "--class", "monotone", "--n", "64", "--k", "32"])
    assert code == 0
    header, row = out.splitlines()
    assert header == "class,n,k,branch,value"
    cls, n, k, branch, value = row.split(",")
    assert (cls, n, k, branch) == ("monotone", "64", "32", "mid-k")
    assert float(value) == pytest.approx((3 / 64) ** (1 / 3), rel=1e-12)


def test_rates_convex_json(capsys):
    code, out, _ = _capture(
        capsys, ["rates", "--class", "convex", "--n", "1000000", "--k", "2", "--format", "json"]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["branch"] == "small-k"
    assert payload["value"] == pytest.approx(math.sqrt(2e-6), rel=1e-12)


def test_assouad_json(capsys):
    code, out, _ = _capture(
        capsys,
        ["assouad", "--regime", "monotone-small-k", "--n", "1000000", "--k", "64", "--format", "json"],
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["r"] == 32
    assert len(payload["theta"]) == 32
    assert payload["lower_bound"] >= 0.0
    assert len(payload["density"]["mass"]) == 64
    assert sum(payload["density"]["mass"]) == pytest.approx(1.0, abs=1e-9)


def test_assouad_theta_forms(capsys):
    base = ["assouad", "--regime", "convex-small-k", "--n", "1000000", "--k", "9", "--format", "json"]
    _, ones, _ = _capture(capsys, base + ["--theta", "ones"])
    _, bits, _ = _capture(capsys, base + ["--theta", "111"])
    assert json.loads(ones)["density"] == json.loads(bits)["density"]


def test_assouad_csv_is_density(capsys):
    code, out, _ = _capture(
        capsys, ["assouad", "--regime", "convex-small-k", "--n", "1000000", "--k", "9"]
    )
    assert code == 0
    assert out.splitlines()[0] == "index,mass"
    assert len(out.splitlines()) == 10


def test_assouad_out_of_regime_is_runtime_error(capsys):
    code, out, err = _capture(
        capsys, ["assouad", "--regime", "monotone-large-k", "--n", "1000000", "--k", "100"]
    )
    assert code == 1
    assert out == ""
    assert "treedens assouad" in err


def test_assouad_r_without_epsilon_rejected(capsys):
    code, _, err = _capture(
        capsys,
        ["assouad", "--regime", "convex-small-k", "--n", "100", "--k", "9", "--r", "3"],
    )
    assert code == 1
    assert "--epsilon" in err


def test_vc_csv(capsys):
    code, out, _ = _capture(capsys, ["vc", "--ell", "2", "--m", "8"])
    assert code == 0
    assert out == "ell,m,vc\n2,8,4\n"


def test_mde_selects_truth(capsys):
    code, out, _ = _capture(
        capsys,
        [
            "mde", "--candidates", "uniform,harmonic-zipf,trunc-geometric:0.5",
            "--family", "harmonic-zipf", "--k", "16", "--n", "500", "--seed", "3",
        ],
    )
    assert code == 0
    assert out.splitlines()[1].split(",")[1] == "harmonic-zipf"


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["rates", "--class", "monotone", "--n", "64"])  # --k missing
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["estimate", "--family", "uniform", "--k", "4", "--n", "0",
             "--estimator", "oracle"])
    assert exc.value.code == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-c", "from treedens.cli import main; main()", "vc", "--ell", "1", "--m", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "ell,m,vc\n1,4,2\n"
