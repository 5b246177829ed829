import subprocess
import sys
from pathlib import Path

import pytest

from jacobi_stable_lab.cli import load_config, main
from jacobi_stable_lab.convergence_lab import ConfigError

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_CONFIG = """
[target]
f = abs
[basis]
gamma = 0
delta = 0
[method]
descriptor = cesaro:phi=1
[process]
alpha = 2
grid_size = 64
[monte_carlo]
paths = {paths}
epsilon = 0.1
n_schedule = 4,8
seed = 11
"""


def write_config(tmp_path, name="small.cfg", paths=150, extra=""):
    path = tmp_path / name
    path.write_text(SMALL_CONFIG.format(paths=paths) + extra)
    return path


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestCoeffs:
    def test_identity(self, capsys):
        code, out, err = run(["coeffs", "--f", "identity", "--N", "3", "--gamma", "0", "--delta", "0"], capsys)
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()]
        assert rows[0] == ["n", "a_n"]
        values = [float(v) for _, v in rows[1:]]
        assert abs(values[1] - 0.81650) < 1e-5
        assert all(abs(values[k]) < 1e-14 for k in (0, 2, 3))
        assert "quadrature nodes: 64" in err

    def test_one(self, capsys):
        code, out, _ = run(["coeffs", "--f", "one", "--N", "2"], capsys)
        values = [float(line.split(",")[1]) for line in out.splitlines()[1:]]
        assert abs(values[0] - 2**0.5) < 1e-14 and all(abs(v) < 1e-14 for v in values[1:])

    def test_negative_order(self, capsys):
        code, _, err = run(["coeffs", "--f", "one", "--N", "-1"], capsys)
        assert code == 2

    def test_unknown_function_lists_catalog(self, capsys):
        code, _, err = run(["coeffs", "--f", "wiggle", "--N", "3"], capsys)
        assert code == 2
        assert "sqrt1my" in err

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "a.csv"
        code, out, _ = run(["coeffs", "--f", "abs", "--N", "4", "--out", str(target)], capsys)
        assert code == 0 and target.read_text() == out


class TestTheta:
    def test_rows(self, capsys):
        code, out, _ = run(["theta", "--method", "cesaro:phi=1", "--n", "4"], capsys)
        assert code == 0
        assert out.splitlines()[3] == "4: 1 0.75 0.5 0.25"

    def test_sum(self, capsys):
        code, out, _ = run(["theta", "--method", "cesaro:phi=1", "--n", "5", "--f", "one", "--y", "0.3"], capsys)
        assert code == 0
        assert float(out.splitlines()[-1].split(":")[-1]) == pytest.approx(1.0, abs=1e-14)

    def test_partial_sum_method_rejected(self, capsys):
        code, _, _ = run(["theta", "--method", "norlund:p=one"], capsys)
        assert code == 2


class TestConditions:
    def test_cesaro(self, capsys):
        code, out, _ = run(["conditions", "--method", "cesaro:phi=1"], capsys)
        assert code == 0
        lines = {line.split()[0]: line.split()[1] for line in out.splitlines()[1:]}
        assert lines["A"] == "holds" and lines["B"] == "holds"

    def test_identity(self, capsys):
        _, out, _ = run(["conditions", "--method", "identity"], capsys)
        lines = {line.split()[0]: line.split()[1] for line in out.splitlines()[1:]}
        assert lines["T2"] == "fails"

    def test_rogosinski(self, capsys):
        _, out, _ = run(["conditions", "--method", "rogosinski"], capsys)
        lines = {line.split()[0]: line.split()[1] for line in out.splitlines()[1:]}
        assert [lines[t] for t in ("T1", "T2", "T3")] == ["holds"] * 3

    def test_matrix_file_error_has_line(self, capsys, tmp_path):
        bad = tmp_path / "m.txt"
        bad.write_text("1\n0.5 zero\n")
        code, _, err = run(["conditions", "--method", f"matrix:file={bad}"], capsys)
        assert code == 2
        assert ":2:" in err

    def test_unknown_method(self, capsys):
        code, _, _ = run(["conditions", "--method", "fejer"], capsys)
        assert code == 2


class TestSimulate:
    def test_stdout(self, capsys):
        code, out, _ = run(["simulate", "--alpha", "1.5", "--G", "8", "--seed", "3"], capsys)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "# alpha=1.5 seed=3 G=8" and len(lines) == 10

    def test_out_and_integrand(self, capsys, tmp_path):
        target = tmp_path / "p.txt"
        code, _, err = run(["simulate", "--G", "16", "--out", str(target), "--integrand", "one"], capsys)
        assert code == 0 and target.exists()
        assert "integral of one" in err

    def test_bad_alpha(self, capsys):
        code, _, _ = run(["simulate", "--alpha", "0.5"], capsys)
        assert code == 2


class TestExperiment:
    def test_writes_outputs(self, capsys, tmp_path):
        cfg = write_config(tmp_path)
        code, out, _ = run(["experiment", str(cfg), "--out", str(tmp_path), "--plot"], capsys)
        assert code == 0
        csv = (tmp_path / "small.csv").read_text()
        assert csv == out
        assert csv.splitlines()[0] == "n,p_hat,wilson_lo,wilson_hi,M,epsilon,mode"
        assert "parameter gate" in (tmp_path / "small.gate.txt").read_text()
        assert (tmp_path / "small.svg").read_text().startswith("<svg")

    def test_replay_byte_identical(self, capsys, tmp_path):
        cfg = write_config(tmp_path)
        first, second = tmp_path / "a", tmp_path / "b"
        assert run(["experiment", str(cfg), "--out", str(first)], capsys)[0] == 0
        assert run(["experiment", str(cfg), "--out", str(second), "--threads", "3"], capsys)[0] == 0
        assert (first / "small.csv").read_bytes() == (second / "small.csv").read_bytes()

    def test_too_few_paths(self, capsys, tmp_path):
        cfg = write_config(tmp_path, paths=10)
        code, _, err = run(["experiment", str(cfg), "--out", str(tmp_path)], capsys)
        assert code == 3
        assert "M >= 100 required" in err
        assert not (tmp_path / "small.csv").exists()

    def test_unknown_key(self, capsys, tmp_path):
        cfg = write_config(tmp_path, extra="colour = blue\n")
        code, _, err = run(["experiment", str(cfg)], capsys)
        assert code == 3 and "colour" in err

    def test_seed_environment_override(self, monkeypatch, tmp_path):
        cfg = write_config(tmp_path)
        assert load_config(cfg).seed == 11
        monkeypatch.setenv("JSL_SEED", "99")
        assert load_config(cfg).seed == 99
        monkeypatch.setenv("JSL_SEED", "x")
        with pytest.raises(ConfigError):
            load_config(cfg)

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(["experiment", str(tmp_path / "none.cfg")], capsys)
        assert code == 3

    @pytest.mark.parametrize("name", ["cesaro_gaussian.cfg", "norlund_cauchy.cfg"])
    def test_bundled_configs_parse(self, name):
        cfg = load_config(CONFIGS / name)
        assert cfg.paths == 2000


class TestProbe:
    def test_probe(self, capsys):
        code, out, err = run(["probe", "--f", "abs", "--method", "cesaro:phi=1", "--schedule", "8,16"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "n,weighted_sup_error"
        assert "parameter gate" in err


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "jacobi_stable_lab", "coeffs", "--f", "one", "--N", "1"], capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout.startswith("n,a_n")


def test_no_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
