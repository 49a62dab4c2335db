import json

import numpy as np
import pytest

from matrixmech.cli import build_parser, emit_csv, emit_json, main, render_json
from matrixmech.quantization import HeisenbergMatrix
from matrixmech.spectral_algebra import FrequencyTable


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEmitters:
    def test_float_format_17_digits(self):
        assert render_json(1.0 / 3.0) == "0.33333333333333331"
        assert render_json({"x": [1, True, None, "s"]}) == '{"x": [1, true, null, "s"]}'

    def test_json_round_trips(self, tmp_path):
        obj = {"a": 0.1, "b": [1.5, -2.25e-13], "c": "text"}
        path = tmp_path / "x.json"
        emit_json(path, obj)
        text = path.read_text()
        assert text.endswith("\n") and not text.endswith("\n\n")
        assert json.loads(text) == obj

    def test_empty_csv_is_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv(path, "a,b", [])
        assert path.read_text() == "a,b\n"

    def test_csv_newlines_and_format(self, tmp_path):
        path = tmp_path / "x.csv"
        emit_csv(path, "m,x", [(1, 1.0 / 3.0)])
        assert path.read_text() == "m,x\n1,0.33333333333333331\n"


class TestRitzFit:
    def test_round_trip_residual(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        terms = rng.uniform(-10, 10, size=7)
        terms -= terms[0]
        table = FrequencyTable.from_term_values(terms)
        lines = tmp_path / "lines.csv"
        rows = [
            f"{m},{n},{format(table.omega[m, n], '.17g')}"
            for m in range(7)
            for n in range(7)
            if m != n
        ]
        lines.write_text("m,n,omega\n" + "\n".join(rows) + "\n")
        out = tmp_path / "terms.json"
        code, stdout, _ = _run(capsys, "ritz-fit", "--input", str(lines), "--out", str(out))
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["residual"] <= 1e-10
        assert np.max(np.abs(np.array(payload["terms"]) - terms)) <= 1e-9
        assert "residual=" in stdout


class TestOrbitCommand:
    def test_pendulum_above_separatrix_fails_with_name(self, tmp_path, capsys):
        out = tmp_path / "orbit.csv"
        code, _, stderr = _run(
            capsys, "orbit", "--potential", "pendulum:g=1,L=1", "--energy", "5.0",
            "--out", str(out),
        )
        assert code == 1
        assert "non-oscillatory" in stderr
        assert not out.exists()

    def test_writes_samples_and_sidecar(self, tmp_path, capsys):
        out = tmp_path / "orbit.csv"
        code, stdout, _ = _run(
            capsys, "orbit", "--potential", "harmonic:M=1,omega0=1", "--energy", "0.5",
            "--samples", "256", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,q,p"
        assert len(lines) == 1 + 257
        meta = json.loads((tmp_path / "orbit.csv.json").read_text())
        assert meta["samples"] == 257
        # 256 samples x 16 substeps: period accurate to O(dt^2) ~ 1e-6
        assert meta["T"] == pytest.approx(2 * np.pi, abs=1e-5)
        assert "T=" in stdout

    def test_sample_floats_round_trip(self, tmp_path, capsys):
        out = tmp_path / "orbit.csv"
        _run(capsys, "orbit", "--potential", "quartic:lambda=0.25", "--energy", "1.0",
             "--samples", "128", "--out", str(out))
        rows = out.read_text().splitlines()[1:]
        t, q, p = zip(*(map(float, r.split(",")) for r in rows))
        energy = np.asarray(p) ** 2 / 2 + 0.25 * np.asarray(q) ** 4 / 4
        # coarse grid (128 x 16 steps per period) bounds the drift at ~1e-6
        assert np.max(np.abs(energy - 1.0)) <= 1e-5


class TestQuantizeCommand:
    def test_matrix_json_schema_round_trip(self, tmp_path, capsys):
        out = tmp_path / "q.json"
        code, _, _ = _run(
            capsys, "quantize", "--potential", "harmonic:M=1,omega0=1", "--hbar", "1",
            "--levels", "6", "--band", "2", "--convention", "upper",
            "--observable", "q", "--out", str(out),
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert sorted(obj) == ["N", "amp", "band", "convention", "energies", "hbar", "label"]
        mat = HeisenbergMatrix.from_json_obj(obj)
        assert mat.n == 6
        assert abs(mat.amp[3, 2] - np.sqrt(1.5)) <= 1e-6


class TestCcrCommand:
    ARGS = (
        "ccr", "--potential", "harmonic:M=1,omega0=1", "--hbar", "1", "--levels", "12",
        "--band", "2", "--convention", "upper",
    )

    def test_report_and_rows(self, tmp_path, capsys):
        out = tmp_path / "ccr.csv"
        code, stdout, _ = _run(capsys, *self.ARGS, "--out", str(out))
        assert code == 0
        assert "max_diag_dev=" in stdout
        value = float(stdout.split("max_diag_dev=")[1].split()[0])
        assert value <= 1e-8
        lines = out.read_text().splitlines()
        assert lines[0] == "m,re_dev,im_dev,max_offdiag_row"
        assert len(lines) == 1 + (12 - 2 * 2)

    def test_byte_identical_reruns(self, tmp_path, capsys):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        _run(capsys, *self.ARGS, "--out", str(out1))
        _run(capsys, *self.ARGS, "--out", str(out2))
        assert out1.read_bytes() == out2.read_bytes()


class TestOvertoneCommand:
    def test_prints_and_writes(self, tmp_path, capsys):
        out = tmp_path / "ot.csv"
        code, stdout, _ = _run(capsys, "overtone", "--m", "100,200", "--k", "1", "--out", str(out))
        assert code == 0
        assert stdout.count("ratio=") == 2
        lines = out.read_text().splitlines()
        assert lines[0] == "m,k,ratio,abs_dev"
        assert len(lines) == 3

    def test_domain_error_exit_code(self, capsys):
        code, _, stderr = _run(capsys, "overtone", "--m", "10", "--k", "10")
        assert code == 1
        assert "jump-out-of-range" in stderr


class TestUsage:
    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_bad_potential_spec_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["orbit", "--potential", "weird:a=1", "--energy", "1", "--out", "x.csv"])
        assert exc.value.code == 2

    @pytest.mark.parametrize(
        "command",
        ["ritz-fit", "balmer", "overtone", "orbit", "fourier", "quantize", "ccr", "correspondence"],
    )
    def test_every_subcommand_has_help(self, command, capsys):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args([command, "--help"])
        assert exc.value.code == 0
        assert "--" in capsys.readouterr().out


class TestFourierCommand:
    def test_series_json(self, tmp_path, capsys):
        out = tmp_path / "series.json"
        code, stdout, _ = _run(
            capsys, "fourier", "--potential", "harmonic:M=1,omega0=1", "--energy", "0.5",
            "--observable", "q", "--n-max", "3", "--out", str(out),
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["omega"] == pytest.approx(1.0, abs=1e-8)
        coeffs = {n: complex(re, im) for n, re, im in obj["coeffs"]}
        assert abs(coeffs[1] - 0.5) <= 1e-6
        assert "real=yes" in stdout


class TestBalmerCommand:
    def test_table_json(self, tmp_path, capsys):
        out = tmp_path / "balmer.json"
        code, stdout, _ = _run(capsys, "balmer", "--levels", "4", "--out", str(out))
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["levels"] == 4
        assert len(obj["omega"]) == 4
        assert "level i+1" in obj["note"]
        assert "worst_ritz_violation=" in stdout


class TestCorrespondenceCommand:
    def test_harmonic_run(self, tmp_path, capsys):
        out = tmp_path / "corr.csv"
        code, stdout, _ = _run(
            capsys, "correspondence", "--potential", "harmonic:M=1,omega0=1", "--hbar", "1",
            "--levels", "10", "--band", "2", "--a", "p", "--b", "q", "--ell", "0",
            "--m", "4,5", "--out", str(out),
        )
        assert code == 0
        assert stdout.count("rel_error=") == 2
        lines = out.read_text().splitlines()
        assert len(lines) == 3
        rel = float(lines[1].split(",")[-1])
        assert rel <= 1e-8
