import json

import pytest

from biheat.cli import main


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class TestParsing:
    def test_missing_command_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_unknown_command_is_usage_error(self):
        assert main(["frobnicate"]) == 2

    def test_type_mismatch_is_usage_error(self):
        assert main(["evolve", "--N", "abc"]) == 2

    def test_bad_threads_rejected(self, tmp_path):
        assert main(["kernel", "mass", "--threads", "0", "--out", str(tmp_path)]) == 2


class TestConfigFile:
    def test_config_sets_values(self, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("N = 256  # grid points\nL = 5.0\n", encoding="utf-8")
        out = tmp_path / "o"
        assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == 0
        assert read_json(out / "evolve.json")["N"] == 256

    def test_flag_wins_over_config(self, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("N = 256\n", encoding="utf-8")
        out = tmp_path / "o"
        assert (
            main(
                ["evolve", "--config", str(cfg), "--N", "128", "--out", str(out)]
            )
            == 0
        )
        assert read_json(out / "evolve.json")["N"] == 128

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("bogus = 1\n", encoding="utf-8")
        assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_type_mismatch_in_config_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("N = abc\n", encoding="utf-8")
        assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "abc" in capsys.readouterr().err

    def test_malformed_line_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("just a line\n", encoding="utf-8")
        assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 2

    def test_missing_config_file_rejected(self, tmp_path):
        assert (
            main(
                [
                    "evolve",
                    "--config",
                    str(tmp_path / "nope.txt"),
                    "--out",
                    str(tmp_path),
                ]
            )
            == 2
        )


class TestOutputs:
    def test_kernel_mass(self, tmp_path):
        assert main(["kernel", "mass", "--out", str(tmp_path)]) == 0
        payload = read_json(tmp_path / "kernel_mass.json")
        assert abs(payload["deviation"]) <= 1e-8
        assert payload["schema"] == "1"

    def test_step_analyze_schema(self, tmp_path):
        assert main(["step", "analyze", "--out", str(tmp_path)]) == 0
        payload = read_json(tmp_path / "step_analyze.json")
        assert {"k0_star", "xi_star", "k1_star", "overshoot"} <= set(payload)

    def test_manifest_lists_exactly_the_files(self, tmp_path):
        assert (
            main(
                [
                    "tychonoff",
                    "scan",
                    "--count",
                    "3",
                    "--x-min",
                    "1.0",
                    "--x-max",
                    "2.0",
                    "--out",
                    str(tmp_path),
                    "--emit-csv",
                    "--emit-svg",
                ]
            )
            == 0
        )
        manifest = read_json(tmp_path / "manifest.json")
        listed = {f["name"] for f in manifest["files"]}
        on_disk = {p.name for p in tmp_path.iterdir()} - {"manifest.json"}
        assert listed == on_disk

    def test_env_var_default_out(self, tmp_path, monkeypatch):
        target = tmp_path / "from-env"
        monkeypatch.setenv("BIHEAT_OUT", str(target))
        assert main(["kernel", "mass"]) == 0
        assert (target / "kernel_mass.json").exists()

    def test_flag_overrides_env_var(self, tmp_path, monkeypatch):
        monkeypatch.setenv("BIHEAT_OUT", str(tmp_path / "from-env"))
        explicit = tmp_path / "explicit"
        assert main(["kernel", "mass", "--out", str(explicit)]) == 0
        assert (explicit / "kernel_mass.json").exists()
        assert not (tmp_path / "from-env").exists()

    def test_unwritable_out_is_io_error(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("", encoding="utf-8")
        assert main(["kernel", "mass", "--out", str(blocker / "sub")]) == 3

    def test_tychonoff_eval_payload(self, tmp_path):
        assert (
            main(
                ["tychonoff", "eval", "--x", "1.0", "--t", "1.0", "--out", str(tmp_path)]
            )
            == 0
        )
        payload = read_json(tmp_path / "tychonoff_eval.json")
        assert payload["value"] == pytest.approx(0.33720457615863497, rel=1e-10)
        assert payload["tail_bound"] >= 0.0

    def test_invalid_scan_range_rejected(self, tmp_path):
        assert (
            main(
                [
                    "tychonoff",
                    "scan",
                    "--x-min",
                    "2.0",
                    "--x-max",
                    "1.0",
                    "--out",
                    str(tmp_path),
                ]
            )
            == 2
        )


class TestVerify:
    def test_growth_suite_exit_zero(self, tmp_path):
        assert (
            main(
                [
                    "verify",
                    "--suite",
                    "growth",
                    "--seed",
                    "7",
                    "--out",
                    str(tmp_path),
                    "--emit-csv",
                ]
            )
            == 0
        )
        payload = read_json(tmp_path / "verify_growth.json")
        assert payload["failed"] == 0
        for rep in payload["reports"]:
            assert {"name", "lhs", "rhs", "margin", "tolerance", "pass", "params", "seed"} <= set(rep)
        assert (tmp_path / "verify_growth.csv").exists()

    def test_reruns_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert (
                main(
                    [
                        "verify",
                        "--suite",
                        "uniqueness",
                        "--threads",
                        "1",
                        "--seed",
                        "7",
                        "--out",
                        str(out),
                        "--emit-csv",
                    ]
                )
                == 0
            )
        # the manifest echoes the output path, which differs by design
        for name in ("verify_uniqueness.json", "verify_uniqueness.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()
