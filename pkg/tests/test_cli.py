"""Tests for the command-line interface, formats, and config loading."""
from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from msdsim.cli import (
    ConfigError,
    check_row,
    fmt_pout,
    fmt_sig,
    load_config,
    main,
    parse_int_triple,
    parse_noise_spec,
    reports_from_csv,
    reports_to_csv,
    round_sig,
    row_config,
    TABLE1,
    TABLE2,
)
from msdsim.factory import FactoryConfig, simulate_factory
from msdsim.noise import DistanceSet, PhysicalNoise


class TestDisplayRounding:
    def test_round_sig(self):
        assert round_sig(14628.585, 3) == 14600
        assert round_sig(18.0599, 3) == 18.1
        assert round_sig(0.0, 3) == 0.0
        assert round_sig(4.331820452545726e-08, 2) == 4.3e-08

    def test_fmt_sig(self):
        assert fmt_sig(14628.585) == "14,600"
        assert fmt_sig(18.0599) == "18.1"
        assert fmt_sig(90.366) == "90.4"
        assert fmt_sig(468.326) == "468"
        assert fmt_sig(1262641.15) == "1,260,000"

    def test_fmt_pout(self):
        assert fmt_pout(4.331820452545726e-08) == "4.3e-08"
        assert fmt_pout(8.192460937670754e-25) == "8.2e-25"


class TestArgumentParsing:
    def test_noise_spec(self):
        spec = parse_noise_spec("z:1e-4")
        assert (spec.kind, spec.value) == ("z_only", 1e-4)
        spec = parse_noise_spec("pauli:0.001")
        assert (spec.kind, spec.value) == ("random_pauli", 0.001)
        spec = parse_noise_spec("coherent:0.01")
        assert (spec.kind, spec.value) == ("coherent", 0.01)

    def test_noise_spec_errors(self):
        for bad in ("z", "w:1e-4", "z:abc", "1e-4"):
            with pytest.raises(ValueError):
                parse_noise_spec(bad)

    def test_int_triple(self):
        assert parse_int_triple("9,3,3", "--d") == (9, 3, 3)
        for bad in ("9,3", "9,3,3,3", "a,3,3"):
            with pytest.raises(ValueError):
                parse_int_triple(bad, "--d")


class TestCsvRoundTrip:
    def test_fields_survive(self):
        reports = [
            simulate_factory(FactoryConfig(
                "L1_15to1", DistanceSet(7, 3, 3), PhysicalNoise(1e-4))),
            simulate_factory(FactoryConfig(
                "L2_15xCCZ", DistanceSet(7, 3, 3, 15, 7, 9, 4),
                PhysicalNoise(1e-4))),
        ]
        parsed = reports_from_csv(reports_to_csv(reports))
        assert len(parsed) == len(reports)
        for row, report in zip(parsed, reports):
            assert row["protocol"] == report.protocol
            assert row["d_full_100"] == report.d_full_100
            assert row["d_full_10k"] == report.d_full_10k
            for field in ("p_phys", "p_out", "qubits", "cycles",
                          "qubitcycles_per_state", "cost_d3_100",
                          "cost_d3_10k"):
                np.testing.assert_allclose(row[field],
                                           getattr(report, field),
                                           rtol=1e-12)

    def test_header_is_exact(self):
        text = reports_to_csv([])
        assert text.splitlines()[0] == (
            "protocol,p_phys,p_out,qubits,cycles,qubitcycles_per_state,"
            "d_full_100,cost_d3_100,d_full_10k,cost_d3_10k"
        )

    def test_parse_rejects_malformed(self):
        with pytest.raises(ValueError):
            reports_from_csv("nonsense,header\n")
        good = reports_to_csv([])
        with pytest.raises(ValueError):
            reports_from_csv(good + "only,three,fields\n")
        with pytest.raises(ValueError):
            reports_from_csv("")


class TestLoadConfig:
    def _write(self, tmp_path, text):
        path = tmp_path / "protocols.json"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_defaults_and_overrides(self, tmp_path):
        path = self._write(tmp_path, json.dumps({
            "defaults": {"p_phys": 1e-4, "c_t": 2.0},
            "protocols": [
                {"family": "l1_15to1", "d": [7, 3, 3]},
                {"family": "l2_15x15", "d": [9, 3, 3], "d2": [25, 9, 9],
                 "n_l1": 4, "p_phys": 1e-3, "c_t": 1.0,
                 "consumption_prefactor": "full"},
            ],
        }))
        configs = load_config(path)
        assert len(configs) == 2
        first, second = configs
        assert first.family == "L1_15to1"
        assert first.noise.p_phys == 1e-4
        assert first.noise.c_T == 2.0
        assert not first.consumption_prefactor_toggle
        assert second.family == "L2_15x15"
        assert second.distances.nL1 == 4
        assert second.noise.p_phys == 1e-3
        assert second.consumption_prefactor_toggle

    def test_unknown_keys_are_errors(self, tmp_path):
        path = self._write(tmp_path, json.dumps({
            "protocols": [{"family": "l1_15to1", "d": [7, 3, 3],
                           "p_phys": 1e-4, "bogus": 1}],
        }))
        with pytest.raises(ConfigError, match=r"protocols\[0\].*bogus"):
            load_config(path)
        path = self._write(tmp_path, json.dumps({
            "defaults": {"speed": 11}, "protocols": [],
        }))
        with pytest.raises(ConfigError, match="defaults.*speed"):
            load_config(path)
        path = self._write(tmp_path, json.dumps({"stuff": 1}))
        with pytest.raises(ConfigError, match="stuff"):
            load_config(path)

    def test_even_distance_is_field_error(self, tmp_path):
        path = self._write(tmp_path, json.dumps({
            "protocols": [{"family": "l1_15to1", "d": [8, 3, 3],
                           "p_phys": 1e-4}],
        }))
        with pytest.raises(ConfigError,
                           match=r"protocols\[0\].*odd integer"):
            load_config(path)

    def test_syntax_error_reports_line(self, tmp_path):
        path = self._write(tmp_path, '{\n  "protocols": [,]\n}')
        with pytest.raises(ConfigError, match=r":2:\d+"):
            load_config(path)

    def test_missing_required_fields(self, tmp_path):
        path = self._write(tmp_path, json.dumps({
            "protocols": [{"family": "l1_15to1", "d": [7, 3, 3]}],
        }))
        with pytest.raises(ConfigError, match="p_phys"):
            load_config(path)
        path = self._write(tmp_path, json.dumps({
            "protocols": [{"family": "l1_15to1", "p_phys": 1e-4}],
        }))
        with pytest.raises(ConfigError, match=r"protocols\[0\]\.d"):
            load_config(path)

    def test_type_errors(self, tmp_path):
        path = self._write(tmp_path, json.dumps({
            "protocols": [{"family": "l1_15to1", "d": [7, 3, True],
                           "p_phys": 1e-4}],
        }))
        with pytest.raises(ConfigError, match="three integers"):
            load_config(path)
        path = self._write(tmp_path, json.dumps({
            "protocols": [{"family": "l1_15to1", "d": [7, 3, 3],
                           "p_phys": 1e-4,
                           "consumption_prefactor": "most"}],
        }))
        with pytest.raises(ConfigError, match="half.*full"):
            load_config(path)


class TestMainExitCodes:
    def test_circuit_command(self, capsys):
        assert main(["circuit", "--kind", "15to1", "--noise", "z:1e-4"]) == 0
        out = capsys.readouterr().out
        assert "3.501050e-11" in out
        assert "p_fail" in out

    def test_factory_command(self, capsys):
        assert main(["factory", "--family", "l1_15to1", "--d", "7,3,3",
                     "--pphys", "1e-4"]) == 0
        out = capsys.readouterr().out
        assert "(15-to-1)_{7,3,3}" in out
        assert "4.3e-08" in out
        assert "14,600" in out

    def test_factory_json_mirrors_report(self, capsys):
        assert main(["factory", "--family", "l1_15to1", "--d", "7,3,3",
                     "--pphys", "1e-4", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        report = simulate_factory(FactoryConfig(
            "L1_15to1", DistanceSet(7, 3, 3), PhysicalNoise(1e-4)))
        assert payload[0].keys() == report.__dataclass_fields__.keys()
        np.testing.assert_allclose(payload[0]["p_out"], report.p_out,
                                   rtol=1e-12)

    def test_bad_arguments_exit_2(self, capsys):
        assert main(["circuit", "--kind", "15to1", "--noise", "zz:1"]) == 2
        assert main(["factory", "--family", "l1_15to1", "--d", "7,3",
                     "--pphys", "1e-4"]) == 2
        assert main(["factory", "--pphys", "1e-4"]) == 2
        assert main(["factory", "--family", "l1_15to1", "--d", "8,3,3",
                     "--pphys", "1e-4"]) == 2
        capsys.readouterr()

    def test_config_error_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        assert main(["factory", "--config", str(path)]) == 2
        assert main(["factory", "--config", str(tmp_path / "missing.json")]
                    ) == 2
        capsys.readouterr()

    def test_verify_command(self, capsys):
        assert main(["verify"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out

    def test_sweep_command(self, capsys):
        assert main(["sweep", "--family", "l1_15to1", "--pphys", "1e-4",
                     "--target", "1e-7", "--dx", "7,9", "--dz", "3",
                     "--dm", "3"]) == 0
        out = capsys.readouterr().out
        assert "(15-to-1)_{7,3,3}" in out

    def test_sweep_level2_requires_ranges(self, capsys):
        assert main(["sweep", "--family", "l2_15x15", "--pphys", "1e-4",
                     "--target", "1e-10", "--dx", "9", "--dz", "3",
                     "--dm", "3"]) == 2
        capsys.readouterr()


class TestTableCommand:
    def test_table2_passes_and_is_deterministic(self, capsys):
        assert main(["table", "--name", "table2"]) == 0
        first = capsys.readouterr().out
        assert main(["table", "--name", "table2"]) == 0
        second = capsys.readouterr().out
        assert first == second
        assert "FAIL" not in first
        assert first.count("PASS") == len(TABLE2)

    def test_every_row_check_passes(self):
        for row in TABLE1 + TABLE2:
            report = simulate_factory(row_config(row))
            for label, ok, detail in check_row(row, report):
                assert ok, f"{report.protocol}: {label}: {detail}"


class TestConsoleScript:
    def test_entry_point_help(self):
        result = subprocess.run(
            [sys.executable, "-m", "msdsim.cli", "--help"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        for command in ("circuit", "factory", "table", "sweep", "verify"):
            assert command in result.stdout
