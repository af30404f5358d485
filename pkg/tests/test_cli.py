"""End-to-end tests of the command-line interface and its file formats."""

import json
import math

import numpy as np
import pytest

from seqalloc.cli import EXIT_IO, EXIT_OK, EXIT_OVERSIZED, EXIT_VERIFY, main


@pytest.fixture
def example_instance(tmp_path):
    path = tmp_path / "instance.json"
    path.write_text(json.dumps({"mode": "powers", "N": 2, "demands": [2.0, 2.0, 3.0, 1.0]}))
    return path


def run(argv):
    return main([str(a) for a in argv])


class TestDesign:
    def test_reference_instance(self, example_instance, tmp_path, capsys):
        out = tmp_path / "result.json"
        assert run(["design", example_instance, "-o", out]) == EXIT_OK
        result = json.loads(out.read_text())
        assert result["distinct_count"] == 2
        assert result["N"] == 2
        assert len(result["S"]) == 2 and len(result["S"][0]) == 4
        assert [rec["case"] for rec in result["trace"]] == ["2a", "2b", "2a", "2b"]
        assert result["verification"]["violating_subset"] is None
        # rates default to bits at the boundary
        want_bits = 0.5 * math.log(9.0) / math.log(2.0)
        assert abs(sum(result["r"]) - want_bits) < 1e-10

    def test_nats_units_round_trip(self, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(
            json.dumps({"mode": "rates", "N": 2, "demands": [0.3, 0.3, 0.2, 0.2], "units": "nats"})
        )
        out = tmp_path / "res.json"
        assert run(["design", path, "-o", out]) == EXIT_OK
        result = json.loads(out.read_text())
        assert abs(sum(result["p"]) - math.expm1(2.0)) < 1e-9
        assert result["r"] == [0.3, 0.3, 0.2, 0.2]

    def test_order_flag_preserves_total(self, example_instance, tmp_path):
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        assert run(["design", example_instance, "-o", out_a]) == EXIT_OK
        assert run(["design", example_instance, "--order", "reverse", "-o", out_b]) == EXIT_OK
        ra = json.loads(out_a.read_text())["r"]
        rb = json.loads(out_b.read_text())["r"]
        assert abs(sum(ra) - sum(rb)) < 1e-10

    def test_deterministic_bytes(self, example_instance, tmp_path):
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        run(["design", example_instance, "-o", out_a, "--seed", "7"])
        run(["design", example_instance, "-o", out_b, "--seed", "7"])
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(["design", path]) == EXIT_IO

    def test_schema_violations(self, tmp_path):
        cases = [
            {"mode": "junk", "N": 2, "demands": [1.0]},
            {"mode": "powers", "N": 0, "demands": [1.0]},
            {"mode": "powers", "N": 2, "demands": []},
            {"mode": "powers", "N": 2, "demands": [1.0, -2.0]},
            {"mode": "rates", "N": 2, "demands": [0.1], "units": "furlongs"},
        ]
        for i, payload in enumerate(cases):
            path = tmp_path / f"bad{i}.json"
            path.write_text(json.dumps(payload))
            assert run(["design", path]) == EXIT_IO, payload

    def test_oversized_refusal_and_peel(self, tmp_path):
        path = tmp_path / "over.json"
        path.write_text(json.dumps({"mode": "powers", "N": 2, "demands": [3.0, 1.0]}))
        assert run(["design", path]) == EXIT_OVERSIZED
        out = tmp_path / "res.json"
        assert run(["design", path, "--peel-oversized", "-o", out]) == EXIT_OK
        result = json.loads(out.read_text())
        s = np.asarray(result["S"])
        assert abs(float(s[:, 0] @ s[:, 1])) < 1e-12

    def test_float_round_trip_is_lossless(self, example_instance, tmp_path):
        out = tmp_path / "res.json"
        run(["design", example_instance, "-o", out])
        result = json.loads(out.read_text())
        reparsed = json.loads(json.dumps(result))
        assert reparsed == result


class TestVerifyCommand:
    def test_fresh_result_passes(self, example_instance, tmp_path):
        out = tmp_path / "res.json"
        run(["design", example_instance, "-o", out])
        assert run(["verify", out]) == EXIT_OK

    def test_exhaustive_flag_counts_all_subsets(self, example_instance, tmp_path, capsys):
        out = tmp_path / "res.json"
        run(["design", example_instance, "-o", out])
        capsys.readouterr()
        assert run(["verify", out, "--exhaustive"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["subsets_checked"] == 15

    def test_corrupted_rate_fails_with_subset(self, example_instance, tmp_path, capsys):
        out = tmp_path / "res.json"
        run(["design", example_instance, "-o", out])
        result = json.loads(out.read_text())
        result["r"][0] += 0.2
        out.write_text(json.dumps(result))
        capsys.readouterr()
        assert run(["verify", out]) == EXIT_VERIFY
        report = json.loads(capsys.readouterr().out)
        assert 0 in report["violating_subset"]

    def test_missing_file(self, tmp_path):
        assert run(["verify", tmp_path / "nope.json"]) == EXIT_IO

    def test_exhaustive_sixteen_users(self, tmp_path, capsys):
        path = tmp_path / "sixteen.json"
        path.write_text(json.dumps({"mode": "powers", "N": 4, "demands": [0.5] * 16}))
        out = tmp_path / "res.json"
        assert run(["design", path, "-o", out]) == EXIT_OK
        capsys.readouterr()
        assert run(["verify", out, "--exhaustive"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["subsets_checked"] == 65535


class TestSplitCommand:
    def test_reference_powers_no_split(self, example_instance, capsys):
        assert run(["split", example_instance]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["K_prime"] == 4
        assert report["splits"] == []
        assert report["subsets"] == [[0, 1], [2, 3]]
        assert abs(report["sum_rate"] - report["optimum_rate"]) < 1e-10

    def test_split_occurs(self, tmp_path, capsys):
        path = tmp_path / "inst.json"
        path.write_text(
            json.dumps({"mode": "rates", "N": 2, "demands": [3.0, 3.0, 2.0], "units": "nats"})
        )
        assert run(["split", path]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["K_prime"] == 4
        assert len(report["splits"]) == 1
        assert report["splits"][0]["user"] == 1

    def test_single_dimension(self, tmp_path, capsys):
        path = tmp_path / "inst.json"
        path.write_text(json.dumps({"mode": "powers", "N": 1, "demands": [1.0, 2.0]}))
        assert run(["split", path]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["subsets"] == [[0, 1]]
        assert report["splits"] == []


class TestNecessityCommand:
    def test_small_gain(self, capsys):
        assert run(["demo-necessity", "--N", "2"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["lam_forced"] == 5.0
        assert report["lam_cap"] == 4.0
        assert report["rate_gap"] > 0
        assert report["power_gap"] > 0

    def test_large_gain(self, capsys):
        assert run(["demo-necessity", "--N", "8"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["rate_gap"] > 0

    def test_refuses_n_below_two(self, capsys):
        assert run(["demo-necessity", "--N", "1"]) == EXIT_IO
