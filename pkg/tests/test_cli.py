import json

import pytest

from qcurve import cmtables
from qcurve.cli import factor_string, main, trial_factor

from conftest import MERSENNE_127

EX1 = [
    "--d", "2",
    "--p", str(MERSENNE_127),
    "--delta", "-1",
    "--s", "28106",
    "--trace", "-272082382382015736940757543628153813996",
]


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out.splitlines()


def parse_plain(line):
    import shlex

    return dict(part.split("=", 1) for part in shlex.split(line))


class TestInfo:
    def test_small_prime_oracle_report(self, capsys):
        rc, lines = run(capsys, ["info", "--d", "2", "--p", "13", "--delta", "2", "--s", "1"])
        assert rc == 0
        rec = parse_plain(lines[0])
        assert rec["status"] == "ok"
        assert rec["order"] == "188"
        assert rec["eps"] == "1"
        assert "cm_fiber" in rec
        assert "lambda" in rec and "b1" in rec

    def test_example_parameters_report(self, capsys):
        rc, lines = run(capsys, ["info", *EX1])
        assert rc == 0
        rec = parse_plain(lines[0])
        assert rec["status"] == "ok"
        assert rec["basis_variant"] == "cofactor2_d2"
        assert rec["basis_bitlength"] == "127"
        assert rec["order_factors"].startswith("2*")
        assert rec["order_factors"].endswith("(probable_prime)")
        assert rec["twist_order_factors"].endswith("(probable_prime)")

    def test_no_trace_large_prime_omits_orders(self, capsys):
        rc, lines = run(
            capsys,
            ["info", "--d", "2", "--p", str(MERSENNE_127), "--delta", "-1", "--s", "5"],
        )
        assert rc == 0
        rec = parse_plain(lines[0])
        assert "order" not in rec and "r" not in rec
        assert rec["status"] == "ok"

    def test_wrong_trace_cross_check(self, capsys):
        rc, lines = run(
            capsys,
            ["info", "--d", "2", "--p", "13", "--delta", "2", "--s", "1", "--trace", "4"],
        )
        assert rc == 1
        rec = parse_plain(lines[0])
        assert rec["status"] == "error"
        assert "contradicts" in rec["message"]

    def test_json_mode(self, capsys):
        rc, lines = run(capsys, ["info", "--json", *EX1])
        assert rc == 0
        rec = json.loads(lines[0])
        assert rec["basis_bitlength"] == 127
        assert rec["d"] == 2

    def test_deterministic(self, capsys):
        _, first = run(capsys, ["info", "--d", "3", "--p", "11", "--delta", "-1", "--s", "2"])
        _, second = run(capsys, ["info", "--d", "3", "--p", "11", "--delta", "-1", "--s", "2"])
        assert first == second

    def test_supersingular_reported_without_basis(self, capsys):
        rc, lines = run(capsys, ["info", "--d", "5", "--p", "11", "--delta", "-1", "--s", "1"])
        assert rc == 0
        rec = parse_plain(lines[0])
        assert rec["supersingular"] == "true"
        assert rec["r"] == "0"
        assert "lambda" not in rec

    def test_supersingular_decompose_is_an_error(self, capsys):
        rc, lines = run(
            capsys,
            ["decompose", "--d", "5", "--p", "11", "--delta", "-1", "--s", "1", "--m", "3"],
        )
        assert rc == 1
        assert parse_plain(lines[0])["error"] == "supersingular"


class TestDecompose:
    def test_zero_scalar(self, capsys):
        rc, lines = run(
            capsys,
            ["decompose", "--d", "2", "--p", "13", "--delta", "2", "--s", "1", "--m", "0"],
        )
        assert rc == 0
        rec = parse_plain(lines[0])
        assert rec["a"] == "0" and rec["b"] == "0"
        assert rec["multiexp_check"] == "ok"

    def test_exhaustive_minimality(self, capsys):
        rc, lines = run(
            capsys,
            [
                "decompose", "--d", "2", "--p", "13", "--delta", "2",
                "--s", "1", "--m", "5", "--exhaustive",
            ],
        )
        assert rc == 0
        rec = parse_plain(lines[0])
        assert rec["exhaustive_minimal"].startswith("all")

    def test_cryptographic_scalar_is_short(self, capsys):
        m = str((1 << 252) + 12345)
        rc, lines = run(capsys, ["decompose", *EX1, "--m", m])
        assert rc == 0
        rec = parse_plain(lines[0])
        assert int(rec["norm_bitlength"]) <= 127
        assert int(rec["bound_bitlength"]) == 127

    def test_requires_trace_at_large_scale(self, capsys):
        rc, lines = run(
            capsys,
            [
                "decompose", "--d", "2", "--p", str(MERSENNE_127), "--delta", "-1",
                "--s", "28106", "--m", "7",
            ],
        )
        assert rc == 1
        assert parse_plain(lines[0])["status"] == "error"


class TestSearch:
    def test_sweep_counts(self, capsys):
        rc, lines = run(capsys, ["search", "--d", "2", "--p", "13", "--delta", "2"])
        assert rc == 0
        records = [parse_plain(line) for line in lines]
        assert records[-1]["records"] == "13"
        for rec in records[:-1]:
            assert rec["status"] == "ok"
            assert int(rec["order"]) + int(rec["twist_order"]) == 2 * (13**2 + 1)

    def test_cofactor_filter(self, capsys):
        rc, lines = run(
            capsys,
            ["search", "--d", "2", "--p", "13", "--delta", "2", "--cofactor", "2",
             "--twist-cofactor", "2"],
        )
        assert rc == 0
        records = [parse_plain(line) for line in lines[:-1]]
        for rec in records:
            assert rec["order_factors"].startswith("2*")
            assert rec["twist_order_factors"].startswith("2*")

    def test_empty_result_is_ok(self, capsys):
        rc, lines = run(
            capsys,
            ["search", "--d", "2", "--p", "11", "--delta", "-1", "--cofactor", "1048573"],
        )
        assert rc == 0
        assert parse_plain(lines[-1])["records"] == "0"

    def test_guard(self, capsys):
        rc, lines = run(capsys, ["search", "--d", "2", "--p", str(MERSENNE_127), "--delta", "-1"])
        assert rc == 1
        assert parse_plain(lines[0])["error"] == "oracle_guard"


class TestErrors:
    def test_square_delta_is_domain_error(self, capsys):
        rc, lines = run(capsys, ["info", "--d", "2", "--p", "13", "--delta", "3", "--s", "1"])
        assert rc == 1
        rec = parse_plain(lines[0])
        assert rec["status"] == "error"
        assert rec["error"] == "not_inert"

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["info", "--d", "2", "--p", "13"])
        assert exc.value.code == 2

    def test_composite_modulus(self, capsys):
        rc, lines = run(capsys, ["info", "--d", "2", "--p", "91", "--delta", "2", "--s", "1"])
        assert rc == 1
        assert parse_plain(lines[0])["error"] == "not_prime"


class TestTables:
    def test_dump_is_complete(self, capsys):
        rc, lines = run(capsys, ["tables", "--json"])
        assert rc == 0
        records = [json.loads(line) for line in lines]
        kinds = {}
        for rec in records:
            kinds[rec["kind"]] = kinds.get(rec["kind"], 0) + 1
        assert kinds["fiber"] == 13 + 13 + 2 + 6
        assert kinds["class_number_1"] == 13
        assert kinds["class_number_2"] == 29


class TestSelftest:
    def test_green_build_passes(self, capsys):
        rc, lines = run(capsys, ["selftest"])
        assert rc == 0
        assert parse_plain(lines[-1])["failures"] == "0"

    def test_corrupted_table_fails_by_name(self, capsys, monkeypatch):
        monkeypatch.setitem(cmtables.TABLE1, (8, 1), 20**3 + 1)
        rc, lines = run(capsys, ["selftest"])
        assert rc == 1
        failed = [parse_plain(line) for line in lines if "status=fail" in line]
        assert any(rec["check"] in ("cm_tables", "cm_detection") for rec in failed)


class TestFactoring:
    def test_trial_factor(self):
        assert trial_factor(2**4 * 3 * 101)[0] == [(2, 4), (3, 1), (101, 1)]

    def test_factor_string(self):
        assert factor_string(1) == "1"
        assert factor_string(12) == "2^2*3"
        big = (2**89 - 1) * 4  # Mersenne prime times a small cofactor
        assert factor_string(big) == f"2^2*{2**89 - 1}(probable_prime)"
