import json

import pytest

from rkpairs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExitCodes:
    def test_proven_is_zero(self, capsys):
        code, _, _ = run(capsys, "total-sieve", "10009", "9")
        assert code == 0

    def test_not_proven_is_one(self, capsys):
        code, _, _ = run(capsys, "total-sieve", "7", "7")
        assert code == 1

    def test_borderline_or_indeterminate_is_two(self, capsys):
        code, _, _ = run(capsys, "total-sieve", "1000033", "7", "--budget", "10")
        assert code == 2

    def test_usage_error_is_three(self, capsys):
        code, _, err = run(capsys, "search", "7", "7", "2", "2", "3", "1", "--f", "x*(x+%")
        assert code == 3
        assert "position" in err

    def test_check_theorem_false(self, capsys):
        code, _, _ = run(capsys, "check-theorem", "5", "12", "--t", "8")
        assert code == 1


class TestJsonOutput:
    def test_byte_identical_replay(self, capsys):
        _, out1, _ = run(capsys, "total-sieve", "10009", "9", "--json")
        _, out2, _ = run(capsys, "total-sieve", "10009", "9", "--json")
        assert out1 == out2

    def test_schema_and_seed_fields(self, capsys):
        _, out, _ = run(capsys, "check-theorem", "13", "100", "--json", "--seed", "3")
        doc = json.loads(out)
        assert doc["schema"] == 1 and doc["seed"] == 3
        assert doc["verdict"] == "true"

    def test_search_manifest_includes_field(self, capsys):
        code, out, _ = run(capsys, "search", "7", "7", "2", "2", "3", "1",
                           "--f", "x*(x+1)", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["field"]["p"] == 7 and doc["field"]["n"] == 7
        assert doc["results"][0]["witness"]["exponent"] == 18364

    def test_identical_seed_same_bytes_for_search(self, capsys):
        _, a, _ = run(capsys, "search", "5", "1", "1", "0", "1", "0", "--f", "x", "--json")
        _, b, _ = run(capsys, "search", "5", "1", "1", "0", "1", "0", "--f", "x", "--json")
        assert a == b


class TestDryRun:
    @pytest.mark.parametrize("argv", [
        ("sweep", "9", "--q-bound", "100", "--dry-run"),
        ("casen7", "--dry-run"),
        ("total-sieve", "7", "7", "--dry-run"),
        ("search", "7", "7", "2", "2", "3", "1", "--dry-run"),
        ("bound-sieve", "10000", "585229", "9", "17", "--dry-run"),
    ])
    def test_plans_exit_zero(self, capsys, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert "plan" in out


class TestSubcommands:
    def test_factor_xn1(self, capsys):
        code, out, _ = run(capsys, "factor-xn1", "5", "8", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["distinct"] == 6 and doc["W"] == 64

    def test_field_info(self, capsys):
        code, out, _ = run(capsys, "field-info", "3", "2", "2", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["field"]["p"] == 3 and doc["field"]["m"] == 2

    def test_bound_sieve_checkpoint(self, capsys):
        code, out, _ = run(capsys, "bound-sieve", "10000", "4413000000", "9", "19", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["B"] is True
        assert 10 ** doc["q_new"]["log10"] < 585229

    def test_bound_sieve_variant_flags(self, capsys):
        code, out, _ = run(capsys, "bound-sieve", "1000000000", "1781000000", "8", "29",
                           "--variant", "nine_divides", "--json")
        doc = json.loads(out)
        assert code == 0 and 10 ** doc["q_new"]["log10"] < 1.572e9

    def test_bad_variant_rejected(self, capsys):
        code, _, err = run(capsys, "bound-sieve", "1", "2", "8", "29", "--variant", "bogus")
        assert code == 3

    def test_global_bound(self, capsys):
        code, out, _ = run(capsys, "global-bound", "10009", "89", "6.18e718", "--json")
        doc = json.loads(out)
        assert code == 0
        assert abs(doc["output"]["log10"] - 190.06) < 0.5

    def test_table1(self, capsys):
        code, out, _ = run(capsys, "table1", "--json")
        doc = json.loads(out)
        assert code == 0 and len(doc["rows"]) == 4 and all(r["holds"] for r in doc["rows"])

    def test_verify_identities(self, capsys):
        code, out, _ = run(capsys, "verify-identities", "5", "1", "3", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["verdict"] == "pass"

    def test_chars_selftest(self, capsys):
        code, out, _ = run(capsys, "chars-selftest", "3", "1", "2", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["max_deviation"]["omega"] < 1e-6

    def test_sweep_with_checkpoint(self, capsys, tmp_path):
        ck = tmp_path / "cells.jsonl"
        code, out, _ = run(capsys, "sweep", "9", "--q-bound", "600", "--json",
                           "--checkpoint", str(ck))
        doc = json.loads(out)
        assert doc["cells"] > 0
        lines = [json.loads(line) for line in ck.read_text().splitlines()]
        assert len(lines) == doc["cells"]
        assert all(rec["n"] == 9 and rec["verdict"] in ("proven", "not_proven") for rec in lines)
        # resume leaves the file untouched
        before = ck.read_text()
        run(capsys, "sweep", "9", "--q-bound", "600", "--json", "--checkpoint", str(ck))
        assert ck.read_text() == before

    def test_csv_mode(self, capsys):
        code, out, _ = run(capsys, "factor-xn1", "7", "3", "--csv")
        lines = out.strip().splitlines()
        assert lines[0].startswith("factor,") and len(lines) == 4
