#!/usr/bin/env python3
"""End-to-end tests for the hurwitz_cli command line"""

import io
import json
import os
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout

sys.path.insert(0, os.path.dirname(__file__))

from braid_orbits import CATALOG_CSV_COLUMNS
from clm import COMPARISON_COLUMNS
from hurwitz_cli import parse_and_dispatch, parse_n_range
from hurwitz_errors import SpecFormatError
from suite_runner import run_suite

TRIVIAL3 = json.dumps({"kind": "trivial", "size": 3})
S3_TRANSPOSITIONS = json.dumps({"kind": "conjugation", "group": "S3", "classes": ["(1 2)"]})
NOT_A_RACK = json.dumps({"kind": "table", "table": [[1, 0, 2], [0, 1, 2], [0, 1, 2]]})


def run_cli(*argv):
    """Exit code, stdout and stderr of one invocation"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = parse_and_dispatch(list(argv))
    return code, out.getvalue(), err.getvalue()


def read(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def test_rack_check():
    print("✅ Testing rack check...")
    code, out, _ = run_cli("rack", "check", TRIVIAL3)
    assert code == 0 and "valid" in out
    print("   ✓ Trivial rack of size 3 is valid")

    code, out, _ = run_cli("rack", "check", NOT_A_RACK, "--error-json")
    assert code == 1
    error = json.loads(out.strip().splitlines()[-1])
    assert error["error"] == "ValidationFailure"
    assert error["witness"]["distributivity_failures"]
    print(f"   ✓ Invalid rack exits 1 with {error['error']}")
    return True


def test_components_enumerate():
    print("\n🧩 Testing components enumerate...")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "catalog.json")
        code, _, _ = run_cli("components", "enumerate", S3_TRANSPOSITIONS, "--n", "2", "--out", path)
        assert code == 0
        catalog = json.loads(read(path))
        assert len(catalog["records"]) == 5
        assert sorted(r["orbit_size"] for r in catalog["records"]) == [1, 1, 1, 3, 3]
        print(f"   ✓ {len(catalog['records'])} records written to JSON")

        csv_path = os.path.join(tmp, "catalog.csv")
        code, _, _ = run_cli("components", "enumerate", S3_TRANSPOSITIONS, "--n", "2",
                             "--format", "csv", "--out", csv_path)
        assert code == 0
        lines = read(csv_path).splitlines()
        assert lines[0] == ",".join(CATALOG_CSV_COLUMNS)
        assert len(lines) == 6
        print(f"   ✓ CSV header: {lines[0]}")

        code, _, _ = run_cli("frobenius", "fixed", path, "--q", "5", "--out", os.path.join(tmp, "fixed.json"))
        assert code == 0
        fixed = json.loads(read(os.path.join(tmp, "fixed.json")))
        assert fixed["fixed"] == 5 and fixed["records"] == 5
        print("   ✓ Saved catalog feeds frobenius fixed")
    return True


def test_reports():
    print("\n📄 Testing report commands...")
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "h2.json")
        assert run_cli("h2", "V4", "--out", out)[0] == 0
        assert json.loads(read(out))["h2"]["invariant_factors"] == [2]

        out = os.path.join(tmp, "clm.json")
        assert run_cli("clm", "check", "--H", "Z/3", "--Gamma", "Z/2", "--action", "inversion", "--out", out)[0] == 0
        assert json.loads(read(out))["admissible"]

        out = os.path.join(tmp, "compare.csv")
        code, _, _ = run_cli("clm", "compare", "--H", "Z/3", "--Gamma", "Z/2", "--action", "inversion",
                             "--q", "5", "--n-range", "4..6:2", "--format", "csv", "--out", out)
        assert code == 0
        lines = read(out).splitlines()
        assert lines[0] == ",".join(COMPARISON_COLUMNS)
        assert lines[1].startswith("4,1,1,0,")
        print("   ✓ h2, clm check and clm compare")

        out = os.path.join(tmp, "picard.json")
        assert run_cli("malle", "picard", "S3", "--classes", "(1 2)", "--n", "14", "--out", out)[0] == 0
        assert json.loads(read(out))["prediction"] == "(Z/13)^1"
        print("   ✓ malle picard")
    return True


def test_exit_codes():
    print("\n🚦 Testing exit codes...")
    assert run_cli("components", "enumerate", TRIVIAL3, "--n", "2", "--no-such-flag")[0] == 2
    assert run_cli("frobenius")[0] == 2
    code, out, _ = run_cli("frobenius", "d", "--group", "S3", "--classes", "(1 2)", "--q", "2", "--error-json")
    assert code == 1
    assert json.loads(out.strip().splitlines()[-1])["error"] == "GcdViolation"
    s3_spec = json.dumps({"kind": "permutation", "degree": 3, "generators": ["(1 2)", "(1 2 3)"]})
    code, _, _ = run_cli("group", "info", s3_spec, "--group-budget", "2")
    assert code == 1
    print("   ✓ Usage errors exit 2, domain errors exit 1")
    return True


def test_help_columns():
    print("\n📖 Testing documented CSV columns...")
    code, out, _ = run_cli("--help")
    assert code == 0
    assert ",".join(CATALOG_CSV_COLUMNS) in out
    assert ",".join(COMPARISON_COLUMNS) in out
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "scan.csv")
        code, _, _ = run_cli("components", "scan", "--group", "S3", "--classes", "(1 2)",
                             "--n-range", "2..4:2", "--format", "csv", "--out", path)
        assert code == 0
        header = read(path).splitlines()[0]
        assert header == "n,count,predicted_zero,states_visited" and header in out
    print("   ✓ --help lists the emitted CSV headers")
    return True


def test_determinism():
    print("\n🔒 Testing byte-identical reruns...")
    with tempfile.TemporaryDirectory() as tmp:
        first, second = os.path.join(tmp, "a.json"), os.path.join(tmp, "b.json")
        for path in (first, second):
            code, _, _ = run_cli("components", "scan", "--group", "S3", "--classes", "(1 2)",
                                 "--n-range", "2..6:2", "--out", path)
            assert code == 0
        assert read(first) == read(second)
        assert "wall_time" not in read(first)
    print("   ✓ Two runs produce identical reports")
    return True


def test_n_range():
    print("\n↔️  Testing n ranges...")
    assert parse_n_range("2..5") == [2, 3, 4, 5]
    assert parse_n_range("4..10:3") == [4, 7, 10]
    assert parse_n_range("7") == [7]
    try:
        parse_n_range("a..b")
        raise AssertionError("bad range accepted")
    except SpecFormatError:
        print("   ✓ Inclusive ranges with optional step")
    return True


def run_all_tests():
    return run_suite("CLI", [
        ("Rack Check", test_rack_check),
        ("Components Enumerate", test_components_enumerate),
        ("Reports", test_reports),
        ("Exit Codes", test_exit_codes),
        ("Help Columns", test_help_columns),
        ("Determinism", test_determinism),
        ("N Range", test_n_range),
    ])


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
