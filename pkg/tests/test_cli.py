import io
import json
from pathlib import Path

import pytest

from hurwitz_engine.cli import EXIT_ERROR, EXIT_MISMATCH, EXIT_OK, exit_code, run_command, to_tsv
from hurwitz_engine.tools.verify_tools import VerificationRow


def run(argv):
    out = io.StringIO()
    code = run_command(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv)
    return code, json.loads(text)


def test_hurwitz(isolated_env):
    code, data = run_json(["hurwitz", "--genus", "0", "--lambda", "3"])
    assert code == EXIT_OK
    assert data["value"] == "3"
    code, data = run_json(["hurwitz", "--genus", "1", "--lambda", "1,1,1"])
    assert data["value"] == "240"


def test_group_info(isolated_env):
    code, data = run_json(["group", "info", "--family", "3,3,3", "--element", '{"perm":[1,3,2],"colors":[1,2,0]}'])
    assert code == EXIT_OK
    assert data["order"] == "54"
    assert data["element"]["classification"]["case_tag"] == "WithColorPair"
    assert data["element"]["classification"]["lambda"] == [3]


def test_preset_info(isolated_env):
    code, data = run_json(["group", "info", "--preset", "B3"])
    assert code == EXIT_OK
    assert data["coxeter_number"] == 6
    assert data["connection_index"] == 2
    assert sorted(data["highest_root"]) == [1, 2, 2]
    matrix = data["coxeter_matrix"]
    assert [matrix[i][i] for i in range(3)] == [1, 1, 1]
    assert sorted([matrix[0][1], matrix[0][2], matrix[1][2]]) == [2, 3, 4]


def test_counts(isolated_env):
    code, data = run_json(["count", "full", "--preset", "B3"])
    assert code == EXIT_OK
    assert data["ltr"] == 6
    assert data["count"] == "12960"

    code, data = run_json(["count", "full", "--family", "1,1,4"])
    assert data["count"] == data["formula"] == "2880"

    code, data = run_json(["count", "reduced", "--family", "3,3,3", "--element", '{"perm":[1,3,2],"colors":[1,2,0]}'])
    assert data["count"] == data["formula"] == "24"

    code, data = run_json(["count", "full", "--preset", "B2", "--length", "3"])
    assert data["count"] == "0"


def test_rgs(isolated_env):
    code, data = run_json(["rgs", "count", "--family", "3,1,2", "--element", '{"perm":[1,2],"colors":[1,0]}'])
    assert code == EXIT_OK
    assert data["count"] == data["formula"] == "3"
    code, data = run_json(["rgs", "list", "--preset", "A2"])
    assert data["count"] == "3"
    assert len(data["sets"]) == 3


def test_phi(isolated_env):
    code, data = run_json(["phi", "--preset", "A2"])
    assert code == EXIT_OK
    assert data["coefficients"] == ["1", "4", "1"]
    assert data["value_at_one"] == "6"
    code, data = run_json(["phi", "--family", "3,1,2"])
    assert code == EXIT_ERROR
    assert data["error"]["code"] == "INVALID_PARAMETER"


def test_verify_main_identity(isolated_env):
    code, data = run_json(["verify", "main", "--preset", "B2"])
    assert code == EXIT_OK
    assert data["match"] is True
    (row,) = data["rows"]
    assert row["ffull_bruteforce"] == row["main_thm_rhs"] == row["main_thm_weyl_rhs"] == "48"
    assert set(row) == set(VerificationRow.columns())


@pytest.mark.slow
def test_verify_main_all_classes(isolated_env):
    code, data = run_json(["verify", "main", "--family", "3,3,3", "--all-classes"])
    assert code == EXIT_OK
    assert data["match"] is True
    assert len(data["rows"]) > 1


def test_verify_rejects_groups_that_are_not_well_generated(isolated_env):
    code, data = run_json(["verify", "main", "--family", "4,2,2"])
    assert code == EXIT_ERROR
    assert data["error"]["code"] == "NOT_WELL_GENERATED"


def test_verify_cutjoin(isolated_env):
    code, data = run_json(["verify", "cutjoin", "--preset", "A2"])
    assert code == EXIT_OK
    assert data["match"] is True
    assert all(row["rgs_recurrence"] is True for row in data["rows"])


def test_verify_identities(isolated_env):
    code, data = run_json(["verify", "identities", "--max-m", "30"])
    assert code == EXIT_OK
    assert len(data["rows"]) == 29
    assert data["chebyshev"]["failed"] == []
    assert data["generating_function"] == {"classical": True, "printed": False}


def test_poset_writes_dot(isolated_env):
    path = isolated_env / "out" / "b2.dot"
    code, data = run_json(["poset", "--preset", "B2", "--dot", str(path)])
    assert code == EXIT_OK
    assert data["chain_count"] == "48"
    assert path.read_text(encoding="utf-8").startswith("digraph prefix_poset {")


@pytest.mark.parametrize(
    "argv,error",
    [
        (["count", "full", "--preset", "E8"], "UNKNOWN_PRESET"),
        (["count", "full", "--preset", "B2", "--family", "2,1,2"], "INVALID_PARAMETER"),
        (["count", "full", "--family", "3,1,2", "--element", '{"word":[1]}'], "ELEMENT_PARSE_ERROR"),
        (["count", "full", "--preset", "B2", "--element", '{"perm":[2,1]}'], "ELEMENT_PARSE_ERROR"),
        (["count", "full", "--family", "3,2,2"], "INVALID_PARAMETER"),
        (["verify", "identities", "--max-m", "1"], "INVALID_PARAMETER"),
        (["count", "full", "--preset", "B2", "--length", "99"], "INVALID_PARAMETER"),
    ],
)
def test_errors_exit_two(isolated_env, argv, error):
    code, data = run_json(argv)
    assert code == EXIT_ERROR
    assert data["success"] is False
    assert data["error"]["code"] == error


def test_usage_errors(isolated_env):
    assert run(["hurwitz", "--genus", "2", "--lambda", "3"])[0] == EXIT_ERROR
    assert run(["count"])[0] == EXIT_ERROR
    assert run(["--version"])[0] == EXIT_OK


def test_missing_config(isolated_env):
    code, data = run_json(["--config", str(isolated_env / "nope.yaml"), "hurwitz", "--genus", "0", "--lambda", "2"])
    assert code == EXIT_ERROR
    assert data["error"]["code"] == "CONFIGURATION_ERROR"


def test_tsv_rows(isolated_env):
    code, text = run(["--format", "tsv", "verify", "identities", "--max-m", "4"])
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0].split("\t") == [
        "m", "inverse_sum", "expected_inverse_sum", "real_part_sum", "expected_real_part_sum", "match",
    ]
    assert lines[1].split("\t") == ["2", "1/2", "1/2", "1/4", "1/4", "true"]
    assert len(lines) == 4


def test_tsv_key_values():
    text = to_tsv({"value": "3", "lambda": [3], "success": True})
    assert text == "value\t3\nlambda\t[3]\nsuccess\ttrue\n"


def test_exit_code():
    assert exit_code({"success": True}) == EXIT_OK
    assert exit_code({"success": True, "match": False}) == EXIT_MISMATCH
    assert exit_code({"success": False}) == EXIT_ERROR


def test_row_schema_lists_every_column():
    path = Path(__file__).resolve().parent.parent / "docs" / "verification_row.schema.json"
    schema = json.loads(path.read_text(encoding="utf-8"))
    assert schema["required"] == VerificationRow.columns()
    assert set(schema["properties"]) == set(VerificationRow.columns())


def test_cache_stats_and_evict(isolated_env):
    run_json(["count", "full", "--preset", "B2"])
    code, stats = run_json(["cache", "stats"])
    assert code == EXIT_OK
    assert stats["entries"] == 1
    assert stats["misses"] == 1
    assert stats["directory"] == str((isolated_env / "cache").resolve())
    assert len(list((isolated_env / "cache").glob("lattice-*.json"))) == 1

    code, data = run_json(["cache", "evict", "--preset", "B2"])
    assert code == EXIT_OK
    assert data["removed"] is True
    assert not list((isolated_env / "cache").glob("lattice-*.json"))
    assert run_json(["cache", "stats"])[1]["entries"] == 0

    assert run_json(["cache", "evict", "--preset", "B2"])[1]["removed"] is False
    code, data = run_json(["count", "full", "--preset", "B2"])
    assert data["count"] == "48"
    assert run_json(["cache", "stats"])[1]["misses"] == 2
