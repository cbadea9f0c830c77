"""Command-line behavior: report shapes, frozen numbers, exit codes, and
worker-count determinism.  Happy paths run in process through CliRunner;
exit codes go through main() or the installed console script."""

import csv
import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

import cipoints.cli as cli_mod
from cipoints.cli import cli, main

CONE_SPEC = """\
# rank-3 quadric cone with a rank-2 projection
field = 3
n = 3
r = 2
s = 0
generator = 1*X1^2 - 1*X0^1*X2^1
projection = 1 0 0 0; 0 1 0 0
"""


def invoke(args, **kwargs):
    runner = CliRunner()
    result = runner.invoke(cli, args, catch_exceptions=False, **kwargs)
    assert result.exit_code == 0, result.output
    return result


def run_script(args):
    return subprocess.run(
        ["cipoints", *args], capture_output=True, text=True, timeout=120
    )


# -- count --------------------------------------------------------------------------


def test_count_catalog_json_stdout():
    result = invoke(["count", "--catalog", "quadric-cone-p3", "--field", "3"])
    doc = json.loads(result.output)
    assert doc["metadata"]["command"] == "count"
    assert doc["metadata"]["field"] == "3^1"
    assert doc["metadata"]["workers"] == 1
    assert doc["results"]["counts"] == [
        {
            "entry": "quadric-cone-p3",
            "q": 3,
            "n": 3,
            "r": 2,
            "s": "0",
            "delta": 2,
            "total": 13,
            "smooth": 12,
            "singular": 1,
        }
    ]


def test_count_metadata_has_no_timestamps():
    result = invoke(["count", "--catalog", "quadric-cone-p3", "--field", "3"])
    meta = json.loads(result.output)["metadata"]
    assert set(meta) == {
        "command",
        "version",
        "workers",
        "source",
        "field",
        "budget",
        "formulas",
    }


def test_count_spec_file_with_projection(tmp_path):
    spec = tmp_path / "cone.spec"
    spec.write_text(CONE_SPEC)
    result = invoke(["count", "--spec", str(spec)])
    doc = json.loads(result.output)
    assert doc["metadata"]["source"] == "cone"
    assert doc["results"]["counts"][0]["total"] == 13
    assert doc["results"]["fibers"] == [
        {"fiber": "(0:1)", "count": 4},
        {"fiber": "(1:0)", "count": 7},
        {"fiber": "(1:1)", "count": 7},
        {"fiber": "(1:2)", "count": 7},
    ]
    assert doc["results"]["fiber-identity"] == [
        {"exceptional": 4, "total": 13, "identity": "holds"}
    ]


def test_count_csv_layout(tmp_path):
    spec = tmp_path / "cone.spec"
    spec.write_text(CONE_SPEC)
    out = tmp_path / "report"
    invoke(["count", "--spec", str(spec), "--out", str(out), "--format", "csv"])
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "count_counts.csv",
        "count_fiber-identity.csv",
        "count_fibers.csv",
        "count_meta.json",
    ]
    assert (out / "count_fiber-identity.csv").read_text() == (
        "exceptional,total,identity\n4,13,holds\n"
    )


def test_count_single_section_csv_has_no_suffix(tmp_path):
    out = tmp_path / "report"
    invoke(
        [
            "count",
            "--catalog",
            "quadric-cone-p3",
            "--field",
            "3",
            "--out",
            str(out),
            "--format",
            "csv",
        ]
    )
    names = sorted(p.name for p in out.iterdir())
    assert names == ["count.csv", "count_meta.json"]


# -- verify -------------------------------------------------------------------------


def read_csv_rows(path):
    lines = path.read_text().splitlines()
    return [dict(zip(lines[0].split(","), row)) for row in csv.reader(lines[1:])]


def test_verify_single_entry(tmp_path):
    out = tmp_path / "v"
    invoke(
        ["verify", "--catalog", "quadric-cone-p3", "--field", "3", "--out", str(out)]
    )
    names = sorted(p.name for p in out.iterdir())
    assert names == ["verify_checks.csv", "verify_counts.csv", "verify_meta.json"]
    counts = read_csv_rows(out / "verify_counts.csv")
    assert counts == [
        {
            "entry": "quadric-cone-p3",
            "q": "3",
            "n": "3",
            "r": "2",
            "s": "0",
            "delta": "2",
            "total": "13",
            "smooth": "12",
            "singular": "1",
        }
    ]
    checks = read_csv_rows(out / "verify_checks.csv")
    by_name = {row["check"]: row for row in checks}
    assert by_name["ground-truth-total"]["verdict"] == "holds"
    assert by_name["ground-truth-singular"]["verdict"] == "holds"
    assert by_name["projective-upper"]["bound"] == "26"
    assert by_name["estimate-refined"]["bound"] == "90"
    assert all(row["verdict"] in {"holds", "not-applicable"} for row in checks)


def test_verify_meta_records_grid_and_workers(tmp_path):
    out = tmp_path / "v"
    invoke(
        ["verify", "--catalog", "quadric-cone-p3", "--field", "3", "--out", str(out)]
    )
    meta = json.loads((out / "verify_meta.json").read_text())
    assert meta["command"] == "verify"
    assert meta["q_grid"] == [3]
    assert meta["workers"] == 1


def test_verify_worker_count_never_changes_numeric_output(tmp_path):
    outputs = {}
    for workers in (1, 2):
        out = tmp_path / f"w{workers}"
        invoke(
            [
                "--workers",
                str(workers),
                "verify",
                "--catalog",
                "quadric-cone-p3",
                "--field",
                "5",
                "--out",
                str(out),
            ]
        )
        outputs[workers] = out
    for name in ("verify_counts.csv", "verify_checks.csv"):
        assert (outputs[1] / name).read_bytes() == (outputs[2] / name).read_bytes()
    metas = {
        w: json.loads((outputs[w] / "verify_meta.json").read_text()) for w in (1, 2)
    }
    assert metas[1].pop("workers") == 1
    assert metas[2].pop("workers") == 2
    assert metas[1] == metas[2]


def test_verify_rerun_is_byte_identical(tmp_path):
    blobs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        invoke(
            [
                "verify",
                "--catalog",
                "smooth-quadric-p3",
                "--field",
                "4",
                "--out",
                str(out),
            ]
        )
        blobs.append(
            b"".join(
                (out / name).read_bytes()
                for name in (
                    "verify_counts.csv",
                    "verify_checks.csv",
                    "verify_meta.json",
                )
            )
        )
    assert blobs[0] == blobs[1]


def test_verify_skips_unsupported_fields(tmp_path):
    out = tmp_path / "v"
    invoke(["verify", "--catalog", "two-quadrics-p4", "--field", "3", "--out", str(out)])
    checks = read_csv_rows(out / "verify_checks.csv")
    assert len(checks) == 1
    assert checks[0]["check"] == "support"
    assert checks[0]["verdict"] == "not-applicable"
    assert read_csv_rows(out / "verify_counts.csv") == []


# -- bounds -------------------------------------------------------------------------


def test_bounds_constants_and_estimates():
    result = invoke(["bounds", "--catalog", "quadric-cone-p3", "--field", "3"])
    doc = json.loads(result.output)
    constants = {row["name"]: row["value"] for row in doc["results"]["constants"]}
    assert constants == {
        "delta": "2",
        "degree-excess": "1",
        "projective-upper": "26",
        "singular-fiber-bound": "2",
        "comparison-exponential": "33750",
        "comparison-normal": "96 (valid for q > 9)",
    }
    estimates = {row["target"]: row for row in doc["results"]["estimates"]}
    assert estimates["total"]["refined"] == "90"
    assert estimates["total"]["simplified"] == "168"
    assert estimates["total"]["alternate"] == ""
    assert estimates["smooth"]["refined"] == "282"
    assert estimates["smooth"]["simplified"] == "396"
    assert estimates["smooth"]["alternate"] == "288"
    assert all(row["regime"] == "codim2" for row in doc["results"]["estimates"])


def test_bounds_threshold_table():
    result = invoke(["bounds", "--catalog", "quadric-cone-p3", "--field", "3"])
    doc = json.loads(result.output)
    rows = {row["name"]: row for row in doc["results"]["thresholds"]}
    assert rows["smooth-point"]["threshold"] == "21"
    assert rows["smooth-point-codim2"]["threshold"] == "21"
    assert rows["smooth-point-codim3"]["applicable"] == "False"
    assert rows["smooth-point-codim3"]["reason"] == "needs s <= r-3, got s=0, r=2"
    assert rows["generic-section"]["threshold"] == "32"
    assert rows["nonsingular-fiber"]["threshold"] == "21"
    # q = 3 clears none of the thresholds, so nothing is guaranteed yet
    assert all(row["guaranteed-at-q"] == "False" for row in rows.values())


# -- bertini-audit ------------------------------------------------------------------


def test_bertini_audit_with_search(tmp_path):
    out = tmp_path / "audit"
    invoke(
        [
            "bertini-audit",
            "--catalog",
            "quadric-cone-p3",
            "--field",
            "5",
            "--seeds",
            "5",
            "--search",
            "--out",
            str(out),
        ]
    )
    audits = read_csv_rows(out / "bertini_audit_audits.csv")
    assert [row["seed"] for row in audits] == ["0", "1", "2", "3", "4"]
    assert all(row["certified"] == "1" for row in audits)
    assert all(row["bound"] == "2" for row in audits)
    assert all(row["verdict"] == "holds" for row in audits)
    search = read_csv_rows(out / "bertini_audit_search.csv")
    assert search == [
        {
            "entry": "quadric-cone-p3",
            "q": "5",
            "found": "True",
            "seed": "0",
            "fiber": "(1:0)",
            "fiber-count": "6",
            "audit-level": "2",
        }
    ]
    meta = json.loads((out / "bertini_audit_meta.json").read_text())
    assert meta["seeds"] == 5
    assert "one-sided audit" in meta["note"]


# -- valueset -----------------------------------------------------------------------


def test_valueset_family_rows(tmp_path):
    out = tmp_path / "vs"
    invoke(["valueset", "--field", "5", "-d", "3", "-s", "1", "--out", str(out)])
    rows = read_csv_rows(out / "valueset_families.csv")
    assert [row["fixed"] for row in rows] == ["0", "1", "2", "3", "4"]
    for row in rows:
        assert row["members"] == "5"
        assert row["average"] == "17/5"
        assert row["average-via-chi"] == "17/5"
        assert row["identity"] == "holds"
        assert row["cohen"] == ""
        assert row["mu-times-q"] == "10/3"
        assert row["gap"] == "1/15"
        assert row["e-lower"] == "34598493014643029/25000000000000000"
        assert row["e-upper"] == "276787944117144233/200000000000000000"
        assert row["e-verdict"] == "holds"


def test_valueset_chi_rows_record_soft_violation(tmp_path):
    out = tmp_path / "vs"
    invoke(["valueset", "--field", "5", "-d", "3", "-s", "1", "--out", str(out)])
    rows = read_csv_rows(out / "valueset_chi.csv")
    assert len(rows) == 5
    for row in rows:
        assert row["r"] == "3"
        assert row["chi"] == "2"
        assert row["band-excess"] == "0"
        assert row["band-degree"] == "1"
        assert row["measured"] == "13/6"
        assert row["bound"] == "0"
        assert row["verdict"] == "violated"
        assert row["severity"] == "soft"


def test_valueset_s_zero_checks_cohen(tmp_path):
    out = tmp_path / "vs"
    invoke(["valueset", "--field", "5", "-d", "2", "-s", "0", "--out", str(out)])
    rows = read_csv_rows(out / "valueset_families.csv")
    assert len(rows) == 1
    assert rows[0]["cohen"] == "holds"
    assert rows[0]["average"] == "3"


# -- catalog ------------------------------------------------------------------------


def test_catalog_list_text():
    result = invoke(["catalog", "list"])
    lines = result.output.splitlines()
    assert len(lines) == 8
    assert lines[0].startswith("conic-p2")
    assert any(line.startswith("quadric-cone-p3") for line in lines)


def test_catalog_list_json():
    result = invoke(["catalog", "list", "--format", "json"])
    doc = json.loads(result.output)
    rows = doc["results"]["entries"]
    assert [row["name"] for row in rows] == [
        "conic-p2",
        "quadric-cone-p3",
        "smooth-quadric-p3",
        "quadric-cone-p4",
        "quadric-cone-line-p4",
        "fermat-surface-d3",
        "fermat-surface-d4",
        "two-quadrics-p4",
    ]
    cone = next(row for row in rows if row["name"] == "quadric-cone-p3")
    assert cone["closed-forms"] == "total,singular"


def test_version_banner():
    result = invoke(["--version"])
    assert "cipoints" in result.output


# -- exit codes ---------------------------------------------------------------------


def main_exit_code(monkeypatch, argv):
    monkeypatch.setattr(sys, "argv", ["cipoints", *argv])
    with pytest.raises(SystemExit) as exc:
        main()
    return exc.value.code


def test_bound_violation_exits_one(monkeypatch, tmp_path, capsys):
    # Self-test of the failure path: shrink one bound to force a violation.
    monkeypatch.setattr(cli_mod, "projective_upper_bound", lambda *a: 0)
    out = tmp_path / "v"
    code = main_exit_code(
        monkeypatch,
        ["verify", "--catalog", "quadric-cone-p3", "--field", "3", "--out", str(out)],
    )
    assert code == 1
    assert "bound violation" in capsys.readouterr().err
    # the report is written before the failure is raised
    checks = read_csv_rows(out / "verify_checks.csv")
    violated = [row for row in checks if row["verdict"] == "violated"]
    assert violated and all(row["check"] == "projective-upper" for row in violated)


def test_validation_error_exits_two(monkeypatch, capsys):
    code = main_exit_code(monkeypatch, ["count"])
    assert code == 2
    assert "one of --spec or --catalog is required" in capsys.readouterr().err


def test_spec_and_catalog_conflict_exits_two(monkeypatch, tmp_path, capsys):
    spec = tmp_path / "cone.spec"
    spec.write_text(CONE_SPEC)
    code = main_exit_code(
        monkeypatch,
        ["count", "--spec", str(spec), "--catalog", "quadric-cone-p3", "--field", "3"],
    )
    assert code == 2
    assert "mutually exclusive" in capsys.readouterr().err


def test_usage_error_exits_two(monkeypatch, capsys):
    code = main_exit_code(monkeypatch, ["count", "--no-such-flag"])
    assert code == 2


def test_script_unknown_catalog_exits_two():
    proc = run_script(["count", "--catalog", "nosuch", "--field", "3"])
    assert proc.returncode == 2
    assert "unknown catalog entry 'nosuch'" in proc.stderr
    assert "conic-p2" in proc.stderr


def test_script_budget_exceeded_exits_three():
    proc = run_script(
        ["count", "--catalog", "quadric-cone-p3", "--field", "3", "--budget", "10"]
    )
    assert proc.returncode == 3
    assert (
        "budget exceeded: P^3(F_3) has 40 points, over the budget 10" in proc.stderr
    )


def test_script_malformed_spec_exits_two(tmp_path):
    spec = tmp_path / "bad.spec"
    spec.write_text("field = 3\nn = 3\nr = 2\ns = 0\ngenerator = 1*X0*X2\n")
    proc = run_script(["count", "--spec", str(spec)])
    assert proc.returncode == 2
    assert "bad factor 'X0' in term '1*X0*X2': expected Xi^e" in proc.stderr


def test_spec_file_rejects_unknown_key(tmp_path, monkeypatch, capsys):
    spec = tmp_path / "odd.spec"
    spec.write_text("field = 3\nn = 3\nr = 2\nflavor = mint\ngenerator = 1*X0^2\n")
    code = main_exit_code(monkeypatch, ["count", "--spec", str(spec)])
    assert code == 2
    assert "unknown key 'flavor'" in capsys.readouterr().err
