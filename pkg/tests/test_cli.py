import csv
import io

import numpy as np
import pytest

from posetkit.cli import main
from posetkit.core import generate_chain_union, load_poset


@pytest.fixture
def instance(tmp_path):
    path = tmp_path / "p.txt"
    assert main(["gen", "--n", "24", "--w", "3", "--seed", "5", "--out", str(path)]) == 0
    return path


def test_gen_round_trip(instance):
    p = load_poset(instance.read_text())
    assert np.array_equal(p.dominates, generate_chain_union(24, 3, seed=5).dominates)


def test_sort_report_within_bound(instance, tmp_path):
    report = tmp_path / "r.csv"
    assert main(["sort", "--input", str(instance), "--algo", "mergesort", "--report", str(report)]) == 0
    rows = list(csv.DictReader(io.StringIO(report.read_text())))
    assert len(rows) == 1 and rows[0]["within_bound"] == "true"


def test_verify_all(instance, capsys):
    assert main(["verify", "--input", str(instance), "--all"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "mergesort" in out


def test_bench_deterministic_except_time(tmp_path):
    def run(name):
        out = tmp_path / name
        assert main(["bench", "--algo", "mergesort", "minimals-rand", "--n", "32", "--w", "2",
                     "--trials", "3", "--seed", "9", "--out", str(out)]) == 0
        rows = list(csv.reader(io.StringIO(out.read_text())))
        return [r[:-1] for r in rows]

    a, b = run("a.csv"), run("b.csv")
    assert a == b and a[0][-1] == "within_bound" and len(a) == 7


def test_bench_parallel_matches_serial(tmp_path):
    outs = []
    for jobs in ("1", "2"):
        out = tmp_path / f"j{jobs}.csv"
        main(["bench", "--algo", "kselect-det", "--n", "30", "--w", "2", "--k", "2",
              "--trials", "4", "--jobs", jobs, "--out", str(out)])
        outs.append([r[:-1] for r in csv.reader(io.StringIO(out.read_text()))])
    assert outs[0] == outs[1]


def test_select_minimals_heights_linext(instance, capsys):
    assert main(["select", "--input", str(instance), "--k", "2", "--algo", "rand", "--trials", "2"]) == 0
    assert main(["minimals", "--input", str(instance)]) == 0
    assert main(["heights", "--input", str(instance)]) == 0
    assert main(["linext", "--input", str(instance)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out[-1].split()) == 1


def test_adversary_command(tmp_path, capsys):
    wit = tmp_path / "w.txt"
    assert main(["adversary", "--n", "50", "--w", "2", "--witness", str(wit)]) == 0
    assert "PASS" in capsys.readouterr().out
    assert load_poset(wit.read_text()).n == 50


def test_transitive_round(tmp_path, capsys):
    rel = tmp_path / "t.txt"
    assert main(["gen", "--model", "transitive", "--n", "20", "--w", "3", "--mutual", "5", "--out", str(rel)]) == 0
    assert main(["sort", "--algo", "transitive", "--input", str(rel), "--width", "3"]) == 0
    assert "correct=True" in capsys.readouterr().out


def test_usage_errors(tmp_path, instance):
    with pytest.raises(SystemExit) as exc:
        main(["sort"])
    assert exc.value.code == 2
    assert main(["sort", "--input", str(tmp_path / "missing.txt")]) == 2
    assert main(["bench", "--algo", "nope"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("garbage here\n")
    assert main(["sort", "--input", str(bad)]) in (1, 2)


def test_wrong_width_reports_error(instance):
    assert main(["sort", "--input", str(instance), "--width", "1", "--algo", "bininsert"]) == 1
