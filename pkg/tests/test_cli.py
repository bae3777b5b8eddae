import csv

import pytest

from driftbench import cli

SMALL = """\
name: small
dimension: 2
length: 400
classes:
  - name: A
    weight: 1
    components:
      - {center: [0, 0], stddev: [1, 1], weight: 1, phases: [{duration: 399, rmoveto: [4, 4]}]}
  - name: B
    weight: 1
    components:
      - {center: [3, 0], stddev: [1, 1], weight: 1, phases: [{duration: 399, rmoveto: [4, 4]}]}
"""

TRI = SMALL.replace("length: 400", "length: 100") + """\
  - name: C
    weight: 1
    components:
      - {center: [0, 6], stddev: [1, 1], weight: 1}
"""


@pytest.fixture
def small(tmp_path):
    p = tmp_path / "small.yaml"
    p.write_text(SMALL)
    return str(p)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_generate_nsgt_csv(tmp_path):
    out = tmp_path / "nsgt.csv"
    assert cli.main(["generate", "--scenario", "NSGT", "--seed", "1", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "x1", "x2", "class", "component"]
    assert len(rows) == 10002
    assert [int(r[0]) for r in rows[1:]] == list(range(10001))
    assert {r[3] for r in rows[1:]} == {"A", "B"}
    assert all(len(v.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 9 for v in rows[5][1:3])


def test_generate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        cli.main(["generate", "--scenario", "NSCX", "--seed", "3", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_generate_5d_header(tmp_path):
    out = tmp_path / "g.csv"
    cli.main(["generate", "--scenario", "NSGT-5D", "--seed", "1", "--out", str(out)])
    assert out.read_text().splitlines()[0] == "t,x1,x2,x3,x4,x5,class,component"


def test_generate_arff(tmp_path, small):
    out = tmp_path / "s.arff"
    assert cli.main(["generate", "--scenario", small, "--seed", "2", "--out", str(out), "--format", "arff"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "@relation small"
    assert "@attribute x1 numeric" in lines and "@attribute class {A,B}" in lines
    data = lines[lines.index("@data") + 1:]
    assert len(data) == 400 and data[0].split(",")[-1] in ("A", "B")


def test_generate_csv_matches_arff_values(tmp_path, small):
    c, a = tmp_path / "s.csv", tmp_path / "s.arff"
    cli.main(["generate", "--scenario", small, "--seed", "2", "--out", str(c)])
    cli.main(["generate", "--scenario", small, "--seed", "2", "--out", str(a), "--format", "arff"])
    rows = [r[1:4] for r in read_csv(c)[1:]]
    arff = a.read_text().splitlines()
    data = [l.split(",") for l in arff[arff.index("@data") + 1:]]
    assert rows == data


def test_generate_errors(tmp_path, capsys):
    assert cli.main(["generate", "--scenario", "NOPE", "--seed", "1", "--out", str(tmp_path / "x")]) == 1
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["generate", "--scenario", "NSGT", "--seed", "1", "--out", str(blocker / "x.csv")]) == 3


def test_usage_errors_exit_one(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.main(["generate", "--scenario", "NSGT"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 1
    assert cli.main(["run", "--scenario", "NSGT", "--learner", "svm", "--outdir", str(tmp_path)]) == 1
    assert cli.main(["run", "--scenario", "NSGT", "--learner", "nb", "--seeds", "0", "--outdir", str(tmp_path)]) == 1


def test_run_compare_report(tmp_path, small, capsys):
    out = tmp_path / "res"
    rc = cli.main(["run", "--scenario", small, "--learner", "all", "--seeds", "3", "--window", "50", "--outdir", str(out)])
    assert rc == 0
    table = read_csv(out / "results.csv")
    assert table[0] == ["scenario", "Opt.", "NB", "SGD", "DWM", "OZAB", "NN100", "NN1500", "NN6000"]
    assert table[1][0] == "small" and len(table) == 2
    trace = read_csv(out / "traces" / "small" / "nb" / "seed2.csv")
    assert trace[0] == ["n", "loss", "ae_cum", "ae_win"] and len(trace) == 401
    assert trace[49][3] == "" and trace[50][3] != ""
    curves = read_csv(out / "curves" / "small.csv")
    assert curves[0][0] == "n" and curves[0][1] == "Opt." and curves[1][0] == "50" and len(curves) == 352

    capsys.readouterr()
    assert cli.main(["compare", "--results", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "scenario,learner,mean_pct,best,in_group,p_value"
    assert len(lines) == 1 + 7  # oracle excluded
    assert sum(l.split(",")[3] == "1" for l in lines[1:]) == 1

    r1, r2 = tmp_path / "rep1", tmp_path / "rep2"
    assert cli.main(["report", "--results", str(out), "--out", str(r1)]) == 0
    cli.main(["report", "--results", str(out), "--out", str(r2)])
    for rel in ("report.txt", "results.csv", "curves/small.csv"):
        assert (r1 / rel).read_bytes() == (r2 / rel).read_bytes()
    assert "Opt." in (r1 / "report.txt").read_text()


def test_run_single_seed_flags_groups(tmp_path, small, capsys):
    out = tmp_path / "one"
    assert cli.main(["run", "--scenario", small, "--learner", "nb,sgd", "--seeds", "1", "--window", "50", "--outdir", str(out)]) == 0
    assert "significance groups not computed" in capsys.readouterr().err
    assert "*" not in (out / "results.csv").read_text()
    assert cli.main(["compare", "--results", str(out)]) == 1


def test_run_failure_exit_code(tmp_path, capsys):
    p = tmp_path / "tri.yaml"
    p.write_text(TRI)
    out = tmp_path / "tri"
    assert cli.main(["run", "--scenario", str(p), "--learner", "nb,sgd", "--seeds", "2", "--window", "20", "--outdir", str(out)]) == 2
    err = capsys.readouterr().err
    assert "run failed: small / sgd / seed 1" in err
    assert (out / "results.csv").exists()


def test_compare_alpha_out_file(tmp_path, small):
    out = tmp_path / "res"
    cli.main(["run", "--scenario", small, "--learner", "nb,nn100", "--seeds", "2", "--window", "50", "--outdir", str(out)])
    target = tmp_path / "cmp.csv"
    assert cli.main(["compare", "--results", str(out), "--alpha", "0.05", "--out", str(target)]) == 0
    rows = read_csv(target)
    assert {r[1] for r in rows[1:]} == {"nb", "nn100"}


def test_report_errors(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert cli.main(["report", "--results", str(empty), "--out", str(tmp_path / "r")]) == 3
    assert cli.main(["report", "--results", str(tmp_path / "absent"), "--out", str(tmp_path / "r")]) == 3
    assert cli.main(["compare", "--results", str(tmp_path / "absent")]) == 3
