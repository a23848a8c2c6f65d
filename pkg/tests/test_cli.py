import json

import numpy as np
import pytest

import entmre as em
from entmre import io
from entmre.cli import main

MRE_W075 = 0.18872187554086717
EF_W075 = 0.35457890266527003


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)
    return str(path)


@pytest.fixture
def bell_file(tmp_path):
    return write_json(tmp_path / "bell.json", io.encode_vector(em.BELL_PHI_PLUS))


@pytest.fixture
def werner_file(tmp_path):
    return write_json(
        tmp_path / "werner.json", io.encode_matrix(em.werner_state(0.75))
    )


@pytest.fixture
def product_file(tmp_path):
    return write_json(tmp_path / "prod.json", [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]])


def test_measure_bell(bell_file, capsys):
    assert main(["measure", bell_file, "--format", "json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["kind"] == "pure"
    assert abs(record["mre"] - 1.0) < 1e-9
    assert abs(record["ef"] - 1.0) < 1e-9
    assert record["ppt"] is False


def test_measure_werner(werner_file, capsys):
    assert main(["measure", werner_file, "--format", "json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["mre_method"] == "bell-closed"
    assert abs(record["mre"] - MRE_W075) < 1e-9
    assert abs(record["ef"] - EF_W075) < 1e-9
    assert record["ppt"] is False


def test_measure_product(product_file, capsys):
    assert main(["measure", product_file, "--format", "json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["ppt"] is True
    assert record["mre"] < 1e-9
    assert record["ef"] < 1e-9
    assert record["concurrence"] < 1e-9


def test_measure_ensemble(tmp_path, capsys):
    ens = em.bell_mixture_mpsd([0.75, 1 / 12, 1 / 12, 1 / 12])
    path = write_json(tmp_path / "ens.json", io.ensemble_to_obj(ens))
    assert main(["measure", path, "--format", "json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["kind"] == "ensemble"
    assert abs(record["decomposition_objective"] - MRE_W075) < 1e-9


def test_measure_malformed_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["measure", str(bad)]) == 2
    shape = write_json(tmp_path / "shape.json", [1, 0, 0])
    assert main(["measure", shape]) == 2


def test_measure_nonphysical_exits_3(tmp_path):
    path = write_json(tmp_path / "bad_state.json", [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    assert main(["measure", path]) == 3
    dens = write_json(
        tmp_path / "bad_dens.json",
        io.encode_matrix(np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)),
    )
    assert main(["measure", dens]) == 3


def test_sweep_werner_csv(tmp_path):
    out = tmp_path / "werner.csv"
    assert (
        main(
            [
                "sweep",
                "werner",
                "--min", "0.5",
                "--max", "1.0",
                "--steps", "51",
                "--columns", "mre_closed,ef_closed",
                "--output", str(out),
            ]
        )
        == 0
    )
    text = out.read_text()
    lines = text.strip().split("\n")
    assert lines[0] == "F,mre_closed,ef_closed"
    assert len(lines) == 52
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    # ordering from the figure: measure stays below the formation entropy
    assert np.all(rows[:, 1] <= rows[:, 2] + 1e-12)
    assert abs(rows[0, 1]) < 1e-12 and abs(rows[0, 2]) < 1e-12
    assert abs(rows[-1, 1] - 1.0) < 1e-12 and abs(rows[-1, 2] - 1.0) < 1e-12


def test_sweep_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = [
        "sweep", "departure", "--min", "0.05", "--max", "0.95", "--steps", "10",
        "--seed", "3",
    ]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_sweep_departure_orderings(tmp_path):
    out = tmp_path / "dep.csv"
    assert (
        main(
            ["sweep", "departure", "--min", "0.05", "--max", "0.95", "--steps", "19",
             "--output", str(out)]
        )
        == 0
    )
    lines = out.read_text().strip().split("\n")
    header = lines[0].split(",")
    assert header == [
        "G", "mre_14", "mre_23", "wootters_ef_14", "wootters_ef_23",
        "avg_reduced_entropy_23",
    ]
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    cols = {name: rows[:, i] for i, name in enumerate(header)}
    assert np.all(cols["mre_14"] > cols["mre_23"])
    assert np.all(np.abs(cols["wootters_ef_14"] - cols["wootters_ef_23"]) < 1e-9)
    assert np.all(cols["avg_reduced_entropy_23"] >= cols["mre_23"] - 1e-9)


def test_sweep_werner_full_columns(tmp_path):
    out = tmp_path / "full.csv"
    code = main(
        ["sweep", "werner", "--min", "0.6", "--max", "0.9", "--steps", "2",
         "--restarts", "6", "--output", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "F,mre_closed,ef_closed,mre_search,re_estimate"
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    for f, mre_c, ef_c, mre_s, re_e in rows:
        assert abs(mre_s - mre_c) < 1e-4
        assert re_e <= mre_s + 1e-4
        assert mre_s <= ef_c + 1e-4


def test_measure_search_path(tmp_path, capsys):
    # entangled, not Bell-diagonal, not pure: exercises the search branch
    rng = np.random.default_rng(12)
    while True:
        rho = em.random_density(rng, rank=2)
        if not em.is_ppt(rho):
            break
    path = write_json(tmp_path / "rank2.json", io.encode_matrix(rho))
    assert main(["measure", path, "--restarts", "6", "--format", "json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["mre_method"] == "search"
    assert record["mre"] <= record["ef"] + 1e-6
    assert record["ppt"] is False


def test_sweep_domain_error(tmp_path):
    assert main(["sweep", "werner", "--min", "0.2", "--max", "1.0", "--steps", "5"]) == 4
    assert main(["sweep", "werner", "--min", "0.9", "--max", "0.6", "--steps", "5"]) == 4
    assert main(["sweep", "werner", "--min", "0.5", "--max", "1.0", "--steps", "1"]) == 4
    assert (
        main(["sweep", "werner", "--min", "0.5", "--max", "1.0", "--steps", "3",
              "--columns", "bogus"]) == 4
    )


def test_search_command(tmp_path, capsys):
    m_state = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    state = write_json(tmp_path / "m.json", io.encode_matrix(m_state))
    out = tmp_path / "ensemble.json"
    code = main(
        ["search", state, "--seed", "1", "--restarts", "8", "--format", "json",
         "--output", str(out)]
    )
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["value"] < 1e-6
    kind, ens = io.load_state(str(out))
    assert kind == "ensemble"
    assert np.max(np.abs(em.ensemble_to_density(ens) - m_state)) < 1e-8


def test_re_bound_command(werner_file, capsys):
    code = main(
        ["re-bound", werner_file, "--warm-start", "--seed", "2", "--restarts", "8",
         "--format", "json"]
    )
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["re_estimate"] <= record["mre_search"] + 1e-3
    assert record["re_estimate"] <= MRE_W075 + 1e-3


def test_lgm_apply_command(tmp_path, bell_file, capsys):
    u = np.eye(2)
    kraus = write_json(
        tmp_path / "unitary.json", [[io.encode_matrix(u), io.encode_matrix(u)]]
    )
    out = tmp_path / "branches.json"
    code = main(
        ["lgm-apply", bell_file, "--kraus", kraus, "--format", "json",
         "--output", str(out)]
    )
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert abs(record["probability_sum"] - 1.0) < 1e-10
    payload = json.loads(out.read_text())
    total = np.array([[complex(re, im) for re, im in row] for row in payload["total"]])
    assert np.max(np.abs(total - em.pure_to_density(em.BELL_PHI_PLUS))) < 1e-12


def test_lgm_apply_incomplete_set_exits_3(tmp_path, bell_file):
    half = np.diag([1.0, 0.0])
    kraus = write_json(
        tmp_path / "incomplete.json", [[io.encode_matrix(half), io.encode_matrix(np.eye(2))]]
    )
    assert main(["lgm-apply", bell_file, "--kraus", kraus]) == 3


def test_verify_only_lemma_two(capsys):
    assert main(["verify", "--only", "lemma-two", "--samples", "200"]) == 0
    out = capsys.readouterr().out
    assert "lemma-two" in out and "pass" in out


def test_verify_json_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        ["verify", "--only", "lemma-two,xi-concurrence", "--samples", "50",
         "--format", "json", "--output", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert {p["name"] for p in report["properties"]} == {"lemma-two", "xi-concurrence"}


def test_verify_broken_tolerance_exits_1(capsys):
    code = main(
        ["verify", "--only", "lemma-two", "--samples", "50", "--tol", "lemma-two=1e-30"]
    )
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    # the offending sample is serialized for replay
    assert '"psi"' in out


def test_verify_unknown_property_exits_4():
    assert main(["verify", "--only", "not-a-property"]) == 4


def test_verify_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--only", "lemma-two", "--samples", "100", "--seed", "7",
            "--format", "json"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
