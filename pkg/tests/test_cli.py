import io
import json
import os
from contextlib import redirect_stdout

import pytest

from planar4 import generators as gen
from planar4.cli import main
from planar4.embedding import write_planar_code
from planar4.graphs import Graph, write_graph6


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@pytest.fixture()
def ico_pc(tmp_path):
    path = tmp_path / "ico.pc"
    with open(path, "wb") as fh:
        write_planar_code(fh, [gen.named("icosahedron")])
    return str(path)


@pytest.fixture()
def mixed_g6(tmp_path):
    path = tmp_path / "mix.g6"
    graphs = [
        gen.named("icosahedron").graph,
        gen.named("octahedron").graph,
        gen.random_triangulation(20, seed=1, min_degree_target=5).graph,
    ]
    with open(path, "wb") as fh:
        write_graph6(fh, graphs)
    return str(path)


def test_extract_icosahedron_summary_row(ico_pc, tmp_path):
    certs = tmp_path / "certs.jsonl"
    code, out = run_cli(
        ["extract", "--input", ico_pc, "--format", "planar_code", "--output", str(certs)]
    )
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert lines[0].startswith("index,")
    row = lines[1].split(",")
    assert row[1:8] == ["12", "30", "5/1", "1/1", "1", "11", "11/12"]
    payload = json.loads(certs.read_text().splitlines()[0])
    assert payload["gamma"] == "1/1"
    assert len(payload["deletions"]) == 1


def test_extract_headers_embed_config_and_digest(ico_pc):
    code, out = run_cli(["extract", "--input", ico_pc, "--format", "planar_code"])
    assert code == 0
    head = out.splitlines()[:3]
    assert head[0].startswith("# planar4 ")
    assert head[1].startswith("# config {")
    assert head[2].startswith("# input_sha256 ") and len(head[2].split()[-1]) == 64


def test_extract_corrupt_file_exits_1(tmp_path):
    bad = tmp_path / "bad.pc"
    bad.write_bytes(b">>planar_code<<\x05\x01")
    code, _ = run_cli(["extract", "--input", str(bad), "--format", "planar_code"])
    assert code == 1


def test_extract_jobs_pool_matches_serial(mixed_g6, tmp_path):
    code1, out1 = run_cli(["extract", "--input", mixed_g6])
    code2, out2 = run_cli(["extract", "--input", mixed_g6, "--jobs", "2"])
    strip = lambda s: [l for l in s.splitlines() if not l.startswith("#")]
    assert code1 == code2 == 0
    assert strip(out1) == strip(out2)


def test_discharge_icosahedron_rows(ico_pc):
    code, out = run_cli(["discharge", "--input", ico_pc, "--format", "planar_code"])
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if l and not l.startswith("#")][1:]
    vertex_rows = [r for r in rows if r[2] == "vertex"]
    face_rows = [r for r in rows if r[2] == "face"]
    assert len(vertex_rows) == 12 and all(r[-1] == "1/1" for r in vertex_rows)
    assert len(face_rows) == 20 and all(r[-1] == "0/1" for r in face_rows)
    totals = [r for r in rows if r[2] == "conservation"]
    assert len(totals) == 1 and totals[0][-1] == "12/1"


def test_discharge_four_cycle_conservation_row(tmp_path):
    path = tmp_path / "c4.g6"
    with open(path, "wb") as fh:
        write_graph6(fh, [Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])])
    code, out = run_cli(["discharge", "--input", str(path)])
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if l and not l.startswith("#")][1:]
    totals = [r for r in rows if r[2] == "conservation"]
    assert totals[0][-1] == "12/1"


def test_discharge_k5_exits_1(tmp_path):
    from itertools import combinations

    path = tmp_path / "k5.g6"
    with open(path, "wb") as fh:
        write_graph6(fh, [Graph.from_edges(combinations(range(5), 2))])
    code, _ = run_cli(["discharge", "--input", str(path)])
    assert code == 1


def test_discharge_ledger_dump_at_vv(tmp_path):
    path = tmp_path / "w.pc"
    with open(path, "wb") as fh:
        write_planar_code(fh, [gen.layered_fixture([[3] * 5, [3] * 10])])
    code, out = run_cli(["discharge", "--input", str(path), "--format", "planar_code", "-vv"])
    assert code == 0
    assert any(l.startswith("# ledger 0 step2") for l in out.splitlines())


@pytest.mark.parametrize("suite", ["lemma7", "lemma9", "lemma12", "theorem1", "theorem2", "corollary3"])
def test_verify_suites_pass_on_good_corpus(mixed_g6, suite):
    code, out = run_cli(["verify", "--input", mixed_g6, "--suite", suite])
    assert code == 0, out
    rows = [l.split(",") for l in out.splitlines() if l and not l.startswith("#")][1:]
    assert len(rows) == 3
    assert all(r[2] == "1" for r in rows)


def test_verify_unknown_suite_exits_1(mixed_g6):
    code, _ = run_cli(["verify", "--input", mixed_g6, "--suite", "lemma99"])
    assert code == 1


def test_verify_certificate_suite_and_tampering(mixed_g6, tmp_path):
    certs = tmp_path / "c.jsonl"
    code, _ = run_cli(["extract", "--input", mixed_g6, "--output", str(certs)])
    assert code == 0
    code, out = run_cli(
        ["verify", "--input", mixed_g6, "--suite", "certificate", "--certificates", str(certs)]
    )
    assert code == 0
    # tamper: drop the first event of the first certificate
    lines = certs.read_text().splitlines()
    payload = json.loads(lines[0])
    payload["events"] = payload["events"][1:]
    lines[0] = json.dumps(payload)
    certs.write_text("\n".join(lines) + "\n")
    code, out = run_cli(
        ["verify", "--input", mixed_g6, "--suite", "certificate", "--certificates", str(certs)]
    )
    assert code == 2
    rows = [l.split(",") for l in out.splitlines() if not l.startswith("#")][1:]
    assert rows[0][2] == "0"


def test_gen_named_roundtrip(tmp_path):
    out = tmp_path / "dodeca.pc"
    code, _ = run_cli(
        ["gen", "--kind", "named", "--name", "dodecahedron", "--format", "planar_code",
         "--output", str(out)]
    )
    assert code == 0
    from planar4.generators import ingest_stream

    records = list(ingest_stream(str(out), "planar_code"))
    assert len(records) == 1 and len(records[0].graph) == 20


def test_gen_random_and_oracle(tmp_path):
    out = tmp_path / "rand.g6"
    code, _ = run_cli(
        ["gen", "--kind", "random", "--n", "12", "--count", "3", "--seed", "5",
         "--output", str(out)]
    )
    assert code == 0
    code, text = run_cli(["oracle", "--input", str(out)])
    assert code == 0
    rows = [l.split(",") for l in text.splitlines() if not l.startswith("#")][1:]
    assert len(rows) == 3
    for row in rows:
        assert int(row[2]) <= int(row[4]) <= int(row[5])  # optimum <= |S| <= floor(gamma)


def test_max_n_filter(mixed_g6):
    code, out = run_cli(["extract", "--input", mixed_g6, "--max-n", "10"])
    assert code == 0
    rows = [l for l in out.splitlines() if l and not l.startswith("#")][1:]
    assert len(rows) == 1  # only the octahedron survives the filter


def test_gen_all_triangulations(tmp_path):
    out = tmp_path / "t7.pc"
    code, _ = run_cli(
        ["gen", "--kind", "all-triangulations", "--n", "7", "--format", "planar_code",
         "--output", str(out)]
    )
    assert code == 0
    from planar4.generators import ingest_stream

    assert len(list(ingest_stream(str(out), "planar_code"))) == 5
