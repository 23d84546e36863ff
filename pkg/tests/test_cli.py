import gzip
import json

import pytest

from subcycle import RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF
from subcycle.cli import main

from conftest import TANGLE_EDGES


def iri(n) -> str:
    return f"http://example.org/c{n}"


def nt_lines(edges, predicate=RDFS_SUBCLASSOF) -> str:
    return "".join(f"<{iri(u)}> <{predicate}> <{iri(v)}> .\n" for u, v in edges)


@pytest.fixture
def tangle_file(tmp_path):
    path = tmp_path / "tangle.nt"
    path.write_text(nt_lines(TANGLE_EDGES))
    return path


def run_resolve(tmp_path, input_path, *extra):
    args = [
        "resolve",
        "--input", str(input_path),
        "--out-clean", str(tmp_path / "clean.nt"),
        "--out-removed", str(tmp_path / "removed.nt"),
        "--out-report", str(tmp_path / "report.json"),
        "--seed", "11",
        *extra,
    ]
    return main(args)


def test_resolve_tangle_end_to_end(tmp_path, tangle_file):
    assert run_resolve(tmp_path, tangle_file) == 0
    clean = (tmp_path / "clean.nt").read_text().splitlines()
    removed = (tmp_path / "removed.nt").read_text().splitlines()
    assert len(clean) == 10
    assert len(removed) == 5
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["status"] == "acyclic"
    assert report["counts"]["removed_total"] == 5
    assert report["counts"]["input_edges"] == 15
    assert report["counts"]["by_reason"] == {"maxsat": 5}
    assert report["schema_version"] == 1
    # the sidecar mirrors the removed file line for line
    sidecar = (tmp_path / "removed.nt.tsv").read_text().splitlines()
    assert len(sidecar) == 5
    for line in sidecar:
        src, dst, reason, iteration = line.split("\t")
        assert reason == "maxsat" and iteration == "0"
    # clean output passes the checker
    assert main(["check", "--input", str(tmp_path / "clean.nt")]) == 0


def test_resolve_outputs_partition_the_input(tmp_path, tangle_file):
    run_resolve(tmp_path, tangle_file)
    original = set(nt_lines(TANGLE_EDGES).splitlines())
    clean = set((tmp_path / "clean.nt").read_text().splitlines())
    removed = set((tmp_path / "removed.nt").read_text().splitlines())
    assert clean | removed == original
    assert not (clean & removed)


def test_resolve_acyclic_input(tmp_path):
    path = tmp_path / "dag.nt"
    path.write_text(nt_lines([(1, 2), (2, 3), (1, 2)]))  # one duplicate
    assert run_resolve(tmp_path, path) == 0
    clean = (tmp_path / "clean.nt").read_text()
    assert clean == nt_lines([(1, 2), (2, 3)])
    assert (tmp_path / "removed.nt").read_text() == ""
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["ingest"]["duplicate_edges"] == 1
    assert report["iterations"] == []


def test_resolve_gzipped_input(tmp_path):
    path = tmp_path / "tangle.nt.gz"
    path.write_bytes(gzip.compress(nt_lines(TANGLE_EDGES).encode()))
    assert run_resolve(tmp_path, path) == 0


def test_resolve_reflexive_and_equivalence_reasons(tmp_path):
    owl_eq = "http://www.w3.org/2002/07/owl#equivalentClass"
    text = nt_lines([(1, 1), (1, 2), (2, 1), (2, 3)]) + f"<{iri(1)}> <{owl_eq}> <{iri(2)}> .\n"
    path = tmp_path / "mixed.nt"
    path.write_text(text)
    assert run_resolve(tmp_path, path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["counts"]["by_reason"] == {"reflexive": 1, "equivalence": 2}
    sidecar = (tmp_path / "removed.nt.tsv").read_text().splitlines()
    assert [line.split("\t")[2] for line in sidecar] == ["reflexive", "equivalence", "equivalence"]
    assert all(line.split("\t")[3] == "" for line in sidecar)


def test_resolve_no_equiv_from_input(tmp_path):
    owl_eq = "http://www.w3.org/2002/07/owl#equivalentClass"
    text = nt_lines([(1, 2), (2, 1)]) + f"<{iri(1)}> <{owl_eq}> <{iri(2)}> .\n"
    path = tmp_path / "mixed.nt"
    path.write_text(text)
    assert run_resolve(tmp_path, path, "--no-equiv-from-input") == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["counts"]["by_reason"] == {"maxsat": 1}


def test_resolve_sameas_side_file(tmp_path):
    path = tmp_path / "g.nt"
    path.write_text(nt_lines([(1, 2), (2, 3)]))
    sameas = tmp_path / "pairs.tsv"
    sameas.write_text(f"{iri(1)}\t{iri(2)}\n")
    assert run_resolve(tmp_path, path, "--sameas", str(sameas)) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["counts"]["by_reason"] == {"sameas": 1}


def test_resolve_subproperty_predicate(tmp_path):
    path = tmp_path / "props.nt"
    path.write_text(nt_lines([(1, 2), (2, 1)], predicate=RDFS_SUBPROPERTYOF))
    assert run_resolve(tmp_path, path, "--predicate", RDFS_SUBPROPERTYOF) == 0
    assert len((tmp_path / "clean.nt").read_text().splitlines()) == 1
    assert RDFS_SUBPROPERTYOF in (tmp_path / "clean.nt").read_text()


def test_resolve_wcnf_dir(tmp_path, tangle_file):
    assert run_resolve(tmp_path, tangle_file, "--wcnf-dir", str(tmp_path / "wcnf")) == 0
    dumps = sorted((tmp_path / "wcnf").iterdir())
    assert [p.name for p in dumps] == ["iteration_00000.wcnf"]
    assert dumps[0].read_text().startswith("p wcnf 15 27 16\n")


def test_resolve_rejects_colliding_outputs(tmp_path, tangle_file):
    code = main([
        "resolve",
        "--input", str(tangle_file),
        "--out-clean", str(tmp_path / "same.nt"),
        "--out-removed", str(tmp_path / "same.nt"),
        "--out-report", str(tmp_path / "report.json"),
    ])
    assert code == 1


def test_resolve_missing_input_fails(tmp_path):
    assert run_resolve(tmp_path, tmp_path / "absent.nt") == 1


def test_resolve_timeout_exit_code_and_partial_outputs(tmp_path, tangle_file):
    assert run_resolve(tmp_path, tangle_file, "--timeout", "0") == 2
    # partial outputs exist; nothing was removed in zero time
    clean = set((tmp_path / "clean.nt").read_text().splitlines())
    assert clean == set(nt_lines(TANGLE_EDGES).splitlines())
    assert (tmp_path / "removed.nt").read_text() == ""
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["status"] == "timeout"


def test_seed_env_var_fallback(tmp_path, tangle_file, monkeypatch):
    monkeypatch.setenv("SUBCYCLE_SEED", "11")
    code = main([
        "resolve",
        "--input", str(tangle_file),
        "--out-clean", str(tmp_path / "c.nt"),
        "--out-removed", str(tmp_path / "r.nt"),
        "--out-report", str(tmp_path / "rep.json"),
    ])
    assert code == 0
    report = json.loads((tmp_path / "rep.json").read_text())
    assert report["config"]["seed"] == 11


# -- check -------------------------------------------------------------------


def test_check_cyclic_exit_and_witness(tmp_path, tangle_file, capsys):
    assert main(["check", "--input", str(tangle_file)]) == 3
    out = capsys.readouterr().out
    assert out.startswith("cyclic: witness ")
    assert "->" in out


def test_check_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.nt"
    path.write_text("")
    assert main(["check", "--input", str(path)]) == 0
    assert "acyclic" in capsys.readouterr().out


# -- closure -----------------------------------------------------------------


def test_closure_chain(tmp_path, capsys):
    path = tmp_path / "chain.nt"
    path.write_text(nt_lines([(1, 2), (2, 3)]))
    assert main(["closure", "--input", str(path), iri(1)]) == 0
    assert capsys.readouterr().out.splitlines() == [iri(2), iri(3)]


def test_closure_sink_prints_nothing(tmp_path, capsys):
    path = tmp_path / "chain.nt"
    path.write_text(nt_lines([(1, 2), (2, 3)]))
    assert main(["closure", "--input", str(path), iri(3)]) == 0
    assert capsys.readouterr().out == ""


def test_closure_refuses_cyclic(tmp_path, tangle_file, capsys):
    assert main(["closure", "--input", str(tangle_file), iri(1)]) == 4
    assert "witness" in capsys.readouterr().err


def test_closure_unknown_iri(tmp_path, capsys):
    path = tmp_path / "chain.nt"
    path.write_text(nt_lines([(1, 2)]))
    assert main(["closure", "--input", str(path), "http://example.org/other"]) == 5


# -- sweep -------------------------------------------------------------------


def test_sweep_single_cell(tmp_path):
    path = tmp_path / "g.nt"
    path.write_text(nt_lines([(1, 2), (2, 1), (2, 3), (3, 2)]))
    out = tmp_path / "sweep.csv"
    code = main([
        "sweep", "--input", str(path), "--B", "60", "--runs", "1",
        "--seed", "5", "--out-csv", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "B,run,seed,removed,iterations,wall_ms,status"
    assert len(lines) == 3  # header + 1 data row + 1 summary row
    assert lines[1].startswith("60,0,")
    assert lines[2].startswith("60,mean/std,,2.000/0.000,")


def test_sweep_deterministic_apart_from_wall(tmp_path):
    path = tmp_path / "g.nt"
    path.write_text(nt_lines([(1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 1)]))

    def run(idx):
        out = tmp_path / f"sweep{idx}.csv"
        main(["sweep", "--input", str(path), "--B", "4", "--B", "8",
              "--runs", "2", "--seed", "7", "--out-csv", str(out)])
        rows = [line.split(",") for line in out.read_text().splitlines()]
        return [r[:5] + r[6:] for r in rows]  # drop the wall_ms column

    assert run(0) == run(1)
