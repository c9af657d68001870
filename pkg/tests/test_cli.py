from __future__ import annotations

import pytest

from sparsemobius.cli import main
from sparsemobius.core import BitVector
from sparsemobius.harness import read_csv
from sparsemobius.oracle import (
    SparsePolynomial,
    read_polynomial,
    write_polynomial,
)


def bv(text: str) -> BitVector:
    return BitVector.from01(text)


def write_poly_file(path, poly):
    write_polynomial(poly, path)
    return str(path)


def test_gen_writes_instance(tmp_path, capsys):
    out = tmp_path / "inst.txt"
    assert main(["gen", "--n", "10", "--s", "3", "--d", "2", "--seed", "5", "--out", str(out)]) == 0
    msg = capsys.readouterr().out
    assert "wrote n=10" in msg
    poly = read_polynomial(out)
    assert poly.n == 10
    assert poly.sparsity <= 3


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    main(["gen", "--n", "12", "--s", "4", "--d", "2", "--seed", "9", "--out", str(a)])
    main(["gen", "--n", "12", "--s", "4", "--d", "2", "--seed", "9", "--out", str(b)])
    assert a.read_text() == b.read_text()


def test_gen_weight_range_flags(tmp_path):
    out = tmp_path / "w.txt"
    args = ["gen", "--n", "10", "--s", "4", "--d", "2", "--seed", "7", "--out", str(out)]
    assert main(args + ["--wlo", "5.0", "--whi", "6.0"]) == 0
    poly = read_polynomial(out)
    assert all(5.0 <= v < 6.0 for v in poly.entries.values())
    # defaults stay [1, 2)
    assert main(args) == 0
    poly = read_polynomial(out)
    assert all(1.0 <= v < 2.0 for v in poly.entries.values())


@pytest.mark.parametrize("alg", ["pasmt", "fasmt", "hybrid"])
def test_reconstruct_round_trip(tmp_path, capsys, alg):
    inst = tmp_path / "inst.txt"
    main(["gen", "--n", "12", "--s", "3", "--d", "2", "--seed", "3", "--out", str(inst)])
    truth = read_polynomial(inst)
    out = tmp_path / "rec.txt"
    code = main([
        "reconstruct", "--alg", alg, "--input", str(inst),
        "--d", "2", "--out", str(out),
    ])
    assert code == 0
    assert read_polynomial(out).close_to(truth, 1e-9)
    msg = capsys.readouterr().out
    assert f"algorithm={alg}" in msg
    assert "queries=" in msg and "rounds=" in msg


def test_reconstruct_writes_transcript(tmp_path):
    inst = tmp_path / "inst.txt"
    main(["gen", "--n", "8", "--s", "2", "--d", "1", "--seed", "4", "--out", str(inst)])
    out = tmp_path / "rec.txt"
    transcript = tmp_path / "queries.tsv"
    main([
        "reconstruct", "--alg", "fasmt", "--input", str(inst),
        "--d", "1", "--out", str(out), "--transcript", str(transcript),
    ])
    lines = transcript.read_text().splitlines()
    assert lines
    label, x, _ = lines[0].split("\t")
    assert label == ""
    assert x == "1" * 8


def test_reconstruct_hypergraph_autodetect(tmp_path, capsys):
    graph = tmp_path / "graph.txt"
    graph.write_text("6 2\n3 1 2\n-1 4\n")
    out = tmp_path / "rec.txt"
    assert main([
        "reconstruct", "--alg", "fasmt", "--input", str(graph),
        "--d", "2", "--out", str(out),
    ]) == 0
    got = read_polynomial(out)
    assert got.entries == {bv("110000"): 3, bv("000100"): -1}
    assert all(isinstance(v, int) for v in got.entries.values())


def test_reconstruct_explicit_format(tmp_path):
    inst = tmp_path / "poly.txt"
    write_poly_file(inst, SparsePolynomial(4, {bv("1100"): 2.0}))
    out = tmp_path / "rec.txt"
    assert main([
        "reconstruct", "--alg", "pasmt", "--input", str(inst),
        "--format", "poly", "--d", "2", "--out", str(out),
    ]) == 0
    assert read_polynomial(out).entries == {bv("1100"): 2.0}


def test_reconstruct_degree_overflow_exits_2(tmp_path, capsys):
    inst = tmp_path / "deep.txt"
    write_poly_file(inst, SparsePolynomial(8, {bv("11100000"): 1.0}))
    out = tmp_path / "rec.txt"
    code = main([
        "reconstruct", "--alg", "fasmt", "--input", str(inst),
        "--d", "2", "--out", str(out),
    ])
    assert code == 2
    assert "reconstruction failed" in capsys.readouterr().err


def test_verify_match(tmp_path, capsys):
    inst = tmp_path / "inst.txt"
    main(["gen", "--n", "10", "--s", "3", "--d", "2", "--seed", "8", "--out", str(inst)])
    assert main(["verify", "--alg", "fasmt", "--input", str(inst), "--d", "2"]) == 0
    assert "spectra match" in capsys.readouterr().out


def test_verify_mismatch_exits_3(tmp_path, capsys):
    # +1 and -1 cancel at the root, silencing the adaptive runners; the
    # exhaustive baseline still sees both coefficients
    inst = tmp_path / "cancel.txt"
    write_poly_file(inst, SparsePolynomial(4, {bv("1000"): 1.0, bv("0100"): -1.0}))
    code = main(["verify", "--alg", "fasmt", "--input", str(inst), "--d", "1"])
    assert code == 3
    assert "MISMATCH" in capsys.readouterr().out


def test_verify_caps_dimension(tmp_path, capsys):
    inst = tmp_path / "big.txt"
    write_poly_file(inst, SparsePolynomial(13, {bv("1" + "0" * 12): 1.0}))
    code = main(["verify", "--alg", "fasmt", "--input", str(inst), "--d", "1"])
    assert code == 1
    assert "invalid input" in capsys.readouterr().err


def test_bench_runs_grid(tmp_path, capsys):
    grid = tmp_path / "grid.txt"
    grid.write_text("# small grid\npasmt 10 2 1 1\nfasmt 10 2 1 1\nhybrid 10 2 1 1\n")
    out = tmp_path / "bench.csv"
    assert main(["bench", "--grid", str(grid), "--out", str(out)]) == 0
    assert "ran 3 cells, 0 inexact" in capsys.readouterr().out
    _, records = read_csv(out)
    assert [r.algorithm for r in records] == ["pasmt", "fasmt", "hybrid"]
    assert all(r.exact for r in records)


def test_bound_prints_value(capsys):
    assert main(["bound", "--n", "1024", "--s", "16", "--d", "4"]) == 0
    assert abs(float(capsys.readouterr().out) - 512 / 9) < 1e-12


def test_bound_rejects_undefined(capsys):
    assert main(["bound", "--n", "4", "--s", "16", "--d", "4"]) == 1
    assert "invalid input" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path, capsys):
    code = main([
        "reconstruct", "--alg", "fasmt", "--input", str(tmp_path / "nope.txt"),
        "--d", "1", "--out", str(tmp_path / "rec.txt"),
    ])
    assert code == 1
    assert "i/o error" in capsys.readouterr().err


def test_malformed_file_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("4 1\n1.0 01\n")
    code = main([
        "reconstruct", "--alg", "fasmt", "--input", str(bad),
        "--format", "poly", "--d", "1", "--out", str(tmp_path / "rec.txt"),
    ])
    assert code == 1
    assert "invalid input" in capsys.readouterr().err
    garbled = tmp_path / "garbled.txt"
    garbled.write_text("4 1\n1.0 01x\n")
    code = main([
        "reconstruct", "--alg", "fasmt", "--input", str(garbled),
        "--d", "1", "--out", str(tmp_path / "rec.txt"),
    ])
    assert code == 1


def test_bad_arguments_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["reconstruct", "--alg", "nope", "--input", "x", "--d", "1", "--out", "y"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_entry_point_install():
    import shutil
    import subprocess

    exe = shutil.which("sparsemobius")
    assert exe is not None
    done = subprocess.run(
        [exe, "bound", "--n", "1024", "--s", "16", "--d", "4"],
        capture_output=True,
        text=True,
    )
    assert done.returncode == 0
    assert abs(float(done.stdout) - 512 / 9) < 1e-12
