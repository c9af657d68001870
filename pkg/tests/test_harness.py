from __future__ import annotations

import io
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparsemobius.errors import FormatError, ParameterError
from sparsemobius.harness import (
    BenchRecord,
    GridCell,
    generate_synthetic,
    lower_bound,
    optimality_ratio,
    read_csv,
    read_grid,
    run_benchmark,
    write_csv,
)
from sparsemobius.rng import (
    MAX_RANK,
    PRNG_ID,
    SplitMix64,
    random_subset,
    unrank_subset,
)


def test_splitmix_determinism_and_range():
    a, b = SplitMix64(42), SplitMix64(42)
    first = [a.next64() for _ in range(8)]
    assert first == [b.next64() for _ in range(8)]
    assert all(0 <= u < MAX_RANK for u in first)
    assert len(set(first)) == 8
    assert SplitMix64(43).next64() != first[0]
    assert PRNG_ID == "splitmix64"


def test_splitmix_seed_masking():
    assert SplitMix64(-1).state == SplitMix64(MAX_RANK - 1).state


def test_below_hits_every_residue():
    rng = SplitMix64(7)
    seen = {rng.below(5) for _ in range(200)}
    assert seen == {0, 1, 2, 3, 4}
    assert rng.below(1) == 0
    with pytest.raises(ParameterError):
        rng.below(0)


def test_uniform_stays_in_range():
    rng = SplitMix64(9)
    draws = [rng.uniform(1.0, 2.0) for _ in range(500)]
    assert all(1.0 <= v < 2.0 for v in draws)
    assert max(draws) - min(draws) > 0.5


def test_unrank_subset_is_lexicographic():
    ranked = [unrank_subset(6, 3, r) for r in range(20)]
    assert ranked == sorted(set(combinations(range(1, 7), 3)))
    assert unrank_subset(5, 0, 0) == ()
    assert unrank_subset(5, 5, 0) == (1, 2, 3, 4, 5)
    with pytest.raises(ParameterError):
        unrank_subset(6, 3, 20)


@given(st.integers(1, 40), st.data())
def test_random_subset_shape(n, data):
    c = data.draw(st.integers(0, min(n, 6)))
    rng = SplitMix64(data.draw(st.integers(0, 2**32)))
    coords = random_subset(rng, n, c)
    assert len(coords) == c
    assert len(set(coords)) == c
    assert coords == tuple(sorted(coords))
    assert all(1 <= v <= n for v in coords)


def test_random_subset_rank_space_guard():
    rng = SplitMix64(0)
    with pytest.raises(ParameterError):
        random_subset(rng, 2000, 500)
    with pytest.raises(ParameterError):
        random_subset(rng, 4, 5)


def test_generate_synthetic_determinism():
    a = generate_synthetic(32, 6, 3, seed=5)
    b = generate_synthetic(32, 6, 3, seed=5)
    assert a == b
    assert a != generate_synthetic(32, 6, 3, seed=6)


def test_generate_synthetic_shape():
    poly = generate_synthetic(24, 8, 3, seed=11)
    assert poly.n == 24
    assert poly.sparsity <= 8
    assert poly.degree_bound == 3
    assert all(1 <= k.weight() <= 3 for k in poly.entries)
    assert all(1.0 <= v < 2.0 for v in poly.entries.values())


def test_generate_synthetic_weight_range():
    poly = generate_synthetic(10, 4, 2, seed=3, weight_lo=5.0, weight_hi=6.0)
    assert all(5.0 <= v < 6.0 for v in poly.entries.values())
    with pytest.raises(ParameterError):
        generate_synthetic(10, 4, 2, seed=3, weight_lo=2.0, weight_hi=2.0)


def test_generate_synthetic_validation():
    with pytest.raises(ParameterError):
        generate_synthetic(0, 1, 1, seed=0)
    with pytest.raises(ParameterError):
        generate_synthetic(8, 2, 9, seed=0)
    with pytest.raises(ParameterError):
        generate_synthetic(8, -1, 2, seed=0)
    with pytest.raises(ParameterError):
        generate_synthetic(2000, 4, 500, seed=0)


def test_generate_synthetic_zero_sparsity():
    poly = generate_synthetic(8, 0, 2, seed=1)
    assert poly.sparsity == 0


def test_lower_bound_value():
    assert abs(lower_bound(1024, 16, 4) - 512 / 9) < 1e-12
    with pytest.raises(ParameterError):
        lower_bound(1024, 1, 4)
    with pytest.raises(ParameterError):
        lower_bound(4, 16, 4)


def test_optimality_ratio_value():
    assert abs(optimality_ratio(1000, 1024, 16, 4) - 7.8125) < 1e-12
    with pytest.raises(ParameterError):
        optimality_ratio(1000, 1024, 1, 4)
    with pytest.raises(ParameterError):
        optimality_ratio(-1, 1024, 16, 4)


def test_run_benchmark_small_grid():
    grid = [
        GridCell("pasmt", 16, 3, 2, 1),
        GridCell("fasmt", 16, 3, 2, 1),
        GridCell("hybrid", 16, 3, 2, 1),
        GridCell("fasmt", 8, 1, 1, 2),
    ]
    records = run_benchmark(grid)
    assert len(records) == 4
    assert all(rec.exact for rec in records)
    assert all(rec.queries >= 1 for rec in records)
    assert all(rec.rounds >= 1 for rec in records)
    assert all(rec.runtime_ms >= 0 for rec in records)
    by_alg = {rec.algorithm: rec for rec in records[:3]}
    assert by_alg["pasmt"].rounds < by_alg["fasmt"].rounds
    last = records[3]
    assert last.s_actual == 1
    assert last.lower_bound is None
    assert last.optimality_ratio is None


def test_run_benchmark_flags_failures():
    # an absurd tolerance prunes every bucket, so recovery comes back empty
    records = run_benchmark([GridCell("fasmt", 12, 5, 2, 0)], tau=10.0)
    assert not records[0].exact
    assert records[0].queries >= 1
    with pytest.raises(ParameterError):
        run_benchmark([GridCell("nope", 8, 2, 1, 0)])


def test_csv_round_trip(tmp_path):
    grid = [GridCell("fasmt", 16, 3, 2, 1), GridCell("pasmt", 8, 1, 1, 2)]
    records = run_benchmark(grid)
    path = tmp_path / "bench.csv"
    write_csv(records, path)
    text = path.read_text()
    assert text.startswith(f"# prng={PRNG_ID}\n")
    prng_id, back = read_csv(path)
    assert prng_id == PRNG_ID
    assert back == records


def test_csv_errors():
    with pytest.raises(FormatError):
        read_csv(io.StringIO("algorithm,n\n"))
    with pytest.raises(FormatError):
        read_csv(io.StringIO("# prng=splitmix64\nalgorithm,n\nx,1\n"))
    header = "# prng=splitmix64\nalgorithm,n,s_requested,s_actual,d,seed,queries,rounds,runtime_ms,exact,lower_bound,optimality_ratio\n"
    with pytest.raises(FormatError) as info:
        read_csv(io.StringIO(header + "fasmt,8,2,2,1,0,9,9,0.5,true,bad,\n"))
    assert info.value.line == 3


def test_read_grid():
    text = "# comment\npasmt 16 3 2 1\nfasmt 8 2 1 5 # inline\n\n"
    cells = read_grid(io.StringIO(text))
    assert cells == [GridCell("pasmt", 16, 3, 2, 1), GridCell("fasmt", 8, 2, 1, 5)]
    with pytest.raises(FormatError):
        read_grid(io.StringIO("pasmt 16 3 2\n"))
    with pytest.raises(FormatError):
        read_grid(io.StringIO("magic 16 3 2 1\n"))
    with pytest.raises(FormatError):
        read_grid(io.StringIO("pasmt 16 x 2 1\n"))


def test_bench_record_none_bounds_round_trip():
    rec = BenchRecord(
        algorithm="fasmt",
        n=4,
        s_requested=1,
        s_actual=1,
        d=1,
        seed=0,
        queries=3,
        rounds=3,
        runtime_ms=0.25,
        exact=True,
        lower_bound=None,
        optimality_ratio=None,
    )
    buf = io.StringIO()
    write_csv([rec], buf)
    buf.seek(0)
    _, back = read_csv(buf)
    assert back == [rec]
