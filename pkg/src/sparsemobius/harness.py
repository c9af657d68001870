"""Synthetic instances, information-theoretic bounds, and the benchmark loop.

Instances are random weighted hypergraphs: each edge draws a cardinality
uniform on {1..d}, then a uniform vertex set of that cardinality by
combinatorial unranking, then (after duplicate vertex-sets are dropped) an
independent weight uniform on [weight_lo, weight_hi).  The default weight
range [1, 2) keeps every coefficient positive, which guarantees the
subset-sum independence the pruning rule needs.  All randomness comes from
the named 64-bit generator in rng, recorded in the CSV header, so a seed
pins the instance bit for bit.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from dataclasses import dataclass
from typing import Sequence, TextIO

from .core import BitVector, TestMatrix
from .errors import FormatError, ParameterError, SparseMobiusError
from .fasmt import fasmt_run
from .grouptest import construct_disjunct, identity_matrix
from .hybrid import hybrid_run
from .oracle import CountingOracle, SparsePolynomial, SparsePolyOracle
from .pasmt import pasmt_run
from .rng import PRNG_ID, MAX_RANK, SplitMix64, unrank_subset

__all__ = [
    "ALGORITHMS",
    "BenchRecord",
    "GridCell",
    "generate_synthetic",
    "lower_bound",
    "optimality_ratio",
    "run_benchmark",
    "write_csv",
    "read_csv",
    "read_grid",
]

ALGORITHMS = ("pasmt", "fasmt", "hybrid")

CSV_FIELDS = [
    "algorithm",
    "n",
    "s_requested",
    "s_actual",
    "d",
    "seed",
    "queries",
    "rounds",
    "runtime_ms",
    "exact",
    "lower_bound",
    "optimality_ratio",
]


def generate_synthetic(
    n: int,
    s: int,
    d: int,
    seed: int,
    weight_lo: float = 1.0,
    weight_hi: float = 2.0,
) -> SparsePolynomial:
    """Random s-sparse degree <= d instance; duplicates may shrink s."""
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    if not 1 <= d <= n:
        raise ParameterError(f"need 1 <= d <= n, got d={d}")
    if s < 0:
        raise ParameterError(f"need s >= 0, got {s}")
    if not weight_lo < weight_hi:
        raise ParameterError(f"empty weight range [{weight_lo}, {weight_hi})")
    for c in range(1, d + 1):
        if math.comb(n, c) > MAX_RANK:
            raise ParameterError(
                f"C({n},{c}) exceeds the 64-bit rank space of the generator"
            )
    rng = SplitMix64(seed)
    supports: list[BitVector] = []
    seen: set[BitVector] = set()
    for _ in range(s):
        c = 1 + rng.below(d)
        rank = rng.below(math.comb(n, c))
        support = BitVector.from_coords(n, unrank_subset(n, c, rank))
        if support not in seen:
            seen.add(support)
            supports.append(support)
    entries = {k: rng.uniform(weight_lo, weight_hi) for k in supports}
    return SparsePolynomial(n, entries, degree_bound=d)


def lower_bound(n: int, s: int, d: int) -> float:
    """Minimum query count any exact reconstructor needs on this class."""
    if s < 2 or d < 1 or n <= d:
        raise ParameterError(
            f"bound needs s >= 2, d >= 1, n > d; got n={n}, s={s}, d={d}"
        )
    return s * d * math.log2(n / d) / (2 * math.log2(s) + 1)


def optimality_ratio(queries: int, n: int, s: int, d: int) -> float:
    """Observed queries against the information-theoretic scaling."""
    if s < 2 or d < 1 or n <= d:
        raise ParameterError(
            f"ratio needs s >= 2, d >= 1, n > d; got n={n}, s={s}, d={d}"
        )
    if queries < 0:
        raise ParameterError(f"need queries >= 0, got {queries}")
    return queries * math.log2(s) / (s * d * math.log2(n / d))


@dataclass(frozen=True)
class GridCell:
    """One benchmark configuration."""

    algorithm: str
    n: int
    s: int
    d: int
    seed: int


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark run.  The bound fields are None when undefined
    (s_actual < 2 or n <= d)."""

    algorithm: str
    n: int
    s_requested: int
    s_actual: int
    d: int
    seed: int
    queries: int
    rounds: int
    runtime_ms: float
    exact: bool
    lower_bound: float | None
    optimality_ratio: float | None


def _dispatch(
    cell: GridCell,
    oracle: CountingOracle,
    tau: float,
    matrices: dict[tuple[int, int], TestMatrix],
) -> SparsePolynomial:
    if cell.algorithm == "pasmt":
        key = (cell.n, cell.d)
        if key not in matrices:
            if cell.d < cell.n:
                matrices[key] = construct_disjunct(cell.n, cell.d)
            else:
                matrices[key] = identity_matrix(cell.n)
        return pasmt_run(oracle, matrices[key], cell.d, tau)
    if cell.algorithm == "fasmt":
        return fasmt_run(oracle, cell.n, cell.d, tau)
    if cell.algorithm == "hybrid":
        return hybrid_run(oracle, cell.n, cell.d, cell.seed, tau)
    raise ParameterError(f"unknown algorithm {cell.algorithm!r}")


def run_benchmark(
    grid: Sequence[GridCell],
    tau: float = 1e-9,
    value_tol: float = 1e-9,
) -> list[BenchRecord]:
    """Generate, reconstruct, and score every cell of the grid."""
    for cell in grid:
        if cell.algorithm not in ALGORITHMS:
            raise ParameterError(f"unknown algorithm {cell.algorithm!r}")
    records = []
    matrices: dict[tuple[int, int], TestMatrix] = {}
    for cell in grid:
        truth = generate_synthetic(cell.n, cell.s, cell.d, cell.seed)
        oracle = CountingOracle(SparsePolyOracle(truth))
        start = time.perf_counter()
        try:
            recovered = _dispatch(cell, oracle, tau, matrices)
            exact = recovered.close_to(truth, value_tol)
        except SparseMobiusError:
            exact = False
        runtime_ms = (time.perf_counter() - start) * 1e3
        s_actual = truth.sparsity
        definable = s_actual >= 2 and cell.n > cell.d
        records.append(
            BenchRecord(
                algorithm=cell.algorithm,
                n=cell.n,
                s_requested=cell.s,
                s_actual=s_actual,
                d=cell.d,
                seed=cell.seed,
                queries=oracle.query_count,
                rounds=oracle.round_count,
                runtime_ms=runtime_ms,
                exact=exact,
                lower_bound=lower_bound(cell.n, s_actual, cell.d) if definable else None,
                optimality_ratio=(
                    optimality_ratio(oracle.query_count, cell.n, s_actual, cell.d)
                    if definable
                    else None
                ),
            )
        )
    return records


def write_csv(records: Sequence[BenchRecord], sink: str | os.PathLike | TextIO) -> None:
    """Write records with the generator identifier pinned in a comment."""
    out = io.StringIO()
    out.write(f"# prng={PRNG_ID}\n")
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = {name: getattr(rec, name) for name in CSV_FIELDS}
        row["exact"] = "true" if rec.exact else "false"
        row["runtime_ms"] = repr(rec.runtime_ms)
        row["lower_bound"] = "" if rec.lower_bound is None else repr(rec.lower_bound)
        row["optimality_ratio"] = (
            "" if rec.optimality_ratio is None else repr(rec.optimality_ratio)
        )
        writer.writerow(row)
    text = out.getvalue()
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="ascii") as handle:
            handle.write(text)
    else:
        sink.write(text)


def read_csv(source: str | os.PathLike | TextIO) -> tuple[str, list[BenchRecord]]:
    """Read back (generator identifier, records); inverse of write_csv."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="ascii") as handle:
            lines = handle.read().splitlines()
    else:
        lines = source.read().splitlines()
    if not lines or not lines[0].startswith("# prng="):
        raise FormatError("missing '# prng=' header", 1)
    prng_id = lines[0].removeprefix("# prng=")
    reader = csv.DictReader(lines[1:])
    if reader.fieldnames != CSV_FIELDS:
        raise FormatError(f"unexpected columns {reader.fieldnames}", 2)
    records = []
    for lineno, row in enumerate(reader, start=3):
        try:
            records.append(
                BenchRecord(
                    algorithm=row["algorithm"],
                    n=int(row["n"]),
                    s_requested=int(row["s_requested"]),
                    s_actual=int(row["s_actual"]),
                    d=int(row["d"]),
                    seed=int(row["seed"]),
                    queries=int(row["queries"]),
                    rounds=int(row["rounds"]),
                    runtime_ms=float(row["runtime_ms"]),
                    exact={"true": True, "false": False}[row["exact"]],
                    lower_bound=float(row["lower_bound"]) if row["lower_bound"] else None,
                    optimality_ratio=(
                        float(row["optimality_ratio"])
                        if row["optimality_ratio"]
                        else None
                    ),
                )
            )
        except (KeyError, ValueError) as err:
            raise FormatError(f"bad record: {err}", lineno) from None
    return prng_id, records


def read_grid(source: str | os.PathLike | TextIO) -> list[GridCell]:
    """Read 'algorithm n s d seed' lines; '#' starts a comment."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="ascii") as handle:
            lines = handle.read().splitlines()
    else:
        lines = source.read().splitlines()
    cells = []
    for lineno, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 5:
            raise FormatError("expected 'algorithm n s d seed'", lineno)
        algorithm = parts[0]
        if algorithm not in ALGORITHMS:
            raise FormatError(f"unknown algorithm {algorithm!r}", lineno)
        try:
            n, s, d, seed = (int(p) for p in parts[1:])
        except ValueError:
            raise FormatError("n, s, d, seed must be integers", lineno) from None
        cells.append(GridCell(algorithm, n, s, d, seed))
    return cells
