"""Depth-first sparse reconstruction with fully sequential queries.

Instead of refining every bucket per matrix column, this walker descends
one bucket at a time, asking the splitting tree of the adaptive group
tester which test vector to apply next.  A single evaluation of the
residual function (the oracle minus everything already discovered) splits
the bucket into its 0- and 1-children; vanishing children are inserted and
dropped when popped.  When the tree terminates, the bucket's label pins a
unique support of weight at most d and its sum is the coefficient.

Buckets are processed in lexicographic label order.  A plain stack that
pushes the 1-child before the 0-child realizes exactly that order; the
priority-queue variant is kept behind the scheduler switch so the
equivalence is testable.  Query count is at most 1 + s * (the splitting
tree's test budget); every query is its own adaptive round.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import ceil, log2
from typing import Mapping, TextIO

from .core import BitVector, Label
from .errors import (
    DimensionError,
    InfeasiblePrefixError,
    ParameterError,
    ReconstructionError,
)
from .grouptest import GbsaResult, gbsa_step
from .oracle import DEFAULT_TAU, CountingOracle, QueryOracle, SparsePolynomial

__all__ = ["BinRecord", "split_bin", "fasmt_run", "fasmt_run_auto_degree"]


@dataclass(frozen=True)
class BinRecord:
    """A pending bucket: its outcome label, its sum, and the union of the
    test vectors at which the label records a 0 (all the query vector
    construction needs from the path)."""

    label: Label
    value: float
    zero_union: int

    def __lt__(self, other: "BinRecord") -> bool:
        return self.label < other.label


def split_bin(
    record: BinRecord,
    test_vector: BitVector,
    f: QueryOracle,
    discovered: Mapping[BitVector, float],
) -> tuple[float, float]:
    """One residual evaluation that splits a bucket by its next test.

    Returns (0-child sum, 1-child sum); the two sums add up to the
    bucket value.
    """
    n = test_vector.n
    x = BitVector(n, ((1 << n) - 1) & ~(record.zero_union | test_vector.mask))
    value = f.eval(x)
    nx = ~x.mask
    for k, c in discovered.items():
        if k.mask & nx == 0:
            value -= c
    return value, record.value - value


def _log(transcript: TextIO | None, label: Label, x: BitVector, value: float) -> None:
    if transcript is not None:
        transcript.write(f"{label.to01()}\t{x.to01()}\t{value!r}\n")


def fasmt_run(
    f: CountingOracle,
    n: int,
    d: int,
    tau: float = DEFAULT_TAU,
    scheduler: str = "stack",
    transcript: TextIO | None = None,
) -> SparsePolynomial:
    """Recover the coefficient map of the oracle depth-first.

    Exact under the same conditions as the breadth-first runner whenever
    the true degree is at most d.  A true degree above d surfaces as
    ReconstructionError (degree overflow) carrying the offending label.
    """
    if f.n != n:
        raise DimensionError(f"oracle is over n={f.n}, expected {n}")
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    if scheduler not in ("stack", "priority"):
        raise ParameterError(f"unknown scheduler {scheduler!r}")
    ones = BitVector.ones(n)
    root = f.eval(ones)
    _log(transcript, Label.empty(), ones, root)
    discovered: dict[BitVector, float] = {}
    pending = [BinRecord(Label.empty(), root, 0)]
    cache: dict = {}
    pop = pending.pop if scheduler == "stack" else None
    while pending:
        record = pending.pop() if pop else heapq.heappop(pending)
        if abs(record.value) <= tau:
            continue
        try:
            action = gbsa_step(record.label, n, d, cache)
        except InfeasiblePrefixError as err:
            raise ReconstructionError(
                f"degree overflow at bucket {record.label.to01()!r}: {err}",
                label=record.label,
            ) from err
        if isinstance(action, GbsaResult):
            support = action.vector
            if support in discovered:
                raise ReconstructionError(
                    f"support {support.to01()!r} decoded twice", label=record.label
                )
            discovered[support] = record.value
            continue
        h = action.vector
        v0, v1 = split_bin(record, h, f, discovered)
        x = BitVector(n, ((1 << n) - 1) & ~(record.zero_union | h.mask))
        _log(transcript, record.label, x, v0)
        child0 = BinRecord(record.label.append(0), v0, record.zero_union | h.mask)
        child1 = BinRecord(record.label.append(1), v1, record.zero_union)
        if pop:
            pending.append(child1)
            pending.append(child0)
        else:
            heapq.heappush(pending, child0)
            heapq.heappush(pending, child1)
    return SparsePolynomial(n, discovered, degree_bound=d)


def fasmt_run_auto_degree(
    f: CountingOracle,
    n: int,
    d: int = 1,
    tau: float = DEFAULT_TAU,
    scheduler: str = "stack",
    transcript: TextIO | None = None,
) -> tuple[SparsePolynomial, int]:
    """Restart with doubled d on degree overflow, up to ceil(log2 n) times.

    Returns the recovered map and the degree bound that succeeded.  Queries
    from abandoned attempts stay in the counting oracle.
    """
    attempts = ceil(log2(n)) if n > 1 else 1
    bound = min(d, n)
    for _ in range(attempts + 1):
        try:
            return fasmt_run(f, n, bound, tau, scheduler, transcript), bound
        except ReconstructionError:
            if bound >= n:
                raise
            bound = min(2 * bound, n)
    raise ReconstructionError(f"no degree bound up to {bound} succeeded")
