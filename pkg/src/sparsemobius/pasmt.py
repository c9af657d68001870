"""Breadth-first sparse reconstruction over a fixed disjunct test matrix.

The hidden coefficients are bucketed by the outcome string (label) their
support produces against a growing prefix of the matrix columns.  One
adaptive round per column refines every surviving bucket at once: a single
evaluation per bucket yields a unit lower-triangular system in label order
whose solution is the 0-child sums; 1-child sums follow by conservation,
and buckets whose sum vanishes are dropped.  After all b columns each
surviving bucket holds exactly one coefficient and its full syndrome, which
the disjunct decoder turns back into a support.

The query count is at most s*b + 1 and the number of adaptive rounds is
b + 1, independent of s (the all-ones root query is its own round).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, TextIO

from .core import BitVector, Label, TestMatrix
from .errors import DecodeError, DimensionError, ParameterError, ReconstructionError
from .grouptest import decode_disjunct
from .oracle import DEFAULT_TAU, CountingOracle, SparsePolynomial

__all__ = ["LevelState", "solve_bin_system", "pasmt_run"]


@dataclass(frozen=True)
class LevelState:
    """Surviving buckets after some number of refinement rounds."""

    depth: int
    labels: tuple[Label, ...]
    values: tuple[float, ...]


def solve_bin_system(labels: list[Label], measurements: list[float]) -> list[float]:
    """Back-substitute bucket sums from downward-closed measurements.

    Measurement i sums the unknowns of every label componentwise below
    label i, and the labels arrive in strictly increasing lexicographic
    order, so the system is unit lower triangular.
    """
    if len(labels) != len(measurements):
        raise DimensionError(
            f"{len(labels)} labels but {len(measurements)} measurements"
        )
    length = labels[0].length if labels else 0
    for a, b in zip(labels, labels[1:]):
        if not a < b:
            raise ParameterError("labels must be strictly increasing")
    masks = []
    for lab in labels:
        if lab.length != length:
            raise DimensionError("labels must share one length")
        masks.append(lab.mask)
    solution: list[float] = []
    for i, m in enumerate(measurements):
        acc = m
        target = masks[i]
        for j in range(i):
            if masks[j] & ~target == 0:
                acc -= solution[j]
        solution.append(acc)
    return solution


def _log(transcript: TextIO | None, label: Label, x: BitVector, value: float) -> None:
    if transcript is not None:
        transcript.write(f"{label.to01()}\t{x.to01()}\t{value!r}\n")


def refine_levels(
    f: CountingOracle,
    H: TestMatrix,
    tau: float,
    transcript: TextIO | None = None,
    on_level: Callable[[LevelState], None] | None = None,
) -> list[tuple[Label, float, int]]:
    """Run the level loop and return surviving leaf buckets.

    Each returned triple is (full-length label, bucket sum, union of the
    columns at which the label records a 0).  The root evaluation and each
    level are separate batches.  An all-zero root returns no buckets.
    """
    n = f.n
    if H.n != n:
        raise DimensionError(f"matrix is over n={H.n}, oracle over n={n}")
    full = (1 << n) - 1
    ones = BitVector.ones(n)
    root = f.batch_eval([ones])[0]
    _log(transcript, Label.empty(), ones, root)
    if abs(root) <= tau:
        return []
    labels = [Label.empty()]
    values = [root]
    unions = [0]
    if on_level is not None:
        on_level(LevelState(0, tuple(labels), tuple(values)))
    for t in range(H.b):
        col = H.column(t).mask
        queries = [BitVector(n, full & ~(u | col)) for u in unions]
        measurements = f.batch_eval(queries)
        for lab, x, m in zip(labels, queries, measurements):
            _log(transcript, lab, x, m)
        zero_sums = solve_bin_system(labels, measurements)
        next_labels: list[Label] = []
        next_values: list[float] = []
        next_unions: list[int] = []
        for i, lab in enumerate(labels):
            v0 = zero_sums[i]
            v1 = values[i] - v0
            if abs(v0) > tau:
                next_labels.append(lab.append(0))
                next_values.append(v0)
                next_unions.append(unions[i] | col)
            if abs(v1) > tau:
                next_labels.append(lab.append(1))
                next_values.append(v1)
                next_unions.append(unions[i])
        labels, values, unions = next_labels, next_values, next_unions
        if on_level is not None:
            on_level(LevelState(t + 1, tuple(labels), tuple(values)))
        if not labels:
            break
    return list(zip(labels, values, unions))


def pasmt_run(
    f: CountingOracle,
    H: TestMatrix,
    d: int,
    tau: float = DEFAULT_TAU,
    transcript: TextIO | None = None,
    on_level: Callable[[LevelState], None] | None = None,
) -> SparsePolynomial:
    """Recover the coefficient map of the oracle through a d-disjunct matrix.

    Exact when H is d-disjunct for the true degree, no nonempty subset of
    true coefficients sums to within tau of zero, and every coefficient
    magnitude exceeds tau.  Decoding failures surface as
    ReconstructionError carrying the offending label.
    """
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    leaves = refine_levels(f, H, tau, transcript, on_level)
    entries: dict[BitVector, float] = {}
    for label, value, _ in leaves:
        try:
            support = decode_disjunct(H, label, d)
        except DecodeError as err:
            raise ReconstructionError(
                f"bucket {label.to01()!r} failed to decode: {err}", label=label
            ) from err
        if support in entries:
            raise ReconstructionError(
                f"two buckets decoded to support {support.to01()!r}", label=label
            )
        entries[support] = value
    return SparsePolynomial(f.n, entries)
