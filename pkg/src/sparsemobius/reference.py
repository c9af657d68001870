"""Dense reference transforms and brute-force baselines.

Everything here is exponential in n and exists to validate the sparse
algorithms on small instances: the zeta transform (coefficient table to
evaluation table), its Mobius inverse, an exhaustive learner, and the
subset-sum independence check that the pruning rule of the sparse
algorithms relies on.
"""

from __future__ import annotations

from typing import Sequence

from .core import BitVector
from .errors import CapacityError, DimensionError
from .oracle import DEFAULT_TAU, CountingOracle, QueryOracle, SparsePolynomial

__all__ = [
    "MAX_DENSE_N",
    "MAX_BRUTE_FORCE_N",
    "MAX_CHECK_SPARSITY",
    "DenseTable",
    "DenseTableOracle",
    "zeta_transform",
    "mobius_transform",
    "dense_from_polynomial",
    "brute_force_learn",
    "check_subset_sum_independence",
]

MAX_DENSE_N = 24
MAX_BRUTE_FORCE_N = 20
MAX_CHECK_SPARSITY = 25


class DenseTable:
    """All 2^n values of a function on {0,1}^n, indexed by coordinate mask.

    Index i is the point whose set coordinates are the set bits of i
    (coordinate 1 in bit 0, matching BitVector.mask).
    """

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Sequence[float]):
        if n < 1:
            raise DimensionError(f"dimension must be positive, got {n}")
        if n > MAX_DENSE_N:
            raise CapacityError(f"dense tables are capped at n={MAX_DENSE_N}, got {n}")
        vals = list(values)
        if len(vals) != 1 << n:
            raise DimensionError(f"expected {1 << n} values, got {len(vals)}")
        self.n = n
        self.values = vals

    @classmethod
    def zeros(cls, n: int) -> "DenseTable":
        return cls(n, [0] * (1 << n))

    def __getitem__(self, x: BitVector) -> float:
        if x.n != self.n:
            raise DimensionError(f"point length {x.n}, expected {self.n}")
        return self.values[x.mask]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DenseTable)
            and self.n == other.n
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"DenseTable(n={self.n})"


def dense_from_polynomial(poly: SparsePolynomial) -> DenseTable:
    """Coefficient table of a sparse polynomial (not its evaluations)."""
    table = DenseTable.zeros(poly.n)
    for k, v in poly.entries.items():
        table.values[k.mask] = v
    return table


def zeta_transform(table: DenseTable) -> DenseTable:
    """Sum over subsets: coefficient table in, evaluation table out.

    One in-place sweep per coordinate, ascending 1..n.
    """
    values = list(table.values)
    for i in range(table.n):
        bit = 1 << i
        for x in range(1 << table.n):
            if x & bit:
                values[x] += values[x ^ bit]
    return DenseTable(table.n, values)


def mobius_transform(table: DenseTable) -> DenseTable:
    """Inverse of zeta_transform, same sweep order."""
    values = list(table.values)
    for i in range(table.n):
        bit = 1 << i
        for x in range(1 << table.n):
            if x & bit:
                values[x] -= values[x ^ bit]
    return DenseTable(table.n, values)


class DenseTableOracle:
    """Evaluation oracle backed by a precomputed table of function values."""

    __slots__ = ("n", "_values")

    def __init__(self, evaluations: DenseTable):
        self.n = evaluations.n
        self._values = evaluations.values

    def eval(self, x: BitVector) -> float:
        if x.n != self.n:
            raise DimensionError(f"point length {x.n}, expected {self.n}")
        return self._values[x.mask]


def brute_force_learn(f: QueryOracle, n: int, tau: float = DEFAULT_TAU) -> SparsePolynomial:
    """Recover the full spectrum by querying every point of {0,1}^n.

    Exactly 2^n evaluations; coefficients with |value| <= tau are dropped.
    Capped at n = 20.
    """
    if n < 1 or getattr(f, "n", n) != n:
        raise DimensionError(f"oracle dimension {getattr(f, 'n', None)} != {n}")
    if n > MAX_BRUTE_FORCE_N:
        raise CapacityError(f"brute force is capped at n={MAX_BRUTE_FORCE_N}, got {n}")
    points = [BitVector(n, m) for m in range(1 << n)]
    if isinstance(f, CountingOracle):
        values = f.batch_eval(points)
    else:
        values = [f.eval(x) for x in points]
    spectrum = mobius_transform(DenseTable(n, values))
    entries = {
        BitVector(n, m): v for m, v in enumerate(spectrum.values) if abs(v) > tau
    }
    return SparsePolynomial(n, entries)


def check_subset_sum_independence(
    poly: SparsePolynomial, tau: float = DEFAULT_TAU
) -> bool:
    """True iff every nonempty subset of coefficients sums away from zero.

    This is the structural assumption behind pruning empty bins: no
    cancellation may silence a bin that still contains support.  Sign-uniform
    coefficient sets with every magnitude above tau pass without enumeration;
    mixed signs fall back to enumerating all 2^s subset sums with early exit,
    which caps the sparsity at 25.
    """
    values = list(poly.entries.values())
    if not values:
        return True
    if all(v > tau for v in values) or all(v < -tau for v in values):
        return True
    if len(values) > MAX_CHECK_SPARSITY:
        raise CapacityError(
            f"subset-sum check is capped at s={MAX_CHECK_SPARSITY}, got {len(values)}"
        )
    sums = [0]
    for v in values:
        extended = [s + v for s in sums]
        for s in extended:
            if abs(s) <= tau:
                return False
        sums.extend(extended)
    return True
