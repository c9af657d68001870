"""Command-line interface.

Subcommands: gen (sample a synthetic instance), reconstruct (recover a
coefficient map from a polynomial or hypergraph file), verify (cross-check
a reconstruction against the exhaustive learner on small n), bench (run a
benchmark grid to CSV), and bound (print the query lower bound).

Exit codes: 0 success, 1 input or validation error, 2 reconstruction
failure, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import nullcontext

from .errors import (
    DecodeError,
    InfeasiblePrefixError,
    ReconstructionError,
    SparseMobiusError,
    ValidationError,
)
from .fasmt import fasmt_run
from .grouptest import construct_disjunct, identity_matrix
from .harness import (
    generate_synthetic,
    lower_bound,
    read_grid,
    run_benchmark,
    write_csv,
)
from .hybrid import hybrid_run
from .oracle import (
    DEFAULT_TAU,
    CountingOracle,
    SparsePolyOracle,
    hypergraph_to_polynomial,
    read_hypergraph,
    read_polynomial,
    write_polynomial,
)
from .pasmt import pasmt_run
from .reference import brute_force_learn

MAX_VERIFY_N = 12


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the validation code, not argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_instance(path: str, form: str):
    """Read a coefficient map from either accepted file format.

    Auto-detection reads the first data line: two tokens whose second is a
    full-width bitstring mean the coefficient format, anything else the
    hypergraph edge list.
    """
    if form == "poly":
        return read_polynomial(path)
    if form == "hgr":
        return hypergraph_to_polynomial(read_hypergraph(path))
    with open(path, "r", encoding="ascii") as handle:
        lines = handle.read().splitlines()
    header = lines[0].split() if lines else []
    n = int(header[0]) if header and header[0].isdigit() else 0
    for line in lines[1:]:
        parts = line.split()
        if not parts:
            continue
        if len(parts) == 2 and len(parts[1]) == n and set(parts[1]) <= {"0", "1"}:
            return read_polynomial(path)
        return hypergraph_to_polynomial(read_hypergraph(path))
    return read_polynomial(path)


def _run_algorithm(args, truth):
    oracle = CountingOracle(SparsePolyOracle(truth))
    sink = open(args.transcript, "w", encoding="ascii") if args.transcript else None
    with sink if sink is not None else nullcontext():
        if args.alg == "pasmt":
            if truth.n >= 2 and args.d < truth.n:
                matrix = construct_disjunct(truth.n, args.d)
            else:
                matrix = identity_matrix(truth.n)
            recovered = pasmt_run(oracle, matrix, args.d, args.tau, transcript=sink)
        elif args.alg == "fasmt":
            recovered = fasmt_run(oracle, truth.n, args.d, args.tau, transcript=sink)
        else:
            recovered = hybrid_run(
                oracle, truth.n, args.d, args.seed, args.tau, transcript=sink
            )
    return recovered, oracle


def _cmd_gen(args) -> int:
    poly = generate_synthetic(
        args.n, args.s, args.d, args.seed, weight_lo=args.wlo, weight_hi=args.whi
    )
    write_polynomial(poly, args.out)
    print(f"wrote n={poly.n} s={poly.sparsity} d<={args.d} to {args.out}")
    return 0


def _cmd_reconstruct(args) -> int:
    truth = _load_instance(args.input, args.format)
    recovered, oracle = _run_algorithm(args, truth)
    write_polynomial(recovered, args.out)
    print(
        f"algorithm={args.alg} n={truth.n} coefficients={recovered.sparsity} "
        f"queries={oracle.query_count} rounds={oracle.round_count}"
    )
    return 0


def _cmd_verify(args) -> int:
    truth = _load_instance(args.input, args.format)
    if truth.n > MAX_VERIFY_N:
        raise ValidationError(
            f"verify is capped at n={MAX_VERIFY_N}, got n={truth.n}"
        )
    recovered, _ = _run_algorithm(args, truth)
    baseline = brute_force_learn(
        CountingOracle(SparsePolyOracle(truth)), truth.n, args.tau
    )
    if recovered.close_to(baseline, value_tol=max(args.tau, 1e-9)):
        print("verified: spectra match")
        return 0
    print("MISMATCH between reconstruction and exhaustive baseline")
    return 3


def _cmd_bench(args) -> int:
    cells = read_grid(args.grid)
    records = run_benchmark(cells, tau=args.tau)
    write_csv(records, args.out)
    failures = sum(1 for r in records if not r.exact)
    print(f"ran {len(records)} cells, {failures} inexact, wrote {args.out}")
    return 0


def _cmd_bound(args) -> int:
    print(lower_bound(args.n, args.s, args.d))
    return 0


def _add_common(sub, with_seed: bool = True) -> None:
    sub.add_argument("--alg", required=True, choices=("pasmt", "fasmt", "hybrid"))
    sub.add_argument("--input", required=True, help="instance file")
    sub.add_argument(
        "--format",
        choices=("auto", "poly", "hgr"),
        default="auto",
        help="input format (default: sniff the first data line)",
    )
    sub.add_argument("--d", required=True, type=int, help="degree bound")
    sub.add_argument("--tau", type=float, default=DEFAULT_TAU, help="zero tolerance")
    if with_seed:
        sub.add_argument("--seed", type=int, default=0, help="design seed (hybrid)")
    sub.add_argument("--transcript", help="write a query transcript here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsemobius", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="sample a synthetic instance")
    gen.add_argument("--n", required=True, type=int)
    gen.add_argument("--s", required=True, type=int)
    gen.add_argument("--d", required=True, type=int)
    gen.add_argument("--seed", required=True, type=int)
    gen.add_argument("--wlo", type=float, default=1.0, help="weight range low end")
    gen.add_argument("--whi", type=float, default=2.0, help="weight range high end")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    rec = subs.add_parser("reconstruct", help="recover a coefficient map")
    _add_common(rec)
    rec.add_argument("--out", required=True, help="recovered coefficients file")
    rec.set_defaults(func=_cmd_reconstruct)

    ver = subs.add_parser("verify", help="cross-check against the exhaustive learner")
    _add_common(ver)
    ver.set_defaults(func=_cmd_verify)

    ben = subs.add_parser("bench", help="run a benchmark grid")
    ben.add_argument("--grid", required=True, help="file of 'algorithm n s d seed' lines")
    ben.add_argument("--out", required=True, help="CSV output path")
    ben.add_argument("--tau", type=float, default=1e-9)
    ben.set_defaults(func=_cmd_bench)

    bnd = subs.add_parser("bound", help="print the query lower bound")
    bnd.add_argument("--n", required=True, type=int)
    bnd.add_argument("--s", required=True, type=int)
    bnd.add_argument("--d", required=True, type=int)
    bnd.set_defaults(func=_cmd_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ReconstructionError, InfeasiblePrefixError, DecodeError) as err:
        print(f"reconstruction failed: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1
    except SparseMobiusError as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
