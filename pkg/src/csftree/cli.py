"""Command-line front end: every pipeline stage, scriptable and reproducible.

Exit codes: 0 success/proved, 1 inconclusive/unresolved, 2 usage error,
3 I/O or validation error.  All randomness flows through an explicit
--seed, so each invocation is byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import os
import sys

from .distinguish import (
    DistinctnessCertificate,
    show_distinct,
    verify_certificate,
)
from .exact import compute_csf, csf_oracle, truncate_csf, truncated_csf_oracle
from .fingerprint import EvalSpec, eval_csf
from .harness import CapExceededError, TableFormatError, run_verification
from .trees import (
    Tree,
    TreeParseError,
    TreeStructureError,
    enumerate_free_trees,
    parse_tree,
    serialize_tree,
    tree_from_level_sequence,
)

# Trees-per-run guard for `verify`; --force lifts it.
DEFAULT_TREE_CAP = 100_000


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _cache_dir() -> str:
    env = os.environ.get("CSFTREE_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "csftree")


def _load_tree(path: str) -> Tree:
    try:
        with open(path, "r", encoding="ascii") as fh:
            return parse_tree(fh.read())
    except (OSError, TreeParseError, TreeStructureError) as err:
        raise _Fail(3, f"{path}: {err}") from err


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csftree",
        description=(
            "Chromatic symmetric functions of trees: exact power-sum expansion, "
            "modular fingerprints, distinctness certificates, and exhaustive "
            "verification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="stream all free trees on N vertices")
    p.add_argument("--n", type=int, required=True, metavar="N")
    p.add_argument("--format", choices=("edges", "levelseq"), default="edges")
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("csf", help="print a tree's CSF in the power-sum basis")
    p.add_argument("--input", required=True, metavar="FILE")
    p.add_argument("--truncate", type=int, metavar="K")
    p.add_argument("--oracle", action="store_true",
                   help="use the edge-subset expansion instead of the recursion")
    p.add_argument("--force", action="store_true",
                   help="lift the oracle's vertex-count guard")

    p = sub.add_parser("distinguish", help="probabilistically prove two CSFs differ")
    p.add_argument("--a", required=True, metavar="FILE")
    p.add_argument("--b", required=True, metavar="FILE")
    p.add_argument("--accuracy", type=int, required=True, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cert-out", metavar="FILE")

    p = sub.add_parser("verify", help="refine all free trees on N vertices to singletons")
    p.add_argument("--n", type=int, required=True, metavar="N")
    p.add_argument("--truncate", type=int, default=3, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int, default=64)
    p.add_argument("--table", metavar="FILE")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--force", action="store_true",
                   help="lift the tree-count cap")

    p = sub.add_parser("eval", help="evaluate a tree's CSF fingerprint at (q, C)")
    p.add_argument("--input", required=True, metavar="FILE")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", required=True, metavar="C1,...,Cn")

    p = sub.add_parser("verify-cert", help="re-check a distinctness certificate")
    p.add_argument("--a", required=True, metavar="FILE")
    p.add_argument("--b", required=True, metavar="FILE")
    p.add_argument("--cert", required=True, metavar="FILE")

    return parser


def _cmd_enumerate(args) -> int:
    if args.n < 1:
        raise _Fail(2, "--n must be >= 1")
    if args.count_only:
        print(sum(1 for _ in enumerate_free_trees(args.n)))
        return 0
    for ls in enumerate_free_trees(args.n):
        if args.format == "levelseq":
            print(ls.to_text())
        else:
            sys.stdout.write(serialize_tree(tree_from_level_sequence(ls)))
    return 0


def _cmd_csf(args) -> int:
    if args.truncate is not None and args.truncate < 1:
        raise _Fail(2, "--truncate must be >= 1")
    t = _load_tree(args.input)
    try:
        if args.oracle:
            if args.truncate is not None:
                poly = truncated_csf_oracle(t, args.truncate, force=args.force)
            else:
                poly = csf_oracle(t, force=args.force)
        else:
            poly = compute_csf(t)
            if args.truncate is not None:
                poly = truncate_csf(poly, args.truncate)
    except ValueError as err:
        raise _Fail(3, str(err)) from err
    print(poly.to_text())
    return 0


def _cmd_distinguish(args) -> int:
    if args.accuracy < 1:
        raise _Fail(2, "--accuracy must be >= 1")
    a = _load_tree(args.a)
    b = _load_tree(args.b)
    if a.n != b.n:
        raise _Fail(2, f"trees must have the same vertex count ({a.n} vs {b.n})")
    cert = show_distinct(a, b, args.accuracy, seed=args.seed)
    print(cert.verdict)
    if not cert.proved:
        return 1
    line = cert.to_text()
    print(line)
    if args.cert_out:
        try:
            with open(args.cert_out, "w", encoding="ascii") as fh:
                fh.write(line + "\n")
        except OSError as err:
            raise _Fail(3, f"{args.cert_out}: {err}") from err
    return 0


def _cmd_verify(args) -> int:
    if args.n < 1:
        raise _Fail(2, "--n must be >= 1")
    if not (1 <= args.truncate <= args.n):
        raise _Fail(2, f"--truncate must satisfy 1 <= K <= {args.n}")
    if args.max_rounds < 1:
        raise _Fail(2, "--max-rounds must be >= 1")
    if args.threads < 1:
        raise _Fail(2, "--threads must be >= 1")
    table_path = args.table
    if table_path is None and args.resume:
        os.makedirs(_cache_dir(), exist_ok=True)
        table_path = os.path.join(
            _cache_dir(), f"verify-n{args.n}-k{args.truncate}-seed{args.seed}.table"
        )
    cap = None if args.force else DEFAULT_TREE_CAP
    try:
        report = run_verification(
            args.n,
            args.truncate,
            args.seed,
            args.max_rounds,
            table_path=table_path,
            resume=args.resume,
            threads=args.threads,
            tree_cap=cap,
        )
    except CapExceededError as err:
        raise _Fail(2, f"{err} (pass --force to override)") from err
    except (TableFormatError, OSError) as err:
        raise _Fail(3, str(err)) from err
    sys.stdout.write(report.to_text())
    return 0 if report.status == "all-singletons" else 1


def _cmd_eval(args) -> int:
    t = _load_tree(args.input)
    try:
        c = tuple(int(x) for x in args.c.split(","))
    except ValueError:
        raise _Fail(2, f"malformed residue tuple {args.c!r}") from None
    if len(c) != t.n:
        raise _Fail(2, f"residue tuple has {len(c)} entries, expected n={t.n}")
    try:
        spec = EvalSpec(args.q, c)
    except ValueError as err:
        raise _Fail(2, str(err)) from err
    print(eval_csf(t, spec))
    return 0


def _cmd_verify_cert(args) -> int:
    a = _load_tree(args.a)
    b = _load_tree(args.b)
    try:
        with open(args.cert, "r", encoding="ascii") as fh:
            cert = DistinctnessCertificate.from_text(fh.read().strip())
    except (OSError, ValueError) as err:
        raise _Fail(3, f"{args.cert}: {err}") from err
    try:
        ok = verify_certificate(a, b, cert)
    except ValueError as err:
        raise _Fail(3, str(err)) from err
    print("valid" if ok else "invalid")
    return 0 if ok else 1


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "csf": _cmd_csf,
    "distinguish": _cmd_distinguish,
    "verify": _cmd_verify,
    "eval": _cmd_eval,
    "verify-cert": _cmd_verify_cert,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _Fail as fail:
        print(f"csftree {args.command}: {fail}", file=sys.stderr)
        return fail.code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
