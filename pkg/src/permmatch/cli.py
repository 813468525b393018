"""Command-line front end.

Every subcommand writes JSON (one document per input line) except ``gen``,
which prints permutations, and ``bench``, which prints CSV.  Exit codes:
0 success or Found, 1 NotFound, 2 bad input or wrong class.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .classify import (
    Corner,
    Label321,
    RigidBlock,
    block_decomposition,
    label_rigid_321,
    label_skew,
)
from .match321 import ClassViolation, MatchResult, match_321
from .matchskew import match_skew_merged
from .oracle import PermClass, brute_embedding, enumerate_avoiders, random_avoider
from .perm import (
    Embedding,
    Permutation,
    format_permutation,
    normalize_subsequence,
    parse_permutation,
    verify_embedding,
)

__all__ = ["CliResult", "main", "run_cli"]

EXIT_OK, EXIT_NOT_FOUND, EXIT_ERROR = 0, 1, 2
MAX_EXHAUSTIVE_SIZE = 9

_SHORT_321 = {Label321.UPPER: "U", Label321.LOWER: "L", Label321.FLUID: "F"}
_SHORT_SKEW = {c: c.name for c in Corner}
_SHORT_SKEW[Corner.CENTRAL] = "C"


@dataclass(frozen=True)
class CliResult:
    exit_code: int
    stdout: str
    stderr: str = ""


class CliError(Exception):
    """Bad input; reported on stderr with exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise CliError(f"{self.format_usage()}{self.prog}: error: {message}")


# --------------------------------------------------------------------------
# input helpers


def _parse(text: str) -> Permutation:
    try:
        return parse_permutation(text)
    except ValueError as exc:
        raise CliError(f"bad permutation {text!r}: {exc}") from None


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    return [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


def _inputs(args: argparse.Namespace, wanted: Optional[int] = None) -> list[Permutation]:
    raw = list(args.perms)
    if args.file:
        raw += _read_lines(args.file)
    if wanted is not None and len(raw) != wanted:
        raise CliError(f"expected {wanted} permutations, got {len(raw)}")
    if not raw:
        raise CliError("no permutation given")
    return [_parse(r) for r in raw]


def _dump(doc) -> str:
    return json.dumps(doc) + "\n"


# --------------------------------------------------------------------------
# subcommands


def _cmd_classify(args) -> CliResult:
    out = []
    for p in _inputs(args):
        l3 = label_rigid_321(p)
        ls = label_skew(p)
        rows = []
        for pos, v in enumerate(p.values, 1):
            rows.append(
                {
                    "position": pos,
                    "value": v,
                    "av321": _SHORT_321[l3.label[pos - 1]] if l3.is_avoider else None,
                    "skew": _SHORT_SKEW[ls.label[pos - 1]] if ls.is_skew_merged else None,
                }
            )
        out.append(
            _dump(
                {
                    "permutation": format_permutation(p),
                    "av321": l3.is_avoider,
                    "skew_merged": ls.is_skew_merged,
                    "center_direction": ls.center_direction.value if ls.is_skew_merged else None,
                    "labels": rows,
                }
            )
        )
    return CliResult(EXIT_OK, "".join(out))


def _cmd_decompose(args) -> CliResult:
    out = []
    for p in _inputs(args):
        l3 = label_rigid_321(p)
        ls = label_skew(p)
        if not l3.is_avoider and not ls.is_skew_merged:
            raise CliError(f"{p} is neither 321-avoiding nor skew-merged")
        doc: dict = {"permutation": format_permutation(p), "blocks": None, "corners": None}
        if l3.is_avoider:
            doc["blocks"] = [
                {
                    "kind": "rigid" if isinstance(b, RigidBlock) else "singleton",
                    "positions": [b.start, b.stop],
                    "pattern": format_permutation(b.pattern),
                }
                for b in block_decomposition(p, l3).blocks
            ]
        if ls.is_skew_merged:
            doc["corners"] = {_SHORT_SKEW[c]: list(ls.positions(c)) for c in Corner}
            doc["center_direction"] = ls.center_direction.value
        out.append(_dump(doc))
    return CliResult(EXIT_OK, "".join(out))


def _resolve_class(choice: str, pattern: Permutation, text: Permutation) -> str:
    if choice != "auto":
        return choice
    if label_rigid_321(pattern).is_avoider and label_rigid_321(text).is_avoider:
        return "av321"
    if label_skew(pattern).is_skew_merged and label_skew(text).is_skew_merged:
        return "skew"
    raise CliError("inputs are neither both 321-avoiding nor both skew-merged")


def _match_doc(
    pattern: Permutation, text: Permutation, found: bool, emb: Optional[Embedding], iterations
) -> dict:
    doc = {
        "pattern": format_permutation(pattern),
        "text": format_permutation(text),
        "contains": found,
        "embedding_positions": None,
        "embedding_values": None,
        "iterations": iterations,
    }
    if found:
        # hidden self-check before anything is printed
        if not verify_embedding(pattern, text, emb):
            raise RuntimeError("matcher produced an invalid embedding")
        doc["embedding_positions"] = [list(pair) for pair in emb.pairs]
        doc["embedding_values"] = [[pattern.value(a), text.value(b)] for a, b in emb.pairs]
    return doc


def _cmd_match(args) -> CliResult:
    pattern, text = _inputs(args, wanted=2)
    cls = _resolve_class(args.cls, pattern, text)
    try:
        if cls == "av321":
            res: MatchResult = match_321(pattern, text, trace=args.trace)
        else:
            res = match_skew_merged(pattern, text)
    except ClassViolation as exc:
        raise CliError(str(exc)) from None
    doc = _match_doc(pattern, text, res.found, res.embedding, res.iterations)
    doc["class"] = cls
    if args.trace and cls == "av321":
        doc["trace"] = [
            {
                "block": list(ev["block"]),
                "singleton": ev["singleton"],
                "extensions": [list(fr) for fr in ev["extensions"]],
                "kept": [list(fr) for fr in ev["kept"]],
            }
            for ev in res.trace
        ]
    return CliResult(EXIT_OK if res.found else EXIT_NOT_FOUND, _dump(doc))


def _cmd_oracle(args) -> CliResult:
    pattern, text = _inputs(args, wanted=2)
    emb = brute_embedding(pattern, text)
    doc = _match_doc(pattern, text, emb is not None, emb, None)
    return CliResult(EXIT_OK if emb is not None else EXIT_NOT_FOUND, _dump(doc))


def _cmd_gen(args) -> CliResult:
    cls = PermClass(args.cls)
    if args.size < 0:
        raise CliError("--size must be non-negative")
    if args.exhaustive:
        if args.size > MAX_EXHAUSTIVE_SIZE:
            raise CliError(f"--exhaustive is limited to size {MAX_EXHAUSTIVE_SIZE}")
        perms = enumerate_avoiders(cls, args.size)
    else:
        if args.count < 0:
            raise CliError("--count must be non-negative")
        perms = [random_avoider(cls, args.size, args.seed + i) for i in range(args.count)]
    return CliResult(EXIT_OK, "".join(format_permutation(p) + "\n" for p in perms))


def _bench_instance(cls: str, n: int, k: int, seed: int, planted: bool):
    text = random_avoider(cls, n, 2 * seed)
    if planted:
        rng = np.random.default_rng(2 * seed + 1)
        positions = np.sort(rng.choice(n, size=k, replace=False)) + 1
        pattern = normalize_subsequence(text, positions.tolist())
    else:
        pattern = random_avoider(cls, k, 2 * seed + 1)
    return pattern, text


def _cmd_bench(args) -> CliResult:
    if args.k > args.n or args.k < 0:
        raise CliError("need 0 <= k <= n")
    match = match_321 if args.cls == "av321" else match_skew_merged
    lines = ["n,k,iterations,elapsed_nanoseconds,seed"]
    for i in range(args.trials):
        seed = args.seed + i
        pattern, text = _bench_instance(args.cls, args.n, args.k, seed, args.planted)
        start = time.perf_counter_ns()
        res = match(pattern, text)
        elapsed = time.perf_counter_ns() - start
        if res.iterations > args.k * args.n:
            raise RuntimeError(f"iteration bound exceeded for seed {seed}")
        lines.append(f"{args.n},{args.k},{res.iterations},{elapsed},{seed}")
    return CliResult(EXIT_OK, "\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# parser


def _add_inputs(p: argparse.ArgumentParser, nargs: str) -> None:
    p.add_argument("perms", nargs=nargs, metavar="PERM", help="one-line notation, e.g. '3 1 2'")
    p.add_argument("--file", help="read permutations from a file, one per line")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permmatch", description="Pattern matching for 321-avoiding and skew-merged permutations.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("classify", help="class membership and element labels")
    _add_inputs(p, "*")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("decompose", help="direct-sum blocks and/or corner sets")
    _add_inputs(p, "*")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("match", help="fast containment test")
    _add_inputs(p, "*")
    p.add_argument("--class", dest="cls", choices=("auto", "av321", "skew"), default="auto")
    p.add_argument("--trace", action="store_true", help="report candidate frontiers per block (av321)")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("oracle", help="brute-force reference")
    osub = p.add_subparsers(dest="oracle_command", parser_class=_Parser, required=True)
    om = osub.add_parser("match", help="backtracking containment test")
    _add_inputs(om, "*")
    om.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="generate class members")
    p.add_argument("--class", dest="cls", choices=("av321", "skew", "any"), default="av321")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true", help=f"all members (size <= {MAX_EXHAUSTIVE_SIZE})")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="time seeded random matches, CSV output")
    p.add_argument("--class", dest="cls", choices=("av321", "skew"), default="av321")
    p.add_argument("--n", type=int, required=True, help="text size")
    p.add_argument("--k", type=int, required=True, help="pattern size")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--planted", action="store_true", help="draw the pattern from the text so it is found")
    p.set_defaults(func=_cmd_bench)
    return parser


def run_cli(args: Sequence[str]) -> CliResult:
    """Run one invocation and capture its output instead of printing it."""
    parser = build_parser()
    buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(buf):
            ns = parser.parse_args(list(args))
    except CliError as exc:
        return CliResult(EXIT_ERROR, "", f"{exc}\n")
    except SystemExit as exc:  # --help
        return CliResult(int(exc.code or 0), buf.getvalue())
    try:
        return ns.func(ns)
    except CliError as exc:
        return CliResult(EXIT_ERROR, "", f"permmatch: error: {exc}\n")


def main(argv: Optional[Sequence[str]] = None) -> None:
    result = run_cli(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    sys.exit(result.exit_code)
