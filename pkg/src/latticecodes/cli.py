"""Command-line front end.

    latticecodes check m3.json --properties modular,distributive
    latticecodes build pspace -q 2 -n 2 --out p22.json
    latticecodes build partition-code -q 2 -n 3 --blocks "1|2|3"
    latticecodes theorems run T2 -q 2 -n 3
    latticecodes export p22.json --format dot

Exit status: 0 ok, 1 a property or suite failed, 2 bad input or usage,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import gfcore
from . import lattice_core as lc
from . import lattice_props as lp
from . import subspace_codes as sc
from . import theorem_lab as tl
from .errors import BudgetExceeded, LatticeCodesError
from .linear_lattice import DEFAULT_MAX_ELEMENTS, build_projective_lattice

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def parse_blocks(text: str) -> tuple:
    """'1,2|3' -> ((0, 1), (2,))."""
    try:
        blocks = tuple(tuple(int(i) - 1 for i in part.split(",")) for part in text.split("|"))
    except ValueError:
        raise UsageError(f"cannot parse blocks {text!r}; use e.g. \"1,2|3\"") from None
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(len(flat))):
        raise UsageError(f"blocks {text!r} must partition 1..{len(flat)}")
    return blocks


def write_output(text: str, out: str | None) -> None:
    """Print, or write atomically so a failed run leaves no partial file."""
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_lattice(path: str) -> lc.FiniteLattice:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None
    return lc.from_json(data)


def _render_lattice(L: lc.FiniteLattice, fmt: str, name: str = "lattice") -> str:
    if fmt == "dot":
        return lc.hasse_export(L, name)
    if fmt == "text":
        W = lc.whitney_numbers(L)
        return f"{name}: {L.size} elements, height {len(W) - 1}, Whitney numbers {W}\n"
    return _json(lc.to_json(L))


# -- commands -------------------------------------------------------------------

def cmd_check(args) -> int:
    L = _load_lattice(args.input)
    props = [p.strip() for p in args.properties.split(",") if p.strip()] if args.properties else list(lp.DECIDERS)
    for p in props:
        if p not in lp.DECIDERS:
            raise UsageError(f"unknown property {p!r}; choose from {', '.join(lp.DECIDERS)}")
    reports = [lp.decide(L, p) for p in props]
    if args.format == "text":
        lines = []
        for r in reports:
            line = f"{r.property}: {'true' if r.holds else 'false'}"
            if r.witness is not None:
                line += f"  witness {r.witness.kind} {list(r.witness.elements)}"
            lines.append(line)
        text = "\n".join(lines) + "\n"
    else:
        text = _json([r.to_json() for r in reports])
    write_output(text, args.out)
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL


def cmd_build(args) -> int:
    budget = args.budget or DEFAULT_MAX_ELEMENTS
    if args.kind == "pspace":
        P = build_projective_lattice(args.q, args.n, max_elements=budget)
        text = _render_lattice(P.lattice, args.format, f"P{args.q}_{args.n}")
    elif args.kind == "boolean":
        if 2 ** args.n > budget:
            raise BudgetExceeded(f"B_{args.n}", budget, 2 ** args.n)
        text = _render_lattice(lc.boolean_lattice(args.n), args.format, f"B{args.n}")
    elif args.kind == "catalog":
        cat = tl.build_catalog()
        if args.name is not None:
            if args.name not in cat.lattices:
                raise UsageError(f"unknown catalog entry {args.name!r}; choose from {', '.join(cat.lattices)}")
            text = _render_lattice(cat[args.name], args.format, "lattice")
        elif args.format == "text":
            text = "".join(_render_lattice(L, "text", name) for name, L in cat)
        elif args.format == "dot":
            raise UsageError("DOT export of the whole catalog is not supported; pass --name")
        else:
            text = _json({name: lc.to_json(L) for name, L in cat})
    else:
        if args.blocks is None:
            raise UsageError("partition-code needs --blocks")
        blocks = parse_blocks(args.blocks)
        r = sum(len(b) for b in blocks)
        if 2 ** len(blocks) > budget:
            raise BudgetExceeded("partition code", budget, 2 ** len(blocks))
        spec = gfcore.field_spec(args.q)
        basis = tuple(tuple(int(i == j) for j in range(args.n)) for i in range(r))
        C = sc.build_partition_code(sc.PartitionCodeSpec(spec, args.n, basis, blocks))
        if args.format == "text":
            text = "".join(f"{w.label()}\n" for w in C.codewords)
        elif args.format == "dot":
            text = lc.hasse_export(sc.code_lattice(C), "code")
        else:
            text = _json(C.to_json())
    write_output(text, args.out)
    return EXIT_OK


def cmd_theorems(args) -> int:
    if (args.q is None) != (args.n is None):
        raise UsageError("-q and -n go together")
    samples = args.budget or tl.DEFAULT_SAMPLES
    report = tl.run_theorem_suite(args.suite, q=args.q, n=args.n, seed=args.seed, samples=samples)
    if args.format == "text":
        status = "ok" if report.ok else f"{len(report.failures)} failure(s)"
        text = f"{report.suite}: {report.instances} instance(s) checked, {status}\n"
        for name, d in report.details.items():
            text += f"  {name}: {d}\n"
        for f in report.failures[:20]:
            text += f"  FAIL {f['instance']}: {f['witness']}\n"
    else:
        text = report.dumps() + "\n"
    write_output(text, args.out)
    return report.exit_code


def cmd_export(args) -> int:
    L = _load_lattice(args.input)
    write_output(_render_lattice(L, args.format, "lattice"), args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default=None)
    common.add_argument("--out", help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=tl.DEFAULT_SEED)
    common.add_argument("--budget", type=positive_int, default=None,
                        help="element cap for builds, sampled-sublattice count for suites")

    parser = argparse.ArgumentParser(prog="latticecodes", description="Finite lattices and subspace codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide lattice properties")
    p.add_argument("input")
    p.add_argument("--properties", help=f"comma list from {','.join(lp.DECIDERS)}")
    p.set_defaults(func=cmd_check, default_format="json")

    p = sub.add_parser("build", parents=[common], help="build a lattice or code")
    p.add_argument("kind", choices=("pspace", "boolean", "catalog", "partition-code"))
    p.add_argument("-q", type=int, default=2)
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--blocks", help='1-based partition, e.g. "1,2|3"')
    p.add_argument("--name", help="one catalog entry")
    p.set_defaults(func=cmd_build, default_format="json")

    p = sub.add_parser("theorems", help="run theorem suites")
    tsub = p.add_subparsers(dest="action", required=True)
    r = tsub.add_parser("run", parents=[common])
    r.add_argument("suite", choices=list(tl.SUITES))
    r.add_argument("-q", type=int)
    r.add_argument("-n", type=int)
    r.set_defaults(func=cmd_theorems, default_format="json")

    p = sub.add_parser("export", parents=[common], help="re-export a lattice JSON file")
    p.add_argument("input")
    p.set_defaults(func=cmd_export, default_format="dot")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, LatticeCodesError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
