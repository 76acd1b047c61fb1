"""Command line: ``mondcert analyze|verify|batch``."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import DEFAULT_PAIR_CAP, DEFAULT_SECONDS, Config, ConfigError, read_nice_table
from .errors import GermValidationError, MondcertError, ResourceLimitExceeded
from .germfile import read_germ
from .jets import DEFAULT_JET_CAP
from .report import analyze, dumps, render_text, verify_line

EXIT_OK = 0
EXIT_BATCH_ERROR = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3

BATCH_SCHEMA = "mondcert-batch/1"
BATCH_COLUMNS = ("name", "n", "corank", "multiplicity", "weighted", "codim", "dim_K", "dim_M",
                 "CM", "mu_I", "verdict")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors share the exit code of invalid input
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=("local", "global-check"), default="local",
                        help="local counts only, or add a global-order comparison")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--jet-cap", type=_positive_int, default=DEFAULT_JET_CAP, metavar="N",
                        help=f"largest jet degree tried by the oracle (default {DEFAULT_JET_CAP})")
    common.add_argument("--pair-cap", type=_positive_int, default=DEFAULT_PAIR_CAP, metavar="N",
                        help=f"largest S-pair degree before giving up (default {DEFAULT_PAIR_CAP})")
    common.add_argument("--nice-table", metavar="FILE", help="override the nice-dimensions table")
    common.add_argument("--seconds", type=_positive_float, default=DEFAULT_SECONDS, metavar="S",
                        help=f"wall-clock limit per germ (default {DEFAULT_SECONDS:g})")
    common.add_argument("--resolution-steps", type=_positive_int, default=None, metavar="N",
                        help="cap on the length of the free resolution in the CM test")
    common.add_argument("--timing", action="store_true", help="include stage timings (not deterministic)")

    p = _Parser(prog="mondcert", description="Certified image-Milnor-number computations for map germs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common], help="full report for one germ file")
    a.add_argument("file")
    v = sub.add_parser("verify", parents=[common], help="one verdict line for one germ file")
    v.add_argument("file")
    b = sub.add_parser("batch", parents=[common], help="summary table for every *.germ in a directory")
    b.add_argument("dir")
    b.add_argument("--jobs", type=_positive_int, default=1, metavar="N", help="worker processes")
    return p


def _config(args) -> Config:
    table = read_nice_table(args.nice_table) if args.nice_table else {}
    return Config(order=args.order, jet_cap=args.jet_cap, pair_cap=args.pair_cap, seconds=args.seconds,
                  resolution_steps=args.resolution_steps, nice_table=table,
                  workers=getattr(args, "jobs", 1), timing=args.timing)


def _error_exit(exc: BaseException) -> int:
    if isinstance(exc, ResourceLimitExceeded):
        return EXIT_RESOURCE
    return EXIT_INVALID


def _describe_error(exc: BaseException) -> str:
    if isinstance(exc, MemoryError):
        return "ResourceLimitExceeded: out of memory"
    return f"{type(exc).__name__}: {exc}"


def _single(args, out, err) -> int:
    try:
        config = _config(args)
        rep = analyze(read_germ(args.file), config)
    except (MondcertError, MemoryError) as exc:
        err.write(f"mondcert: {args.file}: {_describe_error(exc)}\n")
        return EXIT_RESOURCE if isinstance(exc, MemoryError) else _error_exit(exc)
    if args.command == "verify":
        if args.json:
            inv = rep["invariants"]
            out.write(dumps({"schema": "mondcert-verdict/1", "name": rep["input"]["name"],
                             "verdict": rep["verdict"], "codim": inv["ae_codim"]["value"],
                             "dim_M": inv["m_dim"]["value"], "mu_I": rep["mu_I"]}))
        else:
            out.write(verify_line(rep) + "\n")
    else:
        out.write(dumps(rep) if args.json else render_text(rep))
    return EXIT_OK


def batch_row(path: str, config: Config) -> dict:
    """One summary row; failures are caught and described in the row."""
    row: dict = {"file": Path(path).name}
    try:
        rep = analyze(read_germ(path), config)
    except (MondcertError, MemoryError) as exc:
        row.update({c: None for c in BATCH_COLUMNS})
        row["name"] = Path(path).name.removesuffix(".germ")
        row["verdict"] = "Error"
        row["error"] = _describe_error(exc)
        row["exit"] = EXIT_RESOURCE if isinstance(exc, (ResourceLimitExceeded, MemoryError)) else EXIT_INVALID
        return row
    g, inv = rep["germ"], rep["invariants"]
    unf = rep["unfolding"]
    row.update({
        "name": rep["input"]["name"] or Path(path).name.removesuffix(".germ"),
        "n": rep["input"]["n"],
        "corank": g["corank"],
        "multiplicity": g["multiplicity"],
        "weighted": g["weighted_homogeneous"],
        "codim": inv["ae_codim"]["value"],
        "dim_K": inv["k_dim"]["value"],
        "dim_M": inv["m_dim"]["value"],
        "CM": None if unf is None else unf["is_CM"],
        "mu_I": rep["mu_I"],
        "verdict": rep["verdict"],
        "error": None,
        "exit": EXIT_OK,
    })
    return row


def _cell(v) -> str:
    if v is None:
        return "-"
    if v is True:
        return "yes"
    if v is False:
        return "no"
    return str(v)


def render_table(rows: list[dict]) -> str:
    header = ["name", "n", "corank", "mult", "WH", "codim", "dimK", "dimM", "CM", "mu_I", "verdict"]
    body = [[_cell(r[c]) for c in BATCH_COLUMNS] for r in rows]
    widths = [max([len(h)] + [len(b[i]) for b in body]) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r, b in zip(rows, body):
        lines.append("  ".join(c.ljust(w) for c, w in zip(b, widths)).rstrip())
        if r.get("error"):
            lines.append(f"    {r['file']}: {r['error']}")
    return "\n".join(lines) + "\n"


def _batch(args, out, err) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        err.write(f"mondcert: {directory} is not a directory\n")
        return EXIT_INVALID
    try:
        config = _config(args)
    except MondcertError as exc:
        err.write(f"mondcert: {_describe_error(exc)}\n")
        return EXIT_INVALID
    paths = sorted(str(p) for p in directory.glob("*.germ"))
    if config.workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(batch_row, paths, [config] * len(paths)))
    else:
        rows = [batch_row(p, config) for p in paths]
    rows.sort(key=lambda r: r["file"])
    if args.json:
        out.write(dumps({"schema": BATCH_SCHEMA, "columns": list(BATCH_COLUMNS), "rows": rows}))
    else:
        out.write(render_table(rows))
    return EXIT_BATCH_ERROR if any(r["error"] for r in rows) else EXIT_OK


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "batch":
            return _batch(args, out, err)
        return _single(args, out, err)
    except ConfigError as exc:
        err.write(f"mondcert: {exc}\n")
        return EXIT_INVALID


__all__ = ["main", "main_entry", "build_parser", "batch_row", "render_table",
           "EXIT_OK", "EXIT_BATCH_ERROR", "EXIT_INVALID", "EXIT_RESOURCE"]


def main_entry() -> None:
    sys.exit(main())
