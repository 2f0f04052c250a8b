"""Command-line interface: ``bifour {norm,apply,decompose,verify,symbols}``.

Run configuration comes from a flat ``key = value`` file (``--config``);
command-line flags override file values.  The output directory is, in
order of precedence, ``--out``, ``$BIFOUR_OUT``, the ``out_dir`` config key
and ``bifour-out``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .bilinear import apply_bilinear
from .decomp import fs_split, vanishing_decompose, write_decomposition
from .errors import BifourError
from .lattice import Field, make_lattice, read_field, write_field
from .norms import (
    FLAVORS,
    SmoothnessParams,
    append_jsonl,
    bmo_norm,
    hardy1_norm,
    lp_norm,
    norm_record,
    sobolev_norm,
    sup_dyadic_norm,
    symbol_norm,
)
from .symbols import CATALOG, dyadic_piece, make_window_family, parse_symbol
from .verify import VerifyConfig, format_table, run_suite, write_reports, write_summary

__all__ = ["main", "build_parser", "load_config", "dump_config"]

FIELD_FLAVORS = ("l1", "l2", "linf", "bmo", "h1", "sobolev")


# --- configuration file -------------------------------------------------------


def _coerce(name: str, text: str, default):
    text = text.strip()
    if name in ("seeds", "c_values"):
        cast = int if name == "seeds" else float
        return tuple(cast(t) for t in text.split(",") if t.strip())
    if name == "checks":
        items = tuple(t.strip() for t in text.split(",") if t.strip())
        return items or None
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def load_config(path=None, base: VerifyConfig | None = None) -> VerifyConfig:
    """Read a flat ``key = value`` file into a :class:`VerifyConfig`.

    Blank lines and ``#`` comments are ignored; list values are comma
    separated.  Unknown keys are an error.
    """
    cfg = base or VerifyConfig()
    if path is None:
        return cfg
    defaults = {f.name: getattr(VerifyConfig(), f.name) for f in fields(VerifyConfig)}
    updates = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BifourError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in defaults:
            raise BifourError(f"{path}:{lineno}: unknown key {key!r}")
        updates[key] = _coerce(key, value, defaults[key])
    return cfg.with_updates(**updates)


def dump_config(cfg: VerifyConfig) -> str:
    """Inverse of :func:`load_config` (lossless for every field)."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def _out_dir(args, cfg: VerifyConfig) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    env = os.environ.get("BIFOUR_OUT")
    if env:
        return Path(env)
    return Path(cfg.out_dir)


def _config(args) -> VerifyConfig:
    cfg = load_config(args.config)
    overrides = {}
    for key in ("n", "N", "L", "window", "order", "jmin", "jmax", "draws", "trials", "iterations", "drift_bound"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "seed", None) is not None:
        overrides["seeds"] = tuple(args.seed)
    return cfg.with_updates(**overrides)


# --- subcommands --------------------------------------------------------------


def cmd_symbols(args) -> int:
    for name in sorted(CATALOG):
        print(name)
    return 0


def cmd_norm(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    w = make_window_family(cfg.window, cfg.order)
    if args.symbol is not None:
        if args.flavor not in FLAVORS:
            raise BifourError(f"symbol norms are {', '.join(FLAVORS)}; got {args.flavor!r}")
        m = parse_symbol(args.symbol, cfg.n)
        lat = make_lattice(cfg.n, args.sym_N or cfg.sym_N, args.sym_L or cfg.sym_L)
        params = SmoothnessParams(args.s1, args.s2, args.flavor)
        if args.j is None:
            value = sup_dyadic_norm(m, params, cfg.jrange, w, lat)
            scope = {"jmin": cfg.jmin, "jmax": cfg.jmax}
        else:
            value = symbol_norm(dyadic_piece(m, args.j, w, lat), params, w)
            scope = {"j": args.j}
        record = norm_record(
            "norm", args.flavor, {"symbol": args.symbol, "s1": args.s1, "s2": args.s2, **scope}, value, lat
        )
    else:
        f = read_field(args.field)
        if not isinstance(f, Field):
            raise BifourError(f"{args.field}: field norms need a space-domain file")
        flavor = args.flavor.lower()
        if flavor == "l1":
            value = lp_norm(f, 1)
        elif flavor == "l2":
            value = lp_norm(f, 2)
        elif flavor == "linf":
            value = lp_norm(f, math.inf)
        elif flavor == "bmo":
            value = bmo_norm(f)
        elif flavor == "h1":
            value = hardy1_norm(f)
        elif flavor == "sobolev":
            value = sobolev_norm(f, args.s1)
        else:
            raise BifourError(f"field norms are {', '.join(FIELD_FLAVORS)}; got {args.flavor!r}")
        record = norm_record("norm", flavor, {"field": str(args.field), "s": args.s1}, value, f.lattice)
    print(repr(value))
    out.mkdir(parents=True, exist_ok=True)
    append_jsonl(out / "norms.jsonl", record)
    return 0


def cmd_apply(args) -> int:
    cfg = _config(args)
    for p in (args.f1, args.f2):
        if not Path(p).is_file():
            raise BifourError(f"input file not found: {p}")
    f1, f2 = read_field(args.f1), read_field(args.f2)
    if not isinstance(f1, Field) or not isinstance(f2, Field):
        raise BifourError("apply expects space-domain field files")
    m = parse_symbol(args.symbol, f1.lattice.n)
    g = apply_bilinear(m, f1, f2, args.path)
    target = Path(args.output) if args.output else _out_dir(args, cfg) / "apply.txt"
    target.parent.mkdir(parents=True, exist_ok=True)
    write_field(g, target)
    print(target)
    return 0


def cmd_decompose(args) -> int:
    cfg = _config(args)
    f = read_field(args.field)
    if not isinstance(f, Field):
        raise BifourError("decompose expects a space-domain field file")
    target = Path(args.output) if args.output else _out_dir(args, cfg) / "pieces"
    if args.kind == "vanishing":
        dec = vanishing_decompose(f, args.s, K=args.K, w=make_window_family(cfg.window, cfg.order))
        pieces = list(dec.pieces)
        print(f"K = {dec.K}; decay constant = {dec.decay_constant()!r}")
    else:
        split = fs_split(f)
        pieces = [split.g0, *split.components]
        print(f"sum ||g_k||_inf / ||g||_BMO = {split.bmo_ratio()!r}")
    for path in write_decomposition(pieces, target):
        print(path)
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args)
    if args.check:
        cfg = cfg.with_updates(checks=tuple(args.check))
    elif args.all:
        cfg = cfg.with_updates(checks=None)
    out = _out_dir(args, cfg)

    def progress(report):
        status = "pass" if report.passed else "FAIL"
        print(f"{report.check}: {status} ({report.seconds:.1f} s)", file=sys.stderr, flush=True)

    summary = run_suite(cfg, progress=None if args.quiet else progress)
    write_reports(summary.reports, out / "reports.jsonl")
    write_summary(summary.reports, out / "summary.csv")
    print(summary.table())
    return summary.exit_status


# --- parser -------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", help="output directory (overrides $BIFOUR_OUT)")
    p.add_argument("--n", type=int, help="dimension")
    p.add_argument("--window", help="window taper: smoothstep or cosine")
    p.add_argument("--order", type=int, help="smoothstep order (odd)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bifour", description="Discrete spectral toolkit for bilinear Fourier multipliers."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbols", help="list the symbol catalog")
    p.set_defaults(func=cmd_symbols)

    p = sub.add_parser("norm", help="norm of a catalog symbol or of a field file")
    _common(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--symbol", help='catalog reference, e.g. "coifman-meyer(a=2)"')
    src.add_argument("--field", help="field file")
    p.add_argument("--flavor", required=True,
                   help=f"symbol: {', '.join(FLAVORS)}; field: {', '.join(FIELD_FLAVORS)}")
    p.add_argument("--s1", type=float, default=0.0, help="first smoothness (or Sobolev order for fields)")
    p.add_argument("--s2", type=float, default=0.0)
    p.add_argument("--j", type=int, help="single dyadic level (default: sup over jmin..jmax)")
    p.add_argument("--jmin", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--sym-N", dest="sym_N", type=int, help="points per axis of the symbol lattice")
    p.add_argument("--sym-L", dest="sym_L", type=float, help="period of the symbol lattice")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("apply", help="apply T_m to two field files")
    _common(p)
    p.add_argument("--symbol", required=True)
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("-o", "--output", help="output field file")
    p.add_argument("--path", choices=("auto", "naive", "fast"), default="auto")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("decompose", help="vanishing dyadic decomposition or Riesz split of a field")
    _common(p)
    p.add_argument("field")
    p.add_argument("--kind", choices=("vanishing", "fs"), default="vanishing")
    p.add_argument("--s", type=float, default=1.0, help="smoothness for the decay constant (> n/2)")
    p.add_argument("--K", type=int, help="number of dyadic levels (default: all resolvable)")
    p.add_argument("-o", "--output", help="directory for piece files")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run the check catalog")
    _common(p)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--all", action="store_true", help="run every check (default)")
    which.add_argument("--check", action="append", metavar="ID", help="run one check (repeatable)")
    p.add_argument("--seed", type=int, action="append", help="random seed (repeatable; replaces the seed list)")
    p.add_argument("--N", type=int, help="operator lattice points per axis")
    p.add_argument("--L", type=float, help="operator lattice period")
    p.add_argument("--jmin", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--draws", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--drift-bound", dest="drift_bound", type=float)
    p.add_argument("-q", "--quiet", action="store_true", help="no progress lines on stderr")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except (BifourError, OSError) as exc:
        print(f"bifour: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
