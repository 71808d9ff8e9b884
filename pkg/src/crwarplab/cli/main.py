"""Command line entry point: ``cr-warp-lab``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from crwarplab import SCHEMA
from crwarplab.cli import render
from crwarplab.cli.scenario import (
    Scenario,
    _document,
    axis_values,
    exit_status,
    grid_points,
    load_scenario,
    run_lemma_suite,
    run_scenario,
)
from crwarplab.errors import ConfigError, CRWarpError
from crwarplab.immersion import gallery
from crwarplab.tolerances import DEFAULT


def _emit(doc: dict, fmt: str, out: str | None) -> None:
    text = render.to_json(doc) if fmt == "json" else render.to_table(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    doc = run_scenario(load_scenario(args.scenario))
    _emit(doc, args.format, args.out)
    return exit_status(doc)


def cmd_gallery(args) -> int:
    entry = gallery.get(args.key)
    names = list(entry.defaults)
    fixed = {}
    for item in args.set or []:
        k, _, v = item.partition("=")
        fixed[k] = axis_values(v, f"--set {k}")[0]
    if args.grid:
        grid = {}
        for item in args.grid:
            k, sep, v = item.partition("=")
            if not sep:
                raise ConfigError("--grid", f"expected name=values, got {item!r}")
            grid[k] = v if v.count(":") == 2 else v.split(",")
    else:
        grid = dict(entry.default_grid)
    for k in fixed:
        grid.pop(k, None)
    pts = grid_points(grid, names, "--grid") if grid else [{}]
    pts = [{**fixed, **p} for p in pts]
    sc = Scenario("immersion", args.seed, f"gallery:{entry.key}", DEFAULT, chart=entry.chart,
                  entry=entry, points=pts, cr_warped=entry.cr_warped)
    doc = run_scenario(sc)
    _emit(doc, args.format, args.out)
    return exit_status(doc)


def cmd_lemmas(args) -> int:
    summary = run_lemma_suite(args.seed, args.count)
    doc = _document(Scenario("lemmas", args.seed, "lemmas"), [], lemma_summary=summary)
    _emit(doc, args.format, args.out)
    return exit_status(doc)


def cmd_report(args) -> int:
    path = Path(args.file)
    doc = None
    if path.suffix == ".json":
        try:
            doc = json.loads(path.read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(str(path), f"cannot read report: {exc}") from None
        if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
            raise ConfigError(f"{path}.schema", f"expected {SCHEMA!r}")
    else:
        doc = run_scenario(load_scenario(path))
    _emit(doc, args.format, args.out)
    return exit_status(doc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cr-warp-lab",
                                description="Numerical verification of Chen-type inequalities "
                                            "for CR-warped products in complex space forms.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="table"):
        sp.add_argument("--format", choices=("json", "table"), default=fmt)
        sp.add_argument("--out", help="write the rendering to this file instead of stdout")

    v = sub.add_parser("verify", help="evaluate a scenario file")
    v.add_argument("scenario")
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gallery", help="evaluate a built-in immersion over a grid")
    g.add_argument("key", choices=gallery.KEYS)
    g.add_argument("--grid", action="append", metavar="NAME=V1,V2|LO:HI:COUNT")
    g.add_argument("--set", action="append", metavar="NAME=VALUE", help="fix a parameter")
    g.add_argument("--seed", type=int, default=0)
    common(g)
    g.set_defaults(func=cmd_gallery)

    lm = sub.add_parser("lemmas", help="randomized checks of the algebraic lemmas")
    lm.add_argument("--seed", type=int, default=1)
    lm.add_argument("--count", type=int, default=10_000)
    common(lm)
    lm.set_defaults(func=cmd_lemmas)

    r = sub.add_parser("report", help="render a scenario run or a saved JSON report")
    r.add_argument("file")
    common(r, fmt="json")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CRWarpError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
