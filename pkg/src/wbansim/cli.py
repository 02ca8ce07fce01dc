"""Command line entry point.

    wbansim run SCENARIO [--seed N] [--set path=value ...] [--sweep path=v1,v2,...]
                         [--format csv|json] [--out FILE] [--trace FILE]
    wbansim show SCENARIO [--set path=value ...]
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import IO

from .experiment import run_scenario, sweep
from .kernel import EventKind
from .metrics import emit
from .network import Network
from .scenario import ConfigError, Scenario, dump_scenario, load_scenario, validate, with_overrides


def _pair(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected path=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wbansim", description="IEEE 802.15.4 WBAN MAC attack simulator")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario, optionally sweeping one parameter")
    run.add_argument("scenario", help="scenario file (dotted key = value lines)")
    run.add_argument("--seed", type=int, help="master seed (overrides run.seed)")
    run.add_argument("--set", dest="overrides", type=_pair, action="append", default=[],
                     metavar="PATH=VALUE", help="override one scenario key; repeatable")
    run.add_argument("--sweep", type=_pair, metavar="PATH=V1,V2,...",
                     help="sweep one scalar scenario key over the listed values")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--out", help="write the table here instead of stdout")
    run.add_argument("--trace", help="write JSON-lines event and outcome traces here")

    show = sub.add_parser("show", help="print the fully resolved scenario")
    show.add_argument("scenario")
    show.add_argument("--set", dest="overrides", type=_pair, action="append", default=[],
                      metavar="PATH=VALUE")
    return p


def _resolve(args) -> Scenario:
    s = load_scenario(args.scenario)
    overrides = list(args.overrides)
    if getattr(args, "seed", None) is not None:
        overrides.append(("run.seed", str(args.seed)))
    return validate(with_overrides(s, overrides))


def _trace_writer(fh: IO[str], point):
    kinds = {int(k): k.name for k in EventKind}

    def sink(replication: int, seed: int, net: Network) -> None:
        fh.write(json.dumps({"type": "run", "point": point, "replication": replication,
                             "seed": seed}) + "\n")
        for at, seq, kind, target in net.sim.trace:
            fh.write(json.dumps({"type": "event", "at": at, "seq": seq,
                                 "kind": kinds[kind], "target": target}) + "\n")
        for rec in net.records:
            fh.write(json.dumps({"type": "record", "record": list(rec)}) + "\n")
    return sink


def cmd_run(args) -> int:
    s = _resolve(args)
    trace_fh = open(args.trace, "w") if args.trace else None
    try:
        if args.sweep:
            axis, raw = args.sweep
            values = [v.strip() for v in raw.split(",") if v.strip()]
            if not values:
                raise ConfigError(axis, "sweep needs at least one value")
            make = (lambda v: _trace_writer(trace_fh, v)) if trace_fh else None
            table = sweep(s, axis, values, trace=make)
        else:
            axis = "scenario"
            name = Path(args.scenario).stem
            sink = _trace_writer(trace_fh, name) if trace_fh else None
            table = [(name, run_scenario(s, sink))]
    finally:
        if trace_fh:
            trace_fh.close()
    data = emit(table, args.format, axis=axis)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "show":
            sys.stdout.write(dump_scenario(_resolve(args)))
            return 0
        return cmd_run(args)
    except ConfigError as e:
        print(f"wbansim: configuration error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
