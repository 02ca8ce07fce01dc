"""Shared flags for the figure scripts."""
import argparse

from wbansim.figures import scenario
from wbansim.scenario import with_overrides


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--replications", type=int, help="override run.replications")
    p.add_argument("--horizon", type=int, help="override run.horizon (superframes)")
    p.add_argument("--out", help="also write the table as CSV here")
    return p


def load(name: str, args):
    overrides = []
    if args.replications:
        overrides.append(("run.replications", args.replications))
    if args.horizon:
        overrides.append(("run.horizon", args.horizon))
    return with_overrides(scenario(name), overrides)
