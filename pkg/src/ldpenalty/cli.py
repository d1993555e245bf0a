"""``ldp`` command line: build-map, profile, simulate.

Exit codes: 0 success, 1 runtime (I/O) failure, 2 usage or validation error.
Set ``LDP_LOG`` (e.g. ``DEBUG``) for log output on stderr.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys

from . import penalty_map, simulator
from .road_model import MapValidationError, load_road_network

log = logging.getLogger("ldpenalty")


class UsageError(Exception):
    pass


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _gap_factor(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 1:
        raise argparse.ArgumentTypeError(f"gap factor must be >= 1, got {text}")
    return value


def _load_network(path):
    try:
        return load_road_network(path)
    except FileNotFoundError:
        raise UsageError(f"road map not found: {path}") from None


def _check_ids(network, segment, lane):
    try:
        network.segment(segment).lane(lane)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_build_map(args) -> int:
    network = _load_network(args.map)
    _check_ids(network, args.segment, args.lane)
    smap = penalty_map.build_static_map(network, args.segment, args.lane,
                                        args.station_step, args.lateral_step)
    penalty_map.save_map(smap, args.out)
    log.info("wrote %s (%d x %d)", args.out, *smap.shape)
    return 0


def cmd_profile(args) -> int:
    network = _load_network(args.map)
    _check_ids(network, args.segment, args.lane)
    rows = simulator.cross_section(network, args.segment, args.lane, args.station,
                                   args.gap_factor, args.lateral_step)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["lateral", "p_vb", "p_c", "p_lg"])
        for row in rows:
            writer.writerow([format(v, ".9g") for v in row])
    finally:
        if args.out:
            out.close()
    return 0


def cmd_simulate(args) -> int:
    try:
        scenario = simulator.load_scenario(args.scenario, gap_max=args.gap_max,
                                           alpha0=args.alpha0, penalty_threshold=args.threshold)
    except FileNotFoundError as exc:
        raise UsageError(f"file not found: {exc.filename}") from None
    trace = simulator.run(scenario)
    simulator.write_trace_csv(trace, args.out)
    s = simulator.summarize(trace)
    print(f"min_h={s['min_h']:.9g} violations={s['violations']} "
          f"max_penalty={s['max_penalty']:.9g} steps={s['steps']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ldp", description="Localization deviation penalty tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-map", help="precompute a static penalty map for one lane")
    p.add_argument("--map", required=True, help="road-map JSON file")
    p.add_argument("--segment", required=True)
    p.add_argument("--lane", required=True, help="ego lane id")
    p.add_argument("--out", required=True)
    p.add_argument("--station-step", type=_positive, default=penalty_map.DEFAULT_STATION_STEP)
    p.add_argument("--lateral-step", type=_positive, default=penalty_map.DEFAULT_LATERAL_STEP)
    p.set_defaults(func=cmd_build_map)

    p = sub.add_parser("profile", help="penalty layers across the road at one station")
    p.add_argument("--map", required=True)
    p.add_argument("--segment", required=True)
    p.add_argument("--lane", required=True)
    p.add_argument("--station", type=float, default=0.0)
    p.add_argument("--gap-factor", type=_gap_factor, default=1.0)
    p.add_argument("--lateral-step", type=_positive, default=penalty_map.DEFAULT_LATERAL_STEP)
    p.add_argument("--out", help="CSV output (default: stdout)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("simulate", help="run a scenario and write the trace CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gap-max", type=_positive)
    p.add_argument("--alpha0", type=_positive)
    p.add_argument("--threshold", type=_positive, help="penalty threshold P_thr")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("LDP_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MapValidationError, penalty_map.MapSchemaError,
            simulator.ScenarioError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ldp: error: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ldp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
