"""The curvedist command line.

Outputs are JSON objects (schema 1) on stdout; step logs stream one line
per move.  Exit codes: 0 success, 1 domain error (with a machine-readable
error object), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .aht import aht_sequence
from .classify import classify, constants, default_heuristic_profile
from .distance import distance
from .errors import BudgetExceeded, CurveDistError
from .fileio import (
    parse_curve,
    parse_mapping_class,
    parse_surface,
    parse_track,
    parse_triangulation,
)
from .nesting import deep_nesting, one_switch
from .oracle import exact_distance, geometric_intersection
from .surface import validate_triangulation
from .traintrack import FORWARD

SCHEMA = 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("CURVEDIST_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print("CURVEDIST_THREADS must be a positive integer",
                  file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        emit({"schema": SCHEMA, "error": "BudgetExceeded",
              "message": str(exc), "log": exc.log})
        return 1
    except CurveDistError as exc:
        emit({"schema": SCHEMA, "error": type(exc).__name__,
              "message": str(exc)})
        return 1


def emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_surface_args(args):
    if args.surface and os.path.exists(args.surface[0]):
        return parse_surface(_read(args.surface[0]))
    fields = {}
    for tok in args.surface:
        k, v = tok.split("=", 1)
        fields[k] = int(v)
    from .surface import Surface
    return Surface(fields["genus"], fields["punctures"])


def _profile(args, surface):
    if args.profile == "heuristic":
        return default_heuristic_profile(surface)
    return constants(surface)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curvedist",
        description="coarse curve-graph distances and Nielsen-Thurston "
                    "classification via train-track splitting")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print the constants profile")
    p.add_argument("--surface", nargs="+", required=True,
                   help="surface file, or genus=<g> punctures=<p>")
    p.add_argument("--profile", choices=["paper", "heuristic"],
                   default="paper")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("distance", help="coarse distance between two curves")
    p.add_argument("surface")
    p.add_argument("triangulation")
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--profile", choices=["paper", "heuristic"],
                   default="paper")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("classify", help="Nielsen-Thurston type of a word")
    p.add_argument("surface")
    p.add_argument("triangulation")
    p.add_argument("mapfile")
    p.add_argument("--profile", choices=["paper", "heuristic"],
                   default="paper")
    p.add_argument("--budget", type=int, default=None,
                   help="flip budget; paper-mode runs need one")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("trace", help="step log of an AHT sequence")
    p.add_argument("surface")
    p.add_argument("trackfile")
    p.add_argument("--switch", type=int, default=None)
    p.add_argument("--co-orientation", choices=["fwd", "bwd"], default="fwd")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--json-lines", action="store_true")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("deep-nest", help="deep nesting reduction")
    p.add_argument("surface")
    p.add_argument("trackfile")
    p.add_argument("--json-lines", action="store_true")
    p.set_defaults(func=cmd_deep_nest)

    p = sub.add_parser("one-switch", help="one-switch reduction")
    p.add_argument("surface")
    p.add_argument("trackfile")
    p.add_argument("--json-lines", action="store_true")
    p.set_defaults(func=cmd_one_switch)

    p = sub.add_parser("oracle-distance", help="exact distance (desk scale)")
    p.add_argument("surface")
    p.add_argument("triangulation")
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    p.set_defaults(func=cmd_oracle_distance)

    p = sub.add_parser("oracle-intersect",
                       help="geometric intersection number (desk scale)")
    p.add_argument("surface")
    p.add_argument("triangulation")
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    p.set_defaults(func=cmd_oracle_intersect)

    return parser


def cmd_constants(args):
    surface = _load_surface_args(args)
    profile = constants(surface) if args.profile == "paper" \
        else default_heuristic_profile(surface)
    emit({"schema": SCHEMA, "constants": profile.as_dict()})
    return 0


def _load_problem(args):
    surface = parse_surface(_read(args.surface))
    tri = parse_triangulation(_read(args.triangulation))
    validate_triangulation(tri, surface)
    return surface, tri


def cmd_distance(args):
    surface, tri = _load_problem(args)
    a = parse_curve(_read(args.curve_a), tri)
    b = parse_curve(_read(args.curve_b), tri)
    profile = _profile(args, surface)
    est = distance(tri, a, b, surface, profile,
                   want_certificate=args.certificate)
    out = {"schema": SCHEMA, "d": est.d, "m": est.m,
           "L_plus": profile.L_plus, "L_times": profile.L_times,
           "profile": profile.mode,
           "trace": _clean_trace(est.trace)}
    if est.certificate is not None:
        out["certificate"] = [list(map(str, vec)) for vec in est.certificate]
    emit(out)
    return 0


def _clean_trace(trace):
    out = {}
    for k, v in trace.items():
        if k in ("n", "indices", "norms", "one_switch_steps", "early_exit",
                 "bar", "shortening_flips", "short_curve_slack", "a_logsum"):
            out[k] = v
    return out


def cmd_classify(args):
    surface, tri = _load_problem(args)
    word = parse_mapping_class(_read(args.mapfile), tri)
    profile = _profile(args, surface)
    result = classify(tri, word, surface, profile, budget=args.budget)
    out = {"schema": SCHEMA, "profile": profile.mode}
    out.update(result.as_dict())
    if args.budget is not None:
        out["budget"] = args.budget
    emit(out)
    return 0


def _emit_steps(states, json_lines):
    for st in states:
        o = st.outcome
        if json_lines:
            print(json.dumps({
                "step": st.index, "kind": o.kind,
                "k": o.twist_power, "norm": st.norm,
                "branch_disappeared": o.branch_disappeared,
                "switch_disappeared": o.switch_disappeared,
            }, sort_keys=True))
        else:
            print("step=%d kind=%s k=%s norm=%d branch_gone=%s "
                  "switch_gone=%s"
                  % (st.index, o.kind, o.twist_power, st.norm,
                     o.branch_disappeared, o.switch_disappeared))


def cmd_trace(args):
    surface = parse_surface(_read(args.surface))
    track, measure = parse_track(_read(args.trackfile))
    if measure is None:
        raise CurveDistError("trace needs weights in the track file")
    if track.is_curve:
        emit({"schema": SCHEMA, "steps": 0, "note": "curve track"})
        return 0
    s = args.switch if args.switch is not None else min(track.switches)
    omega = args.co_orientation == "fwd"
    count = 0
    states = []
    for st in aht_sequence(track, measure, s, omega):
        states.append(st)
        count += 1
        if args.max_steps is not None and count >= args.max_steps:
            break
    _emit_steps(states, args.json_lines)
    emit({"schema": SCHEMA, "steps": count,
          "final_norm": states[-1].norm if states else measure.norm,
          "is_curve": states[-1].track.is_curve if states else False})
    return 0


def cmd_deep_nest(args):
    surface = parse_surface(_read(args.surface))
    track, measure = parse_track(_read(args.trackfile))
    if measure is None:
        raise CurveDistError("deep-nest needs weights in the track file")
    res = deep_nesting(track, measure, xi=surface.xi)
    from .traintrack import persistent_ends
    emit({"schema": SCHEMA, "steps": res.step_count,
          "persistent_ends": sorted(persistent_ends(res.carrying)),
          "budget": list(res.diameter_budget),
          "is_curve": res.track.is_curve})
    return 0


def cmd_one_switch(args):
    surface = parse_surface(_read(args.surface))
    track, measure = parse_track(_read(args.trackfile))
    if measure is None:
        raise CurveDistError("one-switch needs weights in the track file")
    res = one_switch(track, measure, xi=surface.xi)
    emit({"schema": SCHEMA, "steps": res.step_count,
          "switches": len(res.track.switches),
          "budget": list(res.diameter_budget),
          "is_curve": res.track.is_curve})
    return 0


def cmd_oracle_distance(args):
    surface, tri = _load_problem(args)
    a = parse_curve(_read(args.curve_a), tri)
    b = parse_curve(_read(args.curve_b), tri)
    emit({"schema": SCHEMA,
          "distance": exact_distance(tri, a, b, surface)})
    return 0


def cmd_oracle_intersect(args):
    surface, tri = _load_problem(args)
    a = parse_curve(_read(args.curve_a), tri)
    b = parse_curve(_read(args.curve_b), tri)
    emit({"schema": SCHEMA,
          "intersection": geometric_intersection(tri, a, b)})
    return 0


if __name__ == "__main__":
    sys.exit(main())
