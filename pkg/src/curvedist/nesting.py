"""Reductions built on AHT sequences: collapsing a track to one switch,
and nesting it deeply inside itself (exactly two surviving ends).

These are the two constructions whose outputs stay a bounded distance
from their inputs in the curve graph; the bounds are recorded on the
results as diameter budgets taken from the constants profile.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CurveDistError, DegenerateSplit, IsCurve
from .traintrack import (
    FORWARD,
    compose,
    height_after,
    identity_carrying,
    punctured_monogon_branch,
)
from .aht import aht_sequence


@dataclass
class NestingResult:
    track: object
    measure: object
    carrying: object        # composite map back onto the input track
    step_count: int         # total AHT moves executed
    diameter_budget: object  # (name, value) certified for this reduction


def _budget(name, xi):
    """Diameter budget certified for a reduction; depends only on xi."""
    if xi is None:
        return (name, None)
    values = {
        "Dp_dn": 27,                    # one-step nesting
        "D_dn": 12 * xi * 27,           # full deep nesting
        "D_1s": 48 * xi * xi * 17,      # one-switch reduction
    }
    return (name, values[name])


def _run_until(track, measure, s, omega, stop_state):
    """Run an AHT sequence until ``stop_state(state)`` holds; returns the
    final state (which satisfies the predicate) or the terminal state."""
    last = None
    for state in aht_sequence(track, measure, s, omega, stop=stop_state):
        last = state
    if last is None:
        raise CurveDistError("AHT sequence performed no moves")
    return last


def deep_nesting_one_step(track, measure, e, e_prime, xi=None):
    """Make the ends ``e`` and ``e_prime`` (consecutive on one side of the
    single switch) one step less persistent.

    Returns ``(result, omega, e_dd)`` where ``e_dd`` is one of the two
    ends, and ``e_dd`` together with everything before it in the
    ``omega`` reading order is not persistent in the output.
    """
    if track.is_curve:
        raise IsCurve("one-step nesting needs a switch")
    if len(track.switches) != 1:
        raise CurveDistError("deep nesting operates on one-switch tracks")
    (s,) = track.switches
    se, side_e, pos_e = track.attach[e]
    se2, side_e2, pos_e2 = track.attach[e_prime]
    if se != s or se2 != s or side_e != side_e2 or abs(pos_e - pos_e2) != 1:
        raise CurveDistError("ends must be consecutive on one side")

    def not_pm(end):
        return not punctured_monogon_branch(track, track.branch_of(end))

    # case (a): an end of a branch with no punctured monogon drives an AHT
    # run with the co-orientation making it the higher end of its branch
    for target in (e, e_prime):
        if not_pm(target):
            state, omega = _case_a(track, measure, s, target)
            result = NestingResult(
                track=state.track, measure=state.measure,
                carrying=state.carrying_total, step_count=state.index,
                diameter_budget=_budget("Dp_dn", xi))
            return result, omega, target

    # reading order with e before e_prime
    omega_p = FORWARD if pos_e < pos_e2 else not FORWARD
    ebar = _companion_end(track, measure, omega_p, e)

    if not_pm(ebar):
        state, omega = _case_a(track, measure, s, ebar)
        e_dd = e if omega == omega_p else e_prime
        result = NestingResult(
            track=state.track, measure=state.measure,
            carrying=state.carrying_total, step_count=state.index,
            diameter_budget=_budget("Dp_dn", xi))
        return result, omega, e_dd

    # case (c): everything in sight bounds a punctured monogon
    if _reading_index(track, omega_p, ebar) < \
            _reading_index(track, omega_p, track.other_end(ebar)):
        # relabel so that ebar is the later end of its branch
        e, e_prime = e_prime, e
        omega_p = not omega_p
    omega = not omega_p
    b = track.branch_of(e)
    bbar = track.branch_of(ebar)

    def stop(state):
        return b not in state.untouched or bbar not in state.untouched

    state = _run_until(track, measure, s, omega, stop)
    if b not in state.untouched:
        ends_b = [x for x in track.branches[b]]
        e_dd = min(ends_b, key=lambda x: _reading_index(track, omega, x))
        if e_dd not in (e, e_prime):
            raise CurveDistError("monogon case selected a foreign end")
    else:
        e_dd = e_prime
    result = NestingResult(
        track=state.track, measure=state.measure,
        carrying=state.carrying_total, step_count=state.index,
        diameter_budget=_budget("Dp_dn", xi))
    return result, omega, e_dd


def _case_a(track, measure, s, target):
    b = track.branch_of(target)
    other = track.other_end(target)
    omega = None
    for om in (FORWARD, not FORWARD):
        if height_after(track, measure, om, target) > \
                height_after(track, measure, om, other):
            omega = om
            break
    if omega is None:
        raise DegenerateSplit(
            "both ends of branch %d sit at equal heights; the measure "
            "routes the branch into itself" % b)

    def stop(state):
        return b not in state.untouched

    state = _run_until(track, measure, s, omega, stop)
    assert b not in state.untouched
    return state, omega


def _companion_end(track, measure, omega_p, e):
    """The first end (in reading order) on the other side whose weight
    interval contains the tail weight of ``e``."""
    s, side, _pos = track.attach[e]
    h_e = height_after(track, measure, omega_p, e)
    for x in track.list_of_ends(s, 1 - side, omega_p):
        hx = height_after(track, measure, omega_p, x)
        if hx <= h_e <= hx + measure.of_end(x):
            return x
    raise CurveDistError("no companion end found; switch condition broken?")


def _reading_index(track, omega, e):
    s, side, pos = track.attach[e]
    n = len(track.switches[s][side])
    return pos if omega else n - 1 - pos


def persistent_base_ends(base_track, carrying):
    """Ends of ``base_track`` persistent under the composite carrying."""
    assert carrying.target == base_track
    return set(carrying.end_map.values())


def deep_nesting(track, measure, xi=None):
    """Split until exactly two ends of the input track stay persistent.

    The input must be a one-switch fully measured track that is not a
    circle.  Each iteration strictly shrinks the persistent-end set, so
    at most ``#ends - 2`` iterations run.
    """
    if track.is_curve:
        raise IsCurve("deep nesting needs a switch")
    if len(track.switches) != 1:
        raise CurveDistError("deep nesting operates on one-switch tracks")
    total = identity_carrying(track)
    cur_track, cur_measure = track, measure
    steps = 0
    iterations = 0
    while True:
        persistent = persistent_base_ends(track, total)
        if len(persistent) == 2:
            break
        if not cur_track.switches:
            # bottomed out at the carried curve itself; only possible when
            # the input was one reduction away from its curve
            break
        pair = _differing_pair(cur_track, total)
        if pair is None:
            raise CurveDistError(
                "no adjacent ends with distinct images, yet more than two "
                "persistent ends remain")
        e, e_prime = pair
        result, _omega, _edd = deep_nesting_one_step(
            cur_track, cur_measure, e, e_prime, xi=xi)
        total = compose(total, result.carrying)
        cur_track, cur_measure = result.track, result.measure
        steps += result.step_count
        iterations += 1
        now = persistent_base_ends(track, total)
        if len(now) >= len(persistent):
            raise CurveDistError("persistent end count failed to drop")
        if xi is not None and iterations >= 12 * xi:
            raise CurveDistError("deep nesting exceeded its iteration bound")
    return NestingResult(
        track=cur_track, measure=cur_measure, carrying=total,
        step_count=steps, diameter_budget=_budget("D_dn", xi))


def _differing_pair(cur_track, total):
    for s in sorted(cur_track.switches):
        for side in (0, 1):
            lst = cur_track.switches[s][side]
            for i in range(len(lst) - 1):
                if total.end_map[lst[i]] != total.end_map[lst[i + 1]]:
                    return lst[i], lst[i + 1]
    return None


def one_switch(track, measure, xi=None):
    """Reduce to a track with at most one switch by running full AHT
    sequences, one switch elimination per round.

    A round either runs at the chosen switch itself (no returning branch
    there: only splits happen, at most one per end) or at an arbitrary
    other switch when a returning branch is present.
    """
    total = identity_carrying(track)
    cur_track, cur_measure = track, measure
    steps = 0
    rounds = 0
    while len(cur_track.switches) > 1:
        s = min(cur_track.switches)
        here = set(cur_track.ends_of_switch(s))
        returning = any(cur_track.other_end(e) in here for e in here)
        if returning:
            s_run = min(t for t in cur_track.switches if t != s)
        else:
            s_run = s
        last = None
        for state in aht_sequence(cur_track, cur_measure, s_run, FORWARD):
            last = state
        assert last is not None
        total = compose(total, last.carrying_total)
        steps += last.index
        cur_track, cur_measure = last.track, last.measure
        rounds += 1
        if xi is not None and rounds >= 4 * xi:
            raise CurveDistError("one-switch exceeded its round bound")
        if not cur_track.switches:
            break
    return NestingResult(
        track=cur_track, measure=cur_measure, carrying=total,
        step_count=steps, diameter_budget=_budget("D_1s", xi))
