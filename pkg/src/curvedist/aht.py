"""The two Agol--Hass--Thurston moves on measured train tracks, and the
splitting sequences they generate.

Both moves act at a co-oriented switch.  The splitting side is the one
whose first end (in reading order) is lighter; its first ends, as many as
fit under the weight of the other side's first branch, are pushed along
that branch past its far end.  A twist merges the maximal run of such
splits when the far end is the next end on the splitting side, computing
the multiplicity with one integer division.

The ribbon surgery follows the strand picture: the pushed bundle hugs the
wall of the rail branch adjacent to the reading-order-low corner of its
near end, so it re-attaches on the corresponding flank of the far end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateSplit, IsCurve, NotApplicable, Terminated
from .surface import bitlen
from .traintrack import (
    CarryingMap,
    FORWARD,
    Measure,
    TrackSurgery,
    compose,
    identity_carrying,
)


@dataclass
class MoveOutcome:
    track: object
    measure: object
    carrying: object            # one-step map, source = new, target = old
    kind: str                   # "split" or "twist"
    branch_disappeared: object  # branch id of the old track, or None
    switch_disappeared: bool
    twist_power: object         # k for twists, None for splits
    next_switch: object         # (switch, omega) or None


@dataclass
class AhtState:
    index: int
    track: object
    measure: object
    switch: object              # s_i (None once the switch disappears)
    omega: object
    carrying_step: object       # phi_{i,i-1}
    carrying_total: object      # phi_{i,0}, or None in sparse mode
    outcome: object             # MoveOutcome that produced this state
    untouched: frozenset        # branches of tau_0 untouched in tau_i

    @property
    def norm(self):
        return self.measure.norm


class _SplitData:
    """Shared preprocessing for both moves at a co-oriented switch."""

    def __init__(self, track, measure, s, omega):
        if track.is_curve:
            raise IsCurve("no moves on the circle track")
        if s not in track.switches:
            raise NotApplicable("switch %r not in track" % (s,))
        first0 = track.list_of_ends(s, 0, omega)[0]
        first1 = track.list_of_ends(s, 1, omega)[0]
        w0, w1 = measure.of_end(first0), measure.of_end(first1)
        if w0 < w1:
            eta = 0
        elif w1 < w0:
            eta = 1
        else:
            # tie: the side containing the end with the smaller id splits
            eta = 0 if first0 < first1 else 1
        self.track, self.measure, self.s, self.omega = track, measure, s, omega
        self.eta = eta
        self.A = list(track.list_of_ends(s, eta, omega))
        self.B = list(track.list_of_ends(s, 1 - eta, omega))
        self.bbar_end = self.B[0]
        self.bbar = track.branch_of(self.bbar_end)
        self.bbar_other = track.other_end(self.bbar_end)
        if self.bbar_other == self.A[0]:
            raise DegenerateSplit(
                "the rail branch would split along itself; the measure "
                "carries closed components parallel to branch %d" % self.bbar)
        self.splitting_ends = []
        total = 0
        wbar = measure(self.bbar)
        for e in self.A:
            if total + measure.of_end(e) > wbar:
                break
            total += measure.of_end(e)
            self.splitting_ends.append(e)
        assert self.splitting_ends, "direction rule guarantees h >= 1"
        self.split_sum = total
        self.h = len(self.splitting_ends)

    def twist_applicable(self):
        return self.h < len(self.A) and self.A[self.h] == self.bbar_other


def _landing(track, data):
    """Where the pushed block re-attaches: ``(switch, side, direction,
    hug_wall)``.  ``direction`` is +1/-1 in storage order relative to the
    far end of the rail; ``hug_wall`` is the rail wall the pushed bundle
    runs along (the one adjacent to the reading-order-low corner of the
    near end)."""
    _s, bside, _pos = track.attach[data.bbar_end]
    low_is_ccw_next = (data.omega == FORWARD) == (bside == 1)
    _b, which = track.end_info[data.bbar_end]
    hug_wall = (data.bbar, (1 - which) if low_is_ccw_next else which)
    # a wall joins the ccw-next corner of one end to the ccw-prev corner
    # of the other, and vice versa
    arrive_at_prev = low_is_ccw_next
    s2, d2, _q2 = track.attach[data.bbar_other]
    if arrive_at_prev:
        direction = -1 if d2 == 0 else +1
    else:
        direction = +1 if d2 == 0 else -1
    return s2, d2, direction, hug_wall


def split_move(track, measure, s, omega=FORWARD):
    """One split at the co-oriented switch ``(s, omega)``."""
    data = _SplitData(track, measure, s, omega)
    return _do_split(data)


def _do_split(data, k=1, kind="split"):
    track, measure = data.track, data.measure
    s = data.s
    s2, d2, direction, hug_wall = _landing(track, data)

    surgery = TrackSurgery(track, measure.weights)
    eta_list = surgery.switches[s][data.eta]
    for e in data.splitting_ends:
        eta_list.remove(e)
    dest = surgery.switches[s2][d2]
    q = dest.index(data.bbar_other)
    block = list(data.splitting_ends)
    if direction == -1:
        dest[q:q] = block
    else:
        dest[q + 1:q + 1] = list(reversed(block))

    # The pushed bundle separates the rail from the region its hugged
    # wall used to border; the remainder now borders the face just past
    # the last splitting end.  (In the twist configuration this face is
    # already the hugged wall's own, so nothing changes.)
    if data.h < len(data.A):
        nxt = data.A[data.h]
        b_nxt, w_nxt = track.end_info[nxt]
        low_next = (data.omega == FORWARD) == (data.eta == 1)
        token = (b_nxt, (1 - w_nxt) if low_next else w_nxt)
        surgery.wall_region[hug_wall] = surgery.wall_region[token]
    else:
        # full push: the far face is the one beyond the rail's other wall
        surgery.wall_region[hug_wall] = \
            surgery.wall_region[(data.bbar, 1 - hug_wall[1])]

    remainder = measure(data.bbar) - k * data.split_sum
    assert remainder >= 0
    exact = remainder == 0
    switch_gone = exact and len(data.B) == 1
    if switch_gone:
        assert data.h == len(data.A), "switch disappears only on a full push"

    # carrying rows: splitting branches pick up k copies of the rail per
    # splitting end
    rail_mult = {}
    for e in data.splitting_ends:
        b = track.branch_of(e)
        rail_mult[b] = rail_mult.get(b, 0) + k
    for b, m in rail_mult.items():
        surgery.matrix[b] = {b: 1, data.bbar: m}
    for e in data.splitting_ends:
        surgery.end_map[e] = data.bbar_other
    if exact:
        surgery.delete_branch(data.bbar)
    else:
        surgery.measure[data.bbar] = remainder
    new_track = surgery.finish()

    new_measure = Measure(new_track, surgery.measure)
    untouched = frozenset(
        b for b, row in surgery.matrix.items() if row == {b: 1})
    step = CarryingMap(
        source=new_track, target=track,
        matrix=surgery.matrix,
        end_map=surgery.end_map,
        switch_map={t: t for t in new_track.switches},
        untouched=untouched,
    )
    return MoveOutcome(
        track=new_track,
        measure=new_measure,
        carrying=step,
        kind=kind,
        branch_disappeared=data.bbar if exact else None,
        switch_disappeared=switch_gone,
        twist_power=k if kind == "twist" else None,
        next_switch=(s, data.omega) if s in new_track.switches else None,
    )


def twist_move(track, measure, s, omega=FORWARD):
    """The twist move: ``k`` successive splits at once, where the far end
    of the rail is the next end on the splitting side."""
    data = _SplitData(track, measure, s, omega)
    if not data.twist_applicable():
        raise NotApplicable("twist move needs the rail to return as the "
                            "next end on the splitting side")
    k = measure(data.bbar) // data.split_sum
    assert k >= 1
    # iterated splits leave the attachment lists unchanged: the pushed
    # block lands exactly where it was removed from
    outcome = _do_split(data, k=k, kind="twist")
    assert not outcome.switch_disappeared
    return outcome


def aht_step(track, measure, s, omega=FORWARD):
    """Twist when applicable, else split."""
    data = _SplitData(track, measure, s, omega)
    if data.twist_applicable():
        k = measure(data.bbar) // data.split_sum
        outcome = _do_split(data, k=k, kind="twist")
        assert not outcome.switch_disappeared
        return outcome
    return _do_split(data)


def aht_sequence(track, measure, s, omega=FORWARD, stop=None,
                 accumulate=True, check=False):
    """Generate the AHT sequence from ``(track, measure, s, omega)``.

    Yields one :class:`AhtState` per executed move.  The sequence ends
    when the track becomes a circle, when the tracked switch disappears,
    or when ``stop(state)`` returns true.  With ``accumulate`` the
    composite carrying map back to the input track is carried along;
    otherwise only the one-step maps are attached.
    """
    cur_track, cur_measure = track, measure
    cur_s, cur_omega = s, omega
    total = identity_carrying(track) if accumulate else None
    untouched = frozenset(track.branches)
    norm = cur_measure.norm
    i = 0
    while True:
        if cur_track.is_curve or cur_s is None:
            return
        outcome = aht_step(cur_track, cur_measure, cur_s, cur_omega)
        i += 1
        if accumulate:
            total = compose(total, outcome.carrying)
        touched = set()
        for b in untouched:
            if b not in outcome.carrying.untouched:
                touched.add(b)
        untouched = frozenset(untouched - touched)
        if check:
            assert outcome.carrying.push(outcome.measure).weights == \
                cur_measure.weights
        new_norm = outcome.measure.norm
        assert new_norm <= norm, "measure norm must not increase"
        norm = new_norm
        cur_track, cur_measure = outcome.track, outcome.measure
        if outcome.next_switch is None:
            cur_s, cur_omega = None, None
        else:
            cur_s, cur_omega = outcome.next_switch
        state = AhtState(
            index=i,
            track=cur_track,
            measure=cur_measure,
            switch=cur_s,
            omega=cur_omega,
            carrying_step=outcome.carrying,
            carrying_total=total,
            outcome=outcome,
            untouched=untouched,
        )
        yield state
        if stop is not None and stop(state):
            return


def run_aht(track, measure, s, omega=FORWARD, stop=None, max_steps=None):
    """Run an AHT sequence to its end (or until ``stop``); returns the
    list of states."""
    states = []
    for state in aht_sequence(track, measure, s, omega, stop=stop):
        states.append(state)
        if max_steps is not None and len(states) >= max_steps:
            raise Terminated("AHT sequence exceeded %d steps" % max_steps)
    return states
