"""Shared test utilities: random valid measured train tracks and small
surface/curve generators."""

import random

from curvedist.surface import Surface
from curvedist.traintrack import (
    Measure,
    PreMeasure,
    TrainTrack,
    fundamental_measures,
    validate_track,
)


def random_ribbon(rng, max_switches=3, max_branches=8):
    """A random connected ribbon structure (switch side lists + branch
    ends), or None when the sample is unusable."""
    v = rng.randint(1, max_switches)
    b = rng.randint(max(2, v + 1), max_branches)
    ends = list(range(2 * b))
    rng.shuffle(ends)
    branches = {i: (ends[2 * i], ends[2 * i + 1]) for i in range(b)}
    pool = list(range(2 * b))
    rng.shuffle(pool)
    # each switch needs >= 1 end per side and >= 3 total
    need = 3 * v
    if len(pool) < need:
        return None
    sides = {s: ([], []) for s in range(v)}
    k = 0
    for s in range(v):
        sides[s][0].append(pool[k]); k += 1
        sides[s][1].append(pool[k]); k += 1
        sides[s][rng.randint(0, 1)].append(pool[k]); k += 1
    while k < len(pool):
        s = rng.randint(0, v - 1)
        sides[s][rng.randint(0, 1)].append(pool[k]); k += 1
    for s in range(v):
        rng.shuffle(sides[s][0])
        rng.shuffle(sides[s][1])
    switches = {s: (tuple(a), tuple(bb)) for s, (a, bb) in sides.items()}
    return switches, branches


def _connected(switches, branches):
    if not branches:
        return False
    adj = {}
    for b, (e0, e1) in branches.items():
        adj.setdefault(e0, set()).add(e1)
        adj.setdefault(e1, set()).add(e0)
    for _s, (a, bb) in switches.items():
        here = list(a) + list(bb)
        for e in here:
            adj.setdefault(e, set()).update(x for x in here if x != e)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def random_measured_track(rng, weight_bits=16, max_switches=3, max_branches=8):
    """A random valid measured train track together with its surface.

    Returns ``(surface, track, measure)``.  Retries internally until a
    usable sample appears.
    """
    for _attempt in range(400):
        sample = random_ribbon(rng, max_switches, max_branches)
        if sample is None:
            continue
        switches, branches = sample
        if not _connected(switches, branches):
            continue
        v, b = len(switches), len(branches)
        probe = TrainTrack(switches, branches,
                           {(bb, w): 0 for bb in branches for w in (0, 1)},
                           {0: (0, 0)}, check=False)
        try:
            cycles = probe.boundary_cycles()
        except Exception:
            continue
        f = len(cycles)
        if (2 - v + b - f) % 2:
            continue
        genus = (2 - v + b - f) // 2
        if genus < 0:
            continue
        # region per cycle; faces that would be forbidden discs get a
        # puncture
        need = [i for i, c in enumerate(cycles) if c.cusps <= 2]
        xi = max(1, -(-b // 6), -(-len(probe.end_info) // 12), v // 4 + 1)
        while xi + 3 - 3 * genus < max(1, len(need)):
            xi += 1
        p = xi + 3 - 3 * genus
        if p < 1:
            continue
        punct = [0] * f
        for i in need:
            punct[i] = 1
        left = p - sum(punct)
        if left < 0:
            continue
        order = [i for i in range(f) if i not in need] or list(range(f))
        j = 0
        while left > 0:
            punct[order[j % len(order)]] += 1
            left -= 1
            j += 1
        wall_region = {}
        for i, cyc in enumerate(cycles):
            for wall in cyc.walls:
                wall_region[wall] = i
        region_meta = {i: (0, punct[i]) for i in range(f)}
        track = TrainTrack(switches, branches, wall_region, region_meta)
        surface = Surface(genus, p)
        try:
            validate_track(track, surface)
        except Exception:
            continue
        fm = fundamental_measures(track)
        if not fm:
            continue
        base = {bb: sum(nu(bb) for nu in fm) for bb in branches}
        if any(w == 0 for w in base.values()):
            continue
        weights = {bb: 0 for bb in branches}
        for nu in fm:
            c = 1 + rng.getrandbits(rng.randint(1, weight_bits))
            for bb in branches:
                weights[bb] += c * nu(bb)
        measure = Measure(track, weights)
        return surface, track, measure
    raise RuntimeError("random track generation failed to converge")


def random_co_oriented_switch(rng, track):
    s = rng.choice(sorted(track.switches))
    return s, rng.random() < 0.5


def torus_track(wa, wb):
    """The two-branch one-switch track on the once-punctured torus."""
    tt = TrainTrack(
        switches={0: ((0, 2), (3, 1))},
        branches={0: (0, 1), 1: (2, 3)},
        wall_region={(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0},
        region_meta={0: (0, 1)},
    )
    return tt, Measure(tt, {0: wa, 1: wb})
