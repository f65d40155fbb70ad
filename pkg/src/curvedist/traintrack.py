"""Measured train tracks as combinatorial ribbon data.

A track stores, per switch, the two ordered lists of branch ends attached
on its two sides.  Reading both lists in storage order is one
co-orientation of the switch; reading both backwards is the other.  The
counterclockwise order of ends around a fattened switch is side 0 in
storage order followed by side 1 reversed; all face tracing derives from
that single convention.

The embedding is remembered through the complementary regions: every
branch wall (side of a branch) is tagged with the region it borders, and
each region knows its genus and how many punctures it contains.  Moves
keep this map up to date locally, so largeness and punctured-monogon
queries never need a global re-embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import (
    BadMeasure,
    BigonFace,
    EmptySupport,
    MissingEndMap,
    MonogonFace,
    SmallSwitch,
    TrackInvalid,
    TrackMismatch,
)
from .surface import bitlen

FORWARD = True
BACKWARD = False


class TrainTrack:
    """Immutable combinatorial train track with region bookkeeping.

    switches: {sid: (tuple_of_end_ids_side0, tuple_of_end_ids_side1)}
    branches: {bid: (end0, end1)} with ``None`` for a closed circle branch
    wall_region: {(bid, 0|1): region_id}; wall ``w`` of a branch is the
        side adjacent to the ccw-previous corner of its end ``w``
    region_meta: {region_id: (genus, punctures)}
    """

    def __init__(self, switches, branches, wall_region, region_meta, check=True):
        self.switches = {int(s): (tuple(a), tuple(b))
                         for s, (a, b) in switches.items()}
        self.branches = {int(b): (None if ends is None else (ends[0], ends[1]))
                         for b, ends in branches.items()}
        self.wall_region = dict(wall_region)
        self.region_meta = {int(r): (int(g), int(p))
                            for r, (g, p) in region_meta.items()}
        self.end_info = {}
        for b, ends in self.branches.items():
            if ends is None:
                continue
            for w, e in enumerate(ends):
                if e in self.end_info:
                    raise TrackInvalid("end %d used twice" % e)
                self.end_info[e] = (b, w)
        self.attach = {}
        for s, sides in self.switches.items():
            for side, lst in enumerate(sides):
                for pos, e in enumerate(lst):
                    if e in self.attach:
                        raise TrackInvalid("end %d attached twice" % e)
                    self.attach[e] = (s, side, pos)
        if check:
            self._check_structure()

    def _check_structure(self):
        if set(self.attach) != set(self.end_info):
            raise TrackInvalid("attached ends and branch ends disagree")
        for b in self.branches:
            for w in (0, 1):
                if (b, w) not in self.wall_region:
                    raise TrackInvalid("missing region tag for wall (%d,%d)" % (b, w))
        for (b, _w), r in self.wall_region.items():
            if b not in self.branches or r not in self.region_meta:
                raise TrackInvalid("dangling wall/region reference")
        for s, (a, bb) in self.switches.items():
            if len(a) < 1 or len(bb) < 1 or len(a) + len(bb) < 3:
                raise SmallSwitch("switch %d has sides (%d, %d)" % (s, len(a), len(bb)))

    # -- queries ---------------------------------------------------------

    @property
    def is_curve(self):
        return (not self.switches and len(self.branches) == 1
                and next(iter(self.branches.values())) is None)

    @property
    def num_ends(self):
        return len(self.end_info)

    def other_end(self, e):
        b, w = self.end_info[e]
        return self.branches[b][1 - w]

    def branch_of(self, e):
        return self.end_info[e][0]

    def ends_of_switch(self, s):
        a, b = self.switches[s]
        return list(a) + list(b)

    def list_of_ends(self, s, side, omega=FORWARD):
        lst = self.switches[s][side]
        return lst if omega else tuple(reversed(lst))

    def ccw_order(self, s):
        a, b = self.switches[s]
        return list(a) + list(reversed(b))

    def ccw_next(self, e):
        s, _side, _pos = self.attach[e]
        order = self.ccw_order(s)
        i = order.index(e)
        return order[(i + 1) % len(order)]

    def same_side(self, e1, e2):
        s1, side1, _ = self.attach[e1]
        s2, side2, _ = self.attach[e2]
        return s1 == s2 and side1 == side2

    # -- faces -----------------------------------------------------------

    def boundary_cycles(self):
        """Trace the boundary cycles of the fattened track.

        Each cycle is a :class:`Cycle` whose walls are ``(branch, wall)``
        tokens in traversal order; corner ``i`` of the cycle is the switch
        corner rounded after wall ``i`` and is a cusp when the two ends
        there lie on the same switch side.
        """
        cycles = []
        visited = set()
        for e0 in sorted(self.end_info):
            if e0 in visited:
                continue
            walls, cusps = [], 0
            e = e0
            while True:
                visited.add(e)
                b, w = self.end_info[e]
                walls.append((b, w))
                mate = self.other_end(e)
                nxt = self.ccw_next(mate)
                if self.same_side(mate, nxt):
                    cusps += 1
                e = nxt
                if e == e0:
                    break
            cycles.append(Cycle(tuple(walls), cusps))
        for b in sorted(self.branches):
            if self.branches[b] is None:
                cycles.append(Cycle(((b, 0),), 0))
                cycles.append(Cycle(((b, 1),), 0))
        return cycles

    def cycle_regions(self):
        """Pairs ``(cycle, region_id)`` with the consistency of the wall
        tags asserted."""
        out = []
        for cyc in self.boundary_cycles():
            rids = {self.wall_region[wall] for wall in cyc.walls}
            if len(rids) != 1:
                raise TrackInvalid("boundary cycle crosses region tags: %r" % (rids,))
            out.append((cyc, rids.pop()))
        return out

    def regions(self):
        """The complementary regions with their boundary data."""
        per = {r: [] for r in self.region_meta}
        for cyc, r in self.cycle_regions():
            per[r].append(cyc)
        out = []
        for r in sorted(per):
            g, p = self.region_meta[r]
            out.append(ComplementaryRegion(
                region_id=r,
                boundary=tuple(per[r]),
                genus=g,
                punctures=p,
            ))
        return out

    def euler_characteristic(self):
        """chi of the surface the track data describes."""
        v = len(self.switches)
        e = sum(1 for ends in self.branches.values() if ends is not None)
        total = v - e  # circle branches have chi 0
        for reg in self.regions():
            total += reg.chi
        return total

    def total_punctures(self):
        return sum(p for _g, p in self.region_meta.values())

    # -- equality ----------------------------------------------------------

    def _key(self):
        return (tuple(sorted(self.switches.items())),
                tuple(sorted(self.branches.items())),
                tuple(sorted(self.wall_region.items())),
                tuple(sorted(self.region_meta.items())))

    def __eq__(self, other):
        return isinstance(other, TrainTrack) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.is_curve:
            return "TrainTrack(curve)"
        return "TrainTrack(%d switches, %d branches)" % (
            len(self.switches), len(self.branches))


@dataclass(frozen=True)
class Cycle:
    walls: tuple
    cusps: int


@dataclass(frozen=True)
class ComplementaryRegion:
    region_id: int
    boundary: tuple          # tuple of Cycle
    genus: int
    punctures: int

    @property
    def cusp_count(self):
        return sum(c.cusps for c in self.boundary)

    @property
    def num_cycles(self):
        return len(self.boundary)

    @property
    def chi(self):
        return 2 - 2 * self.genus - self.num_cycles - self.punctures

    @property
    def is_disc(self):
        return self.genus == 0 and self.num_cycles == 1 and self.punctures == 0

    @property
    def is_once_punctured_disc(self):
        return self.genus == 0 and self.num_cycles == 1 and self.punctures == 1


def faces(track):
    """The complementary regions of the track."""
    return track.regions()


def is_large(track):
    """A track is large when every complementary region is a disc or a
    once-punctured disc."""
    if track.is_curve:
        return False
    return all(r.is_disc or r.is_once_punctured_disc for r in track.regions())


def validate_track(track, surface=None):
    """Check track invariants; raise the first violated one."""
    for s, (a, b) in track.switches.items():
        if len(a) < 1 or len(b) < 1 or len(a) + len(b) < 3:
            raise SmallSwitch("switch %d has %d+%d ends" % (s, len(a), len(b)))
    for reg in track.regions():
        if reg.is_disc:
            if reg.cusp_count == 0:
                raise TrackInvalid("nullgon complementary region")
            if reg.cusp_count == 1:
                raise MonogonFace("monogon complementary region")
            if reg.cusp_count == 2:
                raise BigonFace("bigon complementary region")
    if surface is not None:
        if track.euler_characteristic() != surface.chi:
            raise TrackInvalid(
                "region bookkeeping gives chi=%d, surface has chi=%d"
                % (track.euler_characteristic(), surface.chi))
        if track.total_punctures() != surface.punctures:
            raise TrackInvalid(
                "puncture bookkeeping gives %d, surface has %d"
                % (track.total_punctures(), surface.punctures))
        xi = surface.xi
        if not track.is_curve:
            if len(track.branches) > 6 * xi:
                raise TrackInvalid("more than 6*xi branches")
            if track.num_ends > 12 * xi:
                raise TrackInvalid("more than 12*xi ends")
            if len(track.switches) >= 4 * xi:
                raise TrackInvalid("at least 4*xi switches")


def punctured_monogon_branch(track, b):
    """True when the two sides of branch ``b`` bound a once-punctured
    monogon: a region that is a once-punctured disc with at most one cusp
    whose boundary consists of walls of ``b`` only."""
    for reg in track.regions():
        if not reg.is_once_punctured_disc or reg.cusp_count > 1:
            continue
        for cyc in reg.boundary:
            if all(bb == b for bb, _w in cyc.walls):
                return True
    return False


# -- measures -----------------------------------------------------------------


class Measure:
    """Positive integer weights satisfying the switch conditions."""

    def __init__(self, track, weights):
        self.track = track
        self.weights = {int(b): int(w) for b, w in weights.items()}
        if set(self.weights) != set(track.branches):
            raise BadMeasure("measure must weight every branch")
        if any(w <= 0 for w in self.weights.values()):
            raise BadMeasure("measure weights must be positive")
        for s in track.switches:
            if side_weight(track, self, s, 0) != side_weight(track, self, s, 1):
                raise BadMeasure("switch condition fails at switch %d" % s)

    def __call__(self, b):
        return self.weights[b]

    def of_end(self, e):
        return self.weights[self.track.branch_of(e)]

    @property
    def norm(self):
        return sum(bitlen(w + 1) for w in self.weights.values())

    def switch_weight(self, s):
        return side_weight(self.track, self, s, 0)

    def as_premeasure(self):
        return PreMeasure(self.track, self.weights)

    def __eq__(self, other):
        return (isinstance(other, Measure) and self.track == other.track
                and self.weights == other.weights)

    def __repr__(self):
        return "Measure(%r)" % (self.weights,)


class PreMeasure:
    """Nonnegative integer weights; switch conditions not required."""

    def __init__(self, track, weights):
        self.track = track
        self.weights = {int(b): int(weights.get(b, 0)) for b in track.branches}
        if any(w < 0 for w in self.weights.values()):
            raise BadMeasure("premeasure weights must be nonnegative")

    def __call__(self, b):
        return self.weights[b]

    @property
    def support(self):
        return {b for b, w in self.weights.items() if w > 0}

    def vector(self):
        return tuple(self.weights[b] for b in sorted(self.track.branches))

    def __eq__(self, other):
        return (isinstance(other, PreMeasure) and self.track == other.track
                and self.weights == other.weights)

    def __repr__(self):
        return "PreMeasure(%r)" % (self.weights,)


def side_weight(track, measure, s, side):
    return sum(measure.of_end(e) if isinstance(measure, Measure)
               else measure(track.branch_of(e))
               for e in track.switches[s][side])


def height(track, measure, omega, e):
    """Total weight of the ends on ``e``'s side that come before ``e`` in
    the ``omega`` reading order."""
    s, side, _pos = track.attach[e]
    total = 0
    for x in track.list_of_ends(s, side, omega):
        if x == e:
            return total
        total += measure.of_end(x)
    raise BadMeasure("end %d not on its own switch side" % e)


def height_after(track, measure, omega, e):
    """Total weight of the ends strictly after ``e`` in ``omega`` order;
    equals ``height`` read with the reversed co-orientation."""
    return height(track, measure, not omega, e)


# -- fundamental measures ------------------------------------------------------


def switch_matrix(track):
    """Rows of the switch-condition system over sorted branch ids."""
    bids = sorted(track.branches)
    index = {b: i for i, b in enumerate(bids)}
    rows = []
    for s in sorted(track.switches):
        row = [0] * len(bids)
        for e in track.switches[s][0]:
            row[index[track.branch_of(e)]] += 1
        for e in track.switches[s][1]:
            row[index[track.branch_of(e)]] -= 1
        rows.append(row)
    return bids, rows


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in vec)
    return tuple(vec)


def fundamental_measures(track):
    """The vertex cycles: minimal integral generators of the extreme rays
    of the cone of nonnegative solutions to the switch conditions.

    Computed by the double description method with exact integer
    arithmetic.
    """
    bids, rows = switch_matrix(track)
    n = len(bids)
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    for row in rows:
        plus, zero, minus = [], [], []
        for r in rays:
            v = sum(a * x for a, x in zip(row, r))
            (plus if v > 0 else minus if v < 0 else zero).append((r, v))
        new = [r for r, _v in zero]
        zsets = {r: frozenset(i for i, x in enumerate(r) if x == 0)
                 for r in rays}
        for rp, vp in plus:
            for rm, vm in minus:
                common = zsets[rp] & zsets[rm]
                # combinatorial adjacency: no third ray vanishes on all of
                # the common zero coordinates
                adjacent = True
                for r3 in rays:
                    if r3 == rp or r3 == rm:
                        continue
                    if common <= zsets[r3]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = tuple((-vm) * a + vp * b for a, b in zip(rp, rm))
                new.append(_primitive(comb))
        seen = set()
        rays = []
        for r in new:
            if r not in seen and any(r):
                seen.add(r)
                rays.append(r)
    out = []
    for r in sorted(rays):
        out.append(PreMeasure(track, {b: r[i] for i, b in enumerate(bids)}))
    return out


def fundamental_measures_bruteforce(track, max_weight=2):
    """Oracle: enumerate small integer solutions and keep the extremal
    ones.  Only usable on small tracks."""
    import itertools

    bids, rows = switch_matrix(track)
    n = len(bids)
    found = set()
    for vec in itertools.product(range(max_weight + 1), repeat=n):
        if not any(vec):
            continue
        if any(sum(a * x for a, x in zip(row, vec)) != 0 for row in rows):
            continue
        if _is_extremal(vec, rows):
            found.add(_primitive(vec))
    return [PreMeasure(track, {b: v[i] for i, b in enumerate(bids)})
            for v in sorted(found)]


def _is_extremal(vec, rows):
    # minimal face containing vec: solutions vanishing off supp(vec);
    # extremal iff that solution space is one-dimensional
    support = [i for i, x in enumerate(vec) if x > 0]
    cols = {i: k for k, i in enumerate(support)}
    sub = []
    for row in rows:
        sub.append([row[i] for i in support])
    rank = _int_rank(sub)
    return len(support) - rank == 1


def _int_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(map(int, r)) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        piv = None
        for r in range(row, len(m)):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for r in range(len(m)):
            if r != row and m[r][col]:
                a, b = m[row][col], m[r][col]
                m[r] = [a * x - b * y for x, y in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


# -- subtracks -----------------------------------------------------------------


def support_subtrack(track, premeasure):
    """The subtrack spanned by the positively weighted branches, together
    with the inclusion carrying map.

    Requires the support to have no dead ends (pushforwards of measures
    never do).  Degree-two switches left over are dissolved, circle
    branches may appear, and the region bookkeeping merges across deleted
    branches.
    """
    if isinstance(premeasure, Measure):
        premeasure = premeasure.as_premeasure()
    dead = [b for b in sorted(track.branches) if premeasure(b) == 0]
    if len(dead) == len(track.branches):
        raise EmptySupport("premeasure has empty support")
    return delete_branches(track, dead)


def delete_branches(track, dead):
    """Delete the given branches, smoothing degenerate switches; returns
    ``(subtrack, inclusion_map)``."""
    surgery = TrackSurgery(track)
    for b in sorted(set(dead)):
        surgery.delete_branch(b)
    sub = surgery.finish()
    inclusion = CarryingMap(
        source=sub, target=track,
        matrix={b: dict(row) for b, row in surgery.matrix.items()},
        end_map=dict(surgery.end_map),
        switch_map={s: s for s in sub.switches},
        untouched=frozenset(b for b, row in surgery.matrix.items()
                            if row == {b: 1}),
    )
    return sub, inclusion


class TrackSurgery:
    """Mutable scratch space for rewriting a track: branch deletion with
    complementary-region merging, followed by smoothing of empty and
    degree-two switches.

    ``matrix`` rows (new branch -> premeasure on the original track) and
    ``end_map``/``measure`` are kept in step so carrying data can be read
    off afterwards.
    """

    def __init__(self, track, measure=None):
        self.switches = {s: [list(a), list(b)]
                         for s, (a, b) in track.switches.items()}
        self.branches = dict(track.branches)
        self.wall_region = dict(track.wall_region)
        self.region_meta = dict(track.region_meta)
        self._alias = {r: r for r in track.region_meta}
        self.matrix = {b: {b: 1} for b in track.branches}
        self.end_map = {e: e for e in track.end_info}
        self.measure = dict(measure) if measure is not None else None

    def _find(self, r):
        while self._alias[r] != r:
            self._alias[r] = self._alias[self._alias[r]]
            r = self._alias[r]
        return r

    def snapshot(self, check=False):
        wr = {wall: self._find(r) for wall, r in self.wall_region.items()}
        return TrainTrack(
            {s: (tuple(a), tuple(b)) for s, (a, b) in self.switches.items()},
            self.branches, wr, self.region_meta, check=check)

    def delete_branch(self, b):
        """Remove branch ``b``, merging the complementary regions its two
        walls border (band attachment: genus adds across regions, bumps
        when both walls are on distinct cycles of one region)."""
        current = self.snapshot()
        cyc_of_wall = {}
        for k, cyc in enumerate(current.boundary_cycles()):
            for wall in cyc.walls:
                cyc_of_wall[wall] = k
        r0 = self._find(self.wall_region[(b, 0)])
        r1 = self._find(self.wall_region[(b, 1)])
        if r0 != r1:
            g0, p0 = self.region_meta[r0]
            g1, p1 = self.region_meta[r1]
            self._alias[r1] = r0
            self.region_meta[r0] = (g0 + g1, p0 + p1)
            del self.region_meta[r1]
        elif cyc_of_wall[(b, 0)] != cyc_of_wall[(b, 1)]:
            g0, p0 = self.region_meta[r0]
            self.region_meta[r0] = (g0 + 1, p0)
        # both walls on one cycle: the cycle splits, genus unchanged
        ends = self.branches[b]
        if ends is not None:
            for e in ends:
                s, side, _pos = current.attach[e]
                self.switches[s][side].remove(e)
                self.end_map.pop(e, None)
        del self.branches[b]
        del self.wall_region[(b, 0)]
        del self.wall_region[(b, 1)]
        self.matrix.pop(b, None)
        if self.measure is not None:
            self.measure.pop(b, None)

    def smooth(self):
        """Drop empty switches and dissolve degree-two ones."""
        while True:
            target = None
            for s in sorted(self.switches):
                a, b = self.switches[s]
                if not a and not b:
                    del self.switches[s]
                    continue
                if not a or not b:
                    raise BadMeasure("dead end at switch %d" % s)
                if len(a) + len(b) == 2:
                    target = s
                    break
            if target is None:
                return
            self._dissolve(target)

    def _dissolve(self, s):
        current = self.snapshot()
        (ex,), (ey,) = self.switches[s]
        bx, _wx = current.end_info[ex]
        by, _wy = current.end_info[ey]
        del self.switches[s]
        self.end_map.pop(ex, None)
        self.end_map.pop(ey, None)
        if bx == by:
            self.branches[bx] = None
            return
        ox = current.other_end(ex)
        oy = current.other_end(ey)
        z = min(bx, by)
        wall0_src = (bx, current.end_info[ox][1])
        wall1_src = (by, current.end_info[oy][1])
        r0 = self._find(self.wall_region[wall0_src])
        r1 = self._find(self.wall_region[wall1_src])
        row = {}
        for bb in (bx, by):
            for k, v in self.matrix.pop(bb).items():
                row[k] = row.get(k, 0) + v
        if self.measure is not None:
            wx_, wy_ = self.measure.pop(bx), self.measure.pop(by)
            if wx_ != wy_:
                raise BadMeasure("unequal weights at a degree-two switch")
            self.measure[z] = wx_
        for bb in (bx, by):
            del self.branches[bb]
            del self.wall_region[(bb, 0)]
            del self.wall_region[(bb, 1)]
        self.branches[z] = (ox, oy)
        self.matrix[z] = row
        self.wall_region[(z, 0)] = r0
        self.wall_region[(z, 1)] = r1

    def finish(self, check=True):
        self.smooth()
        return self.snapshot(check=check)


# -- carrying maps -------------------------------------------------------------


class CarryingMap:
    """A carrying of ``source`` by ``target``: measures push forward
    linearly through ``matrix`` (rows indexed by source branches, entries
    premeasures on the target).  ``end_map``/``switch_map`` record where
    ends and switches of the source sit in the target; ``untouched`` lists
    the target branches copied weight-for-weight into the source.
    """

    def __init__(self, source, target, matrix, end_map=None, switch_map=None,
                 untouched=frozenset()):
        self.source = source
        self.target = target
        self.matrix = {int(b): {int(c): int(v) for c, v in row.items() if v}
                       for b, row in matrix.items()}
        if set(self.matrix) != set(source.branches):
            raise TrackMismatch("matrix rows must cover the source branches")
        self.end_map = dict(end_map) if end_map else {}
        self.switch_map = dict(switch_map) if switch_map else {}
        self.untouched = frozenset(untouched)

    @property
    def norm(self):
        return sum(bitlen(v) for row in self.matrix.values()
                   for v in row.values())

    def push(self, measure):
        """Push a (pre)measure on the source forward to the target."""
        out = {b: 0 for b in self.target.branches}
        for b, w in (measure.weights.items()):
            if w == 0:
                continue
            for c, v in self.matrix[b].items():
                out[c] += w * v
        if isinstance(measure, Measure):
            return Measure(self.target, out)
        return PreMeasure(self.target, out)

    def persistent_ends(self):
        if not self.end_map:
            raise MissingEndMap("carrying map has no end data")
        return set(self.end_map.values())

    def __repr__(self):
        return "CarryingMap(%r -> %r)" % (self.source, self.target)


def identity_carrying(track):
    return CarryingMap(
        source=track, target=track,
        matrix={b: {b: 1} for b in track.branches},
        end_map={e: e for e in track.end_info},
        switch_map={s: s for s in track.switches},
        untouched=frozenset(track.branches),
    )


def compose(f21, f32):
    """Compose carryings: ``f21`` carries track2 by track1, ``f32`` carries
    track3 by track2; the result carries track3 by track1."""
    if f32.target != f21.source:
        raise TrackMismatch("middle track does not match")
    matrix = {}
    for b3, row32 in f32.matrix.items():
        row = {}
        for b2, v in row32.items():
            for b1, u in f21.matrix[b2].items():
                row[b1] = row.get(b1, 0) + v * u
        matrix[b3] = row
    end_map = {}
    for e3, e2 in f32.end_map.items():
        if e2 in f21.end_map:
            end_map[e3] = f21.end_map[e2]
    switch_map = {}
    for s3, s2 in f32.switch_map.items():
        if s2 in f21.switch_map:
            switch_map[s3] = f21.switch_map[s2]
    untouched = set()
    for b1 in f21.untouched:
        reps = [b2 for b2, row in f21.matrix.items() if row == {b1: 1}]
        if len(reps) == 1 and reps[0] in f32.untouched:
            untouched.add(b1)
    return CarryingMap(f32.source, f21.target, matrix, end_map, switch_map,
                       frozenset(untouched))


def persistent_ends(carrying_map):
    """Ends of the target hit by the source's end correspondence."""
    return carrying_map.persistent_ends()
