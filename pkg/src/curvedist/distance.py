"""From curves to carried train tracks, and the three coarse distance
estimators.

The estimate for a carried curve walks a chain of nested one-switch
tracks -- alternating the deep-nesting reduction with norm-dropping AHT
runs -- and then extracts the subsequence of indices whose fundamental
measures still fill a large subtrack of the earlier track.  Half the
subsequence length is the returned estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import ConstantsProfile, constants
from .errors import (
    ClosedSurfaceUnsupported,
    CurveDistError,
    Disconnected,
    GenusTooSmall,
    Inessential,
    InvalidCurve,
)
from .nesting import deep_nesting, one_switch
from .surface import (
    NormalCurve,
    Surface,
    bitlen,
    corner_coord,
    shorten_curve,
    validate_triangulation,
)
from .traintrack import (
    FORWARD,
    Measure,
    PreMeasure,
    TrackSurgery,
    TrainTrack,
    compose,
    fundamental_measures,
    is_large,
    support_subtrack,
)
from .aht import aht_sequence


# -- curve -> track ------------------------------------------------------------


@dataclass
class CurveTrack:
    """A train track carrying a normal curve, with the bookkeeping needed
    to push weights back onto triangulation edges."""
    track: TrainTrack
    measure: Measure
    tri: object
    corner_weights: dict          # (triangle, corner) -> arc count
    matrix: dict                  # final branch -> {corner branch id: mult}
    corner_branch_ids: dict       # (triangle, corner) -> original branch id

    def edge_vector(self):
        """Push the measure back onto the edges; reproduces the input
        curve's coordinates exactly."""
        recovered = {b: 0 for b in self.corner_branch_ids.values()}
        for z, w in self.measure.weights.items():
            for b, mult in self.matrix[z].items():
                recovered[b] += w * mult
        out = [0] * self.tri.num_edges
        for e in range(self.tri.num_edges):
            ta, ia = self.tri.slot(e, 0)
            total = 0
            for c in (ia, (ia + 1) % 3):
                b = self.corner_branch_ids.get((ta, c))
                if b is not None:
                    total += recovered[b]
            out[e] = total
        return tuple(out)


def track_from_curve(tri, curve, surface=None):
    """The canonical measured train track carrying ``curve``: one branch
    per positive triangle corner, one switch per crossed edge, degree-two
    switches smoothed away."""
    if isinstance(curve, NormalCurve):
        coords = curve.coords
        if curve.connectivity == "unchecked":
            raise Inessential("curve connectivity is unverified")
    else:
        coords = tuple(curve)
        from .surface import TRACE_LIMIT, trace_components
        if sum(coords) <= TRACE_LIMIT and sum(coords) > 0:
            comps = trace_components(tri, coords)
            if len(comps) != 1:
                raise Disconnected("vector has %d components" % len(comps))
            if comps[0].is_vertex_link():
                raise Inessential("curve is a puncture link")
    if surface is not None and not surface.is_punctured:
        raise ClosedSurfaceUnsupported(
            "carrying tracks for closed surfaces need the one-step "
            "normalisation first; the full closed pipeline is out of scope")
    if sum(coords) == 0:
        raise InvalidCurve("empty curve")

    corner_w = {}
    for t in range(tri.num_triangles):
        for c in range(3):
            w = corner_coord(tri, coords, t, c)
            if w:
                corner_w[(t, c)] = w
    branch_id = {tc: 3 * tc[0] + tc[1] for tc in corner_w}
    # ends: end0 of a corner branch sits on the slot before the corner,
    # end1 on the slot after; wall 0 faces the triangle's centre cell,
    # wall 1 the corner cell
    branches = {}
    attach = {}     # (edge, side) -> list of (sortkey, end)
    for (t, c), b in branch_id.items():
        e0, e1 = 2 * b, 2 * b + 1
        branches[b] = (e0, e1)
        for which, slot_pos in ((0, (c - 1) % 3), (1, c)):
            e_id, side = tri.triangles[t][slot_pos]
            end = branches[b][which]
            # storage order is top-to-bottom; on side 0 the slot runs top
            # to bottom, on side 1 bottom to top
            corner_at_start = (slot_pos == c)
            if side == 0:
                key = 0 if corner_at_start else 1
            else:
                key = 1 if corner_at_start else 0
            attach.setdefault((e_id, side), []).append((key, end))

    switches = {}
    for e in range(tri.num_edges):
        side0 = sorted(attach.get((e, 0), []))
        side1 = sorted(attach.get((e, 1), []))
        if not side0 and not side1:
            continue
        if not side0 or not side1:
            raise InvalidCurve("crossing counts disagree across edge %d" % e)
        switches[e] = (tuple(x for _k, x in side0), tuple(x for _k, x in side1))

    wall_region, region_meta = _curve_track_regions(
        tri, coords, corner_w, branch_id, switches, branches)

    track0 = TrainTrack(switches, branches, wall_region, region_meta,
                        check=False)
    measure0 = {b: corner_w[tc] for tc, b in branch_id.items()}
    surgery = TrackSurgery(track0, measure0)
    surgery.smooth()
    track = surgery.finish()
    measure = Measure(track, surgery.measure)
    result = CurveTrack(
        track=track, measure=measure, tri=tri,
        corner_weights=corner_w,
        matrix={b: dict(row) for b, row in surgery.matrix.items()},
        corner_branch_ids=branch_id,
    )
    assert result.edge_vector() == tuple(coords)
    return result


def _curve_track_regions(tri, coords, corner_w, branch_id, switches, branches):
    """Complementary regions of the curve's track by flooding the
    per-triangle cells (three corner cells and a centre) across the
    edges."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    cells = []
    for t in range(tri.num_triangles):
        for c in range(3):
            cells.append((t, c))
        cells.append((t, "mid"))
    for cell in cells:
        parent[cell] = cell
    for t in range(tri.num_triangles):
        for c in range(3):
            if (t, c) not in corner_w:
                union((t, "mid"), (t, c))
    # a centre with its branchless corner wedges is a single disc piece
    pieces = list({find(cell) for cell in cells})

    contacts = []
    for e in range(tri.num_edges):
        ta, ia = tri.slot(e, 0)
        tb, ib = tri.slot(e, 1)
        if coords[e] == 0:
            contacts.append(((ta, "mid"), (tb, "mid")))
        else:
            # the corner cells at each endpoint of the edge meet across it
            contacts.append(((ta, ia), (tb, (ib + 1) % 3)))
            contacts.append(((ta, (ia + 1) % 3), (tb, ib)))
    for x, y in contacts:
        union(x, y)

    reps = sorted({find(cell) for cell in cells}, key=str)
    rid = {rep: i for i, rep in enumerate(reps)}

    wall_region = {}
    for (t, c), b in branch_id.items():
        wall_region[(b, 0)] = rid[find((t, "mid"))]
        wall_region[(b, 1)] = rid[find((t, c))]

    # punctures: each vertex lies in the merged corner cell at any of its
    # corners
    punctures = {i: 0 for i in rid.values()}
    for v in range(tri.num_vertices):
        regions_seen = set()
        for (t, c) in tri.corner_walk(v):
            regions_seen.add(rid[find((t, c))])
        if len(regions_seen) != 1:
            raise CurveDistError("vertex cells landed in several regions")
        punctures[regions_seen.pop()] += 1

    # disc pieces minus contact arcs is the Euler characteristic of the
    # punctured region; filling the punctures back in gives the genus
    chi_p = {i: 0 for i in rid.values()}
    for piece in pieces:
        chi_p[rid[find(piece)]] += 1
    for x, _y in contacts:
        chi_p[rid[find(x)]] -= 1
    probe = TrainTrack(switches, branches,
                       wall_region, {i: (0, 0) for i in rid.values()},
                       check=False)
    ncycles = {i: 0 for i in rid.values()}
    for _cyc, r in probe.cycle_regions():
        ncycles[r] += 1
    region_meta = {}
    for i in rid.values():
        g2 = 2 - ncycles[i] - chi_p[i] - punctures[i]
        if g2 < 0 or g2 % 2:
            raise CurveDistError("inconsistent region genus bookkeeping")
        region_meta[i] = (g2 // 2, punctures[i])
    return wall_region, region_meta


# -- closed-surface one-step normalisation ------------------------------------


def closed_curve_normalize(tri, coords, edge):
    """Remove monogon/bigon faces of the pre-track of a curve on a
    one-vertex triangulation by a single arithmetic step.

    Precondition (not checkable here): the curve is in minimal position
    with ``edge``.  Needs genus at least 2.
    """
    genus, verts = tri.inferred_surface()
    if verts != 1:
        raise ClosedSurfaceUnsupported("needs a one-vertex triangulation")
    if genus < 2:
        raise GenusTooSmall("the arc isotopy step needs genus >= 2")
    arc_types = tri.corner_walk(0 if verts == 1 else None)
    n = len(arc_types)
    x = [corner_coord(tri, coords, t, c) for (t, c) in arc_types]
    zeros = [i for i, v in enumerate(x) if v == 0]
    if len(zeros) >= 3:
        return tuple(coords), 0
    if len(zeros) <= 1:
        raise InvalidCurve(
            "pre-track has a monogon: the curve was not in minimal "
            "position with the chosen edge" if len(zeros) == 1 else
            "pre-track has no vertex-adjacent gap; not in minimal position")
    r = _bigon_direction(tri, arc_types, x, zeros)
    t_count = min(
        [x[i] for i in range(n) if r[i] == -1]
        + [x[i] // 2 for i in range(n) if r[i] == -2])
    new_x = [x[i] + t_count * r[i] for i in range(n)]
    return _corner_to_edge(tri, arc_types, new_x), t_count


def bigon_step(tri, coords):
    """One application of the arc isotopy across the vertex (the oracle
    for the single-step formula)."""
    genus, verts = tri.inferred_surface()
    arc_types = tri.corner_walk(0)
    n = len(arc_types)
    x = [corner_coord(tri, coords, t, c) for (t, c) in arc_types]
    zeros = [i for i, v in enumerate(x) if v == 0]
    if len(zeros) != 2:
        raise InvalidCurve("not a bigon configuration")
    r = _bigon_direction(tri, arc_types, x, zeros)
    new_x = [x[i] + r[i] for i in range(n)]
    if any(v < 0 for v in new_x):
        raise InvalidCurve("arc isotopy went negative")
    return _corner_to_edge(tri, arc_types, new_x)


def _bigon_direction(tri, arc_types, x, zeros):
    """The per-type increments of one arc isotopy across the vertex, for
    a configuration with exactly two zero arc types."""
    n = len(arc_types)
    z1, z2 = zeros
    # rotate the numbering so type 1 (index 0) is a zero and the other
    # zero sits at index j - 1 <= n/2
    for first, second in ((z1, z2), (z2, z1)):
        j = (second - first) % n + 1
        if 2 <= j <= n // 2 + 1:
            shift = first
            break
    else:
        raise InvalidCurve("zero arc types in degenerate position")

    def glob(idx1):
        # 1-indexed type -> index into arc_types
        return (shift + idx1 - 1) % n

    pos_of = {arc_types[glob(i)]: i for i in range(1, n + 1)}
    t1, c1 = arc_types[glob(1)]
    h = pos_of[(t1, (c1 + 1) % 3)]
    k = pos_of[(t1, (c1 + 2) % 3)]
    tj, cj = arc_types[glob(j)]
    l = pos_of[(tj, (cj + 1) % 3)]
    m = pos_of[(tj, (cj + 2) % 3)]
    r = [0] * n
    for i in range(1, n + 1):
        val = 0
        if 2 <= i <= j - 1:
            val += 1
        if i in (k, l):
            val += 1
        if j + 1 <= i <= n:
            val -= 1
        if i in (h, m):
            val -= 1
        r[glob(i)] = val
    return r


def _corner_to_edge(tri, arc_types, x):
    by_corner = {arc_types[i]: x[i] for i in range(len(arc_types))}
    out = [0] * tri.num_edges
    for e in range(tri.num_edges):
        ta, ia = tri.slot(e, 0)
        tb, ib = tri.slot(e, 1)
        a_side = by_corner[(ta, ia)] + by_corner[(ta, (ia + 1) % 3)]
        b_side = by_corner[(tb, ib)] + by_corner[(tb, (ib + 1) % 3)]
        if a_side != b_side:
            raise InvalidCurve("corner counts disagree across an edge")
        out[e] = a_side
    return tuple(out)


# -- the carried-curve distance estimate ---------------------------------------


@dataclass
class DistanceEstimate:
    d: int
    m: int
    profile: ConstantsProfile
    certificate: object = None
    trace: dict = field(default_factory=dict)


def fills_large_subtrack(carrying, premeasure):
    """Does the pushforward of ``premeasure`` fill a large subtrack of the
    carrying's target?"""
    pushed = carrying.push(premeasure)
    sub, _inc = support_subtrack(carrying.target, pushed)
    return is_large(sub)


def distance_carried(track, measure, surface, profile=None,
                     want_certificate=False):
    """Estimate the curve-graph distance between the fundamental curves of
    ``track`` and the connected curve carried by ``measure``."""
    if profile is None:
        profile = constants(surface)
    xi = surface.xi
    trace = {"norm0": measure.norm}

    chain_tracks = []
    maps_to_input = []      # composite carrying of chain track k by input
    links = []              # links[i]: carrying of tau_{i+1} by tau_i
    norms = []
    n = indices = m = None

    if track.is_curve:
        trace["early_exit"] = "input is already a curve"
        chain_tracks.append((track, measure))
        maps_to_input.append(None)
        n, indices, m = 0, [0], 0
    else:
        osr = one_switch(track, measure, xi=xi)
        trace["one_switch_steps"] = osr.step_count
        chain_tracks.append((osr.track, osr.measure))
        maps_to_input.append(osr.carrying)
        norms.append(osr.measure.norm)
        if osr.track.is_curve or not is_large(osr.track):
            trace["early_exit"] = "one-switch track not large"
            n, indices, m = 0, [0], 0

    if n is None:
        # build the chain of large one-switch tracks; every full link
        # (deep nesting + AHT until the norm drops) loses at least a bit
        while True:
            cur_track, cur_measure = chain_tracks[-1]
            dn = deep_nesting(cur_track, cur_measure, xi=xi)
            if dn.track.is_curve or not is_large(dn.track):
                trace["bar"] = "deep-nesting output not large"
                break
            target = dn.measure.norm - 1
            last = None
            for state in aht_sequence(dn.track, dn.measure,
                                      min(dn.track.switches), FORWARD,
                                      stop=lambda st, t=target: st.norm <= t):
                last = state
            assert last is not None
            link = compose(dn.carrying, last.carrying_total)
            if last.track.is_curve or not is_large(last.track):
                trace["bar"] = "post-AHT track not large"
                break
            assert last.measure.norm <= norms[-1] - 1, \
                "links must drop the norm"
            links.append(link)
            maps_to_input.append(compose(maps_to_input[-1], link))
            chain_tracks.append((last.track, last.measure))
            norms.append(last.measure.norm)
            assert len(chain_tracks) - 1 <= measure.norm

        n = len(chain_tracks) - 1
        indices, m = _subsequence(chain_tracks, links, n)

    trace["n"] = n
    trace["norms"] = norms
    trace["indices"] = indices
    trace["link_budget"] = (profile.D, profile.D + 2)
    d = m // 2
    est = DistanceEstimate(d, m, profile, trace=trace)
    if want_certificate:
        est.certificate = _certificate_points(
            track, measure, chain_tracks, maps_to_input, indices)
    return est


def _subsequence(chain_tracks, links, n):
    """Indices 0 = i_0 < i_1 < ... where every fundamental measure of the
    later track fills a large subtrack of the earlier one."""
    fund_cache = {}

    def fund(k):
        if k not in fund_cache:
            fund_cache[k] = fundamental_measures(chain_tracks[k][0])
        return fund_cache[k]

    indices = [0]
    while True:
        ij = indices[-1]
        if ij == n:
            return indices, len(indices) - 1
        found = None
        psi = None
        for k in range(ij + 1, n + 1):
            psi = links[k - 1] if psi is None else compose(psi, links[k - 1])
            if all(fills_large_subtrack(psi, nu) for nu in fund(k)):
                found = k
                break
        if found is None:
            indices.append(n)
            return indices, len(indices) - 1
        indices.append(found)


def _certificate_points(track, measure, chain_tracks, maps_to_input, indices):
    """The quasi-geodesic certificate: a fundamental curve of the input,
    one fundamental curve of each subsequence track pushed onto the
    input, and the carried curve itself (m + 3 points)."""
    points = [fundamental_measures(track)[0].vector()]
    for k in indices:
        nu = fundamental_measures(chain_tracks[k][0])[0]
        if maps_to_input[k] is None:
            points.append(nu.vector())
        else:
            points.append(maps_to_input[k].push(nu).vector())
    points.append(measure.as_premeasure().vector())
    return points


# -- distances between curves ---------------------------------------------------


def intersection_distance_bound(i):
    """Coarse curve-graph distance bound from an intersection number."""
    if i < 0:
        raise CurveDistError("intersection numbers are nonnegative")
    if i == 0:
        return 1
    return 2 * bitlen(i) + 2


def distance_short(tri, a, b, surface, profile=None, want_certificate=False):
    """Distance estimate when ``a`` is short: run the carried-curve
    estimator on the canonical track of ``b``."""
    if profile is None:
        profile = constants(surface)
    if not surface.is_punctured:
        raise ClosedSurfaceUnsupported("pipeline needs a punctured surface")
    ct = track_from_curve(tri, b, surface)
    est = distance_carried(ct.track, ct.measure, surface, profile,
                           want_certificate=want_certificate)
    # additive slack from the short curve a: (6*logsum(a) + 6) / log2(xi),
    # reading the denominator as 1 when xi = 1
    denom = max(1, bitlen(surface.xi) - 1)
    slack = (6 * a.logsum + 6 + denom - 1) // denom + profile.L0_plus + 2
    est.trace["short_curve_slack"] = slack
    est.trace["a_logsum"] = a.logsum
    return est


def distance(tri, a, b, surface, profile=None, want_certificate=False):
    """General coarse distance: shorten ``a`` by flips, transport ``b``,
    then run the short-curve estimator."""
    if profile is None:
        profile = constants(surface)
    path, tri2, a2 = shorten_curve(tri, a, xi=surface.xi)
    coords_b = b.coords
    state = tri
    for e in path:
        state, upd = state.flip(e)
        coords_b = upd(coords_b)
    assert state == tri2
    b2 = b._replace(tri2, coords_b)
    est = distance_short(tri2, a2, b2, surface, profile,
                         want_certificate=want_certificate)
    est.trace["shortening_flips"] = len(path)
    est.trace["L_plus"] = profile.L_plus
    est.trace["L_times"] = profile.L_times
    return est
