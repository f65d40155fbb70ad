"""Independent ground truth at desk scale.

Geometric intersection numbers come from realising both curves in
canonical position: within one curve, parallel strands keep their own
normal order along each edge, and strands of different curves are ordered
by walking them together until their turn sequences diverge.  Crossings
are then forced chord interleavings inside triangles.

Exact curve-graph distances use the Farey structure on the once-punctured
torus and the four-punctured sphere; on the five-punctured sphere small
distances are certified directly (equality, disjointness, or a common
disjoint neighbour from a candidate pool).
"""

from __future__ import annotations

import itertools
from functools import cmp_to_key, lru_cache
from math import gcd

from .errors import CurveDistError, RadiusExceeded, TooLarge
from .surface import (
    NormalCurve,
    TRACE_LIMIT,
    is_essential_vector,
    trace_components,
)


class TracedCurve:
    """A single component as explicit arc records, re-exported from the
    tracer for oracle use."""

    def __init__(self, tri, component):
        self.tri = tri
        self.arcs = component.arcs
        self.crossings = component.crossings

    @staticmethod
    def of(tri, coords):
        comps = trace_components(tri, coords)
        if len(comps) != 1:
            raise CurveDistError("vector is not a single curve")
        return TracedCurve(tri, comps[0])


# -- geometric intersection ------------------------------------------------------


def geometric_intersection(tri, a, b):
    """Minimal crossing number of two normal multicurves."""
    ca = a.coords if isinstance(a, NormalCurve) else tuple(a)
    cb = b.coords if isinstance(b, NormalCurve) else tuple(b)
    if sum(ca) + sum(cb) > TRACE_LIMIT:
        raise TooLarge("curves too heavy to trace")
    if ca == cb:
        return 0
    comps_a = trace_components(tri, ca)
    comps_b = trace_components(tri, cb)
    total = 0
    for x in comps_a:
        vx = x.edge_vector()
        for y in comps_b:
            vy = y.edge_vector()
            if vx == vy:
                continue
            total += _intersection_single(tri, vx, vy)
    return total


def _intersection_single(tri, ca, cb):
    A = trace_components(tri, ca)
    B = trace_components(tri, cb)
    if len(A) != 1 or len(B) != 1:
        raise CurveDistError("single components expected")
    walks = {"a": A[0], "b": B[0]}
    order = _merge_orders(tri, walks)
    crossings = 0
    for t in range(tri.num_triangles):
        chords = []
        for label, comp in walks.items():
            n = len(comp.arcs)
            for k in range(n):
                tt, c, _d = comp.arcs[k]
                if tt != t:
                    continue
                # endpoints: the crossing entering this arc (k - 1) and
                # the one leaving it (k)
                ein = comp.crossings[(k - 1) % n]
                eout = comp.crossings[k]
                p_in = order[(ein[0], label, (k - 1) % n)]
                p_out = order[(eout[0], label, k)]
                chords.append((label,
                               (ein[3], ein[0], p_in),
                               (eout[1], eout[0], p_out)))
        crossings += _chord_crossings(tri, t, chords)
    return crossings


def _merge_orders(tri, walks):
    """Per-edge positions of all crossings of both curves, merged into
    one canonical order; keys are (edge, label, crossing index)."""
    per_edge = {}
    for label, comp in walks.items():
        for k, (e, _os, gp, _j) in enumerate(comp.crossings):
            per_edge.setdefault(e, []).append((label, k, gp))
    order = {}
    for e, pts in per_edge.items():
        def compare(x, y):
            lx, kx, gx = x
            ly, ky, gy = y
            if lx == ly:
                return -1 if gx < gy else (1 if gx > gy else 0)
            return _compare_cross(tri, walks[lx], kx, walks[ly], ky)
        ordered = sorted(pts, key=cmp_to_key(compare))
        for pos, (label, k, _gp) in enumerate(ordered):
            order[(e, label, k)] = pos
    return order


def _entering_side(tri, comp, k, direction):
    """Side of the slot through which the walk enters the next triangle
    when it traverses crossing ``k`` in the given direction."""
    n = len(comp.arcs)
    if direction == +1:
        t_next = comp.arcs[(k + 1) % n][0]
        slot = comp.crossings[k][3]
    else:
        t_next = comp.arcs[k][0]
        slot = comp.crossings[k][1]
    return tri.triangles[t_next][slot][1]


def _compare_cross(tri, comp_x, kx, comp_y, ky):
    """Order two crossings of distinct curves on their common edge, in
    global (side 0) coordinates: -1 when x comes first.

    Both walks are aligned to cross the edge the same way and advanced
    together; their entering-coordinate order is invariant along shared
    steps (the in-triangle reversal cancels against the edge-gluing
    reversal) and is decided at the first divergence, where the
    start-corner turner sits lower.
    """
    nx, ny = len(comp_x.arcs), len(comp_y.arcs)
    bound = nx * ny // gcd(nx, ny) + 1
    for x_dir in (+1, -1):
        s_first = _entering_side(tri, comp_x, kx, x_dir)
        y_dir = +1 if _entering_side(tri, comp_y, ky, +1) == s_first else -1
        px, py = kx, ky
        for _step in range(bound):
            cx = _turn_code(comp_x, px, x_dir)
            cy = _turn_code(comp_y, py, y_dir)
            if cx != cy:
                lower_is_x = (cx == 0)
                if s_first == 1:
                    lower_is_x = not lower_is_x
                return -1 if lower_is_x else 1
            px = (px + x_dir) % nx
            py = (py + y_dir) % ny
    raise CurveDistError("strands of distinct curves never diverged")


def _turn_code(comp, k, direction):
    """0 when the walk, after crossing ``comp.crossings[k]`` in the given
    direction, cuts the corner at the start of the entered slot; 1 at the
    end."""
    n = len(comp.crossings)
    if direction == +1:
        entered = comp.crossings[k][3]
        out = comp.crossings[(k + 1) % n][1]
    else:
        entered = comp.crossings[k][1]
        out = comp.crossings[(k - 1) % n][3]
    if out == (entered + 1) % 3:
        return 1
    if out == (entered + 2) % 3:
        return 0
    raise CurveDistError("walk did not continue through the triangle")


def _chord_crossings(tri, t, chords):
    """Crossings of chords of different labels: endpoints interleave along
    the boundary of the triangle (slots traversed in boundary order)."""
    def boundary_coord(slot_pos, edge, merged_pos):
        _e, side = tri.triangles[t][slot_pos]
        return (slot_pos, merged_pos if side == 0 else -1 - merged_pos)

    pts = []
    for label, (sp1, e1, p1), (sp2, e2, p2) in chords:
        pts.append((label,
                    tuple(sorted((boundary_coord(sp1, e1, p1),
                                  boundary_coord(sp2, e2, p2))))))
    total = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            la, (a1, a2) = pts[i]
            lb, (b1, b2) = pts[j]
            if la == lb:
                continue
            if (a1 < b1 < a2 < b2) or (b1 < a1 < b2 < a2):
                total += 1
    return total


# -- Farey engine ------------------------------------------------------------------


def farey_distance(x, y):
    """Exact distance in the Farey graph between reduced slopes ``(p, q)``
    and ``(r, s)``; ``(1, 0)`` is infinity."""
    p, q = _reduce(x)
    r, s = _reduce(y)
    if (p, q) == (r, s):
        return 0
    if abs(p * s - q * r) == 1:
        return 1
    a, b = _bezout(p, q)
    # [[a, b], [-q, p]] has determinant 1 and sends p/q to infinity
    rr = a * r + b * s
    ss = -q * r + p * s
    return _distance_to_infinity(rr, ss)


def _reduce(frac):
    p, q = frac
    g = gcd(p, q)
    if g:
        p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def _bezout(p, q):
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def _distance_to_infinity(p, q):
    """Distance from ``p/q`` to infinity: dynamic programming over the
    strip of Farey triangles crossed by the hyperbolic geodesic.  The
    strip's vertices are the convergents and intermediate fractions of
    the continued fraction, and graph geodesics can be taken inside it.
    """
    if q == 0:
        return 0
    if q < 0:
        p, q = -p, -q
    if q == 1:
        return 1
    digits = []
    a, b = p, q
    while b:
        d = a // b
        digits.append(d)
        a, b = b, a - d * b
    if digits[-1] == 1 and len(digits) > 1:
        digits[-2] += 1
        digits.pop()
    dist_prev = 0       # c_{-1} = infinity
    dist_cur = 1        # c_0, an integer
    for ai in digits[1:]:
        d_chain = dist_prev
        dist_s = None
        for _t in range(1, ai + 1):
            dist_s = min(d_chain + 1, dist_cur + 1)
            d_chain = dist_s
        dist_prev, dist_cur = dist_cur, dist_s
    return dist_cur


# -- slope charts -------------------------------------------------------------------


class SlopeChart:
    """Identify curves on a Farey-type surface with slopes via three
    reference curves."""

    def __init__(self, tri, ref_inf, ref_zero, ref_one, unit):
        self.tri = tri
        self.ref_inf = ref_inf
        self.ref_zero = ref_zero
        self.ref_one = ref_one
        self.unit = unit

    def slope(self, curve):
        q = geometric_intersection(self.tri, curve, self.ref_inf)
        p = geometric_intersection(self.tri, curve, self.ref_zero)
        r = geometric_intersection(self.tri, curve, self.ref_one)
        u = self.unit
        if q % u or p % u or r % u:
            raise CurveDistError("intersections not multiples of the unit")
        p, q, r = p // u, q // u, r // u
        if p == 0 and q == 0:
            raise CurveDistError("curve is disjoint from two distinct slopes")
        if r == abs(p - q):
            return _reduce((p, q))
        if r == p + q:
            return _reduce((p, -q))
        raise CurveDistError("intersections do not fit a slope: %r"
                             % ((p, q, r),))

    def distance(self, a, b):
        return farey_distance(self.slope(a), self.slope(b))


def torus_chart(tri):
    from .surface import edge_link_curves
    links = {c.coords: c for c in edge_link_curves(tri)}
    return SlopeChart(tri, links[(0, 1, 1)], links[(1, 0, 1)],
                      links[(1, 1, 0)], unit=1)


def torus_slope_arith(coords):
    """Slope of a curve on the standard once-punctured-torus
    triangulation, by arithmetic alone (valid at any size): coordinates
    of the slope ``(p, q)`` are ``(|q|, |p|, |p + q|)``."""
    x0, x1, x2 = coords
    if x2 == x0 + x1:
        return _reduce((x1, x0))
    if x0 == x1 + x2 or x1 == x0 + x2 or x2 == abs(x0 - x1):
        return _reduce((x1, -x0))
    raise CurveDistError("coordinates %r are not a torus slope" % (coords,))


def sphere4_chart(tri):
    from .surface import edge_link_curves
    refs = []
    for c in edge_link_curves(tri):
        if all(geometric_intersection(tri, c, r) == 2 for r in refs):
            refs.append(c)
        if len(refs) == 3:
            break
    if len(refs) < 3:
        raise CurveDistError("no slope chart found")
    return SlopeChart(tri, refs[0], refs[1], refs[2], unit=2)


# -- exact distances ---------------------------------------------------------------


@lru_cache(maxsize=8)
def _candidate_pool(tri, max_entry=2):
    """Small essential curves on a triangulation (used as witnesses for
    distance-two certificates)."""
    out = []
    for vec in itertools.product(range(max_entry + 1),
                                 repeat=tri.num_edges):
        if sum(vec) == 0:
            continue
        if is_essential_vector(tri, vec):
            out.append(vec)
    return tuple(out)


def exact_distance(tri, a, b, surface, max_radius=3):
    """Exact curve-graph distance at desk scale.

    Farey-exact on the once-punctured torus and the four-punctured
    sphere; on the five-punctured sphere certifies 0, 1, and 2 and raises
    :class:`RadiusExceeded` beyond the certification radius.
    """
    key = (surface.genus, surface.punctures)
    if key == (1, 1):
        return torus_chart(tri).distance(a, b)
    if key == (0, 4):
        return sphere4_chart(tri).distance(a, b)
    if key != (0, 5):
        raise RadiusExceeded(
            "exact distances only on S_{1,1}, S_{0,4}, S_{0,5}")
    if a.coords == b.coords:
        return 0
    if geometric_intersection(tri, a, b) == 0:
        return 1
    for vec in _candidate_pool(tri):
        if geometric_intersection(tri, a, vec) == 0 and \
                geometric_intersection(tri, b, vec) == 0:
            return 2
    raise RadiusExceeded(
        "no certificate within radius 2; the distance may be larger")
