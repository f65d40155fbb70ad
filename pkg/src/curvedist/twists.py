"""Compiling Dehn twists into flip words.

A curve crossing every edge at most once sweeps out a cyclic corridor of
triangles; flipping the crossed edges in corridor order performs the
twist up to a relabelling that returns the triangulation to itself.  The
compiler tries the small set of natural orderings and closing
relabellings and keeps the first word that verifiably acts as the twist:
it must fix the curve and grow intersection numbers quadratically the
way a twist does.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import CurveDistError
from .oracle import geometric_intersection
from .surface import MappingClass, NormalCurve, Triangulation


def triangulation_isomorphisms(t1, t2):
    """All orientation-preserving edge bijections carrying ``t1`` to
    ``t2`` (as labelled glued complexes, triangle ids free)."""
    if t1.num_edges != t2.num_edges or t1.num_triangles != t2.num_triangles:
        return
    labels2 = [tuple(e for e, _s in tri) for tri in t2.triangles]

    def extend(tri_map, edge_map, t):
        if t == t1.num_triangles:
            # verify the slot map preserves the gluing
            for (ta, pa) in t1._slot_of.values():
                tb, pb = t1.opposite_slot(ta, pa)
                t2a, ja = tri_map[ta]
                t2b, jb = tri_map[tb]
                if t2.opposite_slot(t2a, (ja + pa) % 3) != (t2b, (jb + pb) % 3):
                    return
            yield dict(edge_map)
            return
    # (generator body continues below)
        used = {x for x, _j in tri_map.values()}
        tri = t1.triangles[t]
        for t2i in range(t2.num_triangles):
            if t2i in used:
                continue
            for j in range(3):
                em = dict(edge_map)
                ok = True
                for r in range(3):
                    e1 = tri[r][0]
                    e2 = labels2[t2i][(j + r) % 3]
                    if e1 in em and em[e1] != e2:
                        ok = False
                        break
                    em[e1] = e2
                if not ok or len(set(em.values())) != len(em):
                    continue
                tri_map[t] = (t2i, j)
                yield from extend(tri_map, em, t + 1)
                del tri_map[t]

    yield from extend({}, {}, 0)


def corridor(tri, curve):
    """The cyclic sequence of edges a once-through curve crosses."""
    from .surface import trace_components
    comps = trace_components(tri, curve.coords)
    if len(comps) != 1:
        raise CurveDistError("twists need a single curve")
    comp = comps[0]
    edges = [rec[0] for rec in comp.crossings]
    if sorted(set(edges)) != sorted(edges):
        raise CurveDistError("twist compiler needs a curve crossing each "
                             "edge at most once")
    return edges


def twist_word(tri, curve, verify_curves=None, max_flips=None):
    """A verified flip word realising a Dehn twist about ``curve``.

    Corridor orderings are tried first (they close immediately on
    surfaces like the once-punctured torus); after that a breadth-first
    search over short flip sequences finds a word that closes up to a
    relabelling and verifiably acts as the twist.  The handedness is
    whichever turns up first; the inverse word is the other twist.
    """
    edges = corridor(tri, curve)
    tests = list(verify_curves or [])
    k = len(edges)
    for ordering in (edges, list(reversed(edges))):
        for rot in range(k):
            seq = ordering[rot:] + ordering[:rot]
            for j in range(1, k + 1):
                for word in _close_word(tri, seq[:j]):
                    if _acts_like_twist(tri, word, curve, tests):
                        return word
    if max_flips is None:
        max_flips = tri.num_edges
    word = _search_twist(tri, curve, tests, max_flips)
    if word is not None:
        return word
    raise CurveDistError("could not compile a verified twist word")


def unlabeled_canonical_form(tri):
    """A canonical form of the complex under edge relabelling: relabel
    edges in breadth-first discovery order from every (triangle,
    rotation) seed and keep the least key."""
    best = None
    for t0 in range(tri.num_triangles):
        for r in range(3):
            labels = {}
            order = [(t0, r)]
            seen_t = {t0}
            key = []
            k = 0
            while order:
                t, rot = order.pop(0)
                triple = []
                for i in range(3):
                    e, _s = tri.triangles[t][(rot + i) % 3]
                    if e not in labels:
                        labels[e] = k
                        k += 1
                    triple.append(labels[e])
                key.append(tuple(triple))
                for i in range(3):
                    t2, j = tri.opposite_slot(t, (rot + i) % 3)
                    if t2 not in seen_t:
                        seen_t.add(t2)
                        order.append((t2, (j + 1) % 3))
            cand = tuple(key)
            if best is None or cand < best:
                best = cand
    return best


def _search_twist(tri, curve, tests, max_flips):
    """Breadth-first search over flip sequences for a verified twist.

    Closures are only attempted on states whose unlabelled canonical form
    matches the base, which keeps the expensive isomorphism search off
    the hot path."""
    from collections import deque

    target = unlabeled_canonical_form(tri)
    seen = {tri}
    queue = deque([(tri, ())])
    while queue:
        state, moves = queue.popleft()
        if len(moves) >= max_flips:
            continue
        for e in range(state.num_edges):
            if not state.is_flippable(e):
                continue
            nxt, _upd = state.flip(e)
            seq = moves + (e,)
            if unlabeled_canonical_form(nxt) == target:
                for word in _close_word(tri, list(seq)):
                    if _acts_like_twist(tri, word, curve, tests):
                        return word
            if nxt not in seen and len(seq) < max_flips:
                seen.add(nxt)
                queue.append((nxt, seq))
    return None


def _close_word(tri, flip_seq):
    """All mapping classes with the given flips plus one closing
    relabel."""
    state = tri
    moves = []
    for e in flip_seq:
        if not state.is_flippable(e):
            return
        state, _upd = state.flip(e)
        moves.append(("flip", e))
    if state == tri:
        yield MappingClass(tri, moves)
    seen = set()
    for iso in triangulation_isomorphisms(state, tri):
        perm = tuple(iso[e] for e in range(tri.num_edges))
        if perm in seen:
            continue
        seen.add(perm)
        try:
            yield MappingClass(tri, moves + [("relabel", perm)])
        except CurveDistError:
            continue


def finite_order_word(tri, surface, order, max_flips=4):
    """Search for a mapping class of the exact given order whose puncture
    action is a single cycle of that length (when it divides the puncture
    count).  Used to build periodic test classes that no relabel alone
    realises."""
    from collections import deque

    from .classify import is_periodic

    target = unlabeled_canonical_form(tri)
    seen = {tri}
    queue = deque([(tri, ())])
    while queue:
        state, moves = queue.popleft()
        for e in range(state.num_edges):
            if not state.is_flippable(e):
                continue
            nxt, _upd = state.flip(e)
            seq = moves + (e,)
            if unlabeled_canonical_form(nxt) == target:
                for word in _close_word(tri, list(seq)):
                    perm = word.puncture_permutation()
                    if _cycle_type(perm) != (order,) and \
                            order % len(_cycle_type(perm)) == 0:
                        pass
                    if is_periodic(tri, word, surface) == order:
                        return word
            if nxt not in seen and len(seq) < max_flips:
                seen.add(nxt)
                queue.append((nxt, seq))
    raise CurveDistError("no periodic word of order %d within %d flips"
                         % (order, max_flips))


def _cycle_type(perm):
    seen = set()
    lengths = []
    for x in perm:
        if x in seen:
            continue
        n = 0
        y = x
        while y not in seen:
            seen.add(y)
            y = perm[y]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def _acts_like_twist(tri, word, curve, tests):
    if word.apply_coords(curve.coords) != curve.coords:
        return False
    for x in tests:
        ix_c = geometric_intersection(tri, x, curve)
        if ix_c == 0:
            if word.apply_coords(x.coords) != x.coords:
                return False
            continue
        y1 = word.apply(x)
        y2 = word.apply(y1)
        if geometric_intersection(tri, y1, curve) != ix_c:
            return False
        # twist growth: i(T^2 x, x) = 2 i(x,c)^2 and i(T x, x) <= i(x,c)^2
        if geometric_intersection(tri, y2, x) != 2 * ix_c * ix_c:
            return False
        if geometric_intersection(tri, y1, x) > ix_c * ix_c:
            return False
    return True
