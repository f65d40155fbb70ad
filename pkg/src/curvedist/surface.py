"""Punctured surfaces, ideal triangulations, normal curves and mapping classes.

A triangulation is stored as a list of triangles, each a cyclic triple of
slots ``(edge, side)``.  Slot ``i`` of a triangle is the oriented boundary
edge running from corner ``i`` to corner ``i + 1`` (corners numbered mod 3,
counterclockwise).  The two slots carrying an edge are glued reversing
orientation, which is what makes the glued complex oriented.

Normal curves are plain integer vectors indexed by edge.  The vector is a
complete isotopy invariant on an ideal triangulation, so curve equality is
coordinate equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CurveDistError,
    Disconnected,
    EulerMismatch,
    Inessential,
    InvalidCurve,
    InvalidRelabel,
    NotFlippable,
    PunctureCountMismatch,
    ShorteningStalled,
    SurfaceTooSmall,
    TooLarge,
)


def bitlen(n):
    """Number of bits of ``n``, i.e. ``ceil(log2(n + 1))`` for ``n >= 0``."""
    return int(n).bit_length()


class Surface:
    """An orientable surface of finite type, ``S_{g,p}``."""

    def __init__(self, genus, punctures):
        if genus < 0 or punctures < 0:
            raise SurfaceTooSmall("genus and puncture count must be nonnegative")
        self.genus = int(genus)
        self.punctures = int(punctures)
        if self.xi < 1:
            raise SurfaceTooSmall(
                "surface complexity 3g-3+p = %d is below 1" % self.xi)

    @property
    def chi(self):
        return 2 - 2 * self.genus - self.punctures

    @property
    def xi(self):
        return 3 * self.genus - 3 + self.punctures

    @property
    def is_punctured(self):
        return self.punctures >= 1

    def __eq__(self, other):
        return (isinstance(other, Surface)
                and (self.genus, self.punctures) == (other.genus, other.punctures))

    def __hash__(self):
        return hash((self.genus, self.punctures))

    def __repr__(self):
        return "Surface(genus=%d, punctures=%d)" % (self.genus, self.punctures)


class Triangulation:
    """A triangulated surface with every vertex a puncture (or, for closed
    surfaces, the single marked vertex).

    ``triangles`` is a tuple of 3-tuples of slots ``(edge, side)``.  Each
    ``(edge, side)`` pair occurs exactly once overall and every edge occurs
    with both sides.
    """

    def __init__(self, triangles):
        tris = tuple(tuple((int(e), int(s)) for e, s in tri) for tri in triangles)
        if any(len(tri) != 3 for tri in tris):
            raise EulerMismatch("triangles must have exactly three slots")
        raw = [slot for tri in tris for slot in tri]
        if len(set(raw)) != len(raw):
            raise EulerMismatch("duplicate (edge, side) slot in input")
        self.triangles = self._canonicalize(tris)
        tris = self.triangles
        seen = {}
        for t, tri in enumerate(tris):
            for i, (e, s) in enumerate(tri):
                if s not in (0, 1):
                    raise EulerMismatch("edge side must be 0 or 1")
                if (e, s) in seen:
                    raise EulerMismatch("slot (%d,%d) used twice" % (e, s))
                seen[(e, s)] = (t, i)
        edges = sorted({e for e, _ in seen})
        if edges != list(range(len(edges))):
            raise EulerMismatch("edge ids must be 0..n-1 without gaps")
        for e in edges:
            if (e, 0) not in seen or (e, 1) not in seen:
                raise EulerMismatch("edge %d does not have both sides glued" % e)
        self.num_edges = len(edges)
        self._slot_of = seen          # (edge, side) -> (tri, pos)
        self._corner_vertex = self._trace_vertices()

    @staticmethod
    def _canonicalize(tris):
        """Rotate each triangle to its minimal edge-label rotation and
        re-assign side labels deterministically.  Cyclic rotation and the
        0/1 naming of an edge's two slots carry no meaning, so this makes
        tuple equality agree with equality of labelled glued complexes
        (with triangle ids fixed)."""
        rotated = []
        for tri in tris:
            labels = tuple(e for e, _s in tri)
            r = min(range(3), key=lambda k: labels[k:] + labels[:k])
            rotated.append(tuple(tri[(r + i) % 3] for i in range(3)))
        # occurrences of each edge in (triangle, position) order
        occ = {}
        for t, tri in enumerate(rotated):
            for p, (e, _s) in enumerate(tri):
                occ.setdefault(e, []).append((t, p))
        out = []
        for t, tri in enumerate(rotated):
            new = []
            for p, (e, _s) in enumerate(tri):
                slots = occ[e]
                if len(slots) != 2:
                    raise EulerMismatch(
                        "edge %d appears in %d slots" % (e, len(slots)))
                new.append((e, 0 if (t, p) == min(slots) else 1))
            out.append(tuple(new))
        return tuple(out)

    # -- basic queries -------------------------------------------------

    @property
    def num_triangles(self):
        return len(self.triangles)

    def slot(self, edge, side):
        return self._slot_of[(edge, side)]

    def edge_at(self, tri, pos):
        return self.triangles[tri][pos]

    def opposite_slot(self, tri, pos):
        e, s = self.triangles[tri][pos]
        return self.slot(e, 1 - s)

    def vertex_of_corner(self, tri, pos):
        """Corner ``pos`` of a triangle sits between slots ``pos - 1`` and
        ``pos``; this returns the id of the vertex (puncture) there."""
        return self._corner_vertex[(tri, pos)]

    @property
    def num_vertices(self):
        return len(set(self._corner_vertex.values()))

    def _trace_vertices(self):
        # Rotating counterclockwise around a vertex from corner (t, i)
        # crosses slot (t, i) and lands on corner (t', j + 1) where
        # (t', j) is the glued mate of slot (t, i).
        nxt = {}
        for t, tri in enumerate(self.triangles):
            for i in range(3):
                t2, j = self.opposite_slot(t, i)
                nxt[(t, i)] = (t2, (j + 1) % 3)
        vertex = {}
        vid = 0
        for start in sorted(nxt):
            if start in vertex:
                continue
            c = start
            while c not in vertex:
                vertex[c] = vid
                c = nxt[c]
            vid += 1
        return vertex

    def corner_walk(self, vertex):
        """The corners around ``vertex`` in counterclockwise cyclic order."""
        start = min(c for c, v in self._corner_vertex.items() if v == vertex)
        out = [start]
        t, i = start
        while True:
            t2, j = self.opposite_slot(t, i)
            t, i = t2, (j + 1) % 3
            if (t, i) == start:
                break
            out.append((t, i))
        return out

    def edge_ends_around(self, vertex):
        """Cyclic list of edge-ends crossed when walking around ``vertex``;
        the end crossed after corner ``(t, i)`` is slot ``(t, i)``."""
        return [self.triangles[t][i] for (t, i) in self.corner_walk(vertex)]

    def is_connected(self):
        if not self.triangles:
            return False
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for i in range(3):
                t2, _ = self.opposite_slot(t, i)
                if t2 not in seen:
                    seen.add(t2)
                    stack.append(t2)
        return len(seen) == self.num_triangles

    def inferred_surface(self):
        """The (genus, punctures) this complex actually triangulates,
        treating every vertex as a puncture."""
        v = self.num_vertices
        chi_closed = v - self.num_edges + self.num_triangles
        if chi_closed % 2:
            raise EulerMismatch("complex is not orientable-closed consistent")
        genus = (2 - chi_closed) // 2
        return genus, v

    def canonical_key(self):
        """The labelled glued complex, independent of triangle numbering
        and side naming: the sorted multiset of minimal-rotation edge
        triples.  (An edge's two occurrences determine the gluing, so no
        extra data is needed.)"""
        triples = []
        for tri in self.triangles:
            labels = tuple(e for e, _s in tri)
            r = min(range(3), key=lambda k: labels[k:] + labels[:k])
            triples.append(labels[r:] + labels[:r])
        return tuple(sorted(triples))

    def __eq__(self, other):
        return (isinstance(other, Triangulation)
                and self.canonical_key() == other.canonical_key())

    def __hash__(self):
        return hash(self.canonical_key())

    def align_triangles(self, base):
        """A triangle correspondence ``{t: (t_base, rotation)}`` between
        equal complexes, preserving edge labels and the gluing."""
        labels_base = [tuple(e for e, _s in tri) for tri in base.triangles]

        def extend(mapping, t):
            if t == len(self.triangles):
                for (ta, pa) in self._slot_of.values():
                    tb, pb = self.opposite_slot(ta, pa)
                    t2a, ja = mapping[ta]
                    t2b, jb = mapping[tb]
                    if base.opposite_slot(t2a, (ja + pa) % 3) != \
                            (t2b, (jb + pb) % 3):
                        return None
                return dict(mapping)
            lbl = tuple(e for e, _s in self.triangles[t])
            used = {x for x, _j in mapping.values()}
            for t2 in range(len(labels_base)):
                if t2 in used:
                    continue
                for j in range(3):
                    if tuple(labels_base[t2][(j + i) % 3]
                             for i in range(3)) == lbl:
                        mapping[t] = (t2, j)
                        res = extend(mapping, t + 1)
                        if res is not None:
                            return res
                        del mapping[t]
            return None

        res = extend({}, 0)
        if res is None:
            raise EulerMismatch("triangulations are not the same complex")
        return res

    def __repr__(self):
        return "Triangulation(%d triangles, %d edges)" % (
            self.num_triangles, self.num_edges)

    # -- flips ----------------------------------------------------------

    def is_flippable(self, edge):
        (ta, _), (tb, _) = self.slot(edge, 0), self.slot(edge, 1)
        return ta != tb

    def flip(self, edge):
        """Flip the diagonal ``edge``.

        Returns ``(new_triangulation, update)`` where ``update`` maps an
        edge-coordinate tuple to the flipped one.  The flipped diagonal
        keeps its label, so flipping twice is the identity.
        """
        ta, ia = self.slot(edge, 0)
        tb, ib = self.slot(edge, 1)
        if ta == tb:
            raise NotFlippable("edge %d is self-glued" % edge)
        # Quadrilateral P Q R S (ccw) with old diagonal QS = edge.
        # In ta the diagonal runs Q -> S, in tb it runs S -> Q.
        pq = self.triangles[ta][(ia + 2) % 3]
        sp = self.triangles[ta][(ia + 1) % 3]
        qr = self.triangles[tb][(ib + 1) % 3]
        rs = self.triangles[tb][(ib + 2) % 3]
        tris = list(self.triangles)
        tris[ta] = (pq, qr, (edge, 0))
        tris[tb] = (rs, sp, (edge, 1))
        new_tri = Triangulation(tris)

        a, b, c, d = pq[0], qr[0], rs[0], sp[0]

        def update(coords):
            coords = list(coords)
            coords[edge] = max(coords[a] + coords[c], coords[b] + coords[d]) - coords[edge]
            return tuple(coords)

        return new_tri, update

    # -- relabelling -----------------------------------------------------

    def relabel_map(self, perm):
        """Check that the edge permutation ``perm`` (a dict or sequence)
        extends to an (orientation-preserving) automorphism of this
        triangulation and return the induced triangle map
        ``{tri: (tri', rotation)}``.

        Raises :class:`InvalidRelabel` otherwise.
        """
        if not isinstance(perm, dict):
            perm = {i: p for i, p in enumerate(perm)}
        if sorted(perm) != list(range(self.num_edges)) or \
                sorted(perm.values()) != list(range(self.num_edges)):
            raise InvalidRelabel("not a permutation of the edges")
        labels = [tuple(e for e, _s in tri) for tri in self.triangles]
        cands = []
        for t, tri in enumerate(self.triangles):
            want = tuple(perm[e] for e, _s in tri)
            opts = [(t2, j) for t2 in range(len(labels)) for j in range(3)
                    if tuple(labels[t2][(j + i) % 3] for i in range(3)) == want]
            if not opts:
                raise InvalidRelabel(
                    "permutation is not a triangulation automorphism")
            cands.append(opts)
        assignment = self._match_relabel(cands, {}, 0)
        if assignment is None:
            raise InvalidRelabel("permutation is not a triangulation automorphism")
        return assignment

    def _match_relabel(self, cands, chosen, t):
        # Backtracking over triangle images; the slot map
        # (t, p) -> (t2, (j + p) % 3) must send glued slot pairs to glued
        # slot pairs.
        if t == len(self.triangles):
            for (ta, pa) in self._slot_of.values():
                tb, pb = self.opposite_slot(ta, pa)
                t2a, ja = chosen[ta]
                t2b, jb = chosen[tb]
                if self.opposite_slot(t2a, (ja + pa) % 3) != (t2b, (jb + pb) % 3):
                    return None
            return dict(chosen)
        used = {t2 for t2, _j in chosen.values()}
        for (t2, j) in cands[t]:
            if t2 in used:
                continue
            chosen[t] = (t2, j)
            res = self._match_relabel(cands, chosen, t + 1)
            if res is not None:
                return res
            del chosen[t]
        return None

    def apply_relabel(self, perm):
        """Coordinates transported by the relabel: new[perm[e]] = old[e]."""
        if not isinstance(perm, dict):
            perm = {i: p for i, p in enumerate(perm)}

        def update(coords):
            out = [0] * self.num_edges
            for e, x in enumerate(coords):
                out[perm[e]] = x
            return tuple(out)

        return update

    def rename_edges(self, perm):
        """Rename edges by the permutation; returns the renamed
        triangulation and the corner correspondence (old corner ->
        new corner, accounting for canonical re-rotation)."""
        if not isinstance(perm, dict):
            perm = {i: p for i, p in enumerate(perm)}
        raw = [tuple((perm[e], s) for (e, s) in tri) for tri in self.triangles]
        new = Triangulation(raw)
        corner_map = {}
        for t, rawtri in enumerate(raw):
            raw_labels = tuple(e for e, _s in rawtri)
            new_labels = tuple(e for e, _s in new.triangles[t])
            for r in range(3):
                if tuple(raw_labels[(r + j) % 3] for j in range(3)) == new_labels:
                    break
            else:
                raise InvalidRelabel("renaming lost a triangle")
            for i in range(3):
                corner_map[(t, i)] = (t, (i - r) % 3)
        return new, corner_map


def validate_triangulation(tri, surface):
    """Check ``tri`` against the declared ``surface``; raise the first
    violated invariant."""
    if surface.is_punctured:
        # ideal triangulation: T = -2*chi, E = -3*chi
        expected_t, expected_e = -2 * surface.chi, -3 * surface.chi
    else:
        # one-vertex triangulation of a closed surface
        expected_t, expected_e = 4 * surface.genus - 2, 6 * surface.genus - 3
    if tri.num_triangles != expected_t or tri.num_edges != expected_e:
        raise EulerMismatch(
            "expected %d triangles / %d edges for %r, found %d / %d"
            % (expected_t, expected_e, surface,
               tri.num_triangles, tri.num_edges))
    if not tri.is_connected():
        raise Disconnected("triangulation is not connected")
    genus, verts = tri.inferred_surface()
    if surface.is_punctured:
        if verts != surface.punctures:
            raise PunctureCountMismatch(
                "complex has %d vertex links, surface declares %d punctures"
                % (verts, surface.punctures))
    else:
        if verts != 1:
            raise PunctureCountMismatch(
                "closed surfaces need a one-vertex triangulation, found %d" % verts)
    if genus != surface.genus:
        raise EulerMismatch(
            "complex has genus %d, surface declares %d" % (genus, surface.genus))


# -- standard triangulations --------------------------------------------

def from_vertex_triangles(triples):
    """Build a triangulation from oriented triangles given as vertex
    triples.  Edges are keyed by unordered vertex pairs, so no two edges
    may share both endpoints."""
    edge_ids = {}
    slots = []
    for (u, v, w) in triples:
        tri = []
        for a, b in ((u, v), (v, w), (w, u)):
            key = frozenset((a, b))
            if len(key) != 2:
                raise EulerMismatch("degenerate triangle side")
            if key not in edge_ids:
                edge_ids[key] = len(edge_ids)
                side = 0
            else:
                side = 1
            tri.append((edge_ids[key], side))
        slots.append(tuple(tri))
    return Triangulation(slots)


def punctured_torus():
    """The two-triangle ideal triangulation of S_{1,1}."""
    return Triangulation([
        [(0, 0), (1, 0), (2, 0)],
        [(0, 1), (1, 1), (2, 1)],
    ])


def punctured_sphere(p):
    """A triangulation of S_{0,p}: the tetrahedron for p = 4, a bipyramid
    (equator 0..p-3, poles at the last two labels) for p >= 5."""
    if p < 4:
        raise SurfaceTooSmall("need at least 4 punctures on the sphere")
    if p == 4:
        return from_vertex_triangles([(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])
    n = p - 2
    top, bottom = n, n + 1
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append((i, j, top))
        tris.append((j, i, bottom))
    return from_vertex_triangles(tris)


def closed_genus2():
    """A one-vertex triangulation of the closed genus-2 surface, from the
    fanned octagon with side pairing a b a' b' c d c' d'."""
    # Edge ids: a=0, b=1, c=2, d=3, fan diagonals d1..d5 = 4..8.
    # Polygon side s (corner s -> s+1) carries: a for s in (0, 2),
    # b for (1, 3), c for (4, 6), d for (5, 7); second occurrence = side 1.
    side_edge = {0: (0, 0), 2: (0, 1), 1: (1, 0), 3: (1, 1),
                 4: (2, 0), 6: (2, 1), 5: (3, 0), 7: (3, 1)}
    tris = []
    for i in range(6):
        first = side_edge[0] if i == 0 else (3 + i, 0)       # 0 -> i+1
        mid = side_edge[i + 1]                               # i+1 -> i+2
        last = side_edge[7] if i == 5 else (4 + i, 1)        # i+2 -> 0
        tris.append((first, mid, last))
    return Triangulation(tris)


# -- normal curves ---------------------------------------------------------

TRACE_LIMIT = 1 << 20


def corner_coord(tri, coords, t, i):
    """Number of normal arcs cutting off corner ``i`` of triangle ``t``
    (the corner between slots ``i - 1`` and ``i``)."""
    x = coords[tri.triangles[t][(i - 1) % 3][0]]
    y = coords[tri.triangles[t][i][0]]
    z = coords[tri.triangles[t][(i + 1) % 3][0]]
    d = x + y - z
    if d < 0 or d % 2:
        raise InvalidCurve(
            "triangle %d violates the normal-arc conditions" % t)
    return d // 2


class NormalCurve:
    """A normal multicurve in edge coordinates.

    Construction validates the per-triangle conditions.  With
    ``check='trace'`` (the default for small vectors) the curve is also
    traced to verify it is a single essential component; huge vectors can
    be constructed with ``check='fast'`` together with
    ``assume_connected=True`` when connectivity is known from context --
    homeomorphisms preserve it, so images under mapping classes keep the
    flag.
    """

    def __init__(self, tri, coords, check="auto", assume_connected=False):
        self.tri = tri
        self.coords = tuple(int(x) for x in coords)
        if len(self.coords) != tri.num_edges:
            raise InvalidCurve("coordinate vector has wrong length")
        if any(x < 0 for x in self.coords):
            raise InvalidCurve("negative edge coordinate")
        for t in range(tri.num_triangles):
            for i in range(3):
                corner_coord(tri, self.coords, t, i)
        total = sum(self.coords)
        if total == 0:
            raise InvalidCurve("empty curve")
        if check == "auto":
            check = "trace" if total <= TRACE_LIMIT else "fast"
        if check == "trace":
            comps = trace_components(tri, self.coords)
            if len(comps) != 1:
                raise InvalidCurve("vector has %d components" % len(comps))
            if comps[0].is_vertex_link():
                raise Inessential("curve is a puncture link")
            self.connectivity = "checked"
        else:
            self.connectivity = "assumed" if assume_connected else "unchecked"

    @property
    def total_weight(self):
        return sum(self.coords)

    @property
    def bits(self):
        """The complexity norm: sum of bit lengths of ``coord + 1``."""
        return sum(bitlen(x + 1) for x in self.coords)

    @property
    def logsum(self):
        return bitlen(sum(self.coords))

    def isotopic_to(self, other):
        if self.tri != other.tri:
            raise CurveDistError("curves live on different triangulations")
        return self.coords == other.coords

    def _replace(self, tri, coords):
        out = object.__new__(NormalCurve)
        out.tri = tri
        out.coords = tuple(coords)
        out.connectivity = self.connectivity if self.connectivity != "checked" \
            else "assumed"
        return out

    def __repr__(self):
        return "NormalCurve%r" % (self.coords,)


@dataclass(frozen=True)
class CurveComplexity:
    bits: int
    logsum: int

    @staticmethod
    def of(curve):
        return CurveComplexity(curve.bits, curve.logsum)


def isotopic(a, b):
    """Normal coordinates are a complete isotopy invariant here."""
    return a.isotopic_to(b)


# -- curve tracing -----------------------------------------------------------

class TracedComponent:
    """One closed component: the cyclic list of its corner arcs
    ``(triangle, corner, depth)`` (depth 0 innermost) and, aligned with
    it, the crossing records between consecutive arcs:
    ``(edge, out_slot, global_pos, entered_slot)`` where ``out_slot`` is
    the slot (in the leaving arc's triangle) the walk exits through,
    ``global_pos`` the position along the edge in side-0 coordinates, and
    ``entered_slot`` the slot of the next arc's triangle."""

    def __init__(self, tri, arcs, crossings=None):
        self.tri = tri
        self.arcs = arcs
        self.crossings = crossings or []

    def __len__(self):
        return len(self.arcs)

    def vertices(self):
        return {self.tri.vertex_of_corner(t, c) for (t, c, _d) in self.arcs}

    def is_vertex_link(self):
        if len(self.vertices()) != 1:
            return False
        v = next(iter(self.vertices()))
        return self.edge_vector() == vertex_link_vector(self.tri, v)

    def edge_vector(self):
        out = [0] * self.tri.num_edges
        for (t, c, _d) in self.arcs:
            out[self.tri.triangles[t][(c - 1) % 3][0]] += 1
            out[self.tri.triangles[t][c][0]] += 1
        # each crossing counted once: an arc meets two edges, and each edge
        # point is shared by exactly two arcs
        return tuple(x // 2 for x in out)


def vertex_link_vector(tri, v):
    """Edge vector of the puncture link of vertex ``v``."""
    out = [0] * tri.num_edges
    for e, _s in tri.edge_ends_around(v):
        out[e] += 1
    return tuple(out)


def trace_components(tri, coords):
    """Trace the multicurve with the given coordinates into closed
    components.  Cost is linear in the total weight, so the total is
    guarded by ``TRACE_LIMIT``."""
    total = sum(coords)
    if total > TRACE_LIMIT:
        raise TooLarge("curve too heavy to trace (%d arcs)" % total)
    # Arc records: (t, corner c, depth d) with d = 0 nearest the vertex.
    # The arc at corner c joins slot c-1 (at traversal position w - 1 - d)
    # to slot c (at traversal position d).  The walk alternates the edge it
    # leaves each arc through.
    visited = set()
    comps = []
    for t0 in range(tri.num_triangles):
        for c0 in range(3):
            w0 = corner_coord(tri, coords, t0, c0)
            for d0 in range(w0):
                if (t0, c0, d0) in visited:
                    continue
                arcs = []
                crossings = []
                start = (t0, c0, d0, c0)
                t, c, d, out_slot = start
                while True:
                    if (t, c, d) not in visited:
                        visited.add((t, c, d))
                        arcs.append((t, c, d))
                    # traversal position on the slot we leave through
                    e, s = tri.triangles[t][out_slot]
                    w = coords[e]
                    tpos = d if out_slot == c else w - 1 - d
                    gp = tpos if s == 0 else w - 1 - tpos
                    t2, j = tri.slot(e, 1 - s)
                    crossings.append((e, out_slot, gp, j))
                    tp = gp if (1 - s) == 0 else w - 1 - gp
                    sa = corner_coord(tri, coords, t2, j)
                    if tp < sa:
                        c2, d2 = j, tp
                        out2 = (j - 1) % 3
                    else:
                        c2, d2 = (j + 1) % 3, w - 1 - tp
                        out2 = (j + 1) % 3
                    t, c, d, out_slot = t2, c2, d2, out2
                    if (t, c, d, out_slot) == start:
                        break
                comps.append(TracedComponent(tri, arcs, crossings))
    return comps


def is_essential_vector(tri, coords):
    """True if the vector is a single essential curve."""
    try:
        comps = trace_components(tri, coords)
    except InvalidCurve:
        return False
    return len(comps) == 1 and not comps[0].is_vertex_link() and sum(coords) > 0


# -- mapping classes --------------------------------------------------------

class MappingClass:
    """A mapping class given as a word of flips and relabels on a fixed
    base triangulation.

    The word, applied move by move, must return the base triangulation
    exactly; the class then acts on normal coordinates of the base.
    """

    def __init__(self, tri, moves):
        self.tri = tri
        self.moves = tuple(self._freeze(m) for m in moves)
        self._updates = []
        state = tri
        for kind, arg in self.moves:
            if kind == "flip":
                state, upd = state.flip(arg)
            else:
                perm = dict(enumerate(arg))
                upd = state.apply_relabel(perm)
                state, _cmap = state.rename_edges(perm)
            self._updates.append(upd)
        if state != tri:
            raise CurveDistError(
                "word does not return to the base triangulation")

    @staticmethod
    def _freeze(move):
        kind, arg = move
        if kind == "flip":
            return ("flip", int(arg))
        if kind == "relabel":
            return ("relabel", tuple(arg))
        raise CurveDistError("unknown move kind %r" % (kind,))

    @property
    def length(self):
        """Word length: the number of flips."""
        return sum(1 for kind, _ in self.moves if kind == "flip")

    def apply_coords(self, coords):
        for upd in self._updates:
            coords = upd(coords)
        return tuple(coords)

    def apply(self, curve):
        if curve.tri != self.tri:
            raise CurveDistError("curve is not on the base triangulation")
        return curve._replace(self.tri, self.apply_coords(curve.coords))

    def __mul__(self, other):
        """Composition: ``(f * g)`` applies ``f``'s word, then ``g``'s."""
        if self.tri != other.tri:
            raise CurveDistError("mapping classes on different triangulations")
        return MappingClass(self.tri, self.moves + other.moves)

    def inverse(self):
        inv = []
        for kind, arg in reversed(self.moves):
            if kind == "flip":
                inv.append(("flip", arg))
            else:
                p = list(arg)
                q = [0] * len(p)
                for i, v in enumerate(p):
                    q[v] = i
                inv.append(("relabel", tuple(q)))
        return MappingClass(self.tri, inv)

    def power(self, k):
        if k < 0:
            return self.inverse().power(-k)
        return MappingClass(self.tri, self.moves * k)

    def identity_like(self):
        return MappingClass(self.tri, [])

    def puncture_permutation(self):
        """How the class permutes the vertices of the base triangulation."""
        # Track vertex identity through the word: flips move corners inside
        # one quadrilateral; relabels map corners through the automorphism.
        state = self.tri
        ids = dict(state._corner_vertex)
        for kind, arg in self.moves:
            if kind == "flip":
                edge = arg
                ta, ia = state.slot(edge, 0)
                tb, ib = state.slot(edge, 1)
                # quad P Q R S, old diagonal Q -> S inside ta
                P = ids[(ta, (ia + 2) % 3)]
                Q = ids[(ta, ia)]
                R = ids[(tb, (ib + 2) % 3)]
                S = ids[(ta, (ia + 1) % 3)]
                state, _ = state.flip(edge)
                sa, sb = state.slot(edge, 0), state.slot(edge, 1)
                if sa[0] != ta:
                    sa, sb = sb, sa
                pa, pb = sa[1], sb[1]
                ids = dict(ids)
                # ta now holds PQ, QR with corner after the diagonal at P
                ids[(ta, (pa + 1) % 3)] = P
                ids[(ta, (pa + 2) % 3)] = Q
                ids[(ta, pa)] = R
                ids[(tb, (pb + 1) % 3)] = R
                ids[(tb, (pb + 2) % 3)] = S
                ids[(tb, pb)] = P
            else:
                perm = dict(enumerate(arg))
                state, cmap = state.rename_edges(perm)
                ids = {cmap[corner]: v for corner, v in ids.items()}
        align = state.align_triangles(self.tri)
        out = {}
        for (t, i), v in ids.items():
            t2, j = align[t]
            out[v] = self.tri._corner_vertex[(t2, (j + i) % 3)]
        return out


def identity_mapping_class(tri):
    return MappingClass(tri, [])


# -- shortening -------------------------------------------------------------

def shorten_curve(tri, curve, xi=None, rng_seed=0):
    """Greedy flip descent bringing ``curve`` to meet every edge at most
    twice.

    Returns ``(flip_path, new_triangulation, new_curve)``.  Greedy descent
    on the total weight is tried first, followed by a bounded exhaustive
    search; the output bound is always verified, so a stall is surfaced as
    :class:`ShorteningStalled` rather than a silently wrong answer.
    """
    if xi is None:
        g, p = tri.inferred_surface()
        xi = 3 * g - 3 + p
    path = []
    state, coords = tri, tuple(curve.coords)
    guard = 0
    while max(coords) > 2:
        guard += 1
        if guard > 64 * (xi + 1) * max(2, max(coords).bit_length()):
            raise ShorteningStalled("flip descent did not converge")
        step = _best_decreasing_flip(state, coords)
        if step is not None:
            e, new_state, new_coords = step
            path.append(e)
            state, coords = new_state, new_coords
            continue
        seq = _search_decreasing(state, coords, depth=4 * xi)
        if seq is None:
            raise ShorteningStalled(
                "no flip sequence of depth <= %d decreases the weight" % (4 * xi))
        for e in seq:
            state, upd = state.flip(e)
            coords = upd(coords)
            path.append(e)
    out = curve._replace(state, coords)
    assert max(out.coords) <= 2
    return path, state, out


def _best_decreasing_flip(tri, coords):
    best = None
    for e in range(tri.num_edges):
        if not tri.is_flippable(e) or coords[e] == 0:
            continue
        new_tri, upd = tri.flip(e)
        new_coords = upd(coords)
        drop = sum(coords) - sum(new_coords)
        if drop > 0 and (best is None or drop > best[0]):
            best = (drop, e, new_tri, new_coords)
    if best is None:
        return None
    return best[1], best[2], best[3]


def _search_decreasing(tri, coords, depth, node_cap=20000):
    start_total = sum(coords)
    seen = {coords}
    stack = [(tri, coords, ())]
    nodes = 0
    while stack:
        state, cur, seq = stack.pop()
        if len(seq) >= depth:
            continue
        for e in range(state.num_edges):
            if not state.is_flippable(e):
                continue
            nodes += 1
            if nodes > node_cap:
                return None
            new_state, upd = state.flip(e)
            new_coords = upd(cur)
            if sum(new_coords) < start_total:
                return seq + (e,)
            if new_coords in seen:
                continue
            seen.add(new_coords)
            stack.append((new_state, new_coords, seq + (e,)))
    return None


# -- edge link curves ---------------------------------------------------------

def edge_link_curves(tri):
    """For each edge, the essential boundary components of a regular
    neighbourhood of the edge (punctures as marked points), deduplicated.
    """
    found = []
    seen = set()
    for e in range(tri.num_edges):
        for vec in _edge_link_vectors(tri, e):
            if sum(vec) == 0 or vec in seen:
                continue
            if not is_essential_vector(tri, vec):
                continue
            seen.add(vec)
            found.append(NormalCurve(tri, vec))
    return found


def _edge_link_vectors(tri, e):
    ta, ia = tri.slot(e, 0)
    v1 = tri.vertex_of_corner(ta, ia)
    v2 = tri.vertex_of_corner(ta, (ia + 1) % 3)
    if v1 != v2:
        vec = [0] * tri.num_edges
        for v in (v1, v2):
            for f, _s in tri.edge_ends_around(v):
                vec[f] += 1
        vec[e] -= 2
        return [tuple(vec)]
    # loop edge: the two ends split the fan at the vertex into two arcs
    ends = tri.edge_ends_around(v1)
    hits = [k for k, (f, _s) in enumerate(ends) if f == e]
    if len(hits) != 2:
        return []
    k1, k2 = hits
    arc1 = ends[k1 + 1:k2]
    arc2 = ends[k2 + 1:] + ends[:k1]
    out = []
    for arc in (arc1, arc2):
        vec = [0] * tri.num_edges
        for f, _s in arc:
            vec[f] += 1
        out.append(tuple(vec))
    return out
