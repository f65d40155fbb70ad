"""Parsers and writers for the line-based text formats.

All formats are UTF-8, one record per line, ``#`` starts a comment.

surface:        surface genus=<g> punctures=<p>
triangulation:  tri <id> <edge>:<side> <edge>:<side> <edge>:<side>
curve:          curve <edge>=<decimal-bigint> ...   (omitted edges are 0)
mapping class:  flip <edge>
                relabel <perm in cycle notation, e.g. (0 1 2)(3 4)>
track:          switch <id>
                branch <id> <switch>:<side>:<pos> <switch>:<side>:<pos>
                branch <id> circle
                face <boundary word> punctures=<n> [genus=<g>]
                derive-faces
                weight <branch>=<decimal-bigint>

A face's boundary word lists wall tokens ``<branch>.<0|1>``; several
boundary cycles of one region are separated by ``|``.  With
``derive-faces`` the boundary cycles are traced from the ribbon structure
instead, every region is taken to be a disc, and a puncture is assigned
exactly to the cycles with at most two cusps (the minimum making the
track valid).
"""

from __future__ import annotations

from .errors import CurveDistError
from .surface import MappingClass, NormalCurve, Surface, Triangulation
from .traintrack import Measure, TrainTrack


def _lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_surface(text):
    for line in _lines(text):
        parts = line.split()
        if parts[0] != "surface":
            raise CurveDistError("expected a 'surface' line, got %r" % line)
        fields = dict(p.split("=", 1) for p in parts[1:])
        return Surface(int(fields["genus"]), int(fields["punctures"]))
    raise CurveDistError("empty surface file")


def write_surface(surface):
    return "surface genus=%d punctures=%d\n" % (surface.genus,
                                                surface.punctures)


def parse_triangulation(text):
    tris = {}
    for line in _lines(text):
        parts = line.split()
        if parts[0] != "tri":
            raise CurveDistError("expected a 'tri' line, got %r" % line)
        tid = int(parts[1])
        slots = []
        for tok in parts[2:5]:
            e, s = tok.split(":")
            slots.append((int(e), int(s)))
        if tid in tris:
            raise CurveDistError("duplicate triangle id %d" % tid)
        tris[tid] = tuple(slots)
    if sorted(tris) != list(range(len(tris))):
        raise CurveDistError("triangle ids must be 0..n-1")
    return Triangulation([tris[t] for t in sorted(tris)])


def write_triangulation(tri):
    out = []
    for t, slots in enumerate(tri.triangles):
        out.append("tri %d %s" % (t, " ".join("%d:%d" % s for s in slots)))
    return "\n".join(out) + "\n"


def parse_curve(text, tri, **kwargs):
    for line in _lines(text):
        parts = line.split()
        if parts[0] != "curve":
            raise CurveDistError("expected a 'curve' line, got %r" % line)
        coords = [0] * tri.num_edges
        for tok in parts[1:]:
            e, v = tok.split("=")
            coords[int(e)] = int(v)
        return NormalCurve(tri, coords, **kwargs)
    raise CurveDistError("empty curve file")


def write_curve(curve):
    toks = ["%d=%d" % (e, v) for e, v in enumerate(curve.coords) if v]
    return "curve %s\n" % " ".join(toks)


def parse_cycles(text):
    """Permutation in cycle notation, e.g. ``(0 1 2)(3 4)``."""
    text = text.replace(",", " ")
    if text.count("(") != text.count(")"):
        raise CurveDistError("unbalanced cycle notation")
    perm = {}
    rest = text.strip()
    while rest:
        if not rest.startswith("("):
            raise CurveDistError("bad cycle notation %r" % text)
        close = rest.index(")")
        cycle = [int(x) for x in rest[1:close].split()]
        for i, x in enumerate(cycle):
            if x in perm:
                raise CurveDistError("repeated element in cycles")
            perm[x] = cycle[(i + 1) % len(cycle)]
        rest = rest[close + 1:].strip()
    return perm


def parse_mapping_class(text, tri):
    moves = []
    for line in _lines(text):
        parts = line.split(None, 1)
        if parts[0] == "flip":
            moves.append(("flip", int(parts[1])))
        elif parts[0] == "relabel":
            cycles = parse_cycles(parts[1])
            perm = [cycles.get(e, e) for e in range(tri.num_edges)]
            moves.append(("relabel", tuple(perm)))
        else:
            raise CurveDistError("unknown mapping-class move %r" % line)
    return MappingClass(tri, moves)


def write_mapping_class(word):
    out = []
    for kind, arg in word.moves:
        if kind == "flip":
            out.append("flip %d" % arg)
        else:
            out.append("relabel %s" % _cycles_str(arg))
    return "\n".join(out) + "\n"


def _cycles_str(perm):
    seen = set()
    chunks = []
    for x in range(len(perm)):
        if x in seen or perm[x] == x:
            seen.add(x)
            continue
        cyc = [x]
        seen.add(x)
        y = perm[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = perm[y]
        chunks.append("(%s)" % " ".join(map(str, cyc)))
    return "".join(chunks) if chunks else "()"


def parse_track(text):
    """Returns ``(track, measure_or_None)``."""
    switches = {}
    branch_lines = {}
    weights = {}
    faces = []
    derive = False
    for line in _lines(text):
        parts = line.split()
        if parts[0] == "switch":
            switches[int(parts[1])] = True
        elif parts[0] == "branch":
            bid = int(parts[1])
            if parts[2] == "circle":
                branch_lines[bid] = None
            else:
                spots = []
                for tok in parts[2:4]:
                    s, side, pos = tok.split(":")
                    spots.append((int(s), int(side), int(pos)))
                branch_lines[bid] = tuple(spots)
        elif parts[0] == "weight":
            b, v = parts[1].split("=")
            weights[int(b)] = int(v)
        elif parts[0] == "face":
            faces.append(line)
        elif parts[0] == "derive-faces":
            derive = True
        else:
            raise CurveDistError("unknown track line %r" % line)
    side_lists = {s: ({}, {}) for s in switches}
    branches = {}
    next_end = 0
    for bid in sorted(branch_lines):
        spots = branch_lines[bid]
        if spots is None:
            branches[bid] = None
            continue
        ends = (2 * bid, 2 * bid + 1)
        branches[bid] = ends
        for end, (s, side, pos) in zip(ends, spots):
            if s not in side_lists:
                raise CurveDistError("branch %d attaches to unknown switch %d"
                                     % (bid, s))
            if pos in side_lists[s][side]:
                raise CurveDistError("two ends at switch %d side %d pos %d"
                                     % (s, side, pos))
            side_lists[s][side][pos] = end
    sw = {}
    for s, (a, b) in side_lists.items():
        sw[s] = (tuple(a[k] for k in sorted(a)), tuple(b[k] for k in sorted(b)))
    if derive:
        probe = TrainTrack(sw, branches,
                           {(b, w): 0 for b in branches for w in (0, 1)},
                           {0: (0, 0)}, check=False)
        wall_region = {}
        region_meta = {}
        for i, cyc in enumerate(probe.boundary_cycles()):
            for wall in cyc.walls:
                wall_region[wall] = i
            region_meta[i] = (0, 1 if cyc.cusps <= 2 else 0)
    else:
        wall_region = {}
        region_meta = {}
        for i, line in enumerate(faces):
            parts = line.split()
            punct = genus = 0
            tokens = []
            for tok in parts[1:]:
                if tok.startswith("punctures="):
                    punct = int(tok.split("=")[1])
                elif tok.startswith("genus="):
                    genus = int(tok.split("=")[1])
                elif tok == "|":
                    continue
                else:
                    b, w = tok.split(".")
                    tokens.append((int(b), int(w)))
            region_meta[i] = (genus, punct)
            for wall in tokens:
                wall_region[wall] = i
    track = TrainTrack(sw, branches, wall_region, region_meta)
    measure = Measure(track, weights) if weights else None
    return track, measure


def write_track(track, measure=None):
    out = []
    for s in sorted(track.switches):
        out.append("switch %d" % s)
    for b in sorted(track.branches):
        ends = track.branches[b]
        if ends is None:
            out.append("branch %d circle" % b)
        else:
            spots = " ".join("%d:%d:%d" % track.attach[e] for e in ends)
            out.append("branch %d %s" % (b, spots))
    for reg in track.regions():
        words = []
        for cyc in reg.boundary:
            words.append(" ".join("%d.%d" % w for w in cyc.walls))
        line = "face %s punctures=%d" % (" | ".join(words), reg.punctures)
        if reg.genus:
            line += " genus=%d" % reg.genus
        out.append(line)
    if measure is not None:
        for b in sorted(measure.weights):
            out.append("weight %d=%d" % (b, measure.weights[b]))
    return "\n".join(out) + "\n"
