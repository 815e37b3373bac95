"""Combinatorial 2-complexes: weighted graphs with distinguished trivial faces.

A ConfigComplex is the discrete stand-in for a configuration manifold: vertices
carry a positive measure weight, undirected edges (usable in both directions)
carry a positive conductance, and faces are closed edge words declared
homotopically trivial.  Builders produce the standard examples: cycles,
presentation complexes, grids with holes, and two-particle spaces.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    DisconnectedConfigurationSpaceError,
    FileFormatError,
    InvalidParameterError,
    InvalidRegionError,
    NotConnectedError,
)

VertexId = object  # hashable and mutually orderable within one complex


@dataclass(frozen=True, order=True)
class Dart:
    """A directed traversal of an undirected edge: sign +1 follows the stored
    orientation, -1 reverses it."""

    edge: str
    sign: int = 1

    def reverse(self) -> "Dart":
        return Dart(self.edge, -self.sign)

    def __repr__(self):
        return self.edge if self.sign > 0 else "~" + self.edge


def parse_dart(token: str) -> Dart:
    token = token.strip()
    if token.startswith("~"):
        return Dart(token[1:], -1)
    return Dart(token, 1)


class ConfigComplex:
    """Finite connected 2-complex with weighted vertices and edges.

    Immutable after construction; all derived structure (sorted vertex order,
    dart adjacency) is precomputed so concurrent reads are safe.
    """

    def __init__(self, vertices, edges, faces=(), labels=None, name=""):
        # vertices: mapping id -> weight, or iterable of ids (unit weights)
        if isinstance(vertices, Mapping):
            items = list(vertices.items())
        else:
            items = [(v, 1.0) for v in vertices]
        weights = {}
        for v, w in items:
            if v in weights:
                raise InvalidParameterError(f"duplicate vertex id {v!r}")
            if not w > 0:
                raise InvalidParameterError(f"vertex weight must be positive: {v!r} -> {w}")
            weights[v] = float(w)
        if not weights:
            raise InvalidParameterError("complex needs at least one vertex")
        self._weights = weights
        self.vertices = tuple(sorted(weights))

        self._edges = {}
        for rec in edges:
            if len(rec) == 3:
                eid, src, dst = rec
                w = 1.0
            else:
                eid, src, dst, w = rec
            if eid in self._edges:
                raise InvalidParameterError(f"duplicate edge id {eid!r}")
            if src not in weights or dst not in weights:
                raise InvalidParameterError(f"edge {eid!r} references unknown vertex")
            if not w > 0:
                raise InvalidParameterError(f"edge weight must be positive: {eid!r} -> {w}")
            self._edges[eid] = (src, dst, float(w))
        self.edge_ids = tuple(sorted(self._edges))

        self._faces = {}
        for fid, word in faces:
            darts = tuple(parse_dart(d) if isinstance(d, str) else d for d in word)
            if fid in self._faces:
                raise InvalidParameterError(f"duplicate face id {fid!r}")
            if not darts:
                raise InvalidParameterError(f"face {fid!r} has empty boundary word")
            for d in darts:
                if d.edge not in self._edges:
                    raise InvalidParameterError(f"face {fid!r} uses unknown edge {d.edge!r}")
            self._faces[fid] = darts
        self.face_ids = tuple(sorted(self._faces))
        self.labels = dict(labels or {})
        self.name = name

        adjacency = {v: [] for v in self.vertices}
        for eid, (src, dst, _) in self._edges.items():
            adjacency[src].append(Dart(eid, 1))
            adjacency[dst].append(Dart(eid, -1))
        self._darts_at = {
            v: tuple(sorted(ds, key=lambda d: (self.dart_head(d), d.edge, d.sign)))
            for v, ds in adjacency.items()
        }

        for fid in self.face_ids:
            self._check_closed_walk(fid)
        self._check_connected()

    # -- basic accessors ---------------------------------------------------

    def has_vertex(self, v) -> bool:
        return v in self._weights

    def vertex_weight(self, v) -> float:
        return self._weights[v]

    def edge_ends(self, eid) -> tuple:
        src, dst, _ = self._edges[eid]
        return src, dst

    def edge_weight(self, eid) -> float:
        return self._edges[eid][2]

    def dart_tail(self, dart: Dart):
        src, dst, _ = self._edges[dart.edge]
        return src if dart.sign > 0 else dst

    def dart_head(self, dart: Dart):
        src, dst, _ = self._edges[dart.edge]
        return dst if dart.sign > 0 else src

    def darts_at(self, v) -> tuple:
        """All darts leaving v, deterministically ordered. A self-loop
        contributes both of its orientations."""
        return self._darts_at[v]

    def degree(self, v) -> int:
        return len(self._darts_at[v])

    def face_word(self, fid) -> tuple:
        return self._faces[fid]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    @property
    def n_faces(self) -> int:
        return len(self._faces)

    def cycle_rank(self) -> int:
        """First Betti number of the 1-skeleton: |E| - |V| + 1."""
        return self.n_edges - self.n_vertices + 1

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return (f"ConfigComplex({self.n_vertices} vertices, {self.n_edges} edges, "
                f"{self.n_faces} faces{tag})")

    # -- validation --------------------------------------------------------

    def _check_closed_walk(self, fid):
        darts = self._faces[fid]
        for a, b in zip(darts, darts[1:] + darts[:1]):
            if self.dart_head(a) != self.dart_tail(b):
                raise InvalidParameterError(
                    f"face {fid!r} boundary is not a closed walk at {a!r} -> {b!r}")

    def _check_connected(self):
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for d in self._darts_at[v]:
                h = self.dart_head(d)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        if len(seen) != len(self.vertices):
            raise NotConnectedError(
                f"graph is not connected ({len(seen)} of {len(self.vertices)} vertices reached)")

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        """Serialize to the canonical [vertices]/[edges]/[faces] format."""
        lines = []
        if self.name:
            lines.append(f"# {self.name}")
        lines.append("[vertices]")
        for v in self.vertices:
            w = self._weights[v]
            lines.append(f"{_fmt_id(v)}" + (f" {w:g}" if w != 1.0 else ""))
        lines.append("")
        lines.append("[edges]")
        for eid in self.edge_ids:
            src, dst, w = self._edges[eid]
            line = f"{eid} {_fmt_id(src)} {_fmt_id(dst)}"
            if w != 1.0:
                line += f" {w:g}"
            lines.append(line)
        if self.face_ids:
            lines.append("")
            lines.append("[faces]")
            for fid in self.face_ids:
                lines.append(fid + " " + " ".join(repr(d) for d in self._faces[fid]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, name="") -> "ConfigComplex":
        vertices, edges, faces = {}, [], []
        section = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("["):
                section = line.strip("[]").lower()
                if section not in ("vertices", "edges", "faces"):
                    raise FileFormatError(f"line {lineno}: unknown section {line!r}")
                continue
            parts = line.split()
            try:
                if section == "vertices":
                    vertices[parts[0]] = float(parts[1]) if len(parts) > 1 else 1.0
                elif section == "edges":
                    w = float(parts[3]) if len(parts) > 3 else 1.0
                    edges.append((parts[0], parts[1], parts[2], w))
                elif section == "faces":
                    faces.append((parts[0], tuple(parse_dart(t) for t in parts[1:])))
                else:
                    raise FileFormatError(f"line {lineno}: content before any section")
            except (IndexError, ValueError) as exc:
                raise FileFormatError(f"line {lineno}: {exc}") from exc
        if not vertices:
            raise FileFormatError("no [vertices] section found")
        return cls(vertices, edges, faces, name=name)


def _fmt_id(v) -> str:
    if isinstance(v, str):
        return v
    return str(v).replace(" ", "")


# -- regions ---------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """A vertex subset with its induced edges and faces.

    ``small`` means the induced subcomplex is simply connected, i.e. every
    induced cycle is a product of induced face boundaries.
    """

    complex: ConfigComplex
    vertices: frozenset
    edge_ids: frozenset
    face_ids: frozenset
    small: bool

    def subcomplex(self) -> ConfigComplex:
        cx = self.complex
        verts = {v: cx.vertex_weight(v) for v in self.vertices}
        edges = [(e, *cx.edge_ends(e), cx.edge_weight(e)) for e in sorted(self.edge_ids)]
        faces = [(f, cx.face_word(f)) for f in sorted(self.face_ids)]
        return ConfigComplex(verts, edges, faces, name="region")

    def __repr__(self):
        return (f"Region({len(self.vertices)} vertices, {len(self.edge_ids)} edges, "
                f"{len(self.face_ids)} faces, small={self.small})")


def region_from_vertices(cx: ConfigComplex, vertices: Iterable) -> Region:
    vset = frozenset(vertices)
    unknown = vset - set(cx.vertices)
    if unknown:
        raise InvalidParameterError(f"unknown vertices in region: {sorted(unknown)!r}")
    if not vset:
        raise InvalidParameterError("region must contain at least one vertex")
    edge_ids = frozenset(
        e for e in cx.edge_ids if set(cx.edge_ends(e)) <= vset)
    face_ids = frozenset(
        f for f in cx.face_ids
        if all(d.edge in edge_ids for d in cx.face_word(f)))
    region = Region(cx, vset, edge_ids, face_ids, small=False)
    try:
        sub = region.subcomplex()
    except NotConnectedError as exc:
        raise InvalidRegionError(f"induced subgraph is not connected: {exc}") from exc
    from .pi1 import is_simply_connected  # local import: pi1 depends on complexes

    return Region(cx, vset, edge_ids, face_ids, small=is_simply_connected(sub))


def star_region(cx: ConfigComplex, center, radius: int) -> Region:
    """Ball of the given radius in the graph metric around ``center``."""
    if center not in cx._weights:
        raise InvalidParameterError(f"unknown vertex {center!r}")
    if radius < 1:
        raise InvalidParameterError("radius must be >= 1")
    dist = {center: 0}
    queue = deque([center])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for d in cx.darts_at(v):
            h = cx.dart_head(d)
            if h not in dist:
                dist[h] = dist[v] + 1
                queue.append(h)
    return region_from_vertices(cx, dist)


# -- builders ----------------------------------------------------------------


def build_cycle(n: int) -> ConfigComplex:
    """Cycle graph C_n: n vertices, n edges, no faces."""
    if n < 3:
        raise InvalidParameterError("cycle needs n >= 3")
    vertices = [f"v{i}" for i in range(n)]
    edges = [(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    return ConfigComplex(vertices, edges, name=f"cycle-{n}")


def build_path(n: int) -> ConfigComplex:
    """Path graph on n vertices (used for degenerate two-particle cases)."""
    if n < 1:
        raise InvalidParameterError("path needs n >= 1")
    vertices = [f"v{i}" for i in range(n)]
    edges = [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(n - 1)]
    return ConfigComplex(vertices, edges, name=f"path-{n}")


def build_presentation_complex(generators, relators) -> ConfigComplex:
    """One vertex, one loop edge per generator, one face per relator.

    ``relators`` are exponent words over the generator names (see
    groups.parse_word for the accepted text syntax).
    """
    from .groups import parse_word

    gens = list(generators)
    if len(set(gens)) != len(gens):
        raise InvalidParameterError("duplicate generator names")
    words = []
    for rel in relators:
        word = parse_word(rel, gens) if isinstance(rel, str) else tuple(rel)
        for g, _ in word:
            if g not in gens:
                raise InvalidParameterError(f"relator references unknown generator {g!r}")
        words.append(word)
    edges = [(g, "v0", "v0") for g in gens]
    faces = []
    for i, word in enumerate(words):
        darts = []
        for g, e in word:
            darts.extend([Dart(g, 1 if e > 0 else -1)] * abs(e))
        faces.append((f"r{i}", tuple(darts)))
    label = ",".join(gens) + ";" + ",".join(str(w) for w in relators)
    return ConfigComplex(["v0"], edges, faces, name=f"present[{label}]")


def build_grid_with_holes(width: int, height: int, holes=()) -> ConfigComplex:
    """Grid graph with ``width`` x ``height`` vertices and one square face per
    retained cell.  ``holes`` lists removed cell rectangles (row, col, nrows,
    ncols) in cell coordinates; they must be strictly interior and pairwise
    disjoint.  Removing cells leaves the graph intact, so the first Betti
    number equals the number of holes.
    """
    if width < 2 or height < 2:
        raise InvalidParameterError("grid needs width >= 2 and height >= 2")
    cells_h, cells_w = height - 1, width - 1
    removed = set()
    for rect in holes:
        r, c, nr, nc = rect
        if nr < 1 or nc < 1:
            raise InvalidParameterError(f"hole {rect!r} has empty extent")
        if r < 1 or c < 1 or r + nr > cells_h - 1 or c + nc > cells_w - 1:
            raise InvalidParameterError(f"hole {rect!r} is not strictly interior")
        cells = {(i, j) for i in range(r, r + nr) for j in range(c, c + nc)}
        if cells & removed:
            raise InvalidParameterError(f"hole {rect!r} overlaps another hole")
        removed |= cells

    def vid(r, c):
        return f"v{r}x{c}"

    vertices = [vid(r, c) for r in range(height) for c in range(width)]
    edges = []
    for r in range(height):
        for c in range(width):
            if c + 1 < width:
                edges.append((f"h{r}x{c}", vid(r, c), vid(r, c + 1)))
            if r + 1 < height:
                edges.append((f"u{r}x{c}", vid(r, c), vid(r + 1, c)))
    faces = []
    for r in range(cells_h):
        for c in range(cells_w):
            if (r, c) in removed:
                continue
            word = (Dart(f"h{r}x{c}", 1), Dart(f"u{r}x{c + 1}", 1),
                    Dart(f"h{r + 1}x{c}", -1), Dart(f"u{r}x{c}", -1))
            faces.append((f"c{r}x{c}", word))
    name = f"grid-{width}x{height}" + (f"-holes{len(holes)}" if holes else "")
    return ConfigComplex(vertices, edges, faces, name=name)


def build_two_particle_space(base: ConfigComplex) -> ConfigComplex:
    """Configuration space of two indistinguishable particles on a graph.

    Vertices are unordered pairs of distinct base vertices; edges move one
    particle along a base edge while the other sits at a non-incident vertex;
    faces are squares for simultaneous moves along vertex-disjoint edges.
    """
    if base.n_faces:
        raise InvalidParameterError("two-particle builder expects a graph (no faces)")
    for eid in base.edge_ids:
        u, v = base.edge_ends(eid)
        if u == v:
            raise InvalidParameterError(f"base graph must not contain loop edges ({eid!r})")
    if base.n_vertices < 2:
        raise InvalidParameterError("base graph needs at least 2 vertices")

    def pid(a, b):
        a, b = sorted((a, b))
        return f"{_fmt_id(a)}|{_fmt_id(b)}"

    vertices = {pid(a, b): base.vertex_weight(a) * base.vertex_weight(b)
                for i, a in enumerate(base.vertices)
                for b in base.vertices[i + 1:]}
    edges = []
    for eid in base.edge_ids:
        u, v = base.edge_ends(eid)
        w = base.edge_weight(eid)
        for spectator in base.vertices:
            if spectator in (u, v):
                continue
            edges.append((f"{eid}|{_fmt_id(spectator)}",
                          pid(u, spectator), pid(v, spectator), w))
    faces = []
    for i, e in enumerate(base.edge_ids):
        eu, ev = base.edge_ends(e)
        for f in base.edge_ids[i + 1:]:
            fu, fv = base.edge_ends(f)
            if {eu, ev} & {fu, fv}:
                continue
            word = (Dart(f"{e}|{_fmt_id(fu)}", 1), Dart(f"{f}|{_fmt_id(ev)}", 1),
                    Dart(f"{e}|{_fmt_id(fv)}", -1), Dart(f"{f}|{_fmt_id(eu)}", -1))
            faces.append((f"{e}&{f}", word))

    # connectivity of the move graph, checked before the ConfigComplex
    # constructor so the failure carries the component breakdown
    adj = {v: [] for v in vertices}
    for _, a, b, _ in edges:
        adj[a].append(b)
        adj[b].append(a)
    components = []
    seen = set()
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        components.append(sorted(comp))
    if len(components) > 1:
        raise DisconnectedConfigurationSpaceError(
            f"two-particle space splits into {len(components)} components "
            f"(sizes {[len(c) for c in components]})", components=components)
    return ConfigComplex(vertices, edges, faces,
                         name=f"pairs[{base.name or 'base'}]")
