"""Edge-level unitary cocycles built from fundamental-group representations.

A flat connection assigns a unitary matrix to every directed edge such that
each face boundary has identity holonomy; transport along a path is the
ordered product of edge matrices (the last edge acts leftmost).  Flatness is
the discrete version of local triviality: on a simply connected region every
such connection is a pure gauge.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .complexes import ConfigComplex, Dart, Region
from .errors import (
    FileFormatError,
    InvalidParameterError,
    InvalidRegionError,
    InvalidRepresentationError,
)
from .groups import GroupBackend, Word, normalize_word, word_letters
from .pi1 import PathWord, Pi1Presentation, base_path, based_loop_from_word, random_path

DEFAULT_TOL = 1e-10


def _unitarity_defect(m: np.ndarray) -> float:
    d = m.shape[0]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(d)))


@dataclass(frozen=True)
class UnitaryRep:
    """Unitary matrices for the generators of a group backend."""

    backend: GroupBackend
    dim: int
    matrices: Mapping = field(compare=False)  # generator name -> (d, d) ndarray
    tol: float = DEFAULT_TOL
    label: str = ""

    def __post_init__(self):
        mats = {g: np.asarray(m, dtype=complex) for g, m in self.matrices.items()}
        object.__setattr__(self, "matrices", mats)
        missing = set(self.backend.generators) - set(mats)
        if missing:
            raise InvalidRepresentationError(f"missing matrices for generators {sorted(missing)}")
        for g, m in mats.items():
            if m.shape != (self.dim, self.dim):
                raise InvalidRepresentationError(f"matrix for {g!r} is not {self.dim}x{self.dim}")
            defect = _unitarity_defect(m)
            if defect > self.tol:
                raise InvalidRepresentationError(
                    f"matrix for {g!r} is not unitary (defect {defect:.3e})")

    def evaluate_word(self, word: Word) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for g, e in normalize_word(word):
            m = self.matrices[g]
            out = out @ np.linalg.matrix_power(m, e)
        return out

    def evaluate(self, element) -> np.ndarray:
        return self.evaluate_word(self.backend.element_word(element))

    def conjugate_rep(self) -> "UnitaryRep":
        return UnitaryRep(self.backend, self.dim,
                          {g: m.conj() for g, m in self.matrices.items()},
                          self.tol, label=self.label + "~" if self.label else "conjugate")

    def character(self, element) -> complex:
        return complex(np.trace(self.evaluate(element)))

    def backend_relator_defect(self) -> float:
        """How far the matrices are from satisfying the backend's defining
        relations (0 for free groups)."""
        b = self.backend
        eye = np.eye(self.dim)
        defect = 0.0
        if b.tag == "cyclic":
            m = self.evaluate_word(((b.generators[0], b.order),))
            defect = max(defect, float(np.linalg.norm(m - eye)))
        elif b.tag == "free-abelian":
            for i, g in enumerate(b.generators):
                for h in b.generators[i + 1:]:
                    comm = (self.matrices[g] @ self.matrices[h]
                            - self.matrices[h] @ self.matrices[g])
                    defect = max(defect, float(np.linalg.norm(comm)))
        elif b.tag == "finite":
            for g in b.generators:
                n = b.element_order(b.generator(g))
                m = np.linalg.matrix_power(self.matrices[g], n)
                defect = max(defect, float(np.linalg.norm(m - eye)))
            # spot-check the table on generator pairs
            for g in b.generators:
                for h in b.generators:
                    lhs = self.matrices[g] @ self.matrices[h]
                    rhs = self.evaluate(b.compose(b.generator(g), b.generator(h)))
                    defect = max(defect, float(np.linalg.norm(lhs - rhs)))
        return defect


def trivial_rep(backend: GroupBackend, dim: int = 1, label: str = "trivial") -> UnitaryRep:
    eye = np.eye(dim, dtype=complex)
    return UnitaryRep(backend, dim, {g: eye.copy() for g in backend.generators}, label=label)


def character_rep(backend: GroupBackend, phases: Mapping, label: str = "") -> UnitaryRep:
    """One-dimensional representation with generator g mapped to
    exp(2*pi*i*phases[g]); missing generators get phase 0."""
    mats = {}
    for g in backend.generators:
        theta = float(phases.get(g, 0.0))
        mats[g] = np.array([[np.exp(2j * np.pi * theta)]])
    label = label or "char[" + ",".join(f"{g}={phases.get(g, 0.0):g}" for g in backend.generators) + "]"
    rep = UnitaryRep(backend, 1, mats, label=label)
    defect = rep.backend_relator_defect()
    if defect > rep.tol:
        raise InvalidRepresentationError(
            f"character phases violate backend relations (defect {defect:.3e})")
    return rep


def two_dim_reflection_rep(backend: GroupBackend, label: str = "2dim") -> UnitaryRep:
    """The two-dimensional irreducible representation of the symmetric group
    S3 presented on two involutive generators a, b with (ab)^3 = 1: both map
    to plane reflections at 60 degrees."""
    if len(backend.generators) != 2:
        raise InvalidParameterError("reflection rep needs exactly two generators")
    a, b = backend.generators

    def reflection(phi):
        c, s = np.cos(2 * phi), np.sin(2 * phi)
        return np.array([[c, s], [s, -c]], dtype=complex)

    rep = UnitaryRep(backend, 2, {a: reflection(0.0), b: reflection(np.pi / 3)}, label=label)
    defect = rep.backend_relator_defect()
    if defect > rep.tol:
        raise InvalidRepresentationError(
            f"backend is not an S3-type presentation (defect {defect:.3e})")
    return rep


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


# -- representation files -----------------------------------------------------


def rep_to_json(rep: UnitaryRep) -> dict:
    return {
        "dimension": rep.dim,
        "label": rep.label,
        "backend": rep.backend.describe(),
        "generators": {
            g: [[[float(z.real), float(z.imag)] for z in row] for row in m]
            for g, m in sorted(rep.matrices.items())
        },
    }


def rep_from_json(data: dict, backend: GroupBackend) -> UnitaryRep:
    try:
        dim = int(data["dimension"])
        mats = {}
        for g, rows in data["generators"].items():
            mats[g] = np.array([[complex(re, im) for re, im in row] for row in rows])
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"bad representation file: {exc}") from exc
    return UnitaryRep(backend, dim, mats, label=data.get("label", ""))


def load_rep(path: str, backend: GroupBackend) -> UnitaryRep:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"bad representation file {path}: {exc}") from exc
    return rep_from_json(data, backend)


# -- flat connections ----------------------------------------------------------


class FlatConnection:
    """Assignment of a d x d unitary to each edge; the reverse direction
    carries the inverse (stored once, derived on access)."""

    def __init__(self, cx: ConfigComplex, dim: int, edge_matrices: Mapping,
                 tol: float = DEFAULT_TOL, require_flat: bool = False):
        self.complex = cx
        self.dim = dim
        self.tol = tol
        mats = {}
        for eid in cx.edge_ids:
            m = edge_matrices.get(eid)
            m = np.eye(dim, dtype=complex) if m is None else np.asarray(m, dtype=complex)
            if m.shape != (dim, dim):
                raise InvalidParameterError(f"matrix for edge {eid!r} is not {dim}x{dim}")
            defect = _unitarity_defect(m)
            if defect > tol:
                raise InvalidRepresentationError(
                    f"edge {eid!r} matrix is not unitary (defect {defect:.3e})")
            mats[eid] = m
        self._mats = mats
        if require_flat and not self.is_flat():
            raise InvalidRepresentationError(
                f"connection is not flat (max face deviation {self.max_face_deviation():.3e})")

    def edge_matrix(self, eid) -> np.ndarray:
        return self._mats[eid]

    def dart_matrix(self, dart: Dart) -> np.ndarray:
        m = self._mats[dart.edge]
        return m if dart.sign > 0 else m.conj().T

    def face_deviation(self, fid) -> float:
        word = self.complex.face_word(fid)
        start = self.complex.dart_tail(word[0])
        hol = transport(self, PathWord(self.complex, start, word))
        return float(np.linalg.norm(hol - np.eye(self.dim)))

    def max_face_deviation(self) -> float:
        return max((self.face_deviation(f) for f in self.complex.face_ids), default=0.0)

    def is_flat(self, tol: float | None = None) -> bool:
        return self.max_face_deviation() <= (self.tol if tol is None else tol)

    def __repr__(self):
        return f"FlatConnection(dim={self.dim}, edges={len(self._mats)})"


def cocycle_from_rep(cx: ConfigComplex, pres: Pi1Presentation, rep: UnitaryRep) -> FlatConnection:
    """Tree-gauge connection of a representation: tree edges carry the
    identity, each chord carries the matrix of its based-loop class."""
    if pres.backend is None or rep.backend != pres.backend:
        raise InvalidRepresentationError(
            "representation backend does not match the presentation backend")
    defect = rep.backend_relator_defect()
    if defect > rep.tol:
        raise InvalidRepresentationError(
            f"representation violates backend relations (defect {defect:.3e})")
    from .pi1 import dart_class

    mats = {}
    for eid in pres.chords:
        mats[eid] = rep.evaluate(dart_class(pres, Dart(eid, 1)))
    conn = FlatConnection(cx, rep.dim, mats, tol=max(rep.tol, DEFAULT_TOL))
    if not conn.is_flat():
        raise InvalidRepresentationError(
            f"representation does not satisfy the face relators "
            f"(max deviation {conn.max_face_deviation():.3e})")
    return conn


def transport(conn: FlatConnection, path: PathWord) -> np.ndarray:
    """Ordered product of edge matrices along the path (first edge rightmost)."""
    if path.complex is not conn.complex and path.complex.edge_ids != conn.complex.edge_ids:
        raise InvalidParameterError("path and connection live on different complexes")
    out = np.eye(conn.dim, dtype=complex)
    for d in path.darts:
        out = conn.dart_matrix(d) @ out
    return out


@dataclass(frozen=True)
class CocycleReport:
    trials: int
    max_deviation: float
    tol: float
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tol and not self.failures

    def to_dict(self) -> dict:
        return {"trials": self.trials, "max_deviation": self.max_deviation,
                "tol": self.tol, "ok": self.ok,
                "failures": [repr(f) for f in self.failures]}


def verify_cocycle(conn: FlatConnection, trials: int = 500, seed: int = 7,
                   tol: float = 1e-12, max_length: int = 12) -> CocycleReport:
    """Sample random composable path pairs (h: x -> hx, g: hx -> ghx) and
    check transport(g) @ transport(h) == transport(h then g).

    Exact up to floating-point associativity; each trial is independent and
    the report is a max-reduction, so trials can run in any order.
    """
    cx = conn.complex
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for _ in range(trials):
        h = random_path(cx, rng, max_length=max_length)
        g = random_path(cx, rng, start=h.end, max_length=max_length)
        dev = float(np.linalg.norm(
            transport(conn, g) @ transport(conn, h) - transport(conn, h.then(g))))
        worst = max(worst, dev)
        if dev > tol:
            failures.append((h, g, dev))
    return CocycleReport(trials, worst, tol, tuple(failures))


# -- gauge transformations -------------------------------------------------------


@dataclass(frozen=True)
class GaugeField:
    """Vertex-indexed family of unitaries; vertices not listed act as the
    identity."""

    dim: int
    matrices: Mapping = field(compare=False)
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        mats = {v: np.asarray(m, dtype=complex) for v, m in self.matrices.items()}
        object.__setattr__(self, "matrices", mats)
        for v, m in mats.items():
            if m.shape != (self.dim, self.dim):
                raise InvalidParameterError(f"gauge at {v!r} is not {self.dim}x{self.dim}")
            defect = _unitarity_defect(m)
            if defect > self.tol:
                raise InvalidParameterError(f"gauge at {v!r} is not unitary (defect {defect:.3e})")

    def at(self, v) -> np.ndarray:
        m = self.matrices.get(v)
        return np.eye(self.dim, dtype=complex) if m is None else m


def identity_gauge(dim: int) -> GaugeField:
    return GaugeField(dim, {})


def random_gauge(cx: ConfigComplex, dim: int, rng: np.random.Generator) -> GaugeField:
    return GaugeField(dim, {v: random_unitary(dim, rng) for v in cx.vertices})


def gauge_transform(conn: FlatConnection, gauge: GaugeField) -> FlatConnection:
    """Edge x -> y gets S(y) U(e) S(x)^-1; flatness is preserved."""
    if gauge.dim != conn.dim:
        raise InvalidParameterError(
            f"gauge dimension {gauge.dim} does not match connection dimension {conn.dim}")
    cx = conn.complex
    mats = {}
    for eid in cx.edge_ids:
        u, v = cx.edge_ends(eid)
        mats[eid] = gauge.at(v) @ conn.edge_matrix(eid) @ gauge.at(u).conj().T
    return FlatConnection(cx, conn.dim, mats, tol=conn.tol)


def tree_gauge(conn: FlatConnection, pres: Pi1Presentation) -> tuple:
    """Gauge-fix so tree edges carry the identity; returns (connection, gauge).

    The gauge at x is the inverse transport along the canonical tree path, so
    chords end up carrying their based-loop holonomies.
    """
    mats = {}
    for v in conn.complex.vertices:
        w = transport(conn, base_path(pres, v))
        mats[v] = w.conj().T
    gauge = GaugeField(conn.dim, mats, tol=max(conn.tol, DEFAULT_TOL))
    return gauge_transform(conn, gauge), gauge


# -- local triviality (the discrete Locally Schroedinger check) -----------------


@dataclass(frozen=True)
class LSReport:
    ok: bool
    gauge: GaugeField | None
    max_deviation: float
    offending_loop: PathWord | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "max_deviation": self.max_deviation,
                "offending_loop": repr(self.offending_loop) if self.offending_loop else None}


def ls_check(conn: FlatConnection, region: Region, tol: float | None = None) -> LSReport:
    """On a small region, test that every internal loop has trivial holonomy
    and exhibit the trivializing vertex family: S(x) transports along a
    region spanning tree and every induced edge must equal S(head) S(tail)^-1.
    """
    if not region.small:
        raise InvalidRegionError("ls_check needs a region flagged small")
    tol = conn.tol if tol is None else tol
    cx = conn.complex
    root = min(region.vertices)
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in cx.darts_at(v):
            h = cx.dart_head(d)
            if h in region.vertices and d.edge in region.edge_ids and h not in parent:
                parent[h] = d
                order.append(h)
                queue.append(h)

    def tree_path(v) -> PathWord:
        darts = []
        while v != root:
            d = parent[v]
            darts.append(d)
            v = cx.dart_tail(d)
        return PathWord(cx, root, tuple(reversed(darts)))

    gauge_mats = {v: transport(conn, tree_path(v)) for v in order}
    worst = 0.0
    offending = None
    for eid in sorted(region.edge_ids):
        u, v = cx.edge_ends(eid)
        dev = float(np.linalg.norm(
            conn.edge_matrix(eid) - gauge_mats[v] @ gauge_mats[u].conj().T))
        if dev > worst:
            worst = dev
            if dev > tol:
                offending = tree_path(u).then(PathWord(cx, u, (Dart(eid, 1),))).then(
                    tree_path(v).reverse())
    if offending is not None:
        return LSReport(False, None, worst, offending)
    return LSReport(True, GaugeField(conn.dim, gauge_mats, tol=max(tol, DEFAULT_TOL)), worst)


# -- topological operators --------------------------------------------------------


@dataclass(frozen=True)
class TopologicalOperator:
    """Holonomy of a based loop together with its factorization into local
    edge-move unitaries compressed to a region.

    Each dart factors as the swap unitary exchanging its endpoints tensored
    with the edge matrix; undoing the total vertex permutation and projecting
    to the region must reproduce parallel transport on every region fiber.
    """

    loop: PathWord
    region: Region
    holonomy: np.ndarray = field(compare=False)
    compressed: np.ndarray = field(compare=False)  # (|O| d, |O| d) block matrix
    region_vertices: tuple
    deviation: float

    def to_dict(self) -> dict:
        return {"loop_length": len(self.loop), "base": str(self.loop.start),
                "deviation": self.deviation,
                "holonomy": [[[z.real, z.imag] for z in row] for row in self.holonomy]}


def _dart_move_unitary(cx: ConfigComplex, conn: FlatConnection, dart: Dart,
                       index: Mapping) -> tuple:
    """Full-space unitary of the localized move along a dart: swap the two
    endpoints (tensor the edge matrix) and fix every other vertex.  Returns
    (matrix, vertex permutation)."""
    d = conn.dim
    n = len(index) * d
    u, v = cx.dart_tail(dart), cx.dart_head(dart)
    m = np.zeros((n, n), dtype=complex)
    perm = {}
    mat = conn.dart_matrix(dart)
    for w in index:
        if w == u:
            m[index[v] * d:(index[v] + 1) * d, index[u] * d:(index[u] + 1) * d] = mat
            perm[u] = v
        elif w == v:
            m[index[u] * d:(index[u] + 1) * d, index[v] * d:(index[v] + 1) * d] = mat.conj().T
            perm[v] = u
        else:
            m[index[w] * d:(index[w] + 1) * d, index[w] * d:(index[w] + 1) * d] = np.eye(d)
            perm[w] = w
    if u == v:  # loop edge: the move fixes the vertex and acts by the matrix
        m[index[u] * d:(index[u] + 1) * d, index[u] * d:(index[u] + 1) * d] = mat
        perm[u] = u
    return m, perm


def topological_operator(conn: FlatConnection, loop: PathWord, region: Region,
                         tol: float | None = None) -> TopologicalOperator:
    """Assemble the loop holonomy from localized moves (Wilson-line form).

    The ordered product of per-dart swap unitaries, corrected by the inverse
    of the accumulated vertex permutation and compressed to the region, acts
    block-diagonally; the block at the loop base must equal the direct
    transport, and every other region fiber carries the transport along its
    own orbit path.
    """
    tol = conn.tol if tol is None else tol
    if not loop.is_closed():
        raise InvalidParameterError("topological_operator needs a closed loop")
    if loop.start not in region.vertices:
        raise InvalidRegionError("loop must be based at a vertex of the region")
    cx = conn.complex
    d = conn.dim
    index = {v: i for i, v in enumerate(cx.vertices)}

    total = np.eye(len(index) * d, dtype=complex)
    perm_total = {v: v for v in cx.vertices}
    for dart in loop.darts:
        m, perm = _dart_move_unitary(cx, conn, dart, index)
        total = m @ total
        perm_total = {v: perm[perm_total[v]] for v in cx.vertices}

    # undo the pure shift: C_g^{-1} acts by the inverse vertex permutation
    n = len(index)
    shift = np.zeros((n * d, n * d), dtype=complex)
    for v in cx.vertices:
        w = perm_total[v]
        shift[index[w] * d:(index[w] + 1) * d, index[v] * d:(index[v] + 1) * d] = np.eye(d)
    op = shift.conj().T @ total

    region_vertices = tuple(sorted(region.vertices))
    rows = []
    for v in region_vertices:
        rows.extend(range(index[v] * d, index[v] * d + d))
    compressed = op[np.ix_(rows, rows)]

    hol = transport(conn, loop)
    deviation = 0.0
    # every region fiber must carry the transport along its orbit under the moves
    for v in region_vertices:
        at = v
        orbit_darts = []
        for dart in loop.darts:
            u, w = cx.dart_tail(dart), cx.dart_head(dart)
            if at == u:
                orbit_darts.append(dart)
                at = w
            elif at == w and u != w:
                orbit_darts.append(dart.reverse())
                at = u
        expected = transport(conn, PathWord(cx, v, tuple(orbit_darts)))
        i = region_vertices.index(v)
        block = compressed[i * d:(i + 1) * d, i * d:(i + 1) * d]
        deviation = max(deviation, float(np.linalg.norm(block - expected)))
    base_i = region_vertices.index(loop.start)
    base_block = compressed[base_i * d:(base_i + 1) * d, base_i * d:(base_i + 1) * d]
    deviation = max(deviation, float(np.linalg.norm(base_block - hol)))
    if deviation > tol:
        raise InvalidRepresentationError(
            f"factorized local product deviates from holonomy by {deviation:.3e}")
    return TopologicalOperator(loop, region, hol, compressed, region_vertices, deviation)


# -- sector fingerprints -----------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    """Traces of based-loop holonomies over all reduced chord words up to a
    length; invariant under gauge transformation and unitary equivalence."""

    words: tuple
    traces: tuple  # complex numbers, aligned with words

    def to_dict(self) -> dict:
        return {"words": [list(map(list, w)) for w in self.words],
                "traces": [[t.real, t.imag] for t in self.traces]}


def enumerate_reduced_words(generators: Sequence[str], max_length: int) -> tuple:
    """All freely reduced words of length 0..max_length, deterministic order."""
    letters = []
    for g in sorted(generators):
        letters.append((g, 1))
        letters.append((g, -1))
    out = [()]
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1][0] == l[0] and w[-1][1] == -l[1]:
                    continue
                nxt.append(w + (l,))
        out.extend(nxt)
        frontier = nxt
    return tuple(normalize_word(w) for w in out)


def equivalence_fingerprint(conn: FlatConnection, pres: Pi1Presentation,
                            word_length: int = 6) -> Fingerprint:
    words = enumerate_reduced_words(pres.chords, word_length)
    traces = []
    for w in words:
        loop = based_loop_from_word(pres, w)
        traces.append(complex(np.trace(transport(conn, loop))))
    return Fingerprint(words, tuple(traces))


def fingerprint_distance(a: Fingerprint, b: Fingerprint) -> float:
    if a.words != b.words:
        raise InvalidParameterError("fingerprints enumerate different word sets")
    return float(max((abs(x - y) for x, y in zip(a.traces, b.traces)), default=0.0))
