"""Covering-space (gauge-group) construction and its verification.

The cover of a complex with attached group backend G has vertex set
V x G; a base edge with chord class theta lifts at group index b to an edge
landing at (head, theta o b).  Localized observables lift along the left
multiplication, the gauge group acts by right multiplication, and for finite
G the cover Laplacian decomposes over central projectors into twisted sector
Laplacians.  For infinite G the construction is truncated to a word-metric
ball with Dirichlet boundary, which yields one-sided monotone spectral
estimates (the random-walk norm criterion for amenability).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .complexes import ConfigComplex, Dart
from .errors import (
    BackendUnavailableError,
    DecompositionFailureError,
    InvalidParameterError,
    NumericalFailureError,
    TruncationTooSmallError,
    UnsupportedGroupError,
)
from .groups import (
    CyclicGroup,
    FiniteTableGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupBackend,
    character_table,
)
from .holonomy import UnitaryRep, cocycle_from_rep
from .pi1 import Pi1Presentation, dart_class
from .sectors import largest_eigenvalue, spectrum, twisted_laplacian


# -- cover construction ---------------------------------------------------------


@dataclass(frozen=True)
class CoverModel:
    """Truncated or full cover: base complex times a set of group elements."""

    base: ConfigComplex = field(compare=False, repr=False)
    pres: Pi1Presentation = field(compare=False, repr=False)
    backend: GroupBackend = field(compare=False)
    elements: tuple
    complex: ConfigComplex = field(compare=False, repr=False)
    interior: frozenset = field(compare=False)
    radius: int | None
    dart_shift: Mapping = field(compare=False)  # edge id -> group element (chord class)

    @property
    def is_full(self) -> bool:
        return self.radius is None

    @property
    def elem_index(self) -> dict:
        return {g: i for i, g in enumerate(self.elements)}

    def describe(self) -> dict:
        return {"vertices": self.complex.n_vertices, "edges": self.complex.n_edges,
                "faces": self.complex.n_faces, "elements": len(self.elements),
                "interior": len(self.interior), "radius": self.radius,
                "backend": self.backend.describe()}


def word_ball(backend: GroupBackend, radius: int) -> tuple:
    """Ball of the word metric on the backend's generators, BFS order."""
    letters = []
    for g in backend.generators:
        ge = backend.generator(g)
        letters.append(ge)
        letters.append(backend.inverse(ge))
    seen = {backend.identity(): 0}
    order = [backend.identity()]
    frontier = [backend.identity()]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for l in letters:
                y = backend.compose(x, l)
                if y not in seen:
                    seen[y] = len(order)
                    order.append(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(order)


def build_cover(cx: ConfigComplex, pres: Pi1Presentation,
                radius: int | None = None) -> CoverModel:
    """Realize the cover V x G with lifted edges and faces.

    ``radius=None`` needs a finite backend and produces the full cover with
    |V| * |G| vertices; otherwise the group is truncated to its word-metric
    ball and vertices whose full base star does not lift are flagged as
    boundary.
    """
    backend = pres.backend
    if backend is None:
        raise BackendUnavailableError("cover needs a presentation with a backend")
    if radius is None:
        if backend.order is None:
            raise InvalidParameterError("full cover needs a finite backend; give a radius")
        elements = tuple(backend.elements())
    else:
        if radius < 1:
            raise TruncationTooSmallError("ball radius must be >= 1")
        elements = word_ball(backend, radius)
    elem_index = {g: i for i, g in enumerate(elements)}

    shift = {}
    for eid in cx.edge_ids:
        shift[eid] = dart_class(pres, Dart(eid, 1))

    vertices = {}
    for v in cx.vertices:
        wv = cx.vertex_weight(v)
        for i in range(len(elements)):
            vertices[(v, i)] = wv
    edges = []
    for eid in cx.edge_ids:
        u, v = cx.edge_ends(eid)
        w = cx.edge_weight(eid)
        theta = shift[eid]
        for i, b in enumerate(elements):
            j = elem_index.get(backend.compose(theta, b))
            if j is not None:
                edges.append((f"{eid}@{i}", (u, i), (v, j), w))
    edge_ids = {e[0] for e in edges}

    faces = []
    for fid in cx.face_ids:
        word = cx.face_word(fid)
        for i in range(len(elements)):
            cover_darts = []
            cur = i
            ok = True
            for d in word:
                theta = shift[d.edge]
                if d.sign > 0:
                    eid = f"{d.edge}@{cur}"
                    nxt = elem_index.get(backend.compose(theta, elements[cur]))
                else:
                    src = elem_index.get(backend.compose(backend.inverse(theta), elements[cur]))
                    eid = f"{d.edge}@{src}" if src is not None else None
                    nxt = src
                if nxt is None or eid not in edge_ids:
                    ok = False
                    break
                cover_darts.append(Dart(eid, d.sign))
                cur = nxt
            if ok:
                faces.append((f"{fid}@{i}", tuple(cover_darts)))

    interior = set()
    for v in cx.vertices:
        needed = [shift[d.edge] if d.sign > 0 else backend.inverse(shift[d.edge])
                  for d in cx.darts_at(v)]
        for i, b in enumerate(elements):
            if all(backend.compose(t, b) in elem_index for t in needed):
                interior.add((v, i))
    if radius is not None and not interior:
        raise TruncationTooSmallError(
            f"ball of radius {radius} leaves no interior cover vertex")

    cover_cx = ConfigComplex(vertices, edges, faces,
                             name=f"cover[{cx.name or 'base'}]")
    return CoverModel(cx, pres, backend, elements, cover_cx, frozenset(interior),
                      radius, shift)


# -- regular actions and lifted operators ------------------------------------------


@dataclass(frozen=True)
class RegularAction:
    """Left or right translation action of the backend on a finite element set.

    The permutation may be partial on a truncated ball; undefined images are
    marked -1.  On the full group both actions are bijections and commute.
    """

    backend: GroupBackend = field(compare=False)
    side: str
    elements: tuple

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise InvalidParameterError("side must be 'left' or 'right'")

    def point_map(self, eta):
        """Where each element index goes: left is b -> eta o b, right is
        b -> b o eta^-1."""
        b = self.backend
        index = {g: i for i, g in enumerate(self.elements)}
        out = np.full(len(self.elements), -1, dtype=np.int64)
        inv_eta = b.inverse(eta)
        for i, g in enumerate(self.elements):
            tgt = b.compose(eta, g) if self.side == "left" else b.compose(g, inv_eta)
            out[i] = index.get(tgt, -1)
        return out

    def matrix(self, eta) -> np.ndarray:
        """Permutation matrix sending e_b to e_{point_map(b)}; a unitary
        representation on the full group."""
        pm = self.point_map(eta)
        if np.any(pm < 0):
            raise InvalidParameterError("action is partial on this element set")
        n = len(self.elements)
        m = np.zeros((n, n))
        for i, j in enumerate(pm):
            m[j, i] = 1.0
        return m


def cover_vertex_map(cover: CoverModel, action: RegularAction, eta) -> dict:
    """Fiberwise action on cover vertices; partial where the point map is."""
    pm = action.point_map(eta)
    out = {}
    for (v, i) in cover.complex.vertices:
        j = pm[i]
        if j >= 0:
            out[(v, i)] = (v, int(j))
    return out


def lift_edge_move(cover: CoverModel, dart: Dart) -> sp.csr_matrix:
    """Lifted localized move along a base dart: permutation of the fibers over
    the dart's endpoints with the measure-ratio weight, partial on boundaries."""
    cxb = cover.base
    u, v = cxb.dart_tail(dart), cxb.dart_head(dart)
    theta = cover.dart_shift[dart.edge]
    if dart.sign < 0:
        theta = cover.backend.inverse(theta)
    weight = np.sqrt(cxb.vertex_weight(u) / cxb.vertex_weight(v))
    order = cover.complex.vertices
    index = {x: i for i, x in enumerate(order)}
    elem_index = cover.elem_index
    rows, cols, vals = [], [], []
    for i, b in enumerate(cover.elements):
        j = elem_index.get(cover.backend.compose(theta, b))
        if j is not None:
            rows.append(index[(v, j)])
            cols.append(index[(u, i)])
            vals.append(weight)
    n = len(order)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def lift_function(cover: CoverModel, fn) -> sp.csr_matrix:
    """Diagonal lift of a base position function (callable or mapping)."""
    order = cover.complex.vertices
    get = fn if callable(fn) else (lambda v: fn.get(v, 0.0))
    diag = np.array([get(v) for (v, _) in order], dtype=complex)
    return sp.diags(diag).tocsr()


@dataclass(frozen=True)
class CommutationReport:
    checks: int
    violations: tuple
    ok: bool

    def to_dict(self) -> dict:
        return {"checks": self.checks, "violations": list(map(str, self.violations)),
                "ok": self.ok}


def verify_gauge_commutes(cover: CoverModel, trials: int | None = None,
                          seed: int = 7) -> CommutationReport:
    """Exact permutation-level commutation of lifted moves with the right
    (gauge) action, and of the left with the right action, on the interior.

    Finite full covers are checked exhaustively unless ``trials`` caps the
    sampled (group element, dart) pairs.
    """
    backend = cover.backend
    right = RegularAction(backend, "right", cover.elements)
    left = RegularAction(backend, "left", cover.elements)
    if cover.is_full:
        etas = list(backend.elements())
    else:
        etas = [backend.generator(g) for g in backend.generators]
        etas += [backend.inverse(e) for e in etas]
    darts = [Dart(e, s) for e in cover.base.edge_ids for s in (1, -1)]
    pairs = [(eta, d) for eta in etas for d in darts]
    if trials is not None and trials < len(pairs):
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(pairs), size=trials, replace=False)
        pairs = [pairs[i] for i in sorted(picks)]

    violations = []
    checks = 0
    for eta, dart in pairs:
        rmap = cover_vertex_map(cover, right, eta)
        u = cover.base.dart_tail(dart)
        theta = cover.dart_shift[dart.edge]
        if dart.sign < 0:
            theta = backend.inverse(theta)
        v = cover.base.dart_head(dart)
        for i, b in enumerate(cover.elements):
            src = (u, i)
            if src not in cover.interior:
                continue
            j = cover.elem_index.get(backend.compose(theta, b))
            moved = (v, j) if j is not None else None
            checks += 1
            via_move_then_gauge = rmap.get(moved) if moved is not None else None
            gauged = rmap.get(src)
            via_gauge_then_move = None
            if gauged is not None:
                j2 = cover.elem_index.get(
                    backend.compose(theta, cover.elements[gauged[1]]))
                via_gauge_then_move = (v, j2) if j2 is not None else None
            if (via_move_then_gauge is not None and via_gauge_then_move is not None
                    and via_move_then_gauge != via_gauge_then_move):
                violations.append((eta, dart, src))
    # left/right commutation on the interior element set
    for eta in etas:
        lmap = left.point_map(eta)
        for eta2 in etas:
            rmap = right.point_map(eta2)
            for i in range(len(cover.elements)):
                a, b2 = lmap[i], rmap[i]
                if a < 0 or b2 < 0:
                    continue
                lr = rmap[a]
                rl = lmap[b2]
                if lr >= 0 and rl >= 0:
                    checks += 1
                    if lr != rl:
                        violations.append((eta, eta2, cover.elements[i]))
    return CommutationReport(checks, tuple(violations), not violations)


# -- central decomposition -----------------------------------------------------


def _character_data(backend: GroupBackend):
    """Character table plus per-element character values in the backend's own
    element order (the table form may index elements differently)."""
    group = _as_finite(backend)
    table = character_table(group)
    elements = tuple(backend.elements())
    if group is backend:
        to_table = list(range(group.order))
    else:
        to_table = [group.from_word(backend.element_word(x)) for x in elements]
    values = np.array([[table.character_values(i)[j] for j in to_table]
                       for i in range(len(table.dims))])
    return table, elements, values


def central_projectors(backend: GroupBackend, tol: float = 1e-10):
    """Isotypic projectors (d_i/|G|) sum_g conj(chi_i(g)) R_r(g) on l2(G).

    Returns (projectors, character table, element order); validates
    idempotency, mutual orthogonality and completeness.
    """
    table, elements, values = _character_data(backend)
    n = len(elements)
    right = RegularAction(backend, "right", elements)
    rmats = [right.matrix(x) for x in elements]
    projectors = []
    for i, d in enumerate(table.dims):
        p = np.zeros((n, n), dtype=complex)
        for g in range(n):
            p += np.conj(values[i, g]) * rmats[g]
        p *= d / n
        projectors.append(p)
    total = sum(projectors)
    for i, p in enumerate(projectors):
        if np.linalg.norm(p @ p - p) > tol:
            raise UnsupportedGroupError(f"projector {i} is not idempotent")
        for q in projectors[:i]:
            if np.linalg.norm(p @ q) > tol:
                raise UnsupportedGroupError("projectors are not mutually orthogonal")
    if np.linalg.norm(total - np.eye(n)) > tol:
        raise UnsupportedGroupError("projectors do not sum to the identity")
    return projectors, table, elements


def _as_finite(backend: GroupBackend) -> FiniteTableGroup:
    if isinstance(backend, FiniteTableGroup):
        return backend
    if isinstance(backend, CyclicGroup):
        # re-present the cyclic group as a table so class machinery applies
        from .groups import FiniteTableGroup as FTG

        g = backend.generators[0]
        return FTG.from_presentation((g,), (((g, backend.n),),), order_bound=backend.n)
    if isinstance(backend, FreeGroup) and backend.order == 1:
        return FiniteTableGroup((), np.zeros((1, 1), dtype=np.int64), [()], [])
    raise UnsupportedGroupError(f"backend {backend.describe()} is not a finite group")


@dataclass(frozen=True)
class SectorBlock:
    irrep_label: str
    irrep_dim: int
    block_eigenvalues: tuple
    sector_eigenvalues: tuple
    deviation: float

    def to_dict(self) -> dict:
        return {"irrep": self.irrep_label, "dim": self.irrep_dim,
                "block_eigenvalues": list(self.block_eigenvalues),
                "sector_eigenvalues": list(self.sector_eigenvalues),
                "deviation": self.deviation}


@dataclass(frozen=True)
class DecompositionReport:
    blocks: tuple
    cover_eigenvalues: tuple
    multiset_deviation: float
    tol: float

    @property
    def ok(self) -> bool:
        return (self.multiset_deviation <= self.tol
                and all(b.deviation <= self.tol for b in self.blocks))

    def to_dict(self) -> dict:
        return {"blocks": [b.to_dict() for b in self.blocks],
                "cover_eigenvalues": list(self.cover_eigenvalues),
                "multiset_deviation": self.multiset_deviation,
                "tol": self.tol, "ok": self.ok}


def decompose_cover_spectrum(cover: CoverModel, irreps: Sequence[UnitaryRep],
                             tol: float = 1e-8) -> DecompositionReport:
    """Block-diagonalize the untwisted cover Laplacian by central projectors
    and match each block against the corresponding twisted sector spectrum
    with multiplicity equal to the irrep dimension.

    ``irreps`` must contain one representation per irreducible character
    (matched by character values, up to complex conjugation -- conjugate
    sectors are isospectral).  Raises DecompositionFailureError on mismatch.
    """
    if not cover.is_full:
        raise InvalidParameterError("spectral decomposition needs a full finite cover")
    projectors, table, elements = central_projectors(cover.backend)
    if tuple(elements) != tuple(cover.elements):
        raise InvalidParameterError("cover and projector element orders disagree")
    group = _as_finite(cover.backend)

    lap = twisted_laplacian(cover.complex, _untwisted(cover.complex)).dense()
    cover_vals = np.linalg.eigvalsh(lap)

    # match irreps to character rows, up to complex conjugation (conjugate
    # sectors are isospectral, so either labeling verifies the decomposition)
    reps_by_row = {}
    for rep in irreps:
        chi_rep = np.array([rep.character(_map_element(cover.backend, group, cls[0]))
                            for cls in table.classes])
        for i in range(len(table.dims)):
            row = table.table[i]
            if (np.allclose(chi_rep, row, atol=1e-8)
                    or np.allclose(chi_rep, np.conj(row), atol=1e-8)):
                reps_by_row.setdefault(i, rep)
    missing = [i for i in range(len(table.dims)) if i not in reps_by_row]
    if missing:
        raise InvalidParameterError(
            f"no representation supplied for character rows {missing} "
            f"(dims {[table.dims[i] for i in missing]})")

    base_vertices = cover.base.vertices
    nv = len(base_vertices)
    blocks = []
    all_block_vals = []
    for i, p in enumerate(projectors):
        evals, evecs = np.linalg.eigh(p)
        cols = evecs[:, evals > 0.5]
        if cols.shape[1] != table.dims[i] ** 2:
            raise DecompositionFailureError(
                f"projector {i} has rank {cols.shape[1]}, expected {table.dims[i] ** 2}")
        basis = np.kron(np.eye(nv), cols)
        block = basis.conj().T @ lap @ basis
        bvals = np.linalg.eigvalsh(block)
        rep = reps_by_row[i]
        sconn = cocycle_from_rep(cover.base, cover.pres, rep)
        svals = spectrum(twisted_laplacian(cover.base, sconn))
        expected = np.sort(np.tile(svals, table.dims[i]))
        deviation = float(np.max(np.abs(np.sort(bvals) - expected))) if len(bvals) else 0.0
        blocks.append(SectorBlock(rep.label or f"irrep{i}", table.dims[i],
                                  tuple(np.sort(bvals)), tuple(svals), deviation))
        all_block_vals.append(bvals)
    multiset = np.sort(np.concatenate(all_block_vals))
    multiset_dev = float(np.max(np.abs(multiset - cover_vals)))
    report = DecompositionReport(tuple(blocks), tuple(cover_vals), multiset_dev, tol)
    if not report.ok:
        raise DecompositionFailureError(
            f"cover spectrum does not decompose within {tol:.1e} "
            f"(multiset deviation {multiset_dev:.3e}, "
            f"block deviations {[b.deviation for b in blocks]})")
    return report


def _untwisted(cx: ConfigComplex):
    from .holonomy import FlatConnection

    return FlatConnection(cx, 1, {})


def _map_element(backend: GroupBackend, group: FiniteTableGroup, idx: int):
    """Element of ``backend`` matching index ``idx`` of its table form."""
    if backend is group:
        return idx
    word = group.element_word(idx)
    return backend.from_word(word)


@dataclass(frozen=True)
class ConjugacyReport:
    """Matrix elements of left and right actions on central cyclic vectors."""

    max_deviation: float
    tol: float
    entries: tuple  # (projector index, group element, left value, right value)

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tol

    def to_dict(self) -> dict:
        return {"max_deviation": self.max_deviation, "tol": self.tol, "ok": self.ok}


def conjugacy_check(backend: GroupBackend, tol: float = 1e-10) -> ConjugacyReport:
    """For each central projector P with cyclic vector P e_1, the observable
    (left) and gauge (right) matrix elements must be complex conjugate:
    (P e1, R_l(g) P e1) = conj((P e1, R_r(g) P e1))."""
    projectors, _, elements = central_projectors(backend)
    n = len(elements)
    left = RegularAction(backend, "left", elements)
    right = RegularAction(backend, "right", elements)
    e1 = np.zeros(n)
    e1[elements.index(backend.identity())] = 1.0
    worst = 0.0
    entries = []
    for pi, p in enumerate(projectors):
        v = p @ e1
        for g in elements:
            lv = complex(v.conj() @ left.matrix(g) @ v)
            rv = complex(v.conj() @ right.matrix(g) @ v)
            worst = max(worst, abs(lv - np.conj(rv)))
            entries.append((pi, g, lv, rv))
    return ConjugacyReport(worst, tol, tuple(entries))


# -- amenability (random-walk spectral radius) -----------------------------------


def _free_tree_ball_markov(rank: int, radius: int) -> sp.csr_matrix:
    """Markov operator of the simple random walk on the 2k-regular tree,
    restricted to the ball of the given radius (Dirichlet truncation).

    The Cayley graph of a free group on its standard generators is this tree,
    built level by level without materializing group elements.
    """
    k2 = 2 * rank
    sizes = [1]
    for r in range(1, radius + 1):
        sizes.append(sizes[-1] * (k2 - 1) if r > 1 else k2)
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    n = int(offsets[-1])
    rows = []
    cols = []
    for r in range(1, radius + 1):
        start, size = offsets[r], sizes[r]
        parent_start, branch = offsets[r - 1], (k2 if r == 1 else k2 - 1)
        children = np.arange(start, start + size, dtype=np.int64)
        parents = parent_start + (children - start) // branch
        rows.append(children)
        cols.append(parents)
    if not rows:
        return sp.csr_matrix((1, 1))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.full(len(rows), 1.0 / k2)
    m = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return m + m.T


def markov_operator(backend: GroupBackend, radius: int | None = None) -> sp.csr_matrix:
    """Symmetric transition operator of the simple random walk on the Cayley
    graph (step multiset: every generator and its inverse), restricted to the
    word-metric ball for infinite groups."""
    if isinstance(backend, FreeGroup) and backend.rank >= 1 and radius is not None:
        return _free_tree_ball_markov(backend.rank, radius)
    if backend.order is not None:
        elements = tuple(backend.elements())
    else:
        if radius is None:
            raise InvalidParameterError("infinite backend needs a truncation radius")
        elements = word_ball(backend, radius)
    index = {g: i for i, g in enumerate(elements)}
    steps = []
    for g in backend.generators:
        ge = backend.generator(g)
        steps.append(ge)
        steps.append(backend.inverse(ge))
    if not steps:
        return sp.identity(1, format="csr")
    rows, cols, vals = [], [], []
    p = 1.0 / len(steps)
    for i, x in enumerate(elements):
        for s in steps:
            j = index.get(backend.compose(x, s))
            if j is not None:
                rows.append(j)
                cols.append(i)
                vals.append(p)
    return sp.csr_matrix((vals, (rows, cols)), shape=(len(elements),) * 2)


def kesten_estimate(backend: GroupBackend, radius: int | None = None,
                    seed: int = 7) -> tuple:
    """Spectral radius of the (possibly truncated) random-walk operator and
    the number of states it acted on."""
    m = markov_operator(backend, radius)
    return largest_eigenvalue(m, seed=seed), m.shape[0]


@dataclass(frozen=True)
class AmenabilityReport:
    verdict: str                 # amenable | non-amenable | inconclusive
    reason: str
    group: dict
    estimates: tuple             # (radius, estimate, states)
    reference: float | None
    monotone: bool

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "group": self.group,
                "estimates": [list(e) for e in self.estimates],
                "reference": self.reference, "monotone": self.monotone}


def amenability_report(backend: GroupBackend, radii: Sequence[int] | None = None,
                       seed: int = 7) -> AmenabilityReport:
    """Verdict by group class with random-walk spectral-radius evidence.

    Finite and free-abelian groups (and free rank <= 1) are amenable; free
    groups of rank >= 2 are not.  For infinite groups the truncated estimates
    are non-decreasing in the radius and converge to the true norm: 1 for
    amenable groups, 2*sqrt(2k-1)/(2k) for free rank k.
    """
    if backend.order is not None:
        verdict, reason, reference = "amenable", "finite group", 1.0
        estimate, states = kesten_estimate(backend, None, seed=seed)
        estimates = ((None, estimate, states),)
        return AmenabilityReport(verdict, reason, backend.describe(), estimates,
                                 reference, True)
    if isinstance(backend, FreeAbelianGroup):
        verdict, reason, reference = "amenable", "free-abelian group", 1.0
        default_radii = (5, 10, 20)
    elif isinstance(backend, FreeGroup):
        k = backend.rank
        if k <= 1:
            verdict, reason, reference = "amenable", "free of rank <= 1 (abelian)", 1.0
            default_radii = (5, 10, 20)
        else:
            verdict = "non-amenable"
            reason = f"free group of rank {k}"
            reference = 2.0 * np.sqrt(2 * k - 1) / (2 * k)
            default_radii = (4, 8, 12)
    else:
        verdict, reason, reference = "inconclusive", "unclassified backend", None
        default_radii = (4, 8)
    radii = tuple(radii) if radii is not None else default_radii
    estimates = []
    for r in radii:
        est, states = kesten_estimate(backend, r, seed=seed)
        estimates.append((r, est, states))
    monotone = all(estimates[i][1] <= estimates[i + 1][1] + 1e-12
                   for i in range(len(estimates) - 1))
    return AmenabilityReport(verdict, reason, backend.describe(), tuple(estimates),
                             reference, monotone)


# -- non-L2 representations (completeness beyond amenability) ----------------------


@dataclass(frozen=True)
class NonL2Report:
    """Represented model of a sector on group-indexed wavefunctions with a
    representation-defined (generally non-l2) scalar product."""

    form: str
    support: tuple
    gram_rank: int
    quotient_dim: int
    psd_min: float
    expectation_deviation: float
    left_isometry_defect: float
    right_unitarity_defect: float | None
    right_commutation_defect: float | None
    right_conjugate_character_deviation: float | None
    edge_move_defect: float | None

    def to_dict(self) -> dict:
        return {"form": self.form, "support_size": len(self.support),
                "gram_rank": self.gram_rank, "quotient_dim": self.quotient_dim,
                "psd_min": self.psd_min,
                "expectation_deviation": self.expectation_deviation,
                "left_isometry_defect": self.left_isometry_defect,
                "right_unitarity_defect": self.right_unitarity_defect,
                "right_commutation_defect": self.right_commutation_defect,
                "right_conjugate_character_deviation":
                    self.right_conjugate_character_deviation,
                "edge_move_defect": self.edge_move_defect}


def non_l2_representation(cx: ConfigComplex, pres: Pi1Presentation, rep: UnitaryRep,
                          support: Sequence | int = 2, cyclic_vector=None,
                          form: str = "vector", tol: float = 1e-10) -> NonL2Report:
    """Build the Gram form on a finite group support, its positive quotient,
    and the induced actions.

    ``form='vector'``: (e_g, e_h) = <R(g) v, R(h) v>; the quotient left action
    reproduces the representation (equal expectations on the cyclic vectors).
    ``form='trace'``: (e_g, e_h) = Tr(R(g)^-1 R(h)); available for any
    finite-dimensional representation, the quotient has dimension d^2 and also
    carries a unitary right action commuting with the left one, conjugate to
    the representation.
    """
    backend = rep.backend
    if isinstance(support, int):
        elems = word_ball(backend, support)
    else:
        elems = tuple(support)
    index = {g: i for i, g in enumerate(elems)}
    ns = len(elems)
    d = rep.dim
    if form not in ("vector", "trace"):
        raise InvalidParameterError("form must be 'vector' or 'trace'")

    mats = [rep.evaluate(g) for g in elems]
    if form == "vector":
        v = np.zeros(d, dtype=complex)
        if cyclic_vector is None:
            v[0] = 1.0
        else:
            v = np.asarray(cyclic_vector, dtype=complex)
            if v.shape != (d,) or not np.linalg.norm(v) > 0:
                raise InvalidParameterError("cyclic vector must be a nonzero d-vector")
        cols = np.stack([m @ v for m in mats], axis=1)      # d x ns
        gram = cols.conj().T @ cols
    else:
        gram = np.zeros((ns, ns), dtype=complex)
        for i, mi in enumerate(mats):
            for j, mj in enumerate(mats):
                gram[i, j] = np.trace(np.linalg.inv(mi) @ mj)

    evals, evecs = np.linalg.eigh((gram + gram.conj().T) / 2)
    psd_min = float(evals.min()) if len(evals) else 0.0
    if psd_min < -1e-10 * max(1.0, float(evals.max())):
        raise NumericalFailureError(f"Gram matrix is indefinite (min eigenvalue {psd_min:.3e})")
    cut = 1e-10 * max(1.0, float(evals.max()))
    keep = evals > cut
    rank = int(np.sum(keep))
    basis = evecs[:, keep]
    scale = np.sqrt(evals[keep])
    # phi(c) = diag(scale) basis^H c maps coefficients isometrically onto C^rank
    phi = (basis * scale[None, :]).conj().T

    def induced(point_map) -> tuple:
        """Quotient matrix of a (partial) support permutation; returns
        (matrix on defined columns, defined index list)."""
        cols_def = [i for i in range(ns) if point_map[i] >= 0]
        p = np.zeros((ns, len(cols_def)))
        for c, i in enumerate(cols_def):
            p[point_map[i], c] = 1.0
        return phi @ p, cols_def

    # left action e_h -> e_{g o h} for generators g
    gens = [backend.generator(g) for g in backend.generators]
    gens += [backend.inverse(g) for g in gens]
    left_defect = 0.0
    for ge in gens:
        pm = np.full(ns, -1, dtype=np.int64)
        for i, h in enumerate(elems):
            pm[i] = index.get(backend.compose(ge, h), -1)
        mapped, cols_def = induced(pm)
        if not cols_def:
            continue
        sub = phi[:, cols_def]
        left_defect = max(left_defect, float(np.linalg.norm(
            mapped.conj().T @ mapped - sub.conj().T @ sub)))

    # expectations on the cyclic vectors agree by construction; measure anyway
    e_id = index.get(backend.identity())
    expectation_dev = 0.0
    if e_id is not None:
        for i, g in enumerate(elems):
            lhs = complex(phi[:, e_id].conj() @ phi[:, i])
            if form == "vector":
                rhs = complex((mats[e_id] @ v).conj() @ (mats[i] @ v))
            else:
                rhs = complex(np.trace(np.linalg.inv(mats[e_id]) @ mats[i]))
            expectation_dev = max(expectation_dev, abs(lhs - rhs))

    right_unitarity = right_commutation = right_char_dev = None
    if form == "trace" and backend.order is not None and ns == backend.order:
        right_unitarity = 0.0
        right_commutation = 0.0
        right_char_dev = 0.0
        left_mats = {}
        right_mats = {}
        for ge in [backend.generator(g) for g in backend.generators]:
            pm_l = np.array([index[backend.compose(ge, h)] for h in elems])
            pm_r = np.array([index[backend.compose(h, backend.inverse(ge))] for h in elems])
            scale_inv = 1.0 / scale
            for pm, store in ((pm_l, left_mats), (pm_r, right_mats)):
                p = np.zeros((ns, ns))
                for i, j in enumerate(pm):
                    p[j, i] = 1.0
                m = (phi @ p @ basis) * scale_inv[None, :]
                store[ge] = m
        for ge in right_mats:
            m = right_mats[ge]
            right_unitarity = max(right_unitarity, float(np.linalg.norm(
                m.conj().T @ m - np.eye(rank))))
            for gl in left_mats:
                right_commutation = max(right_commutation, float(np.linalg.norm(
                    right_mats[ge] @ left_mats[gl] - left_mats[gl] @ right_mats[ge])))
            # right action is conjugate to the representation: d * conj(chi)
            tr = complex(np.trace(m))
            expected = d * np.conj(complex(np.trace(rep.evaluate(ge))))
            right_char_dev = max(right_char_dev, abs(tr - expected))

    # induced edge moves on functions over V x support: tree darts act by the
    # identity on the group index, chords by the left translation already
    # measured, so the worst isometry defect coincides with left_defect
    edge_move_defect = left_defect

    return NonL2Report(form, elems, rank, rank, psd_min, expectation_dev,
                       left_defect, right_unitarity, right_commutation,
                       right_char_dev, edge_move_defect)
