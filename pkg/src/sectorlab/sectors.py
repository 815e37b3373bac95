"""Sector Hilbert spaces and twisted Laplacian spectra.

The sector of a flat connection is realized on l2(V) tensor C^d; its dynamics
is probed by the twisted graph Laplacian, the minimal gauge-covariant positive
operator whose spectrum distinguishes sectors.  With vertex measure mu the
operator is similar to a measure-free Hermitian matrix, so spectra are
independent of mu; the matrix below is that similarity-transformed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .complexes import ConfigComplex
from .errors import ConvergenceFailureError, InvalidParameterError, InvalidRepresentationError
from .holonomy import (
    FlatConnection,
    Fingerprint,
    UnitaryRep,
    cocycle_from_rep,
    equivalence_fingerprint,
    fingerprint_distance,
    trivial_rep,
)
from .pi1 import Pi1Presentation

DENSE_CUTOFF = 2000
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class SectorSpace:
    """Basis bookkeeping for l2(V) tensor C^d: vertex blocks in sorted order."""

    complex: ConfigComplex = field(compare=False, repr=False)
    dim: int

    @property
    def vertices(self):
        return self.complex.vertices

    @property
    def n(self) -> int:
        return self.complex.n_vertices * self.dim

    def offset(self, v) -> int:
        return self.vertices.index(v) * self.dim


@dataclass(frozen=True)
class HermitianOperator:
    matrix: object = field(compare=False)  # ndarray or scipy sparse
    n: int

    def __post_init__(self):
        m = self.matrix
        if sp.issparse(m):
            defect = abs(m - m.getH()).max()
        else:
            defect = float(np.linalg.norm(m - m.conj().T))
        if defect > HERMITICITY_TOL:
            raise InvalidParameterError(f"operator is not Hermitian (defect {defect:.3e})")

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.asarray(self.matrix)


def twisted_laplacian(cx: ConfigComplex, conn: FlatConnection) -> HermitianOperator:
    """Weighted graph Laplacian twisted by a flat connection.

    Acting on psi: (H psi)(x) = sum over darts x -> y of w_e (psi(x) -
    sqrt(mu(y)/mu(x)) U(e)^-1 psi(y)), assembled here in the flat basis where
    the measure factors cancel.  Positive semidefinite; refuses non-flat
    connections (the sector would be undefined).
    """
    if conn.complex is not cx and conn.complex.edge_ids != cx.edge_ids:
        raise InvalidParameterError("connection does not live on this complex")
    if not conn.is_flat():
        raise InvalidRepresentationError(
            f"connection is not flat (max face deviation {conn.max_face_deviation():.3e}); "
            "sector undefined")
    d = conn.dim
    space = SectorSpace(cx, d)
    n = space.n
    index = {v: i * d for i, v in enumerate(space.vertices)}
    dense = n <= DENSE_CUTOFF
    if dense:
        h = np.zeros((n, n), dtype=complex)
    else:
        h = sp.lil_matrix((n, n), dtype=complex)
    eye = np.eye(d)
    for eid in cx.edge_ids:
        u, v = cx.edge_ends(eid)
        w = cx.edge_weight(eid)
        m = conn.edge_matrix(eid)
        iu, iv = index[u], index[v]
        # each usable direction contributes: loops enter the diagonal twice
        h[iu:iu + d, iu:iu + d] += w * eye
        h[iv:iv + d, iv:iv + d] += w * eye
        if u == v:
            h[iu:iu + d, iu:iu + d] -= w * (m + m.conj().T)
        else:
            h[iu:iu + d, iv:iv + d] += -w * m.conj().T
            h[iv:iv + d, iu:iu + d] += -w * m
    if not dense:
        h = h.tocsr()
    return HermitianOperator(h, n)


def spectrum(op: HermitianOperator, k: int | None = None, seed: int = 7,
             residual_tol: float = 1e-8) -> np.ndarray:
    """Ascending eigenvalues: dense solver up to the cutoff, restarted Krylov
    (ARPACK) beyond it, with a residual check on the iterative path."""
    if k is not None and (k < 1 or k > op.n):
        raise InvalidParameterError(f"k={k} out of range for n={op.n}")
    if op.n <= DENSE_CUTOFF or (k is not None and k >= op.n - 1):
        vals = np.linalg.eigvalsh(op.dense())
        return vals[:k] if k is not None else vals
    kk = k if k is not None else min(op.n - 2, 10)
    rng = np.random.default_rng(seed)
    v0 = rng.normal(size=op.n)
    try:
        vals, vecs = spla.eigsh(op.matrix, k=kk, which="SA", v0=v0)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceFailureError(f"eigsh did not converge: {exc}",
                                      residuals=getattr(exc, "eigenvalues", None)) from exc
    residuals = []
    for lam, vec in zip(vals, vecs.T):
        residuals.append(float(np.linalg.norm(op.matrix @ vec - lam * vec)))
    if max(residuals) > residual_tol:
        raise ConvergenceFailureError(
            f"eigenpair residual {max(residuals):.3e} above {residual_tol:.1e}",
            residuals=residuals)
    return np.sort(vals.real)


def largest_eigenvalue(matrix, seed: int = 7) -> float:
    """Top eigenvalue of a symmetric (sparse) operator; deterministic start."""
    n = matrix.shape[0]
    if n <= 400:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        return float(np.linalg.eigvalsh(dense)[-1])
    v0 = np.ones(n) / np.sqrt(n)
    try:
        vals = spla.eigsh(matrix, k=1, which="LA", v0=v0,
                          return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceFailureError(f"eigsh did not converge: {exc}") from exc
    return float(vals[0])


def cluster_eigenvalues(values, gap: float = 1e-8) -> tuple:
    """Group sorted eigenvalues into (value, multiplicity) clusters."""
    vals = np.sort(np.asarray(values, dtype=float))
    clusters = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] - vals[j] <= gap:
            j += 1
        clusters.append((float(np.mean(vals[i:j + 1])), j - i + 1))
        i = j + 1
    return tuple(clusters)


@dataclass(frozen=True)
class SectorReport:
    label: str
    dim: int
    eigenvalues: tuple
    multiplicities: tuple
    fingerprint: Fingerprint = field(compare=False)

    def to_dict(self) -> dict:
        return {"label": self.label, "dim": self.dim,
                "eigenvalues": list(self.eigenvalues),
                "multiplicities": list(self.multiplicities)}


@dataclass(frozen=True)
class SectorCompareReport:
    sectors: tuple
    distinct: tuple          # boolean matrix as nested tuples
    simply_connected: bool
    uniqueness_deviation: float | None  # vs untwisted, when simply connected
    tol: float

    @property
    def ok(self) -> bool:
        if self.simply_connected and self.uniqueness_deviation is not None:
            return self.uniqueness_deviation <= self.tol
        return True

    def to_dict(self) -> dict:
        return {"sectors": [s.to_dict() for s in self.sectors],
                "distinct": [list(row) for row in self.distinct],
                "simply_connected": self.simply_connected,
                "uniqueness_deviation": self.uniqueness_deviation,
                "ok": self.ok}


def sector_compare(cx: ConfigComplex, pres: Pi1Presentation, reps,
                   word_length: int = 6, tol: float = 1e-10) -> SectorCompareReport:
    """Spectra and fingerprints for a family of representations.

    Sectors are declared distinct when fingerprints differ beyond tol (a
    necessary condition for inequivalence, decided up to the word length).
    On a simply connected complex every sector spectrum must coincide with
    the untwisted one -- the discrete uniqueness statement.
    """
    from .pi1 import is_simply_connected

    sectors = []
    fingerprints = []
    spectra = []
    for rep in reps:
        conn = cocycle_from_rep(cx, pres, rep)
        vals = spectrum(twisted_laplacian(cx, conn))
        fp = equivalence_fingerprint(conn, pres, word_length)
        clusters = cluster_eigenvalues(vals)
        sectors.append(SectorReport(rep.label or f"dim{rep.dim}", rep.dim,
                                    tuple(v for v, _ in clusters),
                                    tuple(m for _, m in clusters), fp))
        fingerprints.append(fp)
        spectra.append((rep.dim, vals))
    distinct = tuple(
        tuple(bool(fingerprint_distance(fingerprints[i], fingerprints[j]) > tol)
              for j in range(len(reps)))
        for i in range(len(reps)))
    simply = is_simply_connected(cx)
    uniqueness = None
    if simply:
        base = spectrum(twisted_laplacian(cx, cocycle_from_rep(
            cx, pres, trivial_rep(pres.backend, 1))))
        uniqueness = 0.0
        for d, vals in spectra:
            expected = np.sort(np.repeat(base, d))
            uniqueness = max(uniqueness, float(np.max(np.abs(vals - expected))))
    return SectorCompareReport(tuple(sectors), distinct, simply, uniqueness, tol)
