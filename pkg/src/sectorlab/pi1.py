"""Spanning-tree presentations of the fundamental group of a 2-complex.

A breadth-first spanning tree fixes, for every vertex, a canonical path from
the base point (the discrete version of a fixed path family).  Non-tree edges
(chords) generate the fundamental group; each face boundary, rewritten in the
chords, contributes a relator.  ``loop_class`` closes an arbitrary path
through the tree and reduces the result in a pluggable group backend.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .complexes import ConfigComplex, Dart
from .errors import BackendUnavailableError, InvalidParameterError, PossiblyInfiniteGroupError
from .groups import (
    CyclicGroup,
    FiniteTableGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupBackend,
    Word,
    abelianization,
    invert_word,
    normalize_word,
    simplify_presentation,
    word_mul,
    word_power,
)


@dataclass(frozen=True)
class PathWord:
    """A based, composable word of directed edges.

    ``darts`` chain head-to-tail starting at ``start``; the empty word is the
    identity path.  Composition ``p.then(q)`` traverses p first.
    """

    complex: ConfigComplex = field(compare=False, repr=False)
    start: object
    darts: tuple = ()

    def __post_init__(self):
        cx = self.complex
        if not cx.has_vertex(self.start):
            raise InvalidParameterError(f"unknown start vertex {self.start!r}")
        at = self.start
        for d in self.darts:
            if cx.dart_tail(d) != at:
                raise InvalidParameterError(
                    f"darts do not chain: {d!r} starts at {cx.dart_tail(d)!r}, expected {at!r}")
            at = cx.dart_head(d)

    @property
    def end(self):
        return self.complex.dart_head(self.darts[-1]) if self.darts else self.start

    def then(self, other: "PathWord") -> "PathWord":
        if other.start != self.end:
            raise InvalidParameterError("paths do not compose: endpoint mismatch")
        return PathWord(self.complex, self.start, self.darts + other.darts)

    def reverse(self) -> "PathWord":
        return PathWord(self.complex, self.end,
                        tuple(d.reverse() for d in reversed(self.darts)))

    def is_closed(self) -> bool:
        return self.end == self.start

    def reduced(self) -> "PathWord":
        """Cancel immediate backtracks (d followed by its reverse)."""
        out = []
        for d in self.darts:
            if out and out[-1] == d.reverse():
                out.pop()
            else:
                out.append(d)
        return PathWord(self.complex, self.start, tuple(out))

    def __len__(self):
        return len(self.darts)

    def __repr__(self):
        word = " ".join(repr(d) for d in self.darts) or "1"
        return f"PathWord({self.start!r}: {word})"


@dataclass(frozen=True)
class Pi1Presentation:
    """Spanning-tree presentation of the fundamental group.

    ``chords`` (non-tree edge ids) are the generators; ``relators`` are the
    face boundaries rewritten as chord words.  ``chord_images`` maps each
    chord to a backend element, allowing the backend to be a simplified or
    quotient group; tree edges always map to the identity.
    """

    complex: ConfigComplex = field(compare=False, repr=False)
    base: object
    parent: Mapping = field(compare=False, repr=False)  # vertex -> Dart from parent
    bfs_order: tuple
    chords: tuple
    relators: tuple
    backend: GroupBackend | None = None
    chord_images: Mapping | None = field(default=None, compare=False)

    @property
    def betti(self) -> int:
        return len(self.chords)

    def describe(self) -> dict:
        return {
            "base": str(self.base),
            "generators": list(self.chords),
            "relators": [list(r) for r in self.relators],
            "betti": self.betti,
            "backend": self.backend.describe() if self.backend else None,
        }


def spanning_tree(cx: ConfigComplex, base=None) -> Pi1Presentation:
    """Breadth-first spanning tree with lexicographic tie-breaking.

    The returned presentation has no backend attached; see guess_backend /
    attach_backend.
    """
    if base is None:
        base = cx.vertices[0]
    if not cx.has_vertex(base):
        raise InvalidParameterError(f"unknown base vertex {base!r}")
    parent = {base: None}
    order = [base]
    tree_edges = set()
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for d in cx.darts_at(v):
            h = cx.dart_head(d)
            if h not in parent:
                parent[h] = d
                tree_edges.add(d.edge)
                order.append(h)
                queue.append(h)
    # connectivity is a ConfigComplex invariant, so every vertex is reached
    chords = tuple(e for e in cx.edge_ids if e not in tree_edges)
    pres = Pi1Presentation(cx, base, parent, tuple(order), chords, relators=())
    relators = []
    for fid in cx.face_ids:
        word = cx.face_word(fid)
        start = cx.dart_tail(word[0])
        rel = loop_word(pres, PathWord(cx, start, word))
        if rel:
            relators.append(rel)
    return Pi1Presentation(cx, base, parent, tuple(order), chords, tuple(relators))


def base_path(pres: Pi1Presentation, v) -> PathWord:
    """The canonical tree path from the base point to v."""
    if v not in pres.parent:
        raise InvalidParameterError(f"unknown vertex {v!r}")
    darts = []
    while v != pres.base:
        d = pres.parent[v]
        darts.append(d)
        v = pres.complex.dart_tail(d)
    return PathWord(pres.complex, pres.base, tuple(reversed(darts)))


def dart_class(pres: Pi1Presentation, dart: Dart):
    """Group element of the based loop obtained by closing a single dart
    through the tree: identity for tree darts, a generator image for chords."""
    backend = _require_backend(pres)
    if dart.edge not in set(pres.chords):
        return backend.identity()
    image = (pres.chord_images or {}).get(dart.edge)
    if image is None:
        image = backend.generator(dart.edge)
    return image if dart.sign > 0 else backend.inverse(image)


def loop_class(pres: Pi1Presentation, path: PathWord):
    """Group element of a path closed through the tree.

    Multiplicative under path composition: the class of p.then(q) equals
    compose(class(q), class(p)) -- later path segments act later.
    """
    backend = _require_backend(pres)
    acc = backend.identity()
    for d in path.darts:
        acc = backend.compose(dart_class(pres, d), acc)
    return acc


def loop_word(pres: Pi1Presentation, path: PathWord) -> Word:
    """Freely reduced chord word of a path (backend-independent)."""
    chords = set(pres.chords)
    acc: Word = ()
    for d in path.darts:
        if d.edge in chords:
            acc = word_mul(((d.edge, d.sign),), acc)
    return acc


def based_loop_from_word(pres: Pi1Presentation, word: Word) -> PathWord:
    """Realize a chord word as an actual based loop on the complex."""
    cx = pres.complex
    chord_set = set(pres.chords)
    loop = PathWord(cx, pres.base)
    # the rightmost letter of the word acts first, so traverse reversed
    for g, e in reversed(normalize_word(word)):
        if g not in chord_set:
            raise InvalidParameterError(f"unknown chord generator {g!r}")
        u, v = cx.edge_ends(g)
        fwd = base_path(pres, u).then(PathWord(cx, u, (Dart(g, 1),))).then(
            base_path(pres, v).reverse())
        step = fwd if e > 0 else fwd.reverse()
        for _ in range(abs(e)):
            loop = loop.then(step)
    return loop


def _require_backend(pres: Pi1Presentation) -> GroupBackend:
    if pres.backend is None:
        raise BackendUnavailableError(
            "presentation has no group backend attached; call guess_backend or attach_backend")
    return pres.backend


def attach_backend(pres: Pi1Presentation, backend: GroupBackend,
                   chord_images: Mapping | None = None) -> Pi1Presentation:
    """Attach a backend, checking that every relator maps to the identity."""
    out = Pi1Presentation(pres.complex, pres.base, pres.parent, pres.bfs_order,
                          pres.chords, pres.relators, backend, chord_images)
    for rel in pres.relators:
        acc = backend.identity()
        for g, e in rel:
            acc = backend.compose(acc, backend.power(dart_class(out, Dart(g, 1)), e))
        if not backend.is_identity(acc):
            raise BackendUnavailableError(
                f"relator {rel!r} does not hold in backend {backend.describe()}")
    return out


def guess_backend(pres: Pi1Presentation, order_bound: int = 2000) -> Pi1Presentation:
    """Attach the most specific supported backend.

    Pipeline: Tietze simplification; free group if no relators survive;
    cyclic for one generator with power relators; free-abelian when the
    relators are exactly commutators; otherwise bounded coset enumeration.
    Raises BackendUnavailableError when nothing applies.
    """
    simp = simplify_presentation(pres.chords, pres.relators)
    images_free = {g: simp.images[g] for g in pres.chords}

    if not simp.relators:
        backend = FreeGroup(simp.generators)
        images = {g: backend.from_word(w) for g, w in images_free.items()}
        return attach_backend(pres, backend, images)

    if len(simp.generators) == 1 and all(len(r) == 1 for r in simp.relators):
        g0 = simp.generators[0]
        n = 0
        for r in simp.relators:
            n = _gcd(n, abs(r[0][1]))
        if n > 0:
            backend = CyclicGroup(n, g0)
            images = {g: backend.from_word(w) for g, w in images_free.items()}
            return attach_backend(pres, backend, images)

    if _relators_are_commutators(simp.generators, simp.relators):
        backend = FreeAbelianGroup(simp.generators)
        images = {g: backend.from_word(w) for g, w in images_free.items()}
        return attach_backend(pres, backend, images)

    try:
        backend = FiniteTableGroup.from_presentation(simp.generators, simp.relators,
                                                     order_bound=order_bound)
    except PossiblyInfiniteGroupError as exc:
        raise BackendUnavailableError(
            f"no supported backend for presentation "
            f"<{','.join(simp.generators)} | {len(simp.relators)} relators>: {exc}") from exc
    images = {g: backend.from_word(w) for g, w in images_free.items()}
    return attach_backend(pres, backend, images)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _relators_are_commutators(generators, relators) -> bool:
    """True when every relator is a commutator of two generators and every
    generator pair is covered (the free-abelian presentation)."""
    pairs_needed = {(a, b) for i, a in enumerate(generators) for b in generators[i + 1:]}
    if not pairs_needed:
        return False
    covered = set()
    for rel in relators:
        if len(rel) != 4 or any(abs(e) != 1 for _, e in rel):
            return False
        g0, g1, g2, g3 = (g for g, _ in rel)
        e0, e1, e2, e3 = (e for _, e in rel)
        if not (g0 == g2 and g1 == g3 and g0 != g1 and e0 == -e2 and e1 == -e3):
            return False
        covered.add(tuple(sorted((g0, g1))))
    return covered == pairs_needed


def is_simply_connected(cx: ConfigComplex) -> bool:
    """Trivial fundamental group, decided by simplification plus a bounded
    coset enumeration fallback."""
    pres = spanning_tree(cx)
    if not pres.chords:
        return True
    simp = simplify_presentation(pres.chords, pres.relators)
    if not simp.generators:
        return True
    if not simp.relators:
        return False
    try:
        group = FiniteTableGroup.from_presentation(simp.generators, simp.relators,
                                                   order_bound=256)
    except PossiblyInfiniteGroupError:
        return False
    return group.order == 1


def reduce_word(backend: GroupBackend, word) -> object:
    """Reduce a word (or text over the backend generators) to its normal form."""
    from .groups import parse_word

    if isinstance(word, str):
        word = parse_word(word, backend.generators)
    return backend.from_word(normalize_word(word))


def finite_backend_from_presentation(generators: Sequence[str], relators,
                                     order_bound: int = 2000) -> FiniteTableGroup:
    """Multiplication-table backend for a finite presentation.

    ``relators`` may be words or text; raises PossiblyInfiniteGroupError past
    the bound.
    """
    from .groups import parse_word

    words = [parse_word(r, generators) if isinstance(r, str) else normalize_word(r)
             for r in relators]
    return FiniteTableGroup.from_presentation(generators, words, order_bound)


def presentation_homology(pres: Pi1Presentation) -> dict:
    """Abelianization invariants of the presentation (first homology)."""
    return abelianization(pres.chords, pres.relators)


def random_path(cx: ConfigComplex, rng: np.random.Generator, start=None,
                length: int | None = None, max_length: int = 12) -> PathWord:
    """Uniform random walk used by sampling-based verifiers."""
    if start is None:
        start = cx.vertices[int(rng.integers(len(cx.vertices)))]
    if length is None:
        length = int(rng.integers(max_length + 1))
    darts = []
    at = start
    for _ in range(length):
        options = cx.darts_at(at)
        d = options[int(rng.integers(len(options)))]
        darts.append(d)
        at = cx.dart_head(d)
    return PathWord(cx, start, tuple(darts))


def random_word(pres: Pi1Presentation, rng: np.random.Generator,
                max_letters: int = 6) -> Word:
    """Random unreduced chord word (may freely collapse)."""
    if not pres.chords:
        return ()
    letters = []
    n = int(rng.integers(max_letters + 1))
    for _ in range(n):
        g = pres.chords[int(rng.integers(len(pres.chords)))]
        letters.append((g, 1 if rng.integers(2) else -1))
    return normalize_word(letters)
