"""Group backends with decidable word problems.

Supported backends: free groups, free-abelian groups, cyclic groups and
finite groups presented by a multiplication table (obtained by breadth-first
coset enumeration).  Composition uses function-composition order throughout:
``compose(a, b)`` is "apply b first, then a", matching matrix products, so a
unitary representation evaluates a word by multiplying matrices in written
order.

Words are tuples of (generator, exponent) pairs read left to right in
composition order; the rightmost letter acts first.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    InvalidParameterError,
    PossiblyInfiniteGroupError,
    UnsupportedGroupError,
)

Word = tuple  # tuple[(str, int), ...] with nonzero exponents, adjacent gens distinct
GroupElement = Hashable  # backend-specific canonical normal form


# -- word utilities ----------------------------------------------------------


def normalize_word(pairs: Iterable) -> Word:
    """Merge adjacent powers of the same generator and drop zero exponents."""
    out = []
    for g, e in pairs:
        e = int(e)
        if e == 0:
            continue
        if out and out[-1][0] == g:
            merged = out[-1][1] + e
            out.pop()
            if merged:
                out.append((g, merged))
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def word_mul(a: Word, b: Word) -> Word:
    return normalize_word(tuple(a) + tuple(b))


def word_power(word: Word, n: int) -> Word:
    if n == 0:
        return ()
    base = word if n > 0 else invert_word(word)
    out = base
    for _ in range(abs(n) - 1):
        out = word_mul(out, base)
    return out


def word_length(word: Word) -> int:
    return sum(abs(e) for _, e in word)


def word_letters(word: Word):
    """Flatten to single-exponent letters, composition order."""
    for g, e in word:
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            yield (g, step)


def word_to_text(word: Word) -> str:
    if not word:
        return "1"
    parts = []
    for g, e in word:
        parts.append(g if e == 1 else f"{g}^{e}")
    return " ".join(parts)


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse a word like ``a^2 (ab)^3 B`` over the declared generators.

    Longest-match on generator names; an uppercase single letter is the
    inverse of the corresponding lowercase generator when that generator is
    declared and the uppercase name is not.  Parenthesized groups take an
    optional exponent; a bare positive integer right after an atom is an
    exponent; negative exponents need ``^``.
    """
    if text.strip() == "1":
        return ()  # identity word, the inverse of word_to_text
    gens = sorted(generators, key=len, reverse=True)
    gen_set = set(generators)
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos] in " \t":
            pos += 1

    def parse_exponent() -> int:
        nonlocal pos
        skip_ws()
        exp = None
        if pos < n and text[pos] == "^":
            pos += 1
            skip_ws()
            sign = 1
            if pos < n and text[pos] == "-":
                sign = -1
                pos += 1
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if start == pos:
                raise InvalidParameterError(f"expected exponent after '^' at {start} in {text!r}")
            exp = sign * int(text[start:pos])
        elif pos < n and text[pos].isdigit():
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            exp = int(text[start:pos])
        return 1 if exp is None else exp

    def parse_atoms(closing: str | None) -> list:
        nonlocal pos
        out = []
        while True:
            skip_ws()
            if pos >= n:
                if closing:
                    raise InvalidParameterError(f"unbalanced parentheses in {text!r}")
                return out
            ch = text[pos]
            if closing and ch == closing:
                pos += 1
                return out
            if ch == "(":
                pos += 1
                inner = parse_atoms(")")
                exp = parse_exponent()
                out.extend(word_power(normalize_word(inner), exp))
                continue
            matched = None
            for g in gens:
                if text.startswith(g, pos):
                    matched = (g, 1)
                    pos += len(g)
                    break
            if matched is None and ch.isalpha() and ch.lower() in gen_set and ch not in gen_set:
                matched = (ch.lower(), -1)
                pos += 1
            if matched is None:
                raise InvalidParameterError(
                    f"cannot parse {text!r} at position {pos} over generators {sorted(gen_set)}")
            g, sgn = matched
            exp = parse_exponent()
            out.append((g, sgn * exp))
        return out

    return normalize_word(parse_atoms(None))


# -- backend interface ---------------------------------------------------------


class GroupBackend:
    """Normal-form service for a group given by generators.

    Elements are plain hashable values whose equality decides equality in the
    group.  ``compose(a, b)`` is a ∘ b (b acts first).
    """

    tag: str = "abstract"
    generators: tuple

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def generator(self, name: str) -> GroupElement:
        return self.from_word(((name, 1),))

    def compose(self, a, b) -> GroupElement:
        raise NotImplementedError

    def inverse(self, a) -> GroupElement:
        raise NotImplementedError

    def power(self, a, n: int) -> GroupElement:
        if n < 0:
            return self.power(self.inverse(a), -n)
        out = self.identity()
        for _ in range(n):
            out = self.compose(out, a)
        return out

    def from_word(self, word: Word) -> GroupElement:
        out = self.identity()
        for g, e in word:
            if g not in self._gen_set:
                raise InvalidParameterError(f"unknown generator {g!r} for backend {self.tag}")
            out = self.compose(out, self.power(self.generator(g), e))
        return out

    def element_word(self, a) -> Word:
        """A canonical word evaluating to the element."""
        raise NotImplementedError

    def is_identity(self, a) -> bool:
        return a == self.identity()

    @property
    def order(self) -> int | None:
        """Group order, or None if infinite."""
        return None

    def elements(self):
        raise InvalidParameterError(f"backend {self.tag} is not finite")

    @property
    def _gen_set(self):
        return set(self.generators)

    def describe(self) -> dict:
        return {"type": self.tag, "generators": list(self.generators)}

    def __eq__(self, other):
        return isinstance(other, GroupBackend) and self.describe() == other.describe()

    def __hash__(self):
        return hash(self.tag) ^ hash(self.generators)


class FreeGroup(GroupBackend):
    tag = "free"

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise InvalidParameterError("duplicate generator names")

    def identity(self):
        return ()

    def compose(self, a, b):
        return word_mul(a, b)

    def inverse(self, a):
        return invert_word(a)

    def power(self, a, n):
        return word_power(a, n)

    def from_word(self, word):
        word = normalize_word(word)
        for g, _ in word:
            if g not in self._gen_set:
                raise InvalidParameterError(f"unknown generator {g!r} for free group")
        return word

    def element_word(self, a):
        return a

    @property
    def rank(self):
        return len(self.generators)

    @property
    def order(self):
        return 1 if not self.generators else None

    def elements(self):
        if self.order == 1:
            return [()]
        return super().elements()

    def describe(self):
        return {"type": self.tag, "generators": list(self.generators),
                "rank": self.rank}


class FreeAbelianGroup(GroupBackend):
    tag = "free-abelian"

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(sorted(generators))
        if len(set(self.generators)) != len(self.generators):
            raise InvalidParameterError("duplicate generator names")
        self._index = {g: i for i, g in enumerate(self.generators)}

    def identity(self):
        return (0,) * len(self.generators)

    def generator(self, name):
        if name not in self._index:
            raise InvalidParameterError(f"unknown generator {name!r}")
        vec = [0] * len(self.generators)
        vec[self._index[name]] = 1
        return tuple(vec)

    def compose(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a):
        return tuple(-x for x in a)

    def power(self, a, n):
        return tuple(n * x for x in a)

    def element_word(self, a):
        return tuple((g, e) for g, e in zip(self.generators, a) if e)

    @property
    def rank(self):
        return len(self.generators)

    @property
    def order(self):
        return 1 if not self.generators else None

    def describe(self):
        return {"type": self.tag, "generators": list(self.generators),
                "rank": self.rank}


class CyclicGroup(GroupBackend):
    tag = "cyclic"

    def __init__(self, n: int, generator: str = "a"):
        if n < 1:
            raise InvalidParameterError("cyclic order must be >= 1")
        self.n = n
        self.generators = (generator,)

    def identity(self):
        return 0

    def generator(self, name):
        if name != self.generators[0]:
            raise InvalidParameterError(f"unknown generator {name!r}")
        return 1 % self.n

    def compose(self, a, b):
        return (a + b) % self.n

    def inverse(self, a):
        return (-a) % self.n

    def power(self, a, n):
        return (a * n) % self.n

    def element_word(self, a):
        return ((self.generators[0], a),) if a else ()

    @property
    def order(self):
        return self.n

    def elements(self):
        return list(range(self.n))

    def describe(self):
        return {"type": self.tag, "generators": list(self.generators), "n": self.n}


class FiniteTableGroup(GroupBackend):
    """Finite group as an index set with a multiplication table.

    ``table[i, j]`` stores i ∘ j in function-composition order (j acts
    first), matching ``compose``.
    """

    tag = "finite"

    def __init__(self, generators: Sequence[str], table: np.ndarray,
                 words: Sequence[Word], gen_elems: Sequence[int]):
        self.generators = tuple(generators)
        self._table = np.asarray(table, dtype=np.int64)
        n = self._table.shape[0]
        if self._table.shape != (n, n):
            raise InvalidParameterError("multiplication table must be square")
        self._words = tuple(words)
        self._gen_elems = {g: e for g, e in zip(self.generators, gen_elems)}
        inv = np.full(n, -1, dtype=np.int64)
        for i in range(n):
            js = np.nonzero(self._table[i] == 0)[0]
            if len(js) != 1:
                raise InvalidParameterError("table has no unique inverse; not a group table")
            inv[i] = js[0]
        self._inv = inv

    @classmethod
    def from_presentation(cls, generators: Sequence[str], relators: Sequence[Word],
                          order_bound: int = 2000) -> "FiniteTableGroup":
        """Enumerate the group of a finite presentation into a table.

        Raises PossiblyInfiniteGroupError when enumeration exceeds the bound.
        """
        return _enumerate_presentation(cls, tuple(generators),
                                       [normalize_word(r) for r in relators],
                                       order_bound)

    def identity(self):
        return 0

    def generator(self, name):
        try:
            return self._gen_elems[name]
        except KeyError:
            raise InvalidParameterError(f"unknown generator {name!r}") from None

    def compose(self, a, b):
        return int(self._table[a, b])

    def inverse(self, a):
        return int(self._inv[a])

    def element_word(self, a):
        return self._words[a]

    @property
    def order(self):
        return self._table.shape[0]

    def elements(self):
        return list(range(self.order))

    def element_order(self, a) -> int:
        k, x = 1, a
        while x != 0:
            x = self.compose(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._table, self._table.T))

    def conjugacy_classes(self) -> tuple:
        """Classes as sorted tuples of element indices, ordered by min element."""
        seen = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            orbit = set()
            for x in range(self.order):
                orbit.add(self.compose(self.compose(x, g), self.inverse(x)))
            seen |= orbit
            classes.append(tuple(sorted(orbit)))
        return tuple(sorted(classes, key=lambda c: c[0]))

    def describe(self):
        return {"type": self.tag, "generators": list(self.generators),
                "order": self.order}


# -- coset enumeration ---------------------------------------------------------


def _enumerate_presentation(cls, generators, relators, order_bound):
    ngens = len(generators)
    if ngens == 0:
        table = np.zeros((1, 1), dtype=np.int64)
        return cls(generators, table, [()], [])
    # letters: 2g forward, 2g+1 inverse
    letter_of = {}
    for i, g in enumerate(generators):
        letter_of[(g, 1)] = 2 * i
        letter_of[(g, -1)] = 2 * i + 1
    rel_letters = []
    for rel in relators:
        rel_letters.append([letter_of[l] for l in word_letters(rel)])
        for g, _ in rel:
            if g not in set(generators):
                raise InvalidParameterError(f"relator uses unknown generator {g!r}")
    nletters = 2 * ngens
    limit = max(64, 12 * order_bound)

    labels = []          # union-find over coset ids
    neighbors = []       # per coset: letter -> coset (or -1)

    def find(c):
        root = c
        while labels[root] != root:
            root = labels[root]
        while labels[c] != root:
            labels[c], c = root, labels[c]
        return root

    def new_coset():
        if len(labels) >= limit:
            raise PossiblyInfiniteGroupError(
                f"coset enumeration exceeded bound (order_bound={order_bound}); "
                "the group may be infinite or larger than the bound")
        idx = len(labels)
        labels.append(idx)
        neighbors.append([-1] * nletters)
        return idx

    pending = []

    def join(c, letter, d):
        """Install arrow c -letter-> d (and the inverse arrow), queueing
        coincidences on conflict."""
        c, d = find(c), find(d)
        for a, l, b in ((c, letter, d), (d, letter ^ 1, c)):
            cur = neighbors[a][l]
            if cur < 0:
                neighbors[a][l] = b
            else:
                cur = find(cur)
                if cur != b:
                    pending.append((cur, b))

    def merge(a, b):
        a, b = find(a), find(b)
        if a == b:
            return
        a, b = min(a, b), max(a, b)
        labels[b] = a
        for l in range(nletters):
            nb = neighbors[b][l]
            if nb >= 0:
                join(a, l, nb)

    def process_pending():
        while pending:
            merge(*pending.pop())

    def scan(c, rel):
        """Walk the relator from c, defining cosets as needed; the walk must
        return to c."""
        cur = find(c)
        for l in rel[:-1]:
            cur = find(cur)
            nxt = neighbors[cur][l]
            if nxt < 0:
                nxt = new_coset()
                join(cur, l, nxt)
            cur = find(neighbors[find(cur)][l])
        last = rel[-1]
        cur = find(cur)
        tgt = neighbors[cur][last]
        if tgt < 0:
            join(cur, last, find(c))
        else:
            pending.append((find(tgt), find(c)))
        process_pending()

    new_coset()
    visited = 0
    while visited < len(labels):
        c = visited
        visited += 1
        if find(c) != c:
            continue
        for rel in rel_letters:
            if rel:
                scan(c, rel)
        if find(c) != c:
            continue
        for l in range(nletters):
            if neighbors[find(c)][l] < 0:
                join(find(c), l, new_coset())
                process_pending()

    # fixpoint safety: rescan everything until no further collapse
    while True:
        before = sum(1 for i in range(len(labels)) if find(i) == i)
        for c in range(len(labels)):
            if find(c) != c:
                continue
            for rel in rel_letters:
                if rel:
                    scan(c, rel)
        after = sum(1 for i in range(len(labels)) if find(i) == i)
        if after == before:
            break

    live = [c for c in range(len(labels)) if find(c) == c]
    if len(live) > order_bound:
        raise PossiblyInfiniteGroupError(
            f"enumerated {len(live)} elements, above order_bound={order_bound}")

    # canonical BFS relabeling from the identity; letters in fixed order
    order_map = {}
    words = []
    queue = [find(0)]
    order_map[find(0)] = 0
    words.append(())
    while queue:
        c = queue.pop(0)
        for l in range(nletters):
            d = find(neighbors[c][l])
            if d not in order_map:
                order_map[d] = len(order_map)
                g, sgn = divmod(l, 2)
                letter = (generators[g], 1 if sgn == 0 else -1)
                # appending a letter on the right of a composition word
                words.append(word_mul(words[order_map[c]], (letter,)))
                queue.append(d)
    n = len(order_map)
    if n != len(live):
        raise PossiblyInfiniteGroupError("coset graph did not close; enumeration failed")

    act = np.zeros((n, nletters), dtype=np.int64)
    for c in live:
        for l in range(nletters):
            act[order_map[c], l] = order_map[find(neighbors[c][l])]

    def trace(state, word):
        for letter in word_letters(word):
            state = act[state, letter_of[letter]]
        return state

    table = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        wj = words[j]
        for i in range(n):
            table[i, j] = trace(i, wj)  # "i then j"
    gen_elems = [int(act[0, 2 * i]) for i in range(ngens)]
    group = cls(generators, table, words, gen_elems)
    for rel in relators:
        if not group.is_identity(group.from_word(rel)):
            raise PossiblyInfiniteGroupError("relator fails on enumerated table")
    return group


# -- presentation simplification (Tietze generator elimination) ---------------


@dataclass(frozen=True)
class SimplifiedPresentation:
    generators: tuple
    relators: tuple
    images: dict = field(compare=False)  # original generator -> word over survivors


def _cyclic_reduce(word: Word) -> Word:
    word = normalize_word(word)
    while len(word) > 1 and word[0][0] == word[-1][0]:
        g = word[0][0]
        e = word[0][1] + word[-1][1]
        middle = word[1:-1]
        word = normalize_word(((g, e),) + middle) if e else normalize_word(middle)
        if not middle and not e:
            return ()
    return word


def _canonical_cyclic(word: Word) -> Word:
    """Least rotation of the word or its inverse; used only for deduping."""
    letters = list(word_letters(word))
    if not letters:
        return ()
    best = None
    for cand in (letters, list(word_letters(invert_word(word)))):
        for k in range(len(cand)):
            rot = normalize_word(cand[k:] + cand[:k])
            if best is None or (word_length(rot), rot) < (word_length(best), best):
                best = rot
    return best


def _substitute(word: Word, gen: str, image: Word) -> Word:
    out = []
    for g, e in word:
        if g == gen:
            out.extend(word_power(image, e))
        else:
            out.append((g, e))
    return normalize_word(out)


def simplify_presentation(generators: Sequence[str], relators: Sequence[Word]) -> SimplifiedPresentation:
    """Iteratively eliminate generators that occur exactly once in a relator.

    Returns surviving generators, remaining relators, and for every original
    generator its image as a word over the survivors.  Grid-like complexes
    (every relator short, each introducing a fresh chord) simplify completely.
    """
    gens = list(generators)
    images = {g: ((g, 1),) for g in gens}
    rels = [_cyclic_reduce(r) for r in relators]

    def tidy():
        nonlocal rels
        seen = {}
        for r in rels:
            r = _cyclic_reduce(r)
            if not r:
                continue
            seen.setdefault(_canonical_cyclic(r), r)
        rels = sorted(seen.values(), key=lambda w: (word_length(w), w))

    tidy()
    while True:
        candidate = None
        for ri, rel in enumerate(rels):
            counts = {}
            for g, e in rel:
                counts[g] = counts.get(g, 0) + abs(e)
            once = sorted(g for g, c in counts.items() if c == 1)
            if once:
                candidate = (ri, once[0])
                break
        if candidate is None:
            break
        ri, gen = candidate
        rel = rels.pop(ri)
        # split rel = u . gen^eps . v  (composition order), so gen^eps = u^-1 v^-1
        letters = list(word_letters(rel))
        k = next(i for i, (g, _) in enumerate(letters) if g == gen)
        eps = letters[k][1]
        u = normalize_word(letters[:k])
        v = normalize_word(letters[k + 1:])
        image = word_mul(invert_word(u), invert_word(v))
        if eps < 0:
            image = invert_word(image)
        gens.remove(gen)
        rels = [_substitute(r, gen, image) for r in rels]
        images = {g0: _substitute(w, gen, image) for g0, w in images.items()}
        tidy()
    return SimplifiedPresentation(tuple(sorted(gens)), tuple(rels), images)


# -- abelianization -----------------------------------------------------------


def smith_normal_form(rows: Sequence[Sequence[int]]) -> list:
    """Diagonal of the Smith normal form of an integer matrix (no transforms).

    Small exact implementation for abelianization of desk-scale presentations.
    """
    mat = [list(map(int, r)) for r in rows]
    m = len(mat)
    n = len(mat[0]) if m else 0
    diag = []
    top = 0
    while top < m and top < n:
        # find pivot with smallest nonzero magnitude
        pivot = None
        for i in range(top, m):
            for j in range(top, n):
                if mat[i][j] and (pivot is None or abs(mat[i][j]) < abs(mat[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        mat[top], mat[i0] = mat[i0], mat[top]
        for row in mat:
            row[top], row[j0] = row[j0], row[top]
        while True:
            reduced = False
            p = mat[top][top]
            for i in range(top + 1, m):
                if mat[i][top]:
                    q = mat[i][top] // p
                    for j in range(n):
                        mat[i][j] -= q * mat[top][j]
                    if mat[i][top]:
                        mat[top], mat[i] = mat[i], mat[top]
                        reduced = True
            p = mat[top][top]
            for j in range(top + 1, n):
                if mat[top][j]:
                    q = mat[top][j] // p
                    for i in range(m):
                        mat[i][j] -= q * mat[i][top]
                    if mat[top][j]:
                        for i in range(m):
                            mat[i][top], mat[i][j] = mat[i][j], mat[i][top]
                        reduced = True
            if not reduced:
                break
        diag.append(abs(mat[top][top]))
        top += 1
    return diag


def abelianization(generators: Sequence[str], relators: Sequence[Word]) -> dict:
    """Invariants of the abelianized group: free rank and torsion factors."""
    gens = list(generators)
    idx = {g: i for i, g in enumerate(gens)}
    rows = []
    for rel in relators:
        row = [0] * len(gens)
        for g, e in rel:
            row[idx[g]] += e
        rows.append(row)
    if not rows:
        return {"free_rank": len(gens), "torsion": []}
    diag = smith_normal_form(rows)
    torsion = [d for d in diag if d > 1]
    rank_used = sum(1 for d in diag if d != 0)
    return {"free_rank": len(gens) - rank_used, "torsion": sorted(torsion)}


# -- character tables ----------------------------------------------------------


@dataclass(frozen=True)
class CharacterTable:
    """Irreducible characters of a finite group, one row per irrep."""

    group: FiniteTableGroup = field(compare=False)
    classes: tuple           # tuple of tuples of element indices
    table: np.ndarray = field(compare=False)   # [n_irreps, n_classes]
    dims: tuple
    method: str

    @property
    def class_sizes(self):
        return tuple(len(c) for c in self.classes)

    def class_of(self, element: int) -> int:
        for k, cls in enumerate(self.classes):
            if element in cls:
                return k
        raise InvalidParameterError(f"element {element} not in any class")

    def character_values(self, i: int) -> np.ndarray:
        """chi_i per group element (expanded from classes)."""
        vals = np.zeros(self.group.order, dtype=complex)
        for k, cls in enumerate(self.classes):
            for g in cls:
                vals[g] = self.table[i, k]
        return vals


_S3_TABLE = np.array([
    [1, 1, 1],
    [1, -1, 1],
    [2, 0, -1],
], dtype=complex)
# class signatures (size, element order) for S3 in table column order
_S3_SIGNATURE = ((1, 1), (3, 2), (2, 3))

_S4_TABLE = np.array([
    [1, 1, 1, 1, 1],
    [1, -1, 1, 1, -1],
    [2, 0, 2, -1, 0],
    [3, 1, -1, 0, -1],
    [3, -1, -1, 0, 1],
], dtype=complex)
_S4_SIGNATURE = ((1, 1), (6, 2), (3, 2), (8, 3), (6, 4))


def character_table(group: FiniteTableGroup, seed: int = 12345) -> CharacterTable:
    """Exact tables for cyclic groups, S3 and S4; numeric class-sum
    diagonalization for other finite groups (tolerance 1e-8)."""
    classes = group.conjugacy_classes()
    sizes_orders = tuple((len(c), group.element_order(c[0])) for c in classes)

    n = group.order
    if group.is_abelian() and any(group.element_order(g) == n for g in range(n)):
        gen = min(g for g in range(n) if group.element_order(g) == n)
        expo = {}
        x, k = 0, 0
        while True:
            expo[x] = k
            k += 1
            x = group.compose(x, gen)
            if x == 0:
                break
        # classes are singletons, ordered by element index
        cols = [c[0] for c in classes]
        table = np.array([[cmath.exp(2j * math.pi * j * expo[g] / n) for g in cols]
                          for j in range(n)])
        return CharacterTable(group, classes, table, dims=(1,) * n, method="exact-cyclic")

    for sig, tab, label in ((_S3_SIGNATURE, _S3_TABLE, "exact-s3"),
                            (_S4_SIGNATURE, _S4_TABLE, "exact-s4")):
        if sorted(sizes_orders) == sorted(sig):
            # signatures are pairwise distinct for S3 and S4, so index() is safe
            perm = [sizes_orders.index(s) for s in sig]
            ordered = tuple(classes[perm[k]] for k in range(len(sig)))
            return CharacterTable(group, ordered, tab.copy(),
                                  dims=tuple(int(tab[i, 0].real) for i in range(tab.shape[0])),
                                  method=label)

    return _numeric_character_table(group, classes, seed)


def _numeric_character_table(group, classes, seed, tol=1e-8):
    r = len(classes)
    n = group.order
    class_of = np.zeros(n, dtype=int)
    for k, cls in enumerate(classes):
        for g in cls:
            class_of[g] = k
    # structure constants: K_i K_j = sum_k a[i,j,k] K_k, where a[i,j,k] counts
    # pairs (x in C_i, y in C_j) with x∘y equal to a fixed element of C_k
    a = np.zeros((r, r, r))
    for i in range(r):
        for j in range(r):
            for x in classes[i]:
                for y in classes[j]:
                    a[i, j, class_of[group.compose(x, y)]] += 1
    a /= np.array([len(c) for c in classes], dtype=float)[None, None, :]
    mats = [a[i].T for i in range(r)]  # (M_i)_{k,j} coefficients on basis K_j

    rng = np.random.default_rng(seed)
    for _ in range(8):
        combo = sum(float(c) * m for c, m in zip(rng.normal(size=r), mats))
        evals, evecs = np.linalg.eig(combo)
        if np.min(np.abs(evals[:, None] - evals[None, :]) + np.eye(r)) > 1e-6:
            break
    else:
        raise UnsupportedGroupError("could not split class algebra eigenvectors")

    rows = []
    for idx in range(r):
        v = evecs[:, idx]
        pivot = int(np.argmax(np.abs(v)))
        omegas = np.array([(m @ v)[pivot] / v[pivot] for m in mats])
        denom = np.sum(np.abs(omegas) ** 2 / np.array([len(c) for c in classes]))
        d = math.sqrt(n / denom.real)
        chi = d * omegas / np.array([len(c) for c in classes])
        rows.append((round(d), chi))
    rows.sort(key=lambda t: (t[0], tuple(np.round(t[1].real, 6)), tuple(np.round(t[1].imag, 6))))
    table = np.array([chi for _, chi in rows])
    dims = tuple(d for d, _ in rows)

    # orthogonality check: sum_k |C_k| chi_i(k) conj(chi_j(k)) = |G| delta_ij
    sizes = np.array([len(c) for c in classes], dtype=float)
    gram = (table * sizes[None, :]) @ table.conj().T / n
    if not np.allclose(gram, np.eye(r), atol=tol):
        raise UnsupportedGroupError("numeric character table failed orthogonality check")
    if sum(d * d for d in dims) != n:
        raise UnsupportedGroupError("numeric character dimensions do not square-sum to |G|")
    return CharacterTable(group, classes, table, dims=dims, method="numeric")
