"""Finitely presented groups and Todd-Coxeter coset enumeration.

The enumerator is HLT (relators are scanned and filled from every live coset
in order) with a deduction stack and a lookahead pass when the table is
full.  Coincidences are merged through a union-find forest.

Columns of the coset table are ``2*i`` for generator ``x_{i+1}`` and
``2*i + 1`` for its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceeded, CosetCapExceeded, FormatError, RelatorNotKilled
from .groups import TABLE_CAP, Group, Homomorphism, from_permutations
from .words import Word, parse_free_word

DEFAULT_MAX_COSETS = 2_000_000


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.ngens < 0:
            raise ValueError("ngens must be nonnegative")
        rels = tuple(r if isinstance(r, Word) else parse_free_word(r) for r in self.relators)
        for r in rels:
            if r.variables and r.variables[-1] > self.ngens:
                raise FormatError(f"relator {r} uses a variable beyond x{self.ngens}")
        object.__setattr__(self, "relators", rels)

    def __str__(self):
        return format_presentation(self)


def parse_presentation(text: str, label: str = "") -> Presentation:
    """Read the ``fp <ngens>`` format: one relator per following line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty presentation")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "fp" or not head[1].isdigit():
        raise FormatError(f"first line must be 'fp <ngens>', got {lines[0]!r}")
    return Presentation(int(head[1]), tuple(parse_free_word(ln) for ln in lines[1:]), label)


def format_presentation(P: Presentation) -> str:
    out = [f"fp {P.ngens}"]
    for r in P.relators:
        out.append(" ".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in r.letters) or "1")
    return "\n".join(out) + "\n"


def cayley_presentation(G: Group, cap: int = TABLE_CAP):
    """One generator per non-identity element, one relator per product.

    Returns ``(P, gen_of)`` where ``gen_of[g]`` is the generator index (1-based)
    of element ``g``; the identity has no generator.
    """
    if G.order > cap:
        raise CapExceeded(f"Cayley presentation capped at order {cap}")
    nonid = [g for g in range(G.order) if g != G.identity]
    gen_of = {g: i + 1 for i, g in enumerate(nonid)}
    rels = []
    for g in nonid:
        for h in nonid:
            k = G.mul(g, h)
            flat = [gen_of[g], gen_of[h]]
            if k != G.identity:
                flat.append(-gen_of[k])
            rels.append(Word.from_flat(flat))
    return Presentation(len(nonid), tuple(rels), label=f"Cayley({G.label})" if G.label else ""), gen_of


# ---------------------------------------------------------------------------
# coset enumeration


@dataclass
class CosetTable:
    """Result of an enumeration; ``action[c, 2i]`` is coset ``c * x_{i+1}``."""

    ncosets: int
    action: np.ndarray
    complete: bool = True
    stats: dict = field(default_factory=dict)

    def generator_permutation(self, i: int) -> tuple[int, ...]:
        """Right action of ``x_{i+1}`` as a 0-based image tuple."""
        return tuple(int(v) for v in self.action[:, 2 * i])

    def apply(self, coset: int, word: Word) -> int:
        for v in word.flat():
            coset = int(self.action[coset, 2 * (abs(v) - 1) + (v < 0)])
        return coset


def _columns(word: Word) -> list[int]:
    return [2 * (abs(v) - 1) + (v < 0) for v in word.flat()]


def _cyclic_reduce(cols: list[int]) -> list[int]:
    while len(cols) >= 2 and cols[0] == cols[-1] ^ 1:
        cols = cols[1:-1]
    return cols


class _Enumerator:
    """Mutable state of one HLT enumeration."""

    def __init__(self, ngens: int, relators: list[list[int]], max_cosets: int):
        self.ncols = 2 * ngens
        self.rels = relators
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.alive = [True]
        self.nlive = 1
        self.deductions: list[tuple[int, int]] = []
        self.deduction_cap = 4096
        self.deduction_overflow = False
        self.defined = 1
        # cyclic conjugates of relators and their inverses, grouped by first column
        self.conj: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for r in relators:
            inv = [c ^ 1 for c in reversed(r)]
            for w in (r, inv):
                for s in range(len(w)):
                    c = tuple(w[s:] + w[:s])
                    if c not in seen:
                        seen.add(c)
                        self.conj[c[0]].append(list(c))

    # -- union-find ---------------------------------------------------------
    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def _merge(self, a: int, b: int, queue: list[int]):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.alive[b] = False
        self.nlive -= 1
        queue.append(b)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        table = self.table
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for col in range(self.ncols):
                f = row[col]
                if f < 0:
                    continue
                icol = col ^ 1
                if table[f][icol] == e:
                    table[f][icol] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][col] >= 0:
                    self._merge(f1, table[e1][col], queue)
                elif table[f1][icol] >= 0:
                    self._merge(e1, table[f1][icol], queue)
                else:
                    table[e1][col] = f1
                    table[f1][icol] = e1
                    self._push(e1, col)

    # -- definitions and scanning -------------------------------------------
    def _push(self, c: int, col: int):
        if len(self.deductions) < self.deduction_cap:
            self.deductions.append((c, col))
        else:
            self.deduction_overflow = True

    def define(self, c: int, col: int) -> bool:
        if self.nlive >= self.max_cosets:
            return False
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.alive.append(True)
        self.nlive += 1
        self.defined += 1
        self.table[c][col] = d
        self.table[d][col ^ 1] = c
        self._push(c, col)
        return True

    def scan(self, c: int, word: list[int], fill: bool) -> bool:
        """Scan ``word`` from coset ``c``; with ``fill`` define cosets as needed.

        Returns False only if a needed definition was refused by the cap.
        """
        table = self.table
        n = len(word)
        while True:
            f, i = c, 0
            while i < n:
                nxt = table[f][word[i]]
                if nxt < 0:
                    break
                f, i = nxt, i + 1
            if i == n:
                if f != c:
                    self.coincidence(f, c)
                return True
            b, j = c, n - 1
            while j >= i:
                nxt = table[b][word[j] ^ 1]
                if nxt < 0:
                    break
                b, j = nxt, j - 1
            if j < i:
                self.coincidence(f, b)
                return True
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                self._push(f, word[i])
                return True
            if not fill:
                return True
            if not self.define(f, word[i]):
                return False
            # continue scanning from the top with the new definition in place

    def process_deductions(self):
        while self.deductions:
            c, col = self.deductions.pop()
            if not self.alive[c]:
                continue
            for w in self.conj[col]:
                if not self.alive[c]:
                    break
                self.scan(c, w, fill=False)
        if self.deduction_overflow:
            self.deduction_overflow = False
            self.lookahead()

    def lookahead(self):
        c = 0
        while c < len(self.table):
            if self.alive[c]:
                for w in self.rels:
                    if not self.alive[c]:
                        break
                    self.scan(c, w, fill=False)
            c += 1
        self.deductions.clear()


def todd_coxeter(P: Presentation, subgroup_words: Sequence[Word] = (),
                 max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of ``<subgroup_words>`` in the group presented by ``P``."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    rels = [_cyclic_reduce(_columns(r)) for r in P.relators]
    rels = sorted({tuple(r) for r in rels if r}, key=lambda r: (len(r), r))
    rels = [list(r) for r in rels]
    en = _Enumerator(P.ngens, rels, max_cosets)
    lookaheads = 0
    for w in subgroup_words:
        cols = _columns(w if isinstance(w, Word) else parse_free_word(w))
        if cols and not en.scan(0, cols, fill=True):
            raise CosetCapExceeded(f"coset cap {max_cosets} reached while scanning subgroup generators")
    en.process_deductions()
    c = 0
    while c < len(en.table):
        if en.alive[c]:
            for w in rels:
                if not en.alive[c]:
                    break
                while not en.scan(c, w, fill=True):
                    lookaheads += 1
                    before = en.nlive
                    en.lookahead()
                    if en.nlive >= before:
                        raise CosetCapExceeded(
                            f"coset cap {max_cosets} reached with {en.nlive} live cosets"
                            " (not a proof of infinite index)")
                    if not en.alive[c]:
                        break
                en.process_deductions()
            if en.alive[c]:
                row = en.table[c]
                for col in range(en.ncols):
                    if row[col] < 0:
                        while not en.define(c, col):
                            lookaheads += 1
                            before = en.nlive
                            en.lookahead()
                            if en.nlive >= before:
                                raise CosetCapExceeded(
                                    f"coset cap {max_cosets} reached with {en.nlive} live cosets"
                                    " (not a proof of infinite index)")
                            if not en.alive[c] or row[col] >= 0:
                                break
                        if not en.alive[c]:
                            break
                en.process_deductions()
        c += 1
    # compact: live cosets in order of definition, coset 0 first
    live = [i for i in range(len(en.table)) if en.alive[i]]
    newidx = {old: k for k, old in enumerate(live)}
    action = np.empty((len(live), en.ncols), dtype=np.int64)
    for k, old in enumerate(live):
        action[k] = [newidx[en.rep(x)] for x in en.table[old]]
    return CosetTable(len(live), action, True,
                      stats={"defined": en.defined, "lookaheads": lookaheads})


def image_group(T: CosetTable, P: Presentation, cap: int = TABLE_CAP):
    """The permutation group generated by the coset action, with generator images.

    Returns ``(G, gen_images)``; ``gen_images[i]`` is the element for ``x_{i+1}``.
    """
    perms = [T.generator_permutation(i) for i in range(P.ngens)]
    G = from_permutations(T.ncosets, perms, label=P.label, table_cap=cap)
    index = {p: i for i, p in enumerate(G.permutations)}
    return G, [index[p] for p in perms]


def hom_from_presentation(P: Presentation, G: Group, gen_images: Sequence[int],
                          max_cosets: int = DEFAULT_MAX_COSETS) -> Homomorphism:
    """The map from the group presented by ``P`` to ``G`` sending ``x_i`` to ``gen_images[i-1]``.

    Raises RelatorNotKilled if some relator does not evaluate to the identity.
    """
    gen_images = [int(g) for g in gen_images]
    if len(gen_images) != P.ngens:
        raise ValueError(f"expected {P.ngens} generator images, got {len(gen_images)}")
    for r in P.relators:
        if r.evaluate(G, gen_images) != G.identity:
            raise RelatorNotKilled(str(r))
    H, hgens = image_group(todd_coxeter(P, (), max_cosets=max_cosets), P)
    parent, via, order = H.word(hgens)
    image = np.full(H.order, -1, dtype=np.int64)
    image[H.identity] = G.identity
    for x in order[1:]:
        image[x] = G.mul(int(image[parent[x]]), gen_images[via[x]])
    return Homomorphism(H, G, image, check=True)
