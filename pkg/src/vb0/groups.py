"""Finite groups as materialized multiplication tables.

Elements are the dense indices ``0..n-1``.  Every construction path ends in a
validated :class:`Group`; subgroups are sorted index tuples tied to a parent.
Commutators and conjugates follow ``[x, y] = x^-1 y^-1 x y`` and
``x^y = y^-1 x y``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    ClosureCapExceeded,
    FormatError,
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotHomomorphism,
    NotNormal,
)

TABLE_CAP = 256
CLOSURE_CAP = 10**6
ENUMERATION_CAP = 64


class Group:
    """A finite group given by its multiplication table.

    Use :func:`from_mul_table` or :func:`from_permutations` rather than calling
    the constructor with ``validate=False`` unless the table is known good.
    """

    def __init__(self, table, label: str = "", validate: bool = True):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise FormatError(f"multiplication table must be a nonempty square grid, got shape {table.shape}")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise FormatError("table entries must lie in 0..n-1")
        if validate:
            identity, inv = _validate_table(table)
        else:
            identity = int(np.flatnonzero(table.diagonal() == np.arange(n))[0])
            inv = np.argmax(table == identity, axis=1)
        table.setflags(write=False)
        inv = np.asarray(inv, dtype=np.int64)
        inv.setflags(write=False)
        self.table = table
        self.order = n
        self.identity = int(identity)
        self.inv = inv
        self.label = label

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return f"<Group{name} of order {self.order}>"

    def __len__(self):
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def comm(self, a: int, b: int) -> int:
        return int(self.comm_table[a, b])

    def conj(self, a: int, b: int) -> int:
        """``a^b = b^-1 a b``."""
        t = self.table
        return int(t[t[self.inv[b], a], b])

    def product(self, elems: Iterable[int]) -> int:
        acc = self.identity
        for e in elems:
            acc = int(self.table[acc, e])
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        acc = self.identity
        for _ in range(k):
            acc = int(self.table[acc, a])
        return acc

    @cached_property
    def comm_table(self) -> np.ndarray:
        t, inv = self.table, self.inv
        # [x, y] = (x^-1 y^-1)(x y)
        left = t[inv[:, None], inv[None, :]]
        out = t[left, t]
        out.setflags(write=False)
        return out

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[a, b] = a^b``."""
        t, inv = self.table, self.inv
        out = t[t[inv[None, :], np.arange(self.order)[:, None]], np.arange(self.order)[None, :]]
        out.setflags(write=False)
        return out

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for x in range(self.order):
            k, acc = 1, x
            while acc != self.identity:
                acc = int(self.table[acc, x])
                k += 1
            orders[x] = k
        return orders

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    @property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for x in range(self.order):
            if not seen[x]:
                cls = np.unique(self.conj_table[x])
                seen[cls] = True
                classes.append(tuple(int(c) for c in cls))
        return classes

    def word(self, gens: Sequence[int]):
        """Shortest expressions of every element as a product of ``gens``.

        Returns ``parent, via`` arrays: element ``x = parent[x] * gens[via[x]]``
        (right multiplication BFS from the identity), ``via = -1`` at the root
        and on unreachable elements.
        """
        parent = np.full(self.order, -1, dtype=np.int64)
        via = np.full(self.order, -1, dtype=np.int64)
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        queue = [self.identity]
        order = [self.identity]
        for x in queue:
            for i, g in enumerate(gens):
                y = int(self.table[x, g])
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    via[y] = i
                    queue.append(y)
                    order.append(y)
        return parent, via, order


def _validate_table(table: np.ndarray):
    n = table.shape[0]
    # associativity, chunked over the first argument
    chunk = max(1, 4_000_000 // (n * n))
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        lhs = table[table[a][:, :, None], np.arange(n)[None, None, :]]
        rhs = table[a[:, None, None], table[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, k = bad[0]
            raise NonAssociative((int(a[i]), int(j), int(k)))
    idem = np.flatnonzero(table.diagonal() == np.arange(n))
    if len(idem) == 0:
        raise NoIdentity()
    e = int(idem[0])
    full = np.arange(n)
    # the candidate identity is checked last so that a witness names a genuine non-unit
    for x in [y for y in range(n) if y != e] + [e]:
        row_ok = np.array_equal(np.sort(table[x]), full)
        col_ok = np.array_equal(np.sort(table[:, x]), full)
        if not (row_ok and col_ok):
            raise NoInverse(x)
    bad = np.flatnonzero((table[e] != full) | (table[:, e] != full))
    if len(bad):
        raise NoIdentity(int(bad[0]))
    inv = np.argmax(table == e, axis=1)
    return e, inv


def from_mul_table(table, label: str = "") -> Group:
    """Validate an ``n x n`` index grid and wrap it as a :class:`Group`."""
    grid = [list(row) for row in table]
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise FormatError("multiplication table must be a nonempty n x n grid")
    return Group(np.array(grid, dtype=np.int64), label=label)


# ---------------------------------------------------------------------------
# permutations

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int) -> tuple[int, ...]:
    """Parse 1-based cycle notation such as ``(1 2)(3 4)``; ``()`` is the identity.

    Returns the 0-based image tuple ``p`` with ``p[i]`` the image of point ``i``.
    """
    text = text.strip()
    if not text or _CYCLE_RE.sub("", text).strip():
        raise FormatError(f"not a permutation in cycle notation: {text!r}")
    image = list(range(degree))
    touched = set()
    for body in _CYCLE_RE.findall(text):
        pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if any(p < 1 or p > degree for p in pts):
            raise FormatError(f"point out of range 1..{degree} in {text!r}")
        if len(set(pts)) != len(pts) or touched & set(pts):
            raise FormatError(f"repeated point in {text!r}")
        touched.update(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            image[a - 1] = b - 1
    return tuple(image)


def format_permutation(perm: Sequence[int]) -> str:
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        cycles.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(cycles) or "()"


def permutation_closure(degree: int, generators: Sequence[Sequence[int]], cap: int = CLOSURE_CAP):
    """All products of ``generators`` (0-based image tuples), identity first."""
    ident = tuple(range(degree))
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != degree or sorted(g) != list(ident):
            raise FormatError(f"generator {g} is not a permutation of {degree} points")
    elems = [ident]
    index = {ident: 0}
    for p in elems:
        for g in gens:
            # apply p first, then g
            q = tuple(g[i] for i in p)
            if q not in index:
                if len(elems) >= cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} elements")
                index[q] = len(elems)
                elems.append(q)
    return elems


def from_permutations(degree: int, generators, label: str = "", cap: int = CLOSURE_CAP,
                      table_cap: int = TABLE_CAP) -> Group:
    """The permutation group generated by ``generators``.

    Generators are cycle-notation strings or 0-based image sequences.  The
    product ``xy`` applies ``x`` first.
    """
    gens = [parse_permutation(g, degree) if isinstance(g, str) else tuple(g) for g in generators]
    elems = permutation_closure(degree, gens, cap=cap)
    if len(elems) > table_cap:
        raise CapExceeded(f"group of order {len(elems)} exceeds the table cap {table_cap}")
    group = Group(_perm_table(elems), label=label, validate=False)
    group.permutations = elems
    group.perm_generators = gens
    return group


def _perm_table(elems) -> np.ndarray:
    perms = np.array(elems, dtype=np.int64)
    n = len(elems)
    lookup = {p.tobytes(): i for i, p in enumerate(perms)}
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        # row a: (a then b) = perms[b][perms[a]]
        prods = perms[:, perms[a]]
        table[a] = [lookup[row.tobytes()] for row in prods]
    return table


# ---------------------------------------------------------------------------
# subgroups and homomorphisms


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(int(e) for e in set(self.elements))))

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.elements == self.elements)

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    def __contains__(self, x) -> bool:
        return int(x) in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def is_trivial(self) -> bool:
        return self.order == 1

    def as_group(self, label: str = ""):
        """Re-index as a standalone group; returns ``(H, inclusion)``."""
        elems = self.elements
        pos = {e: i for i, e in enumerate(elems)}
        sub = self.parent.table[np.ix_(elems, elems)]
        table = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if elems else sub
        H = Group(table, label=label or f"subgroup of {self.parent.label}", validate=False)
        return H, Homomorphism(H, self.parent, elems, check=False)


class Homomorphism:
    """A group homomorphism stored as a per-element image array."""

    def __init__(self, source: Group, target: Group, image, check: bool = True):
        image = np.asarray(image, dtype=np.int64)
        if image.shape != (source.order,):
            raise NotHomomorphism("image must list one target element per source element")
        self.source = source
        self.target = target
        self.image = image
        if check:
            lhs = image[source.table]
            rhs = target.table[image[:, None], image[None, :]]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                a, b = bad[0]
                raise NotHomomorphism(f"image of {a}*{b} differs from product of images")

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __repr__(self):
        return f"<Homomorphism {self.source!r} -> {self.target!r}>"

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.image == self.target.identity))

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, np.unique(self.image))

    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.target.order

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Composite ``other o self``."""
        if other.source is not self.target:
            raise NotHomomorphism("composition of maps with mismatched groups")
        return Homomorphism(self.source, other.target, other.image[self.image], check=False)


def identity_map(G: Group) -> Homomorphism:
    return Homomorphism(G, G, np.arange(G.order), check=False)


def trivial_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, (G.identity,))


def whole(G: Group) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def is_abelian(G: Group) -> bool:
    return bool(np.array_equal(G.table, G.table.T))


def subgroup_generated(G: Group, S: Iterable[int]) -> Subgroup:
    gens = sorted({int(s) for s in S} - {G.identity})
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity] = True
    frontier = [G.identity]
    t = G.table
    while frontier:
        nxt = np.unique(t[np.array(frontier)[:, None], np.array(gens, dtype=np.int64)[None, :]]) if gens else []
        new = [int(y) for y in nxt if not seen[y]]
        seen[new] = True
        frontier = new
    return Subgroup(G, np.flatnonzero(seen))


def is_subgroup(G: Group, elems: Iterable[int]) -> bool:
    es = np.unique(np.fromiter(elems, dtype=np.int64))
    if len(es) == 0 or G.identity not in es:
        return False
    closed = np.isin(G.table[np.ix_(es, es)], es).all()
    return bool(closed and np.isin(G.inv[es], es).all())


def is_normal(G: Group, N: Subgroup) -> bool:
    conj = G.conj_table[np.array(N.elements)]
    return bool(np.isin(conj, N.elements).all())


def require_normal(G: Group, N: Subgroup) -> None:
    if N.parent is not G:
        raise NotNormal("subgroup belongs to a different group")
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G!r}")


def normal_closure(G: Group, S: Iterable[int]) -> Subgroup:
    S = np.unique(np.fromiter(S, dtype=np.int64))
    if len(S) == 0:
        return trivial_subgroup(G)
    conjugates = np.unique(G.conj_table[S])
    return subgroup_generated(G, conjugates)


def centralizer(G: Group, x) -> Subgroup:
    """Centralizer of an element, or of a set of elements."""
    xs = np.atleast_1d(np.asarray(list(x) if isinstance(x, (Subgroup, list, tuple, set)) else x, dtype=np.int64))
    t = G.table
    mask = np.all(t[xs][:, :] == t[:, xs].T, axis=0)
    return Subgroup(G, np.flatnonzero(mask))


def center(G: Group) -> Subgroup:
    mask = np.all(G.table == G.table.T, axis=0)
    return Subgroup(G, np.flatnonzero(mask))


def commutator_subgroup(G: Group, H: Subgroup, K: Subgroup) -> Subgroup:
    """``[H, K]``, generated by ``[h, k]`` for ``h`` in H and ``k`` in K."""
    vals = G.comm_table[np.ix_(np.array(H.elements), np.array(K.elements))]
    return subgroup_generated(G, np.unique(vals))


def derived_subgroup(G: Group) -> Subgroup:
    return subgroup_generated(G, np.unique(G.comm_table))


def lower_central(G: Group, c: int) -> Subgroup:
    """``gamma_c(G)``: ``gamma_1 = G`` and ``gamma_{i+1} = [gamma_i, G]``."""
    if c < 1:
        raise ValueError("lower central series is indexed from 1")
    term = whole(G)
    full = whole(G)
    for _ in range(c - 1):
        term = commutator_subgroup(G, term, full)
    return term


def upper_central(G: Group, d: int) -> Subgroup:
    """``Z_d(G)``: ``Z_0 = 1`` and ``Z_{i+1}/Z_i = Z(G/Z_i)``."""
    if d < 0:
        raise ValueError("upper central series is indexed from 0")
    term = trivial_subgroup(G)
    t = G.table
    for _ in range(d):
        inside = np.zeros(G.order, dtype=bool)
        inside[list(term.elements)] = True
        # x is in the next term iff [x, g] lies in the current term for all g
        mask = inside[G.comm_table].all(axis=1)
        nxt = Subgroup(G, np.flatnonzero(mask))
        if nxt == term:
            break
        term = nxt
    return term


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, sorted(A._set & B._set))


def join(G: Group, *subs: Subgroup) -> Subgroup:
    gens = set()
    for H in subs:
        gens.update(H.elements)
    return subgroup_generated(G, gens)


def quotient(G: Group, N: Subgroup):
    """``G/N`` on cosets ordered by least representative, with the canonical map."""
    require_normal(G, N)
    Nel = np.array(N.elements)
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if coset_of[x] < 0:
            coset_of[G.table[x, Nel]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    table = coset_of[G.table[np.ix_(reps, reps)]]
    Q = Group(table, label=f"{G.label}/N{N.order}" if G.label else "", validate=False)
    return Q, Homomorphism(G, Q, coset_of, check=False)


def direct_product(G1: Group, G2: Group, label: str = "") -> Group:
    """Elements ``(a, b)`` are indexed ``a * |G2| + b``."""
    n1, n2 = G1.order, G2.order
    a = np.repeat(np.arange(n1), n2)
    b = np.tile(np.arange(n2), n1)
    table = G1.table[a[:, None], a[None, :]] * n2 + G2.table[b[:, None], b[None, :]]
    if not label and G1.label and G2.label:
        label = f"{G1.label} x {G2.label}"
    return Group(table, label=label, validate=False)


def product_projections(G1: Group, G2: Group, P: Group):
    n2 = G2.order
    idx = np.arange(P.order)
    return (Homomorphism(P, G1, idx // n2, check=False),
            Homomorphism(P, G2, idx % n2, check=False))


def commuting_pairs(G: Group) -> list[tuple[int, int]]:
    a, b = np.nonzero(G.table == G.table.T)
    return list(zip(a.tolist(), b.tolist()))


def _check_cap(G: Group, cap: int, what: str):
    if G.order > cap:
        raise CapExceeded(f"{what} is capped at order {cap}; group has order {G.order}")


def bicyclic_subgroups(G: Group, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    """Distinct subgroups ``<a, b>`` over all commuting pairs (cyclic ones included)."""
    _check_cap(G, cap, "bicyclic subgroup enumeration")
    found = {}
    cyclic = {}
    for x in range(G.order):
        cyclic[x] = subgroup_generated(G, [x])
    for a, b in commuting_pairs(G):
        if a > b:
            continue
        if b in cyclic[a]:
            H = cyclic[a]
        elif a in cyclic[b]:
            H = cyclic[b]
        else:
            H = Subgroup(G, np.unique(G.table[np.ix_(cyclic[a].elements, cyclic[b].elements)]))
        found.setdefault(H.elements, H)
    return [found[k] for k in sorted(found, key=lambda e: (len(e), e))]


def abelian_subgroups(G: Group, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    """Every abelian subgroup, by extending abelian subgroups with centralizing elements."""
    _check_cap(G, cap, "abelian subgroup enumeration")
    t = G.table
    start = trivial_subgroup(G)
    found = {start.elements: start}
    frontier = [start]
    while frontier:
        nxt = []
        for H in frontier:
            cent = centralizer(G, list(H.elements))
            for g in cent.elements:
                if g in H:
                    continue
                K = subgroup_generated(G, list(H.elements) + [g])
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return [found[k] for k in sorted(found, key=lambda e: (len(e), e))]


def all_normal_subgroups(G: Group, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    """All normal subgroups: joins of normal closures of single elements."""
    _check_cap(G, cap, "normal subgroup enumeration")
    closures = {}
    for x in range(G.order):
        N = normal_closure(G, [x])
        closures.setdefault(N.elements, N)
    found = dict(closures)
    frontier = list(found.values())
    base = list(closures.values())
    while frontier:
        nxt = []
        for N in frontier:
            for M in base:
                if M.issubset(N):
                    continue
                J = join(G, N, M)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return [found[k] for k in sorted(found, key=lambda e: (len(e), e))]


def generating_set(G: Group, H: Subgroup | None = None) -> list[int]:
    """A small generating set, preferring elements with small conjugacy classes."""
    pool = list(range(G.order)) if H is None else list(H.elements)
    target = G.order if H is None else H.order
    class_size = {}
    for cls in G.conjugacy_classes:
        for x in cls:
            class_size[x] = len(cls)
    pool.sort(key=lambda x: (class_size[x], -G.element_order(x), x))
    gens: list[int] = []
    current = trivial_subgroup(G)
    while current.order < target:
        # greedy: take the element growing the subgroup the most
        best, best_sub = None, None
        for x in pool:
            if x in current:
                continue
            cand = subgroup_generated(G, gens + [x])
            if best_sub is None or cand.order > best_sub.order:
                best, best_sub = x, cand
            if cand.order == target:
                break
        gens.append(best)
        current = best_sub
    return gens


def relabel(G: Group, perm: Sequence[int], label: str = "") -> tuple[Group, Homomorphism]:
    """Isomorphic copy with element ``x`` renamed ``perm[x]``; returns the copy and the isomorphism."""
    perm = np.asarray(perm, dtype=np.int64)
    invp = np.argsort(perm)
    table = perm[G.table[invp[:, None], invp[None, :]]]
    H = Group(table, label=label or G.label, validate=False)
    return H, Homomorphism(G, H, perm, check=False)


def is_isomorphic(G: Group, H: Group) -> bool:
    return find_isomorphism(G, H) is not None


def find_isomorphism(G: Group, H: Group, fixed: dict | None = None, allowed=None, accept=None):
    """Backtracking search for an isomorphism ``G -> H`` extending ``fixed``.

    Images are chosen for a generating set of G only; each full assignment is
    extended by BFS over words and checked.  ``allowed(g, y)`` prunes candidate
    images of generators and ``accept(image)`` filters complete isomorphisms.
    Returns a :class:`Homomorphism` or ``None``.
    """
    if G.order != H.order:
        return None
    if sorted(G.element_orders.tolist()) != sorted(H.element_orders.tolist()):
        return None
    fixed = dict(fixed or {})
    gens = generating_set(G)
    parent, via, order = G.word(gens)
    candidates = [
        [int(y) for y in range(H.order) if H.element_orders[y] == G.element_orders[g]
         and (allowed is None or allowed(g, y))]
        if g not in fixed else [fixed[g]]
        for g in gens
    ]
    for images in itertools.product(*candidates):
        image = np.full(G.order, -1, dtype=np.int64)
        image[G.identity] = H.identity
        for x in order[1:]:
            image[x] = H.table[image[parent[x]], images[via[x]]]
        if len(np.unique(image)) != G.order:
            continue
        if any(image[k] != v for k, v in fixed.items()):
            continue
        if np.array_equal(image[G.table], H.table[image[:, None], image[None, :]]):
            if accept is None or accept(image):
                return Homomorphism(G, H, image, check=False)
    return None


# ---------------------------------------------------------------------------
# text format


def parse_group_text(text: str, label: str = "") -> Group:
    """Parse the ``mtable n`` / ``perm n`` group file format."""
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*label:\s*(.*)$", line)
            if m and not label:
                label = m.group(1).strip()
            continue
        lines.append(line)
    if not lines:
        raise FormatError("empty group file")
    head = lines[0].split()
    if len(head) != 2 or head[0] not in ("mtable", "perm"):
        raise FormatError(f"first line must be 'mtable n' or 'perm n', got {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"bad size in {lines[0]!r}") from None
    if head[0] == "mtable":
        rows = [[int(tok) for tok in line.split()] for line in lines[1:]]
        if len(rows) != n:
            raise FormatError(f"expected {n} table rows, found {len(rows)}")
        return from_mul_table(rows, label=label)
    return from_permutations(n, lines[1:], label=label)


def format_group_text(G: Group) -> str:
    out = []
    if G.label:
        out.append(f"# label: {G.label}")
    gens = getattr(G, "perm_generators", None)
    if gens is not None:
        out.append(f"perm {len(G.permutations[0])}")
        out.extend(format_permutation(p) for p in gens)
    else:
        out.append(f"mtable {G.order}")
        out.extend(" ".join(str(int(v)) for v in row) for row in G.table)
    return "\n".join(out) + "\n"


def load_group(path) -> Group:
    from pathlib import Path

    path = Path(path)
    return parse_group_text(path.read_text(encoding="utf-8"), label="")
