"""Free-group words, outer-commutator words and their evaluation in finite groups.

Outer-commutator (o.c.) words are binary bracket trees over pairwise distinct
variables.  Because the variables of the two halves of every bracket are
disjoint, all tuple-level computations can be organised as outer products over
the leaves, which is what :func:`law_values` does.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import CapExceeded, MissingAssignment, VariableReuse, WordSyntaxError
from .groups import Group, Subgroup, subgroup_generated, trivial_subgroup, whole

EVAL_CAP = 10**8

# ---------------------------------------------------------------------------
# free-group words


@dataclass(frozen=True)
class Word:
    """A freely reduced word; ``letters`` holds ``(variable, exponent)`` syllables."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce_syllables(self.letters))

    @classmethod
    def from_flat(cls, flat: Iterable[int]) -> "Word":
        """Build from signed variable indices, e.g. ``[1, 1, -2]`` for ``x1^2 x2^-1``."""
        return cls(tuple((abs(v), 1 if v > 0 else -1) for v in flat))

    def flat(self) -> list[int]:
        out = []
        for v, e in self.letters:
            out.extend([v if e > 0 else -v] * abs(e))
        return out

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((v, -e) for v, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted({v for v, _ in self.letters}))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in self.letters)

    def evaluate(self, G: Group, images: Sequence[int]) -> int:
        """Evaluate with ``x_i -> images[i-1]``."""
        acc = G.identity
        for v, e in self.letters:
            if v > len(images):
                raise MissingAssignment(v)
            g = images[v - 1] if e > 0 else G.inverse(images[v - 1])
            for _ in range(abs(e)):
                acc = G.mul(acc, g)
        return acc


def _reduce_syllables(letters) -> tuple[tuple[int, int], ...]:
    stack: list[list[int]] = []
    for v, e in letters:
        v, e = int(v), int(e)
        if v < 1:
            raise ValueError(f"variable indices start at 1, got {v}")
        if e == 0:
            continue
        if stack and stack[-1][0] == v:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([v, e])
    return tuple((v, e) for v, e in stack)


def commutator_word(a: Word, b: Word) -> Word:
    return a.inverse() * b.inverse() * a * b


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\^)\s*(-?\d+)|([\[\]\(\),*])|(1)(?!\d))")


def parse_free_word(text: str) -> Word:
    """Parse ``x1 x2^-1 (x1 x2)^3 [x1,x2]`` style words; ``1`` is the empty word."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos].isspace():
                pos += 1
                continue
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            tokens.append(("var", int(m.group(2)), m.start(1)))
        elif m.group(3):
            tokens.append(("pow", int(m.group(4)), m.start(3)))
        elif m.group(5):
            tokens.append((m.group(5), None, m.start(5)))
        else:
            tokens.append(("one", None, m.start(6)))
        pos = m.end()
    parser = _FreeParser(tokens, len(text))
    word = parser.product(stop=())
    if parser.i != len(tokens):
        raise WordSyntaxError("trailing input", tokens[parser.i][2])
    return word


class _FreeParser:
    def __init__(self, tokens, end):
        self.tokens = tokens
        self.i = 0
        self.end = end

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _pos(self):
        tok = self._peek()
        return tok[2] if tok else self.end

    def product(self, stop) -> Word:
        acc = Word()
        while True:
            tok = self._peek()
            if tok is None or tok[0] in stop:
                return acc
            if tok[0] == "*":
                self.i += 1
                continue
            acc = acc * self.factor()

    def factor(self) -> Word:
        tok = self._peek()
        kind = tok[0]
        if kind == "var":
            if tok[1] < 1:
                raise WordSyntaxError("variable indices start at 1", tok[2])
            self.i += 1
            base = Word(((tok[1], 1),))
        elif kind == "one":
            self.i += 1
            base = Word()
        elif kind == "(":
            self.i += 1
            base = self.product(stop=(")",))
            self._expect(")")
        elif kind == "[":
            self.i += 1
            parts = [self.product(stop=(",", "]"))]
            while self._peek() and self._peek()[0] == ",":
                self.i += 1
                parts.append(self.product(stop=(",", "]")))
            self._expect("]")
            if len(parts) < 2:
                raise WordSyntaxError("commutator needs at least two entries", tok[2])
            base = parts[0]
            for p in parts[1:]:
                base = commutator_word(base, p)
        else:
            raise WordSyntaxError(f"unexpected {kind!r}", tok[2])
        while self._peek() and self._peek()[0] == "pow":
            base = base ** self._peek()[1]
            self.i += 1
        return base

    def _expect(self, kind):
        tok = self._peek()
        if tok is None or tok[0] != kind:
            raise WordSyntaxError(f"expected {kind!r}", self._pos())
        self.i += 1


# ---------------------------------------------------------------------------
# outer-commutator words


@dataclass(frozen=True)
class Leaf:
    var: int

    @property
    def weight(self) -> int:
        return 1

    @property
    def variables(self) -> tuple[int, ...]:
        return (self.var,)

    def __str__(self):
        return f"x{self.var}"


@dataclass(frozen=True)
class Comm:
    left: "OCWord"
    right: "OCWord"

    def __post_init__(self):
        shared = set(self.left.variables) & set(self.right.variables)
        if shared:
            raise VariableReuse(min(shared))

    @cached_property
    def weight(self) -> int:
        return self.left.weight + self.right.weight

    @cached_property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted(self.left.variables + self.right.variables))

    def __str__(self):
        return f"[{self.left},{self.right}]"


OCWord = Union[Leaf, Comm]


def shape(w: OCWord):
    """Tree shape with variable names erased."""
    if isinstance(w, Leaf):
        return ()
    return (shape(w.left), shape(w.right))


def renumber(w: OCWord, start: int = 1) -> OCWord:
    """Rename variables to ``start, start+1, ...`` in increasing order of the old names."""
    mapping = {v: start + i for i, v in enumerate(w.variables)}
    return substitute(w, {v: Leaf(k) for v, k in mapping.items()})


def substitute(w: OCWord, images: Mapping[int, OCWord]) -> OCWord:
    if isinstance(w, Leaf):
        return images[w.var]
    return Comm(substitute(w.left, images), substitute(w.right, images))


def parse_word(text: str) -> OCWord:
    """Parse ``x<digits> | [w,w] | [w,w,...,w]`` (n-ary brackets are left-normed)."""
    parser = _OCParser(text)
    w = parser.word()
    parser.skip_ws()
    if parser.pos != len(text):
        raise WordSyntaxError("trailing input", parser.pos)
    return w


class _OCParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def word(self) -> OCWord:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise WordSyntaxError("unexpected end of input", self.pos)
        ch = self.text[self.pos]
        if ch == "x":
            m = re.compile(r"x(\d+)").match(self.text, self.pos)
            if not m:
                raise WordSyntaxError("expected digits after 'x'", self.pos + 1)
            var = int(m.group(1))
            if var < 1:
                raise WordSyntaxError("variable indices start at 1", self.pos)
            self.pos = m.end()
            return Leaf(var)
        if ch == "[":
            start = self.pos
            self.pos += 1
            parts = [self.word()]
            self.skip_ws()
            while self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                parts.append(self.word())
                self.skip_ws()
            if self.pos >= len(self.text) or self.text[self.pos] != "]":
                raise WordSyntaxError("expected ',' or ']'", self.pos)
            self.pos += 1
            if len(parts) < 2:
                raise WordSyntaxError("bracket needs at least two entries", start)
            acc = parts[0]
            for p in parts[1:]:
                acc = Comm(acc, p)
            return acc
        raise WordSyntaxError(f"unexpected character {ch!r}", self.pos)


def left_normed(weight: int) -> OCWord:
    """``[x1, x2, ..., x_weight]``; weight 1 is the single variable ``x1``."""
    acc: OCWord = Leaf(1)
    for i in range(2, weight + 1):
        acc = Comm(acc, Leaf(i))
    return acc


def compose(u: OCWord, v: OCWord) -> OCWord:
    """``u o v``: the j-th variable of u becomes a copy of v on a fresh block of variables."""
    t = v.weight
    vv = renumber(v)
    images = {}
    for j, var in enumerate(u.variables):
        images[var] = renumber(vv, start=j * t + 1)
    return substitute(u, images)


def is_composite_of(big: OCWord, outer: OCWord):
    """If ``big`` has the shape of ``outer o w`` for some w, return that w's shape."""
    found = []

    def walk(b, o):
        if isinstance(o, Leaf):
            found.append(shape(b))
            return True
        return isinstance(b, Comm) and walk(b.left, o.left) and walk(b.right, o.right)

    if walk(big, outer) and found and all(f == found[0] for f in found):
        return found[0]
    return None


def evaluate(w: OCWord, G: Group, assignment) -> int:
    """Value of ``w`` with variable ``i`` mapped to ``assignment[i]``.

    ``assignment`` is a mapping keyed by variable index, or a sequence where
    ``assignment[i-1]`` is the image of ``x_i``.
    """
    if isinstance(w, Leaf):
        try:
            return int(assignment[w.var] if isinstance(assignment, Mapping) else assignment[w.var - 1])
        except (KeyError, IndexError):
            raise MissingAssignment(w.var) from None
    return G.comm(evaluate(w.left, G, assignment), evaluate(w.right, G, assignment))


# ---------------------------------------------------------------------------
# varieties


@dataclass(frozen=True)
class Variety:
    laws: tuple
    name: str = ""

    def __post_init__(self):
        laws = tuple(self.laws)
        if not laws:
            raise ValueError("a variety needs at least one law")
        for law in laws:
            if law.weight < 2:
                raise ValueError(f"law {law} has weight < 2")
        object.__setattr__(self, "laws", laws)

    def __str__(self):
        return self.name or ",".join(str(w) for w in self.laws)

    @property
    def max_weight(self) -> int:
        return max(w.weight for w in self.laws)


def abelian() -> Variety:
    return Variety((left_normed(2),), "abelian")


def nilpotent(c: int) -> Variety:
    if c < 1:
        raise ValueError("nilpotency class must be at least 1")
    return Variety((left_normed(c + 1),), "abelian" if c == 1 else f"nilpotent-{c}")


def parse_variety(text: str) -> Variety:
    """``abelian``, ``nilpotent-<c>``, ``compose:<w1>:<w2>`` or a bare o.c. word."""
    text = text.strip()
    if text == "abelian":
        return abelian()
    m = re.fullmatch(r"nilpotent-(\d+)", text)
    if m:
        return nilpotent(int(m.group(1)))
    if text.startswith("compose:"):
        body = text[len("compose:"):]
        depth = 0
        for i, ch in enumerate(body):
            depth += ch == "["
            depth -= ch == "]"
            if ch == ":" and depth == 0:
                return Variety((compose(parse_word(body[:i]), parse_word(body[i + 1:])),), text)
        raise ValueError(f"compose variety needs two words: {text!r}")
    return Variety((parse_word(text),), text)


LawsLike = Union[Variety, Leaf, Comm, Sequence]


def as_laws(laws: LawsLike) -> tuple:
    if isinstance(laws, Variety):
        return laws.laws
    if isinstance(laws, (Leaf, Comm)):
        return (laws,)
    return tuple(laws)


# ---------------------------------------------------------------------------
# evaluation over all tuples


def _dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


def law_values(w: OCWord, G: Group, cap: int = EVAL_CAP) -> np.ndarray:
    """Values of ``w`` on every tuple: an array with one axis per variable (sorted order)."""
    s = w.weight
    if G.order ** s > cap:
        raise CapExceeded(f"{G.order}^{s} tuples exceed the evaluation cap {cap}")
    ct = G.comm_table.astype(_dtype(G.order))

    def rec(node):
        if isinstance(node, Leaf):
            return (node.var,), np.arange(G.order, dtype=ct.dtype)
        lv, a = rec(node.left)
        rv, b = rec(node.right)
        a = a.reshape(a.shape + (1,) * b.ndim)
        b = b.reshape((1,) * len(lv) + b.shape)
        return lv + rv, ct[a, b]

    order, vals = rec(w)
    return np.transpose(vals, np.argsort(order))


def word_value_set(w: OCWord, G: Group) -> np.ndarray:
    """The set of values of a single o.c. word, computed bracket by bracket."""
    if isinstance(w, Leaf):
        return np.arange(G.order)
    a = word_value_set(w.left, G)
    b = word_value_set(w.right, G)
    return np.unique(G.comm_table[np.ix_(a, b)])


def value_set(V: LawsLike, G: Group) -> frozenset:
    """``T(G)``: every value of every law, over all tuples."""
    out = set()
    for w in as_laws(V):
        out.update(int(x) for x in word_value_set(w, G))
    return frozenset(out)


def verbal_subgroup(V: LawsLike, G: Group) -> Subgroup:
    return subgroup_generated(G, value_set(V, G))


def _right_mult(G: Group, a: int) -> np.ndarray:
    return G.table[:, a]


def marginal_subgroup(V: LawsLike, G: Group, cap: int = EVAL_CAP) -> Subgroup:
    """Elements whose insertion at any argument position never changes any law value."""
    laws = as_laws(V)
    keep = np.ones(G.order, dtype=bool)
    for w in laws:
        if isinstance(w, Leaf):
            # x1(g a) = x1(g) forces a = 1
            keep[:] = False
            keep[G.identity] = True
            continue
        vals = law_values(w, G, cap)
        for a in range(G.order):
            if not keep[a] or a == G.identity:
                continue
            shift = _right_mult(G, a)
            for axis in range(vals.ndim):
                if not np.array_equal(np.take(vals, shift, axis=axis), vals):
                    keep[a] = False
                    break
    return Subgroup(G, np.flatnonzero(keep))


def hall_bracket(N: Subgroup, V: LawsLike, G: Group, cap: int = EVAL_CAP) -> Subgroup:
    """``[N V* G]``, generated by ``v(g_1,...,g_i n,...,g_s) v(g_1,...,g_s)^-1``."""
    from .groups import require_normal

    require_normal(G, N)
    if N.is_trivial():
        return trivial_subgroup(G)
    gens = set()
    for w in as_laws(V):
        vals = law_values(w, G, cap)
        inv_vals = G.inv[vals]
        for n in N.elements:
            if n == G.identity:
                continue
            shift = _right_mult(G, n)
            for axis in range(vals.ndim):
                moved = np.take(vals, shift, axis=axis)
                gens.update(np.unique(G.table[moved, inv_vals]).tolist())
    return subgroup_generated(G, gens)
