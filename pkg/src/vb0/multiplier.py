"""Exterior squares, the Schur multiplier and the Bogomolov-type quotient.

The exterior square ``G ^ G`` is presented on symbols ``w(x, y)`` for
non-identity ``x, y`` subject to the crossed-pairing expansions

    w(xy, z) = w(x^y, z^y) w(y, z)        w(x, yz) = w(x, z) w(x^z, y^z)

plus ``w(x, x) = 1`` (exterior) or ``w(x, y) = 1`` for every commuting pair
(curly).  ``kappa: w(x, y) -> [x, y]`` maps onto the derived subgroup with
central kernel, the multiplier (exterior) or its quotient by the span of
commuting pairs (curly).

Two ways to get at the kernel are provided.

``linear``
    Write the carrier as a central extension of ``G'`` by its kernel ``K``:
    pick a section ``s`` of ``kappa``, put ``w(x, y) = t(x, y) s([x, y])`` and
    ``s(d) s(e) = c(d, e) s(de)``.  Each defining relator becomes a linear
    relation among the ``t`` and ``c`` symbols and ``K`` is the abelian group
    they present.  The section is pinned down by a spanning tree of ``G'``.
    Only ``t(a, b)`` with ``a, b`` in a conjugation-closed generating set are
    kept as unknowns; all other ``t`` are expanded through the relations
    themselves.  The system is solved prime by prime modulo ``p^(v_p|G| + 1)``.

``enumerate``
    Todd-Coxeter on the full presentation.  Only feasible for very small
    groups; kept as an independent cross-check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .abelian import (
    AbelianStructure,
    _factor_prime_powers,
    _matmul_mod,
    inverse_mod,
    module_snf_mod,
    quotient_structure,
    abelian_invariants,
    subgroup_structure,
)
from .errors import CapExceeded, InternalDisagreement, KappaInconsistent
from .groups import (
    TABLE_CAP,
    Group,
    Homomorphism,
    Subgroup,
    derived_subgroup,
    generating_set,
    quotient,
)
from .presentation import Presentation, image_group, todd_coxeter
from .words import Word

WEDGE_CAP = 64
ENUMERATE_CAP = 8
KINDS = ("exterior", "curly")


# ---------------------------------------------------------------------------
# presentation


def wedge_presentation(G: Group, kind: str = "exterior", cap: int = WEDGE_CAP):
    """The presentation of the exterior (or curly exterior) square.

    Returns ``(P, gen_of)`` with ``gen_of[(x, y)]`` the 1-based generator of
    ``w(x, y)``.
    """
    _check_kind(kind)
    if G.order > cap:
        raise CapExceeded(f"wedge presentation capped at order {cap}")
    nonid = [g for g in range(G.order) if g != G.identity]
    gen_of = {}
    for x in nonid:
        for y in nonid:
            gen_of[(x, y)] = len(gen_of) + 1
    e = G.identity

    def w(x, y):
        return [] if x == e or y == e else [gen_of[(x, y)]]

    def inv(flat):
        return [-v for v in reversed(flat)]

    rels = []
    for x in nonid:
        for y in nonid:
            for z in nonid:
                lhs = w(G.mul(x, y), z)
                rhs = w(G.conj(x, y), G.conj(z, y)) + w(y, z)
                rels.append(inv(lhs) + rhs)
                lhs = w(x, G.mul(y, z))
                rhs = w(x, z) + w(G.conj(x, z), G.conj(y, z))
                rels.append(inv(lhs) + rhs)
    for x in nonid:
        for y in nonid:
            if (kind == "exterior" and x == y) or (kind == "curly" and G.mul(x, y) == G.mul(y, x)):
                rels.append(w(x, y))
    words = {Word.from_flat(r) for r in rels}
    words.discard(Word())
    words = sorted(words, key=lambda r: (len(r), r.letters))
    return Presentation(len(gen_of), tuple(words), label=f"{kind} square of {G.label}"), gen_of


def _check_kind(kind: str):
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


# ---------------------------------------------------------------------------
# linear model of the kernel


def _left_bfs(G: Group, S):
    """Order elements so that every ``x != 1`` is ``a * h`` with ``a`` in ``S`` and ``h`` earlier."""
    seen = {G.identity: None}
    order = [G.identity]
    for h in order:
        for a in S:
            x = G.mul(a, h)
            if x not in seen:
                seen[x] = (a, h)
                order.append(x)
    return order, seen


class _Layout:
    """Unknowns and their expansions for one group.

    ``T[x, y]`` is the coefficient vector (mod ``Q``) of ``t(x, y)`` over the
    reduced unknowns: ``t(a, b)`` for ``a, b`` in ``C`` followed by ``c(d, e)``
    for non-identity ``d, e`` in ``G'``.
    """

    def __init__(self, G: Group, Q: int):
        self.G = G
        self.Q = Q
        n = G.order
        e = G.identity
        t, conj, comm = G.table, G.conj_table, G.comm_table
        D = derived_subgroup(G)
        self.D = [e] + [d for d in D.elements if d != e]
        self.dpos = np.full(n, -1, dtype=np.int64)
        self.dpos[self.D] = np.arange(len(self.D))
        S = generating_set(G) if n > 1 else []
        self.S = S
        C = sorted({int(y) for a in S for y in conj[a]})
        self.C = C
        nC, nD = len(C), len(self.D)
        self.cpos = np.full(n, -1, dtype=np.int64)
        self.cpos[C] = np.arange(nC)
        self.nt = nC * nC
        self.R = self.nt + (nD - 1) ** 2
        # column of c(d1, d2) indexed by group elements, -1 when zero
        colC = np.full((n, n), -1, dtype=np.int64)
        nz = np.array(self.D[1:], dtype=np.int64)
        if len(nz):
            colC[np.ix_(nz, nz)] = self.nt + (np.arange(nD - 1)[:, None] * (nD - 1) + np.arange(nD - 1)[None, :])
        self.colC = colC
        R = self.R
        Cidx = np.arange(nC)
        Carr = np.array(C, dtype=np.int64)
        order, via = _left_bfs(G, S)
        # first argument in C
        T2 = np.zeros((nC, n, R), dtype=np.int64)
        for z in order[1:]:
            if self.cpos[z] >= 0:
                T2[Cidx, z, Cidx * nC + self.cpos[z]] = 1
                continue
            a, h = via[z]
            ch = conj[Carr, h]
            ah = conj[a, h]
            T2[:, z] = T2[:, h]
            T2[Cidx, z, self.cpos[ch] * nC + self.cpos[ah]] += 1
            cc = colC[comm[Carr, h], comm[ch, ah]]
            m = cc >= 0
            T2[Cidx[m], z, cc[m]] += 1
            T2[:, z] %= Q
        T = np.zeros((n, n, R), dtype=np.int64)
        zs = np.arange(n)
        for x in order[1:]:
            if self.cpos[x] >= 0:
                T[x] = T2[self.cpos[x]]
                continue
            a, h = via[x]
            ah = conj[a, h]
            zh = conj[zs, h]
            T[x] = T2[self.cpos[ah], zh] + T[h]
            cc = colC[comm[ah, zh], comm[h, zs]]
            m = cc >= 0
            T[x, zs[m], cc[m]] += 1
            T[x] %= Q
        self.T = T
        # kappa must respect both expansions
        nonid = np.array([g for g in range(n) if g != e], dtype=np.int64)
        X, Y, Z = np.meshgrid(nonid, nonid, nonid, indexing="ij")
        lhs1 = comm[t[X, Y], Z]
        rhs1 = t[comm[conj[X, Y], conj[Z, Y]], comm[Y, Z]]
        lhs2 = comm[X, t[Y, Z]]
        rhs2 = t[comm[X, Z], comm[conj[X, Z], conj[Y, Z]]]
        if not (np.array_equal(lhs1, rhs1) and np.array_equal(lhs2, rhs2)):
            raise KappaInconsistent("commutator map does not respect the expansion relators")
        self.nonid = nonid

    def tree(self):
        """Spanning tree of ``G'`` along commutator values: ``d -> (parent, x, y)``."""
        G = self.G
        comm = G.comm_table
        reps = {}
        for x in range(G.order):
            for y in range(G.order):
                k = int(comm[x, y])
                if k != G.identity and k not in reps:
                    reps[k] = (x, y)
        tree = {}
        seen = {G.identity}
        queue = [G.identity]
        for d in queue:
            for k, (x, y) in sorted(reps.items()):
                f = G.mul(d, k)
                if f not in seen:
                    seen.add(f)
                    tree[f] = (d, x, y)
                    queue.append(f)
        if len(seen) != len(self.D):
            raise KappaInconsistent("commutator values do not generate the derived subgroup")
        return tree

    def row_blocks(self, kind: str, Tarr: np.ndarray | None = None, cvec: np.ndarray | None = None):
        """The relation rows as a list of thunks, each computing one block.

        With the defaults the rows are in unknown coordinates (mod Q).  Passing
        ``Tarr = T @ W`` and ``cvec = W`` yields the same rows multiplied by ``W``
        on the right, which is all a verification pass needs.
        """
        G = self.G
        t, conj, comm = G.table, G.conj_table, G.comm_table
        T = self.T if Tarr is None else Tarr
        colC, Q = self.colC, self.Q
        w = T.shape[2]
        if cvec is None:
            cvec = np.eye(w, dtype=np.int64)
        cpad = np.vstack([cvec, np.zeros((1, w), dtype=np.int64)])  # index -1 -> zero row
        nonid = self.nonid
        D = np.array(self.D, dtype=np.int64)
        Y, Z = np.meshgrid(nonid, nonid, indexing="ij")
        Y, Z = Y.ravel(), Z.ravel()
        per_block = max(1, 20000 // max(1, len(Y)))

        def pair_block(xs):
            out = []
            for x in xs:
                xcy, zcy = conj[x, Y], conj[Z, Y]
                r1 = T[t[x, Y], Z] - T[xcy, zcy] - T[Y, Z] - cpad[colC[comm[xcy, zcy], comm[Y, Z]]]
                xcz, ycz = conj[x, Z], conj[Y, Z]
                r2 = T[x, t[Y, Z]] - T[x, Z] - T[xcz, ycz] - cpad[colC[comm[x, Z], comm[xcz, ycz]]]
                out.append(r1)
                out.append(r2)
            return np.vstack(out)

        def cocycle_block(d):
            # c(d,a) + c(da,b) = c(a,b) + c(d,ab)
            A, B = np.meshgrid(D, D, indexing="ij")
            A, B = A.ravel(), B.ravel()
            return (cpad[colC[d, A]] + cpad[colC[t[d, A], B]] - cpad[colC[A, B]] - cpad[colC[d, t[A, B]]]) % Q

        def tree_block():
            # the section along the spanning tree: t(x, y) + c(parent, [x, y]) = 0
            rows = [(T[x, y] + cpad[colC[p, comm[x, y]]]) % Q for _, (p, x, y) in sorted(self.tree().items())]
            return np.array(rows, dtype=np.int64).reshape(-1, w)

        def kind_block():
            if kind == "exterior":
                return T[nonid, nonid]
            a, b = np.nonzero(comm == G.identity)
            keep = (a != G.identity) & (b != G.identity)
            return T[a[keep], b[keep]]

        xs = list(nonid)
        thunks = [(lambda xs=xs[s:s + per_block]: pair_block(xs)) for s in range(0, len(xs), per_block)]
        thunks += [(lambda d=d: cocycle_block(d)) for d in D[1:]]
        thunks += [tree_block, kind_block]
        return thunks

    def row_chunks(self, kind: str):
        thunks = self.row_blocks(kind)
        return lambda: (f() for f in thunks)

    def projected_check(self, kind: str, q: int):
        """Verification pass for :func:`module_snf_mod` on projected rows."""
        full = self.row_blocks(kind)

        def check(Vk, mods, budget):
            Tk = _matmul_mod((self.T % q).reshape(-1, self.R), Vk, q).reshape(self.T.shape[:2] + (Vk.shape[1],))
            proj = self.row_blocks(kind, Tk, Vk % q)
            failing = []
            for f_proj, f_full in zip(proj, full):
                X = f_proj() % q
                bad = np.flatnonzero((X % mods[None, :]).any(axis=1))
                if len(bad):
                    failing.append(f_full()[bad[:budget]])
                    budget -= min(budget, len(bad))
                if budget <= 0:
                    break
            return np.vstack(failing) if failing else None

        return check


@dataclass
class _PrimeBlock:
    p: int
    q: int
    V: np.ndarray        # full column transform mod q
    keep: np.ndarray     # columns carrying nontrivial cyclic summands
    mods: np.ndarray     # their orders p^v

    def coords(self, v: np.ndarray) -> np.ndarray:
        return ((v % self.q) @ self.V[:, self.keep]) % self.mods

    def preimages(self) -> np.ndarray:
        """Rows: unknown-combinations hitting each summand generator (p-part only)."""
        if not len(self.keep):
            return np.zeros((0, self.V.shape[0]), dtype=np.int64)
        return inverse_mod(self.V, self.p, int(round(np.log(self.q) / np.log(self.p))))[self.keep]


class KernelModel:
    """``ker kappa`` as a direct sum of cyclic p-groups, with coordinate maps.

    ``factors[i]`` is the order of the i-th cyclic summand; coordinates of a
    combination of unknowns ``v`` (entries mod Q) are given by :meth:`coords`.
    """

    def __init__(self, layout: _Layout, blocks: list[_PrimeBlock]):
        self.layout = layout
        self.blocks = blocks
        self.factors = [int(m) for b in blocks for m in b.mods]
        self.structure = AbelianStructure.from_prime_powers(self.factors)
        self.mods = np.array(self.factors, dtype=np.int64)
        self.primes = [b.p for b in blocks for _ in b.mods]

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return self.structure.order

    def coords(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        parts = [b.coords(v) for b in self.blocks if len(b.keep)]
        if not parts:
            return np.zeros(v.shape[:-1] + (0,), dtype=np.int64)
        return np.concatenate(parts, axis=-1)

    def preimages(self) -> np.ndarray:
        """Row ``i``: a combination of unknowns whose class has ``p_i``-part the i-th generator."""
        rows = [b.preimages() for b in self.blocks if len(b.keep)]
        if not rows:
            return np.zeros((0, self.layout.R), dtype=np.int64)
        return np.vstack(rows)

    def reduce(self, k) -> np.ndarray:
        return np.asarray(k, dtype=np.int64) % self.mods

    def prime_mask(self, p: int) -> np.ndarray:
        return np.array([q == p for q in self.primes], dtype=bool)


def _solve_kernel(layout: _Layout, kind: str, seed: int = 0) -> KernelModel:
    n = layout.G.order
    blocks = []
    if layout.R == 0 or n == 1:
        return KernelModel(layout, blocks)
    chunks = layout.row_chunks(kind)
    for p, k in sorted(_factor_prime_powers(n).items()):
        E = k + 1
        q = p**E
        vals, V = module_snf_mod(chunks, layout.R, p, E, seed=seed,
                                 check=layout.projected_check(kind, q))
        if any(v == E for v in vals):
            raise InternalDisagreement(
                f"relation module has a summand of order divisible by {q} (or a free summand);"
                " the kernel exponent must divide |G|")
        keep = np.array([j for j, v in enumerate(vals) if v > 0], dtype=np.int64)
        mods = np.array([p ** vals[j] for j in keep], dtype=np.int64)
        blocks.append(_PrimeBlock(p, q, V, keep, mods))
    return KernelModel(layout, blocks)


# ---------------------------------------------------------------------------
# wedge groups


@dataclass
class WedgeGroup:
    """The (curly) exterior square as a central extension of ``G'`` by ``K``.

    Elements are pairs ``(k, d)`` with ``k`` in kernel coordinates and ``d`` in
    ``G'``; ``pair_k[x, y]`` holds the kernel part of ``w(x, y)``.  When the
    carrier is small it is materialized as a :class:`Group` with ``kappa``.
    """

    G: Group
    kind: str
    method: str
    kernel: AbelianStructure
    model: KernelModel | None = None
    pair_k: np.ndarray | None = None
    cocycle: np.ndarray | None = None
    carrier: Group | None = None
    pair_gen: np.ndarray | None = None
    kappa: Homomorphism | None = None
    timings: dict = field(default_factory=dict)

    @property
    def derived(self) -> list[int]:
        return self.model.layout.D if self.model is not None else sorted(derived_subgroup(self.G).elements)

    @property
    def carrier_order(self) -> int:
        return len(derived_subgroup(self.G)) * self.kernel.order

    def pair(self, x: int, y: int):
        """``w(x, y)`` as ``(kernel coordinates, [x, y])``."""
        return self.pair_k[x, y], self.G.comm(x, y)

    def mul(self, a, b):
        (k1, d1), (k2, d2) = a, b
        lay = self.model.layout
        k = self.model.reduce(k1 + k2 + self.cocycle[lay.dpos[d1], lay.dpos[d2]])
        return k, self.G.mul(d1, d2)

    def inv(self, a):
        k, d = a
        lay = self.model.layout
        di = self.G.inverse(d)
        return self.model.reduce(-k - self.cocycle[lay.dpos[d], lay.dpos[di]]), di

    def one(self):
        return np.zeros(self.model.rank, dtype=np.int64), self.G.identity

    def commuting_span(self) -> np.ndarray:
        """Distinct kernel coordinates of ``w(x, y)`` over commuting pairs."""
        G = self.G
        a, b = np.nonzero(G.comm_table == G.identity)
        rows = self.pair_k[a, b]
        if not len(rows) or rows.shape[1] == 0:
            return np.zeros((0, self.model.rank if self.model else 0), dtype=np.int64)
        return np.unique(rows, axis=0)


def _materialize(W: WedgeGroup, cap: int = TABLE_CAP):
    """Build the carrier table, ``pair_gen`` and ``kappa``, and check the invariants."""
    model = W.model
    D = model.layout.D
    G = W.G
    mods = model.mods
    ks = [np.zeros(0, dtype=np.int64)]
    for m in model.factors:
        ks = [np.append(k, v) for k in ks for v in range(m)]
    size = len(ks) * len(D)
    if size > cap:
        return
    kindex = {tuple(k): i for i, k in enumerate(ks)}
    elems = [(k, d) for k in ks for d in D]
    index = {(tuple(k), d): i for i, (k, d) in enumerate(elems)}
    table = np.empty((size, size), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            k, d = W.mul(a, b)
            table[i, j] = index[(tuple(int(v) for v in k), d)]
    carrier = Group(table, label=f"{W.kind} square of {G.label}", validate=True)
    kappa = Homomorphism(carrier, G, [d for _, d in elems], check=True)
    pair_gen = np.empty((G.order, G.order), dtype=np.int64)
    for x in range(G.order):
        for y in range(G.order):
            k, d = W.pair(x, y)
            pair_gen[x, y] = index[(tuple(int(v) for v in k), int(d))]
    if not np.array_equal(kappa.image[pair_gen], G.comm_table):
        raise KappaInconsistent("kappa(w(x, y)) differs from [x, y]")
    ker = np.array(kappa.kernel().elements)
    if not np.array_equal(carrier.table[ker][:, np.arange(size)], carrier.table[:, ker].T):
        raise KappaInconsistent("kernel of kappa is not central")
    gens = sorted(set(pair_gen.ravel().tolist()))
    from .groups import subgroup_generated
    if subgroup_generated(carrier, gens).order != size:
        raise KappaInconsistent("pair generators do not generate the carrier")
    W.carrier, W.pair_gen, W.kappa = carrier, pair_gen, kappa
    del kindex


def _wedge_linear(G: Group, kind: str, seed: int = 0, materialize: bool = True) -> WedgeGroup:
    t0 = time.perf_counter()
    modulus = 1
    for p, k in _factor_prime_powers(max(G.order, 1)).items():
        modulus *= p ** (k + 1)
    layout = _Layout(G, modulus)
    t1 = time.perf_counter()
    model = _solve_kernel(layout, kind, seed=seed)
    t2 = time.perf_counter()
    pair_k = model.coords(layout.T)
    nD = len(layout.D)
    cocycle = np.zeros((nD, nD, model.rank), dtype=np.int64)
    if nD > 1 and model.rank:
        cols = layout.colC[np.ix_(layout.D[1:], layout.D[1:])]
        unit = np.zeros(cols.shape + (layout.R,), dtype=np.int64)
        I, J = np.indices(cols.shape)
        unit[I, J, cols] = 1
        cocycle[1:, 1:] = model.coords(unit)
    W = WedgeGroup(G, kind, "linear", model.structure, model, pair_k, cocycle,
                   timings={"layout": t1 - t0, "solve": t2 - t1})
    if materialize:
        _materialize(W)
    return W


def _wedge_enumerate(G: Group, kind: str, max_cosets: int = 100_000) -> WedgeGroup:
    if G.order > ENUMERATE_CAP:
        raise CapExceeded(f"enumeration route capped at order {ENUMERATE_CAP}")
    t0 = time.perf_counter()
    P, gen_of = wedge_presentation(G, kind)
    if P.ngens == 0:
        carrier = Group(np.zeros((1, 1), dtype=np.int64), validate=False)
        images = []
    else:
        T = todd_coxeter(P, (), max_cosets=max_cosets)
        carrier, images = image_group(T, P)
    parent, via, order = carrier.word(images)
    kimg = np.full(carrier.order, -1, dtype=np.int64)
    kimg[carrier.identity] = G.identity
    pairs = list(gen_of)
    for x in order[1:]:
        a, b = pairs[via[x]]
        kimg[x] = G.mul(int(kimg[parent[x]]), G.comm(a, b))
    try:
        kappa = Homomorphism(carrier, G, kimg, check=True)
    except Exception as exc:
        raise KappaInconsistent(str(exc)) from None
    pair_gen = np.full((G.order, G.order), carrier.identity, dtype=np.int64)
    for (x, y), g in gen_of.items():
        pair_gen[x, y] = images[g - 1]
    K = kappa.kernel()
    Kg, _ = K.as_group()
    W = WedgeGroup(G, kind, "enumerate", abelian_invariants(Kg), carrier=carrier,
                   pair_gen=pair_gen, kappa=kappa, timings={"enumerate": time.perf_counter() - t0})
    return W


def wedge_group(G: Group, kind: str = "exterior", method: str = "linear", cap: int = WEDGE_CAP,
                seed: int = 0, materialize: bool = True) -> WedgeGroup:
    """Build the exterior (``kind="exterior"``) or curly exterior square of ``G``."""
    _check_kind(kind)
    if G.order > cap:
        raise CapExceeded(f"wedge construction capped at order {cap}; group has order {G.order}")
    if method == "linear":
        return _wedge_linear(G, kind, seed=seed, materialize=materialize)
    if method == "enumerate":
        return _wedge_enumerate(G, kind)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# multipliers


@dataclass
class MultiplierResult:
    M: AbelianStructure
    M0: AbelianStructure
    M0_generators: np.ndarray
    B0_tilde: AbelianStructure
    route_a: AbelianStructure
    route_b: AbelianStructure
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "multiplier": self.M.to_list(),
            "M0": self.M0.to_list(),
            "B0_tilde": self.B0_tilde.to_list(),
            "timings": {k: round(v, 4) for k, v in self.timings.items()},
        }


_CACHE: dict = {}


def _cached_wedge(G: Group, kind: str) -> WedgeGroup:
    key = (G.table.tobytes(), G.order, kind)
    W = _CACHE.get(key)
    if W is None or W.G is not G:
        W = wedge_group(G, kind, materialize=False)
        if len(_CACHE) > 256:
            _CACHE.clear()
        _CACHE[key] = W
    return W


def schur_multiplier(G: Group) -> AbelianStructure:
    """``M(G) = ker(G ^ G -> G')``."""
    return _cached_wedge(G, "exterior").kernel


def m_zero_span(G: Group) -> np.ndarray:
    """Kernel coordinates (in the exterior square) of ``x ^ y`` over commuting pairs."""
    return _cached_wedge(G, "exterior").commuting_span()


def bogomolov_tilde(G: Group) -> MultiplierResult:
    """``B~0(G) = M(G) / M0(G)`` by two independent routes, which must agree.

    Route (a) is the kernel of the curly exterior square; route (b) is the
    quotient of the exterior-square kernel by the span of commuting pairs.
    """
    t0 = time.perf_counter()
    ext = _cached_wedge(G, "exterior")
    t1 = time.perf_counter()
    cur = _cached_wedge(G, "curly")
    t2 = time.perf_counter()
    span = ext.commuting_span()
    k = ext.model.rank
    diag = [[m if i == j else 0 for j in range(k)] for i, m in enumerate(ext.model.factors)]
    route_b = quotient_structure(span.tolist(), diag, ncols=k) if k else AbelianStructure()
    route_a = cur.kernel
    if route_a != route_b:
        raise InternalDisagreement(
            f"B~0 of {G.label or 'group'}: curly kernel {route_a} but M/M0 {route_b}")
    m0 = _span_structure(span, ext.model) if k else AbelianStructure()
    return MultiplierResult(ext.kernel, m0, span, route_a, route_a, route_b,
                            timings={"exterior": t1 - t0, "curly": t2 - t1,
                                     "total": time.perf_counter() - t0})


def _span_structure(rows: np.ndarray, model: KernelModel) -> AbelianStructure:
    """Structure of the subgroup generated by ``rows`` in the kernel."""
    out = AbelianStructure()
    for p in sorted(set(model.primes)):
        mask = model.prime_mask(p)
        out = out + subgroup_structure(rows[:, mask], model.mods[mask])
    return out


# ---------------------------------------------------------------------------
# functoriality


@dataclass
class KernelMap:
    """A homomorphism between two kernels, as an integer matrix on summand generators.

    Row ``i`` holds the target coordinates of the image of the i-th source
    generator.
    """

    source: WedgeGroup
    target: WedgeGroup
    matrix: np.ndarray

    @property
    def image_structure(self) -> AbelianStructure:
        return _subgroup_structure_all(self.matrix, self.target.model)

    @property
    def image_order(self) -> int:
        return self.image_structure.order

    @property
    def kernel_order(self) -> int:
        return self.source.kernel.order // self.image_order

    def is_injective(self) -> bool:
        return self.kernel_order == 1

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def then(self, other: "KernelMap") -> "KernelMap":
        """Composite ``other o self``."""
        if other.source.model is not self.target.model:
            raise ValueError("composition of maps with mismatched kernels")
        m = self.matrix @ other.matrix
        if m.size:
            m = m % other.target.model.mods
        return KernelMap(self.source, other.target, m)

    def apply(self, k) -> np.ndarray:
        out = np.asarray(k, dtype=np.int64) @ self.matrix
        return out % self.target.model.mods if out.size else out

    def equals(self, other: "KernelMap") -> bool:
        return (self.matrix.shape == other.matrix.shape
                and np.array_equal(self.matrix, other.matrix))


def _subgroup_structure_all(rows: np.ndarray, model: KernelModel) -> AbelianStructure:
    if not model.rank or not len(rows):
        return AbelianStructure()
    return _span_structure(np.asarray(rows, dtype=np.int64), model)


def induced_map(f: Homomorphism, kind: str = "curly", source: WedgeGroup | None = None,
                target: WedgeGroup | None = None) -> KernelMap:
    """The map on kernels induced by ``w(x, y) -> w(f x, f y)``."""
    _check_kind(kind)
    WG = source or _cached_wedge(f.source, kind)
    WH = target or _cached_wedge(f.target, kind)
    L = WG.model.layout
    H = f.target
    img = f.image
    if WG.model.rank == 0:
        return KernelMap(WG, WH, np.zeros((0, WH.model.rank), dtype=np.int64))
    # images of the section along the spanning tree of G'
    fs = {f.source.identity: WH.one()}
    for d, (p, x, y) in L.tree().items():
        fs[d] = WH.mul(fs[p], WH.pair(int(img[x]), int(img[y])))
    nC = len(L.C)
    images = np.zeros((L.R, WH.model.rank), dtype=np.int64)
    for i, a in enumerate(L.C):
        for j, b in enumerate(L.C):
            e = WH.mul(WH.pair(int(img[a]), int(img[b])), WH.inv(fs[f.source.comm(a, b)]))
            if e[1] != H.identity:
                raise KappaInconsistent("induced image of a kernel generator leaves the kernel")
            images[i * nC + j] = e[0]
    for d1 in L.D[1:]:
        for d2 in L.D[1:]:
            col = L.colC[d1, d2]
            e = WH.mul(WH.mul(fs[d1], fs[d2]), WH.inv(fs[f.source.mul(d1, d2)]))
            if e[1] != H.identity:
                raise KappaInconsistent("induced cocycle value leaves the kernel")
            images[col] = e[0]
    P = WG.model.preimages()
    matrix = np.zeros((WG.model.rank, WH.model.rank), dtype=np.int64)
    for i, p in enumerate(WG.model.primes):
        if WH.model.rank == 0:
            break
        row = (P[i] @ images) % WH.model.mods
        row[~WH.model.prime_mask(p)] = 0
        matrix[i] = row
    # a homomorphism must kill order multiples
    if WH.model.rank and len(matrix):
        check = (matrix * WG.model.mods[:, None]) % WH.model.mods
        if check.any():
            raise KappaInconsistent("induced map does not respect summand orders")
    return KernelMap(WG, WH, matrix)
