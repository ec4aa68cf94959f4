"""Second cohomology with trivial coefficients, the multiplier and B0 from cocycles.

Normalized 2-cochains ``f: G x G -> Z/N`` vanish when either argument is the
identity.  A cocycle is determined by its values ``f(x, s)`` with ``s`` in a
generating set ``S``: the cocycle identity with third argument ``s`` gives
``f(x, ys) = f(x, y) + f(xy, s) - f(y, s)``.  Those values are the
coordinates used here; ``expand[x, y]`` turns them back into ``f(x, y)``.

Everything is done one prime at a time modulo ``p^e``, ``p^e`` exactly
dividing ``N``.  With ``N = |G|``,

    M(G)_p = Z^2(G, Z/p^e) / (B^2 + carry classes),

where the carry class of a homomorphism ``phi: G -> Z/p^e`` with integer
lift ``phi^`` in ``[0, p^e)`` is ``(phi^(x) + phi^(y) - phi^(xy)) / p^e``.
``B0`` is the subgroup of classes whose restriction to every abelian (or
every bicyclic) subgroup dies in that subgroup's own model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .abelian import (
    AbelianStructure,
    CokernelCoords,
    _factor_prime_powers,
    inverse_mod,
    module_snf_mod,
    snf_mod,
    subgroup_structure,
)
from .errors import CapExceeded
from .groups import Group, Subgroup, abelian_subgroups, bicyclic_subgroups, generating_set

COHOMOLOGY_CAP = 32
EXHAUSTIVE_STATES = 2**24
MODES = ("bicyclic", "all-abelian")


@dataclass
class PrimeCocycles:
    """Cocycle data for one prime power ``q = p^e`` exactly dividing the modulus."""

    p: int
    e: int
    kernel_vals: list          # valuations from the cocycle-condition elimination
    V: np.ndarray              # its column transform
    cocycle_basis: np.ndarray  # rows: generators of Z^2 in u-coordinates
    cocycle_orders: np.ndarray
    coboundary_basis: np.ndarray
    carry_basis: np.ndarray
    _Vinv: np.ndarray | None = None

    @property
    def q(self) -> int:
        return self.p**self.e

    def z_coords(self, rows) -> np.ndarray:
        """Coordinates of cocycles (u-vectors) on the cyclic decomposition of ``Z^2``."""
        if self._Vinv is None:
            self._Vinv = inverse_mod(self.V, self.p, self.e)
        keep = self._keep
        w = (np.asarray(rows, dtype=np.int64) % self.q) @ self._Vinv.T % self.q
        shift = np.array([self.p ** (self.e - self.kernel_vals[j]) for j in keep], dtype=np.int64)
        w = w[..., keep]
        if (w % shift).any():
            raise ValueError("vector is not a cocycle")
        return (w // shift) % self.cocycle_orders

    @property
    def _keep(self):
        return [j for j, v in enumerate(self.kernel_vals) if v > 0]


@dataclass
class CocycleSpace:
    G: Group
    N: int
    gens: list
    coordinates: dict            # (x, s) -> u-index
    expand: np.ndarray           # (n, n, k): u-coefficients of f(x, y), entries mod N
    primes: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.coordinates)

    @property
    def cocycle_kernel_basis(self) -> list:
        return [r for pc in self.primes.values() for r in pc.cocycle_basis.tolist()]

    @property
    def coboundary_basis(self) -> list:
        return [r for pc in self.primes.values() for r in pc.coboundary_basis.tolist()]

    @property
    def carry_class_basis(self) -> list:
        return [r for pc in self.primes.values() for r in pc.carry_basis.tolist()]

    def full_cochain(self, u) -> np.ndarray:
        """The ``n x n`` table of ``f`` for a u-vector (mod N)."""
        return (self.expand @ np.asarray(u, dtype=np.int64)) % self.N

    def h2_structure(self) -> AbelianStructure:
        out = AbelianStructure()
        for pc in self.primes.values():
            out = out + _quotient(pc, np.vstack([pc.coboundary_basis]))
        return out

    def h2_order(self) -> int:
        return self.h2_structure().order


def _quotient(pc: PrimeCocycles, sub_rows) -> AbelianStructure:
    return CokernelCoords(pc.z_coords(sub_rows), len(pc.cocycle_orders), pc.p, pc.e,
                          moduli=pc.cocycle_orders).structure


def _expansion(G: Group, S, modulus: int):
    """u-coordinates and the expansion array ``f(x, y) = expand[x, y] . u``."""
    n = G.order
    e = G.identity
    nonid = [x for x in range(n) if x != e]
    coords = {(x, s): i for i, (x, s) in enumerate(itertools.product(nonid, S))}
    k = len(coords)
    U = np.zeros((n, len(S), k), dtype=np.int64)
    for (x, s), i in coords.items():
        U[x, S.index(s), i] = 1
    P = np.zeros((n, n, k), dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    done[e] = True
    order = [e]
    for j, s in enumerate(S):
        if not done[s]:
            P[:, s] = U[:, j]
            done[s] = True
            order.append(s)
    xs = np.arange(n)
    for y in order:
        for j, s in enumerate(S):
            ys = G.mul(y, s)
            if done[ys]:
                continue
            P[:, ys] = (P[:, y] + U[G.table[xs, y], j] - U[y, j][None, :]) % modulus
            done[ys] = True
            order.append(ys)
    return coords, P


def _homs_mod(G: Group, S, p: int, e: int):
    """Generators of ``Hom(G, Z/p^e)`` as value arrays over all elements."""
    q = p**e
    n = G.order
    parent, via, order = G.word(S)
    # phi(x) = sum of phi(s) along the word; write as a matrix over S-values
    W = np.zeros((n, len(S)), dtype=np.int64)
    for x in order[1:]:
        W[x] = W[parent[x]]
        W[x, via[x]] += 1
    rows = (W[G.table] - W[:, None, :] - W[None, :, :]).reshape(-1, len(S)) % q
    rows = rows[rows.any(axis=1)]
    if len(rows):
        vals, V = snf_mod(rows, p, e)
    else:
        vals, V = [e] * len(S), np.eye(len(S), dtype=np.int64)
    homs = []
    for j, v in enumerate(vals):
        if v > 0:
            gen = (V[:, j] * p ** (e - v)) % q
            homs.append((W @ gen) % q)
    return homs


def cocycle_space(G: Group, N: int | None = None, cap: int = COHOMOLOGY_CAP,
                  gens=None) -> CocycleSpace:
    """Cocycles, coboundaries and carry classes modulo each prime power of ``N``."""
    if G.order > cap:
        raise CapExceeded(f"cohomology capped at order {cap}; group has order {G.order}")
    N = G.order if N is None else int(N)
    if N < 1:
        raise ValueError("modulus must be positive")
    n = G.order
    S = list(gens) if gens is not None else (generating_set(G) if n > 1 else [])
    coords, P = _expansion(G, S, N)
    space = CocycleSpace(G, N, S, coords, P)
    k = len(coords)
    if k == 0:
        return space
    t = G.table
    for p, e in sorted(_factor_prime_powers(N).items()):
        q = p**e
        Pq = P % q

        def chunks(Pq=Pq, q=q):
            # (df)(x, y, z) = f(y, z) - f(xy, z) + f(x, yz) - f(x, y)
            Y, Z = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            Y, Z = Y.ravel(), Z.ravel()
            step = max(1, 40000 // (n * n))
            for s in range(0, n, step):
                out = []
                for x in range(s, min(n, s + step)):
                    out.append((Pq[Y, Z] - Pq[t[x, Y], Z] + Pq[x, t[Y, Z]] - Pq[x, Y]) % q)
                yield np.vstack(out)

        vals, V = module_snf_mod(chunks, k, p, e, seed=p)
        # right kernel: columns V[:, j] * p^(e - v_j)
        basis, orders = [], []
        for j, v in enumerate(vals):
            if v > 0:
                basis.append((V[:, j] * p ** (e - v)) % q)
                orders.append(p**v)
        cob = []
        Sidx = np.array(S)
        for g in range(n):
            if g == G.identity:
                continue
            phi = np.zeros(n, dtype=np.int64)
            phi[g] = 1
            cob.append(_cochain_to_u(phi[:, None] + phi[Sidx][None, :] - phi[t[:, Sidx]], coords, S, q))
        carry = []
        for phi in _homs_mod(G, S, p, e):
            c = (phi[:, None] + phi[Sidx][None, :] - phi[t[:, Sidx]]) // q
            carry.append(_cochain_to_u(c, coords, S, q))
        space.primes[p] = PrimeCocycles(
            p, e, vals, V,
            np.array(basis, dtype=np.int64).reshape(-1, k),
            np.array(orders, dtype=np.int64),
            np.array(cob, dtype=np.int64).reshape(-1, k),
            np.array(carry, dtype=np.int64).reshape(-1, k))
    return space


def _cochain_to_u(values: np.ndarray, coords: dict, S, q: int) -> np.ndarray:
    """u-vector from an ``n x |S|`` table of values ``f(x, s)``."""
    u = np.zeros(len(coords), dtype=np.int64)
    for (x, s), i in coords.items():
        u[i] = values[x, S.index(s)] % q
    return u


# ---------------------------------------------------------------------------
# multiplier and B0


@dataclass
class B0Result:
    M_structure: AbelianStructure
    B0_structure: AbelianStructure
    mode: str
    families: int = 0

    def to_dict(self) -> dict:
        return {"multiplier": self.M_structure.to_list(), "B0": self.B0_structure.to_list(),
                "mode": self.mode}


def _model_rows(pc: PrimeCocycles) -> np.ndarray:
    return np.vstack([pc.coboundary_basis, pc.carry_basis])


def _check_modulus(G: Group, modulus):
    if modulus is not None and int(modulus) % G.order:
        raise ValueError(f"modulus {modulus} must be a multiple of |G| = {G.order}")


def multiplier_from_cohomology(G: Group, cap: int = COHOMOLOGY_CAP, modulus: int | None = None) -> AbelianStructure:
    """``M(G)`` as cocycles modulo coboundaries and carry classes (modulus ``|G|`` by default)."""
    _check_modulus(G, modulus)
    space = cocycle_space(G, modulus, cap=cap)
    out = AbelianStructure()
    for pc in space.primes.values():
        out = out + _quotient(pc, _model_rows(pc))
    return out


def _maximal(subs: list[Subgroup]) -> list[Subgroup]:
    subs = sorted(subs, key=lambda H: -H.order)
    keep: list[Subgroup] = []
    for H in subs:
        if not any(H.issubset(K) for K in keep):
            keep.append(H)
    return keep


def _family(G: Group, mode: str) -> list[Subgroup]:
    if mode == "bicyclic":
        subs = bicyclic_subgroups(G)
    elif mode == "all-abelian":
        subs = abelian_subgroups(G)
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    # restriction to a subgroup factors through any larger one in the family,
    # and cyclic groups have no multiplier
    return [A for A in _maximal(subs) if not _is_cyclic(A)]


def _is_cyclic(A: Subgroup) -> bool:
    G = A.parent
    return int(max(G.element_orders[list(A.elements)])) == A.order


def b0_cohomological(G: Group, mode: str = "bicyclic", cap: int = COHOMOLOGY_CAP,
                     modulus: int | None = None) -> B0Result:
    """``B0(G)``: classes of ``M(G)`` restricting trivially to every subgroup in the family."""
    _check_modulus(G, modulus)
    space = cocycle_space(G, modulus, cap=cap)
    family = _family(G, mode) if G.order > 1 else []
    M = AbelianStructure()
    B0 = AbelianStructure()
    for p, pc in space.primes.items():
        model = CokernelCoords(pc.z_coords(_model_rows(pc)), len(pc.cocycle_orders), p, pc.e,
                               moduli=pc.cocycle_orders)
        M = M + model.structure
        if model.structure.is_trivial:
            continue
        # lattice of admissible z (coordinates on Z^2), kept as generator rows
        nz = len(pc.cocycle_orders)
        B = np.vstack([np.eye(nz, dtype=np.int64)])
        zgens = pc.cocycle_basis  # u-vectors of the z-basis
        for A in family:
            cond = _restriction_condition(space, pc, A, zgens)
            if cond is None:
                continue
            H, moduli = cond
            B = _restrict_lattice(B, H, moduli, pc)
            if not len(B):
                break
        rows = model.coords(B) if len(B) else np.zeros((0, len(model.mods)), dtype=np.int64)
        B0 = B0 + subgroup_structure(rows, model.mods)
    return B0Result(M, B0, mode, len(family))


def _restriction_condition(space: CocycleSpace, pc: PrimeCocycles, A: Subgroup, zgens):
    """Linear condition ``z H = 0 (mod moduli)`` for the restriction to ``A`` to vanish."""
    G = space.G
    Ag, incl = A.as_group()
    SA = generating_set(Ag)
    coordsA, PA = _expansion(Ag, SA, pc.q)
    kA = len(coordsA)
    if kA == 0:
        return None
    # restriction: f|_A (a, s') = f(incl a, incl s') in A's u-coordinates
    R = np.zeros((kA, space.k), dtype=np.int64)
    for (a, s), i in coordsA.items():
        R[i] = space.expand[incl(a), incl(s)] % pc.q
    # A's own trivial classes: coboundaries plus carry classes
    t = Ag.table
    Sidx = np.array(SA)
    rows = []
    for g in range(Ag.order):
        if g == Ag.identity:
            continue
        phi = np.zeros(Ag.order, dtype=np.int64)
        phi[g] = 1
        rows.append(_cochain_to_u(phi[:, None] + phi[Sidx][None, :] - phi[t[:, Sidx]], coordsA, SA, pc.q))
    for phi in _homs_mod(Ag, SA, pc.p, pc.e):
        c = (phi[:, None] + phi[Sidx][None, :] - phi[t[:, Sidx]]) // pc.q
        rows.append(_cochain_to_u(c, coordsA, SA, pc.q))
    W = CokernelCoords(np.array(rows), kA, pc.p, pc.e)
    if not len(W.mods):
        return None
    # z -> u = z . zgens -> R u -> coordinates modulo W
    H = (zgens @ R.T) % pc.q
    H = W.coords(H)
    return H, W.mods


def _restrict_lattice(B: np.ndarray, H: np.ndarray, moduli: np.ndarray, pc: PrimeCocycles) -> np.ndarray:
    """Generators of ``{z in span(B) : z H = 0 mod moduli}`` (z taken modulo the cocycle orders)."""
    p, e, q = pc.p, pc.e, pc.q
    scale = np.array([p ** (e - int(round(np.log(m) / np.log(p)))) for m in moduli], dtype=np.int64)
    rows = np.vstack([B, np.diag(pc.cocycle_orders)])
    M = (rows @ H % q) * scale % q          # y . M = 0 mod q  <=>  condition on y . rows
    vals, V = snf_mod(M.T, p, e)
    ker = [(V[:, j] * p ** (e - v)) % q for j, v in enumerate(vals) if v > 0]
    if not ker:
        return np.zeros((0, B.shape[1]), dtype=np.int64)
    out = (np.array(ker) @ rows) % q
    out = out % pc.cocycle_orders
    out = out[out.any(axis=1)]
    return out if len(out) else np.zeros((0, B.shape[1]), dtype=np.int64)


# ---------------------------------------------------------------------------
# brute force


def exhaustive_h2_oracle(G: Group, N: int, states_cap: int = EXHAUSTIVE_STATES) -> int:
    """``|H^2(G, Z/N)|`` by listing every normalized cochain."""
    n = G.order
    if n == 1:
        return 1
    m = (n - 1) ** 2
    if N**m > states_cap:
        raise CapExceeded(f"{N}^{m} cochains exceed the enumeration cap {states_cap}")
    e = G.identity
    nonid = [x for x in range(n) if x != e]
    pos = np.full(n, -1, dtype=np.int64)
    pos[nonid] = np.arange(n - 1)
    t = G.table
    # every triple's cocycle condition, as index tuples into the (n-1)^2 coordinates
    triples = []
    for x in nonid:
        for y in nonid:
            for z in nonid:
                terms = [(y, z, 1), (t[x, y], z, -1), (x, t[y, z], 1), (x, y, -1)]
                triples.append([(int(pos[a]) * (n - 1) + int(pos[b]), s)
                                for a, b, s in terms if a != e and b != e])
    total = N**m
    count = 0
    chunk = 1 << 16
    powers = N ** np.arange(m, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        f = (idx[:, None] // powers[None, :]) % N
        ok = np.ones(len(idx), dtype=bool)
        for terms in triples:
            acc = np.zeros(len(idx), dtype=np.int64)
            for c, s in terms:
                acc += s * f[:, c]
            ok &= (acc % N) == 0
        count += int(ok.sum())
    # coboundaries d(phi)(x, y) = phi(x) + phi(y) - phi(xy)
    cob = set()
    for phi in itertools.product(range(N), repeat=n - 1):
        full = np.zeros(n, dtype=np.int64)
        full[nonid] = phi
        d = (full[nonid][:, None] + full[nonid][None, :] - full[t[np.ix_(nonid, nonid)]]) % N
        cob.add(d.tobytes())
    return count // len(cob)
