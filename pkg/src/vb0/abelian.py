"""Smith normal form and finite abelian group structure.

Two engines live here.  :func:`smith_normal_form` works over the integers with
arbitrary-precision entries and optional unimodular transforms; it is the
reference.  :func:`snf_mod` and :func:`module_snf_mod` eliminate over
``Z/p^E`` with numpy and are used for the large relation systems that appear
in the multiplier computations.  Tests check the two against each other.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import InconsistentSpan, NotAbelian

# ---------------------------------------------------------------------------
# structures


def _factor_prime_powers(d: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= d:
        while d % p == 0:
            out[p] = out.get(p, 0) + 1
            d //= p
        p += 1
    if d > 1:
        out[d] = out.get(d, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(_factor_prime_powers(n))


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant factors ``d1 | d2 | ... | dk`` (all >= 2) plus a free rank."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariant_factors)
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"invariant factors {inv} do not form a divisibility chain")
        if any(d < 2 for d in inv):
            raise ValueError("invariant factors must be at least 2")
        object.__setattr__(self, "invariant_factors", inv)
        object.__setattr__(self, "free_rank", int(self.free_rank))

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], free_rank: int = 0) -> "AbelianStructure":
        """From any list of cyclic orders; ``0`` entries count as free summands."""
        powers = []
        for d in diagonal:
            d = abs(int(d))
            if d == 0:
                free_rank += 1
            elif d > 1:
                powers.extend(p**k for p, k in _factor_prime_powers(d).items())
        return cls.from_prime_powers(powers, free_rank)

    @classmethod
    def from_prime_powers(cls, powers: Iterable[int], free_rank: int = 0) -> "AbelianStructure":
        by_prime = defaultdict(list)
        for q in powers:
            if q > 1:
                (p,) = _factor_prime_powers(q)
                by_prime[p].append(q)
        if not by_prime:
            return cls((), free_rank)
        k = max(len(v) for v in by_prime.values())
        factors = [1] * k
        for qs in by_prime.values():
            qs.sort(reverse=True)
            for i, q in enumerate(qs):
                factors[i] *= q
        return cls(tuple(sorted(factors)), free_rank)

    @property
    def order(self) -> int:
        if self.free_rank:
            return 0
        return math.prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def elementary_divisors(self) -> list[int]:
        out = []
        for d in self.invariant_factors:
            out.extend(p**k for p, k in _factor_prime_powers(d).items())
        return sorted(out)

    def primary_part(self, p: int) -> "AbelianStructure":
        return AbelianStructure.from_prime_powers(q for q in self.elementary_divisors() if q % p == 0)

    def __add__(self, other: "AbelianStructure") -> "AbelianStructure":
        """Direct sum."""
        return AbelianStructure.from_prime_powers(
            self.elementary_divisors() + other.elementary_divisors(), self.free_rank + other.free_rank
        )

    def __str__(self):
        parts = [f"C{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "1"

    def to_list(self) -> list[int]:
        return list(self.invariant_factors) + [0] * self.free_rank


def merge(*structures: AbelianStructure) -> AbelianStructure:
    out = AbelianStructure()
    for s in structures:
        out = out + s
    return out


# ---------------------------------------------------------------------------
# integer Smith normal form


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, np.ndarray):
        return [[int(x) for x in row] for row in M.tolist()]
    return [[int(x) for x in row] for row in M]


def smith_normal_form(M, ncols: int | None = None, transforms: bool = False):
    """Smith normal form over the integers.

    Returns ``(D, rank, invariants)`` where ``invariants`` lists the nonzero
    diagonal entries in divisibility order.  With ``transforms=True`` the
    result is ``(D, rank, invariants, U, V)`` with ``U M V = D`` and U, V
    unimodular.
    """
    A = _as_rows(M)
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if any(len(r) != n for r in A):
        raise InconsistentSpan("rows of unequal length")
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row dst -= f * row src
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] -= f * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] -= f * us[k]

    def add_col(dst, src, f):
        for row in A:
            if row[src]:
                row[dst] -= f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= f * row[src]

    t = 0
    while t < min(m, n):
        # pivot of least absolute value
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(i, t, q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(j, t, q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder into the pivot slot and repeat
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < best[0]:
                        best = (abs(A[i][t]), i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < best[0]:
                        best = (abs(A[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    rank = t
    invariants = tuple(A[i][i] for i in range(rank))
    if transforms:
        return A, rank, invariants, U, V
    return A, rank, invariants


def structure_from_relations(rows, ncols: int) -> AbelianStructure:
    """``Z^ncols / span(rows)``."""
    rows = [r for r in _as_rows(rows) if any(r)]
    if not rows:
        return AbelianStructure((), ncols)
    _, rank, inv = smith_normal_form(rows, ncols=ncols)
    return AbelianStructure.from_diagonal(inv, free_rank=ncols - rank)


def quotient_structure(gens_of_sub, ambient_relations, ncols: int | None = None) -> AbelianStructure:
    """Structure of ``<Z^n | ambient_relations>`` modulo the subgroup generated by ``gens_of_sub``.

    Both arguments are integer row lists of the same width (stacked SNF).
    """
    a = _as_rows(ambient_relations)
    g = _as_rows(gens_of_sub)
    widths = {len(r) for r in a + g}
    if ncols is not None:
        widths.add(ncols)
    if len(widths) > 1:
        raise InconsistentSpan(f"rows of different widths {sorted(widths)}")
    if not widths:
        return AbelianStructure()
    return structure_from_relations(a + g, widths.pop())


def lattice_quotient(sub, sup) -> AbelianStructure:
    """Structure of ``span(sup) / span(sub)``; raises InconsistentSpan unless sub lies in sup."""
    sup_rows = [r for r in _as_rows(sup) if any(r)]
    sub_rows = [r for r in _as_rows(sub) if any(r)]
    if not sup_rows:
        if sub_rows:
            raise InconsistentSpan("nonzero sublattice of the zero lattice")
        return AbelianStructure()
    n = len(sup_rows[0])
    basis = hermite_basis(sup_rows, n)
    coords = [solve_in_lattice(basis, r) for r in sub_rows]
    if any(c is None for c in coords):
        raise InconsistentSpan("sublattice is not contained in the ambient lattice")
    return structure_from_relations(coords, len(basis)) if coords else AbelianStructure((), len(basis))


def hermite_basis(rows, n: int) -> list[list[int]]:
    """A row-echelon basis of the integer row span (nonzero rows only)."""
    A = [list(r) for r in _as_rows(rows) if any(r)]
    basis = []
    col = 0
    while A and col < n:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in A if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        A = rest
        col += 1
    return basis


def solve_in_lattice(basis, v):
    """Integer coefficients expressing ``v`` in an echelon ``basis``, or None."""
    v = list(v)
    coeffs = []
    for row in basis:
        col = next(j for j, x in enumerate(row) if x)
        if v[col] % row[col]:
            return None
        q = v[col] // row[col]
        coeffs.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return coeffs if not any(v) else None


def integer_kernel(M, ncols: int) -> list[list[int]]:
    """A basis of ``{x in Z^ncols : M x = 0}``."""
    rows = _as_rows(M)
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    _, rank, _, _, V = smith_normal_form(rows, ncols=ncols, transforms=True)
    return [[V[i][j] for i in range(ncols)] for j in range(rank, ncols)]


# ---------------------------------------------------------------------------
# elimination over Z/p^E


def _valuation_mask(A: np.ndarray, p: int, E: int):
    """Smallest p-adic valuation present in ``A`` (entries mod p^E) and a position."""
    # units in the leading column are by far the common case
    units = np.flatnonzero(A[:, 0] % p)
    if len(units):
        return 0, (int(units[0]), 0)
    pk = 1
    for v in range(E):
        pk *= p
        hit = np.argwhere(A % pk != 0)
        if len(hit):
            return v, tuple(hit[0])
    return None, None


def snf_mod(A, p: int, E: int):
    """Diagonalize ``A`` over ``Z/p^E`` with row operations and tracked column operations.

    Returns ``(vals, V)``: ``V`` is invertible mod ``p^E`` and the row module of
    ``A @ V`` is spanned by ``p^vals[j] e_j`` (``vals[j] == E`` means zero).
    """
    q = p**E
    A = np.array(A, dtype=np.int64) % q
    m, n = A.shape if A.ndim == 2 else (0, 0)
    if A.ndim != 2:
        A = A.reshape(0, 0)
    V = np.eye(n, dtype=np.int64)
    vals = [E] * n
    t = 0
    while t < min(m, n):
        v, pos = _valuation_mask(A[t:, t:], p, E)
        if v is None:
            break
        i, j = pos[0] + t, pos[1] + t
        if i != t:
            A[[t, i]] = A[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        pv = p**v
        unit = int(A[t, t]) // pv
        A[t] = (A[t] * pow(unit, -1, q)) % q
        # clear the pivot column
        col = A[t + 1:, t] // pv
        nz = np.flatnonzero(col)
        if len(nz):
            rows = nz + t + 1
            A[rows] = (A[rows] - col[nz, None] * A[t][None, :]) % q
        # clear the pivot row with column operations (column t is now zero off the pivot)
        f = A[t, t + 1:] // pv
        nzc = np.flatnonzero(f)
        if len(nzc):
            cols = nzc + t + 1
            A[t, cols] = 0
            V[:, cols] = (V[:, cols] - V[:, [t]] * f[nzc][None, :]) % q
        vals[t] = v
        t += 1
    return vals, V


def _matmul_mod(X: np.ndarray, Y: np.ndarray, q: int) -> np.ndarray:
    """Exact ``X @ Y mod q`` for nonnegative entries below q."""
    k = X.shape[1]
    # float64 is exact while every partial sum stays below 2^53
    step = max(1, int(2**52 // (q * q)))
    out = np.zeros((X.shape[0], Y.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        part = X[:, s:s + step].astype(np.float64) @ Y[s:s + step].astype(np.float64)
        out = (out + np.rint(part).astype(np.int64) % q) % q
    return out


def _sketch_into(C: np.ndarray, block: np.ndarray, q: int, rng):
    """Add random combinations of consecutive segments of ``block`` to the rows of C.

    Each input row lands in exactly one row of C with a random coefficient;
    which row is rotated randomly per block.
    """
    k, n = C.shape
    m = len(block)
    seg = -(-m // k)
    coef = rng.integers(1, q, size=m, dtype=np.int64)
    scaled = block * coef[:, None]
    if seg * k != m:
        scaled = np.vstack([scaled, np.zeros((seg * k - m, n), dtype=np.int64)])
    sums = scaled.reshape(k, seg, n).sum(axis=1) % q
    C += np.roll(sums, int(rng.integers(0, k)), axis=0)
    C %= q


def _default_check(chunks, q: int):
    def check(Vk: np.ndarray, mods: np.ndarray, budget: int):
        failing = []
        for block in chunks():
            block = np.asarray(block, dtype=np.int64) % q
            if not len(block):
                continue
            X = _matmul_mod(block, Vk, q)
            bad = np.flatnonzero((X % mods[None, :]).any(axis=1))
            if len(bad):
                failing.append(block[bad[:budget]])
                budget -= min(budget, len(bad))
            if budget <= 0:
                break
        return np.vstack(failing) if failing else None
    return check


def module_snf_mod(chunks: Callable[[], Iterator[np.ndarray]], n: int, p: int, E: int,
                   seed: int = 0, extra: int = 24, max_rounds: int = 200, check=None):
    """:func:`snf_mod` for a row module given as a stream of row blocks.

    The rows are first sketched into ``n + extra`` sparse random combinations.
    The candidate answer is then verified against every original row: a row
    ``x`` lies in the sketched module iff ``(x V)_j`` is divisible by
    ``p^vals[j]`` for the columns with ``vals[j] > 0`` (the others impose
    nothing).  Failing rows are added and the loop repeats, so the answer is
    exact and only the running time depends on the seed.

    ``check(Vk, mods, budget)`` may replace the default verification pass; it
    must return up to ``budget`` failing original rows, or None.
    """
    q = p**E
    rng = np.random.default_rng(seed)
    k = n + extra
    C = np.zeros((k, n), dtype=np.int64)
    for block in chunks():
        block = np.asarray(block, dtype=np.int64) % q
        if len(block):
            _sketch_into(C, block, q, rng)
    check = check or _default_check(chunks, q)
    for _ in range(max_rounds):
        vals, V = snf_mod(C, p, E)
        keep = np.array([j for j, v in enumerate(vals) if v > 0], dtype=np.int64)
        failing = None
        if len(keep):
            mods = np.array([p ** vals[j] for j in keep], dtype=np.int64)
            failing = check(V[:, keep], mods, n)
        if failing is None or not len(failing):
            return vals, V
        C = np.vstack([C[np.any(C, axis=1)], np.asarray(failing, dtype=np.int64) % q])
    raise RuntimeError("row-module compression did not converge")


def inverse_mod(V: np.ndarray, p: int, E: int) -> np.ndarray:
    """Inverse of a square matrix that is invertible modulo ``p``, over ``Z/p^E``."""
    q = p**E
    n = V.shape[0]
    A = np.hstack([np.array(V, dtype=np.int64) % q, np.eye(n, dtype=np.int64)])
    for t in range(n):
        rows = np.flatnonzero(A[t:, t] % p)
        if not len(rows):
            raise ValueError("matrix is not invertible modulo p")
        i = int(rows[0]) + t
        if i != t:
            A[[t, i]] = A[[i, t]]
        A[t] = (A[t] * pow(int(A[t, t]), -1, q)) % q
        f = A[:, t].copy()
        f[t] = 0
        nz = np.flatnonzero(f)
        if len(nz):
            A[nz] = (A[nz] - f[nz, None] * A[t][None, :]) % q
    return A[:, n:]


def rank_mod_prime(chunks: Callable[[], Iterator[np.ndarray]], n: int, q: int, seed: int = 1,
                   extra: int = 24) -> int:
    """Rank over ``GF(q)`` of a streamed row set (lower bound exact after verification)."""
    vals, _ = module_snf_mod(chunks, n, q, 1, seed=seed, extra=extra)
    return sum(1 for v in vals if v == 0)


# ---------------------------------------------------------------------------
# groups


def abelian_invariants(H) -> AbelianStructure:
    """Invariant factors of an abelian :class:`Group` or :class:`Subgroup`.

    Relations are the Schreier relations of the generator action: for every
    element ``e`` with coordinate vector ``c_e`` and generator ``h_i``,
    ``c_e + e_i - c_{e h_i}``.
    """
    from .groups import Group, Subgroup, generating_set

    if isinstance(H, Subgroup):
        G = H.parent
        elems = list(H.elements)
    else:
        G = H
        elems = list(range(G.order))
    sub = np.array(elems)
    if not np.array_equal(G.table[np.ix_(sub, sub)], G.table[np.ix_(sub, sub)].T):
        raise NotAbelian(f"group of order {len(elems)} is not abelian")
    if len(elems) == 1:
        return AbelianStructure()
    gens = generating_set(G, H if isinstance(H, Subgroup) else None)
    k = len(gens)
    coord = {G.identity: [0] * k}
    queue = [G.identity]
    rels = []
    for e in queue:
        for i, g in enumerate(gens):
            f = G.mul(e, g)
            step = list(coord[e])
            step[i] += 1
            if f not in coord:
                coord[f] = step
                queue.append(f)
            else:
                rel = [a - b for a, b in zip(step, coord[f])]
                if any(rel):
                    rels.append(rel)
    return structure_from_relations(rels, k)


def subgroup_structure(rows, mods) -> AbelianStructure:
    """Structure of the subgroup generated by ``rows`` in ``Z/mods[0] + Z/mods[1] + ...``."""
    mods = np.asarray(mods, dtype=np.int64)
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(mods))
    if not len(mods) or not len(rows):
        return AbelianStructure()
    rows = np.unique(rows % mods, axis=0)
    rows = [r for r in rows.tolist() if any(r)]
    if not rows:
        return AbelianStructure()
    r, k = len(rows), len(mods)
    # x in Z^r maps to sum x_i rows_i; the subgroup is Z^r modulo the x mapping to 0,
    # which is the projection of the integer kernel of [rows^T | diag(mods)]
    A = [[rows[i][j] for i in range(r)] + [int(mods[j]) if jj == j else 0 for jj in range(k)]
         for j in range(k)]
    ker = integer_kernel(A, r + k)
    return structure_from_relations([v[:r] for v in ker], r)


class CokernelCoords:
    """Coordinates on ``(Z/p^e)^n / span(rows)`` as a sum of cyclic p-groups.

    ``moduli`` optionally replaces ``p^e`` per coordinate by ``p^(v_i)``.
    """

    def __init__(self, rows, n: int, p: int, e: int, moduli=None):
        q = p**e
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, n) % q
        if moduli is not None:
            moduli = np.asarray(moduli, dtype=np.int64)
            diag = np.diag(moduli % q)
            rows = np.vstack([diag, rows])
        self.p, self.e, self.q, self.n = p, e, q, n
        if n == 0:
            self.V = np.zeros((0, 0), dtype=np.int64)
            self.keep = np.zeros(0, dtype=np.int64)
            self.mods = np.zeros(0, dtype=np.int64)
        else:
            vals, V = snf_mod(rows, p, e) if len(rows) else ([e] * n, np.eye(n, dtype=np.int64))
            self.V = V
            self.keep = np.array([j for j, v in enumerate(vals) if v > 0], dtype=np.int64)
            self.mods = np.array([p ** vals[j] for j in self.keep], dtype=np.int64)
        self.structure = AbelianStructure.from_prime_powers(self.mods.tolist())

    def coords(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.q
        return (v @ self.V[:, self.keep]) % self.mods if len(self.keep) else v[..., :0]
