"""Rings of scalars for graded bilinear pairings of f.g. abelian groups.

A pairing is a bilinear map f: A x B -> C recorded by its value table on
fixed direct-sum coordinates.  A scalar of f is a triple of endomorphisms
(phi1 of A, phi2 of B, phi0 of C) satisfying

    f(phi1 a, b) = phi0 f(a, b) = f(a, phi2 b)      for all a, b.

Triples add entrywise and multiply by composition, and the set of all of
them modulo triples of null maps is a ring with identity.  This module
computes that ring exactly: a lattice basis for the solution set, additive
invariant factors, unit coordinates, the multiplication table, restrictions
by extra linear side conditions, intersections, and prime factorizations of
the zero ideal when the ring is finite.

B and C may carry a block grading (one block per layer of a graded
pairing); the blocks only matter to restriction constraints, which address
a single block of phi2 or phi0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .intlinalg import (
    hnf_basis,
    identity as eye,
    inverse_unimodular,
    lattice_intersect,
    mat_mul,
    snf,
    solve_congruences,
    solve_lattice,
    vec_mat,
)

Period = Optional[int]
Cell = Tuple[int, ...]


class ScalarRingError(ValueError):
    pass


def _offsets(blocks: Sequence[int]) -> List[int]:
    out = [0]
    for b in blocks:
        out.append(out[-1] + b)
    return out


@dataclass(frozen=True)
class Pairing:
    """Bilinear map A x B -> C on invariant-factor coordinates.

    Periods are None for an infinite cyclic factor, else the factor's order.
    table[s][t] is the C-coordinate vector of f(a_s, b_t).
    """

    periods_a: Tuple[Period, ...]
    periods_b: Tuple[Period, ...]
    periods_c: Tuple[Period, ...]
    table: Tuple[Tuple[Cell, ...], ...]
    b_blocks: Optional[Tuple[int, ...]] = None
    c_blocks: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        na, nb, nc = len(self.periods_a), len(self.periods_b), len(self.periods_c)
        for per in self.periods_a + self.periods_b + self.periods_c:
            if per is not None and per < 1:
                raise ScalarRingError("periods must be None or positive")
        if self.b_blocks is None:
            object.__setattr__(self, "b_blocks", (nb,) if nb else ())
        if self.c_blocks is None:
            object.__setattr__(self, "c_blocks", (nc,) if nc else ())
        if sum(self.b_blocks) != nb or sum(self.c_blocks) != nc:
            raise ScalarRingError("block sizes do not add up")
        if len(self.table) != na:
            raise ScalarRingError("table must have one row per A generator")
        fixed = []
        for s, row in enumerate(self.table):
            if len(row) != nb:
                raise ScalarRingError("table row width disagrees with B")
            new_row = []
            for t, cell in enumerate(row):
                if len(cell) != nc:
                    raise ScalarRingError("table cell width disagrees with C")
                cell = self.reduce_c(cell)
                ea, eb = self.periods_a[s], self.periods_b[t]
                g = None
                if ea is not None:
                    g = ea
                if eb is not None:
                    g = eb if g is None else _gcd(g, eb)
                if g is not None:
                    for k, v in enumerate(cell):
                        per = self.periods_c[k]
                        bad = v * g != 0 if per is None else (v * g) % per != 0
                        if bad:
                            raise ScalarRingError(
                                f"table value at ({s},{t}) has order larger "
                                "than its arguments allow")
                new_row.append(cell)
            fixed.append(tuple(new_row))
        object.__setattr__(self, "table", tuple(fixed))

    def reduce_c(self, cell: Sequence[int]) -> Cell:
        return tuple(
            v if per is None else v % per
            for v, per in zip(cell, self.periods_c))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def multiplication_pairing(n: int) -> Pairing:
    """Multiplication Z/n x Z/n -> Z/n; its scalar ring is Z/n itself."""
    if n < 1:
        raise ScalarRingError("modulus must be positive")
    return Pairing((n,), (n,), (n,), (((1,),),))


class _Layout:
    """Index bookkeeping for the flattened unknown vector.

    Order: phi1 row-major (na x na), then phi2 (nb x nb), then phi0
    (nc x nc).  Matrices act on column vectors of coordinates.
    """

    def __init__(self, pairing: Pairing):
        self.na = len(pairing.periods_a)
        self.nb = len(pairing.periods_b)
        self.nc = len(pairing.periods_c)
        self.o1 = 0
        self.o2 = self.na * self.na
        self.o0 = self.o2 + self.nb * self.nb
        self.total = self.o0 + self.nc * self.nc

    def idx1(self, r: int, c: int) -> int:
        return self.o1 + r * self.na + c

    def idx2(self, r: int, c: int) -> int:
        return self.o2 + r * self.nb + c

    def idx0(self, r: int, c: int) -> int:
        return self.o0 + r * self.nc + c


def _endo_wd_rows(lay: _Layout, pairing: Pairing):
    """Congruences making each matrix a well-defined endomorphism."""
    rows = []
    slots = (
        (lay.idx1, lay.na, pairing.periods_a),
        (lay.idx2, lay.nb, pairing.periods_b),
        (lay.idx0, lay.nc, pairing.periods_c),
    )
    for idx, n, periods in slots:
        for c in range(n):
            d = periods[c]
            if d is None:
                continue
            for r in range(n):
                row: Dict[int, int] = {idx(r, c): d}
                rows.append((row, 0 if periods[r] is None else periods[r]))
    return rows


def _base_system(pairing: Pairing):
    """All congruences defining the scalar triples, as sparse rows."""
    lay = _Layout(pairing)
    rows = _endo_wd_rows(lay, pairing)
    f = pairing.table
    for s in range(lay.na):
        for t in range(lay.nb):
            for ell in range(lay.nc):
                per = pairing.periods_c[ell]
                mod = 0 if per is None else per
                row1: Dict[int, int] = {}
                for r in range(lay.na):
                    v = f[r][t][ell]
                    if v:
                        row1[lay.idx1(r, s)] = row1.get(lay.idx1(r, s), 0) + v
                row2: Dict[int, int] = {}
                for r in range(lay.nb):
                    v = f[s][r][ell]
                    if v:
                        row2[lay.idx2(r, t)] = row2.get(lay.idx2(r, t), 0) + v
                for k in range(lay.nc):
                    v = f[s][t][k]
                    if v:
                        i = lay.idx0(ell, k)
                        row1[i] = row1.get(i, 0) - v
                        row2[i] = row2.get(i, 0) - v
                if row1:
                    rows.append((row1, mod))
                if row2:
                    rows.append((row2, mod))
    return lay, rows


def _densify(sparse_rows, width: int):
    rows = []
    moduli = []
    for d, mod in sparse_rows:
        row = [0] * width
        for i, v in d.items():
            row[i] = v
        rows.append(row)
        moduli.append(mod)
    return rows, moduli


# --------------------------------------------------------------------------
# restriction constraints


@dataclass(frozen=True)
class HomCompat:
    """Require phi2 (block b_block) to intertwine with phi0 (block c_block)
    through a fixed linear map e between the blocks: phi2 . e == e . phi0."""

    e: Tuple[Tuple[int, ...], ...]
    c_block: int
    b_block: int


@dataclass(frozen=True)
class InvariantSubmodule:
    """Require one matrix block to map a marked submodule into itself.

    which is "phi1", "phi2" or "phi0"; block indexes the grading of the
    matching module (None for phi1, which is ungraded); gens are block-local
    coordinate vectors spanning the submodule.
    """

    which: str
    block: Optional[int]
    gens: Tuple[Tuple[int, ...], ...]


def _block_geometry(pairing: Pairing, lay: _Layout, which: str,
                    block: Optional[int]):
    if which == "phi1":
        if block is not None:
            raise ScalarRingError("phi1 carries no grading")
        return lay.idx1, lay.na, 0, lay.na, pairing.periods_a
    if which == "phi2":
        offs = _offsets(pairing.b_blocks)
        o = offs[block]
        size = pairing.b_blocks[block]
        return lay.idx2, lay.nb, o, size, pairing.periods_b[o:o + size]
    if which == "phi0":
        offs = _offsets(pairing.c_blocks)
        o = offs[block]
        size = pairing.c_blocks[block]
        return lay.idx0, lay.nc, o, size, pairing.periods_c[o:o + size]
    raise ScalarRingError(f"unknown matrix name {which!r}")


def _constraint_rows(pairing: Pairing, lay: _Layout, con, aux_base: int):
    """Sparse congruence rows for one constraint; returns (rows, naux)."""
    rows = []
    if isinstance(con, HomCompat):
        boffs = _offsets(pairing.b_blocks)
        coffs = _offsets(pairing.c_blocks)
        bo, sb = boffs[con.b_block], pairing.b_blocks[con.b_block]
        co, sc = coffs[con.c_block], pairing.c_blocks[con.c_block]
        e = con.e
        if len(e) != sb or any(len(r) != sc for r in e):
            raise ScalarRingError("intertwiner shape disagrees with blocks")
        for r in range(sb):
            per = pairing.periods_b[bo + r]
            mod = 0 if per is None else per
            for t in range(sc):
                row: Dict[int, int] = {}
                for k in range(sb):
                    if e[k][t]:
                        i = lay.idx2(bo + r, bo + k)
                        row[i] = row.get(i, 0) + e[k][t]
                for k in range(sc):
                    if e[r][k]:
                        i = lay.idx0(co + k, co + t)
                        row[i] = row.get(i, 0) - e[r][k]
                if row:
                    rows.append((row, mod))
        return rows, 0
    if isinstance(con, InvariantSubmodule):
        idx, nm, o, size, periods = _block_geometry(
            pairing, lay, con.which, con.block)
        lat = [list(g) for g in con.gens if any(g)]
        for r, per in enumerate(periods):
            if per is not None:
                lat.append([per if k == r else 0 for k in range(size)])
        naux = 0
        for g in con.gens:
            if not any(g):
                continue
            if len(g) != size:
                raise ScalarRingError("generator width disagrees with block")
            base = aux_base + naux
            naux += len(lat)
            for r in range(size):
                row: Dict[int, int] = {}
                for k in range(size):
                    if g[k]:
                        i = idx(o + r, o + k)
                        row[i] = row.get(i, 0) + g[k]
                for j, lrow in enumerate(lat):
                    if lrow[r]:
                        row[base + j] = -lrow[r]
                if row:
                    rows.append((row, 0))
        return rows, naux
    raise ScalarRingError(f"unknown constraint {con!r}")


# --------------------------------------------------------------------------
# the ring itself


class ScalarRing:
    """The ring of scalar triples of a pairing, with exact coordinates.

    Additive structure: coordinates over `periods` (invariant factors of
    the solution lattice modulo null triples, None meaning a free factor).
    Multiplication is composition, tabulated on the additive basis.
    """

    def __init__(self, pairing: Pairing, s_basis: List[List[int]],
                 constraints: Tuple = ()):
        self.pairing = pairing
        self.lay = _Layout(pairing)
        self.s_basis = tuple(tuple(r) for r in s_basis)
        self.constraints = constraints

        n = self.lay.total
        rho = len(self.s_basis)

        # null triples: matrices that are the zero map entrywise
        t0 = []
        slots = (
            (self.lay.idx1, self.lay.na, pairing.periods_a),
            (self.lay.idx2, self.lay.nb, pairing.periods_b),
            (self.lay.idx0, self.lay.nc, pairing.periods_c),
        )
        for idx, size, periods in slots:
            for r in range(size):
                if periods[r] is None:
                    continue
                for c in range(size):
                    vec = [0] * n
                    vec[idx(r, c)] = periods[r]
                    t0.append(vec)
        rel = []
        for vec in t0:
            y = solve_lattice(list(self.s_basis), vec)
            if y is None:
                raise ScalarRingError(
                    "null triple escapes the solution lattice")
            rel.append(y)

        if rel:
            d, _, v = snf(rel)
            dvals = [d[j][j] if j < len(d) and j < len(d[j]) else 0
                     for j in range(rho)]
        else:
            v = eye(rho)
            dvals = [0] * rho
        vinv = inverse_unimodular(v)
        self._v = v
        kept = [j for j in range(rho) if dvals[j] != 1]
        signs = []
        basis_vecs = []
        for j in kept:
            h = vec_mat(vinv[j], list(self.s_basis)) if rho else []
            sign = 1
            if dvals[j] == 0:
                first = next((x for x in h if x), 0)
                if first < 0:
                    sign = -1
                    h = [-x for x in h]
            signs.append(sign)
            basis_vecs.append(h)
        self._kept = tuple(kept)
        self._dvals = tuple(dvals[j] for j in kept)
        self._signs = tuple(signs)
        self.basis_vecs = tuple(tuple(h) for h in basis_vecs)
        self.periods: Tuple[Period, ...] = tuple(
            None if d == 0 else d for d in self._dvals)

        unit_vec = [0] * n
        for idx, size, _ in slots:
            for r in range(size):
                unit_vec[idx(r, r)] = 1
        self.unit = self.coords_vec(unit_vec)

        self._recheck_basis()

        k = len(self.periods)
        table = []
        for j in range(k):
            row = []
            for l in range(k):
                prod_vec = self._compose(self.basis_vecs[j],
                                         self.basis_vecs[l])
                try:
                    row.append(self.coords_vec(prod_vec))
                except ScalarRingError:
                    raise ScalarRingError(
                        "product of scalars escapes the ring")
            table.append(tuple(row))
        self.mult_table = tuple(table)
        self.is_commutative = all(
            self.mult_table[j][l] == self.mult_table[l][j]
            for j in range(k) for l in range(k))
        if k <= 8:
            for a in range(k):
                for b in range(k):
                    for c in range(k):
                        ea = tuple(1 if i == a else 0 for i in range(k))
                        eb = tuple(1 if i == b else 0 for i in range(k))
                        ec = tuple(1 if i == c else 0 for i in range(k))
                        lhs = self.mul(self.mul(ea, eb), ec)
                        rhs = self.mul(ea, self.mul(eb, ec))
                        if lhs != rhs:
                            raise ScalarRingError(
                                "multiplication table is not associative")

    # -- vector-level helpers

    def _reshape(self, vec: Sequence[int]):
        lay = self.lay
        phi1 = [list(vec[lay.idx1(r, 0):lay.idx1(r, 0) + lay.na])
                for r in range(lay.na)]
        phi2 = [list(vec[lay.idx2(r, 0):lay.idx2(r, 0) + lay.nb])
                for r in range(lay.nb)]
        phi0 = [list(vec[lay.idx0(r, 0):lay.idx0(r, 0) + lay.nc])
                for r in range(lay.nc)]
        return phi1, phi2, phi0

    def _compose(self, v1: Sequence[int], v2: Sequence[int]) -> List[int]:
        a1, a2, a0 = self._reshape(v1)
        b1, b2, b0 = self._reshape(v2)
        out = []
        for x, y in ((a1, b1), (a2, b2), (a0, b0)):
            m = mat_mul(x, y)
            for row in m:
                out.extend(row)
        return out

    def contains_vec(self, vec: Sequence[int]) -> bool:
        return solve_lattice(list(self.s_basis), list(vec)) is not None

    def coords_vec(self, vec: Sequence[int]) -> Tuple[int, ...]:
        y = solve_lattice(list(self.s_basis), list(vec))
        if y is None:
            raise ScalarRingError("triple does not satisfy the pairing "
                                  "identities")
        if not y:
            return ()
        yv = vec_mat(y, self._v)
        out = []
        for pos, (j, d) in enumerate(zip(self._kept, self._dvals)):
            val = self._signs[pos] * yv[j]
            out.append(val if d == 0 else val % d)
        return tuple(out)

    def element_vec(self, coords: Sequence[int]) -> List[int]:
        vec = [0] * self.lay.total
        for cj, h in zip(coords, self.basis_vecs):
            if cj:
                for i, x in enumerate(h):
                    vec[i] += cj * x
        return vec

    def triple_of(self, coords: Sequence[int]):
        return self._reshape(self.element_vec(coords))

    # -- coordinate-level ring operations

    def reduce(self, coords: Sequence[int]) -> Tuple[int, ...]:
        return tuple(
            c if d is None else c % d
            for c, d in zip(coords, self.periods))

    def add(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a: Sequence[int]) -> Tuple[int, ...]:
        return self.reduce(tuple(-x for x in a))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
        k = len(self.periods)
        acc = [0] * k
        for j, aj in enumerate(a):
            if not aj:
                continue
            for l, bl in enumerate(b):
                if not bl:
                    continue
                cell = self.mult_table[j][l]
                for i in range(k):
                    acc[i] += aj * bl * cell[i]
        return self.reduce(tuple(acc))

    def order(self) -> Optional[int]:
        total = 1
        for d in self.periods:
            if d is None:
                return None
            total *= d
        return total

    # -- semantic recheck, independent of the congruence assembly

    def _recheck_basis(self) -> None:
        f = self.pairing.table
        red = self.pairing.reduce_c
        lay = self.lay
        for h in self.basis_vecs:
            phi1, phi2, phi0 = self._reshape(h)
            for s in range(lay.na):
                for t in range(lay.nb):
                    v1 = [0] * lay.nc
                    for r in range(lay.na):
                        if phi1[r][s]:
                            for k in range(lay.nc):
                                v1[k] += phi1[r][s] * f[r][t][k]
                    v2 = [0] * lay.nc
                    for r in range(lay.nb):
                        if phi2[r][t]:
                            for k in range(lay.nc):
                                v2[k] += phi2[r][t] * f[s][r][k]
                    v0 = [0] * lay.nc
                    for ell in range(lay.nc):
                        v0[ell] = sum(
                            phi0[ell][k] * f[s][t][k] for k in range(lay.nc))
                    if not red(v1) == red(v2) == red(v0):
                        raise ScalarRingError(
                            "computed basis violates the pairing identities")


def scalar_ring(pairing: Pairing) -> ScalarRing:
    lay, sparse = _base_system(pairing)
    rows, moduli = _densify(sparse, lay.total)
    sol = solve_congruences(rows, [0] * len(rows), moduli, lay.total)
    basis = hnf_basis([list(b) for b in sol.basis], lay.total)
    return ScalarRing(pairing, basis)


def restrict_ring(ring: ScalarRing,
                  constraints: Sequence) -> ScalarRing:
    """Subring cut out by extra linear side conditions.

    Re-solves the defining system together with the ring's stored
    constraints and the new ones, so restrictions compose.
    """
    all_cons = tuple(ring.constraints) + tuple(constraints)
    lay, sparse = _base_system(ring.pairing)
    sparse = list(sparse)
    naux = 0
    for con in all_cons:
        rows, used = _constraint_rows(ring.pairing, lay, con,
                                      lay.total + naux)
        sparse.extend(rows)
        naux += used
    width = lay.total + naux
    rows, moduli = _densify(sparse, width)
    sol = solve_congruences(rows, [0] * len(rows), moduli, width)
    basis = hnf_basis([list(b)[:lay.total] for b in sol.basis], lay.total)
    return ScalarRing(ring.pairing, basis, all_cons)


def intersect_rings(a: ScalarRing, b: ScalarRing) -> ScalarRing:
    if a.pairing != b.pairing:
        raise ScalarRingError("rings belong to different pairings")
    n = a.lay.total
    basis = lattice_intersect(
        [list(r) for r in a.s_basis], [list(r) for r in b.s_basis], n)
    return ScalarRing(a.pairing, basis,
                      tuple(a.constraints) + tuple(b.constraints))


# --------------------------------------------------------------------------
# prime factorization of the zero ideal in a finite scalar ring


def prime_decomposition_zero(ring: ScalarRing):
    """Shortest factorization of the zero ideal as a product of prime
    ideals, each returned as a frozenset of coordinate tuples."""
    order = ring.order()
    if order is None:
        raise ScalarRingError("only finite rings can be factored "
                              "exhaustively")
    k = len(ring.periods)
    if order > 200 or order ** max(k, 1) > 5000:
        raise ScalarRingError("ring too large to factor exhaustively")
    elements = sorted(product(*[range(d) for d in ring.periods]))
    zero = tuple(0 for _ in range(k))

    def closure(gens):
        cur = {zero} | set(gens)
        frontier = list(cur)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(cur):
                    s = ring.add(a, b)
                    if s not in cur:
                        cur.add(s)
                        nxt.append(s)
                for r in elements:
                    m = ring.mul(r, a)
                    if m not in cur:
                        cur.add(m)
                        nxt.append(m)
            frontier = nxt
        return frozenset(cur)

    candidates = {closure(())}
    for size in range(1, k + 1):
        for sub in combinations(elements, size):
            candidates.add(closure(sub))
    ideals = sorted(candidates, key=lambda s: (len(s), sorted(s)))

    def is_prime(p):
        if len(p) == order:
            return False
        outside = [x for x in elements if x not in p]
        return all(ring.mul(x, y) not in p
                   for x in outside for y in outside)

    primes = [p for p in ideals if is_prime(p)]
    zero_ideal = frozenset({zero})

    def ideal_product(i, j):
        return closure(tuple(ring.mul(a, b) for a in i for b in j))

    queue = deque((p, [p]) for p in primes)
    seen = set(primes)
    while queue:
        current, path = queue.popleft()
        if current == zero_ideal:
            return path
        for p in primes:
            nxt = ideal_product(current, p)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, path + [p]))
    raise ScalarRingError("zero ideal is not a product of prime ideals")


# --------------------------------------------------------------------------
# pairings out of group data


def pairing_of(b) -> Pairing:
    """Flatten a graded commutator bilinearization into one Pairing.

    The left section becomes A; the graded side sections concatenate into
    B and C with their block structure recorded.  Table cells of block i
    land in the coordinates of C-block i and vanish elsewhere.
    """
    periods_a = b.left.periods
    periods_b: List[Period] = []
    periods_c: List[Period] = []
    b_blocks = []
    c_blocks = []
    for sec in b.right:
        periods_b.extend(sec.periods)
        b_blocks.append(len(sec.periods))
    for sec in b.out:
        periods_c.extend(sec.periods)
        c_blocks.append(len(sec.periods))
    nc = len(periods_c)
    coffs = _offsets(c_blocks)

    na = len(periods_a)
    table = []
    for s in range(na):
        row = []
        for i, sec in enumerate(b.right):
            for t in range(len(sec.periods)):
                cell = [0] * nc
                local = b.tables[i][s][t]
                for kk, v in enumerate(local):
                    cell[coffs[i] + kk] = v
                row.append(tuple(cell))
        table.append(tuple(row))
    return Pairing(tuple(periods_a), tuple(periods_b), tuple(periods_c),
                   tuple(table), tuple(b_blocks), tuple(c_blocks))
