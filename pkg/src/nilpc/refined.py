"""Canonical refinements of a central series, with their scalar actions.

Starting from the graded commutator pairing of a central series, this
module cuts the full scalar ring down to the subring compatible with two
canonical refinements of the series:

* the upper-style chain, refined below its last term by the central parts
  of the lower-style terms, and
* the left-domain chain, starting at the radical of the pairing and
  refined by the intersections with the upper-style terms (pushed up by
  the derived subgroup).

Compatibility is expressed through linear side conditions on the scalar
triples (intertwining with the connecting maps between layers, invariance
of the embedded images), and the final ring is the intersection of the two
compatible subrings.  Each gap of each chain is reported together with the
matrices by which the ring's additive basis acts on it; the one gap that
carries no action (between a chain's graded part and its central
refinement) is marked special and reported without matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import presentation as pc
from . import subgroups as sg
from .abelian import FgAbelian, section_basis
from .bilinear import Bilinearization, bilinearize
from .intlinalg import solve_congruences
from .presentation import PcPresentation
from .scalars import (
    HomCompat,
    InvariantSubmodule,
    ScalarRing,
    ScalarRingError,
    _offsets,
    intersect_rings,
    pairing_of,
    restrict_ring,
    scalar_ring,
)
from .subgroups import Subgroup

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class ChainAction:
    """One gap of one refined chain and how the ring acts on it.

    matrices has one entry per additive basis element of the ring (the
    action is additive in the ring element); it is None exactly for the
    special gap, which the ring does not act on.
    """

    chain: str
    top: str
    bottom: str
    section: FgAbelian
    kind: str
    matrices: Optional[Tuple[Matrix, ...]]


@dataclass(frozen=True)
class RefinedSeries:
    pres: PcPresentation
    bilin: Bilinearization
    base_ring: ScalarRing
    pl_ring: ScalarRing
    ae_ring: ScalarRing
    ad_ring: ScalarRing
    ring: ScalarRing
    upper_chain: Tuple[Tuple[str, Subgroup], ...]
    left_chain: Tuple[Tuple[str, Subgroup], ...]
    gap_section: FgAbelian
    actions: Tuple[ChainAction, ...]


def _dedup(terms: Sequence[Tuple[str, Subgroup]]):
    out: List[Tuple[str, Subgroup]] = []
    for label, term in terms:
        if out and out[-1][1] == term:
            continue
        out.append((label, term))
    return tuple(out)


def _embedding_matrix(small: FgAbelian, big: FgAbelian):
    """Columns are the big-section coordinates of the small basis."""
    cols = [big.coords(x) for x in small.basis]
    rows = tuple(
        tuple(col[r] for col in cols) for r in range(len(big.periods)))
    return rows


def _block_of(mat, off: int, size: int, periods, m_name: str):
    """Extract a diagonal block, insisting the rest of its rows/columns
    vanish as maps."""
    n = len(periods)
    for r in range(off, off + size):
        for c in range(n):
            if off <= c < off + size:
                continue
            v = mat[r][c]
            per = periods[r]
            bad = v != 0 if per is None else v % per != 0
            if bad:
                raise ScalarRingError(
                    f"{m_name} does not respect the grading")
    for c in range(off, off + size):
        for r in range(n):
            if off <= r < off + size:
                continue
            v = mat[r][c]
            per = periods[r]
            bad = v != 0 if per is None else v % per != 0
            if bad:
                raise ScalarRingError(
                    f"{m_name} does not respect the grading")
    return tuple(
        tuple(mat[r][c] for c in range(off, off + size))
        for r in range(off, off + size))


def _pullback(e_rows, big_periods, small: FgAbelian, block_mat):
    """Matrix of the action on the embedded section: solve e.x == m.e."""
    nbig = len(big_periods)
    nsmall = len(small.periods)
    moduli = [0 if per is None else per for per in big_periods]
    cols = []
    for k in range(nsmall):
        rhs = []
        for r in range(nbig):
            rhs.append(sum(
                block_mat[r][t] * e_rows[t][k] for t in range(nbig)))
        sol = solve_congruences(
            [list(row) for row in e_rows], rhs, moduli, nsmall)
        if not sol.consistent:
            raise ScalarRingError(
                "embedded section is not invariant under the ring")
        cols.append(small.reduce(tuple(sol.particular)))
    return tuple(
        tuple(cols[k][r] for k in range(nsmall)) for r in range(nsmall))


def refined_series(p: PcPresentation,
                   series: Optional[Sequence[Subgroup]] = None
                   ) -> RefinedSeries:
    b = bilinearize(p, series)
    s = b.series
    c = s.c
    whole = sg.whole_subgroup(p)
    trivial = sg.trivial_subgroup(p)
    derived = s.lower[1]
    gens = tuple(pc.generator(p, i) for i in range(1, p.m + 1))
    pairing = pairing_of(b)
    base = scalar_ring(pairing)
    boffs = _offsets(pairing.b_blocks)
    coffs = _offsets(pairing.c_blocks)

    # compatibility with the connecting maps between consecutive layers
    pl_cons = []
    for i in range(2, c):
        small = b.out[i - 2]
        big = b.right[i - 1]
        if not small.periods or not big.periods:
            continue
        pl_cons.append(HomCompat(
            _embedding_matrix(small, big), c_block=i - 2, b_block=i - 1))
    pl = restrict_ring(base, pl_cons) if pl_cons else base

    # central parts of the lower-style terms
    zc = {}
    for i in range(2, c + 2):
        zc[i] = sg.constrained_subgroup(
            p, s.lower[i - 1], [(gens, trivial)])

    ae_cons = []
    for i in range(2, c + 1):
        sec = b.out[i - 2]
        if not sec.periods or not zc[i].rows:
            continue
        ae_cons.append(InvariantSubmodule(
            "phi0", i - 2, tuple(sec.coords(r) for r in zc[i].rows)))
    ae = restrict_ring(pl, ae_cons) if ae_cons else pl

    # intersections of the radical with the upper-style terms
    vcond = [(s.upper[i].rows, s.lower[i + 2]) for i in range(c - 1)]
    w = {1: b.v_r}
    for i in range(2, c + 1):
        w[i] = sg.constrained_subgroup(p, s.upper[i - 1], vcond) \
            if vcond else s.upper[i - 1]

    ad_cons = []
    for i in range(1, c):
        sec = b.right[i - 1]
        gens_i = tuple(sec.coords(r) for r in w[i].rows)
        gens_i = tuple(g for g in gens_i if any(g))
        if not sec.periods or not gens_i:
            continue
        ad_cons.append(InvariantSubmodule("phi2", i - 1, gens_i))
    ad = restrict_ring(pl, ad_cons) if ad_cons else pl

    ring = intersect_rings(ae, ad)

    # chains
    terms_u: List[Tuple[str, Subgroup]] = []
    for i in range(1, c + 1):
        terms_u.append(("G" if i == 1 else f"U{i}", s.upper[i - 1]))
    for i in range(2, c + 2):
        label = "1" if zc[i].is_trivial else f"Z^L{i}"
        terms_u.append((label, zc[i]))

    terms_l: List[Tuple[str, Subgroup]] = [("G", whole), ("V", b.v_r)]
    for i in range(2, c + 1):
        wg = sg.induce(p, list(w[i].rows) + list(derived.rows))
        terms_l.append((f"W{i}G'", wg))
    for i in range(2, c + 2):
        term = s.lower[i - 1]
        label = "1" if term.is_trivial else ("G'" if i == 2 else f"L{i}")
        terms_l.append((label, term))

    # gap between the graded part and its central refinement
    gap_top = s.upper[c - 1]
    gap_section = section_basis(p, gap_top, zc[2],
                                name=f"{p.name} special gap")

    # ring basis as full matrix triples
    k = len(ring.periods)
    triples = []
    for j in range(k):
        coords = tuple(1 if i == j else 0 for i in range(k))
        triples.append(ring.triple_of(coords))

    def phi2_blocks(i):
        off, size = boffs[i], pairing.b_blocks[i]
        return tuple(
            _block_of(t[1], off, size, pairing.periods_b, "phi2")
            for t in triples)

    def phi0_blocks(i):
        off, size = coffs[i], pairing.c_blocks[i]
        return tuple(
            _block_of(t[2], off, size, pairing.periods_c, "phi0")
            for t in triples)

    actions: List[ChainAction] = []

    def emit(chain, top, bottom, section, kind, matrices):
        actions.append(ChainAction(chain, top[0], bottom[0], section,
                                   kind, matrices))

    # upper-style chain gaps
    for idx in range(len(terms_u) - 1):
        top, bottom = terms_u[idx], terms_u[idx + 1]
        if top[1] == bottom[1]:
            continue
        if idx < c - 1:
            i = idx + 1  # gap (U_i, U_{i+1})
            emit("upper", top, bottom, b.right[i - 1],
                 "phi2", phi2_blocks(i - 1))
        elif idx == c - 1:
            emit("upper", top, bottom, gap_section, "special", None)
        else:
            i = idx - c + 2  # gap (Z^L_i, Z^L_{i+1})
            sec = section_basis(p, zc[i], zc[i + 1],
                                name=f"{p.name} central part {i}")
            big = b.out[i - 2]
            if sec.periods:
                e = _embedding_matrix(sec, big)
                mats = tuple(
                    _pullback(e, big.periods, sec, m)
                    for m in phi0_blocks(i - 2))
            else:
                mats = tuple(() for _ in triples)
            emit("upper", top, bottom, sec, "pullback-phi0", mats)

    # left-domain chain gaps
    for idx in range(len(terms_l) - 1):
        top, bottom = terms_l[idx], terms_l[idx + 1]
        if top[1] == bottom[1]:
            continue
        if idx == 0:
            emit("left", top, bottom, b.left, "phi1",
                 tuple(tuple(tuple(r) for r in t[0]) for t in triples))
        elif idx < c:
            i = idx  # gap (W_i G', W_{i+1} G'), with W_1 G' read as V
            sec = section_basis(p, top[1], bottom[1],
                                name=f"{p.name} radical layer {i}")
            big = b.right[i - 1]
            if sec.periods:
                e = _embedding_matrix(sec, big)
                mats = tuple(
                    _pullback(e, big.periods, sec, m)
                    for m in phi2_blocks(i - 1))
            else:
                mats = tuple(() for _ in triples)
            emit("left", top, bottom, sec, "pullback-phi2", mats)
        elif idx == c:
            sec = section_basis(p, top[1], bottom[1],
                                name=f"{p.name} special gap (left)")
            emit("left", top, bottom, sec, "special", None)
        else:
            i = idx - c + 1  # gap (L_i, L_{i+1})
            emit("left", top, bottom, b.out[i - 2],
                 "phi0", phi0_blocks(i - 2))

    return RefinedSeries(
        pres=p, bilin=b, base_ring=base, pl_ring=pl, ae_ring=ae,
        ad_ring=ad, ring=ring,
        upper_chain=_dedup(terms_u), left_chain=_dedup(terms_l),
        gap_section=gap_section, actions=tuple(actions))
