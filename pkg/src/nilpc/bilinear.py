"""Commutator pairings attached to a central series.

Given a descending central series R of G, each layer carries a pairing
induced by the commutator: the i-th one takes a class of x modulo the
radical and a class of y in the i-th upper-companion section, and returns
the class of [x, y] one layer down the lower companion.  Assembling the
layers gives a single bilinear map on abelian groups; everything here is
computed exactly through section coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import presentation as pc
from . import subgroups as sg
from .abelian import FgAbelian, section_basis
from .intlinalg import hnf_basis, identity as eye, solve_congruences
from .presentation import Element, PcPresentation
from .subgroups import Subgroup, SubgroupError


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class AssociatedSeries:
    pres: PcPresentation
    given: Tuple[Subgroup, ...]
    lower: Tuple[Subgroup, ...]  # lower[k] is the (k+1)-st lower companion
    upper: Tuple[Subgroup, ...]  # upper[k] is the (k+1)-st upper companion

    @property
    def c(self) -> int:
        return len(self.lower) - 1


def associated_series(p: PcPresentation,
                      series: Optional[Sequence[Subgroup]] = None
                      ) -> AssociatedSeries:
    whole = sg.whole_subgroup(p)
    if series is None:
        series = sg.lower_central_series(p)
    series = list(series)
    if series[0] != whole:
        raise SeriesError("series must start at the whole group")
    if not series[-1].is_trivial:
        raise SeriesError("series must end at the trivial subgroup")

    lower: List[Subgroup] = [whole]
    for k in range(len(series) - 1):
        nxt = sg.commutator_subgroup(p, series[k], whole)
        for r in nxt.rows:
            if not series[k + 1].contains(r):
                raise SeriesError("input series is not central")
        lower.append(nxt)
    if not lower[-1].is_trivial:
        raise SeriesError("lower companion does not terminate")

    upper = tuple(
        sg.commutation_preimage(p, lower[k + 1])
        for k in range(len(lower) - 1))
    # certificate: commutating each upper term with G gives back the next
    # lower term exactly, not just something inside it
    for k in range(len(upper)):
        back = sg.commutator_subgroup(p, upper[k], whole)
        if back != lower[k + 1]:
            raise SeriesError(
                f"{p.name}: upper term {k + 1} fails the commutator "
                "certificate")
    return AssociatedSeries(p, tuple(series), tuple(lower), upper)


class Bilinearization:
    def __init__(self, series: AssociatedSeries, v_r: Subgroup,
                 left: FgAbelian, right: Tuple[FgAbelian, ...],
                 out: Tuple[FgAbelian, ...],
                 tables: Tuple[Tuple[Tuple[Tuple[int, ...], ...], ...], ...]):
        self.pres = series.pres
        self.series = series
        self.v_r = v_r
        self.left = left
        self.right = right
        self.out = out
        self.tables = tables

    def evaluate(self, block: int, x: Element, y: Element) -> Tuple[int, ...]:
        xs = self.left.coords(x)
        ys = self.right[block].coords(y)
        dim = len(self.out[block].periods)
        acc = [0] * dim
        table = self.tables[block]
        for s, xv in enumerate(xs):
            if not xv:
                continue
            for t, yv in enumerate(ys):
                if not yv:
                    continue
                cell = table[s][t]
                for k in range(dim):
                    acc[k] += xv * yv * cell[k]
        return self.out[block].reduce(tuple(acc))

    def evaluate_exact(self, block: int, x: Element, y: Element
                       ) -> Tuple[int, ...]:
        return self.out[block].coords(pc.commutator(self.pres, x, y))

    def _kernel_trivial(self, side: FgAbelian,
                        eq_rows: List[List[int]],
                        moduli: List[int]) -> bool:
        n = len(side.periods)
        if n == 0:
            return True
        if not eq_rows:
            return False
        sol = solve_congruences(eq_rows, [0] * len(eq_rows), moduli, n)
        for v in sol.basis:
            for c, d in zip(v, side.periods):
                if d is None:
                    if c:
                        return False
                elif c % d:
                    return False
        return True

    def left_nondegenerate(self) -> bool:
        eq_rows, moduli = [], []
        for block, (b_i, c_i) in enumerate(zip(self.right, self.out)):
            for t in range(len(b_i.periods)):
                for k, d in enumerate(c_i.periods):
                    eq_rows.append(
                        [self.tables[block][s][t][k]
                         for s in range(len(self.left.periods))])
                    moduli.append(0 if d is None else d)
        return self._kernel_trivial(self.left, eq_rows, moduli)

    def right_nondegenerate(self) -> bool:
        for block, (b_i, c_i) in enumerate(zip(self.right, self.out)):
            eq_rows, moduli = [], []
            for s in range(len(self.left.periods)):
                for k, d in enumerate(c_i.periods):
                    eq_rows.append(
                        [self.tables[block][s][t][k]
                         for t in range(len(b_i.periods))])
                    moduli.append(0 if d is None else d)
            if not self._kernel_trivial(b_i, eq_rows, moduli):
                return False
        return True

    def full(self) -> bool:
        """Do the values, together with the target torsion, span each target?"""
        for block, c_i in enumerate(self.out):
            dim = len(c_i.periods)
            if dim == 0:
                continue
            rows = [list(cell) for row in self.tables[block] for cell in row]
            for k, d in enumerate(c_i.periods):
                if d is not None:
                    vec = [0] * dim
                    vec[k] = d
                    rows.append(vec)
            if hnf_basis(rows, dim) != eye(dim):
                return False
        return True


def bilinearize(p: PcPresentation,
                series: Optional[Sequence[Subgroup]] = None) -> Bilinearization:
    s = associated_series(p, series)
    c = s.c
    whole = sg.whole_subgroup(p)

    conditions = []
    for i in range(c - 1):
        # [x, upper_i] must land two layers down
        conditions.append((s.upper[i].rows, s.lower[i + 2]))
    if conditions:
        v_r = sg.constrained_subgroup(p, whole, conditions)
    else:
        v_r = whole
    left = section_basis(p, whole, v_r, name=f"{p.name} mod radical")

    right: List[FgAbelian] = []
    out: List[FgAbelian] = []
    tables = []
    for i in range(c - 1):
        b_i = section_basis(p, s.upper[i], s.upper[i + 1],
                            name=f"{p.name} upper layer {i + 1}")
        c_i = section_basis(p, s.lower[i + 1], s.lower[i + 2],
                            name=f"{p.name} lower layer {i + 2}")
        table = tuple(
            tuple(c_i.coords(pc.commutator(p, xs, yt)) for yt in b_i.basis)
            for xs in left.basis)
        right.append(b_i)
        out.append(c_i)
        tables.append(table)

    return Bilinearization(s, v_r, left, tuple(right), tuple(out),
                           tuple(tables))
