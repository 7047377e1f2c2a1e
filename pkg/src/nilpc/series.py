"""The canonical subgroups of a presented group and the numbers they carry.

key_subgroups computes, exactly: the center, derived subgroup and its
isolator, the torsion subgroup, the torsion-image part of the center, the
products N = Is(G') Z and M = Is(G' Z), a free complement G0 of the
torsion-image part inside the center, the foundation quotient G/G0, and
the section invariants (n, p, e) read off M/N and N/Is(G').
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from . import presentation as pc
from . import subgroups as sg
from .abelian import FgAbelian, abelianization, section_basis
from .intlinalg import inverse_unimodular, snf, solve_congruences
from .presentation import PcPresentation
from .subgroups import Subgroup, SubgroupError


def hirsch_length(p: PcPresentation) -> int:
    return sum(1 for e in p.periods if e is None)


def nilpotency_class(p: PcPresentation) -> int:
    return len(sg.lower_central_series(p)) - 1


def derived_subgroup(p: PcPresentation) -> Subgroup:
    w = sg.whole_subgroup(p)
    return sg.commutator_subgroup(p, w, w)


def _reduce_by(p: PcPresentation, x, sub: Subgroup):
    """Right-reduce the deeper coordinates of x modulo the rows of sub."""
    lead = sg.leading_index(x)
    for r in sub.rows:
        mu = sg.leading_index(r)
        if lead is not None and mu <= lead:
            continue
        q = x[mu - 1] // r[mu - 1]
        if q:
            x = pc.multiply(p, x, pc.power(p, r, -q))
    return x


def _torsion_image_part(p: PcPresentation, z: Subgroup,
                        ab: FgAbelian) -> Subgroup:
    """Elements of z whose abelianization coordinates are pure torsion."""
    if z.is_trivial:
        return z
    free_pos = [k for k, d in enumerate(ab.periods) if d is None]
    row_coords = [ab.coords(r) for r in z.rows]
    eqs = [[rc[k] for rc in row_coords] for k in free_pos]
    if not eqs:
        return z
    sol = solve_congruences(eqs, [0] * len(eqs), [0] * len(eqs), len(z.rows))
    gens = [sg.prod_rows(p, z.rows, v) for v in sol.basis]
    return sg.induce(p, gens)


def _free_complement(p: PcPresentation, z: Subgroup,
                     inner: Subgroup) -> Subgroup:
    """Free direct complement of inner inside the abelian subgroup z.

    Requires z/inner free, which holds when inner is the torsion-image
    part: the quotient embeds into a free abelian group.
    """
    rows = z.rows
    s = len(rows)
    if s == 0:
        return z
    w_rows = []
    for r in inner.rows:
        coeffs = z.coefficients_of(r)
        if coeffs is None:
            raise SubgroupError("inner subgroup escapes the ambient one")
        w_rows.append(coeffs)
    for k, (r, o) in enumerate(zip(rows, z.relative_orders())):
        if o is None:
            continue
        coeffs = z.coefficients_of(pc.power(p, r, o))
        vec = [-c for c in coeffs]
        vec[k] += o
        w_rows.append(vec)
    if not w_rows:
        return z
    d, _, v = snf(w_rows)
    dvals = [d[j][j] if j < len(d) else 0 for j in range(s)]
    if any(dv not in (0, 1) for dv in dvals):
        raise SubgroupError("complement does not split off freely")
    vinv = inverse_unimodular(v)
    gens = [
        _reduce_by(p, sg.prod_rows(p, rows, vinv[j]), inner)
        for j in range(s) if dvals[j] == 0
    ]
    comp = sg.induce(p, gens)
    reduced = tuple(_reduce_by(p, r, inner) for r in comp.rows)
    return Subgroup(p, reduced)


@dataclass(frozen=True)
class KeySubgroups:
    pres: PcPresentation
    center: Subgroup
    derived: Subgroup
    derived_isolator: Subgroup
    torsion: Subgroup
    iso_center: Subgroup  # center elements with torsion abelianized image
    n_sub: Subgroup       # Is(G') Z
    m_sub: Subgroup       # Is(G' Z)
    g0: Subgroup
    foundation: sg.QuotientMap
    mn: FgAbelian         # M/N, always finite
    n_is: FgAbelian       # N/Is(G'), always free
    regular: bool
    tame: bool
    n: int
    p: int
    e: int


def key_subgroups(pres: PcPresentation) -> KeySubgroups:
    z = sg.center(pres)
    der = derived_subgroup(pres)
    iso_der = sg.isolator(pres, der)
    tors = sg.torsion_subgroup(pres)
    ab = abelianization(pres)
    iso_c = _torsion_image_part(pres, z, ab)

    n_sub = sg.induce(pres, list(iso_der.rows) + list(z.rows))
    m_sub = sg.isolator(pres, sg.induce(pres, list(der.rows) + list(z.rows)))
    mn = section_basis(pres, m_sub, n_sub, name=f"{pres.name} M/N")
    if any(d is None for d in mn.periods):
        raise SubgroupError("M/N came out infinite")
    n_is = section_basis(pres, n_sub, iso_der, name=f"{pres.name} N/Is")
    if any(d is not None for d in n_is.periods):
        raise SubgroupError("N/Is(G') came out non-free")

    g0 = _free_complement(pres, z, iso_c)
    foundation = sg.quotient(pres, g0, name=f"{pres.name} foundation")

    e_val = 1
    for d in mn.periods:
        e_val *= d
    return KeySubgroups(
        pres=pres,
        center=z,
        derived=der,
        derived_isolator=iso_der,
        torsion=tors,
        iso_center=iso_c,
        n_sub=n_sub,
        m_sub=m_sub,
        g0=g0,
        foundation=foundation,
        mn=mn,
        n_is=n_is,
        regular=(m_sub == n_sub),
        tame=all(iso_der.contains(r) for r in z.rows),
        n=len(mn.periods),
        p=n_is.free_rank,
        e=e_val,
    )
