"""Adapted bases and abelian deformations of the finite middle section.

An adapted basis runs through four segments: a free basis modulo
M = Is(G'Z), invariant-factor generators of the finite section M/N where
N = Is(G')Z, a free basis of N modulo Is(G'), and an induced generating
sequence of Is(G') itself.  Once the power tails of the middle segment
land diagonally on the free segment below, those tails can be rescaled
and permuted without touching anything else; that is the deformation.
"""

from dataclasses import dataclass
from itertools import permutations, product
from math import gcd
from typing import Dict, List, Optional, Tuple

from . import abelian as ab
from . import intlinalg as il
from . import presentation as pc
from . import subgroups as sg
from .presentation import Element, PcPresentation
from .series import key_subgroups


class DeformError(ValueError):
    pass


@dataclass(frozen=True)
class AdaptedPresentation:
    """A presentation whose generators are grouped i0 | i1 | i2 | rest.

    Segment boundaries are cumulative counts: generators 1..i0 are free
    modulo M, (i0, i1] generate M/N with invariant factors multiplying to
    e, (i1, i2] are free modulo Is(G'), the rest generate Is(G').
    `new_in_old` gives each new generator as an element of `source`;
    `old_in_new` gives each old generator as an exponent vector over the
    new basis.  Both are absent on presentations produced by deformation.
    """

    pres: PcPresentation
    i0: int
    i1: int
    i2: int
    n: int
    p: int
    e: int
    new_in_old: Optional[Tuple[Element, ...]] = None
    old_in_new: Optional[Tuple[Tuple[int, ...], ...]] = None
    source: Optional[PcPresentation] = None


@dataclass(frozen=True)
class ExtClass:
    """Where each finite-section power lands in the free segment, mod e_i."""

    moduli: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class DeformationSurvey:
    bound: int
    classes: Tuple[ExtClass, ...]
    representatives: Tuple[
        Tuple[ExtClass, Tuple[int, ...], Tuple[Tuple[int, ...], ...]], ...]


def adapt_basis(p: PcPresentation) -> AdaptedPresentation:
    """Rewrite p on a basis adapted to the M >= N >= Is(G') tower."""
    ks = key_subgroups(p)
    whole = sg.whole_subgroup(p)
    seg1 = ab.section_basis(p, whole, ks.m_sub)
    seg2 = ks.mn
    seg3 = ks.n_is
    tail = ks.derived_isolator
    if any(d is not None for d in seg1.periods):
        raise DeformError(f"{p.name}: torsion above the isolated section")
    if any(d is None for d in seg2.periods):
        raise DeformError(f"{p.name}: the middle section is not finite")
    if any(d is not None for d in seg3.periods):
        raise DeformError(f"{p.name}: torsion below the finite section")

    i0 = len(seg1.periods)
    n = len(seg2.periods)
    p_rank = len(seg3.periods)
    i1, i2 = i0 + n, i0 + n + p_rank
    e_vals: List[int] = list(seg2.periods)
    e = 1
    for d in e_vals:
        e *= d
    assert (n, p_rank, e) == (ks.n, ks.p, ks.e)

    nontail: List[Element] = (
        list(seg1.basis) + list(seg2.basis) + list(seg3.basis))
    mseq: List[Element] = nontail + list(tail.rows)
    abel = ab.abelianization(p)
    moduli = [0 if d is None else d for d in abel.periods]
    ab_nontail = [abel.coords(x) for x in nontail]
    ab_tail = [abel.coords(r) for r in tail.rows]

    def peel(w: Element, idx: int) -> int:
        # exponent of nontail[idx] in w, modulo everything after it
        lat = ab_nontail[idx + 1:] + ab_tail
        rows = [[ab_nontail[idx][r]] + [v[r] for v in lat]
                for r in range(len(moduli))]
        target = abel.coords(w)
        sol = il.solve_congruences(rows, list(target), moduli, 1 + len(lat))
        if not sol.consistent:
            raise DeformError(
                f"{p.name}: element escapes layer {idx + 1} of the adapted "
                "tower")
        return sol.particular[0]

    def expr(w: Element, level: int) -> Tuple[int, ...]:
        # exponent vector of w over mseq, given w lies in layer `level`
        vec = [0] * len(mseq)
        x = w
        for idx in range(level - 1, i2):
            a = peel(x, idx)
            if i0 <= idx < i1:
                a %= e_vals[idx - i0]
            if a:
                vec[idx] = a
                x = pc.multiply(p, pc.power(p, nontail[idx], -a), x)
        coeffs = tail.coefficients_of(x)
        if coeffs is None:
            raise DeformError(f"{p.name}: remainder escapes the deep segment")
        for jpos, cval in enumerate(coeffs):
            if cval and i2 + jpos + 1 < level:
                raise DeformError(
                    f"{p.name}: deep support precedes level {level}")
            vec[i2 + jpos] = cval
        return tuple(vec)

    periods: List[Optional[int]] = (
        [None] * i0 + list(e_vals) + [None] * p_rank
        + list(tail.relative_orders()))
    powers = []
    for i, per in enumerate(periods, start=1):
        if per is None:
            continue
        vec = expr(pc.power(p, mseq[i - 1], per), i + 1)
        entries = tuple((k + 1, v) for k, v in enumerate(vec) if v)
        if entries:
            powers.append((i, entries))
    commutators = []
    for j in range(2, len(mseq) + 1):
        for i in range(1, j):
            w = pc.commutator(p, mseq[j - 1], mseq[i - 1])
            if w == pc.identity_element(p):
                continue
            vec = expr(w, j + 1)
            entries = tuple((k + 1, v) for k, v in enumerate(vec) if v)
            commutators.append(((j, i), entries))

    new_p = PcPresentation(
        name=f"{p.name} adapted",
        periods=tuple(periods),
        powers=tuple(powers),
        commutators=tuple(commutators),
    )
    report = pc.consistency_check(new_p)
    if not report.ok:
        raise DeformError(
            f"{p.name}: adapted presentation fails consistency: "
            f"{report.failures[0]}")
    old_in_new = tuple(
        expr(pc.generator(p, i), 1) for i in range(1, p.m + 1))
    return AdaptedPresentation(
        pres=new_p, i0=i0, i1=i1, i2=i2, n=n, p=p_rank, e=e,
        new_in_old=tuple(mseq), old_in_new=old_in_new, source=p)


def _validate_params(a: AdaptedPresentation,
                     d: Tuple[int, ...],
                     c: Tuple[Tuple[int, ...], ...]) -> None:
    if len(d) != a.n:
        raise DeformError("need one multiplier per finite-section generator")
    if len(c) != a.n or any(len(row) != a.n for row in c):
        raise DeformError(f"change matrix must be {a.n}x{a.n}")
    if a.n == 0:
        return
    prod = 1
    for dk in d:
        prod *= abs(dk)
    if gcd(prod, a.e) != 1:
        raise DeformError(
            "multipliers must be invertible modulo the section exponent")
    if abs(il.det([list(row) for row in c])) != 1:
        raise DeformError("change matrix must be unimodular")


def _check_diagonal(a: AdaptedPresentation) -> None:
    """The i-th middle power must land exactly on free generator i + n."""
    tails = dict(a.pres.powers)
    for i in range(a.i0 + 1, a.i1 + 1):
        tail = dict(tails.get(i, ()))
        for k in range(a.i1 + 1, a.i2 + 1):
            want = 1 if k == i + a.n else 0
            if tail.get(k, 0) != want:
                raise DeformError(
                    f"{a.pres.name}: power tail of generator {i} is not "
                    "diagonally normalized")


def abdef(a: AdaptedPresentation,
          d: Tuple[int, ...],
          c: Tuple[Tuple[int, ...], ...]) -> AdaptedPresentation:
    """Deform: middle power i now lands on the free segment via d and c."""
    _validate_params(a, d, c)
    _check_diagonal(a)
    pres = a.pres
    tails = dict(pres.powers)
    new_powers = []
    for i in range(1, pres.m + 1):
        if pres.periods[i - 1] is None:
            continue
        if a.i0 < i <= a.i1:
            t = i - a.i0 - 1
            tail: Dict[int, int] = {
                k: v for k, v in tails.get(i, ())
                if not a.i1 < k <= a.i2}
            for k in range(1, a.n + 1):
                coef = d[k - 1] * c[t][k - 1]
                if coef:
                    tail[a.i1 + k] = coef
            entries = tuple(sorted(tail.items()))
        else:
            entries = tails.get(i, ())
        if entries:
            new_powers.append((i, entries))
    new_p = PcPresentation(
        name=f"{pres.name} deformed",
        periods=pres.periods,
        powers=tuple(new_powers),
        commutators=pres.commutators,
    )
    report = pc.consistency_check(new_p)
    if not report.ok:
        raise DeformError(
            f"deformation is inconsistent: {report.failures[0]}")
    return AdaptedPresentation(
        pres=new_p, i0=a.i0, i1=a.i1, i2=a.i2, n=a.n, p=a.p, e=a.e)


def ext_class(a: AdaptedPresentation,
              d: Tuple[int, ...],
              c: Tuple[Tuple[int, ...], ...]) -> ExtClass:
    """Class of the deformed extension; equal classes, equal groups."""
    _validate_params(a, d, c)
    _check_diagonal(a)
    moduli = []
    components = []
    for i in range(a.i0 + 1, a.i1 + 1):
        t = i - a.i0 - 1
        ei = a.pres.periods[i - 1]
        assert ei is not None
        moduli.append(ei)
        components.append(tuple(
            (d[k] * c[t][k]) % ei if k < a.n else 0
            for k in range(a.p)))
    return ExtClass(moduli=tuple(moduli), components=tuple(components))


def enumerate_deformations(a: AdaptedPresentation) -> DeformationSurvey:
    """Survey all (d, c) with d unit multipliers and c a signed permutation.

    Groups the parameter space by extension class and returns one
    representative per class, together with the crude upper bound e^p on
    how many classes could exist at all.
    """
    units = [u for u in range(1, a.e + 1) if gcd(u, a.e) == 1]
    found = {}
    for d in product(units, repeat=a.n):
        for perm in permutations(range(a.n)):
            for signs in product((1, -1), repeat=a.n):
                c = tuple(
                    tuple(signs[t] if k == perm[t] else 0
                          for k in range(a.n))
                    for t in range(a.n))
                cls = ext_class(a, d, c)
                if cls not in found:
                    found[cls] = (d, c)
    classes = tuple(sorted(found, key=lambda cl: cl.components))
    return DeformationSurvey(
        bound=a.e ** a.p,
        classes=classes,
        representatives=tuple((cl,) + found[cl] for cl in classes))


def standard_embedding(
    a: AdaptedPresentation,
    d: Tuple[int, ...],
    c: Tuple[Tuple[int, ...], ...],
) -> Tuple[AdaptedPresentation, Tuple[Element, ...]]:
    """Embed the base group into its deformation, fixing everything but
    the free segment: the free generator that used to receive power i is
    sent to the product its deformed power now lands on."""
    out = abdef(a, d, c)
    q = out.pres
    images = []
    for i in range(1, q.m + 1):
        if a.i1 < i <= a.i1 + a.n:
            t = i - a.i1 - 1
            img = pc.identity_element(q)
            for k in range(a.n):
                coef = d[k] * c[t][k]
                if coef:
                    img = pc.multiply(q, img, pc.power(
                        q, pc.generator(q, a.i1 + k + 1), coef))
            images.append(img)
        else:
            images.append(pc.generator(q, i))
    return out, tuple(images)


def _prime_product_avoiding(dk: int, j: int) -> int:
    """Product of the first j primes not dividing dk."""
    out = 1
    count = 0
    cand = 2
    while count < j:
        if all(cand % q for q in range(2, cand)) and dk % cand:
            out *= cand
            count += 1
        cand += 1
    return out


def twisted_embedding(
    a: AdaptedPresentation,
    d: Tuple[int, ...],
    c: Tuple[Tuple[int, ...], ...],
    j: int,
) -> Tuple[AdaptedPresentation, Tuple[Element, ...]]:
    """Like the standard embedding but sheared by q = first j primes
    missing from d: the middle segment picks up e/e_i-fold twists and the
    free segment is stretched by d + q e instead of d.  The image index
    grows with j yet stays coprime to e."""
    if j < 1:
        raise DeformError("twist depth must be at least 1")
    out = abdef(a, d, c)
    q = out.pres
    qs = [_prime_product_avoiding(d[k], j) for k in range(a.n)]
    images = []
    for i in range(1, q.m + 1):
        if a.i0 < i <= a.i1:
            t = i - a.i0 - 1
            ei = a.pres.periods[i - 1]
            assert ei is not None
            img = pc.generator(q, i)
            for k in range(a.n):
                coef = qs[k] * (a.e // ei) * c[t][k]
                if coef:
                    img = pc.multiply(q, img, pc.power(
                        q, pc.generator(q, a.i1 + k + 1), coef))
        elif a.i1 < i <= a.i1 + a.n:
            t = i - a.i1 - 1
            img = pc.identity_element(q)
            for k in range(a.n):
                coef = (d[k] + qs[k] * a.e) * c[t][k]
                if coef:
                    img = pc.multiply(q, img, pc.power(
                        q, pc.generator(q, a.i1 + k + 1), coef))
        else:
            img = pc.generator(q, i)
        images.append(img)
    return out, tuple(images)
