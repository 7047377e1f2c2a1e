"""Polycyclic presentations and the collection engine.

A presentation has generators u_1..u_m, a period e_i (None for infinite,
otherwise >= 2) per generator, a power tail u_i^{e_i} = (word in u_{>i}) for
finite periods, and commutator tails [u_j, u_i] = (word in u_{>j}) for i < j.
Elements are canonical coordinate tuples: u_1^{t_1} * ... * u_m^{t_m} with
0 <= t_i < e_i whenever e_i is finite.

Products are computed by collection from the left: a work stack of
(generator, exponent) letters is merged into the coordinate vector one letter
at a time; moving a letter past deeper generators applies the conjugation
automorphism, computed by binary powering, and period overflow feeds the
power tail back onto the stack. Popping a letter of index i only ever pushes
letters of index > i, which is what makes the loop terminate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple


Period = Optional[int]  # None = infinite
Word = Tuple[Tuple[int, int], ...]  # ((generator index, exponent), ...)
Element = Tuple[int, ...]


class PresentationError(ValueError):
    """Raised when a presentation violates the structural contract."""


@dataclass(frozen=True)
class PcPresentation:
    """Immutable polycyclic presentation.

    powers: tuple of (i, tail word) pairs, one per finite-period generator
        with a nontrivial tail; the word is the canonical form of u_i^{e_i}.
    commutators: tuple of ((j, i), tail word) pairs with i < j; the word is
        the canonical form of [u_j, u_i]. Absent pairs commute.
    """

    name: str
    periods: Tuple[Period, ...]
    powers: Tuple[Tuple[int, Word], ...] = ()
    commutators: Tuple[Tuple[Tuple[int, int], Word], ...] = ()
    _pow: Dict[int, Word] = field(init=False, repr=False, compare=False, hash=False)
    _comm: Dict[Tuple[int, int], Word] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        m = len(self.periods)
        for e in self.periods:
            if e is not None and e < 2:
                raise PresentationError(
                    f"{self.name}: period {e} not allowed (must be >= 2 or None)"
                )
        pow_map: Dict[int, Word] = {}
        for i, word in self.powers:
            if not (1 <= i <= m):
                raise PresentationError(f"{self.name}: power tail index {i} out of range")
            if self.periods[i - 1] is None:
                raise PresentationError(
                    f"{self.name}: power tail on infinite-period generator {i}"
                )
            if i in pow_map:
                raise PresentationError(f"{self.name}: duplicate power tail for {i}")
            self._check_tail(word, low=i, m=m)
            pow_map[i] = tuple(word)
        comm_map: Dict[Tuple[int, int], Word] = {}
        for (j, i), word in self.commutators:
            if not (1 <= i < j <= m):
                raise PresentationError(
                    f"{self.name}: commutator key ({j},{i}) out of order"
                )
            if (j, i) in comm_map:
                raise PresentationError(f"{self.name}: duplicate commutator ({j},{i})")
            self._check_tail(word, low=j, m=m)
            comm_map[(j, i)] = tuple(word)
        object.__setattr__(self, "_pow", pow_map)
        object.__setattr__(self, "_comm", comm_map)

    def _check_tail(self, word: Word, low: int, m: int) -> None:
        prev = low
        for k, e in word:
            if not (low < k <= m):
                raise PresentationError(
                    f"{self.name}: tail touches generator {k}, needs support > {low}"
                )
            if k < prev:
                raise PresentationError(f"{self.name}: tail word not ascending")
            prev = k
            ek = self.periods[k - 1]
            if e == 0:
                raise PresentationError(f"{self.name}: zero exponent in tail")
            if ek is not None and not (0 < e < ek):
                raise PresentationError(
                    f"{self.name}: tail exponent {e} outside [1, {ek}) at generator {k}"
                )

    @property
    def m(self) -> int:
        return len(self.periods)

    def period(self, i: int) -> Period:
        return self.periods[i - 1]

    def power_tail(self, i: int) -> Word:
        return self._pow.get(i, ())

    def commutator_tail(self, j: int, i: int) -> Word:
        return self._comm.get((j, i), ())


# ---------------------------------------------------------------------------
# elements and words


def identity_element(p: PcPresentation) -> Element:
    return (0,) * p.m


def generator(p: PcPresentation, i: int) -> Element:
    if not (1 <= i <= p.m):
        raise ValueError(f"generator index {i} out of range")
    return tuple(1 if k == i - 1 else 0 for k in range(p.m))


def word_of(p: PcPresentation, x: Element) -> Word:
    return tuple((i + 1, v) for i, v in enumerate(x) if v)


def element_of_word_coords(p: PcPresentation, word: Word) -> Element:
    """Interpret an ascending canonical word directly as coordinates."""
    t = [0] * p.m
    for k, e in word:
        t[k - 1] = e
    return tuple(t)


def is_canonical(p: PcPresentation, x: Element) -> bool:
    if len(x) != p.m:
        return False
    for e, v in zip(p.periods, x):
        if e is not None and not (0 <= v < e):
            return False
    return True


def _inverse_word(p: PcPresentation, x: Element) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, -e) for i, e in reversed(word_of(p, x)))


# ---------------------------------------------------------------------------
# conjugation automorphisms
#
# _conj_step(p, i) maps k > i to the canonical form of u_i^-1 u_k u_i;
# _conj_step_inv is its inverse, solved from the top index downward. Both are
# cached per presentation; larger exponents are assembled by binary powering.


@lru_cache(maxsize=None)
def _conj_step(p: PcPresentation, i: int) -> Tuple[Tuple[int, Element], ...]:
    out = []
    for k in range(i + 1, p.m + 1):
        v = [0] * p.m
        v[k - 1] = 1
        for l, e in p.commutator_tail(k, i):
            v[l - 1] = e
        out.append((k, tuple(v)))
    return tuple(out)


@lru_cache(maxsize=None)
def _conj_step_inv(p: PcPresentation, i: int) -> Tuple[Tuple[int, Element], ...]:
    images: Dict[int, Element] = {}
    for k in range(p.m, i, -1):
        tail = p.commutator_tail(k, i)
        if not tail:
            images[k] = generator(p, k)
            continue
        c = element_of_word_coords(p, tail)
        delta = _apply_aut(p, images, inverse(p, c))
        images[k] = multiply(p, generator(p, k), delta)
    return tuple(sorted(images.items()))


def _apply_aut(
    p: PcPresentation, images: Dict[int, Element], x: Element
) -> Element:
    acc = identity_element(p)
    for k, a in word_of(p, x):
        acc = multiply(p, acc, power(p, images[k], a))
    return acc


def _compose_aut(
    p: PcPresentation, outer: Dict[int, Element], inner: Dict[int, Element]
) -> Dict[int, Element]:
    return {k: _apply_aut(p, outer, img) for k, img in inner.items()}


def _conj_aut(p: PcPresentation, i: int, e: int) -> Dict[int, Element]:
    """Images of u_k (k > i) under conjugation by u_i^e."""
    if e >= 0:
        base = dict(_conj_step(p, i))
        n = e
    else:
        base = dict(_conj_step_inv(p, i))
        n = -e
    result = {k: generator(p, k) for k in range(i + 1, p.m + 1)}
    while n:
        if n & 1:
            result = _compose_aut(p, base, result)
        n >>= 1
        if n:
            base = _compose_aut(p, base, base)
    return result


# ---------------------------------------------------------------------------
# collection


def _collect(p: PcPresentation, t: list, letters: Iterable[Tuple[int, int]]) -> None:
    m = p.m
    stack = list(letters)
    stack.reverse()
    while stack:
        i, e = stack.pop()
        if e == 0:
            continue
        if not (1 <= i <= m):
            raise ValueError(f"letter index {i} out of range")
        suffix = [(k, t[k - 1]) for k in range(i + 1, m + 1) if t[k - 1]]
        if suffix:
            images = _conj_aut(p, i, e)
            moved: list = []
            for k, a in suffix:
                g = power(p, images[k], a)
                moved.extend(word_of(p, g))
                t[k - 1] = 0
            stack.extend(reversed(moved))
        ei = p.periods[i - 1]
        a = t[i - 1] + e
        if ei is None:
            t[i - 1] = a
            continue
        d = a % ei
        q = (a - d) // ei
        t[i - 1] = d
        if q:
            tail = p.power_tail(i)
            if tail:
                g = power(p, element_of_word_coords(p, tail), q)
                stack.extend(reversed(word_of(p, g)))


def normal_form(p: PcPresentation, word: Iterable[Tuple[int, int]]) -> Element:
    t = [0] * p.m
    _collect(p, t, tuple(word))
    return tuple(t)


def multiply(p: PcPresentation, x: Element, y: Element) -> Element:
    t = list(x)
    _collect(p, t, word_of(p, y))
    return tuple(t)


def inverse(p: PcPresentation, x: Element) -> Element:
    return normal_form(p, _inverse_word(p, x))


def power(p: PcPresentation, x: Element, n: int) -> Element:
    if n == 0:
        return identity_element(p)
    if n < 0:
        return power(p, inverse(p, x), -n)
    acc = None
    base = x
    while n:
        if n & 1:
            acc = base if acc is None else multiply(p, acc, base)
        n >>= 1
        if n:
            base = multiply(p, base, base)
    return acc


def commutator(p: PcPresentation, x: Element, y: Element) -> Element:
    word = (
        _inverse_word(p, x)
        + _inverse_word(p, y)
        + word_of(p, x)
        + word_of(p, y)
    )
    return normal_form(p, word)


def conjugate(p: PcPresentation, x: Element, g: Element) -> Element:
    """g^-1 x g."""
    word = _inverse_word(p, g) + word_of(p, x) + word_of(p, g)
    return normal_form(p, word)


# ---------------------------------------------------------------------------
# consistency


@dataclass(frozen=True)
class ConsistencyFailure:
    kind: str  # "triple" | "power-gen" | "gen-power" | "power-power"
    j: int
    i: int
    k: Optional[int]
    lhs: Element
    rhs: Element


@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    failures: Tuple[ConsistencyFailure, ...]


def consistency_check(p: PcPresentation) -> ConsistencyReport:
    """Collect the standard overlap pairs both ways and compare.

    Checked overlaps: u_k(u_j u_i) vs (u_k u_j)u_i for k > j > i;
    u_j^{e_j} u_i against the power tail for finite e_j; u_j u_i^{e_i}
    likewise for finite e_i; and u_i^{e_i + 1} both ways.
    """
    failures = []
    m = p.m

    def nf(word):
        return normal_form(p, word)

    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            for k in range(j + 1, m + 1):
                a = nf(((j, 1), (i, 1)))
                lhs = nf(((k, 1),) + word_of(p, a))
                b = nf(((k, 1), (j, 1)))
                rhs = nf(word_of(p, b) + ((i, 1),))
                if lhs != rhs:
                    failures.append(
                        ConsistencyFailure("triple", j, i, k, lhs, rhs)
                    )
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            ej = p.period(j)
            if ej is not None:
                lhs = nf(p.power_tail(j) + ((i, 1),))
                a = nf(((j, 1), (i, 1)))
                rhs = nf(((j, ej - 1),) + word_of(p, a))
                if lhs != rhs:
                    failures.append(
                        ConsistencyFailure("power-gen", j, i, None, lhs, rhs)
                    )
            ei = p.period(i)
            if ei is not None:
                lhs = nf(((j, 1),) + p.power_tail(i))
                a = nf(((j, 1), (i, 1)))
                rhs = nf(word_of(p, a) + ((i, ei - 1),))
                if lhs != rhs:
                    failures.append(
                        ConsistencyFailure("gen-power", j, i, None, lhs, rhs)
                    )
    for i in range(1, m + 1):
        ei = p.period(i)
        if ei is not None:
            lhs = nf(((i, 1),) + p.power_tail(i))
            rhs = nf(p.power_tail(i) + ((i, 1),))
            if lhs != rhs:
                failures.append(
                    ConsistencyFailure("power-power", i, i, None, lhs, rhs)
                )
    return ConsistencyReport(ok=not failures, failures=tuple(failures))
