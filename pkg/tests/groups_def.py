"""Test-suite copies of the shipped group presentations.

Defined independently of the package's fixture files so that the loader can
be cross-checked against them. Tail words are canonical: entries are
(generator index, exponent), indices ascending.

Generator dictionaries:
  HEIS  u1,u2 free, u3 = [u1,u2] central (discrete Heisenberg).
  ZG    u1..u10 = b, c, d, a, f, [a,b], [a,c], [a,d], [b,c], [b,d]
  ZH    same underlying letters, [u3,u2] changed to the square
  ZK    same letters, a^5 changed to f^2
  NR    u1..u6 = a, b, c, [a,b], [a,c], [b,c] with the last two of order 3
  F23   free 2-generator class-3: u1, u2, u3=[u2,u1], u4=[u3,u1], u5=[u3,u2]
"""

from nilpc.presentation import PcPresentation

INF = None


def heis():
    return PcPresentation(
        name="HEIS",
        periods=(INF, INF, INF),
        powers=(),
        commutators=(((2, 1), ((3, -1),)),),
    )


def mutated_heis():
    # period of u1 forced to 2 with a trivial power tail: inconsistent
    return PcPresentation(
        name="HEIS-mutated",
        periods=(2, INF, INF),
        powers=(),
        commutators=(((2, 1), ((3, -1),)),),
    )


def zg():
    return PcPresentation(
        name="ZG",
        periods=(INF, INF, INF, 5, INF, 5, 5, 5, INF, INF),
        powers=((4, ((5, 1),)),),
        commutators=(
            ((2, 1), ((9, -1),)),
            ((3, 1), ((10, -1),)),
            ((3, 2), ((6, 1),)),
            ((4, 1), ((6, 1),)),
            ((4, 2), ((7, 1),)),
            ((4, 3), ((8, 1),)),
        ),
    )


def zh():
    return PcPresentation(
        name="ZH",
        periods=(INF, INF, INF, 5, INF, 5, 5, 5, INF, INF),
        powers=((4, ((5, 1),)),),
        commutators=(
            ((2, 1), ((9, -1),)),
            ((3, 1), ((10, -1),)),
            ((3, 2), ((6, 2),)),
            ((4, 1), ((6, 1),)),
            ((4, 2), ((7, 1),)),
            ((4, 3), ((8, 1),)),
        ),
    )


def zk():
    return PcPresentation(
        name="ZK",
        periods=(INF, INF, INF, 5, INF, 5, 5, 5, INF, INF),
        powers=((4, ((5, 2),)),),
        commutators=(
            ((2, 1), ((9, -1),)),
            ((3, 1), ((10, -1),)),
            ((3, 2), ((6, 1),)),
            ((4, 1), ((6, 1),)),
            ((4, 2), ((7, 1),)),
            ((4, 3), ((8, 1),)),
        ),
    )


def nr():
    return PcPresentation(
        name="NR",
        periods=(INF, INF, INF, INF, 3, 3),
        powers=(),
        commutators=(
            # inverse tails on the order-3 generators are stored canonically
            ((2, 1), ((4, -1),)),
            ((3, 1), ((5, 2),)),
            ((3, 2), ((6, 2),)),
        ),
    )


def f23():
    return PcPresentation(
        name="F23",
        periods=(INF, INF, INF, INF, INF),
        powers=(),
        commutators=(
            ((2, 1), ((3, 1),)),
            ((3, 1), ((4, 1),)),
            ((3, 2), ((5, 1),)),
        ),
    )


ALL_CONSISTENT = [heis, zg, zh, zk, nr, f23]
