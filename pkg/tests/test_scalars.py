"""Scalar rings of pairings: construction, restriction, primes, refinement."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilpc import presentation as pc
from nilpc import subgroups as sg
from nilpc.bilinear import bilinearize
from nilpc.intlinalg import identity as eye
from nilpc.refined import refined_series
from nilpc.scalars import (
    InvariantSubmodule,
    Pairing,
    ScalarRingError,
    intersect_rings,
    multiplication_pairing,
    pairing_of,
    prime_decomposition_zero,
    restrict_ring,
    scalar_ring,
)
from oracles import gaussian_solutions, symplectic_solutions, zmod_mult_solutions

from groups_def import f23, heis, nr, zg


def flat(triple):
    phi1, phi2, phi0 = triple
    out = []
    for m in (phi1, phi2, phi0):
        for row in m:
            out.extend(row)
    return tuple(out)


def symplectic_pairing():
    return Pairing(
        periods_a=(None, None),
        periods_b=(None, None),
        periods_c=(None,),
        table=(((0,), (1,)), ((-1,), (0,))),
    )


def gaussian_pairing():
    # multiplication on Z[i] in the basis (1, i)
    return Pairing(
        periods_a=(None, None),
        periods_b=(None, None),
        periods_c=(None, None),
        table=(((1, 0), (0, 1)), ((0, 1), (-1, 0))),
    )


class TestScalarRing:
    def test_symplectic_ring_is_z(self):
        ring = scalar_ring(symplectic_pairing())
        assert ring.periods == (None,)
        assert abs(ring.unit[0]) == 1
        assert ring.is_commutative
        # oracle solutions all land in the computed lattice
        sols = symplectic_solutions(box=2)
        assert len(sols) == 5
        for t in sols:
            assert ring.contains_vec(flat(t))
        # and the lattice has no extra points in the same box
        box_pts = set()
        for k in range(-20, 21):
            v = ring.element_vec(tuple(k * c for c in ring.unit))
            if all(-2 <= x <= 2 for x in v):
                box_pts.add(tuple(v))
        assert box_pts == {flat(t) for t in sols}

    def test_gaussian_ring_is_z_i(self):
        ring = scalar_ring(gaussian_pairing())
        assert ring.periods == (None, None)
        assert ring.is_commutative
        for t in gaussian_solutions(box=2):
            assert ring.contains_vec(flat(t))
        # some element squares to minus one
        minus_one = ring.neg(ring.unit)
        hits = [
            (a, b)
            for a in range(-2, 3)
            for b in range(-2, 3)
            if ring.mul((a, b), (a, b)) == minus_one
        ]
        assert len(hits) == 2  # i and -i

    def test_gaussian_box_points_match_oracle(self):
        ring = scalar_ring(gaussian_pairing())
        oracle = {flat(t) for t in gaussian_solutions(box=2)}
        pts = set()
        for a in range(-12, 13):
            for b in range(-12, 13):
                v = tuple(ring.element_vec((a, b)))
                if all(-2 <= x <= 2 for x in v):
                    pts.add(v)
        assert pts == oracle

    def test_zmod2_multiplication(self):
        ring = scalar_ring(multiplication_pairing(2))
        assert ring.periods == (2,)
        assert ring.unit == (1,)
        want = {(x1, x2, x0) for x1, x2, x0 in zmod_mult_solutions(2)}
        got = {
            (x1, x2, x0)
            for x1, x2, x0 in product(range(2), repeat=3)
            if ring.contains_vec((x1, x2, x0))
        }
        assert got == want

    def test_zmod6_invariants(self):
        ring = scalar_ring(multiplication_pairing(6))
        assert ring.periods == (6,)
        assert ring.order() == 6
        assert ring.mul(ring.unit, (5,)) == (5,)

    def test_heis_ring_is_z(self):
        ring = scalar_ring(pairing_of(bilinearize(heis())))
        assert ring.periods == (None,)
        phi1, phi2, phi0 = ring.triple_of(ring.unit)
        assert phi1 == eye(2)
        assert phi2 == eye(2)
        assert phi0 == eye(1)

    def test_f23_solutions_respect_grading(self):
        b = bilinearize(f23())
        p = pairing_of(b)
        assert p.b_blocks == (2, 1)
        assert p.c_blocks == (1, 2)
        ring = scalar_ring(p)
        for j in range(len(ring.periods)):
            coords = tuple(1 if i == j else 0 for i in range(len(ring.periods)))
            _, phi2, phi0 = ring.triple_of(coords)
            # off-diagonal blocks vanish
            for r in range(2):
                assert phi2[r][2] == 0
                assert phi2[2][r] == 0
            for k in range(1, 3):
                assert phi0[0][k] == 0
                assert phi0[k][0] == 0

    def test_ill_defined_table_rejected(self):
        with pytest.raises(ScalarRingError):
            Pairing(
                periods_a=(2,),
                periods_b=(None,),
                periods_c=(None,),
                table=(((1,),),),
            )

    def test_table_shape_rejected(self):
        with pytest.raises(ScalarRingError):
            Pairing(
                periods_a=(None,),
                periods_b=(None,),
                periods_c=(None,),
                table=(((1,), (0,)),),
            )

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-6, 6), min_size=6, max_size=6))
    def test_zg_ring_distributive(self, raw):
        ring = _zg_ring()
        n = len(ring.periods)
        a = tuple(ring.reduce(tuple(raw[0:1] * n))[:n])
        b = ring.reduce(tuple(raw[i % 6] for i in range(n)))
        c = ring.reduce(tuple(raw[(i + 3) % 6] for i in range(n)))
        left = ring.mul(a, ring.add(b, c))
        right = ring.add(ring.mul(a, b), ring.mul(a, c))
        assert left == right


_ZG_RING = None


def _zg_ring():
    global _ZG_RING
    if _ZG_RING is None:
        _ZG_RING = scalar_ring(pairing_of(bilinearize(zg())))
    return _ZG_RING


class TestRestriction:
    def test_restrict_nothing_is_identity(self):
        ring = scalar_ring(pairing_of(bilinearize(heis())))
        again = restrict_ring(ring, [])
        assert again.s_basis == ring.s_basis
        assert again.periods == ring.periods

    def test_zg_full_block_invariance_is_vacuous(self):
        # the central part of the first lower layer of ZG is that whole
        # layer, so requiring phi0 to preserve it changes nothing
        p = zg()
        ring = _zg_ring()
        b = bilinearize(p)
        zpart = sg.constrained_subgroup(
            p, b.series.lower[1],
            [(sg.whole_subgroup(p).rows, sg.trivial_subgroup(p))])
        gens = tuple(b.out[0].coords(r) for r in zpart.rows)
        res = restrict_ring(
            ring, [InvariantSubmodule("phi0", 0, gens)])
        assert res.s_basis == ring.s_basis

    def test_intersect_with_self(self):
        ring = scalar_ring(multiplication_pairing(4))
        meet = intersect_rings(ring, ring)
        assert meet.periods == ring.periods
        assert meet.s_basis == ring.s_basis


class TestPrimeDecomposition:
    def test_zmod6_splits(self):
        ring = scalar_ring(multiplication_pairing(6))
        factors = prime_decomposition_zero(ring)
        assert len(factors) == 2
        sets = {frozenset(f) for f in factors}
        assert sets == {
            frozenset({(0,), (2,), (4,)}),
            frozenset({(0,), (3,)}),
        }

    def test_zmod4_repeats_one_prime(self):
        ring = scalar_ring(multiplication_pairing(4))
        factors = prime_decomposition_zero(ring)
        assert len(factors) == 2
        assert factors[0] == factors[1] == frozenset({(0,), (2,)})

    def test_field_zero_ideal_is_prime(self):
        ring = scalar_ring(multiplication_pairing(5))
        factors = prime_decomposition_zero(ring)
        assert factors == [frozenset({(0,)})]

    def test_infinite_ring_rejected(self):
        ring = scalar_ring(symplectic_pairing())
        with pytest.raises(ScalarRingError):
            prime_decomposition_zero(ring)


def _unit_acts_as_identity(rs):
    for entry in rs.actions:
        if entry.matrices is None:
            continue
        n = len(entry.section.periods)
        assert len(entry.matrices) == len(rs.ring.periods)
        acc = [[0] * n for _ in range(n)]
        for cj, m in zip(rs.ring.unit, entry.matrices):
            for r in range(n):
                for c in range(n):
                    acc[r][c] += cj * m[r][c]
        for r in range(n):
            want_row = tuple(1 if c == r else 0 for c in range(n))
            assert entry.section.reduce(tuple(acc[r])) == want_row


class TestRefinedSeries:
    def test_heis(self):
        p = heis()
        rs = refined_series(p)
        assert rs.ring.periods == (None,)
        assert abs(rs.ring.unit[0]) == 1
        mid = sg.center(p)
        chain_u = [term for _, term in rs.upper_chain]
        chain_l = [term for _, term in rs.left_chain]
        assert chain_u == [sg.whole_subgroup(p), mid, sg.trivial_subgroup(p)]
        assert chain_l == chain_u
        assert rs.gap_section.periods == ()
        _unit_acts_as_identity(rs)

    def test_zg(self):
        p = zg()
        rs = refined_series(p)
        w = sg.whole_subgroup(p)
        z = sg.center(p)
        der = sg.commutator_subgroup(p, w, w)
        chain_u = [term for _, term in rs.upper_chain]
        assert chain_u == [w, z, der, sg.trivial_subgroup(p)]
        # the gap between the centre and the derived subgroup is an
        # infinite cyclic section generated by the fifth generator
        assert rs.gap_section.periods == (None,)
        assert rs.gap_section.basis[0] == pc.generator(p, 5)
        specials = [e for e in rs.actions if e.matrices is None]
        assert len(specials) == 2  # one per chain
        assert rs.pl_ring.s_basis == rs.base_ring.s_basis
        _unit_acts_as_identity(rs)

    def test_abelian_degenerate(self):
        p = pc.PcPresentation(name="A", periods=(None, None))
        rs = refined_series(p)
        assert rs.ring.periods == ()
        assert rs.gap_section.periods == (None, None)
        chain_u = [term for _, term in rs.upper_chain]
        assert chain_u == [sg.whole_subgroup(p), sg.trivial_subgroup(p)]

    def test_f23_runs_and_unit_acts(self):
        rs = refined_series(f23())
        assert rs.ring.is_commutative
        assert rs.ring.mul(rs.ring.unit, rs.ring.unit) == rs.ring.unit
        _unit_acts_as_identity(rs)

    def test_nr_runs(self):
        rs = refined_series(nr())
        assert rs.ring.mul(rs.ring.unit, rs.ring.unit) == rs.ring.unit
        _unit_acts_as_identity(rs)
