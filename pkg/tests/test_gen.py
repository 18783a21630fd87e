import pytest

from keyhorn import (
    Measure,
    TrivialInstance,
    VarSet,
    gen_hydra,
    gen_projective,
    gen_random,
    gen_sat_reduction,
    measure_size,
    verify_representation,
)
from keyhorn.gen import GenerationError


class TestGenRandom:
    def test_deterministic(self):
        a = gen_random(6, 4, 3, seed=1)
        b = gen_random(6, 4, 3, seed=1)
        assert a == b
        c = gen_random(6, 4, 3, seed=2)
        assert a != c  # overwhelmingly likely for distinct seeds

    def test_invariants(self):
        for seed in range(20):
            try:
                inst = gen_random(7, 4, 4, seed)
            except (GenerationError, TrivialInstance):
                continue
            assert inst.is_normalized
            assert inst.k <= 4

    def test_infeasible(self):
        with pytest.raises(GenerationError):
            gen_random(3, 4, 1, seed=0)


class TestGenHydra:
    def test_triangle(self):
        inst = gen_hydra([(1, 2), (2, 3), (1, 3)], 3)
        assert inst.m == 3 and inst.n == 3 and inst.k == 2

    def test_single_edge_trivial(self):
        with pytest.raises(TrivialInstance):
            gen_hydra([(1, 2)], 3)

    def test_edge_covering_universe(self):
        # over two variables the only edge is the whole universe, which can
        # never be a body
        with pytest.raises(GenerationError):
            gen_hydra([(1, 2)], 2)

    def test_star_core_removed(self):
        inst = gen_hydra([(1, 2), (1, 3), (1, 4)], 4)
        assert inst.n == 3 and inst.k == 1
        assert [sorted(b) for b in inst.bodies] == [[1], [2], [3]]

    def test_self_loop(self):
        with pytest.raises(GenerationError):
            gen_hydra([(2, 2)], 3)


class TestGenProjective:
    def test_fano_plane(self):
        p = gen_projective(2)
        assert p.n == 7 and len(p.hyperplane) == 3
        # unique line through the first two points, and it avoids point 2
        shifts = p.hyperplane_shifts()
        through = [s for s in shifts if VarSet(7, [1, 2]).issubset(s)]
        assert len(through) == 1 and through[0] == p.hyperplane
        assert 3 not in p.hyperplane  # 0-based point 2
        assert len(set(shifts)) == 7
        for i, a in enumerate(shifts):
            for b in shifts[i + 1 :]:
                assert len(a & b) == 1

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_shift_structure(self, d):
        p = gen_projective(d)
        n = (1 << (d + 1)) - 1
        assert p.n == n
        shifts = p.hyperplane_shifts()
        assert len(set(shifts)) == n
        assert all(len(s) == (1 << d) - 1 for s in shifts)
        meet = (1 << (d - 1)) - 1
        for i, a in enumerate(shifts):
            for b in shifts[i + 1 :]:
                assert len(a & b) == meet
        # the base hyperplane holds points 0..d-1 and avoids point d
        assert all(v in p.hyperplane for v in range(1, d + 1))
        assert (d + 1) not in p.hyperplane

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_certificate(self, d):
        p = gen_projective(d)
        inst = p.instance()
        assert verify_representation(p.certificate, inst)
        csize = measure_size(p.certificate, Measure.C)
        # one clause of the interval family duplicates a clause of the full
        # group on the interval body, hence 3n - d - 2 distinct clauses
        assert csize == 3 * p.n - d - 2
        assert csize <= 3 * p.n

    def test_d4_entering_price(self):
        p = gen_projective(4)
        assert p.min_price_into_hyperplane_shifts() == 8

    def test_d2_entering_price_below_halving_bound(self):
        # at d = 2 an interval shift overlaps a hyperplane in two points, so
        # the measured minimum drops below 2^(d-1)
        p = gen_projective(2)
        assert p.min_price_into_hyperplane_shifts() == 1

    def test_range_validation(self):
        with pytest.raises(GenerationError):
            gen_projective(1)
        with pytest.raises(GenerationError):
            gen_projective(7)

    def test_deterministic(self):
        a, b = gen_projective(3), gen_projective(3)
        assert a.bodies == b.bodies and a.certificate == b.certificate


class TestGenSatReduction:
    def test_minimal_parameters(self):
        r = gen_sat_reduction([(1, 2, 3)])
        assert (r.alpha, r.beta, r.tau) == (98, 341, 542_734)
        assert len(r.bodies) == 9
        assert len(r.source) == 4 * 341
        assert len(r.m_block) == 8
        assert len(r.z_set) == 4 * 98 + 1

    def test_sizes_strictly_decrease(self):
        r = gen_sat_reduction([(1, 2, 3), (1, -2, 4)])
        sizes = [len(x) for x in r.x_sets]
        assert all(a > b + r.alpha for a, b in zip(sizes, sizes[1:]))
        assert all(len(x) == len(y) for x, y in zip(r.x_sets, r.y_sets))

    def test_pattern_overlap_bounded(self):
        r = gen_sat_reduction([(1, 2, 3), (-1, 2, 4), (1, -3, 5)])
        for i, x in enumerate(r.x_sets):
            assert len(x & r.m_block) <= 16
            assert len(x & r.m_block) == len(r.y_sets[i] & r.m_block)

    def test_instance_is_sperner(self):
        r = gen_sat_reduction([(1, 2, 3)])
        inst = r.instance()
        assert inst.m == 9

    def test_deterministic(self):
        a = gen_sat_reduction([(1, 2, 3), (1, -2, 4)])
        b = gen_sat_reduction([(1, 2, 3), (1, -2, 4)])
        assert a.bodies == b.bodies and (a.alpha, a.beta, a.tau) == (b.alpha, b.beta, b.tau)

    def test_occurrence_bound(self):
        clauses = [(1, 2, 3)] * 5  # variable 1 appears five times
        with pytest.raises(GenerationError):
            gen_sat_reduction(clauses)

    def test_clause_shape(self):
        with pytest.raises(GenerationError):
            gen_sat_reduction([(1, 2)])
        with pytest.raises(GenerationError):
            gen_sat_reduction([(1, -1, 2)])
        with pytest.raises(GenerationError):
            gen_sat_reduction([(1, 2, 4)])  # variable 3 never occurs
