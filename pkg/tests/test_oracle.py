import random
from fractions import Fraction

import pytest

from fairselect.errors import ConstructionError, ParameterError
from fairselect.model import FairnessSpec, WeightBox, WeightVector, top_k
from fairselect.oracle import (
    brute_force_2d,
    brute_force_hd,
    gen_random_instance,
    pad_dominated,
    pad_dominating,
)

from conftest import make_dataset


class TestBruteForce2D:
    def test_t1_triple_crossing(self, t1):
        st, t, w = brute_force_2d(t1, FairnessSpec(1, 1, 1), 0, 1)
        assert st == "found" and t == Fraction(1, 2)
        assert w.as_fractions() == (Fraction(1, 2), Fraction(1, 2))

    def test_unconstrained_found_at_lb(self, t1):
        st, t, _ = brute_force_2d(t1, FairnessSpec(1, 0, 1), Fraction(1, 5), 1)
        assert st == "found" and t == Fraction(1, 5)

    def test_single_protected_candidate(self):
        ds = make_dataset([((0.3, 0.7), "G1")])
        st, t, _ = brute_force_2d(ds, FairnessSpec(1, 1, 1), 0, 1)
        assert st == "found" and t == 0

    def test_dimension_guard(self):
        ds = make_dataset([((0.1, 0.2, 0.3), "G1")])
        with pytest.raises(Exception):
            brute_force_2d(ds, FairnessSpec(1, 1, 1), 0, 1)


class TestBruteForceHD:
    def test_basis_instance(self):
        ds = make_dataset(
            [((1.0, 0.0, 0.0), "G1"), ((0.0, 1.0, 0.0), "G2"), ((0.0, 0.0, 1.0), "G2")]
        )
        st, w, ids = brute_force_hd(ds, FairnessSpec(1, 1, 1), WeightBox.full_simplex(3))
        assert st == "found" and ids == (0,)

    def test_empty_box(self):
        ds = make_dataset([((0.5, 0.5), "G1")])
        box = WeightBox(
            d=2,
            inequalities=(
                ((Fraction(1), Fraction(0)), Fraction(1, 10)),
                ((Fraction(-1), Fraction(0)), Fraction(-9, 10)),
            ),
        )
        st, _, _ = brute_force_hd(ds, FairnessSpec(1, 1, 1), box)
        assert st == "infeasible"

    @pytest.mark.filterwarnings("ignore::UserWarning")
    def test_lower_above_group_size(self):
        ds = make_dataset([((0.5, 0.5), "G2"), ((0.4, 0.4), "G2")])
        st, _, _ = brute_force_hd(ds, FairnessSpec(1, 1, 1), WeightBox.full_simplex(2))
        assert st == "infeasible"

    def test_size_guard(self):
        ds = gen_random_instance(seed=0, n=16, d=2, grid="0.1", p_g1=0.5)
        with pytest.raises(ParameterError):
            brute_force_hd(ds, FairnessSpec(1, 0, 1), WeightBox.full_simplex(2))

    def test_agrees_with_2d_oracle(self):
        rng = random.Random(55)
        for trial in range(25):
            ds = gen_random_instance(seed=700 + trial, n=rng.randint(2, 10), d=2, grid="0.1", p_g1=0.5)
            k = rng.randint(1, min(4, ds.n))
            lo = rng.randint(0, k)
            spec = FairnessSpec(k, lo, rng.randint(lo, k))
            a = Fraction(rng.randint(0, 10), 10)
            b = Fraction(rng.randint(0, 10), 10)
            lb, ub = min(a, b), max(a, b)
            box = WeightBox(
                d=2,
                inequalities=(
                    ((Fraction(1), Fraction(0)), ub),
                    ((Fraction(-1), Fraction(0)), -lb),
                ),
            )
            st2d, _, _ = brute_force_2d(ds, spec, lb, ub)
            sthd, _, _ = brute_force_hd(ds, spec, box, seed=trial)
            assert st2d == sthd, trial


class TestPadding:
    @pytest.fixture
    def interior(self):
        # strictly inside (0, 1) so there is grid room on both sides
        return make_dataset(
            [((0.9, 0.1), "G1"), ((0.1, 0.9), "G2"), ((0.5, 0.5), "G2")]
        )

    def test_pad_dominated_preserves_topk(self, interior):
        padded = pad_dominated(interior, 3, "G2")
        assert padded.n == 6
        for tnum in range(0, 5):
            w = WeightVector((Fraction(tnum, 4), 1 - Fraction(tnum, 4)))
            for k in (1, 2, 3):
                a = top_k(interior, w, k)
                b = top_k(padded, w, k)
                assert (a.strictly_in, a.tied_pool, a.slots) == (
                    b.strictly_in, b.tied_pool, b.slots)

    def test_pad_dominating_occupies_top(self, interior):
        padded = pad_dominating(interior, 2, "G2")
        for tnum in (1, 2, 3):
            w = WeightVector((Fraction(tnum, 4), 1 - Fraction(tnum, 4)))
            r = top_k(padded, w, 3)
            assert {3, 4} <= r.strictly_in

    def test_pad_zero_is_identity(self, interior):
        assert pad_dominated(interior, 0, "G2") is interior

    def test_margin_error_at_clamp_boundary(self, t1):
        # T1 touches both 0 and 1, so strict padding is impossible either way
        for pad in (pad_dominated, pad_dominating):
            with pytest.raises(ConstructionError) as exc:
                pad(t1, 1, "G2")
            assert exc.value.margins is not None

    def test_pad_is_stacked(self, interior):
        from fairselect.geometry import dominates

        padded = pad_dominating(interior, 3, "G2")
        news = padded.candidates[3:]
        for i in range(3):
            for j in range(3):
                if i > j:
                    assert dominates(news[i], news[j])


class TestGenerator:
    def test_determinism(self):
        a = gen_random_instance(seed=7, n=10, d=2, grid="0.05", p_g1=0.5)
        b = gen_random_instance(seed=7, n=10, d=2, grid="0.05", p_g1=0.5)
        assert [c.scores for c in a.candidates] == [c.scores for c in b.candidates]
        assert [c.group for c in a.candidates] == [c.group for c in b.candidates]

    def test_coarse_grid_forces_ties(self):
        ds = gen_random_instance(seed=3, n=20, d=2, grid="0.5", p_g1=0.5)
        for j in range(2):
            distinct = {c.scores[j] for c in ds.candidates}
            assert len(distinct) <= 3

    def test_all_protected(self):
        ds = gen_random_instance(seed=1, n=8, d=2, grid="0.1", p_g1=1.0)
        assert ds.protected_count == 8

    def test_non_decimal_grid_rejected(self):
        with pytest.raises(ParameterError):
            gen_random_instance(seed=0, n=4, d=2, grid=Fraction(1, 3), p_g1=0.5)
