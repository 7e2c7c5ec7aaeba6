"""
Unit tests for homology and the closed-form routes to Z_Q.
"""

import random
import sys
from pathlib import Path

import pytest  # type: ignore[import-untyped]

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from core.category import sl2_class0
from core.homology import (
    HomologySummary,
    SmithForm,
    _divisibility_chain,
    duality_factor,
    homology_of,
    q_invariant_cyclic,
    q_invariant_generic,
    q_invariant_homological,
    smith_normal_form,
    wedge_normal_form,
)
from core.presentation import circle, commutator, cyclic, dual, parse, sphere
from utils.error_handler import ChiTooSmall


def _row_operations(rng: random.Random, rows):
    """Six random swaps, sign changes or shears; all unimodular."""
    rows = [list(r) for r in rows]
    for _ in range(6):
        i, j = rng.sample(range(len(rows)), 2) if len(rows) > 1 else (0, 0)
        op = rng.choice(("swap", "negate", "shear"))
        if op == "swap":
            rows[i], rows[j] = rows[j], rows[i]
        elif op == "negate" or i == j:
            rows[i] = [-a for a in rows[i]]
        else:
            k = rng.randint(-3, 3)
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    return rows


def _scramble(rng: random.Random, M):
    N = _row_operations(rng, M)
    return [list(r) for r in zip(*_row_operations(rng, zip(*N)))]


class TestSmithForm:
    """Test ranks and elementary divisors."""

    def test_diagonal(self):
        assert smith_normal_form([[2, 0], [0, 3]]) == SmithForm(rank=2, divisors=(1, 6))

    def test_zero_matrix(self):
        assert smith_normal_form([[0, 0]]) == SmithForm(rank=0, divisors=())

    def test_empty_matrix(self):
        assert smith_normal_form([]).rank == 0

    def test_rank_deficient(self):
        snf = smith_normal_form([[2, 4], [1, 2]])
        assert snf.rank == 1
        assert snf.divisors == (1,)

    def test_divisibility_chain(self):
        snf = smith_normal_form([[4, 0, 0], [0, 6, 0], [0, 0, 9]])
        assert snf.divisors == (1, 6, 36)

    def test_chain_repair_keeps_the_product(self):
        assert _divisibility_chain([9, 4, 6]) == (1, 6, 36)
        assert _divisibility_chain([-2, 3]) == (1, 6)
        assert _divisibility_chain([5, 10]) == (5, 10)

    @pytest.mark.slow
    def test_unimodular_operations_keep_the_form(self):
        rng = random.Random(20260417)
        for _ in range(1000):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            M = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
            N = _scramble(rng, M)
            assert smith_normal_form(N) == smith_normal_form(M), M


class TestHomology:
    """Test H_1 and H_2 of presentation complexes."""

    def test_cyclic(self):
        assert homology_of(cyclic(3)) == HomologySummary(b1=0, b2=0, torsion=(3,), t1=3)

    def test_torus(self):
        h = homology_of(commutator())
        assert (h.b1, h.b2, h.torsion, h.t1) == (2, 1, (), 1)

    def test_circle_and_sphere(self):
        assert homology_of(circle()).b1 == 1
        assert homology_of(sphere()).b2 == 1

    def test_torsion_merges(self):
        h = homology_of(parse("<x, y | x^2, y^3>"))
        assert h.torsion == (6,)
        assert h.t1 == 6

    def test_to_dict(self):
        assert homology_of(cyclic(4)).to_dict() == {'b1': 0, 'b2': 0, 'torsion': [4], 't1': 4}


class TestClosedForms:
    """Test the homological and cyclic routes."""

    @pytest.mark.parametrize("p", [5, 7])
    def test_cyclic_route_matches_homology(self, p):
        cat = sl2_class0(p)
        for q in range(1, 2 * p + 1):
            assert q_invariant_cyclic(cat, q) == q_invariant_homological(cat, cyclic(q))

    def test_cyclic_values_p5(self):
        cat = sl2_class0(5)
        assert q_invariant_homological(cat, cyclic(1)) == 1
        assert q_invariant_homological(cat, cyclic(2)) == 4
        assert q_invariant_homological(cat, cyclic(3)) == 4
        assert q_invariant_homological(cat, cyclic(5)) == 0

    def test_second_homology_kills(self):
        assert q_invariant_homological(sl2_class0(7), sphere()) == 0

    @pytest.mark.parametrize("P", [commutator(), circle()])
    def test_refuses_low_euler_characteristic(self, P):
        with pytest.raises(ChiTooSmall):
            q_invariant_homological(sl2_class0(5), P)

    def test_cyclic_order_must_be_positive(self):
        with pytest.raises(ValueError):
            q_invariant_cyclic(sl2_class0(5), 0)

    def test_wedge_normal_form(self):
        form = wedge_normal_form(parse("<x, y, z | x^2, y^12>"))
        assert (form.circles, form.spheres, form.cyclic) == (1, 0, (2, 3, 4))

    @pytest.mark.parametrize("text", ["<x, y | x^2, y^3>", "<x, y | x^6 y^4, y^2 x>", "<x | x^10>"])
    def test_generic_route_matches_homology(self, text):
        for p in (5, 7):
            cat = sl2_class0(p)
            P = parse(text)
            assert q_invariant_generic(cat, P) == q_invariant_homological(cat, P)

    def test_duality_factor(self):
        cat = sl2_class0(5)
        assert duality_factor(cat, cyclic(3)) == 1
        assert duality_factor(cat, sphere()) == 0
        with pytest.raises(ValueError):
            duality_factor(cat, circle())

    def test_duality_between_sphere_and_circle(self):
        # Z_Q(sphere) = 0 * Z_Q(circle)
        cat = sl2_class0(7)
        assert dual(circle()) == sphere()
        assert q_invariant_homological(cat, sphere()) == 0
