"""
Unit tests for the skein evaluator.

Most checks run at p = 5, where two labels keep every cable narrow; the
heavier p = 7 thickenings are marked slow.
"""

import random
import sys
from itertools import product
from pathlib import Path

import pytest  # type: ignore[import-untyped]

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from caching import JWStore
from core.category import F, root_of_global_dim, sl2_class0
from core.cyclo import exact_div, phi_p
from core.fuzz import random_presentation
from core.homology import q_invariant_homological
from core.linkdiag import (
    add_framing_twist,
    closure,
    empty_link,
    flip_crossing,
    hopf,
    mirror,
    slide_fixture_catalog,
    standard_link,
    torus_link,
    unknot,
    with_cancelling_pair,
    with_unknot,
)
from core.presentation import circle, commutator, cyclic, dual, parse, sphere
from core.skein import (
    RTW_LABEL,
    SkeinEvaluator,
    Z,
    cabled_crossings,
    eval_colored,
    z_q,
    z_rtw,
    zhat,
)
from utils.error_handler import CableTooWide, ColorOutOfRange


@pytest.fixture
def cat5():
    return sl2_class0(5)


@pytest.fixture
def evaluator(cat5):
    return SkeinEvaluator(cat5)


class TestCabling:
    """Test the elementary crossings of a cabled braid."""

    def test_single_strands(self):
        assert cabled_crossings(((2, 1),), (1, 1)) == ((0, 1),)

    def test_wide_left_cable(self):
        assert cabled_crossings(((2, -1),), (2, 1)) == ((1, -1), (0, -1))

    def test_wide_right_cable(self):
        assert cabled_crossings(((2, 1),), (1, 2)) == ((0, 1), (1, 1))

    def test_widths_follow_the_strands(self):
        # after y_2 the cables have swapped places
        out = cabled_crossings(((2, 1), (3, 1)), (2, 0, 1))
        assert out == ((1, 1), (0, 1))

    def test_empty_cable(self):
        assert cabled_crossings(((2, 1),), (0, 2)) == ()


class TestColoredEvaluation:
    """Test colored brackets of small links."""

    @pytest.mark.parametrize("engine", ["standard", "tl"])
    def test_unknot_is_rank(self, cat5, engine):
        ev = SkeinEvaluator(cat5, engine=engine)
        for z in cat5.labels:
            assert ev.eval_colored(unknot(), (z,)) == cat5.rank(z)

    @pytest.mark.parametrize("engine", ["standard", "tl"])
    def test_kink_gives_twist(self, cat5, engine):
        ev = SkeinEvaluator(cat5, engine=engine)
        for z in cat5.labels:
            for s in (1, -1):
                value = ev.eval_colored(closure(2, [2 * s]), (z,))
                assert value == cat5.rank(z).shift(s * cat5.twist_exp(z))

    def test_framing_offset_twists(self, evaluator, cat5):
        assert evaluator.eval_colored(unknot(2), (1,)) == cat5.rank(1).shift(2 * cat5.twist_exp(1))

    def test_empty_link(self, evaluator):
        assert evaluator.eval_colored(empty_link(), ()) == 1

    @pytest.mark.parametrize("word,strands", [
        ([2, 2], 2),
        ([2, 2, 2], 2),
        ([2, -3, 2, -3, 2, -3], 3),
        ([2, 3, -2, 3], 3),
    ])
    def test_engines_agree(self, cat5, word, strands):
        L = closure(strands, word)
        standard = SkeinEvaluator(cat5, engine='standard')
        reference = SkeinEvaluator(cat5, engine='tl')
        for coloring in product(cat5.labels, repeat=L.component_count):
            assert standard.eval_colored(L, coloring) == reference.eval_colored(L, coloring)

    def test_mirror_conjugates(self, cat5):
        K = closure(2, [2, 2, 2])
        plain = SkeinEvaluator(cat5).eval_colored(K, (1,))
        mirrored = SkeinEvaluator(cat5, mirror=True).eval_colored(K, (1,))
        assert mirrored == plain.conj()
        assert mirrored == SkeinEvaluator(cat5).eval_colored(mirror(K), (1,))

    def test_color_out_of_range(self, evaluator):
        with pytest.raises(ColorOutOfRange):
            evaluator.eval_colored(unknot(), (2,))

    def test_wrong_coloring_length(self, evaluator):
        with pytest.raises(ValueError):
            evaluator.eval_colored(hopf(), (0,))

    def test_guard_on_coloring(self, cat5):
        ev = SkeinEvaluator(cat5, guard=3)
        assert ev.eval_colored(hopf(), (1, 0)) is not None
        with pytest.raises(CableTooWide):
            ev.eval_colored(hopf(), (1, 1))

    def test_module_level_function(self, cat5):
        assert eval_colored(cat5, unknot(), (1,)) == cat5.rank(1)


class TestInvariants:
    """Test Z, Zhat and Z_Q."""

    def test_unknot(self, evaluator, cat5):
        assert evaluator.Z(unknot()) == cat5.x2
        assert Z(cat5, unknot(), engine='tl') == cat5.x2

    def test_hopf(self, evaluator, cat5):
        assert evaluator.Z(hopf()) == F(cat5, 1) * F(cat5, -1)

    def test_hopf_killing(self, evaluator, cat5):
        for b in cat5.labels:
            total = sum((cat5.rank(a) * evaluator.eval_colored(hopf(), (a, b)) for a in cat5.labels[1:]),
                        evaluator.eval_colored(hopf(), (0, b)))
            assert total == (cat5.x2 if b == 0 else 0)

    def test_cancelling_pair(self, evaluator):
        assert evaluator.zhat(with_cancelling_pair(empty_link())) == 1

    def test_slide_pairs(self, evaluator):
        for pair in slide_fixture_catalog():
            assert evaluator.Z(pair.left) == evaluator.Z(pair.right), pair.name

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_cyclic_matches_homology(self, cat5, n):
        assert z_q(cyclic(n), cat5) == q_invariant_homological(cat5, cyclic(n))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_cyclic_p7(self, n):
        cat7 = sl2_class0(7)
        expected = pow(n, -2, 7) if n % 7 else 0
        assert z_q(cyclic(n), cat7) == expected
        assert q_invariant_homological(cat7, cyclic(n)) == expected

    @pytest.mark.parametrize("p", [5, 7])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_linked_against_split_pair(self, p, n):
        # exact for n = 1; for larger n only after dividing by X^2 mod p
        cat = sl2_class0(p)
        linked = Z(cat, torus_link(n))
        split = Z(cat, closure(2, [], offsets=(n, -n)))
        if n == 1:
            assert linked == split == cat.x2
        else:
            assert phi_p(exact_div(linked, cat.x2)) == phi_p(exact_div(split, cat.x2))
        assert phi_p(exact_div(split, cat.x2)) == pow(n, -2, p)

    def test_circle_and_sphere(self, evaluator):
        assert evaluator.zhat(standard_link(circle())) == 1
        assert evaluator.z_q(circle()) == 1
        assert evaluator.z_q(sphere()) == 0

    def test_commutator(self, evaluator):
        # chi = 0, out of reach of the homological formula
        result = evaluator.invariant(standard_link(commutator()))
        assert result.z_q == 2
        assert result.zhat == result.zhat.conj()
        assert result.ohtsuki[0] == result.z_q
        assert result.colorings == 8

    def test_invariant_to_dict(self, evaluator):
        data = evaluator.invariant(standard_link(cyclic(2))).to_dict()
        assert set(data) == {'Z', 'Zhat', 'phi_p_Zhat', 'ohtsuki', 'colorings'}
        assert data['phi_p_Zhat'] == 4

    def test_wedge_is_multiplicative(self, cat5):
        assert z_q(parse("<x, y | x^2, y^3>"), cat5) == (z_q(cyclic(2), cat5) * z_q(cyclic(3), cat5)) % 5

    def test_zhat_module_function(self, cat5):
        assert zhat(cat5, standard_link(cyclic(3)), engine='tl') == zhat(cat5, standard_link(cyclic(3)))

    def test_workers_do_not_change_value(self, cat5):
        L = standard_link(commutator())
        assert SkeinEvaluator(cat5, workers=3).Z(L) == SkeinEvaluator(cat5).Z(L)

    def test_guard_refuses_up_front(self, cat5):
        ev = SkeinEvaluator(cat5, guard=4)
        assert ev.max_width(standard_link(commutator())) == 6
        with pytest.raises(CableTooWide):
            ev.Z(standard_link(commutator()))

    def test_invalid_options(self, cat5):
        with pytest.raises(ValueError):
            SkeinEvaluator(cat5, engine='fast')
        with pytest.raises(ValueError):
            SkeinEvaluator(cat5, guard=1)


class TestRTW:
    """Test the normalized surgery invariant."""

    @pytest.mark.parametrize("f", [1, -1])
    def test_first_kirby_move(self, evaluator, f):
        value = evaluator.z_rtw(unknot(f))
        assert value.value == 1
        assert value.x_power == 0

    def test_zero_framed_unknot_leaves_x(self, evaluator):
        value = evaluator.z_rtw(unknot(0))
        assert value.value == 1
        assert value.x_power == 1
        assert value.format() == "X"
        assert value.label == RTW_LABEL

    def test_hopf_is_the_sphere(self, evaluator):
        value = evaluator.z_rtw(hopf())
        assert value.value == 1 and value.x_power == 0

    def test_dots_are_forgotten(self, evaluator):
        assert evaluator.z_rtw(with_cancelling_pair(empty_link())).value == 1

    def test_fold_root_needs_p_3_mod_4(self, cat5):
        assert z_rtw(cat5, unknot(0), fold_root=True).x_power == 1

    def test_fold_root(self):
        cat7 = sl2_class0(7)
        value = z_rtw(cat7, unknot(0), fold_root=True)
        assert value.x_power == 0
        assert value.value == root_of_global_dim(cat7)

    def test_format_with_leftover_x(self, evaluator, cat5):
        value = evaluator.z_rtw(closure(1, [], offsets=[0]))
        assert value.format() == "X"
        assert value.to_json()['x_power'] == 1


class TestJWStore:
    """Test the reference engine with a persistent idempotent cache."""

    def test_store_is_filled_and_reused(self, cat5, tmp_path):
        L = hopf()
        with JWStore(str(tmp_path / "jw")) as store:
            first = SkeinEvaluator(cat5, engine='tl', store=store).Z(L)
            assert store.get(5, 2) is not None
            second = SkeinEvaluator(cat5, engine='tl', store=store).Z(L)
            assert first == second
            assert store.hits >= 2


@pytest.mark.slow
class TestLargerPrime:
    """p = 7 thickenings (minutes rather than seconds)."""

    def test_commutator_p7(self):
        cat7 = sl2_class0(7)
        assert z_q(commutator(), cat7) == 3

    def test_engines_agree_p7(self):
        cat7 = sl2_class0(7)
        L = standard_link(cyclic(3))
        assert Z(cat7, L, engine='tl') == Z(cat7, L)


class TestMoveInsensitivity:
    """Values that survive diagram changes away from the dotted circles."""

    def test_free_group_on_two_generators(self, cat5):
        # a wedge of two circles, each contributing 1
        assert z_q(parse("<x, y |>"), cat5) == 1

    def test_empty_relator_kills(self, cat5):
        # the trivial relator leaves a split 0-framed unknot
        assert z_q(parse("<x, y | 1>"), cat5) == 0

    @pytest.mark.parametrize("text", ["<x | x^2>", "<x | x^3>"])
    def test_balanced_dual_has_same_zhat(self, evaluator, text):
        P = parse(text)
        assert evaluator.zhat(standard_link(P)) == evaluator.zhat(standard_link(dual(P)))

    @pytest.mark.parametrize("sign", [1, -1])
    def test_twisting_a_two_handle(self, evaluator, sign):
        L = add_framing_twist(standard_link(cyclic(3)), 0, sign)
        assert phi_p(evaluator.zhat(L)) == evaluator.z_q(cyclic(3))

    @pytest.mark.parametrize("f", [1, -1])
    def test_rtw_ignores_split_unit_unknots(self, evaluator, f):
        value = evaluator.z_rtw(with_unknot(hopf(), f))
        assert value.value == 1
        assert value.x_power == 0


def _small_thickenings(seed: int):
    """Endless seeded stream of thickening links on at most four strands."""
    rng = random.Random(seed)
    while True:
        P = random_presentation(rng, max_generators=2, max_relators=3, max_length=4, chi_bias=1.0)
        L = standard_link(P)
        if L.braid.strands <= 4:
            yield rng, L


class TestRandomUndottedChanges:
    """phi_p(Zhat) on random thickenings, changed only at undotted strands."""

    def test_crossing_flips(self, evaluator):
        flips = 0
        for rng, L in _small_thickenings(811):
            undotted = [i for i in range(len(L.braid)) if not flip_crossing(L, i)[1]]
            if not undotted:
                continue
            before = phi_p(evaluator.zhat(L))
            for i in rng.sample(undotted, min(3, len(undotted))):
                assert phi_p(evaluator.zhat(flip_crossing(L, i)[0])) == before, (L, i)
                flips += 1
            if flips >= 100:
                break

    def test_framing_twists(self, evaluator):
        twists = 0
        for rng, L in _small_thickenings(812):
            undotted = [c for c in range(L.component_count) if not L.dotted[c]]
            before = phi_p(evaluator.zhat(L))
            for c in rng.sample(undotted, min(3, len(undotted))):
                twisted = add_framing_twist(L, c, rng.choice((1, -1)))
                assert phi_p(evaluator.zhat(twisted)) == before, (L, c)
                twists += 1
            if twists >= 100:
                break
