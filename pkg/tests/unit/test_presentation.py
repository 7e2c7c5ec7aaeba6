"""
Unit tests for presentations: parsing, serialisation, Andrews-Curtis moves,
duals and wedges.
"""

import sys
from pathlib import Path

import pytest  # type: ignore[import-untyped]

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from core.presentation import (
    ConjugateRelator,
    Destabilize,
    InvertRelator,
    MultiplyRelator,
    Presentation,
    Stabilize,
    Word,
    ac_move,
    apply_moves,
    circle,
    commutator,
    cyclic,
    cyclic_reduce,
    dual,
    euler_char,
    exponent_matrix,
    free_reduce,
    move_name,
    parse,
    serialize,
    sphere,
    wedge,
)
from utils.error_handler import InvalidMove, ParseError, UnknownGenerator


class TestWords:
    """Test free-group words."""

    def test_from_powers(self):
        w = Word.from_powers([(0, 2), (1, -1)])
        assert w.letters == ((0, 1), (0, 1), (1, -1))
        assert w.syllables() == [(0, 2), (1, -1)]

    def test_free_reduce(self):
        w = Word(((0, 1), (1, 1), (1, -1), (0, -1), (0, 1)))
        assert free_reduce(w).letters == ((0, 1),)

    def test_cyclic_reduce(self):
        w = Word(((1, 1), (0, 1), (0, 1), (1, -1)))
        assert cyclic_reduce(w).letters == ((0, 1), (0, 1))

    def test_exponent_sum(self):
        assert commutator().relators[0].exponent_sum(0) == 0
        assert cyclic(4).relators[0].exponent_sum(0) == 4

    def test_invalid_letter(self):
        with pytest.raises(ValueError):
            Word(((0, 2),))


class TestParsing:
    """Test the bracket notation."""

    def test_cyclic(self):
        assert parse("<x | x^3>") == cyclic(3)

    def test_canonical_text(self):
        text = "<a, b | a^2 b^-1, 1>"
        assert serialize(parse(text)) == text

    def test_juxtaposed_exponents(self):
        assert parse("<x, y | x2y-1>") == parse("<x, y | x^2 y^-1>")

    def test_braced_exponent(self):
        assert parse("<x | x^{-2}>") == parse("<x | x^-2>")

    def test_empty_presentations(self):
        assert parse("< | 1>") == sphere()
        assert parse("<x |>") == circle()
        assert serialize(sphere()) == "< | 1>"

    def test_unknown_generator_position(self):
        with pytest.raises(UnknownGenerator) as exc:
            parse("<x | y>")
        assert exc.value.position == 5
        assert exc.value.name == 'y'

    @pytest.mark.parametrize("text", [
        "<x | x",
        "x | x>",
        "<x, x | x>",
        "<x | x> y",
        "<x | x 2>",
        "<x | x $>",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse(text)

    def test_parse_file_skips_comments(self, tmp_path):
        path = tmp_path / "lens.pres"
        path.write_text("# lens space\n<x | x^5>\n", encoding='utf-8')
        assert Presentation.parse_file(path) == cyclic(5)

    def test_invalid_generator_name(self):
        with pytest.raises(ValueError):
            Presentation(('1x',), ())


class TestCounts:
    """Test Euler characteristic and the exponent matrix."""

    def test_euler_characteristic(self):
        assert euler_char(circle()) == 0
        assert euler_char(sphere()) == 2
        assert euler_char(cyclic(3)) == 1
        assert euler_char(commutator()) == 0

    def test_exponent_matrix(self):
        P = parse("<x, y | x^2 y^-1, y x y^3>")
        assert exponent_matrix(P) == [[2, -1], [1, 4]]


class TestMoves:
    """Test Andrews-Curtis moves."""

    def test_invert(self):
        assert serialize(ac_move(cyclic(3), InvertRelator(0))) == "<x | x^-3>"

    def test_conjugate_then_reduce(self):
        assert ac_move(cyclic(3), ConjugateRelator(0, 0, 1)) == cyclic(3)

    def test_conjugate_by_other_generator(self):
        P = ac_move(parse("<x, y | x>"), ConjugateRelator(0, 1, -1))
        assert serialize(P) == "<x, y | y^-1 x y>"

    def test_multiply(self):
        P = ac_move(parse("<x | x, x^2>"), MultiplyRelator(0, 1))
        assert serialize(P) == "<x | x^3, x^2>"

    def test_multiply_by_itself(self):
        with pytest.raises(InvalidMove):
            ac_move(parse("<x | x, x^2>"), MultiplyRelator(1, 1))

    def test_bad_relator_index(self):
        with pytest.raises(InvalidMove):
            ac_move(cyclic(2), InvertRelator(3))

    def test_stabilize_and_destabilize(self):
        P = ac_move(circle(), Stabilize())
        assert serialize(P) == "<x, t1 | t1>"
        assert ac_move(P, Destabilize()) == circle()

    def test_destabilize_reindexes(self):
        P = parse("<a, b, c | b, a c^2>")
        assert serialize(ac_move(P, Destabilize(0))) == "<a, c | a c^2>"

    def test_nothing_to_destabilize(self):
        with pytest.raises(InvalidMove):
            ac_move(commutator(), Destabilize())

    def test_moves_preserve_euler_characteristic(self):
        P = parse("<x, y | x y x^-1 y^-1, x^2>")
        moves = [InvertRelator(0), MultiplyRelator(1, 0), ConjugateRelator(1, 1, 1), Stabilize()]
        Q = apply_moves(P, moves)
        assert euler_char(Q) == euler_char(P)

    def test_move_names(self):
        assert move_name(ConjugateRelator(0, 1, -1)) == "conjugate(0, 1, -1)"
        assert move_name(Destabilize()) == "destabilize"
        assert move_name(Destabilize(2)) == "destabilize(2)"


class TestDualAndWedge:
    """Test the dual presentation and the 1-point union."""

    def test_dual_swaps_circle_and_sphere(self):
        assert dual(circle()) == sphere()
        assert serialize(dual(sphere())) == "<r1 |>"

    def test_dual_of_cyclic(self):
        assert serialize(dual(cyclic(3))) == "<r1 | r1^3>"

    def test_dual_transposes_exponents(self):
        P = parse("<x, y | x^2 y^-1, y x y^3>")
        assert exponent_matrix(dual(P)) == [[2, 1], [-1, 4]]

    def test_wedge_renames_clashes(self):
        assert serialize(wedge(cyclic(2), cyclic(3))) == "<x, x2 | x^2, x2^3>"
