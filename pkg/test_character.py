import pytest

from betti_engine.character import Character, character_variables, ext1_character, hom_marked_character, \
    morse_index, morse_index_closed_rank1, tangent_character
from betti_engine.diagram import EMPTY, Box
from betti_engine.errors import InternalInconsistency, UsageError
from betti_engine.laurent import LaurentPoly
from betti_engine.marked import FixedPoint, MarkedDiagram, enumerate_fixed_points, enumerate_marked, staircase

PLANE = ('t1', 't2')


def plane(**exponents):
    return LaurentPoly.monomial(PLANE, exponents)


def all_marked(max_size, max_marks):
    found = []
    for size in range(max_size + 1):
        for m in range(max_marks + 1):
            if size >= staircase(m):
                found.extend(enumerate_marked(size, m))
    return found


def test_hom_of_marks():
    character = hom_marked_character([Box(1, 4)], [Box(0, 0)])
    assert character.poly == plane(t1=1, t2=4)


def test_single_box_tangent_space():
    box = MarkedDiagram.parse("1", "")
    assert ext1_character(box, box).poly == plane(t1=1) + plane(t2=1)


def test_marked_single_box_has_no_deformations():
    single = MarkedDiagram.parse("1", "1")
    assert ext1_character(single, single).poly.is_zero()
    assert ext1_character(MarkedDiagram(EMPTY), MarkedDiagram(EMPTY)).poly.is_zero()


def test_unknown_method():
    box = MarkedDiagram.parse("1", "")
    with pytest.raises(UsageError):
        ext1_character(box, box, method='guess')


def test_character_rejects_negative_coefficients():
    with pytest.raises(InternalInconsistency):
        Character(plane(t1=1) - plane(t2=1))
    with pytest.raises(InternalInconsistency):
        Character(LaurentPoly.zero(('t1', 't2', 'e_1')), r=2)


def assert_ext_methods_agree(diagrams):
    for a in diagrams:
        for b in diagrams:
            relevant = ext1_character(a, b, 'relevant')
            assert relevant == ext1_character(a, b, 'subtraction')
            assert relevant.poly.is_nonnegative()


def test_relevant_and_subtraction_methods_agree():
    assert_ext_methods_agree(all_marked(6, 3))


@pytest.mark.slow
def test_relevant_and_subtraction_methods_agree_up_to_ten_boxes():
    assert_ext_methods_agree(all_marked(10, 3))


def test_rank_one_tangent_weights_avoid_the_nonpositive_t1_axis():
    for marked in all_marked(10, 4):
        character = tangent_character(FixedPoint((marked,)))
        for (t1, t2, _), _ in character.poly.terms():
            assert not (t2 == 0 and t1 <= 0)


def test_rank_one_morse_index_closed_form():
    for box_budget in range(13):
        for m in range(4):
            for point in enumerate_fixed_points(1, m, box_budget):
                marked = point.parts[0]
                n = marked.size() - staircase(m)
                expected = n + m - marked.diagram.num_columns()
                assert morse_index(tangent_character(point)) == expected
                assert morse_index_closed_rank1(marked) == expected


def test_rank_one_dimension():
    for box_budget in range(9):
        for m in range(4):
            for point in enumerate_fixed_points(1, m, box_budget):
                assert tangent_character(point).dimension() == 2 * (box_budget - staircase(m))


def test_dimension_is_constant_on_rank_two_fixed_points():
    for marks in range(3):
        for box_budget in range(6):
            dims = {tangent_character(p).dimension() for p in enumerate_fixed_points(2, marks, box_budget)}
            assert len(dims) <= 1


def test_rank_two_single_mark():
    single = MarkedDiagram.parse("1", "1")
    blank = MarkedDiagram(EMPTY)
    first = tangent_character(FixedPoint((single, blank)))
    second = tangent_character(FixedPoint((blank, single)))
    assert first.poly.variables == character_variables(2)
    assert first.dimension() == second.dimension() == 1
    assert morse_index(first) == 0
    assert morse_index(second) == 1


def test_morse_index_weight_order():
    variables = character_variables(2)

    def weight(t1=0, t2=0, up=None, down=None):
        exps = {'t1': t1, 't2': t2}
        if up:
            exps[f"e_{up}"] = 1
            exps[f"e_{down}"] = -1
        return LaurentPoly.monomial(variables, exps)

    # t2 decides first, then the framing order, then t1
    assert morse_index(Character(weight(t2=-1, t1=5), 2)) == 1
    assert morse_index(Character(weight(t2=1, t1=-5), 2)) == 0
    assert morse_index(Character(weight(up=2, down=1, t1=3), 2)) == 1
    assert morse_index(Character(weight(up=1, down=2, t1=-3), 2)) == 0
    assert morse_index(Character(weight(t1=-1), 2)) == 1
    assert morse_index(Character(weight(t1=1), 2)) == 0
