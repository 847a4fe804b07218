from fractions import Fraction

import pytest
import sympy as sp
from sympy import npartitions

from betti_engine import betti
from betti_engine.betti import METHODS, ModuliParams, PoincareEngine, fixed_point_exponent, fixed_points, \
    blowup_series, gen_fun_enumeration, gen_fun_product, gradings_below, morse_exponent, poincare_polynomial, \
    verify_identity
from betti_engine.character import morse_index, tangent_character
from betti_engine.config import EngineConfig
from betti_engine.errors import UsageError
from betti_engine.laurent import LaurentPoly, QSeries
from betti_engine.marked import staircase

q, t = sp.symbols('q t')


def poly_t(*exponents):
    total = LaurentPoly.zero(('t',))
    for e in exponents:
        total = total + LaurentPoly.monomial(('t',), {'t': e})
    return total


def to_sympy(poly):
    return sp.Add(*[c * t ** e for (e,), c in poly.terms()])


def sympy_rank_one_product(m, order):
    expr = sp.Integer(1)
    for d in range(1, order):
        expr *= 1 / (1 - t ** (2 * d - 2) * q ** d)
    for d in range(1, min(m, order - 1) + 1):
        expr *= 1 / (1 - t ** (2 * d) * q ** d)
    return sp.expand(sp.series(expr, q, 0, order).removeO())


def test_box_budget():
    assert ModuliParams.rank1(1, 1).box_budget == 2
    assert ModuliParams.rank1(3, 0).box_budget == staircase(3)
    assert ModuliParams(2, 1, 0, Fraction(1, 4)).box_budget == 1
    assert ModuliParams(2, 0, 1, Fraction(0)).total_marks == 2
    assert not ModuliParams(2, 0, 0, Fraction(1, 2)).is_enumerable()


@pytest.mark.parametrize("args", [(0, 0, 0), (1, 0, -1), (1, 0, 0, Fraction(1, 3))])
def test_params_validation(args):
    with pytest.raises(UsageError):
        ModuliParams(*args)


def test_mark_vectors():
    assert ModuliParams(2, 1, 1).mark_vectors() == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert ModuliParams(2, -1, 0).mark_vectors() == []


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("params, expected", [
    (ModuliParams.rank1(1, 1), poly_t(0, 2)),
    (ModuliParams.rank1(0, 2), poly_t(0, 2)),
    (ModuliParams.rank1(0, 0), poly_t(0)),
    (ModuliParams(2, 0, 0, Fraction(1)), poly_t(0, 2)),
    (ModuliParams(2, 1, 0, Fraction(1, 4)), poly_t(0, 2)),
    (ModuliParams(2, 0, 0, Fraction(1, 2)), LaurentPoly.zero(('t',))),
])
def test_poincare_examples(method, params, expected):
    assert poincare_polynomial(params, method) == expected


def test_unknown_method():
    with pytest.raises(UsageError):
        poincare_polynomial(ModuliParams.rank1(0, 1), 'guess')


def test_methods_agree_in_rank_two():
    engine = PoincareEngine()
    for c1c in (-1, 0, 1, 2):
        for m in (0, 1):
            for delta in gradings_below(2, c1c, m, 3):
                params = ModuliParams(2, c1c, m, delta)
                engine.poincare_all_methods(params)


def test_rank_one_exponent_is_closed_form():
    for m in range(4):
        for n in range(6):
            params = ModuliParams.rank1(m, n)
            for point in fixed_points(params):
                marked = point.parts[0]
                assert fixed_point_exponent(point, params) == n + m - marked.diagram.num_columns()


def test_exponent_rejects_foreign_fixed_point():
    point = fixed_points(ModuliParams.rank1(0, 2))[0]
    with pytest.raises(UsageError):
        fixed_point_exponent(point, ModuliParams.rank1(0, 3))


def test_morse_exponent_matches_tangent_weights():
    for c1c in (0, 1, 2):
        for m in (0, 1):
            for delta in gradings_below(2, c1c, m, 2):
                for point in fixed_points(ModuliParams(2, c1c, m, delta)):
                    assert morse_index(tangent_character(point)) == morse_exponent(point)


def test_rank_one_methods_agree():
    engine = PoincareEngine()
    for m in range(4):
        for n in range(7):
            poly = engine.poincare_all_methods(ModuliParams.rank1(m, n))
            assert poly.is_nonnegative()
            assert poly.coefficient((0,)) >= 1


@pytest.mark.parametrize("m, order, expected", [
    (0, 3, [poly_t(0), poly_t(0), poly_t(0, 2)]),
    (1, 2, [poly_t(0), poly_t(0, 2)]),
])
def test_generating_function_examples(m, order, expected):
    for series in (gen_fun_enumeration(1, 0, m, order), gen_fun_product(1, 0, m, order)):
        assert [series.coefficient(n) for n in range(order)] == expected


def test_rank_two_product_first_coefficient():
    assert gen_fun_product(2, 0, 0, 2).coefficient(1) == poly_t(0, 2)


def test_rank_one_identity():
    report = verify_identity('rank1', 10, ms=range(4))
    assert report.passed, report.first_mismatch


def test_rank_one_series_match_sympy():
    for m in (0, 2):
        ours = gen_fun_enumeration(1, 0, m, 6)
        expansion = sympy_rank_one_product(m, 6)
        for n in range(6):
            assert sp.expand(expansion.coeff(q, n) - to_sympy(ours.coefficient(n))) == 0


def test_gottsche_limit():
    report = verify_identity('gottsche', 8, ms=[8])
    assert report.passed, report.first_mismatch


def test_blowup_series_euler_numbers():
    counts = blowup_series(1, 0, 10).evaluate({'t': 1})
    assert counts == {n: sum(npartitions(k) * npartitions(n - k) for k in range(n + 1)) for n in range(10)}


def test_gottsche_limit_in_rank_two():
    report = verify_identity('gottsche', 2, c1cs=[-1, 0, 1], r=2)
    assert report.passed, report.first_mismatch
    assert [case['m'] for case in report.params] == [3, 2, 3]


def test_blowup_series_rank_two_is_symmetric_in_c1c():
    assert blowup_series(2, 1, 3) == blowup_series(2, -1, 3)
    assert blowup_series(2, 0, 3).coefficient(0) == poly_t(0)


def test_ext_methods_agree_on_small_diagrams():
    report = verify_identity('ext', 6, ms=range(3))
    assert report.passed, report.first_mismatch


def test_higher_rank_identity():
    report = verify_identity('higherrank', 6, ms=[0, 1], c1cs=[-1, 0, 1], r=2)
    assert report.passed, report.first_mismatch


def test_higher_rank_exponents_are_quarter_integers():
    series = gen_fun_enumeration(2, 1, 0, 4)
    exponents = series.exponents()
    assert Fraction(1, 4) in exponents
    assert all((e * 4).denominator == 1 for e in exponents)
    assert series == gen_fun_product(2, 1, 0, 4)


@pytest.mark.parametrize("suite, kwargs", [
    ('euler', dict(ms=[0, 1], c1cs=[0, 1], r=2)),
    ('euler', dict(ms=[0, 2])),
    ('wallRatio', dict(ms=range(4))),
    ('hodge', dict(ms=range(3))),
])
def test_supplementary_suites(suite, kwargs):
    report = verify_identity(suite, 6, **kwargs)
    assert report.passed, report.first_mismatch


def test_report_document():
    doc = verify_identity('rank1', 3, ms=[1]).to_dict()
    assert list(doc) == ['suite', 'params', 'order', 'status', 'firstMismatch', 'elapsedMs']
    assert doc['status'] == 'PASS'
    assert doc['order'] == "3"
    assert doc['params'] == [{'rank': 1, 'c1c': 0, 'm': 1}]
    assert doc['firstMismatch'] is None


def test_mismatch_is_reported(monkeypatch):
    monkeypatch.setattr(betti, 'gen_fun_product',
                        lambda r, c1c, m, order: QSeries.zero(betti.series_context(r, order)))
    report = verify_identity('rank1', 4, ms=[0])
    assert report.status == 'FAIL'
    assert report.first_mismatch['q'] == "0"
    assert report.first_mismatch['enumeration'] == "1"
    assert report.first_mismatch['product'] == "0"


@pytest.mark.parametrize("suite, kwargs", [
    ('nonsense', {}),
    ('hodge', dict(r=2)),
    ('ext', dict(r=2)),
    ('rank1', dict(r=2)),
])
def test_verify_usage_errors(suite, kwargs):
    with pytest.raises(UsageError):
        verify_identity(suite, 4, **kwargs)
    with pytest.raises(UsageError):
        verify_identity('rank1', 0)


def test_parallel_enumeration_is_deterministic():
    serial = gen_fun_enumeration(1, 0, 1, 6)
    engine = PoincareEngine(EngineConfig(jobs=2))
    assert engine.gen_fun_enumeration(1, 0, 1, 6) == serial
    assert str(engine.gen_fun_enumeration(1, 0, 1, 6)) == str(serial)


@pytest.mark.parametrize("params", [
    ModuliParams.rank1(40, 0),
    ModuliParams.rank1(0, 17),
    ModuliParams(5, 0, 0),
])
def test_check_params_refuses_large_spaces(params):
    with pytest.raises(UsageError):
        PoincareEngine().check_params(params)


def test_check_params_counts_the_staircase():
    engine = PoincareEngine(EngineConfig(max_box_budget=6))
    assert engine.check_params(ModuliParams.rank1(3, 0)).box_budget == 6
    with pytest.raises(UsageError):
        engine.check_params(ModuliParams.rank1(3, 1))


@pytest.mark.parametrize("r, c1cs, ms, order", [
    (1, [0], [40], Fraction(1)),
    (1, [0], None, Fraction(13)),
    (1, [0], None, Fraction(0)),
    (5, [0], None, Fraction(2)),
    (2, [0, 17], None, Fraction(2)),
])
def test_check_series_request_errors(r, c1cs, ms, order):
    with pytest.raises(UsageError):
        PoincareEngine().check_series_request(r, c1cs, ms, order)


def test_check_series_request_allows_the_gottsche_limit():
    PoincareEngine().check_series_request(1, [0], [8], Fraction(8))
    PoincareEngine().check_series_request(2, [-1, 1], [3], Fraction(2))
