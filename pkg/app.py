import logging
from fractions import Fraction

from flask import Flask, jsonify, request

from betti_engine.betti import METHODS, SUITES, ModuliParams, PoincareEngine
from betti_engine.character import ext1_character, morse_index, tangent_character
from betti_engine.cli import parse_fraction, parse_int, parse_range
from betti_engine.config import EngineConfig
from betti_engine.diagram import Partition, enumerate_partitions, partition_counts
from betti_engine.errors import USER_ERRORS, UsageError
from betti_engine.marked import DiagramPair, FixedPoint, MarkedDiagram, merge, split
from betti_engine.reporting import (betti_document, character_document, partition_counts_document,
                                    partitions_document, series_document)

logger = logging.getLogger(__name__)

app = Flask(__name__)
app.config.update(EngineConfig.from_env().as_flask_config())
app.json.sort_keys = False


def engine():
    """A PoincareEngine bound to the bounds currently in app.config."""
    config = EngineConfig(max_box_budget=app.config['MAX_BOX_BUDGET'], max_order=Fraction(app.config['MAX_ORDER']),
                          max_rank=app.config['MAX_RANK'], jobs=app.config['JOBS'])
    return PoincareEngine(config)


def arg(name, default=None, required=False):
    value = request.args.get(name, default)
    if required and value is None:
        raise UsageError(f"missing query parameter {name!r}")
    return value


def int_arg(name, default):
    return parse_int(arg(name, str(default)), name)


def choice_arg(name, choices, default):
    value = arg(name, default)
    if value not in choices:
        raise UsageError(f"{name} must be one of {', '.join(choices)}, got {value!r}")
    return value


def params_from_query():
    rank, c1c, m = int_arg('rank', 1), int_arg('c1c', 0), int_arg('m', 0)
    if arg('N') is not None:
        if rank != 1:
            raise UsageError("N is the rank one grading; use delta for higher rank")
        return ModuliParams.rank1(m, parse_int(arg('N'), 'N'), c1c)
    return ModuliParams(rank, c1c, m, parse_fraction(arg('delta', '0'), 'delta'))


def order_from_query():
    return parse_fraction(arg('order', required=True), 'order')


def user_error(e):
    logger.warning("refused %s: %s", request.full_path, e)
    return jsonify({'error': str(e), 'type': type(e).__name__}), 400


for error_class in USER_ERRORS:
    app.register_error_handler(error_class, user_error)


@app.route('/')
def index():
    return jsonify({'endpoints': ['/partitions', '/bijection', '/betti', '/series', '/verify', '/character']})


@app.route('/partitions')
def partitions():
    n = int_arg('n', 0)
    if n < 0 or n > app.config['MAX_BOX_BUDGET']:
        raise UsageError(f"n must lie in [0, {app.config['MAX_BOX_BUDGET']}], got {n}")
    if arg('count') is not None:
        return jsonify(partition_counts_document(partition_counts(n)))
    max_columns = arg('max_columns')
    max_columns = parse_int(max_columns, 'max_columns') if max_columns is not None else None
    return jsonify(partitions_document(n, max_columns, enumerate_partitions(n, max_columns)))


@app.route('/bijection')
def bijection():
    if arg('diagram') is not None:
        return jsonify(split(MarkedDiagram.parse(arg('diagram'), arg('marks', ''))).to_dict())
    try:
        pair = DiagramPair(Partition.parse(arg('y1', required=True)), Partition.parse(arg('y2', '')),
                           int_arg('m', 0))
    except ValueError as e:
        raise UsageError(str(e))
    return jsonify(merge(pair).to_dict())


@app.route('/character')
def character():
    first = MarkedDiagram.parse(arg('diagram', required=True), arg('marks', ''))
    method = choice_arg('method', ('relevant', 'subtraction'), 'relevant')
    if arg('diagram2') is None:
        morse = morse_index(tangent_character(FixedPoint((first,)), method))
        return jsonify(character_document(first, first, ext1_character(first, first, method), morse))
    second = MarkedDiagram.parse(arg('diagram2'), arg('marks2', ''))
    return jsonify(character_document(first, second, ext1_character(first, second, method)))


@app.route('/betti')
def betti():
    bounds = engine()
    params = bounds.check_params(params_from_query())
    method = choice_arg('method', METHODS, 'closed')
    return jsonify(betti_document(params, method, bounds.poincare_polynomial(params, method)))


@app.route('/series')
def series():
    params = params_from_query()
    order = order_from_query()
    bounds = engine()
    bounds.check_series_request(params.r, [params.c1c], [params.m], order)
    side = choice_arg('side', ('enumeration', 'product'), 'enumeration')
    if side == 'product':
        result = bounds.gen_fun_product(params.r, params.c1c, params.m, order)
    else:
        result = bounds.gen_fun_enumeration(params.r, params.c1c, params.m, order)
    doc_params = {'rank': params.r, 'c1c': params.c1c, 'm': params.m, 'order': str(order)}
    return jsonify(series_document(side, doc_params, result))


@app.route('/verify')
def verify():
    suite = choice_arg('suite', SUITES, None)
    order = order_from_query()
    ms = parse_range(arg('m'), 'm') if arg('m') is not None else None
    if ms and min(ms) < 0:
        raise UsageError("m must be nonnegative")
    c1cs, rank = parse_range(arg('c1c', '0'), 'c1c'), int_arg('rank', 1)
    bounds = engine()
    bounds.check_series_request(rank, c1cs, ms, order)
    report = bounds.verify_identity(suite, order, ms, c1cs, rank)
    return jsonify(report.to_dict())


if __name__ == '__main__':
    app.run(debug=True, port=5000)
