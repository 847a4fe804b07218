"""
Command-line front end: ``python -m betti_engine <subcommand> [flags]``.

Documents go to stdout (JSON by default, ``--format text`` for tables),
diagnostics and logs to stderr. Exit codes: 0 success or PASS, 1 FAIL,
2 usage error.
"""
import argparse
import logging
import sys
from fractions import Fraction

from .betti import METHODS, SUITES, ModuliParams, PoincareEngine, fixed_point_exponent, fixed_points
from .character import ext1_character, morse_index, tangent_character
from .config import EngineConfig
from .diagram import Partition, enumerate_partitions, partition_counts
from .errors import USER_ERRORS, UsageError
from .marked import DiagramPair, FixedPoint, MarkedDiagram, merge, split
from .reporting import (betti_document, character_document, fixed_points_document, partition_counts_document,
                        partitions_document, render, series_document)

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('partitions', 'fixed-points', 'betti', 'character', 'bijection', 'series', 'verify')
SIDES = ('enumeration', 'product')


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so run() owns the exit code."""

    def error(self, message):
        raise UsageError(message)


def parse_fraction(text, flag):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag} expects an exact rational like 3/2, got {text!r}")


def parse_int(text, flag):
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{flag} expects an integer, got {text!r}")


def parse_range(text, flag):
    """``a`` or the inclusive range ``a..b``."""
    if '..' in text:
        low, _, high = text.partition('..')
        low, high = parse_int(low, flag), parse_int(high, flag)
        if low > high:
            raise UsageError(f"{flag} range {text!r} is empty")
        return list(range(low, high + 1))
    return [parse_int(text, flag)]


def single(values, flag):
    if len(values) != 1:
        raise UsageError(f"{flag} takes a single value for this subcommand")
    return values[0]


def parse_max_size(text):
    """``B`` bounds the boxes of a fixed point, ``B,Q`` additionally the series order."""
    box, _, order = text.partition(',')
    return parse_int(box, '--max-size'), parse_fraction(order, '--max-size') if order else None


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('--verbose', '-v', action='count', default=0, help='repeat for more log output on stderr')
    common.add_argument('--format', choices=('json', 'text'), default=None)
    common.add_argument('--max-size', default=None, help='box budget B, or B,Q to also bound the series order')
    common.add_argument('--jobs', type=int, default=None)

    parser = ArgumentParser(prog='betti_engine',
                            description='Betti numbers of m-stable framed sheaves on the blown-up plane.')
    sub = parser.add_subparsers(dest='command', parser_class=ArgumentParser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    def add_params(cmd, ranges=False):
        cmd.add_argument('--rank', type=int, default=1)
        cmd.add_argument('--c1c', default='0', help='integer' + (' or a..b' if ranges else ''))
        cmd.add_argument('--m', default=None if ranges else '0', help='integer' + (' or a..b' if ranges else ''))

    def add_grading(cmd):
        cmd.add_argument('--N', dest='n_points', default=None, help='number of points (rank one)')
        cmd.add_argument('--delta', default=None, help='discriminant as p/q')

    cmd = add_parser('partitions', help='enumerate partitions')
    cmd.add_argument('--n', type=int, required=True)
    cmd.add_argument('--max-columns', type=int, default=None)
    cmd.add_argument('--count', action='store_true', help='partition numbers p(0..n) only')

    cmd = add_parser('fixed-points', help='torus fixed points of M^m(c)')
    add_params(cmd)
    add_grading(cmd)

    cmd = add_parser('betti', help='Poincaré polynomial of M^m(c)')
    add_params(cmd)
    add_grading(cmd)
    cmd.add_argument('--method', choices=METHODS, default='closed')
    cmd.add_argument('--check-all', action='store_true', help='compute with every method and compare')

    cmd = add_parser('character', help='Ext^1 character between two marked diagrams')
    cmd.add_argument('--diagram', required=True)
    cmd.add_argument('--marks', default='')
    cmd.add_argument('--diagram2', default=None)
    cmd.add_argument('--marks2', default='')
    cmd.add_argument('--method', choices=('relevant', 'subtraction'), default='relevant')

    cmd = add_parser('bijection', help='marked diagram <-> pair of diagrams')
    cmd.add_argument('--diagram', default=None)
    cmd.add_argument('--marks', default='')
    cmd.add_argument('--y1', default=None)
    cmd.add_argument('--y2', default='')
    cmd.add_argument('--m', type=int, default=None)

    cmd = add_parser('series', help='generating function of Poincaré polynomials')
    add_params(cmd)
    cmd.add_argument('--order', required=True)
    cmd.add_argument('--side', choices=SIDES, default='enumeration')
    cmd.add_argument('--method', choices=METHODS, default='closed')

    cmd = add_parser('verify', help='check a wall-crossing identity')
    add_params(cmd, ranges=True)
    cmd.add_argument('--suite', choices=SUITES, required=True)
    cmd.add_argument('--order', required=True)
    return parser


def configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s', force=True)


def moduli_params(args):
    rank = args.rank
    c1c = single(parse_range(args.c1c, '--c1c'), '--c1c')
    m = single(parse_range(args.m, '--m'), '--m')
    n_points, delta = getattr(args, 'n_points', None), getattr(args, 'delta', None)
    if n_points is not None and delta is not None:
        raise UsageError("give either --N or --delta, not both")
    if n_points is not None:
        if rank != 1:
            raise UsageError("--N is the rank one grading; use --delta for higher rank")
        return ModuliParams.rank1(m, parse_int(n_points, '--N'), c1c)
    grading = parse_fraction(delta, '--delta') if delta is not None else Fraction(0)
    return ModuliParams(rank, c1c, m, grading)


def cmd_partitions(args, engine):
    if args.n < 0:
        raise UsageError(f"--n must be nonnegative, got {args.n}")
    if args.count:
        return partition_counts_document(partition_counts(args.n)), 0
    if args.n > engine.config.max_box_budget:
        raise UsageError(f"--n {args.n} exceeds --max-size {engine.config.max_box_budget}")
    return partitions_document(args.n, args.max_columns, enumerate_partitions(args.n, args.max_columns)), 0


def cmd_fixed_points(args, engine):
    params = engine.check_params(moduli_params(args))
    rows = [(point, fixed_point_exponent(point, params), morse_index(tangent_character(point)))
            for point in fixed_points(params)]
    return fixed_points_document(params, rows), 0


def cmd_betti(args, engine):
    params = engine.check_params(moduli_params(args))
    if args.check_all:
        poly = engine.poincare_all_methods(params)
    else:
        poly = engine.poincare_polynomial(params, args.method)
    return betti_document(params, args.method, poly, args.check_all), 0


def cmd_character(args, engine):
    first = MarkedDiagram.parse(args.diagram, args.marks)
    if args.diagram2 is None:
        # a rank one fixed point: its own tangent space
        character = ext1_character(first, first, args.method)
        morse = morse_index(tangent_character(FixedPoint((first,)), args.method))
        return character_document(first, first, character, morse), 0
    second = MarkedDiagram.parse(args.diagram2, args.marks2)
    return character_document(first, second, ext1_character(first, second, args.method)), 0


def cmd_bijection(args, engine):
    if args.diagram is not None:
        if args.y1 is not None:
            raise UsageError("give either --diagram/--marks or --y1/--y2/--m")
        return split(MarkedDiagram.parse(args.diagram, args.marks)).to_dict(), 0
    if args.y1 is None or args.m is None:
        raise UsageError("bijection needs --diagram/--marks, or --y1, --y2 and --m")
    try:
        pair = DiagramPair(Partition.parse(args.y1), Partition.parse(args.y2), args.m)
    except ValueError as e:
        raise UsageError(str(e))
    return merge(pair).to_dict(), 0


def cmd_series(args, engine):
    params = moduli_params(args)
    order = parse_fraction(args.order, '--order')
    engine.check_series_request(params.r, [params.c1c], [params.m], order)
    if args.side == 'product':
        series = engine.gen_fun_product(params.r, params.c1c, params.m, order)
    else:
        series = engine.gen_fun_enumeration(params.r, params.c1c, params.m, order, args.method)
    doc_params = {'rank': params.r, 'c1c': params.c1c, 'm': params.m, 'order': str(order)}
    return series_document(args.side, doc_params, series), 0


def cmd_verify(args, engine):
    order = parse_fraction(args.order, '--order')
    ms = parse_range(args.m, '--m') if args.m is not None else None
    if ms and min(ms) < 0:
        raise UsageError("--m must be nonnegative")
    c1cs = parse_range(args.c1c, '--c1c')
    engine.check_series_request(args.rank, c1cs, ms, order)
    report = engine.verify_identity(args.suite, order, ms, c1cs, args.rank)
    return report.to_dict(), 0 if report.passed else 1


HANDLERS = {
    'partitions': cmd_partitions,
    'fixed-points': cmd_fixed_points,
    'betti': cmd_betti,
    'character': cmd_character,
    'bijection': cmd_bijection,
    'series': cmd_series,
    'verify': cmd_verify,
}


def run(argv=None, stdout=None, stderr=None, environ=None):
    """Parses ``argv``, runs one subcommand and returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(f"a subcommand is required: {', '.join(SUBCOMMANDS)}")
        configure_logging(args.verbose)
        config = EngineConfig.from_env(environ)
        box_bound, order_bound = parse_max_size(args.max_size) if args.max_size else (None, None)
        config = config.with_overrides(max_box_budget=box_bound, max_order=order_bound, jobs=args.jobs)
        if config.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {config.jobs}")
        doc, code = HANDLERS[args.command](args, PoincareEngine(config))
    except USER_ERRORS as e:
        logger.warning("refused: %s", e)
        print(f"error: {e}", file=stderr)
        return 2
    stdout.write(render(doc, args.format or config.default_format) + '\n')
    return code


def main():
    sys.exit(run())
