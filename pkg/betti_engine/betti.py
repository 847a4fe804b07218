"""
Poincaré polynomials of the moduli spaces M^m(c) and their generating
functions, computed from torus fixed points and from product formulas.

Fixed points of M^m(c) are those of M^0(c e^{-m[C]}): r-tuples of marked
diagrams with M = c1c + r*m marks in total, slot alpha carrying
m_alpha = m + k_alpha marks. The q-grading is the discriminant Delta, a
multiple of 1/(2r).
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from fractions import Fraction
from itertools import product

from .character import ext1_character, morse_index, tangent_character
from .config import EngineConfig
from .errors import InternalInconsistency, UsageError
from .laurent import LaurentPoly, QSeries, SeriesContext, capped_product, expand_geometric, format_poly, to_hodge
from .marked import compositions, enumerate_fixed_points, enumerate_marked, enumerate_pairs, split, staircase

logger = logging.getLogger(__name__)

T_VARS = ('t',)
U_VARS = ('u',)
METHODS = ('closed', 'morse', 'pairs')
SUITES = ('rank1', 'higherrank', 'gottsche', 'wallRatio', 'euler', 'hodge', 'ext')
RANK_ONE_SUITES = ('rank1', 'wallRatio', 'hodge', 'ext')


def t_power(exponent, coef=1):
    return LaurentPoly.monomial(T_VARS, {'t': exponent}, coef)


def series_context(r, order):
    """Delta lives in (1/2r)Z; rank one gradings are integers."""
    return SeriesContext(1 if r == 1 else 2 * r, Fraction(order), T_VARS)


def cross_term(marks):
    """sum over alpha < beta of (m_a - m_b)(m_a - m_b - 1)/2."""
    total = 0
    for a in range(len(marks)):
        for b in range(a + 1, len(marks)):
            diff = marks[a] - marks[b]
            total += diff * (diff - 1) // 2
    return total


def pairing_offset(marks):
    """(1/4r) sum over all (alpha, beta) of (m_a - m_b)^2, i.e. (k,k)/2."""
    r = len(marks)
    return Fraction(sum((a - b) ** 2 for a in marks for b in marks), 4 * r)


@dataclass(frozen=True)
class ModuliParams:
    """
    Rank ``r``, ``c1c`` = (c_1, [C]), stability index ``m`` and the
    discriminant ``grading``. For rank one the grading is the number of
    points N.
    """
    r: int
    c1c: int
    m: int
    grading: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'grading', Fraction(self.grading))
        if self.r < 1:
            raise UsageError(f"rank must be at least 1, got {self.r}")
        if self.m < 0:
            raise UsageError(f"stability index must be nonnegative, got {self.m}")
        if (self.grading * 2 * self.r).denominator != 1:
            raise UsageError(f"grading {self.grading} is not a multiple of 1/{2 * self.r}")

    @classmethod
    def rank1(cls, m, n, c1c=0):
        return cls(1, c1c, m, Fraction(n))

    @property
    def total_marks(self):
        return self.c1c + self.r * self.m

    @property
    def box_budget(self):
        """Delta + M^2/(2r) + M/2: the number of boxes over all slots."""
        total = self.total_marks
        return self.grading + Fraction(total * total, 2 * self.r) + Fraction(total, 2)

    def is_enumerable(self):
        budget = self.box_budget
        return budget.denominator == 1 and budget >= 0 and self.total_marks >= 0

    def mark_vectors(self):
        """(m_1, ..., m_r) with m_alpha >= 0 summing to M."""
        if self.total_marks < 0:
            return []
        return list(compositions(self.total_marks, self.r))

    def with_grading(self, grading):
        return ModuliParams(self.r, self.c1c, self.m, Fraction(grading))

    def to_dict(self):
        return {'rank': self.r, 'c1c': self.c1c, 'm': self.m, 'delta': str(self.grading)}


def fixed_points(params):
    if not params.is_enumerable():
        return []
    return enumerate_fixed_points(params.r, params.total_marks, int(params.box_budget))


def _check_point(point, params):
    if point.rank != params.r or point.total_marks() != params.total_marks \
            or not params.is_enumerable() or point.total_boxes() != int(params.box_budget):
        raise UsageError(f"fixed point {point.to_dict()} does not belong to {params.to_dict()}")


def fixed_point_exponent(point, params):
    """
    Half the t-degree of the cell of ``point``:
    sum_alpha (r(|Y1_a| + |Y2_a|) - alpha l(Y1_a)) + cross term of the marks.
    """
    _check_point(point, params)
    r = params.r
    pairs = [split(part) for part in point.parts]
    total = sum(r * pair.size() - alpha * pair.first.num_columns()
                for alpha, pair in enumerate(pairs, start=1))
    return total + cross_term([pair.m for pair in pairs])


def morse_exponent(point):
    """
    Closed form of the Morse index of ``point`` itself. It differs from
    :func:`fixed_point_exponent` by reading the Y1 slots in reverse order,
    which leaves every Poincaré polynomial unchanged.
    """
    r = point.rank
    pairs = [split(part) for part in point.parts]
    total = sum(r * pair.size() - (r + 1 - alpha) * pair.first.num_columns()
                for alpha, pair in enumerate(pairs, start=1))
    return total + cross_term([pair.m for pair in pairs])


def _poincare_closed(params):
    counts = {}
    for point in fixed_points(params):
        e = 2 * fixed_point_exponent(point, params)
        counts[(e,)] = counts.get((e,), 0) + 1
    return LaurentPoly(T_VARS, counts)


def _poincare_morse(params):
    counts = {}
    for point in fixed_points(params):
        e = 2 * morse_index(tangent_character(point))
        counts[(e,)] = counts.get((e,), 0) + 1
    return LaurentPoly(T_VARS, counts)


def _poincare_pairs(params):
    """Sum over r-tuples (m_a, Y1_a, Y2_a) without building marked diagrams."""
    counts = {}
    r = params.r
    for marks in params.mark_vectors():
        remaining = params.grading - pairing_offset(marks)
        if remaining.denominator != 1 or remaining < 0:
            continue
        cross = cross_term(marks)
        for sizes in compositions(int(remaining), r):
            options = [enumerate_pairs(n, k) for n, k in zip(sizes, marks)]
            for pairs in product(*options):
                e = cross + sum(r * p.size() - alpha * p.first.num_columns()
                                for alpha, p in enumerate(pairs, start=1))
                counts[(2 * e,)] = counts.get((2 * e,), 0) + 1
    return LaurentPoly(T_VARS, counts)


_METHOD_TABLE = {'closed': _poincare_closed, 'morse': _poincare_morse, 'pairs': _poincare_pairs}


def poincare_polynomial(params, method='closed'):
    """
    P_t(M^m(c)) as a polynomial in t; the zero polynomial when the moduli
    space has no fixed points.
    """
    try:
        compute = _METHOD_TABLE[method]
    except KeyError:
        raise UsageError(f"unknown method {method!r}; expected one of {METHODS}")
    poly = compute(params)
    logger.debug("P_t%s via %s = %s", params.to_dict(), method, format_poly(poly))
    return poly


def gradings_below(r, c1c, m, order):
    """Delta values of nonnegative integral box budgets, ascending, below ``order``."""
    total = c1c + r * m
    shift = Fraction(total * total, 2 * r) + Fraction(total, 2)
    found = []
    budget = 0
    while budget - shift < order:
        delta = budget - shift
        if delta >= 0:
            found.append(delta)
        budget += 1
    return found


def _grading_term(job):
    params, method = job
    return params.grading, poincare_polynomial(params, method)


def gen_fun_enumeration(r, c1c, m, order, method='closed', jobs=1):
    """sum over Delta < order of P_t(M^m(c)) q^Delta, from fixed points."""
    context = series_context(r, order)
    jobs_list = [(ModuliParams(r, c1c, m, delta), method) for delta in gradings_below(r, c1c, m, context.order)]
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            terms = list(pool.map(_grading_term, jobs_list))
    else:
        terms = [_grading_term(job) for job in jobs_list]
    return QSeries(context, dict(terms))


def hilbert_factor_product(r, alpha, context):
    """prod_{d>=1} 1/(1 - t^{2(rd - alpha)} q^d)."""
    return capped_product(lambda d: (t_power(2 * (r * d - alpha)), d), None, context)


def wall_factor_product(r, upto, context):
    """prod_{d=1}^{upto} 1/(1 - t^{2rd} q^d)."""
    return capped_product(lambda d: (t_power(2 * r * d), d), max(upto, 0), context)


def gen_fun_product(r, c1c, m, order):
    """
    The closed formula: sum over k (k_alpha >= -m, sum k = c1c) of
    t^{-2<k,rho>} (t^{2r} q)^{(k,k)/2} times the per-slot products.
    """
    context = series_context(r, order)
    base = QSeries.one(context)
    for alpha in range(1, r + 1):
        base = base * hilbert_factor_product(r, alpha, context)
    params = ModuliParams(r, c1c, m)
    total = QSeries.zero(context)
    for marks in params.mark_vectors():
        offset = pairing_offset(marks)
        if offset >= context.order:
            continue
        term = QSeries.one(context).shift(offset, t_power(2 * cross_term(marks)))
        for slot_marks in marks:
            term = term * wall_factor_product(r, slot_marks, context)
        total = total + term
    return total * base


def shift_vectors(r, c1c, order):
    """Integer r-vectors k with sum c1c and (k,k)/2 below ``order``."""
    # |k_alpha - c1c/r|^2 <= (k,k) - c1c^2/r < 2*order
    reach = abs(c1c) + math.isqrt(2 * math.ceil(order)) + 1
    for head in product(range(-reach, reach + 1), repeat=r - 1):
        ks = head + (c1c - sum(head),)
        if pairing_offset(ks) < order:
            yield ks


def blowup_series(r, c1c, order):
    """
    The m -> infinity limit of :func:`gen_fun_product`, i.e. the framed
    moduli on the blow-up: k runs over all of Z^r with sum c1c and every
    slot carries the whole product prod_d 1/(1 - t^{2rd} q^d). For r = 1
    this is prod_d 1/(1 - t^{2d-2} q^d) * prod_d 1/(1 - t^{2d} q^d).
    """
    context = series_context(r, order)
    walls = capped_product(lambda d: (t_power(2 * r * d), d), None, context)
    base = QSeries.one(context)
    for alpha in range(1, r + 1):
        base = base * hilbert_factor_product(r, alpha, context) * walls
    total = QSeries.zero(context)
    for ks in shift_vectors(r, c1c, context.order):
        total = total + QSeries.one(context).shift(pairing_offset(ks), t_power(2 * cross_term(ks)))
    return total * base


def marked_diagrams_below(order, max_marks):
    """Every marked diagram with fewer than ``order`` boxes and at most ``max_marks`` marks."""
    return [marked
            for size in range(math.ceil(order))
            for m in range(max_marks + 1) if size >= staircase(m)
            for marked in enumerate_marked(size, m)]


def euler_counts(r, c1c, m, order):
    """Number of fixed points per grading, straight from the enumeration."""
    return {delta: len(fixed_points(ModuliParams(r, c1c, m, delta)))
            for delta in gradings_below(r, c1c, m, Fraction(order))}


@dataclass
class VerificationReport:
    suite: str
    params: list
    order: Fraction
    status: str = 'PASS'
    first_mismatch: dict = None
    elapsed_ms: int = 0
    cases: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status == 'PASS'

    def to_dict(self):
        return {
            'suite': self.suite,
            'params': self.params,
            'order': str(self.order),
            'status': self.status,
            'firstMismatch': self.first_mismatch,
            'elapsedMs': self.elapsed_ms,
        }


def _mismatch_doc(case, mismatch, labels=('enumeration', 'product')):
    exponent, left, right = mismatch
    return {
        'params': case,
        'q': str(exponent),
        labels[0]: format_poly(left) if isinstance(left, LaurentPoly) else str(left),
        labels[1]: format_poly(right) if isinstance(right, LaurentPoly) else str(right),
    }


def _compare_counts(left, right):
    for exponent in sorted(set(left) | set(right)):
        if left.get(exponent, 0) != right.get(exponent, 0):
            return exponent, left.get(exponent, 0), right.get(exponent, 0)
    return None


def default_index(suite, c1c, order):
    """Stability index used when a verification names none."""
    if suite == 'gottsche':
        # no wall below the order is left to cross
        return math.ceil(order) + abs(c1c)
    return 0


class PoincareEngine:
    """
    Computes Poincaré polynomials and generating functions, and checks the
    wall-crossing identities between them.
    """

    def __init__(self, config=None):
        self.config = config or EngineConfig()

    def poincare_polynomial(self, params, method='closed'):
        return poincare_polynomial(params, method)

    def poincare_all_methods(self, params):
        """All three methods; raises if they disagree."""
        results = {method: poincare_polynomial(params, method) for method in METHODS}
        if len(set(results.values())) != 1:
            raise InternalInconsistency(
                "Poincaré methods disagree: " + ', '.join(f"{k}={format_poly(v)}" for k, v in results.items()))
        return results['closed']

    def gen_fun_enumeration(self, r, c1c, m, order, method='closed'):
        return gen_fun_enumeration(r, c1c, m, order, method, jobs=self.config.jobs)

    def gen_fun_product(self, r, c1c, m, order):
        return gen_fun_product(r, c1c, m, order)

    def _check_cases(self, suite, cases, order):
        checks = {
            'rank1': self._check_identity,
            'higherrank': self._check_identity,
            'gottsche': self._check_gottsche,
            'wallRatio': self._check_wall_ratio,
            'euler': self._check_euler,
            'hodge': self._check_hodge,
            'ext': self._check_ext,
        }
        check = checks[suite]
        if suite == 'ext':
            pool = marked_diagrams_below(order, max(case['m'] for case in cases))
            check = partial(self._check_ext, pool=pool)
        for case in cases:
            mismatch = check(case, order)
            logger.info("%s %s order=%s: %s", suite, case, order, 'FAIL' if mismatch else 'ok')
            if mismatch:
                return mismatch
        return None

    def _check_identity(self, case, order):
        enumeration = self.gen_fun_enumeration(case['rank'], case['c1c'], case['m'], order)
        closed = self.gen_fun_product(case['rank'], case['c1c'], case['m'], order)
        mismatch = enumeration.compare(closed)
        return _mismatch_doc(case, mismatch) if mismatch else None

    def _check_gottsche(self, case, order):
        enumeration = self.gen_fun_enumeration(case['rank'], case['c1c'], case['m'], order)
        mismatch = enumeration.compare(blowup_series(case['rank'], case['c1c'], order))
        return _mismatch_doc(case, mismatch, ('enumeration', 'blowup')) if mismatch else None

    def _check_wall_ratio(self, case, order):
        m, c1c = case['m'], case['c1c']
        context = series_context(1, order)
        before = self.gen_fun_enumeration(1, c1c, m, order)
        after = self.gen_fun_enumeration(1, c1c, m + 1, order)
        d = c1c + m + 1
        factor = expand_geometric(t_power(2 * d), d, context) if d >= 1 else QSeries.one(context)
        mismatch = after.compare(before * factor)
        if mismatch:
            return _mismatch_doc(case, mismatch, ('enumeration', 'wall-crossed'))
        closed_ratio = self.gen_fun_product(1, c1c, m + 1, order).compare(
            self.gen_fun_product(1, c1c, m, order) * factor)
        return _mismatch_doc(case, closed_ratio, ('product', 'wall-crossed')) if closed_ratio else None

    def _check_euler(self, case, order):
        counts = euler_counts(case['rank'], case['c1c'], case['m'], order)
        counts = {e: c for e, c in counts.items() if c}
        closed = self.gen_fun_product(case['rank'], case['c1c'], case['m'], order).evaluate({'t': 1})
        mismatch = _compare_counts(counts, closed)
        return _mismatch_doc(case, mismatch, ('fixedPoints', 'product')) if mismatch else None

    def _check_hodge(self, case, order):
        m, c1c = case['m'], case['c1c']
        context = SeriesContext(1, Fraction(order), U_VARS)
        hodge = self.gen_fun_enumeration(1, c1c, m, order).map_coefficients(to_hodge, U_VARS)
        hilbert = self.gen_fun_enumeration(1, 0, 0, order).map_coefficients(to_hodge, U_VARS)
        walls = capped_product(lambda d: (LaurentPoly.monomial(U_VARS, {'u': d}), d), c1c + m, context)
        mismatch = hodge.compare(hilbert * walls)
        return _mismatch_doc(case, mismatch, ('hodge', 'formula')) if mismatch else None

    def _check_ext(self, case, order, pool):
        """Both Ext^1 methods on every ordered pair whose first entry has ``case['m']`` marks."""
        for a in (marked for marked in pool if marked.num_marks() == case['m']):
            for b in pool:
                relevant, subtraction = ext1_character(a, b, 'relevant'), ext1_character(a, b, 'subtraction')
                if relevant != subtraction:
                    return {'params': case, 'A': a.to_dict(), 'B': b.to_dict(),
                            'relevant': format_poly(relevant.poly), 'subtraction': format_poly(subtraction.poly)}
        return None

    def _check_shape(self, r, c1cs):
        if r > self.config.max_rank:
            raise UsageError(f"rank {r} exceeds the bound {self.config.max_rank}")
        too_far = [c1c for c1c in c1cs if abs(c1c) > self.config.max_box_budget]
        if too_far:
            raise UsageError(f"c1c {too_far[0]} exceeds the bound {self.config.max_box_budget}")

    def check_params(self, params):
        """Refuses a moduli space with more boxes than the configured budget."""
        self._check_shape(params.r, [params.c1c])
        if params.box_budget > self.config.max_box_budget:
            raise UsageError(f"box budget {params.box_budget} of {params.to_dict()} exceeds --max-size "
                             f"{self.config.max_box_budget}")
        return params

    def check_series_request(self, r, c1cs, ms, order):
        """
        Refuses series past the configured order and stability indices
        past ceil(order) + |c1c|. Forced staircase boxes are not counted.
        """
        if order <= 0:
            raise UsageError(f"order must be positive, got {order}")
        if order > self.config.max_order:
            raise UsageError(f"order {order} exceeds the bound {self.config.max_order}")
        self._check_shape(r, c1cs)
        for m in ms or ():
            for c1c in c1cs:
                if m > math.ceil(order) + abs(c1c):
                    raise UsageError(f"m={m} exceeds ceil(order) + |c1c| = {math.ceil(order) + abs(c1c)}")

    def verify_identity(self, suite, order, ms=None, c1cs=(0,), r=1):
        """
        Checks one identity family over all (m, c1c) combinations up to
        ``order``. A mismatch is reported, not raised.
        """
        if suite not in SUITES:
            raise UsageError(f"unknown suite {suite!r}; expected one of {SUITES}")
        order = Fraction(order)
        if order <= 0:
            raise UsageError(f"order must be positive, got {order}")
        if suite in RANK_ONE_SUITES and r != 1:
            raise UsageError(f"suite {suite} is a rank one identity")
        if ms is None:
            cases = [{'rank': r, 'c1c': c1c, 'm': default_index(suite, c1c, order)} for c1c in c1cs]
        else:
            cases = [{'rank': r, 'c1c': c1c, 'm': m} for m in ms for c1c in c1cs]
        started = time.perf_counter()
        mismatch = self._check_cases(suite, cases, order)
        elapsed = int((time.perf_counter() - started) * 1000)
        report = VerificationReport(suite, cases, order, 'FAIL' if mismatch else 'PASS', mismatch, elapsed)
        logger.info("verify %s: %s in %d ms", suite, report.status, elapsed)
        return report


def verify_identity(suite, order, ms=None, c1cs=(0,), r=1, config=None):
    return PoincareEngine(config).verify_identity(suite, order, ms, c1cs, r)
