"""
Exact Laurent polynomials with integer coefficients in named variables, and
truncated series in a grading variable q with rational exponents.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, lcm

from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_mul, rs_series_inversion
from sympy.polys.rings import ring

from .errors import MissingAssignment, NonpositiveGrading, OddExponent, VariableMismatch

logger = logging.getLogger(__name__)


class LaurentPoly:
    """
    Immutable polynomial ``sum c_e x^e`` where the exponent vectors ``e``
    are tuples aligned with ``variables`` and may contain negative entries.
    Zero coefficients are never stored.
    """

    __slots__ = ('variables', '_terms', '_hash')

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        clean = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(self.variables):
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            if coef:
                clean[exp] = int(coef)
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, value=1):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables, exponents, coef=1):
        """``exponents`` is a mapping from variable name to exponent."""
        variables = tuple(variables)
        unknown = set(exponents) - set(variables)
        if unknown:
            raise VariableMismatch(f"{sorted(unknown)} not among {variables}")
        exp = tuple(exponents.get(v, 0) for v in variables)
        return cls(variables, {exp: coef})

    @classmethod
    def variable(cls, variables, name):
        return cls.monomial(variables, {name: 1})

    # -- inspection ---------------------------------------------------

    def terms(self):
        """(exponent tuple, coefficient) pairs in ascending exponent order."""
        return list(self._terms.items())

    def coefficient(self, exponents):
        exp = tuple(exponents.get(v, 0) for v in self.variables) if isinstance(exponents, dict) else tuple(exponents)
        return self._terms.get(exp, 0)

    def is_zero(self):
        return not self._terms

    def is_monomial(self):
        return len(self._terms) == 1

    def is_nonnegative(self):
        return all(c > 0 for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    # -- ring structure -----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exp, coef in other._terms.items():
            terms[exp] = terms.get(exp, 0) + coef
        return LaurentPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, 0) + c1 * c2
        return LaurentPoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, power):
        if power < 0:
            if not self.is_monomial() or abs(next(iter(self._terms.values()))) != 1:
                raise ValueError("only unit monomials have negative powers")
            (exp, coef), = self._terms.items()
            return LaurentPoly(self.variables, {tuple(power * e for e in exp): coef ** -power})
        result = LaurentPoly.constant(self.variables)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.variables, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self._terms.items())))
        return self._hash

    # -- changes of ring ----------------------------------------------

    def extend(self, variables):
        """The same polynomial seen in a ring with more variables."""
        variables = tuple(variables)
        missing = set(self.variables) - set(variables)
        if missing:
            raise VariableMismatch(f"cannot drop variables {sorted(missing)}")
        positions = [self.variables.index(v) if v in self.variables else None for v in variables]
        terms = {tuple(0 if p is None else exp[p] for p in positions): c for exp, c in self._terms.items()}
        return LaurentPoly(variables, terms)

    def __repr__(self):
        return f"LaurentPoly({self.variables}, {self._terms})"

    def __str__(self):
        return format_poly(self)

    # -- serialisation ------------------------------------------------

    def to_json(self):
        return {
            'vars': list(self.variables),
            'terms': [
                {'exp': {v: e for v, e in zip(self.variables, exp) if e}, 'coef': str(coef)}
                for exp, coef in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, doc):
        variables = tuple(doc['vars'])
        terms = {}
        for term in doc['terms']:
            exp = tuple(int(term['exp'].get(v, 0)) for v in variables)
            terms[exp] = terms.get(exp, 0) + int(term['coef'])
        return cls(variables, terms)


def _format_monomial(variables, exp):
    factors = []
    for name, e in zip(variables, exp):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    return '*'.join(factors)


def format_poly(poly):
    """Ascending exponents, e.g. ``1 + 2*t^2 + t^4``."""
    if poly.is_zero():
        return '0'
    pieces = []
    for exp, coef in poly.terms():
        mono = _format_monomial(poly.variables, exp)
        magnitude = abs(coef)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{magnitude}*{mono}"
        sign = '-' if coef < 0 else '+'
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ('-' if first_sign == '-' else '') + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def poly_mul(a, b):
    return a * b


def eval_int(poly, assignment):
    """
    Exact value at nonzero integer points. Every variable of the ring has to
    be assigned.
    """
    missing = [v for v in poly.variables if v not in assignment]
    if missing:
        raise MissingAssignment(f"no value for {missing}")
    values = [Fraction(assignment[v]) for v in poly.variables]
    if any(v == 0 for v in values):
        raise MissingAssignment("Laurent polynomials are evaluated at nonzero points only")
    total = Fraction(0)
    for exp, coef in poly.terms():
        term = Fraction(coef)
        for value, e in zip(values, exp):
            term *= value ** e
        total += term
    return int(total) if total.denominator == 1 else total


def to_hodge(poly, source='t', target='u'):
    """Substitute t^2 -> u; the (p,p) Hodge polynomial in u = xy."""
    idx = poly.variables.index(source)
    terms = {}
    for exp, coef in poly.terms():
        if exp[idx] % 2:
            raise OddExponent(f"{source}^{exp[idx]} in {format_poly(poly)}")
        new = list(exp)
        new[idx] //= 2
        terms[tuple(new)] = coef
    variables = tuple(target if v == source else v for v in poly.variables)
    return LaurentPoly(variables, terms)


@dataclass(frozen=True)
class SeriesContext:
    """Exponent denominator, truncation order and coefficient ring of a QSeries."""
    denom: int = 1
    order: Fraction = Fraction(10)
    variables: tuple = ('t',)

    def __post_init__(self):
        object.__setattr__(self, 'order', Fraction(self.order))
        object.__setattr__(self, 'variables', tuple(self.variables))
        if self.denom < 1:
            raise ValueError(f"denominator must be positive, got {self.denom}")


class QSeries:
    """
    ``sum_e c_e q^e`` truncated below ``order``; every stored exponent is a
    multiple of ``1/denom``.
    """

    __slots__ = ('denom', 'order', 'variables', '_coeffs')

    def __init__(self, context, coeffs=None):
        self.denom = context.denom
        self.order = context.order
        self.variables = context.variables
        clean = {}
        for exp, poly in (coeffs or {}).items():
            exp = Fraction(exp)
            if (exp * self.denom).denominator != 1:
                raise ValueError(f"q-exponent {exp} is not a multiple of 1/{self.denom}")
            if exp >= self.order or poly.is_zero():
                continue
            if poly.variables != self.variables:
                raise VariableMismatch(f"{poly.variables} vs {self.variables}")
            clean[exp] = poly
        self._coeffs = dict(sorted(clean.items()))

    @property
    def context(self):
        return SeriesContext(self.denom, self.order, self.variables)

    @classmethod
    def one(cls, context):
        return cls(context, {Fraction(0): LaurentPoly.constant(context.variables)})

    @classmethod
    def zero(cls, context):
        return cls(context)

    def items(self):
        return list(self._coeffs.items())

    def exponents(self):
        return list(self._coeffs)

    def coefficient(self, exponent):
        return self._coeffs.get(Fraction(exponent), LaurentPoly.zero(self.variables))

    def is_zero(self):
        return not self._coeffs

    def _joint_context(self, other):
        if other.variables != self.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")
        return SeriesContext(lcm(self.denom, other.denom), min(self.order, other.order), self.variables)

    def __add__(self, other):
        context = self._joint_context(other)
        coeffs = dict(self._coeffs)
        for exp, poly in other._coeffs.items():
            coeffs[exp] = coeffs[exp] + poly if exp in coeffs else poly
        return QSeries(context, coeffs)

    def __neg__(self):
        return QSeries(self.context, {e: -p for e, p in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return self.shift(0, other)
        context = self._joint_context(other)
        if self.is_zero() or other.is_zero():
            return QSeries.zero(context)
        R = _series_ring(context.variables)
        mine, theirs = _lowest_degrees(self, context.denom), _lowest_degrees(other, context.denom)
        low = tuple(a + b for a, b in zip(mine, theirs))
        prec = ceil(context.order * context.denom) - low[0]
        product = rs_mul(_encode(self, context.denom, mine, R), _encode(other, context.denom, theirs, R),
                         R.gens[0], prec)
        return _decode(product, low, context)

    def shift(self, exponent, poly=None):
        """Multiply by ``poly * q^exponent``."""
        exponent = Fraction(exponent)
        denom = lcm(self.denom, exponent.denominator)
        coeffs = {e + exponent: (p if poly is None else p * poly) for e, p in self._coeffs.items()}
        return QSeries(SeriesContext(denom, self.order, self.variables), coeffs)

    def map_coefficients(self, func, variables):
        context = SeriesContext(self.denom, self.order, variables)
        return QSeries(context, {e: func(p) for e, p in self._coeffs.items()})

    def evaluate(self, assignment):
        """Coefficientwise evaluation, e.g. t=1 for Euler numbers."""
        return {e: eval_int(p, assignment) for e, p in self._coeffs.items()}

    def compare(self, other):
        """
        First exponent below the common order where the series differ, as
        ``(exponent, self coefficient, other coefficient)``; None if equal.
        """
        order = min(self.order, other.order)
        for exp in sorted(set(self._coeffs) | set(other._coeffs)):
            if exp >= order:
                break
            mine, theirs = self.coefficient(exp), other.coefficient(exp)
            if mine != theirs:
                return exp, mine, theirs
        return None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.variables == other.variables \
            and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.order, self.variables, tuple(self._coeffs.items())))

    def __repr__(self):
        return f"QSeries(denom={self.denom}, order={self.order}, {format_series(self)})"

    def __str__(self):
        return format_series(self)

    def to_json(self):
        return {
            'denom': self.denom,
            'order': str(self.order),
            'coeffs': [{'q': str(e), 'poly': p.to_json()} for e, p in self._coeffs.items()],
        }

    @classmethod
    def from_json(cls, doc):
        coeffs = {Fraction(c['q']): LaurentPoly.from_json(c['poly']) for c in doc['coeffs']}
        variables = next(iter(coeffs.values())).variables if coeffs else ('t',)
        return cls(SeriesContext(int(doc['denom']), Fraction(doc['order']), variables), coeffs)


@lru_cache(maxsize=32)
def _series_ring(variables):
    """Polynomial ring over QQ: the encoded grading first, then ``variables``."""
    return ring(','.join(('q_',) + tuple(variables)), QQ)[0]


def _to_int(coef):
    value = QQ.to_sympy(coef)
    if not value.is_Integer:
        raise ValueError(f"non-integral series coefficient {value}")
    return int(value)


def _lowest_degrees(series, denom):
    """Smallest q-degree (in steps of 1/denom) and per-variable degrees, capped at 0."""
    low = [0] * (1 + len(series.variables))
    for exp, poly in series.items():
        low[0] = min(low[0], int(exp * denom))
        for degrees, _ in poly.terms():
            for i, degree in enumerate(degrees, start=1):
                low[i] = min(low[i], degree)
    return tuple(low)


def _encode(series, denom, low, R):
    """``series`` times the monomial ``x^-low``, which is a polynomial in R."""
    terms = {}
    for exp, poly in series.items():
        q_degree = int(exp * denom) - low[0]
        for degrees, coef in poly.terms():
            terms[(q_degree,) + tuple(d - l for d, l in zip(degrees, low[1:]))] = coef
    return R.from_dict(terms)


def _decode(element, low, context):
    coeffs = {}
    for monom, coef in element.terms():
        exp = Fraction(monom[0] + low[0], context.denom)
        degrees = tuple(d + l for d, l in zip(monom[1:], low[1:]))
        coeffs.setdefault(exp, {})[degrees] = _to_int(coef)
    return QSeries(context, {exp: LaurentPoly(context.variables, terms) for exp, terms in coeffs.items()})


def format_series(series):
    if series.is_zero():
        return f"O(q^{series.order})"
    parts = []
    for exp, poly in series.items():
        coef = format_poly(poly)
        coef = coef if poly.is_monomial() else f"({coef})"
        if exp == 0:
            parts.append(coef)
        elif coef == '1':
            parts.append(f"q^{exp}")
        else:
            parts.append(f"{coef}*q^{exp}")
    return ' + '.join(parts) + f" + O(q^{series.order})"


def expand_geometric(mono, q_exponent, context):
    """
    ``1 / (1 - mono * q^q_exponent)`` expanded up to the context order.
    """
    q_exponent = Fraction(q_exponent)
    if q_exponent <= 0:
        raise NonpositiveGrading(f"q-exponent {q_exponent} would not truncate")
    if not mono.is_monomial():
        raise ValueError(f"{format_poly(mono)} is not a single term")
    denom = lcm(context.denom, q_exponent.denominator)
    # z stands for mono, so negative exponents in mono stay out of the ring
    R, q, z = ring('q_,z_', QQ)
    inverse = rs_series_inversion(1 - z * q ** int(q_exponent * denom), q, ceil(context.order * denom))
    powers = [LaurentPoly.constant(mono.variables)]
    coeffs = {}
    for (q_degree, z_degree), coef in inverse.terms():
        while len(powers) <= z_degree:
            powers.append(powers[-1] * mono)
        coeffs[Fraction(q_degree, denom)] = powers[z_degree] * _to_int(coef)
    return QSeries(SeriesContext(denom, context.order, mono.variables), coeffs)


def capped_product(factors, d_max, context):
    """
    Product over d = 1..d_max of ``1/(1 - mono_d q^{e_d})`` where
    ``factors(d)`` returns ``(mono_d, e_d)``. With ``d_max=None`` the
    product runs until ``e_d`` reaches the truncation order; ``e_d`` must
    grow with d.
    """
    result = QSeries.one(context)
    d = 1
    while d_max is None or d <= d_max:
        mono, q_exponent = factors(d)
        if Fraction(q_exponent) >= context.order:
            if d_max is None:
                break
            d += 1
            continue
        result = result * expand_geometric(mono, q_exponent, context)
        d += 1
    return result
