"""
Torus characters of tangent spaces at fixed points and their Morse indices.

The torus is (t1, t2) acting on the plane times the framing torus
e_1..e_r. The summand Ext^1(E_alpha, E_beta(-l_inf)) carries framing weight
e_beta e_alpha^-1. Morse indices are taken for a one-parameter subgroup
whose t2-weight dominates everything, whose framing weights come next
(n_1 > n_2 > ... > n_r) and whose t1-weight is the smallest positive one.
"""
import logging
from dataclasses import dataclass
from itertools import product

import numpy as np

from .diagram import arm_leg
from .errors import InternalInconsistency, UsageError
from .laurent import LaurentPoly, eval_int
from .marked import relevant_pair, staircase

logger = logging.getLogger(__name__)

PLANE_VARS = ('t1', 't2')
METHODS = ('relevant', 'subtraction')


def character_variables(r):
    """(t1, t2) for r=0, otherwise (t1, t2, e_1, ..., e_r)."""
    return PLANE_VARS + tuple(f"e_{i}" for i in range(1, r + 1))


@dataclass(frozen=True)
class Character:
    poly: LaurentPoly
    r: int = 0

    def __post_init__(self):
        if self.poly.variables != character_variables(self.r):
            raise InternalInconsistency(f"character ring {self.poly.variables} does not match rank {self.r}")
        if not self.poly.is_nonnegative():
            raise InternalInconsistency(f"character with negative coefficients: {self.poly}")

    def dimension(self):
        return eval_int(self.poly, {v: 1 for v in self.poly.variables})

    def to_json(self):
        return self.poly.to_json()


def _plane_poly(counts):
    return LaurentPoly(PLANE_VARS, counts)


def hom_marked_character(marks_a, marks_b):
    """sum over (s, s') of t1^(l'(s) - l'(s')) t2^(a'(s) - a'(s'))."""
    counts = {}
    for s, s_prime in product(marks_a, marks_b):
        exp = (s.col - s_prime.col, s.row - s_prime.row)
        counts[exp] = counts.get(exp, 0) + 1
    return Character(_plane_poly(counts))


def _ext_terms(unmarked_a, diagram_b, boxes_a, boxes_b):
    counts = {}
    for s in boxes_a:
        _, leg_b = arm_leg(diagram_b, s)
        arm_a, _ = arm_leg(unmarked_a, s)
        exp = (-leg_b, arm_a + 1)
        counts[exp] = counts.get(exp, 0) + 1
    for t in boxes_b:
        _, leg_a = arm_leg(unmarked_a, t)
        arm_b, _ = arm_leg(diagram_b, t)
        exp = (leg_a + 1, -arm_b)
        counts[exp] = counts.get(exp, 0) + 1
    return counts


def ext1_character(a, b, method='relevant'):
    """
    Character of Ext^1(E_a, E_b(-l_inf)) for the rank one summands given by
    the marked diagrams ``a`` and ``b``.

    ``relevant`` sums over the relevant boxes only; ``subtraction`` takes
    the full sums over Y_a \\ S_a and Y_b and removes Hom(S_a, S_b).
    """
    unmarked_a = a.unmarked()
    if method == 'relevant':
        rel_a, rel_b = relevant_pair(a, b)
        return Character(_plane_poly(_ext_terms(unmarked_a, b.diagram, rel_a, rel_b)))
    if method == 'subtraction':
        full = _plane_poly(_ext_terms(unmarked_a, b.diagram, unmarked_a.boxes(), b.diagram.boxes()))
        difference = full - hom_marked_character(a.marks, b.marks).poly
        if not difference.is_nonnegative():
            raise InternalInconsistency(
                f"Hom(S_a, S_b) is not contained in the full sums for a={a.to_dict()}, b={b.to_dict()}")
        return Character(difference)
    raise UsageError(f"unknown character method {method!r}; expected one of {METHODS}")


def tangent_character(point, method='relevant'):
    """sum over (alpha, beta) of e_beta e_alpha^-1 * ext1(parts[alpha], parts[beta])."""
    r = point.rank
    variables = character_variables(r)
    counts = {}
    for alpha, beta in product(range(r), repeat=2):
        framing = [0] * r
        if alpha != beta:
            framing[beta] += 1
            framing[alpha] -= 1
        ext = ext1_character(point.parts[alpha], point.parts[beta], method)
        for (e1, e2), coef in ext.poly.terms():
            exp = (e1, e2) + tuple(framing)
            counts[exp] = counts.get(exp, 0) + coef
    return Character(LaurentPoly(variables, counts), r)


def _framing_signs(framing):
    """
    Sign of the framing weight n_beta - n_alpha of each e_beta e_alpha^-1
    row: -1 when beta > alpha, +1 when beta < alpha, 0 for trivial rows.
    """
    if framing.shape[1] == 0:
        return np.zeros(framing.shape[0], dtype=np.int64)
    raising = framing == 1
    lowering = framing == -1
    trivial = ~framing.any(axis=1)
    well_formed = trivial | ((raising.sum(axis=1) == 1) & (lowering.sum(axis=1) == 1)
                             & (np.abs(framing).sum(axis=1) == 2))
    if not well_formed.all():
        raise InternalInconsistency("framing weights are not of the form e_beta e_alpha^-1")
    beta = np.argmax(raising, axis=1)
    alpha = np.argmax(lowering, axis=1)
    return np.where(trivial, 0, np.where(beta > alpha, -1, 1))


def morse_index(character):
    """
    Number of weight spaces with negative weight, compared
    lexicographically on (t2-exponent, framing weight, t1-exponent).
    """
    terms = character.poly.terms()
    if not terms:
        return 0
    exps = np.array([exp for exp, _ in terms], dtype=np.int64)
    coefs = np.array([coef for _, coef in terms], dtype=np.int64)
    t1, t2 = exps[:, 0], exps[:, 1]
    signs = _framing_signs(exps[:, 2:])
    negative = (t2 < 0) | ((t2 == 0) & (signs < 0)) | ((t2 == 0) & (signs == 0) & (t1 < 0))
    return int(coefs[negative].sum())


def morse_index_closed_rank1(marked):
    """|Y| - m(m+1)/2 + m - l(Y), the rank one closed form."""
    m = marked.num_marks()
    return marked.size() - staircase(m) + m - marked.diagram.num_columns()
