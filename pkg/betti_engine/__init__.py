"""
Betti numbers of moduli of m-stable framed sheaves on the blown-up plane,
from torus fixed points and from wall-crossing product formulas.
"""
from .betti import ModuliParams, PoincareEngine, VerificationReport, gen_fun_enumeration, gen_fun_product, \
    poincare_polynomial, verify_identity
from .config import EngineConfig
from .diagram import Box, Partition
from .laurent import LaurentPoly, QSeries
from .marked import DiagramPair, FixedPoint, MarkedDiagram

__all__ = [
    'Box', 'DiagramPair', 'EngineConfig', 'FixedPoint', 'LaurentPoly', 'MarkedDiagram', 'ModuliParams',
    'Partition', 'PoincareEngine', 'QSeries', 'VerificationReport', 'gen_fun_enumeration', 'gen_fun_product',
    'poincare_polynomial', 'verify_identity',
]
