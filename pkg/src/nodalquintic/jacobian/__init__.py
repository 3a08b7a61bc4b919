"""Genus-2 curves: Cantor arithmetic, point counts, p-adic logs and divisors."""

from .cantor import MumfordDivisor, cantor_add, from_point, identity, scalar_mul
from .curve import FrobeniusData, HyperCurve, count_points, jacobian_order
from .divisors import Divisor, FunctionField, divisor_of_function, tame_symbol
from .logs import LogVector, aj_log, find_relation, independence_check, tiny_log
from .principal import principal_function_demo
from .toric import ToricLog, section_logs

__all__ = [
    "MumfordDivisor", "cantor_add", "from_point", "identity", "scalar_mul",
    "FrobeniusData", "HyperCurve", "count_points", "jacobian_order",
    "Divisor", "FunctionField", "divisor_of_function", "tame_symbol",
    "LogVector", "aj_log", "find_relation", "independence_check", "tiny_log",
    "principal_function_demo", "ToricLog", "section_logs",
]
