"""Text grammars and interchange formats."""
from .temporal import parse_formula, print_formula

__all__ = ["parse_formula", "print_formula"]
