from .parser import ParseError, parse_expression
from .printer import print_expression

__all__ = ["ParseError", "parse_expression", "print_expression"]
