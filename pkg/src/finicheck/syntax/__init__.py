"""Front end: tokenizer, syntax tree, parser and pretty-printer."""

from .lexer import Token, tokenize
from .parser import parse, parse_command, parse_expr, parse_source, parse_type
from .printer import pretty_print, to_ascii

__all__ = ["Token", "tokenize", "parse", "parse_source", "parse_expr", "parse_type",
           "parse_command", "pretty_print", "to_ascii"]
