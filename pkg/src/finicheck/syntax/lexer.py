"""Tokenizer accepting Unicode mathematical symbols and their ASCII shortcuts."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError, Span

# Canonical spelling of every symbol kind; the printer emits these.
SYMBOLS = {
    "FORALL": "∀",
    "EXISTS": "∃",
    "NOT": "¬",
    "AND": "∧",
    "OR": "∨",
    "IMPLIES": "⇒",
    "IFF": "⇔",
    "ASSIGN": "≔",
    "LE": "≤",
    "GE": "≥",
    "NE": "≠",
    "TIMES": "⋅",
    "NAT": "ℕ",
    "INT": "ℤ",
    "BOOL": "𝔹",
    "ELEM": "∈",
    "SUBSETEQ": "⊆",
    "UNION": "∪",
    "INTERSECT": "∩",
    "EMPTYSET": "∅",
    "LANGLE": "⟨",
    "RANGLE": "⟩",
    "MINUS": "-",
    "PLUS": "+",
    "DIV": "/",
    "MOD": "%",
    "SETMINUS": "\\",
    "EQ": "=",
    "LT": "<",
    "GT": ">",
    "LPAREN": "(",
    "RPAREN": ")",
    "LBRACKET": "[",
    "RBRACKET": "]",
    "LBRACE": "{",
    "RBRACE": "}",
    "COMMA": ",",
    "SEMI": ";",
    "COLON": ":",
    "DOT": ".",
}

# Every accepted spelling of an operator, longest first within a prefix group.
_OPERATORS = [
    ("<=>", "IFF"), ("=>", "IMPLIES"), (":=", "ASSIGN"),
    ("<=", "LE"), (">=", "GE"), ("!=", "NE"), ("~=", "NE"),
    ("<<", "LANGLE"), (">>", "RANGLE"),
    ("/\\", "AND"), ("\\/", "OR"),
    ("*", "TIMES"), ("·", "TIMES"), ("−", "MINUS"),
] + [(sym, kind) for kind, sym in SYMBOLS.items()]
_OPERATORS.sort(key=lambda p: -len(p[0]))

KEYWORDS = {
    "val", "type", "pred", "fun", "theorem", "proc", "requires", "ensures",
    "var", "if", "then", "else", "while", "do", "for", "invariant",
    "decreases", "return", "assert", "let", "letpar", "in", "with", "choose",
    "true", "false", "Array", "Set", "Tuple",
}

# Word spellings that alias a symbol kind.
WORD_ALIASES = {
    "forall": "FORALL", "exists": "EXISTS", "not": "NOT", "and": "AND",
    "or": "OR", "implies": "IMPLIES", "iff": "IFF", "Nat": "NAT",
    "Int": "INT", "Bool": "BOOL", "isin": "ELEM", "subseteq": "SUBSETEQ",
    "union": "UNION", "intersect": "INTERSECT", "emptyset": "EMPTYSET",
}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9]+")
_SPACE = re.compile(r"\s+")


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    span: Span

    def __repr__(self):
        return f"Token({self.kind}, {self.lexeme!r})"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; whitespace and comments are dropped.

    Keywords get their own upper-case kind (``val`` -> ``VAL``); operator
    aliases such as ``:=`` and ``≔`` produce the same kind.
    """
    tokens = []
    pos = 0
    end = len(source)
    while pos < end:
        m = _SPACE.match(source, pos)
        if m:
            pos = m.end()
            continue
        if source.startswith("//", pos):
            nl = source.find("\n", pos)
            pos = end if nl < 0 else nl + 1
            continue
        if source.startswith("/*", pos):
            close = source.find("*/", pos + 2)
            if close < 0:
                raise LexError("unterminated block comment", Span(pos, end))
            pos = close + 2
            continue
        m = _IDENT.match(source, pos)
        if m:
            word = m.group()
            if word in KEYWORDS:
                kind = word.upper()
            else:
                kind = WORD_ALIASES.get(word, "IDENT")
            tokens.append(Token(kind, word, Span(pos, m.end())))
            pos = m.end()
            continue
        m = _NUMBER.match(source, pos)
        if m:
            tokens.append(Token("NUMBER", m.group(), Span(pos, m.end())))
            pos = m.end()
            continue
        for text, kind in _OPERATORS:
            if source.startswith(text, pos):
                tokens.append(Token(kind, text, Span(pos, pos + len(text))))
                pos += len(text)
                break
        else:
            raise LexError(f"unexpected character {source[pos]!r}", Span(pos, pos + 1))
    return tokens
