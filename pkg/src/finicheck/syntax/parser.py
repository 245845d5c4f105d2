"""Recursive-descent parser producing span-annotated syntax trees.

Precedence, loosest first: ``⇔`` (left), ``⇒`` (right), ``∨``, ``∧``,
comparisons (non-associative), additive, multiplicative, prefix ``¬``/``-``.
Binders (``∀ ∃ choose let letpar if``) take the rest of the enclosing
parenthesized unit as their body.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import ParseError, Span
from . import nodes as n
from .lexer import SYMBOLS, Token, tokenize

_COMPARISONS = {"EQ": "=", "NE": "≠", "LT": "<", "LE": "≤", "GT": ">", "GE": "≥",
                "ELEM": "∈", "SUBSETEQ": "⊆"}
_ADDITIVE = {"PLUS": "+", "MINUS": "-", "UNION": "∪", "SETMINUS": "\\"}
_MULTIPLICATIVE = {"TIMES": "⋅", "DIV": "/", "MOD": "%", "INTERSECT": "∩"}

_EOF = "EOF"


class Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.pos = 0
        end = self.tokens[-1].span.end if self.tokens else 0
        self.tokens.append(Token(_EOF, "<end of input>", Span(end, end)))
        self.last_end = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        t = self.tok
        if t.kind != _EOF:
            self.pos += 1
            self.last_end = t.span.end
        return t

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            return self.advance()
        return None

    def expect(self, *kinds: str) -> Token:
        if self.tok.kind in kinds:
            return self.advance()
        raise self.error(kinds)

    def error(self, expected) -> ParseError:
        shown = ", ".join(sorted(_describe(k) for k in expected))
        return ParseError(f"expected {shown} but found {self.tok.lexeme!r}",
                          self.tok.span, expected)

    def span_from(self, start: int) -> Span:
        return Span(start, max(start, self.last_end))

    # -- declarations -------------------------------------------------------

    def parse_spec(self) -> n.Spec:
        start = self.tok.span.start
        decls = []
        while not self.at(_EOF):
            decls.append(self.declaration())
        return n.Spec(tuple(decls), span=self.span_from(start))

    def declaration(self) -> n.Decl:
        start = self.tok.span.start
        kind = self.expect("VAL", "TYPE", "PRED", "FUN", "THEOREM", "PROC").kind
        name = self.expect("IDENT").lexeme
        if kind == "VAL":
            typ = self.type_expr() if self.accept("COLON") else None
            value = self.expr() if self.accept("EQ") else None
            self.expect("SEMI")
            return n.ValDecl(name, typ, value, span=self.span_from(start))
        if kind == "TYPE":
            self.expect("EQ")
            typ = self.type_expr()
            self.expect("SEMI")
            return n.TypeDecl(name, typ, span=self.span_from(start))
        params = self.params(optional=kind in ("PRED", "THEOREM"))
        if kind in ("PRED", "THEOREM"):
            requires = self.clauses("REQUIRES")
            self.expect("IFF")
            body = self.expr()
            self.expect("SEMI")
            cls = n.PredDecl if kind == "PRED" else n.TheoremDecl
            return cls(name, params, requires, body, span=self.span_from(start))
        self.expect("COLON")
        result = self.type_expr()
        if kind == "FUN":
            requires = self.clauses("REQUIRES")
            self.expect("EQ")
            body = self.expr()
            self.expect("SEMI")
            return n.FunDecl(name, params, result, requires, body, span=self.span_from(start))
        requires, ensures = [], []
        while self.at("REQUIRES", "ENSURES"):
            target = requires if self.advance().kind == "REQUIRES" else ensures
            target.append(self.expr())
            self.expect("SEMI")
        body_start = self.expect("LBRACE").span.start
        commands = []
        while not self.at("RETURN"):
            if self.at("RBRACE", _EOF):
                raise self.error({"RETURN"})
            cmd = self.command()
            if cmd is not None:
                commands.append(cmd)
        body = n.Seq(tuple(commands), span=self.span_from(body_start))
        self.expect("RETURN")
        ret = self.expr()
        self.expect("SEMI")
        self.expect("RBRACE")
        return n.ProcDecl(name, params, result, tuple(requires), tuple(ensures), body, ret,
                          span=self.span_from(start))

    def params(self, optional: bool) -> tuple[n.Param, ...]:
        if optional and not self.at("LPAREN"):
            return ()
        self.expect("LPAREN")
        params = []
        if not self.at("RPAREN"):
            while True:
                start = self.tok.span.start
                name = self.expect("IDENT").lexeme
                self.expect("COLON")
                params.append(n.Param(name, self.type_expr(), span=self.span_from(start)))
                if not self.accept("COMMA"):
                    break
        self.expect("RPAREN")
        return tuple(params)

    def clauses(self, keyword: str) -> tuple[n.Expr, ...]:
        out = []
        while self.accept(keyword):
            out.append(self.expr())
            self.expect("SEMI")
        return tuple(out)

    # -- types --------------------------------------------------------------

    def type_expr(self) -> n.TypeExpr:
        start = self.tok.span.start
        t = self.expect("NAT", "INT", "BOOL", "ARRAY", "SET", "TUPLE", "IDENT")
        if t.kind == "NAT":
            bound = None
            if self.accept("LBRACKET"):
                bound = self.expr()
                self.expect("RBRACKET")
            return n.NatType(bound, span=self.span_from(start))
        if t.kind == "INT":
            lo = hi = None
            if self.accept("LBRACKET"):
                lo = self.expr()
                self.expect("COMMA")
                hi = self.expr()
                self.expect("RBRACKET")
            return n.IntType(lo, hi, span=self.span_from(start))
        if t.kind == "BOOL":
            return n.BoolType(span=t.span)
        if t.kind == "IDENT":
            return n.NamedType(t.lexeme, span=t.span)
        self.expect("LBRACKET")
        if t.kind == "ARRAY":
            length = self.expr()
            self.expect("COMMA")
            elem = self.type_expr()
            self.expect("RBRACKET")
            return n.ArrayType(length, elem, span=self.span_from(start))
        if t.kind == "SET":
            elem = self.type_expr()
            self.expect("RBRACKET")
            return n.SetType(elem, span=self.span_from(start))
        comps = [self.type_expr()]
        while self.accept("COMMA"):
            comps.append(self.type_expr())
        self.expect("RBRACKET")
        return n.TupleType(tuple(comps), span=self.span_from(start))

    # -- commands -----------------------------------------------------------

    def command(self) -> n.Command | None:
        """One command, or None for a stray ``;``."""
        start = self.tok.span.start
        if self.accept("SEMI"):
            return None
        if self.at("LBRACE"):
            return self.block()
        if self.accept("IF"):
            cond = self.expr()
            self.expect("THEN")
            then = self.branch()
            orelse = self.branch() if self.accept("ELSE") else None
            return n.If(cond, then, orelse, span=self.span_from(start))
        if self.accept("WHILE"):
            cond = self.expr()
            self.expect("DO")
            invariants, decreases = self.loop_annotations()
            body = self.branch()
            return n.While(cond, invariants, decreases, body, span=self.span_from(start))
        if self.accept("FOR"):
            init = self.var_decl()
            self.expect("SEMI")
            cond = self.expr()
            self.expect("SEMI")
            update = self.assignment()
            self.expect("DO")
            invariants, decreases = self.loop_annotations()
            body = self.branch()
            return n.For(init, cond, update, invariants, decreases, body,
                         span=self.span_from(start))
        if self.at("VAR"):
            cmd = self.var_decl()
        elif self.accept("ASSERT"):
            cmd = n.Assert(self.expr(), span=self.span_from(start))
        elif self.at("IDENT") and self.peek().kind == "LPAREN":
            call = self.primary()
            cmd = n.CallCmd(call, span=call.span)
        elif self.at("IDENT"):
            cmd = self.assignment()
        else:
            raise self.error({"VAR", "IF", "WHILE", "FOR", "ASSERT", "IDENT", "LBRACE", "RETURN"})
        # a trailing ';' may be omitted directly before 'else' or '}'
        if not self.accept("SEMI") and not self.at("ELSE", "RBRACE"):
            raise self.error({"SEMI"})
        return cmd

    def block(self) -> n.Seq:
        start = self.expect("LBRACE").span.start
        commands = []
        while not self.accept("RBRACE"):
            if self.at(_EOF):
                raise self.error({"RBRACE"})
            cmd = self.command()
            if cmd is not None:
                commands.append(cmd)
        return n.Seq(tuple(commands), span=self.span_from(start))

    def branch(self) -> n.Seq:
        if self.at("LBRACE"):
            return self.block()
        cmd = self.command()
        if cmd is None:
            return n.Seq((), span=Span(self.last_end, self.last_end))
        return n.Seq((cmd,), span=cmd.span)

    def var_decl(self) -> n.VarDecl:
        start = self.expect("VAR").span.start
        name = self.expect("IDENT").lexeme
        self.expect("COLON")
        typ = self.type_expr()
        self.expect("ASSIGN", "EQ")
        init = self.expr()
        return n.VarDecl(name, typ, init, span=self.span_from(start))

    def assignment(self) -> n.Assign:
        start = self.tok.span.start
        name = self.expect("IDENT").lexeme
        indices = []
        while self.accept("LBRACKET"):
            indices.append(self.expr())
            self.expect("RBRACKET")
        self.expect("ASSIGN")
        value = self.expr()
        return n.Assign(name, tuple(indices), value, span=self.span_from(start))

    def loop_annotations(self):
        invariants, decreases = [], None
        while self.at("INVARIANT", "DECREASES"):
            t = self.advance()
            e = self.expr()
            self.expect("SEMI")
            if t.kind == "INVARIANT":
                invariants.append(e)
            elif decreases is not None:
                raise ParseError("a loop takes at most one decreases clause", e.span)
            else:
                decreases = e
        return tuple(invariants), decreases

    # -- expressions --------------------------------------------------------

    def expr(self) -> n.Expr:
        return self.iff()

    def iff(self) -> n.Expr:
        start = self.tok.span.start
        left = self.implies()
        while self.accept("IFF"):
            right = self.implies()
            left = n.Binary("⇔", left, right, span=self.span_from(start))
        return left

    def implies(self) -> n.Expr:
        start = self.tok.span.start
        left = self.disjunction()
        if self.accept("IMPLIES"):
            right = self.implies()
            return n.Binary("⇒", left, right, span=self.span_from(start))
        return left

    def disjunction(self) -> n.Expr:
        start = self.tok.span.start
        left = self.conjunction()
        while self.accept("OR"):
            right = self.conjunction()
            left = n.Binary("∨", left, right, span=self.span_from(start))
        return left

    def conjunction(self) -> n.Expr:
        start = self.tok.span.start
        left = self.comparison()
        while self.accept("AND"):
            right = self.comparison()
            left = n.Binary("∧", left, right, span=self.span_from(start))
        return left

    def comparison(self) -> n.Expr:
        start = self.tok.span.start
        left = self.additive()
        if self.tok.kind in _COMPARISONS:
            op = _COMPARISONS[self.advance().kind]
            right = self.additive()
            left = n.Binary(op, left, right, span=self.span_from(start))
            if self.tok.kind in _COMPARISONS:
                raise ParseError("comparisons do not chain; add parentheses", self.tok.span)
        return left

    def additive(self) -> n.Expr:
        start = self.tok.span.start
        left = self.multiplicative()
        while self.tok.kind in _ADDITIVE:
            op = _ADDITIVE[self.advance().kind]
            right = self.multiplicative()
            left = n.Binary(op, left, right, span=self.span_from(start))
        return left

    def multiplicative(self) -> n.Expr:
        start = self.tok.span.start
        left = self.unary()
        while self.tok.kind in _MULTIPLICATIVE:
            op = _MULTIPLICATIVE[self.advance().kind]
            right = self.unary()
            left = n.Binary(op, left, right, span=self.span_from(start))
        return left

    def unary(self, allow_update: bool = True) -> n.Expr:
        start = self.tok.span.start
        if self.accept("NOT"):
            return n.Unary("¬", self.unary(allow_update), span=self.span_from(start))
        if self.accept("MINUS"):
            return n.Unary("-", self.unary(allow_update), span=self.span_from(start))
        if self.at("FORALL", "EXISTS"):
            op = "∀" if self.advance().kind == "FORALL" else "∃"
            binders = [self.binder()]
            while self.accept("COMMA"):
                binders.append(self.binder())
            self.expect("DOT")
            body = self.expr()
            return n.Quant(op, tuple(binders), body, span=self.span_from(start))
        if self.accept("CHOOSE"):
            binder = self.binder()
            self.expect("WITH", "DOT")
            cond = self.expr()
            return n.Choose(binder, cond, span=self.span_from(start))
        if self.at("LET", "LETPAR"):
            cls = n.Let if self.advance().kind == "LET" else n.LetPar
            bindings = [self.binding()]
            while self.accept("COMMA"):
                bindings.append(self.binding())
            self.expect("IN")
            body = self.expr()
            return cls(tuple(bindings), body, span=self.span_from(start))
        if self.accept("IF"):
            cond = self.expr()
            self.expect("THEN")
            then = self.expr()
            self.expect("ELSE")
            orelse = self.expr()
            return n.IfExpr(cond, then, orelse, span=self.span_from(start))
        return self.postfix(allow_update)

    def binder(self) -> n.Binder:
        start = self.tok.span.start
        name = self.expect("IDENT").lexeme
        self.expect("COLON")
        return n.Binder(name, self.type_expr(), span=self.span_from(start))

    def binding(self) -> n.Binding:
        start = self.tok.span.start
        name = self.expect("IDENT").lexeme
        self.expect("EQ")
        return n.Binding(name, self.expr(), span=self.span_from(start))

    def postfix(self, allow_update: bool) -> n.Expr:
        start = self.tok.span.start
        e = self.primary()
        while True:
            if self.accept("LBRACKET"):
                idx = self.expr()
                self.expect("RBRACKET")
                e = n.Index(e, idx, span=self.span_from(start))
            elif self.at("DOT") and self.peek().kind == "NUMBER":
                self.advance()
                k = int(self.advance().lexeme)
                if k < 1:
                    raise ParseError("tuple components are numbered from 1", self.tokens[self.pos - 1].span)
                e = n.Proj(e, k, span=self.span_from(start))
            elif allow_update and self.accept("WITH"):
                self.expect("LBRACKET")
                idx = self.expr()
                self.expect("RBRACKET")
                self.expect("EQ")
                value = self.unary(allow_update=False)
                e = n.Update(e, idx, value, span=self.span_from(start))
            else:
                return e

    def primary(self) -> n.Expr:
        start = self.tok.span.start
        t = self.advance()
        if t.kind == "NUMBER":
            return n.IntLit(int(t.lexeme), span=t.span)
        if t.kind in ("TRUE", "FALSE"):
            return n.BoolLit(t.kind == "TRUE", span=t.span)
        if t.kind == "IDENT":
            if self.accept("LPAREN"):
                args = []
                if not self.at("RPAREN"):
                    args.append(self.expr())
                    while self.accept("COMMA"):
                        args.append(self.expr())
                self.expect("RPAREN")
                return n.Call(t.lexeme, tuple(args), span=self.span_from(start))
            return n.Var(t.lexeme, span=t.span)
        if t.kind == "LPAREN":
            e = self.expr()
            self.expect("RPAREN")
            return e
        if t.kind == "LANGLE":
            items = [self.expr()]
            while self.accept("COMMA"):
                items.append(self.expr())
            self.expect("RANGLE")
            return n.TupleExpr(tuple(items), span=self.span_from(start))
        if t.kind == "LBRACE":
            items = [self.expr()]
            while self.accept("COMMA"):
                items.append(self.expr())
            self.expect("RBRACE")
            return n.SetLit(tuple(items), span=self.span_from(start))
        if t.kind == "EMPTYSET":
            self.expect("LBRACKET")
            elem = self.type_expr()
            self.expect("RBRACKET")
            return n.EmptySet(elem, span=self.span_from(start))
        self.pos -= 1
        raise self.error({"NUMBER", "IDENT", "TRUE", "FALSE", "LPAREN", "LANGLE",
                          "LBRACE", "EMPTYSET", "NOT", "MINUS", "FORALL", "EXISTS",
                          "CHOOSE", "LET", "LETPAR", "IF"})


def _describe(kind: str) -> str:
    if kind in SYMBOLS:
        return repr(SYMBOLS[kind])
    return kind.lower()


def parse(tokens: Sequence[Token]) -> n.Spec:
    return Parser(tokens).parse_spec()


def _parse_whole(source: str, method: str):
    p = Parser(tokenize(source))
    node = getattr(p, method)()
    if not p.at(_EOF):
        raise p.error({_EOF})
    return node


def parse_source(source: str) -> n.Spec:
    return parse(tokenize(source))


def parse_expr(source: str) -> n.Expr:
    return _parse_whole(source, "expr")


def parse_type(source: str) -> n.TypeExpr:
    return _parse_whole(source, "type_expr")


def parse_command(source: str) -> n.Command:
    node = _parse_whole(source, "command")
    if node is None:
        return n.Seq(())
    return node
