"""Exception hierarchy shared by every stage of the checker."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open character range ``[start, end)`` into the source text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"inverted span {self.start}..{self.end}")

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def join(self, other: "Span") -> "Span":
        return Span(min(self.start, other.start), max(self.end, other.end))

    def line_col(self, source: str) -> tuple[int, int]:
        line = source.count("\n", 0, self.start) + 1
        col = self.start - (source.rfind("\n", 0, self.start) + 1) + 1
        return line, col


NO_SPAN = Span(0, 0)


class FinicheckError(Exception):
    """Base class; ``span`` locates the offending construct when known."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __reduce__(self):
        # keyword-only fields of subclasses survive pickling (worker processes)
        return (_rebuild, (type(self), self.args, self.__dict__))

    def render(self, source: str | None = None) -> str:
        if self.span is not None and source is not None:
            line, col = self.span.line_col(source)
            return f"{line}:{col}: {self.message}"
        return self.message


def _rebuild(cls, args, state):
    err = cls.__new__(cls)
    err.args = args
    err.__dict__.update(state)
    return err


# --- front end -------------------------------------------------------------

class LexError(FinicheckError):
    pass


class ParseError(FinicheckError):
    def __init__(self, message: str, span: Span | None = None, expected=()):
        super().__init__(message, span)
        self.expected = frozenset(expected)


# --- semantic analysis -----------------------------------------------------

class SemaError(FinicheckError):
    pass


class UnboundConstant(SemaError):
    def __init__(self, name: str, span: Span | None = None):
        super().__init__(f"constant {name} has no value; bind it with --const {name}=VALUE", span)
        self.name = name


class TypeCheckError(SemaError):
    pass


class EmptyInterval(SemaError):
    pass


class CarrierOverflow(SemaError):
    pass


# --- evaluation ------------------------------------------------------------

class EvalError(FinicheckError):
    """A runtime failure during evaluation; ``env`` holds the visible bindings."""

    kind = "error"

    def __init__(self, message: str, span: Span | None = None, env: dict | None = None):
        super().__init__(message, span)
        self.env = dict(env) if env else {}


class ChooseFailure(EvalError):
    kind = "choose failure"


class PreconditionViolation(EvalError):
    kind = "precondition violation"


class PostconditionViolation(EvalError):
    kind = "postcondition violation"


class InvariantViolation(EvalError):
    kind = "invariant violation"

    def __init__(self, message, span=None, env=None, *, which: int = 0, iteration: int = 0):
        super().__init__(message, span, env)
        self.which = which
        self.iteration = iteration


class MeasureNegative(EvalError):
    kind = "negative termination measure"

    def __init__(self, message, span=None, env=None, *, value: int = 0):
        super().__init__(message, span, env)
        self.value = value


class MeasureNotDecreased(EvalError):
    kind = "termination measure not decreased"

    def __init__(self, message, span=None, env=None, *, before: int = 0, after: int = 0):
        super().__init__(message, span, env)
        self.before = before
        self.after = after


class RangeViolation(EvalError):
    kind = "range violation"


class AssertionViolation(EvalError):
    kind = "assertion violation"


class TheoremViolation(EvalError):
    kind = "theorem is false"


class EvalTimeout(EvalError):
    kind = "timeout"


class UnsupportedConstruct(FinicheckError):
    pass
