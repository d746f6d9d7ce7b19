"""Recursive-descent parser for the drone-control DSL.

The DSL is the Python-looking subset the code generator is allowed to emit:
assignments, list literals, +-*/ arithmetic, indexed reads, the six drone API
calls (with or without the ``aw.`` prefix), and counted ``for _ in range(...)``
loops.  Comments and blank lines are ignored; plain ``import`` lines are
accepted as an inert preamble before the first executable statement.

Anything else (conditionals, function definitions, ``from`` imports, while
loops, ...) is rejected with an UnsupportedConstructError naming the span, so
callers can hand the diagnostic back to the code generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .types import Span

# arity of each drone API call; queries return values, the rest are actions
API_SIGNATURES: dict[str, int] = {
    "takeoff": 0,
    "land": 0,
    "fly_to": 1,
    "set_yaw": 1,
    "get_yaw": 0,
    "get_drone_position": 0,
}

API_PREFIXES = ("aw",)

_UNSUPPORTED_KEYWORDS = {
    "from": "from-imports are not supported; use a plain import",
    "def": "function definitions are not supported",
    "if": "conditionals are not supported",
    "elif": "conditionals are not supported",
    "else": "conditionals are not supported",
    "while": "while loops are not supported; use a counted range loop",
    "return": "return statements are not supported",
    "with": "with blocks are not supported",
    "class": "class definitions are not supported",
    "lambda": "lambdas are not supported",
    "try": "exception handling is not supported",
    "except": "exception handling is not supported",
}


class DslError(Exception):
    """Base for parse-time diagnostics; carries a source span."""

    def __init__(self, message: str, span: Span):
        super().__init__(f"line {span.line}, col {span.col}: {message}")
        self.message = message
        self.span = span


class DslSyntaxError(DslError):
    def __init__(self, message: str, span: Span, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message} (expected {' or '.join(expected)})"
        super().__init__(message, span)
        self.expected = expected


class UnsupportedConstructError(DslError):
    pass


class ArityParseError(DslError):
    """A known API call written with the wrong number of arguments."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    span: Span


@dataclass(frozen=True)
class Num(Node):
    value: float | int


@dataclass(frozen=True)
class Name(Node):
    ident: str


@dataclass(frozen=True)
class ListLit(Node):
    items: tuple


@dataclass(frozen=True)
class Index(Node):
    base: Node
    index: Node


@dataclass(frozen=True)
class UnaryOp(Node):
    op: str
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    func: str  # dotted name as written, e.g. "aw.fly_to" or "get_yaw"
    args: tuple

    @property
    def api_name(self) -> str | None:
        """The bare API name if this call targets a known drone API."""
        parts = self.func.split(".")
        if len(parts) == 1 and parts[0] in API_SIGNATURES:
            return parts[0]
        if len(parts) == 2 and parts[0] in API_PREFIXES and parts[1] in API_SIGNATURES:
            return parts[1]
        return None


@dataclass(frozen=True)
class Assign(Node):
    name: str
    value: Node


@dataclass(frozen=True)
class ExprStmt(Node):
    expr: Node


@dataclass(frozen=True)
class For(Node):
    var: str
    range_args: tuple
    body: tuple


@dataclass(frozen=True)
class ImportStmt(Node):
    module: str
    alias: str | None = None


@dataclass(frozen=True)
class Program:
    statements: tuple
    source: str = field(default="", compare=False)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_SYMBOLS = {"=", "+", "-", "*", "/", "(", ")", "[", "]", ",", ".", ":"}


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NUMBER, OP, NEWLINE, INDENT, DEDENT, EOF
    value: str
    span: Span


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    for lineno, raw in enumerate(source.splitlines(), start=1):
        # strip comments outside strings (the DSL has no strings)
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.lstrip(" \t")
        indent = len(line) - len(stripped)
        if "\t" in line[: indent]:
            # normalize tabs to 4 columns for indent comparison
            indent = len(line[:indent].expandtabs(4))
        if indent > indents[-1]:
            indents.append(indent)
            tokens.append(Token("INDENT", "", Span(lineno, 0)))
        while indent < indents[-1]:
            indents.pop()
            tokens.append(Token("DEDENT", "", Span(lineno, 0)))
        if indent != indents[-1]:
            raise DslSyntaxError("inconsistent indentation", Span(lineno, indent))
        col = len(line) - len(stripped)
        i = 0
        text = stripped
        while i < len(text):
            ch = text[i]
            if ch in " \t":
                i += 1
                continue
            span = Span(lineno, col + i)
            if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
                j = i
                seen_dot = False
                while j < len(text) and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                    if text[j] == ".":
                        # a dot followed by a name is attribute access, not a float
                        if j + 1 < len(text) and not text[j + 1].isdigit():
                            break
                        seen_dot = True
                    j += 1
                tokens.append(Token("NUMBER", text[i:j], span))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(Token("NAME", text[i:j], span))
                i = j
                continue
            if ch in _SYMBOLS:
                tokens.append(Token("OP", ch, span))
                i += 1
                continue
            raise DslSyntaxError(f"unexpected character {ch!r}", span)
        tokens.append(Token("NEWLINE", "", Span(lineno, col + len(text))))
    last_line = source.count("\n") + 1
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token("DEDENT", "", Span(last_line, 0)))
    tokens.append(Token("EOF", "", Span(last_line, 0)))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.pos = 0
        self.source = source
        self.saw_executable = False

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def match(self, kind: str, value: str | None = None) -> Token | None:
        tok = self.peek()
        if tok.kind == kind and (value is None or tok.value == value):
            return self.advance()
        return None

    def expect(self, kind: str, value: str | None = None, expected: str = "") -> Token:
        tok = self.match(kind, value)
        if tok is None:
            got = self.peek()
            shown = got.value or got.kind
            raise DslSyntaxError(
                f"unexpected {shown!r}",
                got.span,
                expected=(expected or value or kind,),
            )
        return tok

    # -- grammar -----------------------------------------------------------

    def parse_program(self) -> Program:
        statements = []
        while self.peek().kind != "EOF":
            if self.match("NEWLINE"):
                continue
            statements.append(self.parse_statement())
        return Program(tuple(statements), source=self.source)

    def parse_statement(self) -> Node:
        tok = self.peek()
        if tok.kind == "NAME" and tok.value in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstructError(_UNSUPPORTED_KEYWORDS[tok.value], tok.span)
        if tok.kind == "NAME" and tok.value == "import":
            return self.parse_import()
        if tok.kind == "NAME" and tok.value == "for":
            self.saw_executable = True
            return self.parse_for()
        self.saw_executable = True
        return self.parse_simple()

    def parse_import(self) -> ImportStmt:
        start = self.expect("NAME", "import")
        if self.saw_executable:
            raise UnsupportedConstructError(
                "imports are only allowed in the preamble, before the first statement",
                start.span,
            )
        module = self.expect("NAME", expected="module name").value
        while self.match("OP", "."):
            module += "." + self.expect("NAME", expected="module name").value
        alias = None
        if self.match("NAME", "as"):
            alias = self.expect("NAME", expected="alias").value
        self.expect("NEWLINE", expected="end of line")
        return ImportStmt(span=start.span, module=module, alias=alias)

    def parse_for(self) -> For:
        start = self.expect("NAME", "for")
        var = self.expect("NAME", expected="loop variable").value
        self.expect("NAME", "in", expected="'in'")
        head = self.peek()
        iterable = self.parse_expression()
        if not (isinstance(iterable, Call) and iterable.func == "range"):
            raise UnsupportedConstructError(
                "only counted 'for _ in range(...)' loops are supported", head.span
            )
        if not 1 <= len(iterable.args) <= 3:
            raise ArityParseError(
                f"range takes 1 to 3 arguments; got {len(iterable.args)}", iterable.span
            )
        self.expect("OP", ":", expected="':'")
        self.expect("NEWLINE", expected="end of line")
        self.expect("INDENT", expected="an indented loop body")
        body = []
        while self.peek().kind not in ("DEDENT", "EOF"):
            if self.match("NEWLINE"):
                continue
            body.append(self.parse_statement())
        self.match("DEDENT")
        if not body:
            raise DslSyntaxError("empty loop body", start.span)
        return For(span=start.span, var=var, range_args=iterable.args, body=tuple(body))

    def parse_simple(self) -> Node:
        tok = self.peek()
        if tok.kind == "NAME" and self.peek(1).kind == "OP" and self.peek(1).value == "=":
            name = self.advance()
            self.advance()  # '='
            value = self.parse_expression()
            self.expect("NEWLINE", expected="end of line")
            return Assign(span=name.span, name=name.value, value=value)
        expr = self.parse_expression()
        self.expect("NEWLINE", expected="end of line")
        return ExprStmt(span=expr.span, expr=expr)

    def parse_expression(self) -> Node:
        return self.parse_arith()

    def parse_arith(self) -> Node:
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in ("+", "-"):
                self.advance()
                right = self.parse_term()
                node = BinOp(span=node.span, op=tok.value, left=node, right=right)
            else:
                return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in ("*", "/"):
                self.advance()
                right = self.parse_factor()
                node = BinOp(span=node.span, op=tok.value, left=node, right=right)
            else:
                return node

    def parse_factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "OP" and tok.value in ("+", "-"):
            self.advance()
            operand = self.parse_factor()
            return UnaryOp(span=tok.span, op=tok.value, operand=operand)
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        node = self.parse_atom()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value == "[":
                self.advance()
                index = self.parse_expression()
                self.expect("OP", "]", expected="']'")
                node = Index(span=node.span, base=node, index=index)
                continue
            if tok.kind == "OP" and tok.value == ".":
                if not isinstance(node, Name):
                    raise UnsupportedConstructError(
                        "attribute access is only supported on API module names", tok.span
                    )
                self.advance()
                attr = self.expect("NAME", expected="attribute name")
                dotted = f"{node.ident}.{attr.value}"
                self.expect("OP", "(", expected="'(' (API attributes must be called)")
                node = self.finish_call(dotted, node.span)
                continue
            if tok.kind == "OP" and tok.value == "(":
                if not isinstance(node, Name):
                    raise DslSyntaxError("only named functions can be called", tok.span)
                self.advance()
                node = self.finish_call(node.ident, node.span)
                continue
            return node

    def finish_call(self, func: str, span: Span) -> Call:
        args = []
        if not self.match("OP", ")"):
            args.append(self.parse_expression())
            while self.match("OP", ","):
                args.append(self.parse_expression())
            self.expect("OP", ")", expected="')'")
        call = Call(span=span, func=func, args=tuple(args))
        api = call.api_name
        if api is not None and len(args) != API_SIGNATURES[api]:
            if api == "fly_to":
                detail = "fly_to takes one 3-element list argument"
            else:
                detail = f"{api} takes {API_SIGNATURES[api]} argument(s)"
            raise ArityParseError(f"{detail}; got {len(args)}", span)
        return call

    def parse_atom(self) -> Node:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            value: float | int = float(tok.value) if "." in tok.value else int(tok.value)
            return Num(span=tok.span, value=value)
        if tok.kind == "NAME":
            if tok.value in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstructError(_UNSUPPORTED_KEYWORDS[tok.value], tok.span)
            self.advance()
            return Name(span=tok.span, ident=tok.value)
        if tok.kind == "OP" and tok.value == "[":
            self.advance()
            items = []
            if not self.match("OP", "]"):
                items.append(self.parse_expression())
                while self.match("OP", ","):
                    items.append(self.parse_expression())
                self.expect("OP", "]", expected="']'")
            return ListLit(span=tok.span, items=tuple(items))
        if tok.kind == "OP" and tok.value == "(":
            self.advance()
            inner = self.parse_expression()
            self.expect("OP", ")", expected="')'")
            return inner
        raise DslSyntaxError(
            f"unexpected {(tok.value or tok.kind)!r}",
            tok.span,
            expected=("a number", "a name", "a list literal"),
        )


def parse(source: str) -> Program:
    """Parse DSL source text into a Program, or raise a DslError diagnostic."""
    tokens = tokenize(source)
    return _Parser(tokens, source).parse_program()


# ---------------------------------------------------------------------------
# Unparser (used by the mutation operator and the CLI)
# ---------------------------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    if value == int(value) and abs(value) < 1e16:
        return f"{value:.1f}"
    return repr(value)


def _unparse_expr(node: Node, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, ListLit):
        return "[" + ", ".join(_unparse_expr(i) for i in node.items) + "]"
    if isinstance(node, Index):
        return f"{_unparse_expr(node.base, 9)}[{_unparse_expr(node.index)}]"
    if isinstance(node, UnaryOp):
        inner = _unparse_expr(node.operand, 3)
        return f"{node.op}{inner}"
    if isinstance(node, BinOp):
        prec = _PRECEDENCE[node.op]
        left = _unparse_expr(node.left, prec)
        right = _unparse_expr(node.right, prec, right_side=True)
        text = f"{left} {node.op} {right}"
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    if isinstance(node, Call):
        return f"{node.func}(" + ", ".join(_unparse_expr(a) for a in node.args) + ")"
    raise TypeError(f"cannot unparse {node!r}")


def _unparse_stmt(node: Node, indent: int, lines: list[str]) -> None:
    pad = "    " * indent
    if isinstance(node, Assign):
        lines.append(f"{pad}{node.name} = {_unparse_expr(node.value)}")
    elif isinstance(node, ExprStmt):
        lines.append(f"{pad}{_unparse_expr(node.expr)}")
    elif isinstance(node, For):
        args = ", ".join(_unparse_expr(a) for a in node.range_args)
        lines.append(f"{pad}for {node.var} in range({args}):")
        for stmt in node.body:
            _unparse_stmt(stmt, indent + 1, lines)
    elif isinstance(node, ImportStmt):
        if node.alias:
            lines.append(f"{pad}import {node.module} as {node.alias}")
        else:
            lines.append(f"{pad}import {node.module}")
    else:
        raise TypeError(f"cannot unparse {node!r}")


def unparse(program: Program) -> str:
    """Render a Program back to canonical DSL source text."""
    lines: list[str] = []
    for stmt in program.statements:
        _unparse_stmt(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")
