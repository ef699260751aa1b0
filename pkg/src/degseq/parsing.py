"""Text format for maps and polynomials.

Grammar (position-tagged errors, 0-based offsets):

    map        := head components
    head       := ("P" | "A") integer
    components := "[" poly (":" poly)* "]"     for P, exactly dim+1 entries
                | "(" poly ("," poly)* ")"     for A, exactly dim entries
    poly       := term (("+" | "-") term)*
    term       := factor ("*" factor)*
    factor     := ("+" | "-") factor | atom ["^" integer]
    atom       := integer ["/" integer] | variable | "(" poly ")"

Multiplication is always explicit: "2x" and "x(y+1)" are syntax errors.
Projective variables are x0..xd, affine x1..xd; for dimension <= 3 the
aliases x, y, z name x1, x2, x3.  Projective literals must be homogeneous
of one common degree; they are reduced only when converted to a map, so
the expression keeps the text verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .maps import AffineEndomorphism, ProjectiveRationalMap, reduce_map
from .polynomials import Polynomial

EXPONENT_CAP = 10**6


class ParseError(ValueError):
    """Syntax or validation failure, carrying the 0-based text offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


_SINGLE = {
    "+": "PLUS",
    "-": "MINUS",
    "*": "STAR",
    "^": "CARET",
    "/": "SLASH",
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACKET",
    "]": "RBRACKET",
    ":": "COLON",
    ",": "COMMA",
}


def _tokenize(text: str) -> list:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
            continue
        kind = _SINGLE.get(ch)
        if kind is None:
            raise ParseError(f"unexpected character {ch!r}", i)
        tokens.append((kind, ch, i))
        i += 1
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables, field, aliases: dict | None = None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field
        self.nvars = len(variables)
        self.var_index = {name: i for i, name in enumerate(variables)}
        for alias, target in (aliases or {}).items():
            if target in self.var_index and alias not in self.var_index:
                self.var_index[alias] = self.var_index[target]

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.take()
        if tok[0] != kind:
            got = "end of input" if tok[0] == "END" else repr(tok[1])
            raise ParseError(f"expected {what}, found {got}", tok[2])
        return tok

    # --- polynomial grammar -------------------------------------------------

    def parse_poly(self) -> Polynomial:
        result = self.parse_term()
        while self.peek()[0] in ("PLUS", "MINUS"):
            op = self.take()
            rhs = self.parse_term()
            result = result + rhs if op[0] == "PLUS" else result - rhs
        return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while self.peek()[0] == "STAR":
            self.take()
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Polynomial:
        tok = self.peek()
        if tok[0] in ("PLUS", "MINUS"):
            self.take()
            inner = self.parse_factor()
            return -inner if tok[0] == "MINUS" else inner
        base = self.parse_atom()
        if self.peek()[0] == "CARET":
            self.take()
            etok = self.expect("INT", "an integer exponent")
            exponent = int(etok[1])
            if exponent > EXPONENT_CAP:
                raise ParseError(f"exponent {exponent} exceeds cap {EXPONENT_CAP}", etok[2])
            if self.peek()[0] == "CARET":
                raise ParseError("chained '^' is ambiguous; parenthesize", self.peek()[2])
            base = base**exponent
        return base

    def parse_atom(self) -> Polynomial:
        tok = self.take()
        if tok[0] == "INT":
            value = int(tok[1])
            if self.peek()[0] == "SLASH":
                self.take()
                dtok = self.expect("INT", "a denominator")
                denom = int(dtok[1])
                if denom == 0:
                    raise ParseError("zero denominator", dtok[2])
                return Polynomial.constant(self.field, self.nvars, Fraction(value, denom))
            return Polynomial.constant(self.field, self.nvars, value)
        if tok[0] == "NAME":
            index = self.var_index.get(tok[1])
            if index is None:
                names = ", ".join(sorted(self.var_index, key=self.var_index.get))
                raise ParseError(f"unknown variable {tok[1]!r} (have: {names})", tok[2])
            return Polynomial.variable(self.field, self.nvars, index)
        if tok[0] == "LPAREN":
            inner = self.parse_poly()
            self.expect("RPAREN", "')'")
            return inner
        got = "end of input" if tok[0] == "END" else repr(tok[1])
        raise ParseError(f"expected a literal, variable, or '(', found {got}", tok[2])


def parse_polynomial(text: str, variables, field) -> Polynomial:
    """Parse one polynomial over the given variable names."""
    if not variables:
        raise ValueError("variables must be nonempty")
    parser = _Parser(text, variables, field)
    poly = parser.parse_poly()
    tail = parser.peek()
    if tail[0] != "END":
        raise ParseError(f"unexpected {tail[1]!r} after expression", tail[2])
    return poly


def map_variables(kind: str, dim: int) -> tuple:
    if kind == "projective":
        return tuple(f"x{i}" for i in range(dim + 1))
    return tuple(f"x{i}" for i in range(1, dim + 1))


@dataclass(frozen=True)
class MapExpression:
    source_text: str
    kind: str  # "projective" | "affine"
    dim: int
    field: object
    components: tuple  # verbatim, pre-reduction


def parse_map(text: str, field) -> MapExpression:
    """Parse `P<d> [c0 : ... : cd]` or `A<d> (c1, ..., cd)`.

    Projective literals are validated homogeneous of one common degree here;
    reduction happens in expression_to_map so the expression stays verbatim.
    """
    tokens = _tokenize(text)
    head = tokens[0]
    if head[0] != "NAME" or not head[1][:1] in ("P", "A") or not head[1][1:].isdigit():
        raise ParseError("expected a map head like 'P2' or 'A3'", head[2])
    kind = "projective" if head[1][0] == "P" else "affine"
    dim = int(head[1][1:])
    if dim < 1:
        raise ParseError("map dimension must be at least 1", head[2])
    variables = map_variables(kind, dim)
    aliases = {"x": "x1", "y": "x2", "z": "x3"} if dim <= 3 else None
    want = dim + 1 if kind == "projective" else dim
    open_kind, close_kind, sep_kind, closer = (
        ("LBRACKET", "RBRACKET", "COLON", "']'")
        if kind == "projective"
        else ("LPAREN", "RPAREN", "COMMA", "')'")
    )

    parser = _Parser(text, variables, field, aliases)
    parser.pos = 1  # past the head
    parser.expect(open_kind, "'['" if kind == "projective" else "'('")
    components = [parser.parse_poly()]
    while parser.peek()[0] == sep_kind:
        parser.take()
        components.append(parser.parse_poly())
    parser.expect(close_kind, closer)
    tail = parser.peek()
    if tail[0] != "END":
        raise ParseError(f"unexpected {tail[1]!r} after map", tail[2])
    if len(components) != want:
        raise ParseError(
            f"{head[1]} needs {want} components, found {len(components)}", head[2]
        )

    if kind == "projective":
        degrees = set()
        for i, comp in enumerate(components):
            if comp.is_zero():
                continue
            if not comp.is_homogeneous():
                raise ParseError(f"component {i} is not homogeneous", head[2])
            degrees.add(comp.total_degree())
        if not degrees:
            raise ParseError("all components are zero", head[2])
        if len(degrees) > 1:
            lo, hi = min(degrees), max(degrees)
            raise ParseError(f"component degrees differ ({lo} vs {hi})", head[2])
    return MapExpression(text, kind, dim, field, tuple(components))


def expression_to_map(expr: MapExpression):
    """Build the reduced projective map or the affine endomorphism."""
    if expr.kind == "projective":
        return reduce_map(expr.components)[0]
    return AffineEndomorphism(expr.dim, expr.components)


def map_to_text(m) -> str:
    """Render a map in the exact format parse_map accepts."""
    if isinstance(m, ProjectiveRationalMap):
        names = map_variables("projective", m.dim)
        body = " : ".join(c.to_text(names) for c in m.components)
        return f"P{m.dim} [{body}]"
    if isinstance(m, AffineEndomorphism):
        names = map_variables("affine", m.dim)
        body = ", ".join(c.to_text(names) for c in m.components)
        return f"A{m.dim} ({body})"
    raise TypeError(f"not a map: {type(m).__name__}")
