"""
Token types and lexer for QHDL, the structural VHDL subset describing photonic circuits.

Identifiers are case-insensitive and normalized to lower case; "--" starts a comment running to the end of the line.
"""
from __future__ import annotations

import dataclasses
import typing
from enum import Enum, auto

import parsimonious
from parsimonious import Grammar
from parsimonious.exceptions import ParseError

from ezqhdl.errors import LexicalError, SourcePosition


class TokenType(Enum):
    # Literals
    IDENT = auto()
    NUMBER = auto()

    # Keywords
    KW_ENTITY = auto()
    KW_ARCHITECTURE = auto()
    KW_COMPONENT = auto()
    KW_SIGNAL = auto()
    KW_PORT = auto()
    KW_GENERIC = auto()
    KW_MAP = auto()
    KW_BEGIN = auto()
    KW_END = auto()
    KW_OF = auto()
    KW_IS = auto()
    KW_IN = auto()
    KW_OUT = auto()
    KW_FIELDMODE = auto()
    KW_REAL = auto()
    KW_COMPLEX = auto()
    KW_INT = auto()

    # Operators and delimiters
    LPAREN = auto()         # (
    RPAREN = auto()         # )
    SEMI = auto()           # ;
    COLON = auto()          # :
    COMMA = auto()          # ,
    COLON_EQ = auto()       # :=
    ARROW = auto()          # =>
    LE = auto()             # <= (signal assignment)
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    SLASH = auto()


@dataclasses.dataclass(frozen=True)
class Token:
    type: TokenType
    value: str
    line: int
    col: int

    def __repr__(self):
        return f"Token({self.type.name}, {self.value!r}, L{self.line}:{self.col})"


KEYWORDS: typing.Dict[str, TokenType] = {
    "entity": TokenType.KW_ENTITY,
    "architecture": TokenType.KW_ARCHITECTURE,
    "component": TokenType.KW_COMPONENT,
    "signal": TokenType.KW_SIGNAL,
    "port": TokenType.KW_PORT,
    "generic": TokenType.KW_GENERIC,
    "map": TokenType.KW_MAP,
    "begin": TokenType.KW_BEGIN,
    "end": TokenType.KW_END,
    "of": TokenType.KW_OF,
    "is": TokenType.KW_IS,
    "in": TokenType.KW_IN,
    "out": TokenType.KW_OUT,
    "fieldmode": TokenType.KW_FIELDMODE,
    "real": TokenType.KW_REAL,
    "complex": TokenType.KW_COMPLEX,
    "int": TokenType.KW_INT,
    "integer": TokenType.KW_INT,
}

_PUNCTUATION: typing.Dict[str, TokenType] = {
    ":=": TokenType.COLON_EQ,
    "=>": TokenType.ARROW,
    "<=": TokenType.LE,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    ";": TokenType.SEMI,
    ":": TokenType.COLON,
    ",": TokenType.COMMA,
    "+": TokenType.PLUS,
    "-": TokenType.MINUS,
    "*": TokenType.STAR,
    "/": TokenType.SLASH,
}


# lexical patterns shared by the token, expression and design grammars
NUMBER_PATTERN = r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?"
IDENTIFIER_PATTERN = r"[a-z][a-z0-9_]*"
SKIP_PATTERN = r"(?:\s+|--[^\n]*)*"
RESERVED_PATTERN = r"(?:" + "|".join(KEYWORDS) + r")\b"


class TokenGrammar:

    grammar = Grammar(
        rf"""
        tokens              = skip (token skip)*
        token               = number / word / punct

        number              = ~r"{NUMBER_PATTERN}"
        word                = ~r"{IDENTIFIER_PATTERN}"i
        punct               = ":=" / "=>" / "<=" / "(" / ")" / ";" / ":" / "," / "+" / "-" / "*" / "/"
        skip                = ~r"{SKIP_PATTERN}"
        """)


# noinspection PyMethodMayBeStatic
class TokenVisitor(parsimonious.NodeVisitor):

    def __init__(self, source: str):
        self.source = source

    def visit_tokens(self, node, visited_children):
        _, rest = visited_children
        return [token for token, _ in (rest if isinstance(rest, list) else [])]

    def visit_token(self, node, visited_children):
        return visited_children[0]

    def visit_number(self, node, visited_children):
        return self._token(TokenType.NUMBER, node.text, node.start)

    def visit_word(self, node, visited_children):
        lowered = node.text.lower()
        return self._token(KEYWORDS.get(lowered, TokenType.IDENT), lowered, node.start)

    def visit_punct(self, node, visited_children):
        return self._token(_PUNCTUATION[node.text], node.text, node.start)

    def _token(self, token_type: TokenType, value: str, offset: int) -> Token:
        position = SourcePosition.at(self.source, offset)
        return Token(token_type, value, position.line, position.col)

    def generic_visit(self, node, visited_children):
        return visited_children or node


def tokenize(source: str, file_name: str = "<input>") -> typing.List[Token]:
    """
    @param source: QHDL source text
    @param file_name: used in diagnostics only
    @return: tokens with 1-based line/column positions, comments and whitespace removed
    """
    try:
        syntax_tree = TokenGrammar.grammar.parse(source)
    except ParseError as e:
        raise LexicalError(f"unexpected character {source[e.pos]!r}",
                           SourcePosition(file_name, e.line(), e.column()))

    return TokenVisitor(source).visit(syntax_tree)


def token_at(source: str, offset: int) -> typing.Optional[str]:
    """
    @return: the text of the token starting at offset, lower case for words; None at end of input or
    when no token starts there
    """
    try:
        node = TokenGrammar.grammar["token"].match(source, offset)
    except ParseError:
        return None

    return node.text.lower()
