"""S-expression reader with source positions, shared by the script parser,
the backend model parser and the oracle response decoder."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ParseError


@dataclass(frozen=True)
class Atom:
    text: str
    line: int = 0
    col: int = 0
    is_string: bool = False  # came from a "..." literal


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = 0
    col: int = 0

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


Sexpr = Union[Atom, SList]

_SYMBOL_EXTRA = set("~!@$%^&*_-+=<>.?/")


def _is_symbol_char(ch: str) -> bool:
    return ch.isalnum() or ch in _SYMBOL_EXTRA


def tokenize(text: str):
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield (ch, line, col, "paren")
            i += 1
            col += 1
        elif ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string literal", start_line, start_col)
                ch = text[i]
                if ch == '"':
                    if i + 1 < n and text[i + 1] == '"':
                        buf.append('"')
                        i += 2
                        col += 2
                        continue
                    i += 1
                    col += 1
                    break
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
                buf.append(ch)
                i += 1
            yield ("".join(buf), start_line, start_col, "string")
        elif ch == "|":
            start_line, start_col = line, col
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", start_line, start_col)
            sym = text[i + 1:j]
            col += j - i + 1
            i = j + 1
            yield (sym, start_line, start_col, "atom")
        elif _is_symbol_char(ch) or ch == "#":
            start_line, start_col = line, col
            j = i
            while j < n and (_is_symbol_char(text[j]) or text[j] == "#"):
                j += 1
            yield (text[i:j], start_line, start_col, "atom")
            col += j - i
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)


def read_all(text: str) -> list:
    """Read every top-level s-expression in text."""
    out = []
    stack = []
    for tok, line, col, kind in tokenize(text):
        if kind == "paren" and tok == "(":
            stack.append(([], line, col))
        elif kind == "paren" and tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            if stack:
                stack[-1][0].append(node)
            else:
                out.append(node)
        else:
            node = Atom(tok, line, col, is_string=(kind == "string"))
            if stack:
                stack[-1][0].append(node)
            else:
                out.append(node)
    if stack:
        _, line, col = stack[-1]
        raise ParseError("unbalanced '('", line, col)
    return out


def read_one(text: str) -> Sexpr:
    nodes = read_all(text)
    if len(nodes) != 1:
        raise ParseError(f"expected one s-expression, found {len(nodes)}")
    return nodes[0]
