"""Text formats for squares: a human grid format and a JSON triple list.

Grid format: one line per row, whitespace-separated tokens, "." for an empty
cell.  The grid format assumes the symbol set 1..n; squares over other
symbol sets round-trip through JSON, which records the symbol set.

JSON format: {"n": 5, "cells": [[r, c, s], ...]} with 1-based coordinates,
plus an optional "symbols" list.
"""

from __future__ import annotations

import json

from .core import LatinError, PartialLatinSquare


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {col})" if col else ")")
        super().__init__(msg + where)
        self.line = line
        self.col = col


def parse_grid(text: str) -> PartialLatinSquare:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty grid")
    grid = []
    n = None
    for lineno, line in enumerate(lines, start=1):
        tokens = line.split()
        if n is None:
            n = len(tokens)
        if len(tokens) != n:
            raise ParseError(f"expected {n} tokens, found {len(tokens)}",
                             line=lineno)
        row = []
        for colno, tok in enumerate(tokens, start=1):
            if tok == ".":
                row.append(None)
            else:
                try:
                    row.append(int(tok))
                except ValueError:
                    raise ParseError(f"bad token {tok!r}", line=lineno,
                                     col=colno) from None
        grid.append(row)
    if len(grid) != n:
        raise ParseError(f"grid has {len(grid)} rows but {n} columns")
    try:
        return PartialLatinSquare(grid)
    except LatinError as exc:
        raise ParseError(str(exc)) from exc


def format_grid(square: PartialLatinSquare) -> str:
    n = square.order
    if square.symbols != tuple(range(1, n + 1)):
        raise LatinError("grid format assumes the symbol set 1..n; "
                         "use JSON for other symbol sets")
    width = len(str(n))
    lines = []
    for row in square.rows:
        lines.append(" ".join(("." if s is None else str(s)).rjust(width)
                              for s in row))
    return "\n".join(lines) + "\n"


def parse_json(text: str) -> PartialLatinSquare:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc.msg}", line=exc.lineno,
                         col=exc.colno) from None
    if not isinstance(data, dict) or "n" not in data or "cells" not in data:
        raise ParseError('JSON square needs keys "n" and "cells"')
    try:
        return PartialLatinSquare.from_triples(
            data["n"], [tuple(cell) for cell in data["cells"]],
            symbols=data.get("symbols"))
    except (LatinError, TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def format_json(square: PartialLatinSquare) -> str:
    payload = {"n": square.order,
               "cells": [list(t) for t in square.triples()]}
    if square.symbols != tuple(range(1, square.order + 1)):
        payload["symbols"] = list(square.symbols)
    return json.dumps(payload)


def parse_square(text: str) -> PartialLatinSquare:
    """Sniff the format: JSON if the first non-space character is '{'."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_json(text)
    return parse_grid(text)


def load_square(path: str) -> PartialLatinSquare:
    with open(path) as fh:
        return parse_square(fh.read())
