"""Reduction calculus on squares with two full rows and three full columns.

A symbol alpha not occurring in the top-left 2x3 corner meets each full line
exactly once, say P(j,1) = P(k,2) = P(l,3) = P(1,q) = P(2,r) = alpha.  A row
i >= 3 replaces alpha when substituting row i's entries for alpha keeps rows
j, k, l free of repeats; a column p >= 4 replaces alpha when the analogous
substitution keeps columns q, r repeat-free.  When some row replaces alpha
and some column replaces both alpha and itself, removing the replaced lines
and deleting row i, column p and symbol alpha shrinks the order by one: a
proper reduction.

Proper reductions exist (order >= 9) exactly while some cycle of the row
permutation has length >= 3 and two cyclically adjacent zeros in its band
sequence; squares without one are "completely reduced" and fall into nine
terminal cycle types.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (CycleType, LatinError, NotNormalForm, PartialLatinSquare,
                   cycle_type, normal_form_band, row_permutation)


class AlphaInCorner(LatinError):
    def __init__(self, symbol):
        super().__init__(f"symbol {symbol} occurs in the 2x3 corner")
        self.symbol = symbol


class InvalidStep(LatinError):
    pass


class IndexOutOfRange(LatinError):
    pass


class Unclassifiable(LatinError):
    pass


#: Terminal cycle-type sequences, in canonical (least-rotation) form.
COMPLETELY_REDUCED_SEQUENCES = frozenset(
    ("00", "01", "11", "011", "111", "0101", "0111", "01011", "010101"))


def _require_pls23(square: PartialLatinSquare) -> None:
    if normal_form_band(square) != 3:
        raise NotNormalForm("expected exactly three leading full columns")


@dataclass(frozen=True)
class LineComposition:
    """Replace position l of one line by the corresponding entry of another.

    kind "column": column ``target`` with the symbol in row l swapped for
    P(l, source); l must lie in the filled-row band (l <= 2).
    kind "row": row ``target`` with the symbol in column l swapped for
    P(source, l); l must lie in the filled-column band (l <= 3).
    """

    kind: str
    target: int
    source: int
    position: int


def compose(square: PartialLatinSquare, comp: LineComposition):
    """The composed line as a length-n tuple, plus whether it is Latin
    (no repeated symbols among its filled cells)."""
    _require_pls23(square)
    n = square.order
    if not (1 <= comp.target <= n and 1 <= comp.source <= n):
        raise IndexOutOfRange(f"line indices must lie in 1..{n}")
    if comp.kind == "column":
        if not 1 <= comp.position <= 2:
            raise IndexOutOfRange("column compositions replace a cell in rows 1..2")
        line = list(square.col_values(comp.target))
        line[comp.position - 1] = square.at(comp.position, comp.source)
    elif comp.kind == "row":
        if not 1 <= comp.position <= 3:
            raise IndexOutOfRange("row compositions replace a cell in columns 1..3")
        line = list(square.row_values(comp.target))
        line[comp.position - 1] = square.at(comp.source, comp.position)
    else:
        raise LatinError(f"unknown composition kind {comp.kind!r}")
    filled = [s for s in line if s is not None]
    return tuple(line), len(filled) == len(set(filled))


def _alpha_positions(square: PartialLatinSquare, alpha: int):
    """(j, k, l, q, r): rows of alpha in columns 1..3 and columns of alpha in
    rows 1..2.  Raises AlphaInCorner when alpha meets the 2x3 corner."""
    corner = {square.at(r, c) for r in (1, 2) for c in (1, 2, 3)}
    if alpha in corner:
        raise AlphaInCorner(alpha)
    j = k = l = q = r = None
    for i in range(1, square.order + 1):
        if square.at(i, 1) == alpha:
            j = i
        if square.at(i, 2) == alpha:
            k = i
        if square.at(i, 3) == alpha:
            l = i
        if square.at(1, i) == alpha:
            q = i
        if square.at(2, i) == alpha:
            r = i
    if None in (j, k, l, q, r):
        raise LatinError(f"symbol {alpha} is missing from a full line")
    return j, k, l, q, r


def _row_replaces(square, alpha, positions, i):
    j, k, l, _, _ = positions
    a1 = (square.at(i, 1), square.at(j, 2), square.at(j, 3))
    a2 = (square.at(k, 1), square.at(i, 2), square.at(k, 3))
    a3 = (square.at(l, 1), square.at(l, 2), square.at(i, 3))
    return (len(set(a1)) == 3 and len(set(a2)) == 3 and len(set(a3)) == 3)


def _col_replaces(square, alpha, positions, p):
    _, _, _, q, r = positions
    return (square.at(1, p) != square.at(2, q)
            and square.at(1, r) != square.at(2, p))


def find_replacements(square: PartialLatinSquare, alpha: int):
    """(rows replacing alpha, columns replacing alpha, self-replacing columns).

    Row candidates range over 3..n, column candidates over 4..n; a column in
    {q, r} that replaces alpha also replaces itself.
    """
    _require_pls23(square)
    positions = _alpha_positions(square, alpha)
    n = square.order
    rows = [i for i in range(3, n + 1) if _row_replaces(square, alpha, positions, i)]
    cols = [p for p in range(4, n + 1) if _col_replaces(square, alpha, positions, p)]
    q, r = positions[3], positions[4]
    self_cols = [p for p in cols if p in (q, r)]
    return rows, cols, self_cols


@dataclass(frozen=True)
class ReductionStep:
    """One replayable reduction: the symbol, the replacing row and column,
    the five replaced lines and the index/symbol collapse maps that
    normalise the result to order n-1."""

    alpha: int
    row: int                 # replacing row i
    col: int                 # replacing (self-replacing) column p
    lines: tuple             # (j, k, l, q, r)
    row_map: tuple = field(default=())   # old row -> new row, 0 = removed
    col_map: tuple = field(default=())
    sym_map: tuple = field(default=())

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "row": self.row, "col": self.col,
                "lines": list(self.lines), "row_map": list(self.row_map),
                "col_map": list(self.col_map), "sym_map": list(self.sym_map)}

    @staticmethod
    def from_json(data: dict) -> "ReductionStep":
        return ReductionStep(data["alpha"], data["row"], data["col"],
                             tuple(data["lines"]), tuple(data["row_map"]),
                             tuple(data["col_map"]), tuple(data["sym_map"]))


def _collapse_map(n: int, removed: int) -> tuple:
    """Order-preserving map 1..n -> 1..n-1 with ``removed`` dropped (-> 0)."""
    return tuple(0 if x == removed else (x if x < removed else x - 1)
                 for x in range(1, n + 1))


def plan_reduction(square: PartialLatinSquare, alpha: int,
                   row: int, col: int) -> ReductionStep:
    """Build the full step record for replacing ``alpha`` by ``row``/``col``,
    validating the replacement conditions."""
    _require_pls23(square)
    positions = _alpha_positions(square, alpha)
    n = square.order
    if not 3 <= row <= n:
        raise InvalidStep(f"replacing row {row} out of range")
    if not 4 <= col <= n:
        raise InvalidStep(f"replacing column {col} out of range")
    if not _row_replaces(square, alpha, positions, row):
        raise InvalidStep(f"row {row} does not replace symbol {alpha}")
    if not _col_replaces(square, alpha, positions, col):
        raise InvalidStep(f"column {col} does not replace symbol {alpha}")
    return ReductionStep(alpha, row, col, positions,
                         _collapse_map(n, row), _collapse_map(n, col),
                         _collapse_map(n, alpha) if square.symbols == tuple(range(1, n + 1))
                         else _symbol_collapse(square.symbols, alpha))


def _symbol_collapse(symbols, alpha) -> tuple:
    kept = [s for s in symbols if s != alpha]
    mapping = {s: i for i, s in enumerate(kept, start=1)}
    return tuple(0 if s == alpha else mapping[s] for s in symbols)


def apply_reduction(square: PartialLatinSquare, step: ReductionStep) -> PartialLatinSquare:
    """Perform the recorded surgery and return the order-(n-1) square.

    Rows j, k, l take the replacing row's entries in columns 1..3; rows 1, 2
    take the replacing column's entries at alpha's columns; then row i,
    column p and symbol alpha are removed and indices/symbols collapse
    order-preservingly.
    """
    _require_pls23(square)
    n = square.order
    j, k, l, q, r = step.lines
    i, p, alpha = step.row, step.col, step.alpha
    if square.at(j, 1) != alpha or square.at(k, 2) != alpha or square.at(l, 3) != alpha \
            or square.at(1, q) != alpha or square.at(2, r) != alpha:
        raise InvalidStep("recorded lines do not match the square")
    grid = [list(row) for row in square.rows]
    grid[j - 1][0] = square.at(i, 1)
    grid[k - 1][1] = square.at(i, 2)
    grid[l - 1][2] = square.at(i, 3)
    grid[0][q - 1] = square.at(1, p)
    grid[1][r - 1] = square.at(2, p)
    sym_of = {s: step.sym_map[idx] for idx, s in enumerate(square.symbols)}
    small = [[None] * (n - 1) for _ in range(n - 1)]
    for rr in range(1, n + 1):
        nr = step.row_map[rr - 1]
        if nr == 0:
            continue
        for cc in range(1, n + 1):
            nc = step.col_map[cc - 1]
            if nc == 0:
                continue
            s = grid[rr - 1][cc - 1]
            if s is not None:
                small[nr - 1][nc - 1] = sym_of[s]
    try:
        result = PartialLatinSquare(small)
    except LatinError as exc:
        raise InvalidStep(f"surgery produced an invalid square: {exc}") from exc
    if normal_form_band(result) != 3:
        raise InvalidStep("reduction left the two-row/three-column form")
    return result


def is_completely_reduced(square: PartialLatinSquare) -> bool:
    """True iff every cycle of the (1,2)-row-permutation has a band sequence
    rotation-equivalent to one of the nine terminal sequences."""
    _require_pls23(square)
    if square.order < 8:
        raise NotNormalForm("completely-reduced is defined for order >= 8")
    ct = cycle_type(square)
    return all(seq in COMPLETELY_REDUCED_SEQUENCES for seq, _ in ct.entries)


def proper_reduction(square: PartialLatinSquare) -> ReductionStep | None:
    """A proper reduction step, or None when the square is completely reduced.

    Deterministic choice: smallest eligible symbol, then smallest replacing
    row, then smallest self-replacing column.
    """
    _require_pls23(square)
    n = square.order
    if n < 9:
        raise NotNormalForm("proper reductions are defined for order >= 9")
    sigma = row_permutation(square, 1, 2)
    sigma_inv = {v: u for u, v in sigma.items()}
    band = {square.at(1, j) for j in (1, 2, 3)}
    for alpha in sorted(square.symbols):
        # alpha outside the corner = its own bit and its predecessor's are 0
        if alpha in band or sigma_inv[alpha] in band:
            continue
        if sigma[alpha] == sigma_inv[alpha]:
            continue  # two-cycle: no column can replace itself
        rows, _, self_cols = find_replacements(square, alpha)
        if rows and self_cols:
            return plan_reduction(square, alpha, rows[0], self_cols[0])
        # order >= 9 guarantees a replacing row for every corner-free symbol,
        # and adjacent zeros guarantee the self-replacing column
        raise LatinError(
            f"symbol {alpha} sits on adjacent zeros yet has no proper "
            f"reduction; this contradicts the replacement theory")
    return None


def successive_reduce(square: PartialLatinSquare):
    """Reduce until the square is completely reduced or has order 8.

    Returns (terminal square, list of ReductionStep).  Each step lowers the
    order by exactly one, so at most n - 8 iterations run.
    """
    _require_pls23(square)
    if square.order < 8:
        raise NotNormalForm("reduction operates on orders >= 8")
    trace = []
    current = square
    while current.order > 8:
        step = proper_reduction(current)
        if step is None:
            break
        trace.append(step)
        current = apply_reduction(current, step)
    return current, trace


#: Terminal classes: non-"00" part of the cycle type, and how the number of
#: "00" cycles relates to the reported parameter k.
_TERMINAL_CLASSES = (
    ("a", (("01", 3),), 0),
    ("b", (("01", 1), ("11", 1)), -1),
    ("c", (("01", 1), ("011", 1)), -1),
    ("d", (("01", 1), ("0101", 1)), 0),
    ("e", (("111", 1),), -2),
    ("f", (("0111", 1),), -1),
    ("g", (("01011", 1),), -1),
    ("h", (("010101", 1),), -1),
)


def classify_terminal(square: PartialLatinSquare):
    """Label a terminal square: ("order-8", None) for order 8, else one of
    ("a", k) .. ("h", k) according to its completely reduced cycle type."""
    _require_pls23(square)
    if square.order == 8:
        return ("order-8", None)
    ct = cycle_type(square)
    zeros = ct.multiplicity("00")
    rest = tuple(sorted((seq, mult) for seq, mult in ct.entries if seq != "00"))
    for label, pattern, offset in _TERMINAL_CLASSES:
        if rest == tuple(sorted(pattern)):
            k = zeros + offset
            if k >= 1:
                return (label, k)
    raise Unclassifiable(f"cycle type {ct} is not a terminal class")
