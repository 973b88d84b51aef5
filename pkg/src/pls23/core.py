"""Core model: partial Latin squares, conjugates, isotopies, intercalates,
staircase diagonals and cycle types.

Conventions used throughout the package:

- Rows, columns and symbols are 1-based.
- A square of order n may use any n distinct integers as its symbol set
  (the "universe").  The default universe is 1..n.
- ``PartialLatinSquare`` values are immutable; every mutating operation
  returns a new square.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class LatinError(ValueError):
    """Base class for all structural errors raised by this package."""


class BadShape(LatinError):
    pass


class DuplicateInRow(LatinError):
    def __init__(self, row: int, symbol: int):
        super().__init__(f"symbol {symbol} occurs twice in row {row}")
        self.row = row
        self.symbol = symbol


class DuplicateInColumn(LatinError):
    def __init__(self, col: int, symbol: int):
        super().__init__(f"symbol {symbol} occurs twice in column {col}")
        self.col = col
        self.symbol = symbol


class SymbolNotInUniverse(LatinError):
    def __init__(self, symbol):
        super().__init__(f"symbol {symbol!r} is not in the square's symbol set")
        self.symbol = symbol


class PermutationSizeMismatch(LatinError):
    pass


class RowNotFull(LatinError):
    def __init__(self, row: int):
        super().__init__(f"row {row} is not completely filled")
        self.row = row


class NotNormalForm(LatinError):
    pass


class OrderTooSmall(LatinError):
    pass


class NotAnIntercalate(LatinError):
    pass


class PartialLatinSquare:
    """An n x n array where each cell is empty or holds a symbol, and no
    symbol repeats within a row or column.

    ``rows`` is a tuple of n tuples; empty cells are ``None``.  ``symbols``
    is the sorted tuple of the n admissible symbols.
    """

    __slots__ = ("rows", "symbols", "_hash")

    def __init__(self, rows, symbols=None):
        rows = tuple(tuple(row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise BadShape(f"expected a square grid, got row lengths "
                           f"{[len(r) for r in rows]}")
        if symbols is None:
            universe = frozenset(range(1, n + 1))
            symbols = tuple(range(1, n + 1))
        else:
            symbols = tuple(sorted(symbols))
            if len(symbols) != n or len(set(symbols)) != n:
                raise BadShape(f"symbol set must have exactly {n} distinct "
                               f"members, got {symbols}")
            universe = frozenset(symbols)
        for r in range(n):
            seen = set()
            for s in rows[r]:
                if s is None:
                    continue
                if not isinstance(s, int) or isinstance(s, bool):
                    raise BadShape(f"cell entries must be integers, got {s!r}")
                if s not in universe:
                    raise SymbolNotInUniverse(s)
                if s in seen:
                    raise DuplicateInRow(r + 1, s)
                seen.add(s)
        for c in range(n):
            seen = set()
            for r in range(n):
                s = rows[r][c]
                if s is None:
                    continue
                if s in seen:
                    raise DuplicateInColumn(c + 1, s)
                seen.add(s)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _wrap(cls, rows, symbols) -> "PartialLatinSquare":
        """Fast constructor for grids already known to be valid."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "symbols", symbols)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def empty(cls, n: int, symbols=None) -> "PartialLatinSquare":
        if n < 1:
            raise BadShape("order must be positive")
        rows = tuple((None,) * n for _ in range(n))
        if symbols is None:
            return cls._wrap(rows, tuple(range(1, n + 1)))
        return cls(rows, symbols)

    @classmethod
    def from_triples(cls, n: int, triples, symbols=None) -> "PartialLatinSquare":
        grid = [[None] * n for _ in range(n)]
        for r, c, s in triples:
            if not (1 <= r <= n and 1 <= c <= n):
                raise BadShape(f"cell ({r},{c}) outside an order-{n} square")
            if grid[r - 1][c - 1] is not None and grid[r - 1][c - 1] != s:
                raise BadShape(f"cell ({r},{c}) assigned twice")
            grid[r - 1][c - 1] = s
        return cls(grid, symbols)

    def __setattr__(self, name, value):
        raise AttributeError("PartialLatinSquare is immutable")

    def __eq__(self, other):
        if not isinstance(other, PartialLatinSquare):
            return NotImplemented
        return self.rows == other.rows and self.symbols == other.symbols

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.symbols))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"PartialLatinSquare(order={self.order}, filled={self.filled_count()})"

    def __str__(self):
        width = max(len(str(s)) for s in self.symbols)
        lines = []
        for row in self.rows:
            lines.append(" ".join("." .rjust(width) if s is None else str(s).rjust(width)
                                  for s in row))
        return "\n".join(lines)

    @property
    def order(self) -> int:
        return len(self.rows)

    def at(self, r: int, c: int):
        """Symbol at 1-based cell (r, c), or None."""
        return self.rows[r - 1][c - 1]

    def set(self, r: int, c: int, s: int) -> "PartialLatinSquare":
        """Return a copy with cell (r, c) set to s.  The cell must be empty
        (or already hold s)."""
        cur = self.rows[r - 1][c - 1]
        if cur == s:
            return self
        if cur is not None:
            raise BadShape(f"cell ({r},{c}) already holds {cur}")
        grid = [list(row) for row in self.rows]
        grid[r - 1][c - 1] = s
        return PartialLatinSquare(grid, self.symbols)

    def set_many(self, triples) -> "PartialLatinSquare":
        grid = [list(row) for row in self.rows]
        for r, c, s in triples:
            cur = grid[r - 1][c - 1]
            if cur is not None and cur != s:
                raise BadShape(f"cell ({r},{c}) already holds {cur}")
            grid[r - 1][c - 1] = s
        return PartialLatinSquare(grid, self.symbols)

    def triples(self):
        """Iterate over the filled cells as (row, column, symbol)."""
        for r, row in enumerate(self.rows, start=1):
            for c, s in enumerate(row, start=1):
                if s is not None:
                    yield (r, c, s)

    def filled_count(self) -> int:
        return sum(1 for row in self.rows for s in row if s is not None)

    def is_complete(self) -> bool:
        return all(s is not None for row in self.rows for s in row)

    def extends(self, other: "PartialLatinSquare") -> bool:
        """True if every filled cell of ``other`` holds the same symbol here."""
        if self.order != other.order:
            return False
        return all(self.rows[r - 1][c - 1] == s for r, c, s in other.triples())

    def row_values(self, r: int):
        return self.rows[r - 1]

    def col_values(self, c: int):
        return tuple(row[c - 1] for row in self.rows)

    def row_is_full(self, r: int) -> bool:
        return all(s is not None for s in self.rows[r - 1])

    def col_is_full(self, c: int) -> bool:
        return all(row[c - 1] is not None for row in self.rows)


def validate(grid, symbols=None) -> PartialLatinSquare:
    """Check a raw grid and return it as a PartialLatinSquare.

    Raises BadShape, DuplicateInRow, DuplicateInColumn or
    SymbolNotInUniverse identifying the first violation.
    """
    return PartialLatinSquare(grid, symbols)


# --- conjugates -------------------------------------------------------------

#: The six uniform permutations of the (row, column, symbol) coordinates.
#: Tag "crs" means a triple (r, c, s) is rewritten as (c, r, s), and so on.
CONJUGATE_KINDS = ("rcs", "crs", "scr", "csr", "rsc", "src")

_COORD = {"r": 0, "c": 1, "s": 2}
_CONJ_PERM = {tag: tuple(_COORD[ch] for ch in tag) for tag in CONJUGATE_KINDS}


def conjugate(square: PartialLatinSquare, kind: str) -> PartialLatinSquare:
    """Apply one of the six coordinate permutations to every triple.

    Requires the symbol set to be 1..n, since symbols trade places with
    row/column indices.
    """
    if kind not in _CONJ_PERM:
        raise LatinError(f"unknown conjugate kind {kind!r}")
    n = square.order
    if square.symbols != tuple(range(1, n + 1)):
        raise LatinError("conjugation requires the symbol set 1..n")
    perm = _CONJ_PERM[kind]
    grid = [[None] * n for _ in range(n)]
    for triple in square.triples():
        r2, c2, s2 = triple[perm[0]], triple[perm[1]], triple[perm[2]]
        grid[r2 - 1][c2 - 1] = s2
    return PartialLatinSquare(grid)


def compose_conjugates(second: str, first: str) -> str:
    """Tag equivalent to applying ``first`` and then ``second``."""
    p1, p2 = _CONJ_PERM[first], _CONJ_PERM[second]
    combined = tuple(p1[p2[i]] for i in range(3))
    for tag, perm in _CONJ_PERM.items():
        if perm == combined:
            return tag
    raise AssertionError("coordinate permutations are closed under composition")


# --- isotopies ---------------------------------------------------------------

@dataclass(frozen=True)
class Isotopy:
    """Independent permutations of rows, columns and symbols of [n].

    Each component is a tuple p of length n with p[i-1] = image of i.
    """

    row_perm: tuple
    col_perm: tuple
    sym_perm: tuple

    @staticmethod
    def identity(n: int) -> "Isotopy":
        ident = tuple(range(1, n + 1))
        return Isotopy(ident, ident, ident)

    def inverse(self) -> "Isotopy":
        def inv(p):
            out = [0] * len(p)
            for i, v in enumerate(p, start=1):
                out[v - 1] = i
            return tuple(out)
        return Isotopy(inv(self.row_perm), inv(self.col_perm), inv(self.sym_perm))


def _check_perm(p, n, what):
    if len(p) != n or sorted(p) != list(range(1, n + 1)):
        raise PermutationSizeMismatch(f"{what} is not a permutation of 1..{n}")


def apply_isotopy(square: PartialLatinSquare, iso: Isotopy) -> PartialLatinSquare:
    """Map each filled cell (r, c, s) to (row_perm(r), col_perm(c), sym_perm(s))."""
    n = square.order
    _check_perm(iso.row_perm, n, "row permutation")
    _check_perm(iso.col_perm, n, "column permutation")
    _check_perm(iso.sym_perm, n, "symbol permutation")
    if square.symbols != tuple(range(1, n + 1)):
        raise LatinError("isotopies act on squares with symbol set 1..n; "
                         "use relabel_symbols for other symbol sets")
    grid = [[None] * n for _ in range(n)]
    rp, cp, sp = iso.row_perm, iso.col_perm, iso.sym_perm
    for r, c, s in square.triples():
        grid[rp[r - 1] - 1][cp[c - 1] - 1] = sp[s - 1]
    return PartialLatinSquare(grid)


def relabel_symbols(square: PartialLatinSquare, mapping: dict) -> PartialLatinSquare:
    """Rename symbols through a bijection given as a dict.

    Symbols absent from the mapping are kept; the resulting symbol set must
    again consist of distinct values.
    """
    new_symbols = [mapping.get(s, s) for s in square.symbols]
    grid = [[None if s is None else mapping.get(s, s) for s in row]
            for row in square.rows]
    return PartialLatinSquare(grid, new_symbols)


# --- intercalates ------------------------------------------------------------

@dataclass(frozen=True)
class Intercalate:
    """Four filled cells on two rows and two columns carrying two symbols in
    the swap-ready pattern: (r1,c1)=(r2,c2)=s1 and (r1,c2)=(r2,c1)=s2."""

    rows: tuple
    cols: tuple
    syms: tuple


def _intercalate_at(square, r1, r2, c1, c2):
    a = square.at(r1, c1)
    b = square.at(r1, c2)
    if a is None or b is None or a == b:
        return None
    if square.at(r2, c2) == a and square.at(r2, c1) == b:
        return Intercalate((r1, r2), (c1, c2), (a, b))
    return None


def find_intercalates(square: PartialLatinSquare) -> list:
    """All intercalates, canonically oriented (r1<r2, c1<c2, s1 at (r1,c1))."""
    n = square.order
    found = []
    for r1, r2 in itertools.combinations(range(1, n + 1), 2):
        # map ordered symbol pairs to the columns where they appear
        pair_cols = {}
        for c in range(1, n + 1):
            a, b = square.at(r1, c), square.at(r2, c)
            if a is not None and b is not None:
                pair_cols.setdefault((a, b), []).append(c)
        for (a, b), cols in pair_cols.items():
            if a >= b:
                continue
            for c1 in cols:
                for c2 in pair_cols.get((b, a), ()):
                    if c1 < c2:
                        found.append(Intercalate((r1, r2), (c1, c2), (a, b)))
                    elif c2 < c1:
                        found.append(Intercalate((r1, r2), (c2, c1), (b, a)))
    found.sort(key=lambda ic: (ic.rows, ic.cols))
    return found


def swap_intercalate(square: PartialLatinSquare, ic: Intercalate) -> PartialLatinSquare:
    """Exchange the two symbols on the four cells of an intercalate."""
    (r1, r2), (c1, c2), (s1, s2) = ic.rows, ic.cols, ic.syms
    if r1 == r2 or c1 == c2 or s1 == s2:
        raise NotAnIntercalate("degenerate cell/symbol pattern")
    if not (square.at(r1, c1) == square.at(r2, c2) == s1
            and square.at(r1, c2) == square.at(r2, c1) == s2):
        raise NotAnIntercalate(f"cells {ic} do not form an intercalate here")
    grid = [list(row) for row in square.rows]
    grid[r1 - 1][c1 - 1] = s2
    grid[r2 - 1][c2 - 1] = s2
    grid[r1 - 1][c2 - 1] = s1
    grid[r2 - 1][c1 - 1] = s1
    return PartialLatinSquare(grid, square.symbols)


# --- row permutations and cycle types ----------------------------------------

def row_permutation(square: PartialLatinSquare, r1: int, r2: int) -> dict:
    """The bijection sigma on the symbol set with sigma(P(r1,i)) = P(r2,i).

    Both rows must be completely filled.
    """
    if not square.row_is_full(r1):
        raise RowNotFull(r1)
    if not square.row_is_full(r2):
        raise RowNotFull(r2)
    return {square.at(r1, i): square.at(r2, i) for i in range(1, square.order + 1)}


def canonical_rotation(seq: str) -> str:
    """Lexicographically least cyclic rotation of a bit sequence."""
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


@dataclass(frozen=True)
class CycleType:
    """Multiset of (bit sequence up to rotation, multiplicity) pairs.

    Bit i of a cycle's sequence records whether the i-th symbol of the cycle
    occurs in the top-left 1 x b band of the square.  Sequences are stored
    in their least rotation so equality is structural.
    """

    entries: tuple  # sorted tuple of (sequence, multiplicity)

    @staticmethod
    def of(pairs) -> "CycleType":
        counts = {}
        for seq, mult in pairs:
            if mult == 0:
                continue
            canon = canonical_rotation(seq)
            counts[canon] = counts.get(canon, 0) + mult
        return CycleType(tuple(sorted(counts.items())))

    @property
    def total_length(self) -> int:
        return sum(len(seq) * mult for seq, mult in self.entries)

    def multiplicity(self, seq: str) -> int:
        canon = canonical_rotation(seq)
        for s, m in self.entries:
            if s == canon:
                return m
        return 0

    def __str__(self):
        inner = ", ".join(f"({seq},{mult})" for seq, mult in self.entries)
        return "{" + inner + "}"


def normal_form_band(square: PartialLatinSquare) -> int:
    """Number b of leading full columns of a square whose only filled cells
    are rows 1..2 and columns 1..b.  Raises NotNormalForm otherwise."""
    n = square.order
    if not (square.row_is_full(1) and square.row_is_full(2)):
        raise NotNormalForm("rows 1 and 2 must be completely filled")
    b = 0
    while b < n and square.col_is_full(b + 1):
        b += 1
    for r in range(3, n + 1):
        for c in range(b + 1, n + 1):
            if square.at(r, c) is not None:
                raise NotNormalForm(
                    f"cell ({r},{c}) is filled outside the first two rows "
                    f"and first {b} columns")
    return b


def cycle_type(square: PartialLatinSquare, b: int | None = None) -> CycleType:
    """Cycle type of the (1,2)-row-permutation against the top-left 1 x b band.

    With b omitted it is inferred as the number of leading full columns;
    the square must have all filled cells in rows 1..2 and columns 1..b.
    """
    inferred = normal_form_band(square)
    if b is None:
        b = inferred
    elif b != inferred:
        raise NotNormalForm(f"square has {inferred} leading full columns, not {b}")
    sigma = row_permutation(square, 1, 2)
    band = {square.at(1, j) for j in range(1, b + 1)}
    seen = set()
    pairs = []
    for start in sorted(sigma):
        if start in seen:
            continue
        bits = []
        x = start
        while x not in seen:
            seen.add(x)
            bits.append("1" if x in band else "0")
            x = sigma[x]
        pairs.append(("".join(bits), 1))
    return CycleType.of(pairs)


# --- staircase diagonals ------------------------------------------------------

FORWARD = "forward"
AUGMENTED = "augmented-forward"


@dataclass(frozen=True)
class DiagonalSpec:
    """A staircase of cells splitting the square into a lower-left region
    ("below"), the staircase itself, and an upper-right region ("above").

    kind "forward" is the main diagonal.  kind "augmented-forward" is the
    two-new-symbol staircase used by the double lift: for odd n it consists
    of (i,i) for even i >= 4 together with (1,1), (2,1), (3,2), (3,3); for
    even n it is the union of 2x2 blocks anchored at (i,i) for odd i.
    """

    kind: str
    n: int
    cells: frozenset

    def _boundary(self, r: int) -> int:
        # cells (r, c) with c < boundary(r) lie below the staircase
        if self.kind == FORWARD:
            return r
        if self.n % 2 == 1:
            if r <= 2:
                return 1
            if r == 3:
                return 2
            return r if r % 2 == 0 else r - 1
        return r if r % 2 == 1 else r - 1

    def below(self, cell) -> bool:
        r, c = cell
        return cell not in self.cells and c < self._boundary(r)

    def above(self, cell) -> bool:
        r, c = cell
        return cell not in self.cells and c >= self._boundary(r)


def diagonal(kind: str, n: int) -> DiagonalSpec:
    if kind == FORWARD:
        if n < 3:
            raise OrderTooSmall("forward diagonal is defined for n >= 3")
        cells = frozenset((i, i) for i in range(1, n + 1))
    elif kind == AUGMENTED:
        if n < 5:
            raise OrderTooSmall("augmented forward diagonal is defined for n >= 5")
        if n % 2 == 1:
            cells = {(i, i) for i in range(4, n, 2)}
            cells |= {(1, 1), (2, 1), (3, 2), (3, 3)}
        else:
            cells = set()
            for i in range(1, n, 2):
                cells |= {(i, i), (i, i + 1), (i + 1, i), (i + 1, i + 1)}
        cells = frozenset(cells)
    else:
        raise LatinError(f"unknown diagonal kind {kind!r}")
    return DiagonalSpec(kind, n, cells)
