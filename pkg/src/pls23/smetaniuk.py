"""Smetaniuk-style lifts: the single lift T(P) of order n+1 and the double
lift T^2(P) of order n+2 with its augmented staircase of two new symbols.

The double lift keeps P's content shifted down two rows wherever it lands
below the staircase, places the two new symbols on the staircase, and leaves
everything above empty.  A completion of the lift of a completable square
always exists; ``smetaniuk_complete_t2`` produces one by constrained exact
search and guarantees, where the hypotheses apply, the two extra properties
downstream code relies on:

- row recovery: for odd n and a full base square P whose symbols
  {P(1,2), P(1,3)} avoid {P(2,4), P(2,5), P(3,4), P(3,5)}, the completion L
  has L(3,4) = P(1,4) and L(3,5) = P(1,5);
- intercalate transfer: if additionally cells (2,4),(2,5),(3,4),(3,5) of P
  form an intercalate, then cells (1,4),(1,5),(2,4),(2,5) of L form an
  intercalate on the same two symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (AUGMENTED, DiagonalSpec, LatinError, PartialLatinSquare,
                   diagonal)
from .solver import (BudgetExceeded, CellConstraint, complete_with_constraints,
                     is_completable)


class InvalidDiagonalFill(LatinError):
    pass


class NotCompletable(LatinError):
    pass


class ObservationUnsatisfiable(LatinError):
    """No completion satisfies the guaranteed properties; treated as a bug."""


def t_construct(square: PartialLatinSquare,
                new_symbol: int | None = None) -> PartialLatinSquare:
    """Single lift: below-diagonal content of P moves down one row, and a new
    symbol fills the whole forward diagonal.  Cells above the diagonal of the
    result are empty."""
    n = square.order
    if new_symbol is None:
        new_symbol = max(square.symbols) + 1
    elif new_symbol in square.symbols:
        raise LatinError(f"new symbol {new_symbol} already used by the square")
    m = n + 1
    grid = [[None] * m for _ in range(m)]
    for r, c, s in square.triples():
        if c < r:
            grid[r][c - 1] = s  # (r+1, c) in 1-based terms
    for i in range(m):
        grid[i][i] = new_symbol
    return PartialLatinSquare(grid, tuple(square.symbols) + (new_symbol,))


def default_diagonal_fill(spec: DiagonalSpec, a: int, b: int) -> dict:
    """A canonical valid assignment of the two new symbols to the staircase."""
    fill = {}
    if spec.n % 2 == 1:
        fill[(1, 1)] = a
        fill[(2, 1)] = b
        fill[(3, 2)] = b
        fill[(3, 3)] = a
        for i in range(4, spec.n, 2):
            fill[(i, i)] = a
    else:
        for i in range(1, spec.n, 2):
            fill[(i, i)] = a
            fill[(i, i + 1)] = b
            fill[(i + 1, i)] = b
            fill[(i + 1, i + 1)] = a
    return fill


@dataclass(frozen=True)
class T2Square:
    """A double lift: base square, lifted order-(n+2) square, the staircase
    and the pair of new symbols it carries."""

    base: PartialLatinSquare
    lifted: PartialLatinSquare
    spec: DiagonalSpec
    new_symbols: tuple


def t2_construct(square: PartialLatinSquare,
                 new_symbols: tuple | None = None,
                 diagonal_fill: dict | None = None) -> T2Square:
    """Double lift of ``square``.

    ``diagonal_fill`` maps every staircase cell of the order-(n+2) square to
    one of the two new symbols; omitted, a canonical fill is used.  The fill
    must itself be free of row/column repeats.
    """
    n = square.order
    m = n + 2
    if new_symbols is None:
        hi = max(square.symbols)
        new_symbols = (hi + 1, hi + 2)
    a, b = new_symbols
    if a == b or a in square.symbols or b in square.symbols:
        raise LatinError(f"new symbols {new_symbols} must be two fresh values")
    spec = diagonal(AUGMENTED, m)
    if diagonal_fill is None:
        diagonal_fill = default_diagonal_fill(spec, a, b)
    if set(diagonal_fill) != set(spec.cells):
        raise InvalidDiagonalFill("fill must assign exactly the staircase cells")
    if not set(diagonal_fill.values()) <= {a, b}:
        raise InvalidDiagonalFill(f"fill symbols must be drawn from {new_symbols}")
    grid = [[None] * m for _ in range(m)]
    for r, c, s in square.triples():
        if spec.below((r + 2, c)):
            grid[r + 1][c - 1] = s
    for (r, c), s in diagonal_fill.items():
        if grid[r - 1][c - 1] is not None:
            raise InvalidDiagonalFill(f"staircase cell ({r},{c}) collides with content")
        grid[r - 1][c - 1] = s
    try:
        lifted = PartialLatinSquare(grid, tuple(square.symbols) + (a, b))
    except LatinError as exc:
        raise InvalidDiagonalFill(str(exc)) from exc
    return T2Square(square, lifted, spec, new_symbols)


def _row_recovery_hypothesis(base: PartialLatinSquare) -> bool:
    if base.order % 2 == 0 or not base.is_complete():
        return False
    head = {base.at(1, 2), base.at(1, 3)}
    block = {base.at(2, 4), base.at(2, 5), base.at(3, 4), base.at(3, 5)}
    return not (head & block)


def _base_block_intercalate(base: PartialLatinSquare):
    """The symbol pair (x, y) when cells (2,4),(2,5),(3,4),(3,5) of the base
    form an intercalate, else None."""
    x, y = base.at(2, 4), base.at(2, 5)
    if x is None or y is None or x == y:
        return None
    if base.at(3, 5) == x and base.at(3, 4) == y:
        return (x, y)
    return None


def smetaniuk_complete_t2(t2: T2Square,
                          forced: dict | None = None,
                          budget: int | None = None,
                          verify_base: bool = False) -> PartialLatinSquare:
    """Complete the lifted square so that the guaranteed properties hold.

    ``forced`` may pin additional cells (used by the constructive pipeline);
    with extra pins the row-recovery and intercalate constraints are applied
    opportunistically and dropped if they conflict with the pins.  Without
    pins, a failure under the full hypotheses is a defect and raises
    ObservationUnsatisfiable.
    """
    base = t2.base
    if verify_base and not is_completable(base).completable:
        raise NotCompletable("base square is not completable")
    forced = dict(forced or {})
    lifted = t2.lifted
    for (r, c), s in forced.items():
        have = lifted.at(r, c)
        if have is not None and have != s:
            raise LatinError(f"forced cell ({r},{c})={s} contradicts the lift")

    recovery = {}
    if _row_recovery_hypothesis(base):
        recovery = {(3, 4): base.at(1, 4), (3, 5): base.at(1, 5)}
    pair = _base_block_intercalate(base) if recovery else None

    attempts = []
    if pair is not None:
        x, y = pair
        for first, second in ((x, y), (y, x)):
            attempts.append({**recovery, (1, 4): first, (1, 5): second,
                             (2, 4): second, (2, 5): first})
    elif recovery:
        attempts.append(dict(recovery))
    attempts.append({})

    tried_any = False
    for idx, extra in enumerate(attempts):
        merged = dict(forced)
        conflict = False
        for cell, s in extra.items():
            if merged.get(cell, s) != s:
                conflict = True
                break
            merged[cell] = s
        if conflict:
            continue
        tried_any = True
        constraints = [CellConstraint(r, c, forced=s)
                       for (r, c), s in sorted(merged.items())]
        # with extra pins the early attempts are opportunistic: cap the work
        # spent refuting them and fall through to the next relaxation
        last = idx == len(attempts) - 1
        attempt_budget = budget
        if forced and not last:
            attempt_budget = 200_000 if budget is None else min(budget, 200_000)
        try:
            cert = complete_with_constraints(lifted, constraints,
                                             budget=attempt_budget)
        except BudgetExceeded:
            if last:
                raise
            continue
        except LatinError:
            continue
        if cert.completable:
            return cert.witness
        if not extra and not forced:
            raise NotCompletable("lifted square has no completion at all; "
                                 "the base square cannot be completable")
    if not forced and (recovery or pair):
        raise ObservationUnsatisfiable(
            "no completion satisfies the guaranteed lift properties")
    if not tried_any:
        raise LatinError("forced cells conflict with the lift's own content")
    raise NotCompletable("no completion consistent with the forced cells")


@dataclass(frozen=True)
class ObservationReport:
    """Per-property verdicts: 'pass', 'fail' or 'not-applicable'."""

    below: str
    staircase: str
    row_recovery: str
    intercalate: str

    def all_ok(self) -> bool:
        return "fail" not in (self.below, self.staircase,
                              self.row_recovery, self.intercalate)

    def items(self):
        return {"below": self.below, "staircase": self.staircase,
                "row_recovery": self.row_recovery,
                "intercalate": self.intercalate}


def verify_observations(completion: PartialLatinSquare,
                        base: PartialLatinSquare,
                        spec: DiagonalSpec | None = None,
                        new_symbols: tuple | None = None) -> ObservationReport:
    """Itemised check of the lift-completion properties of ``completion``
    (order n+2) against ``base`` (order n)."""
    n = base.order
    m = completion.order
    if m != n + 2:
        raise LatinError(f"completion has order {m}, expected {n + 2}")
    if spec is None:
        spec = diagonal(AUGMENTED, m)
    if new_symbols is None:
        new_symbols = tuple(s for s in completion.symbols if s not in base.symbols)

    below = "pass"
    for r in range(3, m + 1):
        for c in range(1, n + 1):
            if spec.below((r, c)):
                want = base.at(r - 2, c)
                if want is not None and completion.at(r, c) != want:
                    below = "fail"

    staircase = "pass"
    for cell in spec.cells:
        if completion.at(*cell) not in new_symbols:
            staircase = "fail"

    if _row_recovery_hypothesis(base):
        ok = (completion.at(3, 4) == base.at(1, 4)
              and completion.at(3, 5) == base.at(1, 5))
        row_recovery = "pass" if ok else "fail"
    else:
        row_recovery = "not-applicable"

    pair = _base_block_intercalate(base)
    if row_recovery != "not-applicable" and pair is not None:
        x, y = pair
        cells = (completion.at(1, 4), completion.at(1, 5),
                 completion.at(2, 4), completion.at(2, 5))
        ok = cells in ((x, y, y, x), (y, x, x, y))
        intercalate = "pass" if ok else "fail"
    else:
        intercalate = "not-applicable"

    return ObservationReport(below, staircase, row_recovery, intercalate)
