"""Exact completability oracle: exhaustive backtracking over bit masks with
most-constrained-cell ordering.

Ties break deterministically (lowest symbol first, row-major cell order) so
identical inputs always produce identical witnesses.  Node budgets raise
``BudgetExceeded``, which is an explicit third outcome and never a verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import LatinError, PartialLatinSquare


class BudgetExceeded(LatinError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


class InconsistentConstraints(LatinError):
    pass


@dataclass(frozen=True)
class CellConstraint:
    """Either force a cell to one symbol or forbid a set of symbols there."""

    row: int
    col: int
    forced: int | None = None
    forbidden: frozenset = frozenset()

    def __post_init__(self):
        if self.forced is not None and self.forced in self.forbidden:
            raise InconsistentConstraints(
                f"cell ({self.row},{self.col}): forced symbol {self.forced} "
                f"is also forbidden")


@dataclass
class CompletionCertificate:
    verdict: str                       # "completable" | "non-completable"
    witness: PartialLatinSquare | None
    nodes: int = 0
    seconds: float = 0.0
    constraints: tuple = field(default_factory=tuple)

    @property
    def completable(self) -> bool:
        return self.verdict == "completable"


class _Exhausted(Exception):
    pass


def _prepare(square: PartialLatinSquare):
    """Index symbols as bits 0..n-1 and build row/column used-masks."""
    n = square.order
    sym_bit = {s: i for i, s in enumerate(square.symbols)}
    grid = [-1] * (n * n)
    row_mask = [0] * n
    col_mask = [0] * n
    for r, c, s in square.triples():
        b = sym_bit[s]
        grid[(r - 1) * n + (c - 1)] = b
        row_mask[r - 1] |= 1 << b
        col_mask[c - 1] |= 1 << b
    return n, sym_bit, grid, row_mask, col_mask


def _search(n, grid, row_mask, col_mask, forbid, budget, on_solution):
    """Core backtracking loop.

    ``on_solution(grid)`` is called for each completion found; it returns
    True to stop the search.  Returns the node count.  Raises _Exhausted
    via BudgetExceeded when the budget runs out.
    """
    full = (1 << n) - 1
    empties = [i for i in range(n * n) if grid[i] == -1]
    nodes = 0

    def recurse():
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(nodes)
        if not empties:
            return on_solution(grid)
        # most-constrained empty cell, row-major tie break
        best_i = -1
        best_cand = 0
        best_count = n + 1
        for i, cell in enumerate(empties):
            r, c = divmod(cell, n)
            cand = full & ~(row_mask[r] | col_mask[c])
            if forbid is not None:
                cand &= ~forbid[cell]
            k = cand.bit_count()
            if k < best_count:
                best_i, best_cand, best_count = i, cand, k
                if k <= 1:
                    break
        if best_count == 0:
            return False
        last = len(empties) - 1
        cell = empties[best_i]
        empties[best_i] = empties[last]
        empties.pop()
        r, c = divmod(cell, n)
        cand = best_cand
        stop = False
        while cand:
            bit = cand & -cand
            cand ^= bit
            grid[cell] = bit.bit_length() - 1
            row_mask[r] |= bit
            col_mask[c] |= bit
            stop = recurse()
            row_mask[r] ^= bit
            col_mask[c] ^= bit
            grid[cell] = -1
            if stop:
                break
        empties.append(cell)
        if best_i != len(empties) - 1:
            empties[best_i], empties[-1] = empties[-1], empties[best_i]
        return stop

    recurse()
    return nodes


def _to_square(square, grid):
    n = square.order
    symbols = square.symbols
    rows = tuple(tuple(symbols[grid[r * n + c]] for c in range(n)) for r in range(n))
    return PartialLatinSquare._wrap(rows, symbols)


def is_completable(square: PartialLatinSquare,
                   budget: int | None = None) -> CompletionCertificate:
    """Exact verdict; a "non-completable" verdict means the search space was
    exhausted."""
    return complete_with_constraints(square, (), budget=budget)


def complete_with_constraints(square: PartialLatinSquare,
                              constraints,
                              budget: int | None = None) -> CompletionCertificate:
    """Completion satisfying every cell constraint, or an exhaustion verdict.

    Forced symbols that merely conflict with row/column contents yield a
    "non-completable" verdict; constraints contradicting a filled cell (or
    each other on the same cell) raise InconsistentConstraints.
    """
    t0 = time.perf_counter()
    n, sym_bit, grid, row_mask, col_mask = _prepare(square)
    constraints = tuple(constraints)
    forbid = None
    immediate_conflict = False
    for cc in constraints:
        if not (1 <= cc.row <= n and 1 <= cc.col <= n):
            raise InconsistentConstraints(f"cell ({cc.row},{cc.col}) out of range")
        cell = (cc.row - 1) * n + (cc.col - 1)
        for s in cc.forbidden:
            if s not in sym_bit:
                raise InconsistentConstraints(f"unknown symbol {s!r} in constraint")
            if grid[cell] == sym_bit[s]:
                raise InconsistentConstraints(
                    f"cell ({cc.row},{cc.col}) already holds forbidden symbol {s}")
            if forbid is None:
                forbid = [0] * (n * n)
            forbid[cell] |= 1 << sym_bit[s]
        if cc.forced is not None:
            if cc.forced not in sym_bit:
                raise InconsistentConstraints(f"unknown symbol {cc.forced!r} in constraint")
            b = sym_bit[cc.forced]
            if grid[cell] != -1:
                if grid[cell] != b:
                    raise InconsistentConstraints(
                        f"cell ({cc.row},{cc.col}) holds a different symbol than "
                        f"the forced {cc.forced}")
                continue
            bit = 1 << b
            if (row_mask[cc.row - 1] | col_mask[cc.col - 1]) & bit:
                immediate_conflict = True
                continue
            if forbid is not None and forbid[cell] & bit:
                raise InconsistentConstraints(
                    f"cell ({cc.row},{cc.col}): forced symbol {cc.forced} is forbidden")
            grid[cell] = b
            row_mask[cc.row - 1] |= bit
            col_mask[cc.col - 1] |= bit

    if immediate_conflict:
        return CompletionCertificate("non-completable", None, nodes=0,
                                     seconds=time.perf_counter() - t0,
                                     constraints=constraints)

    found = []

    def on_solution(g):
        found.append(list(g))
        return True

    nodes = _search(n, grid, row_mask, col_mask, forbid, budget, on_solution)
    seconds = time.perf_counter() - t0
    if found:
        return CompletionCertificate("completable", _to_square(square, found[0]),
                                     nodes=nodes, seconds=seconds,
                                     constraints=constraints)
    return CompletionCertificate("non-completable", None, nodes=nodes,
                                 seconds=seconds, constraints=constraints)


def count_completions(square: PartialLatinSquare, cap: int,
                      budget: int | None = None) -> int:
    """Number of distinct completions, truncated at ``cap``."""
    if cap <= 0:
        return 0
    n, _, grid, row_mask, col_mask = _prepare(square)
    count = 0

    def on_solution(_g):
        nonlocal count
        count += 1
        return count >= cap

    _search(n, grid, row_mask, col_mask, None, budget, on_solution)
    return count
