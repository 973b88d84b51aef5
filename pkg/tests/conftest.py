import itertools
import random

import pytest

from pls23.core import PartialLatinSquare


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def cyclic_square(n: int) -> PartialLatinSquare:
    return PartialLatinSquare([[(r + c) % n + 1 for c in range(n)]
                               for r in range(n)])


def brute_force_completable(square: PartialLatinSquare) -> bool:
    """Independent oracle: plain row-major backtracking with sets, no
    bit masks, no cell-ordering heuristic."""
    n = square.order
    grid = [list(row) for row in square.rows]
    symbols = list(square.symbols)

    def free_cell():
        for r in range(n):
            for c in range(n):
                if grid[r][c] is None:
                    return r, c
        return None

    def rec():
        cell = free_cell()
        if cell is None:
            return True
        r, c = cell
        used = set(grid[r]) | {grid[i][c] for i in range(n)}
        for s in symbols:
            if s not in used:
                grid[r][c] = s
                if rec():
                    return True
                grid[r][c] = None
        return False

    return rec()


def all_latin_squares(n: int):
    """Every Latin square of order n on symbols 1..n (row-by-row product)."""
    perms = list(itertools.permutations(range(1, n + 1)))

    def extend(rows):
        if len(rows) == n:
            yield PartialLatinSquare(list(rows))
            return
        for p in perms:
            if all(all(p[c] != row[c] for c in range(n)) for row in rows):
                yield from extend(rows + [p])

    yield from extend([])
