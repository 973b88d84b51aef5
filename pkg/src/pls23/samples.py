"""Random generators for squares used in tests, demos and sampled searches.

All functions take an explicit ``random.Random`` so callers control seeding.
"""

from __future__ import annotations

import random

from .core import Isotopy, PartialLatinSquare, apply_isotopy
from .search import ct111_sigma


def random_permutation(n: int, rng: random.Random) -> tuple:
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return tuple(p)


def random_isotopy(n: int, rng: random.Random) -> Isotopy:
    return Isotopy(random_permutation(n, rng), random_permutation(n, rng),
                   random_permutation(n, rng))


def random_latin_square(n: int, rng: random.Random) -> PartialLatinSquare:
    """A random isotopic image of the cyclic square (not uniform, but a
    diverse source of full squares)."""
    grid = [[(r + c) % n + 1 for c in range(n)] for r in range(n)]
    return apply_isotopy(PartialLatinSquare(grid), random_isotopy(n, rng))


def erase_random_cells(square: PartialLatinSquare, keep: int,
                       rng: random.Random) -> PartialLatinSquare:
    """Keep ``keep`` randomly chosen filled cells, emptying the rest."""
    cells = list(square.triples())
    rng.shuffle(cells)
    n = square.order
    grid = [[None] * n for _ in range(n)]
    for r, c, s in cells[:keep]:
        grid[r - 1][c - 1] = s
    return PartialLatinSquare(grid, square.symbols)


def random_completable(n: int, rng: random.Random,
                       fill_fraction: float = 0.5) -> PartialLatinSquare:
    """A random partial square that certainly has a completion."""
    keep = max(0, min(n * n, round(n * n * fill_fraction)))
    return erase_random_cells(random_latin_square(n, rng), keep, rng)


def fill_column(row_conflicts, symbols, rng: random.Random):
    """Assign ``symbols`` to the rows of one column, avoiding per-row
    conflict sets, by randomised backtracking.  Returns a list or None."""
    k = len(row_conflicts)
    symbols = list(symbols)
    out = [None] * k
    used = set()

    def rec(i):
        if i == k:
            return True
        options = [s for s in symbols if s not in used and s not in row_conflicts[i]]
        rng.shuffle(options)
        for s in options:
            used.add(s)
            out[i] = s
            if rec(i + 1):
                return True
            used.discard(s)
        out[i] = None
        return False

    return out if rec(0) else None


def _extend_three_columns(n, row1, row2, rng):
    """Grid with the given two full rows and columns 1..3 filled below them."""
    grid = [list(row1), list(row2)] + [[None] * n for _ in range(n - 2)]
    for c in range(3):
        col_used = {row1[c], row2[c]}
        conflicts = [set(grid[r][:c]) | col_used for r in range(2, n)]
        fill = fill_column(conflicts, set(range(1, n + 1)) - col_used, rng)
        if fill is None:
            return None
        for r in range(2, n):
            grid[r][c] = fill[r - 2]
    return grid


def random_pls23_normal_form(n: int, rng: random.Random) -> PartialLatinSquare:
    """Uniform-ish member of the two-row/three-column family: random full
    rows 1 and 2, random Latin fill of columns 1..3 below them."""
    while True:
        row1 = random_permutation(n, rng)
        row2 = random_permutation(n, rng)
        if any(a == b for a, b in zip(row1, row2)):
            continue
        grid = _extend_three_columns(n, row1, row2, rng)
        if grid is not None:
            return PartialLatinSquare(grid)


def random_ct111_normal_form(n: int, rng: random.Random) -> PartialLatinSquare:
    """Member of the {(111,1),(00,m)} family in normal form: rows 1, 2 and
    column 1 pinned, columns 2 and 3 random."""
    sigma = ct111_sigma(n)
    row1 = tuple(range(1, n + 1))
    row2 = tuple(sigma[j] for j in row1)
    grid = [list(row1), list(row2)] + [[None] * n for _ in range(n - 2)]
    for r in range(2, n):
        grid[r][0] = r + 1
    for c in (1, 2):
        col_used = {row1[c], row2[c]}
        while True:
            conflicts = [set(grid[r][:c]) | {grid[r][0]} | col_used
                         for r in range(2, n)]
            fill = fill_column(conflicts,
                               set(range(1, n + 1)) - col_used, rng)
            if fill is not None:
                break
        for r in range(2, n):
            grid[r][c] = fill[r - 2]
    return PartialLatinSquare(grid)


def scramble_in_family(square: PartialLatinSquare,
                       rng: random.Random) -> PartialLatinSquare:
    """Random isotopy that keeps the filled rows in {1,2} and the filled
    columns in {1,2,3} (so family membership is preserved)."""
    n = square.order
    rows = list(rng.sample((1, 2), 2)) + rng.sample(range(3, n + 1), n - 2)
    row_perm = [0] * n
    for image, src in zip(rows, range(1, n + 1)):
        row_perm[src - 1] = image
    cols = rng.sample((1, 2, 3), 3) + rng.sample(range(4, n + 1), n - 3)
    col_perm = [0] * n
    for image, src in zip(cols, range(1, n + 1)):
        col_perm[src - 1] = image
    iso = Isotopy(tuple(row_perm), tuple(col_perm), random_permutation(n, rng))
    return apply_isotopy(square, iso)


def random_ct111(n: int, rng: random.Random) -> PartialLatinSquare:
    """Scrambled member of the {(111,1),(00,m)} family."""
    return scramble_in_family(random_ct111_normal_form(n, rng), rng)


def random_latin_corner(n: int, rng: random.Random) -> PartialLatinSquare:
    """Random family member whose 2x3 corner is a Latin rectangle on three
    symbols (in normal position)."""
    while True:
        band = rng.sample(range(1, n + 1), 3)
        shift = rng.choice((1, 2))
        corner2 = [band[(i + shift) % 3] for i in range(3)]
        rest = [s for s in range(1, n + 1) if s not in band]
        rng.shuffle(rest)
        row1 = tuple(band + rest)
        # row 2 beyond the corner uses exactly the non-band symbols
        tail2 = fill_column([{row1[c]} for c in range(3, n)], rest, rng)
        if tail2 is None:
            continue
        row2 = tuple(corner2 + tail2)
        grid = _extend_three_columns(n, row1, row2, rng)
        if grid is not None:
            return PartialLatinSquare(grid)
