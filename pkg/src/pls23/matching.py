"""Constructive completers built from bipartite matchings.

Squares whose filled cells are full columns are completed one column at a
time through perfect matchings between rows and unused symbols.  A square
with r full columns plus one partially filled column is handled by first
finishing that column with a matching (possible whenever n >= 2r + s) and
then delegating to the column completer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BadShape, LatinError, PartialLatinSquare


class PreconditionViolated(LatinError):
    pass


class InternalMatchingFailure(LatinError):
    """A matching guaranteed by theory failed to exist; treated as a bug."""


class NoPerfectMatching(LatinError):
    def __init__(self, violator):
        super().__init__(f"no perfect matching; Hall violator {sorted(violator)}")
        self.violator = frozenset(violator)


@dataclass(frozen=True)
class BipartiteGraph:
    """Balanced bipartite graph given by explicit vertex lists and an
    adjacency map from left vertices to sets of right vertices."""

    left: tuple
    right: tuple
    adj: dict

    def degree(self, v) -> int:
        if v in self.adj:
            return len(self.adj[v])
        return sum(1 for u in self.left if v in self.adj.get(u, ()))

    def min_degree(self) -> int:
        return min(min((self.degree(u) for u in self.left), default=0),
                   min((self.degree(v) for v in self.right), default=0))


def perfect_matching(graph: BipartiteGraph) -> dict:
    """A perfect matching as a left->right dict.

    Augmenting-path search with greedy initialisation; deterministic
    (vertices are processed in the given order, neighbours in sorted order).
    Raises NoPerfectMatching with a Hall violator set when none exists.
    """
    if len(graph.left) != len(graph.right):
        raise PreconditionViolated("graph is not balanced")
    adj = {u: sorted(graph.adj.get(u, ())) for u in graph.left}
    match_l: dict = {}
    match_r: dict = {}
    for u in graph.left:
        for v in adj[u]:
            if v not in match_r:
                match_l[u] = v
                match_r[v] = u
                break
    for u in graph.left:
        if u in match_l:
            continue
        visited_l = {u}
        visited_r = set()

        def augment(x) -> bool:
            for v in adj[x]:
                if v in visited_r:
                    continue
                visited_r.add(v)
                w = match_r.get(v)
                if w is None:
                    match_l[x] = v
                    match_r[v] = x
                    return True
                visited_l.add(w)
                if augment(w):
                    match_l[x] = v
                    match_r[v] = x
                    return True
            return False

        if not augment(u):
            # every alternating path from u is saturated: the visited left
            # vertices see exactly the visited right vertices, one fewer
            raise NoPerfectMatching(visited_l)
    return match_l


def _filled_column_profile(square: PartialLatinSquare):
    full = []
    for c in range(1, square.order + 1):
        vals = square.col_values(c)
        filled = sum(1 for v in vals if v is not None)
        if filled == square.order:
            full.append(c)
        elif filled:
            return None
    return full


def complete_filled_columns(square: PartialLatinSquare) -> PartialLatinSquare:
    """Complete a square whose filled cells are exactly r full columns.

    Empty columns are filled left to right; each is a perfect matching
    between rows and the symbols absent from that row.  Such a matching
    always exists (the row/symbol graph is regular), so a failure here is
    reported as a bug rather than a verdict.
    """
    full = _filled_column_profile(square)
    if full is None:
        raise PreconditionViolated("filled cells must form complete columns only")
    n = square.order
    grid = [list(row) for row in square.rows]
    row_missing = [set(square.symbols) - {v for v in row if v is not None}
                   for row in square.rows]
    for c in range(1, n + 1):
        if c in full:
            continue
        graph = BipartiteGraph(tuple(range(1, n + 1)), square.symbols,
                               {r: frozenset(row_missing[r - 1])
                                for r in range(1, n + 1)})
        try:
            assignment = perfect_matching(graph)
        except NoPerfectMatching as exc:  # pragma: no cover - theory says never
            raise InternalMatchingFailure(
                f"column {c}: regular row/symbol graph had no matching") from exc
        for r in range(1, n + 1):
            s = assignment[r]
            grid[r - 1][c - 1] = s
            row_missing[r - 1].discard(s)
    result = PartialLatinSquare(grid, square.symbols)
    assert result.is_complete() and result.extends(square)
    return result


def complete_columns_plus_partial(square: PartialLatinSquare) -> PartialLatinSquare:
    """Complete a square with r full columns, one column holding s cells and
    everything else empty, provided n >= 2r + s.

    The partial column is finished via a perfect matching between its empty
    rows and the symbols absent from it (minimum degree >= n - s - r, which
    is at least half of either side), then the column completer takes over.
    """
    n = square.order
    full_cols = []
    partial_col = None
    for c in range(1, n + 1):
        vals = square.col_values(c)
        filled = sum(1 for v in vals if v is not None)
        if filled == n:
            full_cols.append(c)
        elif filled > 0:
            if partial_col is not None:
                raise PreconditionViolated("more than one partially filled column")
            partial_col = c
    if partial_col is None:
        return complete_filled_columns(square)
    r = len(full_cols)
    s = sum(1 for v in square.col_values(partial_col) if v is not None)
    if n < 2 * r + s:
        raise PreconditionViolated(f"need n >= 2r + s, got n={n}, r={r}, s={s}")

    used_in_col = {v for v in square.col_values(partial_col) if v is not None}
    open_rows = tuple(i for i in range(1, n + 1)
                      if square.at(i, partial_col) is None)
    free_symbols = tuple(s_ for s_ in square.symbols if s_ not in used_in_col)
    adj = {}
    for i in open_rows:
        in_row = {v for v in square.row_values(i) if v is not None}
        adj[i] = frozenset(s_ for s_ in free_symbols if s_ not in in_row)
    graph = BipartiteGraph(open_rows, free_symbols, adj)
    try:
        assignment = perfect_matching(graph)
    except NoPerfectMatching as exc:  # pragma: no cover - theory says never
        raise InternalMatchingFailure(
            "row/symbol graph for the partial column had no matching despite "
            "n >= 2r + s") from exc
    filled = square.set_many((i, partial_col, assignment[i]) for i in open_rows)
    return complete_filled_columns(filled)


def ryser_condition(rect, n: int) -> bool:
    """True iff every symbol of 1..n occurs at least r + s - n times in the
    fully filled r x s rectangle ``rect`` (given as rows)."""
    rows = [list(row) for row in rect]
    r = len(rows)
    if r == 0 or any(len(row) != len(rows[0]) for row in rows):
        raise BadShape("rectangle rows must be non-empty and equal length")
    s = len(rows[0])
    if r > n or s > n:
        raise BadShape(f"rectangle {r}x{s} does not fit in order {n}")
    if any(v is None for row in rows for v in row):
        raise BadShape("rectangle must be fully filled")
    threshold = r + s - n
    if threshold <= 0:
        return True
    counts = {}
    for row in rows:
        for v in row:
            counts[v] = counts.get(v, 0) + 1
    return all(counts.get(sym, 0) >= threshold for sym in range(1, n + 1))
