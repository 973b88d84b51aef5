"""Constructive completion for the {(111,1), (00, k+2)} cycle-type family,
k >= 3 (odd order n = 2k + 7 >= 13, two full rows, three full columns).

The pipeline normalises the square by isotopy, passes to the row-symbol
conjugate (where the two full rows become a staircase of 1s and 2s), splits
on the two corner symbols s1, s2 and runs one of three constructions:

- s1 = s2 = 3: the corner extends to a 3x3 Latin square and the whole square
  is completable outright; the oracle supplies the witness.
- s1 != s2, both != 3 (case a): strip the square to three full columns of an
  order-(n-2) square, complete those columns by matchings, double-lift the
  completion and finish by constrained search pinned to the original cells.
- s1 = s2 != 3 (case c; the mixed case b is transformed into it): a chain of
  seven auxiliary squares plants two intercalates, an order-(n-2) square is
  completed in two stages through the matching lemma, and the double lift of
  that completion is finished and unwound through two intercalate swaps.

Every stage square is validated on construction; guarantees that fail at run
time raise PipelineDefect.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (AUGMENTED, CycleType, Intercalate, Isotopy, LatinError,
                   OrderTooSmall, PartialLatinSquare, apply_isotopy, conjugate,
                   cycle_type, diagonal, row_permutation, swap_intercalate)
from .matching import complete_columns_plus_partial, complete_filled_columns
from .smetaniuk import smetaniuk_complete_t2, t2_construct
from .solver import is_completable


class WrongCycleType(LatinError):
    pass


class PipelineDefect(LatinError):
    """A stage contradicted a guarantee of the construction."""


@dataclass
class PipelineState:
    """Current frame square plus the invertible transforms that led to it.

    ``transforms`` holds ("isotopy", Isotopy) and ("conjugate", tag) records
    in application order; undoing them maps a completion in the current
    frame back to a completion of the original square.  ``notes`` collects
    the choices the construction makes (case label, s1, s2, S, q, alpha, ...).
    """

    square: PartialLatinSquare
    stage: str = "input"
    transforms: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    snapshots: list = field(default_factory=list)

    def push(self, stage: str, kind: str, payload) -> None:
        self.transforms.append((kind, payload))
        self.stage = stage
        self.snapshots.append((stage, self.square))

    def mark(self, stage: str) -> None:
        self.stage = stage
        self.snapshots.append((stage, self.square))

    def undo_all(self, square: PartialLatinSquare) -> PartialLatinSquare:
        out = square
        for kind, payload in reversed(self.transforms):
            if kind == "isotopy":
                out = apply_isotopy(out, payload.inverse())
            elif kind == "conjugate":
                out = conjugate(out, payload)  # only involutions are pushed
            else:  # pragma: no cover
                raise PipelineDefect(f"unknown transform kind {kind!r}")
        return out


def _ensure(cond: bool, msg: str) -> None:
    if not cond:
        raise PipelineDefect(msg)


def expected_cycle_type(n: int) -> CycleType:
    if n < 7 or n % 2 == 0:
        raise WrongCycleType(f"no {{(111,1),(00,m)}} square has order {n}")
    return CycleType.of([("111", 1), ("00", (n - 3) // 2)])


def _sigma_cycles(sigma: dict):
    seen = set()
    cycles = []
    for start in sorted(sigma):
        if start in seen:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = sigma[x]
        cycles.append(cyc)
    return cycles


def normalize(square: PartialLatinSquare) -> PipelineState:
    """Isotope the square so that row 1 and column 1 are the identity,
    P(2,2) = 3, P(2,3) = 1 and row 2 transposes each later pair {2i, 2i+1}.

    The applied isotopy is recorded for inversion.
    """
    n = square.order
    if square.symbols != tuple(range(1, n + 1)):
        raise WrongCycleType("the pipeline operates on squares with symbols 1..n")
    ct = cycle_type(square)
    zeros = ct.multiplicity("00")
    if ct != CycleType.of([("111", 1), ("00", zeros)]) or ct.multiplicity("111") != 1:
        raise WrongCycleType(f"cycle type {ct} is not {{(111,1),(00,m)}}")
    if n < 13:
        raise OrderTooSmall(
            f"the constructive pipeline needs order >= 13, got {n}")

    sigma = row_permutation(square, 1, 2)
    band = {square.at(1, j) for j in (1, 2, 3)}
    cycles = _sigma_cycles(sigma)
    three = next(c for c in cycles if len(c) == 3)
    _ensure(set(three) == band, "the 3-cycle must consist of the band symbols")
    pairs = sorted((c for c in cycles if len(c) == 2), key=min)

    g = {}
    a1 = min(three)
    g[a1] = 1
    g[sigma[a1]] = 2
    g[sigma[sigma[a1]]] = 3
    for idx, pair in enumerate(pairs):
        x = min(pair)
        g[x] = 4 + 2 * idx
        g[sigma[x]] = 5 + 2 * idx
    g_perm = tuple(g[i] for i in range(1, n + 1))
    gamma = tuple(g[square.at(1, c)] for c in range(1, n + 1))
    c0 = gamma.index(1) + 1
    rho = tuple(g[square.at(r, c0)] for r in range(1, n + 1))
    iso = Isotopy(rho, gamma, g_perm)
    normalized = apply_isotopy(square, iso)

    _ensure(all(normalized.at(1, i) == i for i in range(1, n + 1)),
            "row 1 must be the identity after normalisation")
    _ensure(all(normalized.at(i, 1) == i for i in range(1, n + 1)),
            "column 1 must be the identity after normalisation")
    _ensure(normalized.at(2, 2) == 3 and normalized.at(2, 3) == 1,
            "row 2 must open with 2, 3, 1")
    _ensure(all(normalized.at(2, 2 * i) == 2 * i + 1
                and normalized.at(2, 2 * i + 1) == 2 * i
                for i in range(2, (n - 1) // 2 + 1)),
            "row 2 must transpose each pair {2i, 2i+1}")

    state = PipelineState(normalized)
    state.push("normalized", "isotopy", iso)
    return state


def to_row_symbol_frame(state: PipelineState) -> None:
    """Replace the square by its row-symbol conjugate.  In that frame the
    staircase is filled with 1s and 2s, every diagonal cell holds 1, and the
    corner rows read (1, s1, 2), (2, 1, s2), (3, 2, 1)."""
    Q = conjugate(state.square, "scr")
    state.square = Q
    state.push("row-symbol", "conjugate", "scr")
    n = Q.order
    _ensure(all(Q.at(i, i) == 1 for i in range(1, n + 1)),
            "every diagonal cell must hold 1 in the row-symbol frame")
    _ensure(Q.at(1, 1) == 1 and Q.at(1, 3) == 2
            and Q.at(2, 1) == 2 and Q.at(2, 2) == 1
            and Q.at(3, 1) == 3 and Q.at(3, 2) == 2 and Q.at(3, 3) == 1,
            "corner conditions fail in the row-symbol frame")
    state.notes["s1"] = Q.at(1, 2)
    state.notes["s2"] = Q.at(2, 3)


def case_split(state: PipelineState) -> str:
    """One of "haggkvist", "a", "b", "c" according to the corner symbols."""
    s1, s2 = state.notes["s1"], state.notes["s2"]
    if s1 == s2 == 3:
        label = "haggkvist"
    elif s1 != s2 and 3 not in (s1, s2):
        label = "a"
    elif s1 != s2:
        label = "b"
    else:
        label = "c"
    state.notes["case"] = label
    return label


# --- shared helpers -----------------------------------------------------------

def _pair_relabel_to4(n: int, s: int) -> Isotopy:
    """Conjugation by a permutation fixing 1, 2, 3 that maps symbol s to 4 by
    exchanging whole pairs {2i, 2i+1} (flipping one if s is odd).  Applied to
    rows, columns and symbols alike it preserves the row-symbol frame."""
    u = list(range(n + 1))  # u[0] unused
    if s in (4, 5):
        if s == 5:
            u[4], u[5] = 5, 4
    else:
        partner = s + 1 if s % 2 == 0 else s - 1
        u[s], u[partner] = 4, 5
        u[4], u[5] = s, partner
    perm = tuple(u[1:])
    iso = Isotopy(perm, perm, perm)
    return iso


def _conjugation(state: PipelineState, stage: str, iso: Isotopy) -> None:
    state.square = apply_isotopy(state.square, iso)
    state.push(stage, "isotopy", iso)


def _perm_from_swaps(n: int, swaps) -> tuple:
    p = list(range(1, n + 1))
    for a, b in swaps:
        p[a - 1], p[b - 1] = p[b - 1], p[a - 1]
    return tuple(p)


def _staircase_fill_of(square: PartialLatinSquare, spec) -> dict:
    fill = {}
    for cell in spec.cells:
        v = square.at(*cell)
        _ensure(v in (1, 2), f"staircase cell {cell} holds {v}, expected 1 or 2")
        fill[cell] = v
    return fill


def _strip_below(square: PartialLatinSquare, spec, planted) -> PartialLatinSquare:
    """Order-(n-2) square on symbols 3..n: the planted row-1 triples together
    with the below-staircase content of rows 3..n shifted up two rows."""
    n = square.order
    triples = list(planted)
    for r, c, s in square.triples():
        if r >= 4 and spec.below((r, c)):
            triples.append((r - 2, c, s))
    _ensure(spec.below((3, 1)), "cell (3,1) must lie below the staircase")
    return PartialLatinSquare.from_triples(n - 2, triples,
                                           symbols=range(3, n + 1))


def _lift_and_pin(state: PipelineState, base: PartialLatinSquare,
                  target: PartialLatinSquare) -> PartialLatinSquare:
    """Double-lift ``base`` with new symbols 1, 2, choose the staircase fill
    that matches ``target`` and complete with every remaining cell of
    ``target`` pinned.  The result therefore extends ``target`` exactly; no
    corrective swaps on 1/2 intercalates are needed afterwards."""
    n = target.order
    spec = diagonal(AUGMENTED, n)
    fill = _staircase_fill_of(target, spec)
    t2 = t2_construct(base, new_symbols=(1, 2), diagonal_fill=fill)
    forced = {}
    for r, c, s in target.triples():
        have = t2.lifted.at(r, c)
        if have is None:
            forced[(r, c)] = s
        else:
            _ensure(have == s,
                    f"lift and target disagree at ({r},{c}): {have} vs {s}")
    completion = smetaniuk_complete_t2(t2, forced=forced)
    _ensure(completion.extends(target), "completion must extend the target frame")
    state.notes.setdefault("lift_orders", []).append(base.order)
    return completion


# --- case handlers ------------------------------------------------------------

def complete_case_a(state: PipelineState) -> PartialLatinSquare:
    """Corner symbols distinct and both different from 3.

    The below-staircase content of the frame square forms three full columns
    of an order-(n-2) square over the symbols 3..n (with s1, s2 planted in
    row 1), which the column completer finishes; double-lifting that
    completion and pinning the frame square's cells yields a completion of
    the frame."""
    Q = state.square
    n = Q.order
    s1, s2 = state.notes["s1"], state.notes["s2"]
    _ensure(s1 != s2 and s1 > 3 and s2 > 3, "not a case (a) frame")
    spec = diagonal(AUGMENTED, n)
    stripped = _strip_below(Q, spec, [(1, 1, 3), (1, 2, s1), (1, 3, s2)])
    _ensure(all(stripped.col_is_full(c) for c in (1, 2, 3))
            and stripped.filled_count() == 3 * (n - 2),
            "stripped square must consist of exactly three full columns")
    state.mark("stripped")
    completed = complete_filled_columns(stripped)
    state.mark("columns-completed")
    result = _lift_and_pin(state, completed, Q)
    state.mark("lift-completed")
    return result


def _case_b_to_c(state: PipelineState) -> None:
    """Turn a mixed corner ({s1, s2} contains 3) into a case (c) frame by a
    relabel of the non-3 symbol to 4 followed by a small searched isotopy on
    the first three rows/columns and the symbols 3, 4."""
    n = state.square.order
    s1, s2 = state.notes["s1"], state.notes["s2"]
    other = s1 if s2 == 3 else s2
    if other != 4:
        _conjugation(state, "b-relabel", _pair_relabel_to4(n, other))
    swap34 = _perm_from_swaps(n, [(3, 4)])
    for rows3 in itertools.permutations((1, 2, 3)):
        for cols3 in itertools.permutations((1, 2, 3)):
            rho = tuple(rows3) + tuple(range(4, n + 1))
            gam = tuple(cols3) + tuple(range(4, n + 1))
            iso = Isotopy(rho, gam, swap34)
            cand = apply_isotopy(state.square, iso)
            if _is_case_c_frame(cand):
                state.square = cand
                state.push("b-to-c", "isotopy", iso)
                state.notes["s1"] = cand.at(1, 2)
                state.notes["s2"] = cand.at(2, 3)
                return
    raise PipelineDefect("no isotopy of the first three rows/columns and the "
                         "symbols 3,4 reaches a case (c) frame")


def _is_case_c_frame(Q: PartialLatinSquare) -> bool:
    n = Q.order
    s = Q.at(1, 2)
    if s is None or s in (1, 2, 3) or Q.at(2, 3) != s:
        return False
    corner_ok = (Q.at(1, 1) == 1 and Q.at(1, 3) == 2
                 and Q.at(2, 1) == 2 and Q.at(2, 2) == 1
                 and Q.at(3, 1) == 3 and Q.at(3, 2) == 2 and Q.at(3, 3) == 1)
    if not corner_ok:
        return False
    if any(Q.at(i, i) != 1 for i in range(4, n + 1)):
        return False
    return all(Q.at(r, c) is None for r in (1, 2, 3) for c in range(4, n + 1))


def complete_case_c(state: PipelineState) -> PartialLatinSquare:
    """Equal corner symbols s1 = s2 != 3.

    After relabelling the shared symbol to 4, the chain B1..B7 plants the
    two intercalates the construction needs, an order-(n-2) square is
    completed in two stages through the matching lemma, the double lift of
    that completion is finished with the frame's cells pinned, and two swaps
    unwind the planted intercalates."""
    n = state.square.order
    s = state.notes["s1"]
    _ensure(s == state.notes["s2"] and s != 3, "not a case (c) frame")
    if s != 4:
        _conjugation(state, "wlog-4", _pair_relabel_to4(n, s))
        state.notes["s1"] = state.notes["s2"] = 4
    Q = state.square
    _ensure(_is_case_c_frame(Q) and Q.at(1, 2) == 4, "case (c) frame check failed")

    # B1: keep symbol 4 out of column 1, rows 4 and 5
    if Q.at(4, 1) == 4 or Q.at(5, 1) == 4:
        perm = _perm_from_swaps(n, [(4, 6), (5, 7)])
        _conjugation(state, "B1", Isotopy(perm, perm, tuple(range(1, n + 1))))
    b1 = state.square
    _ensure(b1.at(4, 1) != 4 and b1.at(5, 1) != 4, "B1 failed to displace 4")

    block = {b1.at(4, i) for i in (1, 2, 3)} | {b1.at(5, i) for i in (1, 2, 3)}
    _ensure(4 not in block, "symbol 4 must avoid rows 4 and 5 of the corner columns")
    state.notes["S"] = frozenset(block)
    marked = block | {3}

    q = next((row for row in range(6, n + 1)
              if len({b1.at(row, 2), b1.at(row, 3)} & marked) <= 1
              and b1.at(row, 1) != 4), None)
    _ensure(q is not None, "no admissible row q; order >= 13 should provide one")
    state.notes["q"] = q

    b2 = b1.set(q, 4, 4)
    state.square = b2
    state.mark("B2")

    if b2.at(q, 3) in marked:
        rho = _perm_from_swaps(n, [(1, 2)])
        gam = _perm_from_swaps(n, [(2, 3)])
        _conjugation(state, "B3", Isotopy(rho, gam, tuple(range(1, n + 1))))
    b3 = state.square
    t = b3.at(q, 3)
    _ensure(t not in marked, "B3 must leave an unmarked symbol at (q,3)")
    state.notes["t"] = t

    b4 = b3.set(2, 4, t)
    state.square = b4
    state.mark("B4")
    b5 = swap_intercalate(b4, Intercalate((2, q), (3, 4), (4, t)))
    state.square = b5
    state.mark("B5")

    alpha = next(sym for sym in range(1, n + 1)
                 if sym not in block and sym not in (1, 2, 3, 4, t))
    state.notes["alpha"] = alpha
    b6 = b5.set_many([(2, 5, alpha), (3, 4, alpha), (3, 5, 4)])
    _ensure(b6.at(2, 4) == 4 and b6.at(3, 5) == 4
            and b6.at(2, 5) == alpha and b6.at(3, 4) == alpha,
            "cells (2,4),(2,5),(3,4),(3,5) must form an intercalate on {4, alpha}")
    state.square = b6
    state.mark("B6")

    rho = _perm_from_swaps(n, [(1, 3)])
    gam = _perm_from_swaps(n, [(1, 2)])
    _conjugation(state, "B7", Isotopy(rho, gam, tuple(range(1, n + 1))))
    b7 = state.square

    spec = diagonal(AUGMENTED, n)
    stripped = _strip_below(
        b7, spec, [(1, 1, 4), (1, 2, 3), (1, 3, b7.at(2, 3)), (2, 4, alpha), (3, 4, 4)])
    _ensure(b7.at(2, 3) == t, "the unmarked symbol must sit at (2,3) of B7")
    col4 = [v for v in stripped.col_values(4) if v is not None]
    _ensure(sorted(col4) == sorted((alpha, 4, t)),
            "column 4 of the stripped square must hold alpha, 4 and t")
    state.mark("C")
    c_completed = complete_columns_plus_partial(stripped)

    c1 = stripped.set_many(
        [(i, 4, c_completed.at(i, 4)) for i in range(1, n - 1)
         if stripped.at(i, 4) is None]
        + [(2, 5, 4), (3, 5, alpha)])
    state.mark("C1")
    c1_completed = complete_columns_plus_partial(c1)

    a_sq = _lift_and_pin(state, c1_completed, b7)
    state.mark("A")
    if a_sq.at(2, 4) == alpha:  # other orientation of the planted intercalate
        a_sq = swap_intercalate(a_sq, Intercalate((1, 2), (4, 5), (4, alpha)))
    _ensure(a_sq.at(2, 4) == 4 and a_sq.at(q, 4) == t,
            "intercalate cells out of position before the final swap")
    state.mark("A-prime")

    result = swap_intercalate(a_sq, Intercalate((2, q), (3, 4), (t, 4)))
    state.mark("final-swap")
    return result


def complete_ct111(square: PartialLatinSquare,
                   want_state: bool = False):
    """Complete a square of cycle type {(111,1), (00, k+2)}, k >= 3.

    Returns the verified completion, or (completion, PipelineState) when
    ``want_state`` is set.
    """
    state = normalize(square)
    to_row_symbol_frame(state)
    label = case_split(state)

    if label == "haggkvist":
        cert = is_completable(square)
        _ensure(cert.completable,
                "a corner extending to a 3x3 Latin square must be completable")
        result = cert.witness
        state.mark("oracle-completion")
    else:
        if label == "b":
            _case_b_to_c(state)
            label = "c"
        if label == "a":
            frame_completion = complete_case_a(state)
        else:
            frame_completion = complete_case_c(state)
        result = state.undo_all(frame_completion)
        state.mark("unwound")

    _ensure(result.is_complete(), "pipeline produced a partial square")
    _ensure(result.extends(square), "pipeline output does not extend the input")
    if want_state:
        return result, state
    return result
