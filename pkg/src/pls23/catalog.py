"""Known non-completable members of the two-row/three-column family.

These are the smallest published examples at orders 5, 6 and 7; they show
that completability of the family genuinely needs order >= 8 and they serve
as negative fixtures for the oracle.
"""

from __future__ import annotations

from .core import PartialLatinSquare

_ = None

NON_COMPLETABLE = {
    5: PartialLatinSquare([
        [1, 2, 3, 4, 5],
        [2, 4, 5, 3, 1],
        [3, 5, 1, _, _],
        [4, 3, 2, _, _],
        [5, 1, 4, _, _],
    ]),
    6: PartialLatinSquare([
        [1, 2, 3, 4, 5, 6],
        [2, 6, 1, 5, 4, 3],
        [3, 5, 4, _, _, _],
        [4, 3, 5, _, _, _],
        [5, 4, 6, _, _, _],
        [6, 1, 2, _, _, _],
    ]),
    7: PartialLatinSquare([
        [1, 2, 3, 4, 5, 6, 7],
        [2, 1, 7, 6, 4, 5, 3],
        [3, 7, 2, _, _, _, _],
        [4, 5, 6, _, _, _, _],
        [5, 6, 4, _, _, _, _],
        [6, 4, 5, _, _, _, _],
        [7, 3, 1, _, _, _, _],
    ]),
}


def noncompletable(order: int) -> PartialLatinSquare:
    return NON_COMPLETABLE[order]
