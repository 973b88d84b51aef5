import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pls23.core import (CONJUGATE_KINDS, AUGMENTED, FORWARD, BadShape,
                        CycleType, DuplicateInColumn, DuplicateInRow,
                        Intercalate, Isotopy, NotAnIntercalate, NotNormalForm,
                        OrderTooSmall, PartialLatinSquare,
                        PermutationSizeMismatch, RowNotFull, apply_isotopy,
                        canonical_rotation, compose_conjugates, conjugate,
                        cycle_type, diagonal, find_intercalates,
                        relabel_symbols, row_permutation, swap_intercalate,
                        validate)
from pls23.catalog import NON_COMPLETABLE
from pls23.samples import random_completable, random_isotopy, random_latin_square

from conftest import cyclic_square


class TestValidate:
    def test_catalog_squares_are_valid(self):
        sq = NON_COMPLETABLE[5]
        assert sq.order == 5 and sq.filled_count() == 2 * 5 + 3 * 3

    def test_empty_grid_is_valid(self):
        for n in (1, 3, 6):
            assert validate([[None] * n for _ in range(n)]).filled_count() == 0

    def test_duplicate_in_row(self):
        with pytest.raises(DuplicateInRow) as err:
            validate([[1, 1], [None, None]])
        assert err.value.row == 1 and err.value.symbol == 1

    def test_duplicate_in_column(self):
        with pytest.raises(DuplicateInColumn):
            validate([[1, 2], [1, None]])

    def test_bad_shape(self):
        with pytest.raises(BadShape):
            validate([[1, 2], [2]])

    def test_custom_symbols(self):
        sq = validate([[3, 4], [4, 3]], symbols=(3, 4))
        assert sq.symbols == (3, 4)
        with pytest.raises(BadShape):
            validate([[3, 4], [4, 3]], symbols=(3, 4, 5))

    def test_immutable(self):
        sq = cyclic_square(3)
        with pytest.raises(AttributeError):
            sq.rows = ()


class TestConjugates:
    def test_identity(self):
        sq = cyclic_square(4)
        assert conjugate(sq, "rcs") == sq

    def test_transpose_involution(self):
        sq = NON_COMPLETABLE[5]
        assert conjugate(conjugate(sq, "crs"), "crs") == sq

    def test_catalog5_transpose_by_hand(self):
        # recompute the triple set of the order-5 fixture cell by cell
        sq = NON_COMPLETABLE[5]
        swapped = conjugate(sq, "crs")
        for r, c, s in sq.triples():
            assert swapped.at(c, r) == s
        assert swapped.filled_count() == sq.filled_count()

    def test_row_symbol_swap(self):
        sq = cyclic_square(5)
        rs = conjugate(sq, "scr")
        for r, c, s in sq.triples():
            assert rs.at(s, c) == r

    def test_group_action_all_36_pairs(self):
        rng = random.Random(1)
        squares = [random_completable(n, rng) for n in (4, 5, 6)]
        for k1, k2 in itertools.product(CONJUGATE_KINDS, repeat=2):
            combined = compose_conjugates(k2, k1)
            for sq in squares:
                assert conjugate(conjugate(sq, k1), k2) == conjugate(sq, combined)

    def test_six_distinct_kinds(self):
        # the action is faithful on a generic square
        sq = random_completable(5, random.Random(9))
        images = {conjugate(sq, k) for k in CONJUGATE_KINDS}
        assert len(images) == 6


class TestIsotopy:
    def test_identity(self):
        sq = cyclic_square(5)
        assert apply_isotopy(sq, Isotopy.identity(5)) == sq

    def test_row_swap_involution(self):
        sq = cyclic_square(5)
        iso = Isotopy((2, 1, 3, 4, 5), (1, 2, 3, 4, 5), (1, 2, 3, 4, 5))
        assert apply_isotopy(apply_isotopy(sq, iso), iso) == sq

    def test_size_mismatch(self):
        with pytest.raises(PermutationSizeMismatch):
            apply_isotopy(cyclic_square(4), Isotopy.identity(5))

    def test_inverse(self, rng):
        for _ in range(20):
            sq = random_completable(6, rng)
            iso = random_isotopy(6, rng)
            assert apply_isotopy(apply_isotopy(sq, iso), iso.inverse()) == sq

    def test_relabel_symbols(self):
        sq = validate([[3, 4], [4, 3]], symbols=(3, 4))
        out = relabel_symbols(sq, {3: 1, 4: 2})
        assert out.symbols == (1, 2) and out.at(1, 1) == 1


class TestIntercalates:
    def test_two_by_two(self):
        sq = PartialLatinSquare([[1, 2], [2, 1]])
        ics = find_intercalates(sq)
        assert len(ics) == 1
        assert swap_intercalate(sq, ics[0]) == PartialLatinSquare([[2, 1], [1, 2]])

    def test_no_intercalates_in_odd_cyclic(self):
        assert find_intercalates(cyclic_square(5)) == []

    def test_cyclic4_matches_brute_force(self):
        sq = cyclic_square(4)
        expected = 0
        n = 4
        for r1, r2 in itertools.combinations(range(1, n + 1), 2):
            for c1, c2 in itertools.combinations(range(1, n + 1), 2):
                a, b = sq.at(r1, c1), sq.at(r1, c2)
                if a != b and sq.at(r2, c2) == a and sq.at(r2, c1) == b:
                    expected += 1
        assert len(find_intercalates(sq)) == expected > 0

    def test_swap_involution_and_cell_preservation(self, rng):
        for _ in range(100):
            sq = random_latin_square(6, rng)
            ics = find_intercalates(sq)
            if not ics:
                continue
            ic = rng.choice(ics)
            swapped = swap_intercalate(sq, ic)
            assert swapped.is_complete()
            back = Intercalate(ic.rows, ic.cols, (ic.syms[1], ic.syms[0]))
            assert swap_intercalate(swapped, back) == sq

    def test_not_an_intercalate(self):
        sq = cyclic_square(4)
        with pytest.raises(NotAnIntercalate):
            swap_intercalate(sq, Intercalate((1, 2), (1, 2), (9, 10)))


class TestRowPermutationAndCycleType:
    def test_identity_rows(self):
        sq = cyclic_square(4)
        assert row_permutation(sq, 1, 1) == {s: s for s in range(1, 5)}

    def test_normal_form_sigma(self):
        # rows (1..n) over (2,3,1,5,4,7,6,...) give the 3-cycle plus swaps
        n = 9
        row2 = [2, 3, 1, 5, 4, 7, 6, 9, 8]
        grid = [list(range(1, n + 1)), row2] + [[None] * n for _ in range(n - 2)]
        # fill columns 1..3 to reach the two-row/three-column form
        used = [{grid[0][c], grid[1][c]} for c in range(3)]
        for r in range(2, n):
            for c in range(3):
                for s in range(1, n + 1):
                    if s not in used[c] and s not in grid[r][:c]:
                        grid[r][c] = s
                        used[c].add(s)
                        break
        sq = PartialLatinSquare(grid)
        sigma = row_permutation(sq, 1, 2)
        assert sigma[1] == 2 and sigma[2] == 3 and sigma[3] == 1
        assert all(sigma[2 * i] == 2 * i + 1 and sigma[2 * i + 1] == 2 * i
                   for i in range(2, (n - 1) // 2 + 1))

    def test_row_not_full(self):
        sq = NON_COMPLETABLE[5]
        with pytest.raises(RowNotFull):
            row_permutation(sq, 1, 4)

    def test_rotation_equivalence(self):
        assert CycleType.of([("101", 1)]) == CycleType.of([("011", 1)])
        assert canonical_rotation("1110") == "0111"

    def test_cycle_type_of_catalog7(self):
        # row 2 = (2,1,7,6,4,5,3): cycles (1 2), (3 7), (4 6 5)
        ct = cycle_type(NON_COMPLETABLE[7])
        assert ct == CycleType.of([("11", 1), ("01", 1), ("000", 1)])

    def test_total_length_invariant(self, rng):
        from pls23.samples import random_pls23_normal_form
        for _ in range(50):
            n = rng.randrange(6, 13)
            sq = random_pls23_normal_form(n, rng)
            assert cycle_type(sq).total_length == n

    def test_not_normal_form(self):
        with pytest.raises(NotNormalForm):
            cycle_type(PartialLatinSquare([[1, None], [None, None]]))

    def test_symbol_relabel_equivalence(self, rng):
        # relabelling symbols and restoring the frame keeps the cycle type
        from pls23.samples import random_pls23_normal_form, scramble_in_family
        for _ in range(30):
            sq = random_pls23_normal_form(9, rng)
            assert cycle_type(scramble_in_family(sq, rng)) == cycle_type(sq)


class TestDiagonals:
    def test_forward_3(self):
        spec = diagonal(FORWARD, 3)
        assert spec.cells == {(1, 1), (2, 2), (3, 3)}
        assert spec.below((3, 1)) and spec.above((1, 3))

    def test_augmented_7(self):
        spec = diagonal(AUGMENTED, 7)
        assert spec.cells == {(1, 1), (2, 1), (3, 2), (3, 3), (4, 4), (6, 6)}

    def test_augmented_6_blocks(self):
        spec = diagonal(AUGMENTED, 6)
        assert len(spec.cells) == 12
        for i in (1, 3, 5):
            for cell in ((i, i), (i, i + 1), (i + 1, i), (i + 1, i + 1)):
                assert cell in spec.cells

    def test_partition(self):
        for kind, n in ((FORWARD, 6), (AUGMENTED, 7), (AUGMENTED, 9),
                        (AUGMENTED, 8), (AUGMENTED, 13)):
            spec = diagonal(kind, n)
            for r in range(1, n + 1):
                for c in range(1, n + 1):
                    on = (r, c) in spec.cells
                    below = spec.below((r, c))
                    above = spec.above((r, c))
                    assert on + below + above == 1

    def test_order_too_small(self):
        with pytest.raises(OrderTooSmall):
            diagonal(AUGMENTED, 4)
        with pytest.raises(OrderTooSmall):
            diagonal(FORWARD, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.integers(4, 7))
def test_swap_is_involution_property(seed, n):
    rng = random.Random(seed)
    sq = random_latin_square(n, rng)
    ics = find_intercalates(sq)
    if not ics:
        return
    ic = ics[seed % len(ics)]
    once = swap_intercalate(sq, ic)
    flipped = Intercalate(ic.rows, ic.cols, (ic.syms[1], ic.syms[0]))
    assert swap_intercalate(once, flipped) == sq
    assert {t[:2] for t in once.triples()} == {t[:2] for t in sq.triples()}
