import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artin_oracle import artin_action, braid_equal
from pfiber import braidword as bw
from pfiber.braidword import BraidWord, BraidWordError, Permutation


def W(text, n):
    return BraidWord.parse(text, n)


@st.composite
def words(draw, max_n=5, max_len=12, min_n=2):
    n = draw(st.integers(min_n, max_n))
    length = draw(st.integers(0, max_len))
    letters = draw(st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i))),
                            min_size=length, max_size=length))
    return BraidWord(n, tuple(letters))


def seeded_words(count=100, seed=20240611):
    rng = random.Random(seed)
    return [bw.random_word(rng, rng.randint(2, 5), rng.randint(0, 12)) for _ in range(count)]


class TestBraidWordType:
    def test_rejects_out_of_range_letters(self):
        with pytest.raises(BraidWordError):
            BraidWord(3, (3,))
        with pytest.raises(BraidWordError):
            BraidWord(3, (0,))

    def test_empty_word_is_valid(self):
        assert len(BraidWord(4)) == 0

    def test_parse_round_trip(self):
        w = W("1 -2 1 -2", 3)
        assert str(w) == "1 -2 1 -2"
        assert BraidWord.parse(str(w), 3) == w

    def test_parse_garbage(self):
        with pytest.raises(BraidWordError):
            BraidWord.parse("1 x", 3)

    def test_permutation_type_validates(self):
        with pytest.raises(BraidWordError):
            Permutation((1, 1, 2))


class TestPermutation:
    def test_single_transposition(self):
        assert bw.permutation(W("1", 2)).images == (2, 1)

    def test_empty_is_identity(self):
        assert bw.permutation(BraidWord(3)).is_identity()

    def test_figure_eight_is_three_cycle(self):
        assert len(bw.permutation(W("1 -2 1 -2", 3)).cycles()) == 1

    @given(words(), st.integers(-4, 4))
    def test_power_is_homomorphic(self, w, r):
        assert bw.permutation(bw.power(w, r)) == bw.permutation(w) ** r


class TestComponents:
    def test_hopf(self):
        assert [len(c) for c in bw.components(W("1 1", 2))] == [1, 1]

    def test_trefoil(self):
        assert [len(c) for c in bw.components(W("1 1 1", 2))] == [2]

    def test_trivial(self):
        assert bw.components(BraidWord(3)) == [(1,), (2,), (3,)]

    @given(words())
    def test_partition(self, w):
        flat = sorted(p for c in bw.components(w) for p in c)
        assert flat == list(range(1, w.n + 1))
        assert [c[0] for c in bw.components(w)] == sorted(c[0] for c in bw.components(w))


class TestCounts:
    @pytest.mark.parametrize("text,n,expected", [
        ("1 1 1 2 -1 2", 3, (5, 1)),
        ("1 -2 1 -2", 3, (2, 2)),
        ("", 3, (0, 0)),
    ])
    def test_crossing_counts(self, text, n, expected):
        assert bw.crossing_counts(W(text, n)) == expected

    @given(st.integers(2, 6), st.integers(1, 3))
    def test_full_twist_counts(self, n, k):
        assert bw.crossing_counts(bw.full_twist(n, k)) == (k * n * (n - 1), 0)


class TestPowersAndTwists:
    def test_power_examples(self):
        assert str(bw.power(W("1", 2), 3)) == "1 1 1"
        assert str(bw.power(W("1 -2", 3), -1)) == "2 -1"
        assert str(bw.power(W("1 -2 1 -2", 3), 2)) == "1 -2 1 -2 1 -2 1 -2"
        assert len(bw.power(W("1 -2", 3), 0)) == 0

    def test_half_twist(self):
        assert str(bw.half_twist(2)) == "1"
        assert str(bw.half_twist(3)) == "1 2 1"
        with pytest.raises(BraidWordError):
            bw.half_twist(1)

    def test_full_twist(self):
        assert str(bw.full_twist(2, 1)) == "1 1"
        assert bw.full_twist(3, -1) == bw.full_twist(3, 1).inverse()

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_full_twist_is_central(self, n):
        delta2 = bw.full_twist(n)
        for i in range(1, n):
            g = BraidWord(n, (i,))
            assert braid_equal(delta2 + g, g + delta2)


class TestHomogeneity:
    def test_figure_eight(self):
        w = W("1 -2 1 -2", 3)
        assert bw.is_homogeneous(w) and bw.is_alternating(w)

    def test_non_homogeneous(self):
        assert not bw.is_homogeneous(W("1 1 1 2 -1 2", 3))

    def test_missing_index(self):
        assert not bw.is_homogeneous(BraidWord(2))
        assert not bw.is_alternating(BraidWord(2))

    def test_homogeneous_but_not_alternating(self):
        w = W("-1 2", 3)
        assert bw.is_homogeneous(w) and not bw.is_alternating(w)


def double_square_cycle_formula(w):
    """Expected permutation of (B'')^2: pi(B) on each block of n strands."""
    n = w.n
    pi = bw.permutation(w)
    return tuple([pi(j) for j in range(1, n + 1)] + [n + pi(j - n) for j in range(n + 1, 2 * n + 1)])


class TestHomogenize:
    def test_two_strand_hand_expansion(self):
        assert str(bw.homogenize(W("1", 2))) == "1 -2 1 3 -2"

    def test_five_two_knot_word(self):
        w = W("1 1 1 2 -1 2", 3)
        h = bw.homogenize(w)
        assert h.n == 6
        assert bw.is_alternating(h) and bw.is_homogeneous(h)
        sq = bw.power(h, 2)
        assert bw.forget_strands(sq, range(4, 7)) == w
        assert bw.forget_strands(sq, range(1, 4)) == w

    def test_thread_permutation(self):
        for w in seeded_words(40, seed=5):
            images = bw.permutation(bw.thread(w)).images
            n = w.n
            assert images[:n] == bw.permutation(w).images
            assert images[n:] == tuple(range(n + 1, 2 * n + 1))

    def test_block_swap_permutation(self):
        for n in range(1, 6):
            images = bw.permutation(bw.block_swap(n)).images
            assert images == tuple(list(range(n + 1, 2 * n + 1)) + list(range(1, n + 1)))

    @settings(max_examples=150, deadline=None)
    @given(words())
    def test_alternating_and_homogeneous(self, w):
        h = bw.homogenize(w)
        assert h.n == 2 * w.n
        assert bw.is_alternating(h)
        assert bw.is_homogeneous(h)

    @settings(max_examples=150, deadline=None)
    @given(words())
    def test_forgetting_threaded_word(self, w):
        threaded = bw.thread(w)
        n = w.n
        assert bw.forget_strands(threaded, range(n + 1, 2 * n + 1)) == w
        assert len(bw.forget_strands(threaded, range(1, n + 1))) == 0

    @settings(max_examples=150, deadline=None)
    @given(words())
    def test_square_forgets_to_original(self, w):
        sq = bw.power(bw.homogenize(w), 2)
        n = w.n
        assert braid_equal(bw.forget_strands(sq, range(n + 1, 2 * n + 1)), w)
        assert braid_equal(bw.forget_strands(sq, range(1, n + 1)), w)

    @settings(max_examples=150, deadline=None)
    @given(words())
    def test_square_permutation_formula(self, w):
        sq = bw.power(bw.homogenize(w), 2)
        assert bw.permutation(sq).images == double_square_cycle_formula(w)


class TestForgetStrands:
    def test_drops_letters_touching_deleted_strand(self):
        assert str(bw.forget_strands(W("1 2 1", 3), [2])) == "1"

    def test_reindexes(self):
        assert str(bw.forget_strands(W("2 -2 2", 3), [1])) == "1 -1 1"

    def test_out_of_range(self):
        with pytest.raises(BraidWordError):
            bw.forget_strands(W("1", 2), [3])

    @given(words(min_n=3))
    def test_forgetting_is_well_defined_on_braids(self, w):
        # inserting a cancelling pair must not change the forgotten braid
        i = 1
        padded = BraidWord(w.n, (i, -i) + w.letters)
        for strand in range(1, w.n + 1):
            assert braid_equal(bw.forget_strands(padded, [strand]), bw.forget_strands(w, [strand]))


class TestTwistBound:
    @pytest.mark.parametrize("text,n,expected", [
        ("-1", 2, (1, 1)),
        ("1 -2 1 -2", 3, (1, 1)),
        ("-1 -1 -2 -2 -1", 3, (2, 1)),
    ])
    def test_examples(self, text, n, expected):
        assert bw.twist_bound(W(text, n)) == expected

    @given(words())
    def test_ceiling_formula(self, w):
        k_plus, k_minus = bw.crossing_counts(w)
        k1, k2 = bw.twist_bound(w)
        assert k1 >= Fraction(k_minus + 1, w.n) > k1 - 1
        assert k2 >= Fraction(k_plus + 1, w.n) > k2 - 1


class TestYXWords:
    def test_y_words(self):
        assert str(bw.y_word(1, 5)) == "1 1"
        assert str(bw.y_word(3, 4)) == "-3 -2 1 1 2 3"
        with pytest.raises(BraidWordError):
            bw.y_word(4, 4)

    def test_x_odd(self):
        for offset in (None, 0, 1, 2):
            assert str(bw.x_word(1, 4, offset)) == "1 1"
        assert bw.x_word(3, 5) == bw.y_word(2, 5)

    def test_x_even_offset(self):
        assert bw.x_word(2, 4) == bw.y_word(2, 4)
        assert bw.x_word(2, 4, offset=2) == bw.y_word(3, 4)

    @pytest.mark.parametrize("i,n", [(1, 2), (2, 3), (3, 4), (2, 5)])
    def test_y_is_pure(self, i, n):
        assert bw.permutation(bw.y_word(i, n)).is_identity()


class TestCyclicEqual:
    def test_examples(self):
        assert bw.cyclic_equal(W("1 -2", 3), W("-2 1", 3))
        assert not bw.cyclic_equal(W("1 -2", 3), W("1 2", 3))
        w = W("1 2 -1 2", 3)
        assert bw.cyclic_equal(w, w)

    @given(words(), st.integers(0, 30))
    def test_rotation(self, w, s):
        if len(w):
            s %= len(w)
            rotated = BraidWord(w.n, w.letters[s:] + w.letters[:s])
            assert bw.cyclic_equal(w, rotated)


class TestArtinOracle:
    def test_braid_relations(self):
        assert artin_action((1, 2, 1), 3) == artin_action((2, 1, 2), 3)
        assert artin_action((1, 3), 4) == artin_action((3, 1), 4)
        assert artin_action((2, -2), 3) == artin_action((), 3)

    def test_distinguishes(self):
        assert artin_action((1,), 2) != artin_action((-1,), 2)
        assert artin_action((1, 2), 3) != artin_action((2, 1), 3)
