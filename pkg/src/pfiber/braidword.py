"""Braid words in the Artin generators and the integer combinatorics around them.

A letter ``e > 0`` stands for sigma_e, ``e < 0`` for sigma_{-e}^{-1}.  Positions
and strands are 1-based throughout, matching the usual braid notation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class BraidWordError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1, ..., n}; ``images[p - 1]`` is where position p ends up."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise BraidWordError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, p: int) -> int:
        return self.images[p - 1]

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        return Permutation(tuple(other(self(p)) for p in range(1, self.n + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for p, q in enumerate(self.images, start=1):
            inv[q - 1] = p
        return Permutation(tuple(inv))

    def __pow__(self, r: int) -> Permutation:
        base = self if r >= 0 else self.inverse()
        out = Permutation.identity(self.n)
        for _ in range(abs(r)):
            out = out.then(base)
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles ordered by their smallest element, each starting there."""
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            q = self(start)
            while q != start:
                cyc.append(q)
                seen.add(q)
                q = self(q)
            out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(e) for e in self.letters))
        if self.n < 1:
            raise BraidWordError(f"strand count must be >= 1, got {self.n}")
        for e in self.letters:
            if e == 0 or abs(e) > self.n - 1:
                raise BraidWordError(f"letter {e} out of range for {self.n} strands")

    @classmethod
    def parse(cls, text: str, n: int) -> BraidWord:
        try:
            letters = tuple(int(tok) for tok in text.split())
        except ValueError as exc:
            raise BraidWordError(f"bad braid word {text!r}") from exc
        return cls(n, letters)

    def __str__(self) -> str:
        return " ".join(str(e) for e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: BraidWord) -> BraidWord:
        if other.n != self.n:
            raise BraidWordError("cannot concatenate words on different strand counts")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, tuple(-e for e in reversed(self.letters)))


def permutation(w: BraidWord) -> Permutation:
    """Permutation of strand positions induced by ``w`` (read left to right)."""
    at = list(range(w.n + 1))  # at[pos] = starting label of strand now at pos
    for e in w.letters:
        i = abs(e)
        at[i], at[i + 1] = at[i + 1], at[i]
    images = [0] * w.n
    for pos in range(1, w.n + 1):
        images[at[pos] - 1] = pos
    return Permutation(tuple(images))


def components(w: BraidWord) -> list[tuple[int, ...]]:
    """Closure components as cycles of starting positions; ``len`` is the strand count."""
    return permutation(w).cycles()


def crossing_counts(w: BraidWord) -> tuple[int, int]:
    k_plus = sum(1 for e in w.letters if e > 0)
    return k_plus, len(w.letters) - k_plus


def writhe(w: BraidWord) -> int:
    k_plus, k_minus = crossing_counts(w)
    return k_plus - k_minus


def power(w: BraidWord, r: int) -> BraidWord:
    base = w if r >= 0 else w.inverse()
    return BraidWord(w.n, base.letters * abs(r))


def half_twist(n: int) -> BraidWord:
    if n < 2:
        raise BraidWordError("half twist needs at least 2 strands")
    letters: list[int] = []
    for top in range(n - 1, 0, -1):
        letters.extend(range(1, top + 1))
    return BraidWord(n, tuple(letters))


def full_twist(n: int, k: int = 1) -> BraidWord:
    """Delta_n^{2k}; negative ``k`` gives negative full twists."""
    return power(half_twist(n), 2 * k)


def _alt_sign(i: int) -> int:
    return 1 if i % 2 == 1 else -1


def is_homogeneous(w: BraidWord) -> bool:
    signs: dict[int, set[int]] = {}
    for e in w.letters:
        signs.setdefault(abs(e), set()).add(1 if e > 0 else -1)
    return all(len(signs.get(i, ())) == 1 for i in range(1, w.n))


def is_alternating(w: BraidWord) -> bool:
    """Every index occurs, and sigma_i always carries sign (-1)^(i+1)."""
    if any((1 if e > 0 else -1) != _alt_sign(abs(e)) for e in w.letters):
        return False
    return {abs(e) for e in w.letters} == set(range(1, w.n))


def thread(w: BraidWord) -> BraidWord:
    """Double the strands and thread strand n+1 through ``w`` to make it alternating.

    Letters already carrying the alternating sign are kept.  For a wrong-sign
    letter at index i the added strand walks left from position n+1 to
    position i, the crossing happens one slot to the right (index i+1, where
    its sign is the alternating one), and the added strand walks back.
    """
    n = w.n
    out: list[int] = []
    for e in w.letters:
        i = abs(e)
        sign = 1 if e > 0 else -1
        if sign == _alt_sign(i):
            out.append(e)
            continue
        walk_in = [k * _alt_sign(k) for k in range(n, i - 1, -1)]
        out.extend(walk_in)
        out.append((i + 1) * sign)
        out.extend(reversed(walk_in))
    return BraidWord(2 * n, tuple(out))


def block_swap(n: int) -> BraidWord:
    """Alternating braid on 2n strands carrying the left block of n strands past the right one."""
    letters = []
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            idx = n + k - j
            letters.append(idx * _alt_sign(idx))
    return BraidWord(2 * n, tuple(letters))


def homogenize(w: BraidWord) -> BraidWord:
    """Alternating (hence homogeneous) word on 2n strands: ``thread(w)`` followed by ``block_swap(n)``."""
    return thread(w) + block_swap(w.n)


def forget_strands(w: BraidWord, strands: Iterable[int]) -> BraidWord:
    """Delete the strands that start at the given positions.

    Letters touching a deleted strand disappear; the rest are re-indexed by
    the order of the surviving strands.
    """
    drop = set(strands)
    if any(p < 1 or p > w.n for p in drop):
        raise BraidWordError("strand index out of range")
    at = list(range(w.n + 1))
    out = []
    for e in w.letters:
        i = abs(e)
        if at[i] not in drop and at[i + 1] not in drop:
            rank = sum(1 for pos in range(1, i) if at[pos] not in drop)
            out.append((rank + 1) * (1 if e > 0 else -1))
        at[i], at[i + 1] = at[i + 1], at[i]
    return BraidWord(max(w.n - len(drop), 1), tuple(out))


def twist_bound(w: BraidWord) -> tuple[int, int]:
    """Smallest full-twist counts (k1, k2) making Delta^{2k1} w and Delta^{-2k2} w fibered."""
    k_plus, k_minus = crossing_counts(w)
    return -(-(k_minus + 1) // w.n), -(-(k_plus + 1) // w.n)


def y_word(i: int, n: int) -> BraidWord:
    if not 1 <= i <= n - 1:
        raise BraidWordError(f"Y_{i} needs 1 <= i <= {n - 1}")
    if i == 1:
        return BraidWord(n, (1, 1))
    return BraidWord(n, tuple(range(-i, -1)) + (1, 1) + tuple(range(2, i + 1)))


def x_word(i: int, n: int, offset: int | None = None) -> BraidWord:
    """X_i as a Y-word; ``offset`` is the additive shift used for even i."""
    if not 1 <= i <= n - 1:
        raise BraidWordError(f"X_{i} needs 1 <= i <= {n - 1}")
    if i % 2 == 1:
        return y_word((i + 1) // 2, n)
    if offset is None:
        offset = (n - 1) // 2
    return y_word(i // 2 + offset, n)


def cyclic_equal(w1: BraidWord, w2: BraidWord) -> bool:
    if w1.n != w2.n or len(w1) != len(w2):
        return False
    if not w1.letters:
        return True
    doubled = w1.letters + w1.letters
    m = len(w2)
    return any(doubled[s:s + m] == w2.letters for s in range(len(w1)))


def random_word(rng, n: int, length: int) -> BraidWord:
    """Uniform random word; ``rng`` is a ``random.Random``."""
    if n < 2:
        return BraidWord(n, ())
    letters = [rng.choice((-1, 1)) * rng.randint(1, n - 1) for _ in range(length)]
    return BraidWord(n, tuple(letters))


def as_word(letters: Sequence[int] | str, n: int) -> BraidWord:
    if isinstance(letters, str):
        return BraidWord.parse(letters, n)
    return BraidWord(n, tuple(letters))
