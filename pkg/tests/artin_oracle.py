"""Faithful action of the braid group on the free group, used to compare braids.

Two braid words are equal in B_n exactly when they induce the same
automorphism of F_n, so comparing reduced images of the generators decides
braid equality without any normal form.
"""

from __future__ import annotations


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_inverse(word):
    return tuple(-x for x in reversed(word))


def _substitute(word, images):
    out = []
    for x in word:
        img = images.get(abs(x), (abs(x),))
        out.extend(img if x > 0 else free_inverse(img))
    return free_reduce(out)


def artin_action(letters, n: int) -> dict[int, tuple[int, ...]]:
    """Images of the free generators x_1..x_n under the automorphism of the word."""
    images = {k: (k,) for k in range(1, n + 1)}
    for e in reversed(tuple(letters)):
        i = abs(e)
        if e > 0:
            sub = {i: (i, i + 1, -i), i + 1: (i,)}
        else:
            sub = {i: (i + 1,), i + 1: (-(i + 1), i, i + 1)}
        images = {k: _substitute(v, sub) for k, v in images.items()}
    return images


def braid_equal(w1, w2) -> bool:
    return w1.n == w2.n and artin_action(w1.letters, w1.n) == artin_action(w2.letters, w2.n)
