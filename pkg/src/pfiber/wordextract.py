"""Read a braid word off a parametrized braid.

Strands are projected to the real axis and swept in increasing t.  At a
crossing the strand with lower imaginary part passes over.  Positions are
numbered by decreasing real part, and the letter is positive when the
over-strand moves towards larger real part (from position p + 1 to p).

When the exact projection is not generic (symmetric parametrizations often
produce several crossings at one instant) the projection direction is
rotated by a tiny angle; this changes the word only by braid relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .braidword import BraidWord, Permutation, writhe as word_writhe
from .curves import TWO_PI, ParamBraid, rotate


class NonGenericError(ValueError):
    """Projection is not generic: tangency, triple point or an Im tie at a crossing."""


class CloseCrossingsError(NonGenericError):
    """Two crossings at the same position closer in t than the resolution floor."""


@dataclass(frozen=True)
class CrossingEvent:
    t_cross: float
    p: int
    sign: int
    strands: tuple[int, int]  # 0-based strand ids, (over, under)


@dataclass(frozen=True)
class Extraction:
    word: BraidWord
    events: tuple[CrossingEvent, ...]
    basepoint: float
    order: tuple[int, ...]  # strand ids by position at the basepoint
    angle: float = 0.0  # projection rotation actually used

PERTURBATIONS = (0.0, 1e-6, -1e-6, 1e-5, -1e-5, 1e-4, -1e-4)


def _positions_order(x: np.ndarray) -> list[int]:
    """Strand ids by position: position 1 has the largest real part."""
    return [int(k) for k in np.argsort(-x, kind="stable")]


def _basepoint(b: ParamBraid, tol: float) -> float:
    if b.n == 1:
        return 0.0
    iu, ju = np.triu_indices(b.n, 1)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    for k in range(64):
        t0 = TWO_PI * ((k * golden) % 1.0) if k else 0.0
        x = b.positions(np.array(t0)).real
        if np.min(np.abs(x[iu] - x[ju])) > tol:
            return t0
    raise NonGenericError("could not find a generic basepoint")


def _pair_crossings(b: ParamBraid, a: int, c: int, t: np.ndarray, f: np.ndarray,
                    df: np.ndarray, tol: float) -> list[float]:
    """Zeros of Re(z_a - z_c) on the sampled interval."""

    def g(s):
        z = b.positions(np.array(s))
        return float((z[a] - z[c]).real)

    roots = []
    h = t[1] - t[0]
    sign_change = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    for k in sign_change:
        roots.append(brentq(g, t[k], t[k + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps))
    # same sign at both ends, but the difference could dip through zero in between
    reach = np.minimum(np.abs(f[:-1]), np.abs(f[1:])) < h * np.maximum(np.abs(df[:-1]), np.abs(df[1:]))
    suspect = np.nonzero(reach & (np.sign(f[:-1]) * np.sign(f[1:]) > 0)
                         & (np.sign(df[:-1]) != np.sign(df[1:])))[0]
    for k in suspect:
        s0 = np.sign(f[k])
        res = minimize_scalar(lambda s: s0 * g(s), bounds=(t[k], t[k + 1]), method="bounded",
                              options={"xatol": 1e-12})
        fmin = s0 * res.fun
        if np.sign(fmin) == -s0:
            roots.append(brentq(g, t[k], res.x, xtol=1e-13))
            roots.append(brentq(g, res.x, t[k + 1], xtol=1e-13))
        elif abs(fmin) < tol:
            raise NonGenericError(f"tangency of strands {a}, {c} near t={res.x % TWO_PI:.9g}")
    return roots


def _sweep(b: ParamBraid, grid_size: int, tangency_tol: float) -> Extraction:
    n = b.n
    scale = b.scale()
    t0 = _basepoint(b, 1e-6 * scale)
    order = _positions_order(b.positions(np.array(t0)).real)
    if n == 1:
        return Extraction(BraidWord(1, ()), (), t0, tuple(order))
    t = t0 + np.linspace(0.0, TWO_PI, grid_size + 1)
    z = b.positions(t)
    dz = b.velocities(t)
    candidates = []
    for a in range(n):
        for c in range(a + 1, n):
            f = (z[:, a] - z[:, c]).real
            df = (dz[:, a] - dz[:, c]).real
            for s in _pair_crossings(b, a, c, t, f, df, tangency_tol * scale):
                candidates.append((s, a, c))
    candidates.sort()

    pos = {s: k for k, s in enumerate(order)}
    events = []
    for s, a, c in candidates:
        if abs(pos[a] - pos[c]) != 1:
            raise NonGenericError(
                f"strands {a}, {c} cross at t={s % TWO_PI:.9g} without being adjacent")
        zc = b.positions(np.array(s))
        if abs(zc[a].imag - zc[c].imag) <= tangency_tol * scale:
            raise NonGenericError(f"strands {a}, {c} collide at t={s % TWO_PI:.9g}")
        over, under = (a, c) if zc[a].imag < zc[c].imag else (c, a)
        p = min(pos[a], pos[c])
        sign = 1 if pos[over] == p + 1 else -1
        pos[a], pos[c] = pos[c], pos[a]
        events.append(CrossingEvent(float(s % TWO_PI), p + 1, sign, (over, under)))

    for e1, e2 in zip(events, events[1:]):
        if e1.p == e2.p and abs(e2.t_cross - e1.t_cross) < 1e-8:
            raise CloseCrossingsError(f"crossings at position {e1.p} too close near t={e1.t_cross:.9g}")
    word = BraidWord(n, tuple(e.sign * e.p for e in events))
    return Extraction(word, tuple(events), t0, tuple(order))


def extract(b: ParamBraid, grid_size: int = 4096, tangency_tol: float = 1e-10,
            perturb: bool = True) -> Extraction:
    """Sweep ``b`` and record its crossings.

    With ``perturb`` a non-generic projection is retried at the small
    rotation angles in ``PERTURBATIONS``; otherwise the first failure raises.
    """
    angles = PERTURBATIONS if perturb else (0.0,)
    err = None
    for angle in angles:
        rotated = rotate(b, -angle)
        try:
            try:
                ex = _sweep(rotated, grid_size, tangency_tol)
            except CloseCrossingsError:
                ex = _sweep(rotated, 10 * grid_size, tangency_tol)
        except NonGenericError as exc:
            err = exc
            continue
        return Extraction(ex.word, ex.events, ex.basepoint, ex.order, angle)
    raise err


def extract_word(b: ParamBraid, grid_size: int = 4096) -> BraidWord:
    return extract(b, grid_size).word


def writhe(b: ParamBraid, grid_size: int = 4096) -> int:
    return word_writhe(extract_word(b, grid_size))


def closure_permutation(b: ParamBraid, basepoint: float, angle: float = 0.0) -> Permutation:
    """Permutation of positions at ``basepoint`` induced by closing ``b``."""
    order = _positions_order(rotate(b, -angle).positions(np.array(basepoint)).real)
    pos = {s: k + 1 for k, s in enumerate(order)}
    nxt = b.closure_map()
    images = [0] * b.n
    for s in range(b.n):
        images[pos[s] - 1] = pos[nxt[s]]
    return Permutation(tuple(images))


def events_csv(ex: Extraction) -> str:
    lines = ["t,p,sign"]
    lines.extend(f"{e.t_cross:.12g},{e.p},{e.sign}" for e in ex.events)
    return "\n".join(lines) + "\n"
