"""Numerical test of the P-fibered condition and the bounds built on it.

A braid is P-fibered when d arg v_p / dt never vanishes for any critical
value v_p of g_t.  ``check`` samples that derivative along every tracked
branch, refines the grid wherever it comes close to zero, and reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import braidword
from .braidword import BraidWord
from .curves import TWO_PI, CurveError, ParamBraid, braid_power, satellite, twist
from .polyloop import TrackingError, phase_derivative, track, uniform_grid

DEFAULT_GRID = 4096
DEFAULT_MARGIN = 1e-4


@dataclass
class BranchReport:
    min: float
    argmin_t: float
    max: float
    argmax_t: float
    winding: float
    sign_changes: list[float] = field(default_factory=list)


@dataclass
class FibrationReport:
    verdict: str
    margin: float
    grid: int
    samples: int
    branches: list[BranchReport]
    near_zero: list[tuple[int, float, float]]

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def global_min_abs(self) -> float:
        return min(min(abs(b.min), abs(b.max)) if b.min * b.max > 0 else 0.0
                   for b in self.branches)

    @property
    def total_winding(self) -> float:
        return sum(b.winding for b in self.branches)

    def to_json(self) -> dict:
        out = asdict(self)
        out["near_zero"] = [list(x) for x in self.near_zero]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _flagged(d: np.ndarray, margin: float) -> np.ndarray:
    """Intervals [k, k+1] where some branch gets close to zero or changes sign."""
    small = np.abs(d) < 2.0 * margin
    flip = np.sign(d[:-1]) != np.sign(d[1:])
    return np.any(small[:-1] | small[1:] | flip, axis=1)


def _zero_crossings(t: np.ndarray, d: np.ndarray) -> list[float]:
    out = []
    for k in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        w = d[k] / (d[k] - d[k + 1])
        out.append(float(t[k] + w * (t[k + 1] - t[k])))
    return out


def check(b: ParamBraid, grid: int = DEFAULT_GRID, margin: float = DEFAULT_MARGIN,
          refine_rounds: int = 4, refine_points: int = 7) -> FibrationReport:
    """Sample every critical-value phase derivative and decide P-fiberedness."""
    if grid < 64:
        raise ValueError("grid must be >= 64")
    if not margin > 0:
        raise ValueError("margin must be positive")
    t = uniform_grid(grid)
    for round_ in range(refine_rounds + 1):
        tracks = track(b, t=t)
        d = tracks.dphase
        flags = _flagged(d, margin)
        if round_ == refine_rounds or not flags.any():
            break
        extra = [np.linspace(tracks.t[k], tracks.t[k + 1], refine_points + 2)[1:-1]
                 for k in np.nonzero(flags)[0]]
        t = np.union1d(tracks.t, np.concatenate(extra))

    ts = tracks.t
    windings = tracks.windings()
    branches = []
    near = []
    ok = True
    for p in range(tracks.branches):
        dp = d[:, p]
        kmin, kmax = int(np.argmin(dp)), int(np.argmax(dp))
        changes = _zero_crossings(ts, dp)
        branches.append(BranchReport(float(dp[kmin]), float(ts[kmin]), float(dp[kmax]),
                                     float(ts[kmax]), float(windings[p]), changes))
        small = np.nonzero(np.abs(dp) < margin)[0]
        near.extend((p, float(ts[k]), float(dp[k])) for k in small)
        if changes or len(small):
            ok = False
    return FibrationReport("pass" if ok else "fail", margin, grid, int(len(ts)), branches, near)


def _critical_rates(b: ParamBraid, tau: np.ndarray) -> np.ndarray:
    """Analytic d arg v / d tau for all critical points of g_tau, per sample (unmatched)."""
    from .polyloop import _Sampler

    sampler = _Sampler(b, warm=False)
    c, z = sampler.batch(tau)
    _, rate = sampler.values(tau, c, z)
    return rate


def t1_limit(companion: ParamBraid, n_i: int, j: int, grid: int = DEFAULT_GRID):
    """d/dt arg of the critical values of g_ij(u, t), the companion on the j-th slice.

    Returns ``(t, rates)`` with ``rates`` of shape (grid + 1, s - 1).
    """
    if companion.n < 2:
        raise ValueError("companion needs at least 2 strands")
    t = uniform_grid(grid)
    tau = (t + TWO_PI * (j - 1)) / n_i
    return t, _critical_rates(companion, tau) / n_i


def _pair_rates(z: np.ndarray, dz: np.ndarray, a: int) -> np.ndarray:
    """Sum over b != a of d/dt arg(z_a - z_b)."""
    diff = z[:, a:a + 1] - z
    ddiff = dz[:, a:a + 1] - dz
    diff = np.delete(diff, a, axis=1)
    ddiff = np.delete(ddiff, a, axis=1)
    mag = np.abs(diff) ** 2
    return np.sum((ddiff * np.conj(diff)).imag / mag, axis=1)


def t2_limit(pattern: ParamBraid, s: int, i: int, j: int, grid: int = DEFAULT_GRID, tol: float = 1e-12):
    """Limit of the cross term for strand (i, j): s * sum d/dt arg(z_ij - z_i'j')."""
    if s < 1:
        raise ValueError("s must be >= 1")
    t = uniform_grid(grid)
    labels = pattern.labels
    a = labels.index((i, j))
    z = pattern.positions(t)
    dz = pattern.velocities(t)
    if pattern.n > 1:
        gaps = np.abs(np.delete(z - z[:, a:a + 1], a, axis=1))
        if gaps.min() < tol * pattern.scale():
            raise CurveError(f"strands collide near t={t[int(np.argmin(gaps.min(axis=1)))]:.6g}")
    return t, s * _pair_rates(z, dz, a)


def t2_range(pattern: ParamBraid, s: int, grid: int = DEFAULT_GRID) -> tuple[float, float]:
    lo, hi = math.inf, -math.inf
    for i, j in pattern.labels:
        _, v = t2_limit(pattern, s, i, j, grid)
        lo, hi = min(lo, float(v.min())), max(hi, float(v.max()))
    return lo, hi


def companion_power_bound(pattern: ParamBraid, companions: Sequence[ParamBraid],
                          grid: int = DEFAULT_GRID, tie_tol: float = 1e-9) -> list[int]:
    """Smallest r_i with r_i * min|T1| > max|T2| for every strand of pattern component i."""
    out = []
    for i, (comp, comp_curve) in enumerate(zip(companions, pattern.components), start=1):
        s = comp.n
        n_i = comp_curve.strands
        t1 = min(float(np.min(np.abs(t1_limit(comp, n_i, j, grid)[1]))) for j in range(1, n_i + 1))
        if t1 <= tie_tol:
            raise ValueError(f"companion {i} has a vanishing T1 term; it is not P-fibered here")
        t2 = max(float(np.max(np.abs(t2_limit(pattern, s, i, j, grid)[1])))
                 for j in range(1, n_i + 1)) if pattern.n > 1 else 0.0
        r = max(1, math.ceil(t2 / t1))
        if r * t1 <= t2 + tie_tol:
            r += 1
        out.append(r)
    return out


EPS_LADDER = tuple(10.0 ** -k for k in range(1, 7))


@dataclass
class SatelliteSearch:
    powers: list[int]
    eps: float | None
    report: FibrationReport | None
    tried: list[tuple[float, str]]


def search_eps(pattern: ParamBraid, companions: Sequence[ParamBraid], powers: Sequence[int],
               grid: int = DEFAULT_GRID, margin: float = DEFAULT_MARGIN,
               ladder: Sequence[float] = EPS_LADDER) -> SatelliteSearch:
    """First eps on the ladder for which the satellite passes ``check``."""
    tried = []
    for eps in ladder:
        try:
            sat = satellite(pattern, companions, eps, powers)
            rep = check(sat, grid, margin)
        except (CurveError, TrackingError) as exc:
            tried.append((eps, f"error: {exc}"))
            continue
        tried.append((eps, rep.verdict))
        if rep.passed:
            return SatelliteSearch(list(powers), eps, rep, tried)
    return SatelliteSearch(list(powers), None, None, tried)


def _aligned(b_tracks, tw_tracks):
    common, ib, it = np.intersect1d(b_tracks.t, tw_tracks.t, return_indices=True)
    from scipy.optimize import linear_sum_assignment

    dist = np.abs(b_tracks.points[0][:, None] - tw_tracks.points[0][None, :])
    rows, cols = linear_sum_assignment(dist)
    perm = np.empty(len(rows), dtype=int)
    perm[rows] = cols
    return common, ib, it, perm


def twist_shift_verify(b: ParamBraid, k: int, grid: int = DEFAULT_GRID,
                       method: str = "analytic") -> float:
    """max |dphi(twist(b, k)) - dphi(b) - n k| over matched branches and common samples."""
    base = track(b, grid)
    tw = track(twist(b, k), grid)
    common, ib, it, perm = _aligned(base, tw)
    d_base = phase_derivative(base, method)[ib]
    d_tw = phase_derivative(tw, method)[it][:, perm]
    return float(np.max(np.abs(d_tw - d_base - b.n * k)))


@dataclass
class TwistPlan:
    n: int
    k_plus: int
    k_minus: int
    x_word: BraidWord
    eps_time: float
    positive_letter_time: float
    negative_letter_time: float
    lower_bound: float
    strict_bound: float
    k_required: int
    k2_required: int


def word_twist_plan(w: BraidWord, eps_time: float = 0.1, offset: int | None = None) -> TwistPlan:
    """Timing schedule for the critical values of the X-word of ``w``.

    Positive letters share a total time ``eps_time``; each negative letter gets
    (2 pi - eps_time) / k_- for one clockwise turn of its critical value, so the
    phase derivative stays above -2 pi k_- / (2 pi - eps_time) > -k_- - 1.
    """
    if not 0 < eps_time < TWO_PI:
        raise ValueError("eps_time must lie in (0, 2 pi)")
    k_plus, k_minus = braidword.crossing_counts(w)
    letters: list[int] = []
    for e in w.letters:
        x = braidword.x_word(abs(e), w.n, offset)
        letters.extend(x.letters if e > 0 else x.inverse().letters)
    k1, k2 = braidword.twist_bound(w)
    return TwistPlan(
        n=w.n, k_plus=k_plus, k_minus=k_minus,
        x_word=BraidWord(w.n, tuple(letters)),
        eps_time=eps_time,
        positive_letter_time=eps_time / k_plus if k_plus else 0.0,
        negative_letter_time=(TWO_PI - eps_time) / k_minus if k_minus else 0.0,
        lower_bound=-TWO_PI * k_minus / (TWO_PI - eps_time) if k_minus else 0.0,
        strict_bound=float(-k_minus - 1),
        k_required=k1, k2_required=k2)


def power_check(b: ParamBraid, r: int, grid: int = DEFAULT_GRID,
                margin: float = DEFAULT_MARGIN) -> FibrationReport:
    return check(braid_power(b, r), grid, margin)
