"""Loops of monic polynomials and continuous tracking of their critical values.

For a braid with strands z_j(t) the loop is g_t(u) = prod (u - z_j(t)).  Its
critical points c_p(t) solve g_t'(c) = 0 and the critical values are
v_p(t) = g_t(c_p(t)).  Tracking matches critical points between neighbouring
samples, halving the step where the matching is ambiguous, and unwraps the
phase of every critical value along its branch.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .curves import TWO_PI, ParamBraid


class TrackingError(RuntimeError):
    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class NonConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class MonicPoly:
    """u^n + a_{n-1} u^{n-1} + ... + a_0, stored as ``coeffs = (a_0, ..., a_{n-1})``."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(a) for a in self.coeffs))
        if not self.coeffs:
            raise ValueError("degree must be >= 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def highest_first(self) -> np.ndarray:
        return np.array((1.0,) + self.coeffs[::-1], dtype=complex)

    def __call__(self, u):
        return horner(self.highest_first(), u)

    def derivative_coeffs(self) -> np.ndarray:
        """Coefficients of p', highest degree first."""
        n = self.degree
        full = self.highest_first()
        return full[:-1] * np.arange(n, 0, -1)


def expand(roots: np.ndarray) -> np.ndarray:
    """Monic coefficients (highest first) of prod (u - r), vectorized over leading axes."""
    roots = np.asarray(roots, dtype=complex)
    shape = roots.shape[:-1]
    out = np.zeros(shape + (roots.shape[-1] + 1,), dtype=complex)
    out[..., 0] = 1.0
    for k in range(roots.shape[-1]):
        r = roots[..., k:k + 1]
        out[..., 1:k + 2] = out[..., 1:k + 2] - r * out[..., 0:k + 1]
    return out


def horner(full: np.ndarray, u):
    acc = np.zeros(np.shape(u), dtype=complex) + full[0]
    for a in full[1:]:
        acc = acc * u + a
    return acc


def coeffs_from_roots(roots) -> MonicPoly:
    roots = np.atleast_1d(np.asarray(roots, dtype=complex))
    if roots.size == 0:
        raise ValueError("need at least one root")
    full = expand(roots)
    return MonicPoly(tuple(full[::-1][:-1]))


def _companion_eigs(dfull: np.ndarray) -> np.ndarray:
    """Roots of polynomials given highest-first, batched over the leading axis."""
    lead = dfull[..., :1]
    mono = dfull[..., 1:] / lead
    m = mono.shape[-1]
    if m == 0:
        return np.zeros(dfull.shape[:-1] + (0,), dtype=complex)
    comp = np.zeros(dfull.shape[:-1] + (m, m), dtype=complex)
    comp[..., 0, :] = -mono
    if m > 1:
        idx = np.arange(m - 1)
        comp[..., idx + 1, idx] = 1.0
    return np.linalg.eigvals(comp)


def aberth(full: np.ndarray, init: np.ndarray, tol: float = 1e-14, max_iter: int = 200) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration for all roots of ``full`` (highest first)."""
    z = np.array(init, dtype=complex)
    dfull = full[:-1] * np.arange(len(full) - 1, 0, -1)
    scale = max(1.0, float(np.max(np.abs(z)))) if z.size else 1.0
    for _ in range(max_iter):
        p = horner(full, z)
        dp = horner(dfull, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repel = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repel)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.max(np.abs(step)) <= tol * scale:
            return z
    raise NonConvergenceError("Aberth iteration did not converge")


def _clusters(c: np.ndarray, tol: float) -> np.ndarray:
    """Label points closer than ``tol`` (transitively) with a shared cluster id."""
    m = len(c)
    label = np.arange(m)
    for a in range(m):
        for b in range(a + 1, m):
            if abs(c[a] - c[b]) < tol and label[a] != label[b]:
                old, new = max(label[a], label[b]), min(label[a], label[b])
                label[label == old] = new
    return label


def _polish(c: np.ndarray, roots: np.ndarray, tol: float) -> np.ndarray:
    """Refine critical points by Newton on sum 1/(u - z_j); clusters are averaged.

    ``c`` has shape (T, m) and ``roots`` (T, n); the log-derivative form keeps
    relative accuracy for critical points sitting inside tight root clusters.
    """
    c = np.array(c, dtype=complex)
    m = c.shape[-1]
    if m > 1:
        gap = np.abs(c[:, :, None] - c[:, None, :]) + np.where(np.eye(m, dtype=bool), np.inf, 0.0)
        near = np.min(gap, axis=-1) < tol
    else:
        near = np.zeros(c.shape, dtype=bool)
    simple = ~near
    u = c.copy()
    for _ in range(4):
        d = u[:, :, None] - roots[:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.sum(1.0 / d, axis=-1)
            df = -np.sum(1.0 / d**2, axis=-1)
            step = f / df
        step = np.where(simple & np.isfinite(step), step, 0.0)
        u = u - step
    c = np.where(simple, u, c)
    for k in np.nonzero(near.any(axis=1))[0]:
        label = _clusters(c[k], tol)
        for lab in np.unique(label):
            members = label == lab
            if members.sum() > 1:
                c[k, members] = np.mean(c[k, members])
    return c


def critical_points(p: MonicPoly, init=None, tol: float = 1e-10) -> np.ndarray:
    """All n - 1 roots of p', with multiplicity.

    Cold start uses companion-matrix eigenvalues; ``init`` warm-starts an
    Aberth-Ehrlich iteration instead.
    """
    if p.degree < 2:
        raise ValueError("critical points need degree >= 2")
    dfull = p.derivative_coeffs()
    if init is None:
        c = _companion_eigs(dfull)
    else:
        c = aberth(dfull, np.asarray(init, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(p.coeffs))) ** (1.0 / p.degree))
    label = _clusters(c, 1e-7 * scale)
    for lab in np.unique(label):
        members = label == lab
        if members.sum() > 1:
            c[members] = np.mean(c[members])
    dd = np.polyder(dfull)
    for k in range(len(c)):
        if (label == label[k]).sum() > 1:
            continue
        for _ in range(3):
            fd = np.polyval(dd, c[k])
            if fd == 0:
                break
            c[k] = c[k] - np.polyval(dfull, c[k]) / fd
    resid = np.abs(np.polyval(dfull, c))
    if np.any(resid > tol * scale ** (p.degree - 1) * p.degree):
        raise NonConvergenceError(f"critical point residual {resid.max():.3g}")
    return c


def critical_values(p: MonicPoly, cps) -> np.ndarray:
    return horner(p.highest_first(), np.asarray(cps, dtype=complex))


@dataclass(frozen=True)
class CriticalTracks:
    t: np.ndarray            # (N + 1,) increasing, t[0] = 0, t[-1] = 2 pi
    points: np.ndarray       # (N + 1, n - 1) critical points per branch
    values: np.ndarray       # (N + 1, n - 1) critical values
    phase: np.ndarray        # (N + 1, n - 1) unwrapped arg of values
    dphase: np.ndarray       # (N + 1, n - 1) analytic d arg v / dt
    multiplicity: np.ndarray  # (N + 1, n - 1) size of the cluster each point sits in
    monodromy: tuple[int, ...]  # branch p at 2 pi continues as branch monodromy[p] at 0
    scale: float

    @property
    def branches(self) -> int:
        return self.points.shape[1]

    def windings(self) -> np.ndarray:
        return (self.phase[-1] - self.phase[0]) / TWO_PI

    def total_winding(self) -> float:
        return float(np.sum(self.windings()))

    def to_csv(self, dphase: np.ndarray | None = None) -> str:
        d = self.dphase if dphase is None else dphase
        lines = ["t,branch,re_c,im_c,re_v,im_v,phase,dphase_dt"]
        for k, tk in enumerate(self.t):
            for p in range(self.branches):
                c, v = self.points[k, p], self.values[k, p]
                lines.append(f"{tk:.12g},{p},{c.real:.12g},{c.imag:.12g},{v.real:.12g},"
                             f"{v.imag:.12g},{self.phase[k, p]:.12g},{d[k, p]:.12g}")
        return "\n".join(lines) + "\n"


class _Sampler:
    """Critical data of g_t at arbitrary t."""

    def __init__(self, b: ParamBraid, warm: bool):
        self.b = b
        self.warm = warm
        self.scale = b.scale()
        self.cluster_tol = 1e-7 * self.scale

    def batch(self, t: np.ndarray, init: np.ndarray | None = None):
        z = self.b.positions(t)
        full = expand(z)
        dfull = full[..., :-1] * np.arange(self.b.n, 0, -1)
        if self.warm and init is not None:
            c = np.array([aberth(dfull[k], init) for k in range(len(t))])
        else:
            c = _companion_eigs(dfull)
        return _polish(c, z, self.cluster_tol), z

    def values(self, t: np.ndarray, c: np.ndarray, z: np.ndarray):
        dz = self.b.velocities(t)
        d = c[..., :, None] - z[..., None, :]
        v = np.prod(d, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = -np.sum(dz[..., None, :] / d, axis=-1)
        return v, rate.imag


def _match(prev: np.ndarray, cur: np.ndarray, tol: float) -> tuple[np.ndarray, bool]:
    """Assignment prev[p] -> cur[perm[p]] and whether it is unambiguous."""
    dist = np.abs(prev[:, None] - cur[None, :])
    rows, cols = linear_sum_assignment(dist)
    perm = np.empty(len(prev), dtype=int)
    perm[rows] = cols
    label = _clusters(cur, tol)
    for p in range(len(prev)):
        d = dist[p, perm[p]]
        others = label != label[perm[p]]
        if np.any(others) and np.min(dist[p, others]) <= 2.0 * d:
            return perm, False
    return perm, True


def thread_count() -> int:
    """Worker cap for independent sampling, from ``PFIBER_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("PFIBER_THREADS", "1")))
    except ValueError:
        return 1


def _sample_all(sampler: _Sampler, t: np.ndarray, threads: int) -> np.ndarray:
    if threads <= 1 or len(t) < 256:
        return sampler.batch(t)[0]
    chunks = np.array_split(t, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda chunk: sampler.batch(chunk)[0], chunks))
    return np.concatenate(parts)


def uniform_grid(grid_size: int) -> np.ndarray:
    return np.linspace(0.0, TWO_PI, grid_size + 1)


def track(b: ParamBraid, grid_size: int = 4096, t: np.ndarray | None = None,
          warm: bool = False, min_step: float = TWO_PI / 2**20,
          threads: int | None = None) -> CriticalTracks:
    """Track all critical points and values of g_t around the loop.

    ``t`` overrides the uniform grid; it must start at 0 and end at 2 pi.
    Cold-start sampling is split over ``threads`` workers (default from
    ``PFIBER_THREADS``); matching and unwrapping stay sequential.
    """
    if b.n < 2:
        raise TrackingError("a braid with one strand has no critical points")
    if t is None:
        if grid_size < 64:
            raise ValueError("grid_size must be >= 64")
        t = uniform_grid(grid_size)
    t = np.asarray(t, dtype=float)
    sampler = _Sampler(b, warm)
    tol = sampler.cluster_tol

    if warm:
        c0, _ = sampler.batch(t[:1])
        cand = [c0[0]]
        for k in range(1, len(t)):
            ck, _ = sampler.batch(t[k:k + 1], init=cand[-1])
            cand.append(ck[0])
        cand = np.array(cand)
    else:
        cand = _sample_all(sampler, t, thread_count() if threads is None else threads)

    ts = [t[0]]
    pts = [cand[0]]

    def advance(t_lo, c_lo, t_hi, c_hi, depth=0):
        perm, ok = _match(c_lo, c_hi, tol)
        if ok:
            return [(t_hi, c_hi[perm])]
        if t_hi - t_lo < min_step:
            raise TrackingError(f"ambiguous critical point matching near t={t_lo:.9g}", t_lo)
        t_mid = 0.5 * (t_lo + t_hi)
        c_mid = sampler.batch(np.array([t_mid]), init=c_lo if warm else None)[0][0]
        left = advance(t_lo, c_lo, t_mid, c_mid, depth + 1)
        right = advance(t_mid, left[-1][1], t_hi, c_hi, depth + 1)
        return left + right

    for k in range(1, len(t)):
        for tk, ck in advance(ts[-1], pts[-1], t[k], cand[k]):
            ts.append(tk)
            pts.append(ck)

    ts = np.array(ts)
    pts = np.array(pts)
    z = b.positions(ts)
    vals, rate = sampler.values(ts, pts, z)

    steps = np.angle(vals[1:] / vals[:-1])
    if np.any(np.abs(steps) > 0.5 * math.pi):
        k = int(np.argmax(np.max(np.abs(steps), axis=1)))
        raise TrackingError(f"critical value phase jumps by > pi/2 near t={ts[k]:.9g}; "
                            "refine the grid", ts[k])
    phase = np.angle(vals[0])[None, :] + np.concatenate(
        [np.zeros((1, vals.shape[1])), np.cumsum(steps, axis=0)])

    mult = np.array([np.bincount(lab)[lab] for lab in (_clusters(row, tol) for row in pts)])
    end_perm, _ = _match(pts[-1], pts[0], tol)
    return CriticalTracks(ts, pts, vals, phase, rate, mult, tuple(int(q) for q in end_perm),
                          sampler.scale)


def phase_derivative(tracks: CriticalTracks, method: str = "central") -> np.ndarray:
    """Per-branch d arg v / dt at every sample.

    ``central`` differentiates the unwrapped phase with second-order
    differences, glued periodically through the monodromy; ``analytic`` returns
    Im(v'/v) computed from the strand velocities during tracking.
    """
    if method == "analytic":
        return tracks.dphase
    if method != "central":
        raise ValueError(f"unknown method {method!r}")
    t, phi, mono = tracks.t, tracks.phase, tracks.monodromy
    pred = np.empty(len(mono), dtype=int)
    pred[list(mono)] = np.arange(len(mono))
    out = np.empty_like(phi)
    for p in range(phi.shape[1]):
        q_prev, q_next = pred[p], mono[p]
        before = phi[-2, q_prev] - (phi[-1, q_prev] - phi[0, p])
        after = phi[1, q_next] + (phi[-1, p] - phi[0, q_next])
        ext_t = np.concatenate([[t[-2] - TWO_PI], t, [TWO_PI + t[1]]])
        ext_phi = np.concatenate([[before], phi[:, p], [after]])
        out[:, p] = np.gradient(ext_phi, ext_t)[1:-1]
    return out
