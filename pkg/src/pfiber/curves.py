"""Geometric braids whose strands are trigonometric polynomials.

A closure component made of ``n_i`` strands is one curve
``Z(t) = sum c * exp(i f t)`` with every frequency ``f`` a multiple of
``1/n_i``.  Strand ``j`` (1-based) is ``Z(t + 2 pi (j - 1))``, so strand ``j``
ends where strand ``j + 1`` starts and closure is an identity, not a tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class CurveError(ValueError):
    pass


def _unit_root(x: Fraction) -> complex:
    """exp(2 pi i x), exact at quarter turns."""
    x = x - math.floor(x)
    quarter = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if x in quarter:
        return quarter[x]
    return complex(np.exp(2j * math.pi * float(x)))


@dataclass(frozen=True)
class TrigTerm:
    coeff: complex
    freq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "freq", Fraction(self.freq))


@dataclass(frozen=True)
class ComponentCurve:
    strands: int
    terms: tuple[TrigTerm, ...]
    _coeffs: np.ndarray = field(init=False, repr=False, compare=False)
    _freqs: np.ndarray = field(init=False, repr=False, compare=False)
    _shifts: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.strands < 1:
            raise CurveError("a component needs at least one strand")
        terms = tuple(self.terms)
        for term in terms:
            if (term.freq * self.strands).denominator != 1:
                raise CurveError(
                    f"frequency {term.freq} is not a multiple of 1/{self.strands}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_coeffs", np.array([t.coeff for t in terms], dtype=complex))
        object.__setattr__(self, "_freqs", np.array([float(t.freq) for t in terms]))
        # _shifts[j, m] = exp(i f_m 2 pi j): phase of term m on strand j+1
        shifts = np.array([[_unit_root(t.freq * j) for t in terms] for j in range(self.strands)],
                          dtype=complex).reshape(self.strands, len(terms))
        object.__setattr__(self, "_shifts", shifts)

    def _basis(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * t[..., None] * self._freqs)

    def value(self, t):
        """Z(t), strand 1."""
        return self._basis(t) @ self._coeffs

    def positions(self, t):
        """Array of shape ``t.shape + (strands,)``."""
        return self._basis(t) @ (self._coeffs * self._shifts).T

    def velocities(self, t):
        return self._basis(t) @ (1j * self._freqs * self._coeffs * self._shifts).T

    def max_radius(self) -> float:
        return float(np.sum(np.abs(self._coeffs)))


@dataclass(frozen=True)
class ParamBraid:
    components: tuple[ComponentCurve, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise CurveError("a braid needs at least one component")

    @property
    def n(self) -> int:
        return sum(c.strands for c in self.components)

    @property
    def labels(self) -> list[tuple[int, int]]:
        return [(i, j) for i, c in enumerate(self.components, start=1)
                for j in range(1, c.strands + 1)]

    def positions(self, t):
        return np.concatenate([c.positions(t) for c in self.components], axis=-1)

    def velocities(self, t):
        return np.concatenate([c.velocities(t) for c in self.components], axis=-1)

    def closure_map(self) -> list[int]:
        """0-based strand index reached by each strand at t = 2 pi."""
        out = []
        base = 0
        for c in self.components:
            out.extend(base + (j + 1) % c.strands for j in range(c.strands))
            base += c.strands
        return out

    def scale(self, grid_size: int = 1024) -> float:
        t = np.linspace(0.0, TWO_PI, grid_size, endpoint=False)
        return float(max(np.abs(self.positions(t)).max(), 1e-300))

    def to_json(self) -> dict:
        comps = []
        for c in self.components:
            terms = [{"re": term.coeff.real, "im": term.coeff.imag,
                      "freq_num": term.freq.numerator, "freq_den": term.freq.denominator}
                     for term in c.terms]
            comps.append({"strands": c.strands, "terms": terms})
        return {"components": comps}

    @classmethod
    def from_json(cls, data: dict) -> ParamBraid:
        try:
            comps = []
            for c in data["components"]:
                terms = []
                for term in c["terms"]:
                    num, den = term["freq_num"], term["freq_den"]
                    if not (isinstance(num, int) and isinstance(den, int)) or den <= 0:
                        raise CurveError(f"bad frequency {num}/{den}")
                    terms.append(TrigTerm(complex(term["re"], term["im"]), Fraction(num, den)))
                strands = c["strands"]
                if not isinstance(strands, int):
                    raise CurveError("strands must be an integer")
                comps.append(ComponentCurve(strands, tuple(terms)))
        except (KeyError, TypeError) as exc:
            raise CurveError(f"malformed braid JSON: {exc}") from exc
        return cls(tuple(comps))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def eval(b: ParamBraid, t: float) -> list[tuple[int, int, complex]]:  # noqa: A001
    z = b.positions(np.array(float(t)))
    return [(i, j, complex(v)) for (i, j), v in zip(b.labels, z)]


def deriv(b: ParamBraid, t: float) -> list[tuple[int, int, complex]]:
    dz = b.velocities(np.array(float(t)))
    return [(i, j, complex(v)) for (i, j), v in zip(b.labels, dz)]


def _curve(strands: int, *terms: tuple[complex, Fraction]) -> ComponentCurve:
    return ComponentCurve(strands, tuple(TrigTerm(c, f) for c, f in terms))


LIBRARY_NAMES = ("hopf", "trefoil_neg", "figure8", "sigma1_2strand")


def library(name: str) -> ParamBraid:
    if name == "hopf":
        return ParamBraid((_curve(1, (1, Fraction(1))), _curve(1, (-1, Fraction(1)))))
    if name == "trefoil_neg":
        # exp(i(-2t + 2 pi l)/3), l = 1, 2, 3
        return ParamBraid((_curve(3, (1, Fraction(-2, 3))),))
    if name == "figure8":
        # cos((2t + 2 pi l)/3) + (i/2) sin(2(2t + 2 pi l)/3)
        return ParamBraid((_curve(3, (0.5, Fraction(2, 3)), (0.5, Fraction(-2, 3)),
                                  (0.25, Fraction(4, 3)), (-0.25, Fraction(-4, 3))),))
    if name == "sigma1_2strand":
        # exp(i(t + 2 pi l)/2), l = 1, 2
        return ParamBraid((_curve(2, (-1, Fraction(1, 2))),))
    raise CurveError(f"unknown library braid {name!r}; choose from {', '.join(LIBRARY_NAMES)}")


def twist(b: ParamBraid, k: int) -> ParamBraid:
    """Multiply every strand by exp(ikt), i.e. add k full twists."""
    return ParamBraid(tuple(
        ComponentCurve(c.strands, tuple(TrigTerm(t.coeff, t.freq + k) for t in c.terms))
        for c in b.components))


def braid_power(b: ParamBraid, r: int) -> ParamBraid:
    """Strand j follows Z(r t + 2 pi (j - 1)); the root set at t is that of ``b`` at r t."""
    if r == 0:
        raise CurveError("braid power must be non-zero")
    comps = []
    for c in b.components:
        g = math.gcd(r, c.strands)
        for start in range(g):
            terms = tuple(TrigTerm(t.coeff * _unit_root(t.freq * start), t.freq * r) for t in c.terms)
            comps.append(ComponentCurve(c.strands // g, terms))
    return ParamBraid(tuple(comps))


@dataclass(frozen=True)
class Validation:
    min_gap: float
    argmin_t: float
    closure_residual: float
    grid_size: int

    def ok(self, tol: float) -> bool:
        return self.min_gap > tol


def validate(b: ParamBraid, grid_size: int = 1024) -> Validation:
    if grid_size < 2:
        raise CurveError("grid_size must be >= 2")
    t = np.linspace(0.0, TWO_PI, grid_size, endpoint=False)
    z = b.positions(t)
    if b.n == 1:
        gaps = np.full(grid_size, np.inf)
    else:
        iu, ju = np.triu_indices(b.n, 1)
        gaps = np.abs(z[:, iu] - z[:, ju]).min(axis=1)
    k = int(np.argmin(gaps))
    end = b.positions(np.array(TWO_PI))
    start = b.positions(np.array(0.0))
    residual = float(np.max(np.abs(end - start[b.closure_map()])))
    return Validation(float(gaps[k]), float(t[k]), residual, grid_size)


def eps_bound(pattern: ParamBraid, companions: Sequence[ParamBraid], grid_size: int = 1024) -> float:
    """Sufficient bound: eps * max companion radius < half the pattern's minimum gap."""
    gap = validate(pattern, grid_size).min_gap
    radius = max(max(c.max_radius() for c in comp.components) for comp in companions)
    return 0.5 * gap / radius if radius > 0 else math.inf


def satellite(pattern: ParamBraid, companions: Sequence[ParamBraid], eps: float,
              powers: Sequence[int] | None = None, grid_size: int = 1024) -> ParamBraid:
    """Replace strand (i, j) of ``pattern`` by an eps-scaled copy of companion i.

    The (i, j, k, l) strand sits at z_ij(t) + eps z^i_kl((t + 2 pi (j - 1)) / n_i).
    Per pattern component i and companion component k this is again one
    closed curve W(tau) = Z_i(tau) + eps Z^i_k(tau / n_i) on n_i * n_ik strands.
    """
    companions = list(companions)
    if len(companions) != len(pattern.components):
        raise CurveError(f"need one companion per pattern component "
                         f"({len(pattern.components)}), got {len(companions)}")
    if powers is None:
        powers = [1] * len(companions)
    if len(powers) != len(companions):
        raise CurveError("need one power per companion")
    if len({c.n for c in companions}) > 1:
        raise CurveError(f"companions must share a strand count, got {[c.n for c in companions]}")
    if not eps > 0:
        raise CurveError("eps must be positive")
    companions = [braid_power(c, r) for c, r in zip(companions, powers)]

    comps = []
    for zi, comp in zip(pattern.components, companions):
        for zk in comp.components:
            terms = list(zi.terms)
            terms.extend(TrigTerm(eps * t.coeff, t.freq / zi.strands) for t in zk.terms)
            comps.append(ComponentCurve(zi.strands * zk.strands, tuple(terms)))
    out = ParamBraid(tuple(comps))
    check = validate(out, grid_size)
    if not check.ok(1e-9 * out.scale()):
        raise CurveError(f"eps={eps} too large: strands collide near t={check.argmin_t:.6g}")
    return out


def rotate(b: ParamBraid, angle: float) -> ParamBraid:
    """Rigid rotation of the plane by ``angle``; the braid type is unchanged."""
    if angle == 0.0:
        return b
    w = complex(np.exp(1j * angle))
    return ParamBraid(tuple(
        ComponentCurve(c.strands, tuple(TrigTerm(t.coeff * w, t.freq) for t in c.terms))
        for c in b.components))
