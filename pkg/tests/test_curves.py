import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfiber import braidword as bw
from pfiber.curves import (LIBRARY_NAMES, TWO_PI, ComponentCurve, CurveError, ParamBraid, TrigTerm,
                           braid_power, deriv, eps_bound, library, rotate, satellite, twist, validate)
from pfiber.curves import eval as braid_eval

RNG = np.random.default_rng(7)
RANDOM_T = RNG.uniform(0.0, TWO_PI, 64)


def point_sets_close(a, b, tol):
    """Compare two (T, n) arrays row by row as unordered sets."""
    for row_a, row_b in zip(a, b):
        dist = np.abs(row_a[:, None] - row_b[None, :])
        if np.max(np.min(dist, axis=1)) > tol or np.max(np.min(dist, axis=0)) > tol:
            return False
    return True


class TestEvaluation:
    def test_hopf_at_zero(self):
        pts = braid_eval(library("hopf"), 0.0)
        assert [(i, j) for i, j, _ in pts] == [(1, 1), (2, 1)]
        assert np.allclose([z for *_, z in pts], [1, -1], atol=1e-15)

    def test_sigma1_at_zero(self):
        pts = [z for *_, z in braid_eval(library("sigma1_2strand"), 0.0)]
        # closed form exp(i(t + 2 pi l)/2), l = 1, 2
        assert np.allclose(sorted(pts, key=lambda z: z.real), [-1, 1], atol=1e-15)

    def test_hopf_derivative(self):
        assert abs(deriv(library("hopf"), 0.0)[0][2] - 1j) < 1e-15

    @pytest.mark.parametrize("name", LIBRARY_NAMES)
    def test_derivative_matches_finite_difference(self, name):
        b = library(name)
        h = 1e-6
        fd = (b.positions(RANDOM_T + h) - b.positions(RANDOM_T - h)) / (2 * h)
        assert np.max(np.abs(fd - b.velocities(RANDOM_T))) < 1e-8

    def test_figure8_formula(self):
        b = library("figure8")
        direct = np.stack([np.cos((2 * RANDOM_T + TWO_PI * ell) / 3)
                           + 0.5j * np.sin(2 * (2 * RANDOM_T + TWO_PI * ell) / 3) for ell in (1, 2, 3)],
                          axis=1)
        assert point_sets_close(b.positions(RANDOM_T), direct, 1e-12)

    def test_trefoil_formula(self):
        direct = np.stack([np.exp(1j * (-2 * RANDOM_T + TWO_PI * ell) / 3) for ell in (1, 2, 3)], axis=1)
        assert point_sets_close(library("trefoil_neg").positions(RANDOM_T), direct, 1e-12)

    def test_sigma1_formula(self):
        direct = np.stack([np.exp(1j * (RANDOM_T + TWO_PI * ell) / 2) for ell in (1, 2)], axis=1)
        assert point_sets_close(library("sigma1_2strand").positions(RANDOM_T), direct, 1e-12)


class TestLibrary:
    def test_component_counts(self):
        assert len(library("hopf").components) == 2
        f8 = library("figure8")
        assert f8.n == 3 and len(f8.components) == 1

    def test_figure8_terms(self):
        terms = library("figure8").components[0].terms
        assert sorted(t.freq for t in terms) == [Fraction(-4, 3), Fraction(-2, 3), Fraction(2, 3), Fraction(4, 3)]
        assert sorted(t.coeff.real for t in terms) == [-0.25, 0.25, 0.5, 0.5]

    def test_unknown(self):
        with pytest.raises(CurveError):
            library("unknot")


class TestComponentCurve:
    def test_frequency_invariant(self):
        with pytest.raises(CurveError):
            ComponentCurve(2, (TrigTerm(1, Fraction(1, 3)),))

    @pytest.mark.parametrize("name", LIBRARY_NAMES)
    def test_closure_is_exact(self, name):
        b = library(name)
        start = b.positions(RANDOM_T)
        end = b.positions(RANDOM_T + TWO_PI)
        assert np.max(np.abs(end - start[:, b.closure_map()])) < 1e-12

    def test_closure_map_is_cycle_per_component(self):
        b = library("figure8")
        assert b.closure_map() == [1, 2, 0]


class TestJson:
    @pytest.mark.parametrize("name", LIBRARY_NAMES)
    def test_round_trip(self, name):
        b = library(name)
        again = ParamBraid.from_json(json.loads(b.dumps()))
        assert again == b

    @pytest.mark.parametrize("bad", [
        {},
        {"components": [{"strands": 2, "terms": [{"re": 1, "im": 0, "freq_num": 1, "freq_den": 3}]}]},
        {"components": [{"strands": 2, "terms": [{"re": 1, "im": 0, "freq_num": 0.5, "freq_den": 1}]}]},
        {"components": [{"strands": 2, "terms": [{"re": 1, "im": 0, "freq_num": 1, "freq_den": 0}]}]},
        {"components": [{"strands": 2.0, "terms": []}]},
    ])
    def test_rejects(self, bad):
        with pytest.raises(CurveError):
            ParamBraid.from_json(bad)


class TestTwist:
    def test_zero_is_identity(self):
        assert twist(library("hopf"), 0) == library("hopf")

    def test_hopf_once(self):
        z = twist(library("hopf"), 1).positions(RANDOM_T)
        assert np.allclose(z[:, 0], np.exp(2j * RANDOM_T)) and np.allclose(z[:, 1], -np.exp(2j * RANDOM_T))

    @pytest.mark.parametrize("name", LIBRARY_NAMES)
    @pytest.mark.parametrize("k", [-2, 1, 3])
    def test_rotation_of_point_set(self, name, k):
        b = library(name)
        expected = np.exp(1j * k * RANDOM_T)[:, None] * b.positions(RANDOM_T)
        assert np.max(np.abs(twist(b, k).positions(RANDOM_T) - expected)) < 1e-12


class TestPower:
    def test_sigma1_squared_is_hopf(self):
        sq = braid_power(library("sigma1_2strand"), 2)
        assert len(sq.components) == 2
        assert point_sets_close(sq.positions(RANDOM_T), library("hopf").positions(RANDOM_T), 1e-12)

    def test_power_one(self):
        b = library("figure8")
        assert point_sets_close(braid_power(b, 1).positions(RANDOM_T), b.positions(RANDOM_T), 1e-14)

    def test_zero_power(self):
        with pytest.raises(CurveError):
            braid_power(library("hopf"), 0)

    @pytest.mark.parametrize("name", LIBRARY_NAMES)
    @pytest.mark.parametrize("r", [-3, -2, -1, 1, 2, 3])
    def test_time_rescaling(self, name, r):
        b = library(name)
        lhs = braid_power(b, r).positions(RANDOM_T)
        rhs = b.positions(np.mod(r * RANDOM_T, TWO_PI))
        assert point_sets_close(lhs, rhs, 1e-12)

    def test_component_split(self):
        # gcd(2, 2) = 2 components of one strand; gcd(3, 2) = 1 component of two strands
        assert [c.strands for c in braid_power(library("sigma1_2strand"), 2).components] == [1, 1]
        assert [c.strands for c in braid_power(library("sigma1_2strand"), 3).components] == [2]


class TestValidate:
    def test_hopf_gap(self):
        v = validate(library("hopf"), 256)
        assert abs(v.min_gap - 2.0) < 1e-12
        assert v.closure_residual < 1e-12

    def test_figure8_gap_positive(self):
        assert validate(library("figure8"), 256).min_gap > 0.5

    def test_grid_size(self):
        with pytest.raises(CurveError):
            validate(library("hopf"), 1)


class TestSatellite:
    def example1(self):
        return satellite(library("hopf"), [library("trefoil_neg"), library("figure8")], 0.1)

    def test_strand_count(self):
        sat = self.example1()
        assert sat.n == 6
        assert [c.strands for c in sat.components] == [3, 3]

    def test_formula(self):
        sat = self.example1()
        pattern = library("hopf").positions(RANDOM_T)
        tre = library("trefoil_neg").positions(RANDOM_T)
        f8 = library("figure8").positions(RANDOM_T)
        expected = np.concatenate([pattern[:, :1] + 0.1 * tre, pattern[:, 1:] + 0.1 * f8], axis=1)
        assert point_sets_close(sat.positions(RANDOM_T), expected, 1e-12)

    def test_multi_strand_pattern_offsets(self):
        pattern = library("figure8")
        comp = library("sigma1_2strand")
        eps = 0.01
        sat = satellite(pattern, [comp], eps)
        z = pattern.positions(RANDOM_T)
        expected = np.concatenate(
            [z[:, j - 1:j] + eps * comp.positions((RANDOM_T + TWO_PI * (j - 1)) / 3) for j in (1, 2, 3)], axis=1)
        assert point_sets_close(sat.positions(RANDOM_T), expected, 1e-12)

    def test_closure_components(self):
        # the figure-eight pattern has one 3-strand cycle, sigma_1 one 2-strand cycle
        sat = satellite(library("figure8"), [library("sigma1_2strand")], 0.01)
        assert [c.strands for c in sat.components] == [6]
        sat9 = satellite(library("figure8"), [library("sigma1_2strand")], 0.01, [2])
        assert [c.strands for c in sat9.components] == [3, 3]

    def test_zero_companion(self):
        zero = ParamBraid((ComponentCurve(1, (TrigTerm(0, Fraction(0)),)),))
        pattern = library("hopf")
        sat = satellite(pattern, [zero, zero], 0.3)
        assert point_sets_close(sat.positions(RANDOM_T), pattern.positions(RANDOM_T), 1e-15)

    def test_errors(self):
        h, t, f, s = (library(n) for n in LIBRARY_NAMES)
        with pytest.raises(CurveError):
            satellite(h, [t], 0.1)
        with pytest.raises(CurveError):
            satellite(h, [t, s], 0.1)
        with pytest.raises(CurveError):
            satellite(h, [t, f], 0.0)
        with pytest.raises(CurveError):
            satellite(h, [t, f], 0.1, [1])
        with pytest.raises(CurveError, match="too large"):
            satellite(f, [s], 0.5)

    def test_eps_bound_is_safe(self):
        h, t, f, _ = (library(n) for n in LIBRARY_NAMES)
        eps = eps_bound(h, [t, f])
        assert eps == pytest.approx(0.5 * 2.0 / 1.5)
        sat = satellite(h, [t, f], 0.999 * eps)
        assert validate(sat).min_gap > 0

    @settings(max_examples=20, deadline=None)
    @given(st.floats(1e-4, 0.3), st.sampled_from([-3, -2, -1, 1, 2, 3]))
    def test_cycle_arithmetic(self, eps, r):
        sat = satellite(library("figure8"), [library("sigma1_2strand")], eps, [r])
        g = math.gcd(r, 2)
        assert sat.n == 6
        assert [c.strands for c in sat.components] == [3 * (2 // g)] * g


def test_rotate_preserves_gaps():
    b = library("figure8")
    assert validate(rotate(b, 0.3)).min_gap == pytest.approx(validate(b).min_gap)
