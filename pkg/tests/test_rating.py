"""Rating update checks against direct numerical integration.

The oracle never uses the closed-form correction functions: truncated
moments come from quadrature over the unit normal, and full updates from
quadrature over the exact one-game posterior (Gaussian prior times the
win or draw probability as a function of one player's skill).
"""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from cheqqers.rating import (
    A_WINS,
    B_WINS,
    DRAW,
    Rating,
    TrueSkillParams,
    trueskill_update,
    truncated_gaussian_moments,
)

SQRT2 = math.sqrt(2.0)


def npdf(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def ncdf(x):
    return 0.5 * math.erfc(-x / SQRT2)


def moments_by_quadrature(t, eps, is_draw):
    """v and w from integrating the truncated unit normal directly."""
    if is_draw:
        lo, hi = -eps - t, eps - t
    else:
        lo, hi = eps - t, 40.0
    m0 = integrate.quad(npdf, lo, hi, epsabs=1e-13)[0]
    m1 = integrate.quad(lambda u: u * npdf(u), lo, hi, epsabs=1e-13)[0]
    m2 = integrate.quad(lambda u: u * u * npdf(u), lo, hi, epsabs=1e-13)[0]
    mean = m1 / m0
    var = m2 / m0 - mean * mean
    return mean, 1.0 - var


def posterior_by_quadrature(mu_s, sig2_s, likelihood):
    """Moments of N(mu_s, sig2_s) reweighted by likelihood(s).

    The opponent's uncertainty is baked into the likelihood by the
    caller; integration runs wide enough that the tails are dust.
    """
    sd = math.sqrt(sig2_s)
    lo, hi = mu_s - 12 * sd, mu_s + 12 * sd

    def f(s, k):
        z = (s - mu_s) / sd
        return s**k * npdf(z) / sd * likelihood(s)

    z0 = integrate.quad(f, lo, hi, args=(0,), epsabs=1e-12, limit=200)[0]
    z1 = integrate.quad(f, lo, hi, args=(1,), epsabs=1e-12, limit=200)[0]
    z2 = integrate.quad(f, lo, hi, args=(2,), epsabs=1e-12, limit=200)[0]
    mean = z1 / z0
    var = z2 / z0 - mean * mean
    return mean, math.sqrt(var)


def oracle_update(ra, rb, result, params):
    """Full update by posterior integration, one player at a time."""
    va = ra.sigma**2 + params.tau**2
    vb = rb.sigma**2 + params.tau**2
    margin = params.draw_margin()
    sa = math.sqrt(2 * params.beta**2 + vb)
    sb = math.sqrt(2 * params.beta**2 + va)

    def like_a(s):
        if result == A_WINS:
            return ncdf((s - rb.mu - margin) / sa)
        if result == B_WINS:
            return ncdf((rb.mu - s - margin) / sa)
        return ncdf((margin - (s - rb.mu)) / sa) - ncdf(
            (-margin - (s - rb.mu)) / sa
        )

    def like_b(s):
        if result == A_WINS:
            return ncdf((ra.mu - s - margin) / sb)
        if result == B_WINS:
            return ncdf((s - ra.mu - margin) / sb)
        return ncdf((margin - (ra.mu - s)) / sb) - ncdf(
            (-margin - (ra.mu - s)) / sb
        )

    mu_a, sig_a = posterior_by_quadrature(ra.mu, va, like_a)
    mu_b, sig_b = posterior_by_quadrature(rb.mu, vb, like_b)
    return Rating(mu_a, sig_a), Rating(mu_b, sig_b)


class TestMoments:
    def test_zero_point_closed_form(self):
        v, w = truncated_gaussian_moments(0.0, 0.0, False)
        assert abs(v - math.sqrt(2.0 / math.pi)) < 1e-12
        assert abs(w - 2.0 / math.pi) < 1e-12

    def test_far_ahead_win_barely_moves(self):
        v, w = truncated_gaussian_moments(12.0, 0.0, False)
        assert 0.0 <= v < 1e-20
        assert 0.0 <= w < 1e-18

    @pytest.mark.parametrize("eps", [0.0, 0.1, 0.7404])
    def test_win_grid_matches_quadrature(self, eps):
        t = -5.0
        while t <= 5.0:
            v, w = truncated_gaussian_moments(t, eps, False)
            v_ref, w_ref = moments_by_quadrature(t, eps, False)
            assert abs(v - v_ref) < 1e-6, (t, eps)
            assert abs(w - w_ref) < 1e-6, (t, eps)
            t += 0.25

    @pytest.mark.parametrize("eps", [0.05, 0.3, 0.7404])
    def test_draw_grid_matches_quadrature(self, eps):
        t = -5.0
        while t <= 5.0:
            v, w = truncated_gaussian_moments(t, eps, True)
            v_ref, w_ref = moments_by_quadrature(t, eps, True)
            assert abs(v - v_ref) < 1e-6, (t, eps)
            assert abs(w - w_ref) < 1e-6, (t, eps)
            t += 0.25

    def test_tail_series_continues_the_ratio(self):
        # both the erfc route and the series are valid around the
        # switchover; they must agree there
        for x in [-35.0, -33.0, -30.5, -30.0, -29.5]:
            direct = npdf(x) / ncdf(x)
            v, _ = truncated_gaussian_moments(x, 0.0, False)
            assert abs(v - direct) / direct < 1e-9

    def test_draw_moments_are_odd_even_in_t(self):
        for t in [0.3, 1.7, 4.2]:
            v1, w1 = truncated_gaussian_moments(t, 0.5, True)
            v2, w2 = truncated_gaussian_moments(-t, 0.5, True)
            assert v1 == -v2
            assert w1 == w2


class TestUpdate:
    def test_fresh_ratings_win_direction(self):
        a, b = trueskill_update(Rating(), Rating(), A_WINS)
        assert a.mu > 25.0 > b.mu
        assert a.sigma == b.sigma < 25.0 / 3.0

    def test_fresh_ratings_match_oracle(self):
        params = TrueSkillParams()
        a, b = trueskill_update(Rating(), Rating(), A_WINS, params)
        oa, ob = oracle_update(Rating(), Rating(), A_WINS, params)
        assert abs(a.mu - oa.mu) < 1e-6
        assert abs(a.sigma - oa.sigma) < 1e-6
        assert abs(b.mu - ob.mu) < 1e-6
        assert abs(b.sigma - ob.sigma) < 1e-6

    def test_draw_between_equals_keeps_mu(self):
        a, b = trueskill_update(Rating(), Rating(), DRAW)
        assert a.mu == b.mu == 25.0
        assert a.sigma == b.sigma < 25.0 / 3.0

    def test_randomized_updates_match_oracle(self):
        rng = random.Random(7)
        params = TrueSkillParams()
        for _ in range(40):
            ra = Rating(rng.uniform(0, 50), rng.uniform(1, 10))
            rb = Rating(rng.uniform(0, 50), rng.uniform(1, 10))
            result = rng.choice([A_WINS, B_WINS, DRAW])
            a, b = trueskill_update(ra, rb, result, params)
            oa, ob = oracle_update(ra, rb, result, params)
            ctx = (ra, rb, result)
            assert abs(a.mu - oa.mu) < 1e-6, ctx
            assert abs(a.sigma - oa.sigma) < 1e-6, ctx
            assert abs(b.mu - ob.mu) < 1e-6, ctx
            assert abs(b.sigma - ob.sigma) < 1e-6, ctx

    @given(
        mu_a=st.floats(0, 50),
        mu_b=st.floats(0, 50),
        sig_a=st.floats(1, 10),
        sig_b=st.floats(1, 10),
        result=st.sampled_from([A_WINS, B_WINS, DRAW]),
    )
    @settings(max_examples=200, deadline=None)
    def test_swap_symmetry(self, mu_a, mu_b, sig_a, sig_b, result):
        ra, rb = Rating(mu_a, sig_a), Rating(mu_b, sig_b)
        flipped = {A_WINS: B_WINS, B_WINS: A_WINS, DRAW: DRAW}[result]
        a1, b1 = trueskill_update(ra, rb, result)
        b2, a2 = trueskill_update(rb, ra, flipped)
        assert a1 == a2
        assert b1 == b2

    @given(
        mu_a=st.floats(0, 50),
        mu_b=st.floats(0, 50),
        sig_a=st.floats(1, 10),
        sig_b=st.floats(1, 10),
        result=st.sampled_from([A_WINS, B_WINS, DRAW]),
    )
    @settings(max_examples=200, deadline=None)
    def test_sigma_never_grows_without_dynamics(
        self, mu_a, mu_b, sig_a, sig_b, result
    ):
        params = TrueSkillParams(tau=0.0)
        a, b = trueskill_update(
            Rating(mu_a, sig_a), Rating(mu_b, sig_b), result, params
        )
        assert 0 < a.sigma <= sig_a
        assert 0 < b.sigma <= sig_b

    def test_rejects_unknown_result(self):
        with pytest.raises(ValueError):
            trueskill_update(Rating(), Rating(), "tie")

    def test_param_validation(self):
        with pytest.raises(ValueError):
            TrueSkillParams(beta=0.0)
        with pytest.raises(ValueError):
            TrueSkillParams(tau=-0.1)
        with pytest.raises(ValueError):
            TrueSkillParams(draw_probability=1.0)
        with pytest.raises(ValueError):
            Rating(25.0, 0.0)
