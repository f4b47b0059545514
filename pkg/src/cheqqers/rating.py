"""Two-player TrueSkill updates in closed form.

A game result moves both players' skill estimates by moment-matching the
Gaussian prior against the win/draw truncation of the performance
difference.  Only the head-to-head case is covered, which keeps the whole
thing to a pair of correction functions and some arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

A_WINS = "a_wins"
B_WINS = "b_wins"
DRAW = "draw"

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# below this the cdf is within a few ulp of underflow, so the ratio
# pdf/cdf switches to its tail series
_TAIL_CUT = -30.0


@dataclass(frozen=True)
class Rating:
    mu: float = 25.0
    sigma: float = 25.0 / 3.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class TrueSkillParams:
    beta: float = 25.0 / 6.0
    tau: float = 25.0 / 300.0
    draw_probability: float = 0.10

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if not 0.0 <= self.draw_probability < 1.0:
            raise ValueError("draw_probability must lie in [0, 1)")

    def draw_margin(self) -> float:
        """Performance-difference magnitude that scores as a draw."""
        q = (1.0 + self.draw_probability) / 2.0
        return NormalDist().inv_cdf(q) * _SQRT2 * self.beta


def _pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) * _INV_SQRT_2PI


def _cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def _tail_ratio(x: float) -> float:
    # pdf(x)/cdf(x) for x << 0 via the Mills-ratio expansion; error is
    # O(x^-7), far inside tolerance at the cut
    u = -x
    s = 1.0 / (u * u)
    return u * (1.0 + s * (1.0 - s * (2.0 - 10.0 * s)))


def truncated_gaussian_moments(
    t: float, eps: float, is_draw: bool
) -> tuple[float, float]:
    """Mean shift v and variance-loss factor w of the truncated unit normal.

    ``t`` is the standardized mean difference (winner minus loser for a
    decisive game), ``eps`` the standardized draw margin.  Non-draw
    truncates to the tail above ``eps - t``; a draw truncates to the band
    between ``-eps - t`` and ``eps - t``.
    """
    if not is_draw:
        x = t - eps
        v = _tail_ratio(x) if x < _TAIL_CUT else _pdf(x) / _cdf(x)
        w = v * (v + x)
        return v, w
    # the band is symmetric in t up to the sign of v, so compute at |t|
    # and restore the sign; keeps player-swap behavior exact
    a = abs(t)
    lo = -eps - a
    hi = eps - a
    mass = _cdf(hi) - _cdf(lo)
    if mass < 1e-300:
        # drawing against all odds pins the estimate at the near edge of
        # the band, which for a > 0 is the upper one
        v = eps - a
        w = 1.0
    else:
        v = (_pdf(lo) - _pdf(hi)) / mass
        w = v * v + (hi * _pdf(hi) - lo * _pdf(lo)) / mass
    if t < 0:
        v = -v
    return v, w


def trueskill_update(
    ra: Rating,
    rb: Rating,
    result: str,
    params: TrueSkillParams = TrueSkillParams(),
) -> tuple[Rating, Rating]:
    """Post-game ratings for players a and b.

    ``result`` is one of A_WINS, B_WINS, DRAW.  Dynamics noise tau widens
    both priors before the update, so sigma can tick up slightly between
    evenly matched opponents but never beyond that term.
    """
    if result not in (A_WINS, B_WINS, DRAW):
        raise ValueError(f"unknown result {result!r}")
    va = ra.sigma * ra.sigma + params.tau * params.tau
    vb = rb.sigma * rb.sigma + params.tau * params.tau
    # grouping keeps c2 identical under player swap
    c2 = 2.0 * params.beta * params.beta + (va + vb)
    c = math.sqrt(c2)
    eps = params.draw_margin() / c

    if result == DRAW:
        t = (ra.mu - rb.mu) / c
        v, w = truncated_gaussian_moments(t, eps, True)
        sign_a = 1.0
    else:
        win_mu, lose_mu = (ra.mu, rb.mu) if result == A_WINS else (rb.mu, ra.mu)
        t = (win_mu - lose_mu) / c
        v, w = truncated_gaussian_moments(t, eps, False)
        sign_a = 1.0 if result == A_WINS else -1.0

    mu_a = ra.mu + sign_a * (va / c) * v
    mu_b = rb.mu - sign_a * (vb / c) * v
    sa2 = va * (1.0 - (va / c2) * w)
    sb2 = vb * (1.0 - (vb / c2) * w)
    return Rating(mu_a, math.sqrt(sa2)), Rating(mu_b, math.sqrt(sb2))
