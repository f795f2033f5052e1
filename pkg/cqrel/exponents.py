# -*- coding: utf-8 -*-
# Copyright (c) 2026  The cqrel developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
Error exponents of pure-state channels.

Two families of functions of the exponent parameter s drive everything:

    mu(pi, s)       = -ln sum_j lambda_j^{1+s}                  0 <= s <= 1
    mu_tilde(pi, s) = -s ln sum_ik pi_i pi_k |G_ik|^{2/s}        s >= 1

where lambda_j are the eigenvalues of the averaged state. The random-coding
exponent is E_r(pi, R) = max_s [mu(pi, s) - sR] over [0, 1], the expurgated
exponent E_ex(pi, R) = max_s [mu_tilde(pi, s) - sR] over s >= 1. Both are
evaluated piecewise: a linear piece at s = 1 and a curved piece where the
derivative in s equals R, found by bisection (the derivatives are monotone
because both functions are concave).

Rates and exponents are in nats. Infinite exponents are plain float
infinities.
"""

import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from logging import getLogger
from typing import List

import numpy as np

from cqrel import conf
from cqrel.channel import ChannelSpec, Prior, entropy, spectrum
from cqrel.errors import DomainError, UnboundedParameter
from cqrel.optimize import optimize_simplex, solve_monotone

log = getLogger(__name__)

# Eigenvalues at or below this are left out of the power sums.
EIGEN_FLOOR = 1e-15
# Overlaps with |G_ik| at or below this count as orthogonal.
ZERO_OVERLAP = 1e-15
# Ties between E_r and E_ex closer than this are reported as E_r regions.
TIE_TOL = 1e-12

REGION_R_LINEAR = "r-linear"
REGION_R_CURVED = "r-curved"
REGION_R_ZERO = "r-zero"
REGION_EX_CURVED = "ex-curved"
REGION_EX_LINEAR = "ex-linear"
REGION_EX_ZERO = "ex-zero"
# Tags a curve point can carry. REGION_R_ZERO is returned by e_r alone; on a
# curve a vanishing E_r is tagged by the expurgated side.
CURVE_REGIONS = (
    REGION_R_LINEAR,
    REGION_R_CURVED,
    REGION_EX_CURVED,
    REGION_EX_LINEAR,
    REGION_EX_ZERO,
)

ORDERING_GENERIC = "generic"
ORDERING_NO_LINEAR_PIECE = "no-linear-piece"
ORDERING_DEGENERATE = "degenerate"

BoundPoint = namedtuple(
    "BoundPoint", ["value", "s_star", "region", "at_limit"], defaults=(False,)
)
BoundPoint.__doc__ = """Exponent at one rate: value, optimal s, region tag.

`at_limit` marks expurgated values whose optimal s lies beyond the s-search
cap; the value reported is then the zero-rate limit."""

ZeroRate = namedtuple("ZeroRate", ["value", "prior", "witness"])


@dataclass
class RegionReport:
    mu1: float
    mu_prime1: float
    mut_prime1: float
    mut1: float
    capacity_at_prior: float
    ordering: str


CurvePoint = namedtuple(
    "CurvePoint", ["R", "e_r", "e_ex", "region", "e_ex_at_limit"], defaults=(False,)
)
CurvePoint.__doc__ = """One curve sample.

`e_ex_at_limit` marks rates R > 0 below the s-search resolution, where E_ex
is reported as its finite zero-rate limit. Such points may break the
discrete convexity of the E_ex column."""


@dataclass
class ExponentCurve:
    points: List[CurvePoint] = field(default_factory=list)
    envelope: bool = False

    @property
    def rates(self):
        return np.array([p.R for p in self.points])

    @property
    def e_r(self):
        return np.array([p.e_r for p in self.points])

    @property
    def e_ex(self):
        return np.array([p.e_ex for p in self.points])


def _check_s(s, lower):
    if not s >= lower:
        raise DomainError("s must be at least %g, got %r" % (lower, s))


class ExponentProfile(object):
    """
    Every per-prior quantity of a channel.

    The spectrum of the averaged state and the pairwise overlap weights are
    computed once; all functions of s and R are then cheap.
    """

    def __init__(self, ch, prior=None):
        self.channel = ch
        self.prior = ch.prior_or_default(prior)
        self.spectrum = spectrum(ch, self.prior)

        lam = self.spectrum.eigenvalues
        self._lam = lam[lam > EIGEN_FLOOR]
        self._log_lam = np.log(self._lam)

        weights = np.outer(self.prior.weights, self.prior.weights)
        overlaps = np.abs(ch.gram)
        mask = weights > 0
        self._w = weights[mask]
        self._overlap = overlaps[mask]
        self._sq = self._overlap**2
        self._orthogonal = self._overlap <= ZERO_OVERLAP
        # 0 ln 0 = 0: orthogonal pairs contribute nothing to log sums.
        self._log_sq = np.where(
            self._orthogonal, 0.0, np.log(np.where(self._orthogonal, 1.0, self._sq))
        )

    # -- random coding ---------------------------------------------------

    def trace_power(self, s):
        """Tr S^{1+s} = sum_j lambda_j^{1+s}."""
        return float(np.sum(self._lam ** (1.0 + s)))

    def mu(self, s):
        _check_s(s, 0.0)
        if s == 0:
            return 0.0
        return -math.log(self.trace_power(s))

    def mu_derivatives(self, s):
        """
        First and second derivatives of mu in s.

        The second derivative is minus the variance of ln lambda under the
        tilted distribution lambda^{1+s} / Tr S^{1+s}.
        """
        _check_s(s, 0.0)
        p = self._lam ** (1.0 + s)
        z = np.sum(p)
        m1 = np.sum(p * self._log_lam)
        m2 = np.sum(p * self._log_lam**2)
        mu_prime = float(-m1 / z)
        mu_second = float(-(m2 * z - m1 * m1) / (z * z))
        return mu_prime, min(0.0, mu_second)

    def mu_prime(self, s):
        return self.mu_derivatives(s)[0]

    def entropy(self):
        return entropy(self.spectrum)

    def capacity_lower_ratio(self, s):
        """mu(s) / s; tends to the entropy of the averaged state as s -> 0+."""
        if not 0.0 < s <= 1.0:
            raise DomainError("s must lie in (0, 1], got %r" % s)
        return self.mu(s) / s

    def random_coding_rhs(self, M, n, s):
        """2 (M-1)^s (Tr S^{1+s})^n, the bound on the mean SRM error."""
        _check_codebook(M, n)
        if not 0.0 <= s <= 1.0:
            raise DomainError("s must lie in [0, 1], got %r" % s)
        return 2.0 * float(M - 1) ** s * self.trace_power(s) ** n

    def e_r(self, R):
        """
        E_r(pi, R) = max over s in [0, 1] of mu(s) - sR.

        :return: BoundPoint with region r-linear, r-curved or r-zero. The
            r-zero tag never reaches a curve, see CURVE_REGIONS.
        """
        if R < 0:
            raise DomainError("Rate must be nonnegative, got %r" % R)
        mu_prime1 = self.mu_prime(1.0)
        if R <= mu_prime1:
            return BoundPoint(max(0.0, self.mu(1.0) - R), 1.0, REGION_R_LINEAR)
        if R >= self.mu_prime(0.0):
            return BoundPoint(0.0, 0.0, REGION_R_ZERO)
        s_r = solve_monotone(self.mu_prime, 0.0, 1.0, R)
        return BoundPoint(max(0.0, self.mu(s_r) - s_r * R), s_r, REGION_R_CURVED)

    # -- expurgation -----------------------------------------------------

    def overlap_sum(self, s):
        """sum_ik pi_i pi_k |G_ik|^{2/s}."""
        return float(np.sum(self._w * self._sq ** (1.0 / s)))

    def mu_tilde(self, s):
        _check_s(s, 1.0)
        return -s * math.log(self.overlap_sum(s))

    def mu_tilde_derivative(self, s):
        """
        d/ds mu_tilde = -ln A(s) + sum pi_i pi_k |G_ik|^{2/s} ln|G_ik|^2 / (s A(s))
        with A(s) the overlap sum.
        """
        _check_s(s, 1.0)
        powered = self._sq ** (1.0 / s)
        a = np.sum(self._w * powered)
        b = np.sum(self._w * powered * self._log_sq)
        return float(-math.log(a) + b / (s * a))

    def mu_tilde_inf(self):
        """
        -sum_ik pi_i pi_k ln|G_ik|^2, the limit of mu_tilde as s -> infinity;
        infinite when two letters of positive weight are orthogonal.
        """
        if np.any(self._orthogonal):
            return math.inf
        return float(-np.sum(self._w * self._log_sq)) + 0.0

    def expurgated_rhs(self, M, n, s):
        """(4 (M-1) A(s)^n)^s, the bound on the maximal error of the expurgated code."""
        _check_codebook(M, n)
        _check_s(s, 1.0)
        return (4.0 * (M - 1) * self.overlap_sum(s) ** n) ** s

    def e_ex(self, R, strict=False, s_cap=None):
        """
        E_ex(pi, R) = max over s >= 1 of mu_tilde(s) - sR.

        R <= 0 is the R -> +0 limit query and returns mu_tilde_inf. When the
        optimal s lies beyond `s_cap` the zero-rate limit is reported with
        `at_limit` set, or UnboundedParameter is raised if `strict`.
        """
        if s_cap is None:
            s_cap = conf.s_cap
        if R <= 0:
            return BoundPoint(self.mu_tilde_inf(), math.inf, REGION_EX_CURVED, True)

        mut1 = self.mu_tilde(1.0)
        if R >= mut1:
            return BoundPoint(0.0, 1.0, REGION_EX_ZERO)
        if R >= self.mu_tilde_derivative(1.0):
            return BoundPoint(mut1 - R, 1.0, REGION_EX_LINEAR)

        if self.mu_tilde_derivative(s_cap) > R:
            limit = self.mu_tilde_inf()
            if math.isinf(limit):
                return BoundPoint(math.inf, math.inf, REGION_EX_CURVED, True)
            if strict:
                raise UnboundedParameter(
                    "Rate %.17g is below the resolution of the s-search "
                    "(s_cap = %g)" % (R, s_cap)
                )
            log.debug("Rate %.17g below s-search resolution, reporting limit", R)
            return BoundPoint(limit, math.inf, REGION_EX_CURVED, True)

        s_r = solve_monotone(self.mu_tilde_derivative, 1.0, s_cap, R)
        return BoundPoint(self.mu_tilde(s_r) - s_r * R, s_r, REGION_EX_CURVED)

    def e_ex_finite_n(self, R, n):
        """Expurgated exponent with the finite-block rate shift ln 4 / n."""
        _check_codebook(1, n)
        return self.e_ex(R + math.log(4.0) / n)

    def region_report(self):
        mu1 = self.mu(1.0)
        mu_prime1 = self.mu_prime(1.0)
        mut1 = self.mu_tilde(1.0)
        mut_prime1 = self.mu_tilde_derivative(1.0)
        if abs(mut_prime1 - mu_prime1) <= TIE_TOL and abs(mut1 - mut_prime1) <= TIE_TOL:
            ordering = ORDERING_DEGENERATE
        elif mut_prime1 <= mu_prime1 + TIE_TOL:
            ordering = ORDERING_GENERIC
        else:
            ordering = ORDERING_NO_LINEAR_PIECE
        return RegionReport(
            mu1=mu1,
            mu_prime1=mu_prime1,
            mut_prime1=mut_prime1,
            mut1=mut1,
            capacity_at_prior=self.mu_prime(0.0),
            ordering=ordering,
        )


def _check_codebook(M, n):
    if int(M) != M or M < 1:
        raise DomainError("Number of codewords must be a positive integer, got %r" % M)
    if int(n) != n or n < 1:
        raise DomainError("Block length must be a positive integer, got %r" % n)


#
# Module-level operations on (channel, prior)
#


def mu(ch, prior, s):
    return ExponentProfile(ch, prior).mu(s)


def mu_derivatives(ch, prior, s):
    """:return: tuple (mu_prime, mu_second)"""
    return ExponentProfile(ch, prior).mu_derivatives(s)


def mu_tilde(ch, prior, s):
    return ExponentProfile(ch, prior).mu_tilde(s)


def mu_tilde_derivative(ch, prior, s):
    return ExponentProfile(ch, prior).mu_tilde_derivative(s)


def mu_tilde_inf(ch, prior):
    return ExponentProfile(ch, prior).mu_tilde_inf()


def capacity_lower_ratio(ch, prior, s):
    return ExponentProfile(ch, prior).capacity_lower_ratio(s)


def random_coding_rhs(ch, prior, M, n, s):
    return ExponentProfile(ch, prior).random_coding_rhs(M, n, s)


def expurgated_rhs(ch, prior, M, n, s):
    return ExponentProfile(ch, prior).expurgated_rhs(M, n, s)


def e_r_at(ch, prior, R):
    return ExponentProfile(ch, prior).e_r(R)


def e_ex_at(ch, prior, R, strict=False):
    return ExponentProfile(ch, prior).e_ex(R, strict=strict)


def e_ex_finite_n(ch, prior, R, n):
    return ExponentProfile(ch, prior).e_ex_finite_n(R, n)


def region_report(ch, prior):
    return ExponentProfile(ch, prior).region_report()


#
# Optimization over the prior
#


def _as_prior(point):
    return Prior.from_weights(point, normalize=True)


def capacity(ch, grid_step=None, threads=None):
    """
    C = max over priors of the entropy of the averaged state.

    :return: SimplexOptimum; `value` is C in nats and `point` the
        maximizing prior.
    """

    def objective(point):
        return entropy(spectrum(ch, _as_prior(point)))

    return optimize_simplex(objective, ch.alphabet_size, "maximize", grid_step, threads)


def _envelope(ch, R, bound, grid_step=None):
    def objective(point):
        return getattr(ExponentProfile(ch, _as_prior(point)), bound)(R).value

    return optimize_simplex(objective, ch.alphabet_size, "maximize", grid_step)


def e_r_envelope(ch, R, grid_step=None):
    """max over priors of E_r(pi, R)."""
    return _envelope(ch, R, "e_r", grid_step).value


def e_ex_envelope(ch, R, grid_step=None):
    """max over priors of E_ex(pi, R); optimized independently of E_r."""
    return _envelope(ch, R, "e_ex", grid_step).value


def zero_rate_exponent(ch, grid_step=None, threads=None):
    """
    E(+0) = -min over priors of sum_ik pi_i pi_k ln|G_ik|^2.

    :return: ZeroRate(value, prior, witness). For channels with an
        orthogonal pair the value is infinite, `prior` is None and
        `witness` names the first orthogonal pair.
    """
    overlaps = np.abs(ch.gram)
    a = ch.alphabet_size
    for i in range(a):
        for k in range(i + 1, a):
            if overlaps[i, k] <= ZERO_OVERLAP:
                return ZeroRate(math.inf, None, (i, k))

    def objective(point):
        return ExponentProfile(ch, _as_prior(point)).mu_tilde_inf()

    optimum = optimize_simplex(objective, a, "maximize", grid_step, threads)
    return ZeroRate(optimum.value, _as_prior(optimum.point), None)


#
# Rate curves
#


def _curve_point(R, e_r, e_ex):
    if e_ex.value > e_r.value + TIE_TOL or e_r.region == REGION_R_ZERO:
        region = e_ex.region
    elif e_r.value <= 0.0 and e_ex.value <= 0.0:
        region = REGION_EX_ZERO
    else:
        region = e_r.region
    at_limit = bool(e_ex.at_limit and R > 0 and math.isfinite(e_ex.value))
    return CurvePoint(float(R), e_r.value, e_ex.value, region, at_limit)


def curve(ch, prior, r_min, r_max, points, envelope=False, threads=None):
    """
    Samples E_r and E_ex on a uniform rate grid.

    :param prior: fixed prior, ignored when `envelope` is set.
    :param bool envelope: maximize each bound over the prior at every rate.
    :return: ExponentCurve; each point is tagged with the region of the
        larger bound (E_r on ties).
    """
    if not 0.0 <= r_min < r_max:
        raise DomainError("Need 0 <= r_min < r_max, got %r, %r" % (r_min, r_max))
    if points < 2:
        raise DomainError("Need at least two points, got %r" % points)
    if threads is None:
        threads = conf.threads
    rates = np.linspace(r_min, r_max, points)

    if envelope:

        def evaluate(R):
            best_r = _envelope(ch, R, "e_r")
            best_ex = _envelope(ch, R, "e_ex")
            e_r = ExponentProfile(ch, _as_prior(best_r.point)).e_r(R)
            e_ex = ExponentProfile(ch, _as_prior(best_ex.point)).e_ex(R)
            return _curve_point(R, e_r, e_ex)

    else:
        profile = ExponentProfile(ch, prior)

        def evaluate(R):
            return _curve_point(R, profile.e_r(R), profile.e_ex(R))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            result = list(executor.map(evaluate, rates))
    else:
        result = [evaluate(R) for R in rates]
    return ExponentCurve(result, envelope)


#
# Binary channel closed forms: two pure states with overlap epsilon
#


def _check_epsilon(epsilon):
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1), got %r" % epsilon)


def binary_eigenvalues(epsilon, p):
    """
    Eigenvalues of (1-p)|psi_0><psi_0| + p|psi_1><psi_1| when
    |<psi_0|psi_1>| = epsilon.
    """
    p = np.asarray(p, dtype=float)
    root = np.sqrt(np.maximum(0.0, 1.0 - 4.0 * (1.0 - epsilon**2) * p * (1.0 - p)))
    return (1.0 - root) / 2.0, (1.0 + root) / 2.0


def binary_mu(epsilon, s):
    """mu(1/2, s)."""
    low, high = (1.0 - epsilon) / 2.0, (1.0 + epsilon) / 2.0
    return -np.log(low ** (1.0 + s) + high ** (1.0 + s))


def binary_mu_tilde(epsilon, s):
    """mu_tilde(1/2, s)."""
    s = np.asarray(s, dtype=float)
    return -s * np.log((1.0 + epsilon ** (2.0 / s)) / 2.0)


def binary_scalars(epsilon):
    """
    The closed-form scalars of the binary channel at the optimal prior 1/2.

    :return: dict with mu1, mut_prime1, mu_prime1, capacity and
        zero_rate_exponent.
    """
    _check_epsilon(epsilon)
    lo, hi = (1.0 - epsilon) / 2.0, (1.0 + epsilon) / 2.0
    eps2 = epsilon**2
    mu1 = -math.log((1.0 + eps2) / 2.0)
    return {
        "mu1": mu1,
        "mut_prime1": mu1 + eps2 * math.log(eps2) / (1.0 + eps2),
        "mu_prime1": -(
            (1.0 - epsilon) ** 2 * math.log(lo) + (1.0 + epsilon) ** 2 * math.log(hi)
        )
        / (2.0 * (1.0 + eps2)),
        "capacity": -(lo * math.log(lo) + hi * math.log(hi)),
        "zero_rate_exponent": -math.log(epsilon),
    }


@dataclass
class BinaryReport:
    epsilon: float
    scalars: dict
    prior_grid: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    s_grid: np.ndarray
    mu: np.ndarray
    st_grid: np.ndarray
    mu_tilde: np.ndarray


def binary_report(epsilon, prior_points=101, s_points=101, st_points=101, s_cap=None):
    """
    Closed forms of the binary channel, never via eigendecomposition.

    :raises DomainError: for epsilon outside (0, 1).
    """
    _check_epsilon(epsilon)
    if s_cap is None:
        s_cap = conf.s_cap
    prior_grid = np.linspace(0.0, 1.0, prior_points)
    lambda1, lambda2 = binary_eigenvalues(epsilon, prior_grid)
    s_grid = np.linspace(0.0, 1.0, s_points)
    st_grid = np.linspace(1.0, s_cap, st_points)
    return BinaryReport(
        epsilon=epsilon,
        scalars=binary_scalars(epsilon),
        prior_grid=prior_grid,
        lambda1=lambda1,
        lambda2=lambda2,
        s_grid=s_grid,
        mu=binary_mu(epsilon, s_grid),
        st_grid=st_grid,
        mu_tilde=binary_mu_tilde(epsilon, st_grid),
    )


def binary_channel(epsilon):
    """Gram-only binary channel with real overlap epsilon and uniform prior."""
    _check_epsilon(epsilon)
    return ChannelSpec.from_gram([[1.0, epsilon], [epsilon, 1.0]])


def binary_cross_check(epsilon):
    """
    Largest deviation between the closed-form scalars and the generic
    eigendecomposition path at the uniform prior.
    """
    profile = ExponentProfile(binary_channel(epsilon), Prior.uniform(2))
    closed = binary_scalars(epsilon)
    generic = {
        "mu1": profile.mu(1.0),
        "mut_prime1": profile.mu_tilde_derivative(1.0),
        "mu_prime1": profile.mu_prime(1.0),
        "capacity": profile.entropy(),
        "zero_rate_exponent": profile.mu_tilde_inf(),
    }
    return max(abs(closed[key] - generic[key]) for key in closed)


MonotonicityCheck = namedtuple(
    "MonotonicityCheck", ["reference", "capacity", "reference_capacity", "consistent"]
)


def binary_capacity_monotonicity(epsilon, reference=0.5):
    """
    Compares C(epsilon) with C(reference); consistent when the larger overlap
    has the smaller capacity.
    """
    value = binary_scalars(epsilon)["capacity"]
    reference_value = binary_scalars(reference)["capacity"]
    if epsilon > reference:
        consistent = value < reference_value
    elif epsilon < reference:
        consistent = value > reference_value
    else:
        consistent = value == reference_value
    return MonotonicityCheck(reference, value, reference_value, consistent)
