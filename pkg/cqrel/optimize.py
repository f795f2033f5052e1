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
One-dimensional concave maximization, monotone root finding and
optimization over the probability simplex.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from logging import getLogger

import numpy as np
from scipy.optimize import minimize

from cqrel import conf
from cqrel.errors import BracketFailure, DimensionTooLarge, ValidationError

log = getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2
CONCAVITY_TOL = 1e-9


def _check_midpoint(x1, f1, x2, f2, x3, f3):
    """Raises BracketFailure if (x2, f2) lies below the chord of its neighbours."""
    chord = ((x3 - x2) * f1 + (x2 - x1) * f3) / (x3 - x1)
    scale = 1.0 + max(abs(f1), abs(f2), abs(f3))
    if f2 < chord - CONCAVITY_TOL * scale:
        raise BracketFailure(
            "Objective is not concave on [%.17g, %.17g]: f(%.17g) = %.17g is "
            "below the chord value %.17g" % (x1, x3, x2, f2, chord)
        )


def maximize_concave_1d(f, lo, hi, tol=None):
    """
    Golden-section search for the maximum of a concave function.

    :param callable f: real function, concave on [lo, hi].
    :param float tol: final interval width, defaults to ``conf.golden_tol``.
    :return: tuple (x_star, f_star). An endpoint is returned when the
        maximum sits there.
    :raises BracketFailure: if sampled values reveal non-concavity beyond
        1e-9.
    """
    if tol is None:
        tol = conf.golden_tol
    lo, hi = min(lo, hi), max(lo, hi)
    f_lo0, f_hi0 = f(lo), f(hi)
    h = hi - lo
    if h <= tol:
        return (lo, f_lo0) if f_lo0 >= f_hi0 else (hi, f_hi0)

    a, b = lo, hi
    fa, fb = f_lo0, f_hi0
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    fc = f(c)
    fd = f(d)

    while h > tol:
        _check_midpoint(a, fa, c, fc, d, fd)
        _check_midpoint(c, fc, d, fd, b, fb)
        if fc > fd:
            b, fb = d, fd
            d, fd = c, fc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            fc = f(c)
        else:
            a, fa = c, fc
            c, fc = d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)

    x_star, f_star = (c, fc) if fc >= fd else (d, fd)
    if f_lo0 >= f_star:
        x_star, f_star = lo, f_lo0
    if f_hi0 > f_star:
        x_star, f_star = hi, f_hi0
    return x_star, f_star


def solve_monotone(g, lo, hi, target, tol=None, xtol=None):
    """
    Bisection for g(x) = target with g monotone on [lo, hi].

    Stops when |g(x) - target| <= tol or the bracket is narrower than xtol.

    :raises BracketFailure: if target lies outside [g(lo), g(hi)].
    """
    if tol is None:
        tol = conf.root_tol
    if xtol is None:
        xtol = conf.root_xtol
    g_lo, g_hi = g(lo) - target, g(hi) - target
    if abs(g_lo) <= tol:
        return lo
    if abs(g_hi) <= tol:
        return hi
    if g_lo * g_hi > 0:
        raise BracketFailure(
            "Target %.17g is not bracketed by g(%.17g) and g(%.17g)"
            % (target, lo, hi)
        )
    while hi - lo > xtol:
        mid = lo + (hi - lo) / 2
        g_mid = g(mid) - target
        if abs(g_mid) <= tol:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return lo + (hi - lo) / 2


def project_to_simplex(x):
    """Euclidean projection of `x` onto the probability simplex."""
    x = np.asarray(x, dtype=float)
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    index = np.arange(1, x.size + 1)
    rho = np.nonzero(u - css / index > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(x - theta, 0.0)


def default_grid_step(a):
    if a <= 3:
        return conf.grid_step_small
    return conf.grid_step_large


def simplex_lattice(a, grid_step):
    """
    All points of the simplex with coordinates in multiples of `grid_step`,
    in lexicographic order of coordinates.

    :return: ndarray of shape (L, a).
    """
    if not 0 < grid_step <= 0.5:
        raise ValidationError("grid_step must lie in (0, 1/2], got %r" % grid_step)
    total = int(round(1.0 / grid_step))
    points = []

    def compose(prefix, remaining, slots):
        if slots == 1:
            points.append(prefix + [remaining])
            return
        for first in range(remaining + 1):
            compose(prefix + [first], remaining - first, slots - 1)

    compose([], total, a)
    return np.array(points, dtype=float) / total


@dataclass
class SimplexOptimum:
    """Result of optimize_simplex."""

    point: np.ndarray
    value: float
    grid_step: float
    lattice_size: int
    refined: bool


def _evaluate_all(objective, points, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(objective, points))
    return [objective(p) for p in points]


def _refine(score, start, grid_step, iterations, xtol):
    """
    Downhill-simplex descent of `score` (to be minimized) from the lattice
    point `start`, on the first a-1 coordinates with the point projected to
    the simplex.
    """
    a = start.size

    def lift(y):
        return project_to_simplex(np.append(y, 1.0 - np.sum(y)))

    y0 = start[:-1]
    vertices = [y0]
    for i in range(a - 1):
        vertex = y0.copy()
        vertex[i] += grid_step if vertex[i] + grid_step <= 1.0 else -grid_step
        vertices.append(vertex)

    result = minimize(
        lambda y: score(lift(y)),
        y0,
        method="Nelder-Mead",
        options={
            "maxiter": iterations,
            "xatol": xtol,
            "fatol": 1e-15,
            "initial_simplex": np.array(vertices),
        },
    )
    point = lift(result.x)
    return point / point.sum()


def optimize_simplex(objective, a, mode="maximize", grid_step=None, threads=None):
    """
    Optimizes `objective` over the probability simplex of dimension `a`.

    An exhaustive lattice scan at resolution `grid_step` is followed by
    downhill-simplex refinement from the ``conf.refine_top`` best lattice
    points. The refinement never returns a value worse than the best lattice
    point; ties between lattice points go to the lexicographically smallest.

    :param callable objective: maps an ndarray of length `a` (a point of
        the simplex) to a real number, possibly +/- infinity.
    :param str mode: "maximize" or "minimize".
    :return: SimplexOptimum.
    :raises DimensionTooLarge: for a > ``conf.max_alphabet``.
    """
    if mode not in ("maximize", "minimize"):
        raise ValidationError("mode must be maximize or minimize, got %r" % mode)
    if a > conf.max_alphabet:
        raise DimensionTooLarge(
            "Simplex optimization supports alphabets up to %d letters, got %d"
            % (conf.max_alphabet, a)
        )
    if a < 1:
        raise ValidationError("Alphabet size must be positive")
    if grid_step is None:
        grid_step = default_grid_step(a)
    if threads is None:
        threads = conf.threads
    sign = 1.0 if mode == "maximize" else -1.0

    def score(point):
        # Lower is better; NaN counts as worst.
        value = objective(point)
        if value is None or math.isnan(value):
            return math.inf
        return -sign * value

    if a == 1:
        point = np.ones(1)
        return SimplexOptimum(point, float(objective(point)), grid_step, 1, False)

    lattice = simplex_lattice(a, grid_step)
    scores = np.array(_evaluate_all(score, list(lattice), threads), dtype=float)
    # Stable sort keeps lexicographic order among equal scores.
    order = np.argsort(scores, kind="stable")
    best_point, best_score = lattice[order[0]], scores[order[0]]
    log.debug(
        "Lattice scan of %d points, best score %.17g at %s",
        len(lattice),
        best_score,
        best_point,
    )

    refined = False
    if math.isfinite(best_score):
        for index in order[: conf.refine_top]:
            if not math.isfinite(scores[index]):
                break
            candidate = _refine(
                score,
                lattice[index],
                grid_step,
                conf.refine_iterations,
                conf.refine_xtol,
            )
            candidate_score = score(candidate)
            if candidate_score < best_score:
                best_point, best_score = candidate, candidate_score
                refined = True

    if math.isfinite(best_score):
        value = -sign * best_score
    else:
        value = float(objective(best_point))
    return SimplexOptimum(
        np.array(best_point), float(value), grid_step, len(lattice), refined
    )
