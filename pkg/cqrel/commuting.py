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
Bounds for channels whose output operators commute.

Commuting density operators are diagonal in a common basis, so the channel
is a classical one given by transition probabilities (row i holds the
eigenvalues of S_i). The random-coding bound takes Gallager's form and the
expurgated bound the Bhattacharyya form. Operator versions of both
right-hand sides are provided to check that they reduce to the pure-state
bounds of `cqrel.exponents`.
"""

import math
from collections import namedtuple
from dataclasses import dataclass
from logging import getLogger
from typing import List, Optional

import numpy as np

from cqrel import conf
from cqrel.channel import Prior, as_prior, embed_states
from cqrel.errors import DomainError, ValidationError
from cqrel.exponents import ExponentProfile
from cqrel.hermitian import clamp_eigenvalues, eig_hermitian
from cqrel.optimize import maximize_concave_1d
from cqrel.schemas import ClassicalChannelFileSchema, parse_document

log = getLogger(__name__)

ROW_TOL = 1e-12

GridRow = namedtuple("GridRow", ["s", "rhs"])


@dataclass(frozen=True, eq=False)
class DiagonalChannel:
    """Classical channel; row i is the output distribution of letter i."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float, ndmin=2)
        if rows.ndim != 2 or rows.size == 0:
            raise ValidationError("Channel rows must form a non-empty a x d array")
        if not np.all(np.isfinite(rows)) or np.any(rows < 0):
            raise ValidationError("Transition probabilities must be nonnegative")
        sums = rows.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_TOL)
        if bad.size:
            raise ValidationError(
                "Row %d sums to %.17g, not 1" % (bad[0], sums[bad[0]])
            )
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def alphabet_size(self):
        return self.rows.shape[0]

    @property
    def output_size(self):
        return self.rows.shape[1]


def load_classical(document):
    """
    Parses a classical channel file.

    :return: tuple (DiagonalChannel, Prior or None)
    """
    data = parse_document(document, ClassicalChannelFileSchema())
    dc = DiagonalChannel(data["rows"])
    prior = data.get("prior")
    if prior is not None:
        prior = Prior(prior)
        if len(prior) != dc.alphabet_size:
            raise ValidationError(
                "Prior has %d weights but the channel has %d rows"
                % (len(prior), dc.alphabet_size)
            )
    return dc, prior


def load_classical_file(path):
    with open(path, "r") as f:
        return load_classical(f.read())


def _prior(dc, prior):
    if prior is None:
        return Prior.uniform(dc.alphabet_size)
    if not isinstance(prior, Prior):
        prior = Prior(prior)
    if len(prior) != dc.alphabet_size:
        raise ValidationError("Prior does not match the channel alphabet")
    return prior


def _check_codebook(M, n):
    if M < 1 or n < 1:
        raise DomainError("Need M >= 1 and n >= 1, got M=%r, n=%r" % (M, n))


#
# Random coding
#


def gallager_bracket(dc, prior, s):
    """sum_j [sum_i pi_i (lambda_j^i)^{1/(1+s)}]^{1+s}"""
    if s < 0:
        raise DomainError("s must be nonnegative, got %r" % s)
    weights = _prior(dc, prior).weights
    inner = weights @ dc.rows ** (1.0 / (1.0 + s))
    return float(np.sum(inner ** (1.0 + s)))


def gallager_e0(dc, prior, s):
    return -math.log(gallager_bracket(dc, prior, s))


def gallager_random_rhs(dc, prior, M, n, s):
    """(M-1)^s times the Gallager bracket to the n-th power."""
    _check_codebook(M, n)
    if not 0.0 <= s <= 1.0:
        raise DomainError("s must lie in [0, 1], got %r" % s)
    return float(M - 1) ** s * gallager_bracket(dc, prior, s) ** n


def classical_random_exponent(dc, prior, R):
    """
    max over s in [0, 1] of E0(s) - sR.

    :return: tuple (value, s_star)
    """
    if R < 0:
        raise DomainError("Rate must be nonnegative, got %r" % R)
    s_star, value = maximize_concave_1d(
        lambda s: gallager_e0(dc, prior, s) - s * R, 0.0, 1.0
    )
    return max(0.0, value), s_star


#
# Expurgation
#


def bhattacharyya(dc, i, k):
    """sum_j sqrt(lambda_j^i lambda_j^k)"""
    a = dc.alphabet_size
    if not (0 <= i < a and 0 <= k < a):
        raise ValidationError("Letter indices must lie in 0..%d" % (a - 1))
    return float(np.sum(np.sqrt(dc.rows[i] * dc.rows[k])))


def bhattacharyya_matrix(dc):
    root = np.sqrt(dc.rows)
    return np.clip(root @ root.T, 0.0, 1.0)


def _bhattacharyya_sum(coefficients, weights, s):
    return float(weights @ coefficients ** (1.0 / s) @ weights)


def bhattacharyya_exponent(dc, prior, s):
    """-s ln sum_ik pi_i pi_k B_ik^{1/s}"""
    if s < 1:
        raise DomainError("s must be at least 1, got %r" % s)
    weights = _prior(dc, prior).weights
    return -s * math.log(_bhattacharyya_sum(bhattacharyya_matrix(dc), weights, s))


def expurgated_classical_rhs(dc, prior, M, n, s):
    """(4 (M-1) [sum_ik pi_i pi_k B_ik^{1/s}]^n)^s"""
    _check_codebook(M, n)
    if s < 1:
        raise DomainError("s must be at least 1, got %r" % s)
    weights = _prior(dc, prior).weights
    inner = _bhattacharyya_sum(bhattacharyya_matrix(dc), weights, s)
    return (4.0 * (M - 1) * inner**n) ** s


def classical_expurgated_exponent(dc, prior, R, s_cap=None):
    """
    max over s in [1, s_cap] of Ex(s) - sR.

    :return: tuple (value, s_star)
    """
    if R < 0:
        raise DomainError("Rate must be nonnegative, got %r" % R)
    if s_cap is None:
        s_cap = conf.s_cap
    s_star, value = maximize_concave_1d(
        lambda s: bhattacharyya_exponent(dc, prior, s) - s * R, 1.0, s_cap
    )
    return max(0.0, value), s_star


#
# Grids
#


def tabulate(function, grid):
    """Evaluates `function` on every s of `grid` as GridRow(s, rhs)."""
    return [GridRow(float(s), function(float(s))) for s in grid]


def min_over_grid(rows):
    """The row with the smallest rhs; the first one on ties."""
    if not rows:
        raise DomainError("The s-grid is empty")
    return min(rows, key=lambda row: row.rhs)


#
# Operator forms
#


def _power(S, p):
    eigenvalues, eigenvectors = eig_hermitian(S)
    eigenvalues, _ = clamp_eigenvalues(eigenvalues)
    return (eigenvectors * eigenvalues**p) @ eigenvectors.conj().T


def projector_states(ch):
    """The density operators |psi_i><psi_i| of a pure-state channel."""
    return [np.outer(v, v.conj()) for v in embed_states(ch)]


def diagonal_states(dc):
    """The diagonal density operators of a classical channel."""
    return [np.diag(row).astype(complex) for row in dc.rows]


def gallager_operator_bracket(states, prior, s):
    """Tr[(sum_i pi_i S_i^{1/(1+s)})^{1+s}]"""
    weights = as_prior(prior, len(states)).weights
    mixture = sum(w * _power(S, 1.0 / (1.0 + s)) for w, S in zip(weights, states))
    return float(np.real(np.trace(_power(mixture, 1.0 + s))))


def operator_bhattacharyya(S_i, S_k):
    """Tr sqrt(S_i) sqrt(S_k)"""
    return float(np.real(np.trace(_power(S_i, 0.5) @ _power(S_k, 0.5))))


def operator_expurgated_rhs(states, prior, M, n, s):
    _check_codebook(M, n)
    weights = as_prior(prior, len(states)).weights
    a = len(states)
    coefficients = np.array(
        [
            [operator_bhattacharyya(states[i], states[k]) for k in range(a)]
            for i in range(a)
        ]
    )
    inner = _bhattacharyya_sum(np.clip(coefficients, 0.0, 1.0), weights, s)
    return (4.0 * (M - 1) * inner**n) ** s


def _relative(value, reference):
    return abs(value - reference) / max(1.0, abs(reference))


def pure_state_deviation(ch, prior, M, n, s_grid, sx_grid):
    """
    Largest deviation between the operator forms evaluated on the projectors
    of a pure-state channel and the pure-state bounds: the Gallager bracket
    against Tr S^{1+s}, the operator Bhattacharyya coefficients against
    |G_ik|^2, and the expurgated right-hand sides against each other
    (relative to max(1, value)).
    """
    prior = ch.prior_or_default(prior)
    profile = ExponentProfile(ch, prior)
    states = projector_states(ch)
    deviations = [
        abs(gallager_operator_bracket(states, prior, s) - profile.trace_power(s))
        for s in s_grid
    ]
    squared = np.abs(ch.gram) ** 2
    for i, S_i in enumerate(states):
        for k, S_k in enumerate(states):
            deviations.append(abs(operator_bhattacharyya(S_i, S_k) - squared[i, k]))
    for s in sx_grid:
        deviations.append(
            _relative(
                operator_expurgated_rhs(states, prior, M, n, s),
                profile.expurgated_rhs(M, n, s),
            )
        )
    deviation = max(deviations)
    log.debug("Pure-state cross-check deviation %.3e", deviation)
    return deviation


@dataclass
class ClassicalReport:
    codewords: int
    n: int
    prior: List[float]
    random_coding: List[GridRow]
    random_coding_min: GridRow
    expurgated: List[GridRow]
    expurgated_min: GridRow
    cross_check_deviation: Optional[float] = None


def classical_report(dc, prior, M, n, s_grid, sx_grid):
    """Both right-hand sides tabulated on their s-grids, with their minima."""
    prior = _prior(dc, prior)
    if any(not 0.0 < s <= 1.0 for s in s_grid):
        raise DomainError("Random-coding s-grid must lie in (0, 1]")
    if any(s < 1.0 for s in sx_grid):
        raise DomainError("Expurgation s-grid must lie in [1, inf)")
    random_coding = tabulate(lambda s: gallager_random_rhs(dc, prior, M, n, s), s_grid)
    expurgated = tabulate(
        lambda s: expurgated_classical_rhs(dc, prior, M, n, s), sx_grid
    )
    return ClassicalReport(
        codewords=M,
        n=n,
        prior=prior.tolist(),
        random_coding=random_coding,
        random_coding_min=min_over_grid(random_coding),
        expurgated=expurgated,
        expurgated_min=min_over_grid(expurgated),
    )
