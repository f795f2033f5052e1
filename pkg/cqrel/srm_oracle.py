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
Square-root-measurement decoding of explicit codebooks and Monte Carlo
verification of the coding bounds.

A codeword u = (i_1, ..., i_n) is sent as the product state
|psi_{i_1}> x ... x |psi_{i_n}>. Inner products of product states are
products of letter overlaps, so a codebook is fully described by its M x M
Gram matrix and no d^n dimensional vector is ever built (except by
`gram_operator_trace_sqrt`, which exists to cross-check that shortcut).
"""

import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from logging import getLogger
from typing import List

import numpy as np

from cqrel import conf
from cqrel.channel import ChannelSpec
from cqrel.errors import (
    CapExceeded,
    DimensionTooLarge,
    DomainError,
    LengthMismatch,
    RepresentationUnavailable,
    ValidationError,
)
from cqrel.exponents import ExponentProfile
from cqrel.hermitian import clamp_eigenvalues, eig_hermitian, psd_sqrt
from cqrel.metrics import codebooks_decoded, inequality_violations, verification_runs

log = getLogger(__name__)

# Slack for the deterministic per-code inequalities.
INEQUALITY_SLACK = 1e-9
# Overlaps at or below this count as orthogonal codewords.
ZERO_OVERLAP = 1e-15
# Largest Gram operator gram_operator_trace_sqrt diagonalizes.
MAX_OPERATOR_DIM = 4096


@dataclass(frozen=True, eq=False)
class Codebook:
    """
    M words of length n over the channel alphabet, one word per row.
    Duplicate words are allowed.
    """

    words: np.ndarray
    channel: ChannelSpec

    def __post_init__(self):
        words = np.array(self.words, dtype=np.int64, ndmin=2)
        if words.ndim != 2 or words.shape[0] < 1 or words.shape[1] < 1:
            raise ValidationError("A codebook needs at least one word of length >= 1")
        if words.min() < 0 or words.max() >= self.channel.alphabet_size:
            raise ValidationError(
                "Codebook letters must lie in 0..%d" % (self.channel.alphabet_size - 1)
            )
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @property
    def M(self):
        return self.words.shape[0]

    @property
    def n(self):
        return self.words.shape[1]


@dataclass(frozen=True, eq=False)
class CodeGram:
    """Gram matrix of the codeword states, Gamma_kl = <psi_{u^k}|psi_{u^l}>."""

    matrix: np.ndarray

    @property
    def M(self):
        return self.matrix.shape[0]


@dataclass
class DecodingResult:
    per_word_error: np.ndarray
    average: float
    max: float
    gram_bound: float
    clamped: np.ndarray = field(default_factory=lambda: np.zeros(0))


def product_overlap(u, v, ch):
    """
    <psi_u|psi_v> = prod_k G_{u_k v_k} for two words of equal length.

    :raises LengthMismatch: if the words differ in length.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise LengthMismatch(
            "Words differ in length: %d and %d" % (u.size, v.size)
        )
    a = ch.alphabet_size
    if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= a):
        raise ValidationError("Letters must lie in 0..%d" % (a - 1))
    return complex(np.prod(ch.gram[u, v]))


def code_gram(cb):
    """Builds the codebook Gram matrix position by position."""
    gram = cb.channel.gram
    matrix = np.ones((cb.M, cb.M), dtype=complex)
    for column in cb.words.T:
        matrix *= gram[np.ix_(column, column)]
    matrix = (matrix + matrix.conj().T) / 2
    np.fill_diagonal(matrix, 1.0)
    return CodeGram(matrix)


def srm_decode(g):
    """
    Error probabilities of the square-root measurement.

    The success amplitude of word k is the diagonal entry (Gamma^{1/2})_kk,
    so lambda_k = 1 - (Gamma^{1/2})_kk^2. The gram bound is
    (2/M) (M - Tr Gamma^{1/2}), which dominates the average error.

    :raises NotPSD: if Gamma has an eigenvalue below the clamping window.
    """
    if g.M == 1:
        return DecodingResult(np.zeros(1), 0.0, 0.0, 0.0)
    root = psd_sqrt(g.matrix)
    diagonal = np.real(np.diag(root.matrix))
    per_word = np.clip(1.0 - diagonal**2, 0.0, 1.0)
    M = g.M
    return DecodingResult(
        per_word_error=per_word,
        average=math.fsum(per_word) / M,
        max=float(per_word.max()),
        gram_bound=2.0 * math.fsum(1.0 - diagonal) / M,
        clamped=root.clamped,
    )


def max_offdiagonal_overlap(g):
    """max over u != u' of |Gamma_uu'|; 0 for a single word."""
    if g.M < 2:
        return 0.0
    overlaps = np.abs(g.matrix)
    np.fill_diagonal(overlaps, 0.0)
    return min(1.0, float(overlaps.max()))


def helstrom_pair_lower(g):
    """
    (1/2)[1 - sqrt(1 - max |Gamma_uu'|^2)], the minimum error of telling
    apart the two least distinguishable codewords. Lower-bounds the maximal
    error of any decision rule.
    """
    overlap = max_offdiagonal_overlap(g)
    return 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - overlap * overlap)))


def helstrom_quarter_lower(g):
    overlap = max_offdiagonal_overlap(g)
    return 0.25 * overlap * overlap


def union_bounds(g):
    """sum over i != k of |Gamma_ik|^2, for every k."""
    squared = np.abs(g.matrix) ** 2
    np.fill_diagonal(squared, 0.0)
    return squared.sum(axis=1)


def pairwise_union_bound(g, k):
    if not 0 <= k < g.M:
        raise ValidationError("Codeword index %r out of range 0..%d" % (k, g.M - 1))
    return float(union_bounds(g)[k])


def code_zero_rate_estimate(g, n):
    """
    -(2/n) ln max |Gamma_uu'|, the per-code estimate of the zero-rate
    exponent; infinite when all codewords are orthogonal.
    """
    if n < 1:
        raise DomainError("Block length must be positive, got %r" % n)
    overlap = max_offdiagonal_overlap(g)
    if overlap <= ZERO_OVERLAP:
        return math.inf
    return -2.0 / n * math.log(overlap) + 0.0


def gram_operator_trace_sqrt(cb):
    """
    Tr G^{1/2} of the Gram operator G = sum_u |psi_u><psi_u| built on the
    full d^n dimensional space.

    :raises RepresentationUnavailable: for Gram-only channels.
    :raises DimensionTooLarge: if d^n exceeds 4096.
    """
    ch = cb.channel
    if not ch.has_states:
        raise RepresentationUnavailable("The Gram operator needs state vectors")
    if ch.dim**cb.n > MAX_OPERATOR_DIM:
        raise DimensionTooLarge(
            "Gram operator dimension %d^%d exceeds %d"
            % (ch.dim, cb.n, MAX_OPERATOR_DIM)
        )
    states = np.array([reduce(np.kron, ch.vectors[word]) for word in cb.words])
    operator = states.T @ states.conj()
    eigenvalues, _ = eig_hermitian((operator + operator.conj().T) / 2)
    eigenvalues, _ = clamp_eigenvalues(eigenvalues)
    return math.fsum(np.sqrt(eigenvalues))


#
# Random codebooks
#


def _generator(seed, index):
    """Counter-based stream for sample `index` of the run keyed by `seed`."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    )


def sample_codebook(ch, prior, M, n, seed, index):
    """
    Draws M words of length n with letters i.i.d. from `prior`.

    The codebook depends only on (seed, index): each sample index owns its
    own Philox stream, so codebooks are identical for any worker count.
    """
    if seed is None:
        raise ValidationError("Sampling codebooks needs an explicit seed")
    if M < 1 or n < 1:
        raise DomainError("Need M >= 1 and n >= 1, got M=%r, n=%r" % (M, n))
    prior = ch.prior_or_default(prior)
    cdf = np.cumsum(prior.weights)
    cdf[-1] = 1.0
    uniforms = _generator(seed, index).random((M, n))
    words = np.searchsorted(cdf, uniforms, side="right")
    return Codebook(words, ch)


#
# Verification runs
#

BoundRow = namedtuple("BoundRow", ["s", "rhs", "passed"])


@dataclass
class Violations:
    """Per-code deterministic inequality violations."""

    eq6: int = 0
    union: int = 0
    helstrom: int = 0

    @property
    def total(self):
        return self.eq6 + self.union + self.helstrom


@dataclass
class RandomCodingReport:
    channel_alphabet: int
    prior: List[float]
    codewords: int
    n: int
    samples: int
    seed: int
    mean_error: float
    stderr: float
    max_error: float
    margin: float
    bounds: List[BoundRow]
    best_rhs: float
    violations: Violations
    passed: bool
    kind: str = "random"


@dataclass
class ExpurgationReport:
    channel_alphabet: int
    prior: List[float]
    codewords: int
    ensemble_codewords: int
    n: int
    samples: int
    seed: int
    r: float
    mean_error_power: float
    threshold: float
    fraction_clean: float
    best_kept_max: float
    worst_kept_max: float
    expurgated_rhs: float
    violations: Violations
    passed: bool
    kind: str = "expurgation"


SampleOutcome = namedtuple(
    "SampleOutcome", ["result", "eq6", "union", "helstrom"]
)


def check_inequalities(g, result=None):
    """
    Decodes `g` (unless `result` is given) and checks the three per-code
    inequalities.

    :return: SampleOutcome with one flag per violated inequality.
    """
    if result is None:
        result = srm_decode(g)
    eq6 = result.average > result.gram_bound + INEQUALITY_SLACK
    union = bool(np.any(result.per_word_error > union_bounds(g) + INEQUALITY_SLACK))
    helstrom = g.M >= 2 and result.max < helstrom_pair_lower(g) - INEQUALITY_SLACK
    return SampleOutcome(result, eq6, union, helstrom)


def _check_caps(M, samples):
    if M > conf.max_codewords:
        raise CapExceeded(
            "%d codewords exceed the limit of %d" % (M, conf.max_codewords)
        )
    if samples < 1:
        raise DomainError("Need at least one sample")
    if samples > conf.max_samples:
        raise CapExceeded(
            "%d samples exceed the limit of %d" % (samples, conf.max_samples)
        )


def _run_samples(ch, prior, M, n, samples, seed, threads):
    def run(index):
        cb = sample_codebook(ch, prior, M, n, seed, index)
        return check_inequalities(code_gram(cb))

    if threads is None:
        threads = conf.threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            outcomes = list(executor.map(run, range(samples)))
    else:
        outcomes = [run(index) for index in range(samples)]

    violations = Violations(
        eq6=sum(o.eq6 for o in outcomes),
        union=sum(o.union for o in outcomes),
        helstrom=sum(o.helstrom for o in outcomes),
    )
    codebooks_decoded.inc(samples)
    for check in ("eq6", "union", "helstrom"):
        count = getattr(violations, check)
        if count:
            inequality_violations.labels(check=check).inc(count)
            log.warning("%d codebooks violate the %s inequality", count, check)
    return outcomes, violations


def verify_random_coding(
    ch, prior, M, n, samples, seed, s_grid, margin=None, threads=None
):
    """
    Compares the empirical mean SRM error of random codebooks with the
    random-coding bound 2 (M-1)^s (Tr S^{1+s})^n on every s of `s_grid`.

    A row passes when mean <= rhs + margin * stderr. The run passes when all
    rows pass and no codebook violates a per-code inequality.

    :raises CapExceeded: before any sampling, if M or samples are too large.
    """
    _check_caps(M, samples)
    if seed is None:
        raise ValidationError("Verification runs need an explicit seed")
    if margin is None:
        margin = conf.stat_margin
    prior = ch.prior_or_default(prior)
    profile = ExponentProfile(ch, prior)
    s_grid = [float(s) for s in s_grid]
    if not s_grid:
        raise DomainError("The s-grid is empty")
    log.info(
        "Random-coding verification: M=%d, n=%d, samples=%d, seed=%d",
        M,
        n,
        samples,
        seed,
    )

    outcomes, violations = _run_samples(ch, prior, M, n, samples, seed, threads)
    averages = [o.result.average for o in outcomes]
    mean = math.fsum(averages) / samples
    if samples > 1:
        variance = math.fsum((x - mean) ** 2 for x in averages) / (samples - 1)
    else:
        variance = 0.0
    stderr = math.sqrt(variance / samples)

    bounds = []
    for s in s_grid:
        rhs = profile.random_coding_rhs(M, n, s)
        bounds.append(BoundRow(s, rhs, mean <= rhs + margin * stderr))
    passed = violations.total == 0 and all(row.passed for row in bounds)
    verification_runs.labels(kind="random", outcome="pass" if passed else "fail").inc()

    return RandomCodingReport(
        channel_alphabet=ch.alphabet_size,
        prior=prior.tolist(),
        codewords=M,
        n=n,
        samples=samples,
        seed=seed,
        mean_error=mean,
        stderr=stderr,
        max_error=max(o.result.max for o in outcomes),
        margin=margin,
        bounds=bounds,
        best_rhs=min(row.rhs for row in bounds),
        violations=violations,
        passed=passed,
    )


def verify_expurgation(ch, prior, M, n, samples, seed, r=1.0, threads=None):
    """
    Expurgation experiment: sample codes of M' = 2M - 1 words, keep the M
    words with the smallest SRM error and check how often every kept word
    satisfies lambda_k <= (2 mean(lambda^r))^{1/r}, the mean running over all
    words of all samples.

    The best kept maximum is also compared with the expurgated bound
    (4 (M-1) A(1/r)^n)^{1/r}; that comparison is vacuous when the bound is
    1 or more.
    """
    if not 0.0 < r <= 1.0:
        raise DomainError("r must lie in (0, 1], got %r" % r)
    ensemble = 2 * M - 1
    _check_caps(ensemble, samples)
    if seed is None:
        raise ValidationError("Verification runs need an explicit seed")
    prior = ch.prior_or_default(prior)
    profile = ExponentProfile(ch, prior)
    log.info(
        "Expurgation verification: M=%d (M'=%d), n=%d, samples=%d, seed=%d, r=%g",
        M,
        ensemble,
        n,
        samples,
        seed,
        r,
    )

    outcomes, violations = _run_samples(ch, prior, ensemble, n, samples, seed, threads)
    mean_power = math.fsum(
        math.fsum(o.result.per_word_error**r) for o in outcomes
    ) / (samples * ensemble)
    threshold = (2.0 * mean_power) ** (1.0 / r)
    kept_max = [float(np.sort(o.result.per_word_error)[M - 1]) for o in outcomes]
    fraction_clean = sum(k <= threshold + INEQUALITY_SLACK for k in kept_max) / samples

    rhs = profile.expurgated_rhs(M, n, 1.0 / r)
    best_kept_max = min(kept_max)
    passed = (
        violations.total == 0
        and fraction_clean > 0
        and (rhs >= 1.0 or best_kept_max <= rhs + INEQUALITY_SLACK)
    )
    verification_runs.labels(
        kind="expurgation", outcome="pass" if passed else "fail"
    ).inc()

    return ExpurgationReport(
        channel_alphabet=ch.alphabet_size,
        prior=prior.tolist(),
        codewords=M,
        ensemble_codewords=ensemble,
        n=n,
        samples=samples,
        seed=seed,
        r=r,
        mean_error_power=mean_power,
        threshold=threshold,
        fraction_clean=fraction_clean,
        best_kept_max=best_kept_max,
        worst_kept_max=max(kept_max),
        expurgated_rhs=rhs,
        violations=violations,
        passed=passed,
    )


def decode_codebook(cb):
    """Gram matrix and SRM decoding of an explicit codebook in one step."""
    return srm_decode(code_gram(cb))
